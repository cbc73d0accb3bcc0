// Built-in issues and experiment presets.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jurylab/support.hpp"

namespace jurylab::presets {

/// The running linear-support instance: s_A(c) = 0.1 + c/2 against a constant
/// 40% bloc of core supporters, pivot point at c = 0.6, Polynomial model with
/// q = 1, alpha = 1, beta = 1/2.
inline Issue example1(PivotalityModel model = PolynomialPpm{1.0, 1.0, 0.5}) {
    return Issue::make(SupportFunction::from_points({{0.0, 0.1}, {1.0, 0.6}}),
                       SupportFunction::from_points({{0.0, 0.4}, {1.0, 0.4}}),
                       std::move(model));
}

/// Minimal issue with full-participation margin eps: linear cost spread on
/// both sides, s_A(1) = (1+eps)/2, s_B(1) = (1-eps)/2.
inline Issue issue_with_margin(double eps) {
    return Issue::make(
        SupportFunction::from_points({{0.0, 0.0}, {1.0, (1.0 + eps) / 2.0}}),
        SupportFunction::from_points({{0.0, 0.0}, {1.0, (1.0 - eps) / 2.0}}),
        PolynomialPpm{1.0, 1.0, 0.5});
}

}  // namespace jurylab::presets
