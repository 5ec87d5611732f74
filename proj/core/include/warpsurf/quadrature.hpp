#pragma once

#include <functional>

namespace warpsurf {

/// Adaptive Simpson integration of f over [a, b] (a > b allowed, giving the
/// negated integral). Throws QuadratureFail on non-finite samples or when the
/// recursion depth is exhausted before the tolerance is met.
double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double relTol = 1e-10,
                       int maxDepth = 40);

}  // namespace warpsurf
