#include "warpsurf/quadrature.hpp"

#include <cmath>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double absTol;

  double sample(double x) const {
    const double v = f(x);
    if (!std::isfinite(v)) fail(ErrorCode::QuadratureFail, "non-finite integrand");
    return v;
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = sample(lm), frm = sample(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) fail(ErrorCode::QuadratureFail, "adaptive Simpson depth exhausted");
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double relTol, int maxDepth) {
  if (a == b) return 0.0;
  if (a > b) return -adaptiveSimpson(f, b, a, relTol, maxDepth);
  Simpson s{f, 0.0};
  const double fa = s.sample(a), fb = s.sample(b), fm = s.sample(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Scale the tolerance by a coarse magnitude estimate of the integral.
  double scale = 0.0;
  for (int i = 0; i <= 16; ++i) scale += std::abs(s.sample(a + (b - a) * i / 16.0));
  scale *= (b - a) / 17.0;
  const double tol = relTol * std::max(scale, 1e-300);
  return s.recurse(a, b, fa, fm, fb, whole, tol, maxDepth);
}

}  // namespace warpsurf
