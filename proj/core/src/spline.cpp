#include "warpsurf/spline.hpp"

#include <algorithm>
#include <cmath>

#include "warpsurf/errors.hpp"

namespace warpsurf {

namespace {

void requireIncreasing(const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) fail(ErrorCode::BadInput, "non-finite abscissa");
    if (i > 0 && !(x[i] > x[i - 1])) fail(ErrorCode::BadInput, "abscissae must be strictly increasing");
  }
}

std::size_t findSegment(const std::vector<double>& x, double at) {
  if (at <= x.front()) return 0;
  if (at >= x.back()) return x.size() - 2;
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  return static_cast<std::size_t>(it - x.begin()) - 1;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) fail(ErrorCode::BadInput, "sample length mismatch");
  if (x_.size() < 4) fail(ErrorCode::BadInput, "at least 4 samples are required");
  requireIncreasing(x_);
  for (double v : y_) {
    if (!std::isfinite(v)) fail(ErrorCode::BadInput, "non-finite sample value");
  }

  const std::size_t n = x_.size();
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

  // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} are eliminated through the
  // not-a-knot conditions, which keeps the system tridiagonal.
  const std::size_t m = n - 2;
  std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    sub[k] = h[i - 1];
    diag[k] = 2.0 * (h[i - 1] + h[i]);
    sup[k] = h[i];
    rhs[k] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
  }
  {
    const double h0 = h[0], h1 = h[1];
    diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
    sup[0] = (h1 * h1 - h0 * h0) / h1;
    sub[0] = 0.0;
  }
  {
    const std::size_t k = m - 1;
    const double ha = h[n - 3], hb = h[n - 2];
    sub[k] = (ha * ha - hb * hb) / ha;
    diag[k] = (ha + hb) * (2.0 * ha + hb) / ha;
    sup[k] = 0.0;
  }
  // Thomas algorithm.
  for (std::size_t k = 1; k < m; ++k) {
    const double w = sub[k] / diag[k - 1];
    diag[k] -= w * sup[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  std::vector<double> inner(m);
  inner[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    inner[k] = (rhs[k] - sup[k] * inner[k + 1]) / diag[k];
  }

  m_.assign(n, 0.0);
  for (std::size_t k = 0; k < m; ++k) m_[k + 1] = inner[k];
  m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
  m_[n - 1] = ((h[n - 3] + h[n - 2]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
}

std::size_t CubicSpline::segment(double x) const { return findSegment(x_, x); }

Jet1D CubicSpline::eval(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = 1.0 - a;
  const double mi = m_[i], mj = m_[i + 1];
  const double value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
  const double d1 = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi + (3.0 * b * b - 1.0) / 6.0 * h * mj;
  const double d2 = a * mi + b * mj;
  const double d3 = (mj - mi) / h;
  return {value, d1, d2, d3};
}

QuinticHermite::QuinticHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy,
                               std::vector<double> d2y)
    : x_(std::move(x)) {
  const std::size_t n = x_.size();
  if (n < 2 || y.size() != n || dy.size() != n || d2y.size() != n) {
    fail(ErrorCode::BadInput, "quintic Hermite needs matching node arrays of length >= 2");
  }
  requireIncreasing(x_);
  coeffs_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    const double c0 = y[i];
    const double c1 = h * dy[i];
    const double c2 = 0.5 * h * h * d2y[i];
    const double a = y[i + 1] - c0 - c1 - c2;
    const double b = h * dy[i + 1] - c1 - 2.0 * c2;
    const double c = h * h * d2y[i + 1] - 2.0 * c2;
    coeffs_[i] = {c0, c1, c2, 10.0 * a - 4.0 * b + 0.5 * c, -15.0 * a + 7.0 * b - c, 6.0 * a - 3.0 * b + 0.5 * c};
  }
}

Jet1D QuinticHermite::eval(double x) const {
  const std::size_t i = findSegment(x_, x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const auto& c = coeffs_[i];
  const double p = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  const double p1 = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
  const double p2 = 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
  const double p3 = 6.0 * c[3] + t * (24.0 * c[4] + t * 60.0 * c[5]);
  return {p, p1 / h, p2 / (h * h), p3 / (h * h * h)};
}

}  // namespace warpsurf
