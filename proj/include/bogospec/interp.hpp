#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bogospec/types.hpp"

namespace bogospec {

// Natural cubic spline on a strictly increasing grid; value and first
// derivative evaluation, constant extrapolation outside the grid.
class Spline {
 public:
  Spline() = default;
  Spline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3) throw ValidationError("spline needs >= 3 points");
    m_.assign(n, 0.0);
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = 1.0;
    b[n - 1] = 1.0;
    for (size_t i = 1; i + 1 < n; ++i) {
      double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      d[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    for (size_t i = 1; i < n; ++i) {
      double m = a[i] / b[i - 1];
      b[i] -= m * c[i - 1];
      d[i] -= m * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
  }

  double operator()(double t) const {
    size_t i = locate(t);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
  }

  double deriv(double t) const {
    size_t i = locate(t);
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3 * B * B - 1) * m_[i + 1] - (3 * A * A - 1) * m_[i]) * h / 6.0;
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  size_t locate(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    size_t i = static_cast<size_t>(std::max<ptrdiff_t>(1, it - x_.begin())) - 1;
    return std::min(i, x_.size() - 2);
  }

  std::vector<double> x_, y_, m_;
};

// Piecewise cubic Hermite interpolation from (x, y, y') samples, e.g. dense
// output of an ODE integrator. Exact derivative of the interpolant.
class HermiteCurve {
 public:
  HermiteCurve() = default;
  HermiteCurve(std::vector<double> x, std::vector<double> y, std::vector<double> yp)
      : x_(std::move(x)), y_(std::move(y)), yp_(std::move(yp)) {}

  double operator()(double t) const {
    size_t i = locate(t);
    double h = x_[i + 1] - x_[i], s = (t - x_[i]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * y_[i] + h10 * h * yp_[i] + h01 * y_[i + 1] + h11 * h * yp_[i + 1];
  }

  double deriv(double t) const {
    size_t i = locate(t);
    double h = x_[i + 1] - x_[i], s = (t - x_[i]) / h;
    double d00 = 6 * s * (s - 1) / h, d10 = (3 * s - 1) * (s - 1);
    double d01 = -6 * s * (s - 1) / h, d11 = s * (3 * s - 2);
    return d00 * y_[i] + d10 * yp_[i] + d01 * y_[i + 1] + d11 * yp_[i + 1];
  }

  bool empty() const { return x_.empty(); }
  double x_max() const { return x_.back(); }

 private:
  size_t locate(double t) const {
    t = std::clamp(t, x_.front(), x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    size_t i = static_cast<size_t>(std::max<ptrdiff_t>(1, it - x_.begin())) - 1;
    return std::min(i, x_.size() - 2);
  }

  std::vector<double> x_, y_, yp_;
};

}  // namespace bogospec
