#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "bogospec/quadrature.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

// Compactly supported, nonnegative radial interaction profile V(r).
// Two representations: closed-form soft ball {v0 on r<=R} and tabulated
// samples with piecewise-linear interpolation (preserves nonnegativity).
// rescaled(N) applies the short-range scaling V -> N^2 V(N r).
class RadialPotential {
 public:
  static RadialPotential soft_ball(double v0, double R) {
    if (v0 < 0 || R <= 0) throw ValidationError("soft ball requires v0 >= 0, R > 0");
    RadialPotential p;
    p.kind_ = Kind::SoftBall;
    p.v0_ = v0;
    p.base_support_ = R;
    return p;
  }

  static RadialPotential zero() { return soft_ball(0.0, 1.0); }

  static RadialPotential tabulated(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 2)
      throw ValidationError("tabulated potential needs matching r/v samples");
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) throw ValidationError("tabulated potential has a negative sample");
      if (i > 0 && r[i] <= r[i - 1]) throw ValidationError("tabulated radii must increase");
    }
    RadialPotential p;
    p.kind_ = Kind::Tabulated;
    p.r_ = std::move(r);
    p.v_ = std::move(v);
    p.base_support_ = p.r_.back();
    return p;
  }

  RadialPotential rescaled(double N) const {
    if (N <= 0) throw ValidationError("rescaling factor must be positive");
    RadialPotential p(*this);
    p.amp_ *= N * N;
    p.len_ *= N;
    return p;
  }

  double operator()(double r) const {
    double t = r * len_;
    if (t > base_support_) return 0.0;
    double base = (kind_ == Kind::SoftBall) ? v0_ : eval_table(t);
    return amp_ * base;
  }

  double support_radius() const { return base_support_ / len_; }
  bool is_zero() const { return kind_ == Kind::SoftBall && v0_ == 0.0; }

  // moment(k) = 4π ∫_0^∞ V(r) r^(2+k) dr; moment(0) = ∫_{R^3} V.
  double moment(int k) const {
    KahanSum s;
    for (auto [lo, hi] : segments()) {
      s.add(integrate_gl([&](double r) { return (*this)(r)*std::pow(r, 2.0 + k); }, lo, hi,
                         4, 12));
    }
    return 4.0 * pi * s.value();
  }

  // Radial Fourier transform V̂(q) = (4π/q) ∫ V(r) r sin(qr) dr; V̂(0) = ∫V.
  double fourier(double q) const {
    double R = support_radius();
    if (std::abs(q) * R < 1e-8) return moment(0);
    KahanSum s;
    for (auto [lo, hi] : segments()) {
      int panels = std::max(2, static_cast<int>(std::abs(q) * (hi - lo) / 3.0) + 2);
      s.add(integrate_gl([&](double r) { return (*this)(r)*r * std::sin(q * r); }, lo, hi,
                         panels, 10));
    }
    return 4.0 * pi / q * s.value();
  }

  // Segment edges between kinks of V, in the scaled radial variable.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    if (kind_ == Kind::SoftBall) {
      b.push_back(base_support_ / len_);
    } else {
      for (double ri : r_) b.push_back(ri / len_);
    }
    return b;
  }

 private:
  enum class Kind { SoftBall, Tabulated };
  Kind kind_ = Kind::SoftBall;
  double v0_ = 0.0;
  double base_support_ = 1.0;
  double amp_ = 1.0, len_ = 1.0;
  std::vector<double> r_, v_;

  std::vector<std::pair<double, double>> segments() const {
    std::vector<std::pair<double, double>> seg;
    double prev = 0.0;
    for (double b : breakpoints()) {
      if (b > prev) seg.emplace_back(prev, b);
      prev = b;
    }
    if (seg.empty()) seg.emplace_back(0.0, support_radius());
    return seg;
  }

  double eval_table(double t) const {
    if (t >= r_.back()) return 0.0;
    if (t <= r_.front()) return v_.front();
    auto it = std::upper_bound(r_.begin(), r_.end(), t);
    size_t i = static_cast<size_t>(it - r_.begin()) - 1;
    double f = (t - r_[i]) / (r_[i + 1] - r_[i]);
    return v_[i] * (1 - f) + v_[i + 1] * f;
  }
};

}  // namespace bogospec
