#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "bogospec/gp.hpp"
#include "bogospec/interp.hpp"
#include "bogospec/quadrature.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

using RadialFnRef = std::function<double(double)>;

namespace detail {

// antiderivative F(t) = ∫_0^t τ b(τ) dτ; Hermite interpolation with the
// exact derivative t b(t) avoids end-condition error and survives the
// cancellation F(r+s) - F(|r-s|) at small s.
inline HermiteCurve antiderivative_t(const RadialFnRef& b, double t_max, int n = 6000) {
  std::vector<double> ts(n + 1), Fs(n + 1), dFs(n + 1);
  KahanSum acc;
  GaussLegendre gl(8);
  ts[0] = 0;
  Fs[0] = 0;
  dFs[0] = 0;
  for (int i = 1; i <= n; ++i) {
    double a = t_max * (i - 1) / n, bb = t_max * i / n;
    double mid = 0.5 * (a + bb), half = 0.5 * (bb - a);
    for (int k = 0; k < 8; ++k) {
      double t = mid + half * gl.x[k];
      acc.add(half * gl.w[k] * t * b(t));
    }
    ts[i] = bb;
    Fs[i] = acc.value();
    dFs[i] = bb * b(bb);
  }
  return HermiteCurve(ts, Fs, dFs);
}

}  // namespace detail

// C(s) = ∫ a(|x|) b(|x - s e_z|) dx for radial profiles; on the torus with
// constant profiles this is the constant a*b. Direct evaluation with an
// analytic derivative.
class CorrelationFn {
 public:
  static CorrelationFn constant(double c) {
    CorrelationFn f;
    f.const_ = true;
    f.c0_ = c;
    return f;
  }

  static CorrelationFn build(RadialFnRef a, RadialFnRef b, double r_hi) {
    CorrelationFn f;
    f.a_ = std::move(a);
    f.b_ = std::move(b);
    f.r_hi_ = r_hi;
    f.F_ = detail::antiderivative_t(f.b_, 2.5 * r_hi);
    f.rule_ = PanelRule(0.0, r_hi, 64, 8);
    // C(0) = 4π ∫ a b r^2 dr
    KahanSum s;
    for (size_t i = 0; i < f.rule_.x.size(); ++i) {
      double r = f.rule_.x[i];
      s.add(f.rule_.w[i] * 4.0 * pi * r * r * f.a_(r) * f.b_(r));
    }
    f.c0_ = s.value();
    return f;
  }

  double operator()(double s) const {
    if (const_ || s < 1e-9) return c0_;
    KahanSum acc;
    for (size_t i = 0; i < rule_.x.size(); ++i) {
      double r = rule_.x[i];
      double av = a_(r);
      if (av == 0.0) continue;
      acc.add(rule_.w[i] * r * av * (F_(r + s) - F_(std::abs(r - s))));
    }
    return 2.0 * pi / s * acc.value();
  }

  double deriv(double s) const {
    if (const_ || s < 1e-7) return 0.0;
    KahanSum acc;
    for (size_t i = 0; i < rule_.x.size(); ++i) {
      double r = rule_.x[i];
      double av = a_(r);
      if (av == 0.0) continue;
      double hi = r + s, lo = std::abs(r - s);
      // d/ds [F(r+s) - F(|r-s|)] = (r+s) b(r+s) + sign(r-s) |r-s| b(|r-s|)
      double term = hi * b_(hi) + ((r > s) ? 1.0 : -1.0) * lo * b_(lo);
      acc.add(rule_.w[i] * r * av * term);
    }
    return -(*this)(s) / s + 2.0 * pi / s * acc.value();
  }

  double at_zero() const { return c0_; }

 private:
  bool const_ = false;
  double c0_ = 0;
  double r_hi_ = 0;
  RadialFnRef a_, b_;
  HermiteCurve F_;
  PanelRule rule_;
};

// (g * h)(r) for a radial kernel g supported on [0, s_max] and a radial
// profile h; evaluated on a grid and splined. Box variant: the constant
// h * ∫g.
class ConvolvedFn {
 public:
  static ConvolvedFn constant(double c) {
    ConvolvedFn f;
    f.const_ = true;
    f.c0_ = c;
    return f;
  }

  // s_rule: quadrature for ∫ ds over the support of g (caller controls
  // grading/breakpoints); h sampled through its antiderivative spline.
  static ConvolvedFn build(const RadialFnRef& g, const PanelRule& s_rule,
                           const RadialFnRef& h, double r_hi, int r_points = 1600) {
    ConvolvedFn f;
    Spline F = detail::antiderivative_t(h, 2.5 * r_hi);
    std::vector<double> rs(r_points + 1), vals(r_points + 1);
    for (int i = 0; i <= r_points; ++i) {
      double r = r_hi * i / r_points;
      rs[i] = r;
      KahanSum acc;
      if (r < 1e-9) {
        for (size_t k = 0; k < s_rule.x.size(); ++k) {
          double s = s_rule.x[k];
          acc.add(s_rule.w[k] * 4.0 * pi * s * s * g(s) * h(s));
        }
        vals[i] = acc.value();
      } else {
        for (size_t k = 0; k < s_rule.x.size(); ++k) {
          double s = s_rule.x[k];
          acc.add(s_rule.w[k] * s * g(s) * (F(r + s) - F(std::abs(r - s))));
        }
        vals[i] = 2.0 * pi / r * acc.value();
      }
    }
    f.spline_ = Spline(rs, vals);
    return f;
  }

  double operator()(double r) const { return const_ ? c0_ : spline_(r); }
  double deriv(double r) const { return const_ ? 0.0 : spline_.deriv(r); }

 private:
  bool const_ = false;
  double c0_ = 0;
  Spline spline_;
};

// Shared evaluation environment for the semi-analytic kernel integrals:
// condensate profile, trap, inner products, correlation builders. The box
// backend uses constant profiles on the unit torus.
struct SemiEnv {
  bool box = false;
  double r_hi = 16.0;
  double a0 = 0, eps_gp = 0, e_gp = 0, q4 = 1;  // q4 = ∫ φ^4
  std::function<double(double)> phi, dphi, vext;

  static SemiEnv from(const GPState& st, const TrapPotential& trap, double r_hi) {
    SemiEnv e;
    e.a0 = st.a0;
    e.eps_gp = st.eps_gp;
    e.e_gp = st.e_gp;
    e.q4 = st.quartic_norm;
    if (st.backend == Backend::PlaneWave) {
      e.box = true;
      e.phi = [](double) { return 1.0; };
      e.dphi = [](double) { return 0.0; };
      e.vext = [](double) { return 0.0; };
    } else {
      e.r_hi = r_hi;
      GPState copy = st;
      e.phi = [copy](double r) { return copy.phi(r); };
      e.dphi = [copy](double r) { return copy.dphi(r); };
      TrapPotential t = trap;
      e.vext = [t](double r) { return t(r); };
    }
    return e;
  }

  // mean-field shift W = V_ext + 8π a0 φ^2 − ε_GP (so H_GP = -Δ + W)
  double mfW(double r) const { return vext(r) + 8.0 * pi * a0 * sq(phi(r)) - eps_gp; }

  // Δ(φ^2) via the minimizer equation: Δφ = W φ  =>  Δφ^2 = 2(W φ^2 + |∇φ|^2)
  double lap_phi_sq(double r) const {
    return 2.0 * (mfW(r) * sq(phi(r)) + sq(dphi(r)));
  }

  // ∫ f g dx over the ambient space (radial measure or unit torus)
  double inner(const RadialFnRef& f, const RadialFnRef& g) const {
    if (box) return f(0.0) * g(0.0);
    return integrate_gl([&](double r) { return 4.0 * pi * r * r * f(r) * g(r); }, 0.0,
                        r_hi, 64, 8);
  }

  CorrelationFn corr(const RadialFnRef& a, const RadialFnRef& b) const {
    if (box) return CorrelationFn::constant(a(0.0) * b(0.0));
    return CorrelationFn::build(a, b, r_hi);
  }

  ConvolvedFn convolve(const RadialFnRef& g, const PanelRule& s_rule,
                       const RadialFnRef& h) const {
    if (box) {
      KahanSum acc;
      for (size_t k = 0; k < s_rule.x.size(); ++k) {
        double s = s_rule.x[k];
        acc.add(s_rule.w[k] * 4.0 * pi * s * s * g(s));
      }
      return ConvolvedFn::constant(acc.value() * h(0.0));
    }
    return ConvolvedFn::build(g, s_rule, h, r_hi);
  }
};

}  // namespace bogospec
