#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bogospec/interp.hpp"
#include "bogospec/quadrature.hpp"
#include "bogospec/radial_potential.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

namespace detail {

// Dense solution of the radial equation u'' = q(t) u with u(0)=0, u'(0)=1,
// integrated with fixed-step RK4 per smooth segment of q.
struct RadialODE {
  HermiteCurve u;   // samples (t, u, u')
  HermiteCurve up;  // samples (t, u', u'')
  double t_end = 0, u_end = 0, up_end = 0;
};

inline RadialODE integrate_u(const std::function<double(double)>& q,
                             const std::vector<double>& edges, double h_target) {
  std::vector<double> ts, us, vs, as;
  double t = 0.0, u = 0.0, v = 1.0;
  ts.push_back(t);
  us.push_back(u);
  vs.push_back(v);
  as.push_back(0.0);  // q(0)*u(0) = 0
  for (size_t s = 0; s + 1 < edges.size(); ++s) {
    double lo = edges[s], hi = edges[s + 1];
    int n = std::max(32, static_cast<int>(std::ceil((hi - lo) / h_target)));
    double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
      double t0 = lo + i * h;
      // RK4 on (u, v)
      auto f = [&](double tt, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = q(tt) * uu;
      };
      double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      f(t0, u, v, k1u, k1v);
      f(t0 + h / 2, u + h / 2 * k1u, v + h / 2 * k1v, k2u, k2v);
      f(t0 + h / 2, u + h / 2 * k2u, v + h / 2 * k2v, k3u, k3v);
      f(t0 + h, u + h * k3u, v + h * k3v, k4u, k4v);
      u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      t = t0 + h;
      ts.push_back(t);
      us.push_back(u);
      vs.push_back(v);
      as.push_back(q(t) * u);
    }
  }
  RadialODE r;
  r.u = HermiteCurve(ts, us, vs);
  r.up = HermiteCurve(ts, vs, as);
  r.t_end = t;
  r.u_end = u;
  r.up_end = v;
  return r;
}

inline std::vector<double> segment_edges(const RadialPotential& V, double t_end) {
  std::vector<double> e{0.0};
  for (double b : V.breakpoints())
    if (b > 1e-14 && b < t_end - 1e-14) e.push_back(b);
  e.push_back(t_end);
  return e;
}

}  // namespace detail

// Solution of the zero-energy problem (-Δ + V/2) f = 0, f -> 1 at infinity.
// u = r f solves u'' = (V/2) u; outside the support u = c (r - a0).
struct ScatteringSolution {
  double a0 = 0;
  double born_integral = 0;  // (1/8π) ∫V
  double r_support = 0;
  double norm_c = 1;  // exterior slope of u
  double residual = 0;
  detail::RadialODE ode;

  double f(double r) const {
    if (r >= r_support) return 1.0 - a0 / std::max(r, 1e-300);
    if (r < 1e-12) return ode.up(0.0) / norm_c;  // u ~ u'(0) r
    return ode.u(r) / (norm_c * r);
  }
};

inline ScatteringSolution solve_zero_energy(const RadialPotential& V, double r_max,
                                            double tol = 1e-10) {
  if (tol <= 0) throw ValidationError("solve_zero_energy: tol must be > 0");
  double Rv = V.support_radius();
  if (r_max <= Rv) throw ValidationError("solve_zero_energy: r_max must exceed the support of V");

  ScatteringSolution s;
  s.born_integral = V.moment(0) / (8.0 * pi);
  s.r_support = Rv;
  if (V.is_zero()) {
    s.a0 = 0;
    s.norm_c = 1;
    std::vector<double> e{0.0, r_max};
    s.ode = detail::integrate_u([](double) { return 0.0; }, e, r_max / 64.0);
    return s;
  }

  auto q = [&](double t) { return 0.5 * V(t); };
  auto edges = detail::segment_edges(V, Rv);
  double h = std::pow(tol / 100.0, 0.25) * std::max(1.0, Rv);

  auto extract_a0 = [&](double hh) {
    auto ode = detail::integrate_u(q, edges, hh);
    if (ode.up_end <= 0 || ode.u_end <= 0)
      throw NumericalError("solve_zero_energy: non-convergent radial solution (node or sign loss)");
    return std::make_pair(ode, Rv - ode.u_end / ode.up_end);
  };
  auto [ode1, a1] = extract_a0(h);
  auto [ode2, a2] = extract_a0(h / 2);
  s.residual = std::abs(a1 - a2) / std::max(1.0, std::abs(a2));
  if (s.residual > tol)
    throw NumericalError("solve_zero_energy: step-halving residual above tolerance");
  s.ode = std::move(ode2);
  s.a0 = a2;
  s.norm_c = s.ode.up_end;  // matches exterior u' = c
  return s;
}

// Lowest Neumann eigenpair of -Δ + V/2 on the ball of radius B, radial
// sector, normalized so f(B) = 1; w = 1 - f vanishes outside the ball.
struct NeumannSolution {
  double ball_radius = 0;
  double lambda = 0;
  double r_support = 0;  // support of V
  double norm = 1;       // u -> u * norm gives f(B)=1
  double alpha = 0, beta = 0, k = 0;  // exterior u = alpha sin(kt) + beta cos(kt)
  bool trivial = false;               // V == 0: f = 1 identically
  detail::RadialODE ode;              // interior on [0, R_V]
  RadialPotential V;

  struct Moments {
    double Vf = 0, Vw = 0, Vw2 = 0, ball_w = 0, ball_w2 = 0, Vf2 = 0;
  } moments;

  double u_raw(double t) const {
    if (t <= r_support) return ode.u(t);
    return alpha * std::sin(k * t) + beta * std::cos(k * t);
  }
  double up_raw(double t) const {
    if (t <= r_support) return ode.up(t);
    return k * (alpha * std::cos(k * t) - beta * std::sin(k * t));
  }

  double f(double t) const {
    if (trivial || t >= ball_radius) return 1.0;
    if (t < 1e-12) return norm * ode.up(0.0);
    return norm * u_raw(t) / t;
  }
  double fp(double t) const {
    if (trivial || t >= ball_radius) return 0.0;
    if (t < 1e-10) return 0.0;
    return norm * (up_raw(t) / t - u_raw(t) / (t * t));
  }
  double w(double t) const { return 1.0 - f(t); }
  double wp(double t) const { return -fp(t); }

  // sup over the grid of w(t)(t+1) and |w'(t)|(t^2+1): empirical constants
  // for the pointwise decay bounds.
  std::pair<double, double> fitted_bound_constants() const {
    double c0 = 0, c1 = 0;
    for (int i = 0; i <= 4000; ++i) {
      double t = ball_radius * i / 4000.0;
      c0 = std::max(c0, w(t) * (t + 1.0));
      c1 = std::max(c1, std::abs(wp(t)) * (t * t + 1.0));
    }
    return {c0, c1};
  }

  // 4π ∫ g(t) t^(2+extra) dt over [0, B] for profile g built from f, w, V.
  double profile_moment(const std::function<double(double)>& g, int extra,
                        bool interaction_range_only) const {
    double hi = interaction_range_only ? r_support : ball_radius;
    KahanSum s;
    auto edges = detail::segment_edges(V, hi);
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      int panels = interaction_range_only
                       ? 12
                       : std::max(12, static_cast<int>((edges[i + 1] - edges[i]) / 2.0));
      s.add(integrate_gl(
          [&](double t) { return g(t) * std::pow(t, 2.0 + extra); }, edges[i], edges[i + 1],
          panels, 12));
    }
    return 4.0 * pi * s.value();
  }
};

inline NeumannSolution solve_neumann(const RadialPotential& V, double ball_radius,
                                     double tol = 1e-10) {
  double Rv = V.support_radius();
  if (ball_radius <= Rv)
    throw ValidationError("solve_neumann: ball radius must exceed the support of V");

  NeumannSolution n;
  n.ball_radius = ball_radius;
  n.r_support = Rv;
  n.V = V;

  if (V.is_zero()) {
    // constant is the Neumann ground state
    n.trivial = true;
    n.lambda = 0;
    n.moments = {};
    return n;
  }

  auto edges = detail::segment_edges(V, Rv);
  double h = std::pow(tol / 100.0, 0.25) * std::max(1.0, Rv);
  double B = ball_radius;

  // interior solve at eigenvalue trial, then exterior trig continuation
  auto solve_at = [&](double lam) {
    auto q = [&](double t) { return 0.5 * V(t) - lam; };
    return detail::integrate_u(q, edges, h);
  };
  // Neumann mismatch g(lam) = B u'(B) - u(B); ground state is its first root.
  auto mismatch = [&](double lam, detail::RadialODE* keep = nullptr) {
    auto ode = solve_at(lam);
    double kk = std::sqrt(std::max(lam, 1e-300));
    double uR = ode.u_end, upR = ode.up_end;
    double al, be;
    if (lam <= 0) {
      al = upR;  // u = al*t + be on the outside when lam = 0
      be = uR - upR * Rv;
      if (keep) *keep = std::move(ode);
      return B * al - (al * B + be);  // = -be
    }
    double skr = std::sin(kk * Rv), ckr = std::cos(kk * Rv);
    al = uR * skr + (upR / kk) * ckr;
    be = uR * ckr - (upR / kk) * skr;
    double uB = al * std::sin(kk * B) + be * std::cos(kk * B);
    double upB = kk * (al * std::cos(kk * B) - be * std::sin(kk * B));
    if (keep) *keep = std::move(ode);
    return B * upB - uB;
  };

  // bracket the first root; the scale of lambda is a0-ish / B^3
  double scale = std::max(V.moment(0) / (8.0 * pi), 1e-8) / (B * B * B);
  double lo = 0.0, glo = mismatch(0.0);
  double step = 0.05 * scale, hi = step, ghi = glo;
  bool bracketed = false;
  for (int it = 0; it < 400; ++it) {
    ghi = mismatch(hi);
    if (glo * ghi <= 0) {
      bracketed = true;
      break;
    }
    lo = hi;
    glo = ghi;
    step *= 1.6;
    hi += step;
  }
  if (!bracketed) throw NumericalError("solve_neumann: failed to bracket the lowest eigenvalue");

  // bisection + secant refinement
  for (int it = 0; it < 200 && (hi - lo) > tol * std::max(1e-12, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = mismatch(mid);
    if (glo * gm <= 0) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  double lam = 0.5 * (lo + hi);
  detail::RadialODE ode;
  mismatch(lam, &ode);
  n.lambda = lam;
  n.ode = std::move(ode);
  n.k = std::sqrt(lam);
  double uR = n.ode.u_end, upR = n.ode.up_end;
  double skr = std::sin(n.k * Rv), ckr = std::cos(n.k * Rv);
  n.alpha = uR * skr + (upR / n.k) * ckr;
  n.beta = uR * ckr - (upR / n.k) * skr;
  double uB = n.alpha * std::sin(n.k * B) + n.beta * std::cos(n.k * B);
  if (uB <= 0) throw NumericalError("solve_neumann: ground state not nodeless at the boundary");
  n.norm = B / uB;

  // check nodelessness on a grid (ground state)
  for (int i = 1; i <= 200; ++i) {
    double t = Rv * i / 200.0;
    if (n.u_raw(t) <= 0) throw NumericalError("solve_neumann: interior node found");
  }

  auto& m = n.moments;
  m.Vf = n.profile_moment([&](double t) { return V(t) * n.f(t); }, 0, true);
  m.Vw = n.profile_moment([&](double t) { return V(t) * n.w(t); }, 0, true);
  m.Vw2 = n.profile_moment([&](double t) { return V(t) * sq(n.w(t)); }, 0, true);
  m.Vf2 = n.profile_moment([&](double t) { return V(t) * sq(n.f(t)); }, 0, true);
  m.ball_w = n.profile_moment([&](double t) { return n.w(t); }, 0, false);
  m.ball_w2 = n.profile_moment([&](double t) { return sq(n.w(t)); }, 0, false);
  return n;
}

}  // namespace bogospec
