#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "bogospec/discretization.hpp"
#include "bogospec/interp.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

// External trapping potential. The box kind is the unit torus with
// V_ext = 0 (plane-wave backend only); the others are radial and confining.
struct TrapPotential {
  enum class Kind { Harmonic, BoxPeriodic, TabulatedRadial };
  Kind kind = Kind::Harmonic;
  double omega = 1.0;
  Spline table;  // for TabulatedRadial

  static TrapPotential harmonic(double omega) {
    TrapPotential t;
    t.kind = Kind::Harmonic;
    if (omega <= 0) throw ValidationError("harmonic trap requires omega > 0");
    t.omega = omega;
    return t;
  }
  static TrapPotential box() {
    TrapPotential t;
    t.kind = Kind::BoxPeriodic;
    return t;
  }
  static TrapPotential tabulated_radial(std::vector<double> r, std::vector<double> v) {
    for (double vv : v)
      if (vv < 0) throw ValidationError("trap potential must be nonnegative");
    TrapPotential t;
    t.kind = Kind::TabulatedRadial;
    t.table = Spline(std::move(r), std::move(v));
    return t;
  }

  bool is_box() const { return kind == Kind::BoxPeriodic; }

  double operator()(double r) const {
    switch (kind) {
      case Kind::Harmonic:
        return omega * omega * r * r;
      case Kind::BoxPeriodic:
        return 0.0;
      default:
        return std::max(0.0, table(r));
    }
  }
};

// Condensate state: normalized positive minimizer of the energy functional
// E[φ] = ∫ |∇φ|^2 + V_ext φ^2 + 4π a0 φ^4.
struct GPState {
  Backend backend = Backend::RadialChannels;
  std::shared_ptr<const RadialBasis> basis;
  Vec coeff;          // l = 0 channel coefficients (radial backend)
  Vec phi_nodes;      // φ at quadrature nodes
  double a0 = 0;
  double e_gp = 0;    // E[φ0]
  double eps_gp = 0;  // E[φ0] + 4π a0 ||φ0||_4^4
  double quartic_norm = 0;
  double residual = 0;
  int iterations = 0;

  double phi(double r) const {
    if (backend == Backend::PlaneWave) return 1.0;
    return basis->synth0(coeff, r);
  }
  double dphi(double r) const {
    if (backend == Backend::PlaneWave) return 0.0;
    return basis->synth0_deriv(coeff, r);
  }
  double phi_sq(double r) const { return sq(phi(r)); }
};

namespace detail {

struct GPWork {
  const RadialBasis& basis;
  const TrapPotential& trap;
  double a0;
  Mat H0;          // kin + V_ext in l=0
  Vec vw;          // 4π w_i r_i^2 weights
  const Mat& B0;   // node values

  GPWork(const RadialBasis& b, const TrapPotential& t, double a0_)
      : basis(b), trap(t), a0(a0_), B0(b.B[0]) {
    Vec vext(b.n_quad());
    for (int i = 0; i < b.n_quad(); ++i) vext[i] = t(b.r[i]);
    H0 = b.kin[0] + b.mult_matrix(0, vext);
    vw = (4.0 * pi * b.w.array() * b.r.array().square()).matrix();
  }

  Vec nodes(const Vec& c) const { return B0 * c / std::sqrt(4.0 * pi); }

  double quartic(const Vec& phi_n) const {
    return vw.dot(phi_n.array().pow(4).matrix());
  }

  double energy(const Vec& c, const Vec& phi_n) const {
    return c.dot(H0 * c) + 4.0 * pi * a0 * quartic(phi_n);
  }

  // gradient of the energy wrt coefficients (factor 2 dropped)
  Vec grad(const Vec& c, const Vec& phi_n) const {
    Vec g = H0 * c;
    // quartic term: d/dc ∫φ^4 = 4 ∫ φ^3 B_n = 4 Σ w_i φ_i^3 B(i,n)/sqrt(4π)
    Vec cube = (vw.array() * phi_n.array().pow(3)).matrix();
    g += 4.0 * pi * a0 * 4.0 * (B0.transpose() * cube) / std::sqrt(4.0 * pi) / 2.0;
    return g;
  }

  // Galerkin mean-field Hamiltonian at the current density
  Mat hamiltonian(const Vec& phi_n) const {
    return H0 + 8.0 * pi * a0 * basis.mult_matrix(0, phi_n.array().square().matrix());
  }
};

}  // namespace detail

// energy of an arbitrary normalized state (radial backend)
inline double gp_energy(const Vec& coeff, const TrapPotential& trap, double a0,
                        const RadialBasis& basis, double norm_tol = 1e-8) {
  if (std::abs(coeff.norm() - 1.0) > norm_tol)
    throw ValidationError("gp_energy: state is not normalized");
  detail::GPWork wk(basis, trap, a0);
  Vec phi_n = wk.nodes(coeff);
  return wk.energy(coeff, phi_n);
}

inline GPState minimize_gp(const TrapPotential& trap, double a0,
                           const DiscretizationSpec& disc, double tol = 1e-10,
                           int max_iter = 40000, unsigned seed = 0) {
  if (a0 < 0) throw ValidationError("minimize_gp: a0 must be nonnegative");

  GPState st;
  st.a0 = a0;

  if (trap.is_box() || disc.backend == Backend::PlaneWave) {
    if (!trap.is_box())
      throw ValidationError("plane-wave backend requires the box trap");
    // φ = 1 on the unit torus: closed form, no iteration
    st.backend = Backend::PlaneWave;
    st.quartic_norm = 1.0;
    st.e_gp = 4.0 * pi * a0;
    st.eps_gp = 8.0 * pi * a0;
    st.residual = 0.0;
    return st;
  }

  auto basis = disc.make_basis();
  st.backend = Backend::RadialChannels;
  st.basis = basis;

  detail::GPWork wk(*basis, trap, a0);
  const int nl = basis->nper[0];

  // positive initial guess: lowest basis mode plus a small perturbation
  Vec c = Vec::Zero(nl);
  c[0] = 1.0;
  if (seed != 0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 0.05);
    for (int i = 0; i < nl; ++i) c[i] += g(rng);
  }
  {
    // enforce positivity of the initial profile
    Vec pn = wk.nodes(c);
    if (pn.minCoeff() < 0 && pn.maxCoeff() <= 0) c = -c;
    pn = wk.nodes(c);
    if (pn.minCoeff() < 0) {
      c.setZero();
      c[0] = 1.0;
    }
  }
  c.normalize();

  Vec phi_n = wk.nodes(c);
  double E = wk.energy(c, phi_n);
  double dt = 0.05;
  int it = 0;

  // projected gradient flow with adaptive step, energy non-increasing
  for (; it < max_iter; ++it) {
    Vec g = wk.grad(c, phi_n);
    g -= c.dot(g) * c;  // tangent projection
    double gn = g.norm();
    if (gn < 1e-15) break;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      Vec cn = (c - dt * g).normalized();
      Vec pn = wk.nodes(cn);
      double En = wk.energy(cn, pn);
      if (En <= E + 1e-15 * std::abs(E)) {
        c = cn;
        phi_n = pn;
        E = En;
        dt = std::min(dt * 1.25, 5.0);
        accepted = true;
        break;
      }
      dt *= 0.5;
    }
    if (!accepted) break;
    if (gn * dt < 0.3 * tol) break;
  }

  // self-consistent polish: damped ground-eigenvector iteration, still
  // accepting only energy-non-increasing steps
  for (int p = 0; p < 60; ++p) {
    Mat H = wk.hamiltonian(phi_n);
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Vec v = es.eigenvectors().col(0);
    if (v.dot(c) < 0) v = -v;
    bool accepted = false;
    double mix = 1.0;
    for (int tries = 0; tries < 12; ++tries) {
      Vec cn = ((1 - mix) * c + mix * v).normalized();
      Vec pn = wk.nodes(cn);
      double En = wk.energy(cn, pn);
      if (En <= E + 1e-14 * std::abs(E)) {
        c = cn;
        phi_n = pn;
        E = En;
        accepted = true;
        break;
      }
      mix *= 0.5;
    }
    if (!accepted) break;
    Mat Hc = wk.hamiltonian(phi_n);
    double mu = c.dot(Hc * c);
    if ((Hc * c - mu * c).norm() < 0.05 * tol) break;
  }

  // sign and final bookkeeping
  {
    Vec pn = wk.nodes(c);
    if (pn.sum() < 0) {
      c = -c;
      phi_n = -pn;
    } else {
      phi_n = pn;
    }
  }
  st.coeff = c;
  st.phi_nodes = phi_n;
  st.quartic_norm = wk.quartic(phi_n);
  st.e_gp = wk.energy(c, phi_n);
  st.eps_gp = st.e_gp + 4.0 * pi * a0 * st.quartic_norm;
  Mat H = wk.hamiltonian(phi_n);
  st.residual = (H * c - st.eps_gp * c).norm();
  st.iterations = it;
  if (st.residual > std::max(tol, 1e-9) * 100)
    throw NumericalError("minimize_gp: Euler-Lagrange residual did not converge");
  return st;
}

// L2 norm of (H_GP) φ0 evaluated independently of the minimizer internals
inline double el_residual(const GPState& st, const TrapPotential& trap) {
  if (st.backend == Backend::PlaneWave) return 0.0;
  const RadialBasis& b = *st.basis;
  detail::GPWork wk(b, trap, st.a0);
  Mat H = wk.hamiltonian(st.phi_nodes);
  return (H * st.coeff - st.eps_gp * st.coeff).norm();
}

}  // namespace bogospec
