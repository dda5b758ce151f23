#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "bogospec/discretization.hpp"
#include "bogospec/gp.hpp"
#include "bogospec/interp.hpp"
#include "bogospec/quadrature.hpp"
#include "bogospec/radial_potential.hpp"
#include "bogospec/scattering.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

// Radial short-range profile W(t) with compact support: carries the data the
// two-scale machinery needs (moments and radial Fourier transform).
struct KernelProfile {
  std::function<double(double)> f;
  double support = 1.0;
  std::vector<double> edges;  // quadrature breakpoints within [0, support]

  double moment(int extra) const {
    KahanSum s;
    double prev = 0.0;
    for (double e : edges_or_default()) {
      if (e > prev)
        s.add(integrate_gl([&](double t) { return f(t) * std::pow(t, 2.0 + extra); }, prev,
                           e, 8, 12));
      prev = e;
    }
    return 4.0 * pi * s.value();
  }

  double fourier(double q) const {
    if (std::abs(q) * support < 1e-8) return moment(0);
    KahanSum s;
    double prev = 0.0;
    for (double e : edges_or_default()) {
      if (e > prev) {
        int panels = std::max(2, static_cast<int>(std::abs(q) * (e - prev) / 3.0) + 2);
        s.add(integrate_gl([&](double t) { return f(t) * t * std::sin(q * t); }, prev, e,
                           panels, 10));
      }
      prev = e;
    }
    return 4.0 * pi / q * s.value();
  }

  std::vector<double> edges_or_default() const {
    if (!edges.empty()) return edges;
    return {support};
  }
};

inline KernelProfile profile_V(const RadialPotential& V) {
  KernelProfile p;
  p.f = [V](double t) { return V(t); };
  p.support = V.support_radius();
  p.edges = V.breakpoints();
  return p;
}

// profiles V f_l, V w_l, V w_l^2 (supported where V is), and w_l itself
inline KernelProfile profile_Vf(const RadialPotential& V, const NeumannSolution& nm) {
  KernelProfile p;
  p.f = [V, &nm](double t) { return V(t) * nm.f(t); };
  p.support = V.support_radius();
  p.edges = V.breakpoints();
  return p;
}
inline KernelProfile profile_Vw(const RadialPotential& V, const NeumannSolution& nm) {
  KernelProfile p;
  p.f = [V, &nm](double t) { return V(t) * nm.w(t); };
  p.support = V.support_radius();
  p.edges = V.breakpoints();
  return p;
}

// ---------------------------------------------------------------------------
// basic operator constructors

inline OperatorRep kinetic_op(const std::shared_ptr<const RadialBasis>& basis) {
  OperatorRep op = OperatorRep::radial(basis);
  for (int l = 0; l <= basis->l_max; ++l) op.blocks[l] = basis->kin[l];
  return op;
}

inline OperatorRep kinetic_op(const std::shared_ptr<const BoxLattice>& lat) {
  OperatorRep op = OperatorRep::box(lat);
  op.diag = lat->p2;
  return op;
}

inline OperatorRep multiplication_op(const std::shared_ptr<const RadialBasis>& basis,
                                     const std::function<double(double)>& g) {
  OperatorRep op = OperatorRep::radial(basis);
  Vec gn(basis->n_quad());
  for (int i = 0; i < basis->n_quad(); ++i) gn[i] = g(basis->r[i]);
  for (int l = 0; l <= basis->l_max; ++l) op.blocks[l] = basis->mult_matrix(l, gn);
  return op;
}

inline OperatorRep identity_op(const OperatorRep& like) { return like.identity_like(); }

inline OperatorRep scalar_op(const OperatorRep& like, double c) {
  OperatorRep r = like.identity_like();
  r *= c;
  return r;
}

// condensate direction as a coefficient vector (radial: l = 0 block)
struct StateVector {
  Backend backend;
  Vec c0;      // radial coefficients
  int box_dim = 0;

  static StateVector from(const GPState& st, const OperatorRep& like) {
    StateVector v;
    v.backend = st.backend;
    if (st.backend == Backend::PlaneWave) {
      v.box_dim = like.diag.size();
    } else {
      v.c0 = st.coeff;
    }
    return v;
  }
};

inline double quad_form(const OperatorRep& A, const StateVector& v) {
  if (A.is_box()) return A.diag[0];
  return v.c0.dot(A.blocks[0] * v.c0);
}

inline Vec apply_block0(const OperatorRep& A, const Vec& c) { return A.blocks[0] * c; }

// ---------------------------------------------------------------------------

// H_GP = -Δ + V_ext + 8π a0 φ0^2 - ε_GP on the active basis
inline OperatorRep build_hgp(const GPState& state, const TrapPotential& trap,
                             const std::shared_ptr<const RadialBasis>& basis) {
  if (state.backend != Backend::RadialChannels)
    throw ValidationError("build_hgp: radial overload requires a radial state");
  OperatorRep H = kinetic_op(basis);
  Vec gn(basis->n_quad());
  for (int i = 0; i < basis->n_quad(); ++i)
    gn[i] = trap(basis->r[i]) + 8.0 * pi * state.a0 * sq(state.phi(basis->r[i]));
  for (int l = 0; l <= basis->l_max; ++l) {
    H.blocks[l] += basis->mult_matrix(l, gn);
    H.blocks[l] -= state.eps_gp * Mat::Identity(basis->nper[l], basis->nper[l]);
  }
  return H;
}

inline OperatorRep build_hgp(const GPState& state,
                             const std::shared_ptr<const BoxLattice>& lat) {
  OperatorRep H = kinetic_op(lat);
  double shift = 8.0 * pi * state.a0 - state.eps_gp;  // = 0 for the box minimizer
  H.diag.array() += shift;
  return H;
}

inline double hgp_phi_residual(const OperatorRep& H, const GPState& st) {
  if (H.is_box()) return std::abs(H.diag[0]);
  return (H.blocks[0] * st.coeff).norm();
}

// f applied through the eigendecomposition of each symmetric block.
// With psd_tol >= 0, eigenvalues in [-psd_tol, 0) are clamped to zero and
// anything below -psd_tol is a structural failure.
inline OperatorRep op_function(const OperatorRep& A, const std::function<double(double)>& fn,
                               double psd_tol = -1.0) {
  if (A.symmetry_defect() > 1e-10)
    throw NumericalError("op_function: operator is not symmetric");
  OperatorRep R = A;
  auto apply = [&](const Mat& block) {
    Eigen::SelfAdjointEigenSolver<Mat> es(block);
    if (es.info() != Eigen::Success) throw NumericalError("op_function: eigensolver failed");
    Vec ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
      double x = ev[i];
      if (psd_tol >= 0 && x < 0) {
        if (x < -psd_tol)
          throw NumericalError("op_function: eigenvalue " + std::to_string(x) +
                               " below psd tolerance (discretization failure)");
        x = 0.0;
      }
      ev[i] = fn(x);
    }
    Mat out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    return Mat(0.5 * (out + out.transpose()));
  };
  if (A.is_box()) {
    for (int i = 0; i < R.diag.size(); ++i) {
      double x = A.diag[i];
      if (psd_tol >= 0 && x < 0) {
        if (x < -psd_tol)
          throw NumericalError("op_function: diagonal entry below psd tolerance");
        x = 0.0;
      }
      R.diag[i] = fn(x);
    }
  } else {
    for (size_t l = 0; l < A.blocks.size(); ++l) R.blocks[l] = apply(A.blocks[l]);
  }
  return R;
}

inline double spectral_radius(const OperatorRep& A) {
  double r = 0;
  if (A.is_box()) return A.diag.cwiseAbs().maxCoeff();
  for (const auto& b : A.blocks) {
    Eigen::SelfAdjointEigenSolver<Mat> es(b, Eigen::EigenvaluesOnly);
    r = std::max(r, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return r;
}

inline double min_eigenvalue(const OperatorRep& A) {
  double m = std::numeric_limits<double>::infinity();
  if (A.is_box()) return A.diag.minCoeff();
  for (const auto& b : A.blocks) {
    Eigen::SelfAdjointEigenSolver<Mat> es(b, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

// Q A Q with Q = 1 - |φ0><φ0|
inline OperatorRep project_perp(const OperatorRep& A, const GPState& state) {
  OperatorRep R = A;
  if (A.is_box()) {
    R.diag[0] = 0.0;
  } else {
    const Vec& c = state.coeff;
    Mat& b0 = R.blocks[0];
    Vec bc = b0 * c;
    double cbc = c.dot(bc);
    b0 -= bc * c.transpose();
    b0 -= c * bc.transpose();
    b0 += cbc * c * c.transpose();
    b0 = 0.5 * (b0 + b0.transpose()).eval();
  }
  R.perp_flag = true;
  return R;
}

// ---------------------------------------------------------------------------
// two-scale kernels N^3 W(N(x-y)) φ0(x) φ0(y)

// Matrix via relative-coordinate moment expansion (order 0 or 2); the box
// backend evaluates the momentum-space form exactly and serves as the oracle.
inline OperatorRep short_range_matrix(const KernelProfile& W, double N, const GPState& state,
                                      int order,
                                      const std::shared_ptr<const RadialBasis>& basis) {
  if (order != 0 && order != 2)
    throw ValidationError("short_range_matrix: order must be 0 or 2");
  double m0 = W.moment(0);
  double width = W.support / N;
  // the expansion needs the kernel width below the envelope scale
  if (width > 0.2 * basis->r_max)
    throw NumericalError("short_range_matrix: N too small for the moment expansion");

  OperatorRep op = OperatorRep::radial(basis);
  const int nq = basis->n_quad();
  Vec phn(nq), dphn(nq);
  for (int i = 0; i < nq; ++i) {
    phn[i] = state.phi(basis->r[i]);
    dphn[i] = state.dphi(basis->r[i]);
  }
  Vec ph2 = phn.array().square().matrix();
  for (int l = 0; l <= basis->l_max; ++l) op.blocks[l] = m0 * basis->mult_matrix(l, ph2);

  if (order == 2) {
    double m2 = W.moment(2);
    double coef = m2 / (6.0 * N * N);
    for (int l = 0; l <= basis->l_max; ++l) {
      // grad matrix: G(i,n) = d/dr [R_n φ] at node i
      Mat G = basis->dB[l].array().colwise() * phn.array();
      G += (basis->B[l].array().colwise() * dphn.array()).matrix();
      Vec wr2 = (basis->w.array() * basis->r.array().square()).matrix();
      Mat T = G.transpose() * wr2.asDiagonal() * G;
      if (l > 0) {
        Mat P = basis->B[l].array().colwise() * phn.array();
        T += l * (l + 1.0) * (P.transpose() * basis->w.asDiagonal() * P);
      }
      op.blocks[l] -= coef * 0.5 * (T + T.transpose());
    }
  }
  return op;
}

inline OperatorRep short_range_matrix(const KernelProfile& W, double N,
                                      const std::shared_ptr<const BoxLattice>& lat) {
  OperatorRep op = OperatorRep::box(lat);
  for (int i = 0; i < lat->size(); ++i)
    op.diag[i] = W.fourier(std::sqrt(lat->p2[i]) / N);
  return op;
}

// (N^3 W(N·) * φ0^2)(r): exact relative-coordinate quadrature of the radial
// convolution; smooth multiplication profile usable on the outer grid.
class ShortRangeConvolution {
 public:
  ShortRangeConvolution(const KernelProfile& W, double N, const GPState& state,
                        double r_hi) {
    m0_ = W.moment(0);
    if (state.backend == Backend::PlaneWave) {
      const_value_ = m0_;
      is_const_ = true;
      return;
    }
    // antiderivative of t φ0^2(t)
    int nfine = 4000;
    std::vector<double> ts(nfine + 1), Fs(nfine + 1);
    double hi = r_hi + W.support / N + 1.0;
    KahanSum acc;
    ts[0] = 0;
    Fs[0] = 0;
    GaussLegendre gl(8);
    for (int i = 1; i <= nfine; ++i) {
      double a = hi * (i - 1) / nfine, b = hi * i / nfine;
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int k = 0; k < 8; ++k) {
        double t = mid + half * gl.x[k];
        acc.add(half * gl.w[k] * t * sq(state.phi(t)));
      }
      ts[i] = b;
      Fs[i] = acc.value();
    }
    F_ = Spline(ts, Fs);
    width_ = W.support / N;
    PanelRule srule;
    double prev = 0.0;
    for (double e : W.edges_or_default()) {
      double se = e / N;
      if (se > prev + 1e-300) {
        PanelRule part(prev, se, 4, 10);
        srule.x.insert(srule.x.end(), part.x.begin(), part.x.end());
        srule.w.insert(srule.w.end(), part.w.begin(), part.w.end());
      }
      prev = se;
    }
    sx_ = srule.x;
    sw_.resize(sx_.size());
    for (size_t i = 0; i < sx_.size(); ++i) {
      double t = sx_[i] * N;
      sw_[i] = srule.w[i] * N * N * N * W.f(t);
    }
    phi0_sq_ = [state](double r) { return sq(state.phi(r)); };
  }

  double operator()(double r) const {
    if (is_const_) return const_value_;
    KahanSum s;
    if (r < 1e-12) {
      for (size_t i = 0; i < sx_.size(); ++i)
        s.add(sw_[i] * 4.0 * pi * sq(sx_[i]) * phi0_sq_(sx_[i]));
      return s.value();
    }
    for (size_t i = 0; i < sx_.size(); ++i) {
      double si = sx_[i];
      s.add(sw_[i] * 2.0 * pi * si / r * (F_(r + si) - F_(std::abs(r - si))));
    }
    return s.value();
  }

  double zeroth_moment() const { return m0_; }

 private:
  bool is_const_ = false;
  double const_value_ = 0;
  double m0_ = 0, width_ = 0;
  Spline F_;
  std::vector<double> sx_, sw_;
  std::function<double(double)> phi0_sq_;
};

}  // namespace bogospec
