#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "bogospec/basis_radial.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

enum class Backend { PlaneWave, RadialChannels };

// Momentum lattice of the unit torus: p in 2π Z^3 with |p| <= p_cut.
// Mode 0 is p = 0 (the condensate direction in the box).
struct BoxLattice {
  double p_cut = 12 * pi;
  std::vector<std::array<int, 3>> n;  // integer momenta
  Vec p2;                             // |p|^2 per mode

  static BoxLattice build(double p_cut) {
    if (p_cut < 2 * pi) throw ValidationError("box lattice requires p_cut >= 2*pi");
    BoxLattice b;
    b.p_cut = p_cut;
    int nmax = static_cast<int>(std::floor(p_cut / (2 * pi) + 1e-12));
    double lim = sq(p_cut / (2 * pi)) + 1e-12;
    b.n.push_back({0, 0, 0});
    for (int i = -nmax; i <= nmax; ++i)
      for (int j = -nmax; j <= nmax; ++j)
        for (int k = -nmax; k <= nmax; ++k) {
          if (i == 0 && j == 0 && k == 0) continue;
          if (i * i + j * j + k * k <= lim) b.n.push_back({i, j, k});
        }
    b.p2 = Vec::Zero(b.n.size());
    for (size_t m = 0; m < b.n.size(); ++m) {
      auto& v = b.n[m];
      b.p2[m] = sq(2 * pi) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    }
    return b;
  }

  int size() const { return static_cast<int>(n.size()); }
};

// Discretization request: which backend and its sizes. The oscillator-shell
// option is a shell-truncated radial-channels basis.
struct DiscretizationSpec {
  Backend backend = Backend::RadialChannels;
  // plane-wave
  double p_cut = 12 * pi;
  // radial channels
  int l_max = 9;
  int n_r = 40;
  double r_max = 16.0;
  int quad_panels = 80;
  int quad_order = 10;
  double basis_scale = 1.0;
  int shell = -1;  // if >= 0: oscillator shell cutoff 2n + l <= shell

  std::vector<int> channel_sizes() const {
    std::vector<int> nper;
    if (shell >= 0) {
      int lm = std::min(l_max, shell);
      for (int l = 0; l <= lm; ++l) nper.push_back((shell - l) / 2 + 1);
    } else {
      nper.assign(l_max + 1, n_r);
    }
    return nper;
  }

  std::shared_ptr<RadialBasis> make_basis() const {
    auto nper = channel_sizes();
    int lm = static_cast<int>(nper.size()) - 1;
    return std::make_shared<RadialBasis>(lm, nper, r_max, quad_panels, quad_order,
                                         basis_scale);
  }
};

// Symmetric operator on the active orthonormal basis. Radial backend stores
// one block per channel (m-degeneracy carried as a trace weight); plane-wave
// backend stores the momentum-space diagonal.
struct OperatorRep {
  Backend backend = Backend::RadialChannels;
  std::vector<Mat> blocks;  // radial channels
  Vec diag;                 // box modes
  bool perp_flag = false;

  std::shared_ptr<const RadialBasis> basis;
  std::shared_ptr<const BoxLattice> lattice;

  static OperatorRep radial(std::shared_ptr<const RadialBasis> basis) {
    OperatorRep op;
    op.backend = Backend::RadialChannels;
    op.basis = std::move(basis);
    op.blocks.resize(op.basis->l_max + 1);
    for (int l = 0; l <= op.basis->l_max; ++l)
      op.blocks[l] = Mat::Zero(op.basis->nper[l], op.basis->nper[l]);
    return op;
  }

  static OperatorRep box(std::shared_ptr<const BoxLattice> lattice) {
    OperatorRep op;
    op.backend = Backend::PlaneWave;
    op.lattice = std::move(lattice);
    op.diag = Vec::Zero(op.lattice->size());
    return op;
  }

  bool is_box() const { return backend == Backend::PlaneWave; }

  // weighted trace over the full basis (box: plain sum over modes)
  double trace() const {
    if (is_box()) return diag.sum();
    KahanSum s;
    for (size_t l = 0; l < blocks.size(); ++l)
      s.add((2.0 * l + 1.0) * blocks[l].trace());
    return s.value();
  }

  double hs_norm_sq() const {
    if (is_box()) return diag.squaredNorm();
    KahanSum s;
    for (size_t l = 0; l < blocks.size(); ++l)
      s.add((2.0 * l + 1.0) * blocks[l].squaredNorm());
    return s.value();
  }

  double symmetry_defect() const {
    if (is_box()) return 0.0;
    double d = 0, scale = 0;
    for (const auto& b : blocks) {
      d = std::max(d, (b - b.transpose()).norm());
      scale = std::max(scale, b.norm());
    }
    return scale > 0 ? d / scale : d;
  }

  OperatorRep& operator+=(const OperatorRep& o) {
    if (is_box())
      diag += o.diag;
    else
      for (size_t l = 0; l < blocks.size(); ++l) blocks[l] += o.blocks[l];
    return *this;
  }
  OperatorRep& operator-=(const OperatorRep& o) {
    if (is_box())
      diag -= o.diag;
    else
      for (size_t l = 0; l < blocks.size(); ++l) blocks[l] -= o.blocks[l];
    return *this;
  }
  OperatorRep& operator*=(double c) {
    if (is_box())
      diag *= c;
    else
      for (auto& b : blocks) b *= c;
    return *this;
  }

  friend OperatorRep operator+(OperatorRep a, const OperatorRep& b) { return a += b; }
  friend OperatorRep operator-(OperatorRep a, const OperatorRep& b) { return a -= b; }
  friend OperatorRep operator*(double c, OperatorRep a) { return a *= c; }

  // matrix product per block / diagonal product
  friend OperatorRep mul(const OperatorRep& a, const OperatorRep& b) {
    OperatorRep r = a;
    if (a.is_box()) {
      r.diag = a.diag.cwiseProduct(b.diag);
    } else {
      for (size_t l = 0; l < a.blocks.size(); ++l) r.blocks[l] = a.blocks[l] * b.blocks[l];
    }
    r.perp_flag = a.perp_flag || b.perp_flag;
    return r;
  }

  static double trace_product(const OperatorRep& a, const OperatorRep& b) {
    if (a.is_box()) return a.diag.cwiseProduct(b.diag).sum();
    KahanSum s;
    for (size_t l = 0; l < a.blocks.size(); ++l)
      s.add((2.0 * l + 1.0) * (a.blocks[l].transpose() * b.blocks[l]).trace());
    return s.value();
  }

  static double trace_product(const OperatorRep& a, const OperatorRep& b,
                              const OperatorRep& c) {
    if (a.is_box()) return (a.diag.array() * b.diag.array() * c.diag.array()).sum();
    KahanSum s;
    for (size_t l = 0; l < a.blocks.size(); ++l)
      s.add((2.0 * l + 1.0) * (a.blocks[l] * b.blocks[l] * c.blocks[l]).trace());
    return s.value();
  }

  OperatorRep identity_like() const {
    OperatorRep r = *this;
    if (is_box())
      r.diag.setOnes();
    else
      for (auto& b : r.blocks) b.setIdentity(b.rows(), b.cols());
    r.perp_flag = false;
    return r;
  }
};

}  // namespace bogospec
