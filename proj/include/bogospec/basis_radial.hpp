#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "bogospec/quadrature.hpp"
#include "bogospec/types.hpp"

namespace bogospec {

// Orthonormal radial basis per angular momentum channel: 3D isotropic
// oscillator radial eigenfunctions
//   R_{n,l}(r) = N_{n,l} (r/s)^l L_n^{(l+1/2)}((r/s)^2) e^{-(r/s)^2/2} / s^{3/2},
// with ∫ R_{n,l}^2 r^2 dr = 1. The channel Laplacian is exact in this basis
// up to the quadrature of the r^2 multiplication matrix.
class RadialBasis {
 public:
  int l_max = 0;
  std::vector<int> nper;  // basis size per channel l = 0..l_max
  double r_max = 16.0;
  double scale = 1.0;

  Vec r, w;                 // quadrature nodes/weights on [0, r_max]
  std::vector<Mat> B;       // B[l](i,n) = R_{n,l}(r_i)
  std::vector<Mat> dB;      // radial derivatives at nodes
  std::vector<Mat> kin;     // -Δ restricted to channel l

  RadialBasis(int l_max_, std::vector<int> nper_, double r_max_, int panels, int order,
              double scale_ = 1.0)
      : l_max(l_max_), nper(std::move(nper_)), r_max(r_max_), scale(scale_) {
    if (static_cast<int>(nper.size()) != l_max + 1)
      throw ValidationError("RadialBasis: nper size must be l_max+1");
    PanelRule rule(0.0, r_max, panels, order);
    const int nq = static_cast<int>(rule.x.size());
    r = Vec::Zero(nq);
    w = Vec::Zero(nq);
    for (int i = 0; i < nq; ++i) {
      r[i] = rule.x[i];
      w[i] = rule.w[i];
    }
    B.resize(l_max + 1);
    dB.resize(l_max + 1);
    kin.resize(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
      const int nl = nper[l];
      B[l] = Mat::Zero(nq, nl);
      dB[l] = Mat::Zero(nq, nl);
      Vec vals(nl), ders(nl);
      for (int i = 0; i < nq; ++i) {
        eval_channel(l, r[i], vals, &ders);
        B[l].row(i) = vals.transpose();
        dB[l].row(i) = ders.transpose();
      }
      Mat r2 = mult_matrix(l, r.array().square().matrix());
      Vec diag(nl);
      for (int n = 0; n < nl; ++n) diag[n] = (4.0 * n + 2.0 * l + 3.0) / (scale * scale);
      kin[l] = Mat(diag.asDiagonal());
      kin[l] -= r2 / (scale * scale * scale * scale);
      kin[l] = 0.5 * (kin[l] + kin[l].transpose()).eval();
    }
  }

  int n_quad() const { return static_cast<int>(r.size()); }
  double channel_weight(int l) const { return 2.0 * l + 1.0; }
  int total_dim() const {
    int m = 0;
    for (int x : nper) m += x;
    return m;
  }

  // ∫ R_n g R_m r^2 dr from node samples of g
  Mat mult_matrix(int l, const Vec& g_at_nodes) const {
    Vec d = (w.array() * r.array().square() * g_at_nodes.array()).matrix();
    Mat m = B[l].transpose() * d.asDiagonal() * B[l];
    return 0.5 * (m + m.transpose());
  }

  // values of all R_{n,l} at an arbitrary radius (optionally derivatives)
  void eval_channel(int l, double rr, Vec& vals, Vec* ders = nullptr) const {
    const int nl = nper[l];
    const double alpha = l + 0.5;
    const double rho = rr / scale;
    const double x = rho * rho;
    const double front = std::sqrt(2.0 / std::tgamma(alpha + 1.0)) *
                         std::pow(rho, double(l)) * std::exp(-0.5 * x) /
                         std::pow(scale, 1.5);
    // normalized Laguerre recurrence for alpha and alpha+1
    auto lag = [&](double a, int count, std::vector<double>& out) {
      out.resize(std::max(count, 1));
      if (count <= 0) return;
      out[0] = 1.0;
      if (count == 1) return;
      out[1] = (1.0 + a - x) / std::sqrt(1.0 + a);
      for (int n = 1; n + 1 < count; ++n) {
        out[n + 1] = ((2.0 * n + 1.0 + a - x) * out[n] -
                      std::sqrt(n * (n + a)) * out[n - 1]) /
                     std::sqrt((n + 1.0) * (n + 1.0 + a));
      }
    };
    std::vector<double> La, Lb;
    lag(alpha, nl, La);
    if (ders) lag(alpha + 1.0, nl, Lb);
    for (int n = 0; n < nl; ++n) {
      vals[n] = front * La[n];
      if (ders) {
        // d/dx L̄_n^(a) = -sqrt(n/(a+1)) L̄_{n-1}^(a+1); chain rule through x = rho^2
        double dL = (n >= 1) ? -std::sqrt(n / (alpha + 1.0)) * Lb[n - 1] : 0.0;
        double inv_rho = (rho > 1e-14) ? 1.0 / rho : 0.0;
        (*ders)[n] = ((l * inv_rho - rho) * vals[n] + front * 2.0 * rho * dL) / scale;
      }
    }
  }

  // radial function from l=0 coefficients (3D value includes Y_00 = 1/sqrt(4pi))
  double synth0(const Vec& coeff, double rr) const {
    Vec vals(nper[0]);
    eval_channel(0, rr, vals);
    return coeff.dot(vals) / std::sqrt(4.0 * pi);
  }
  double synth0_deriv(const Vec& coeff, double rr) const {
    Vec vals(nper[0]), ders(nper[0]);
    eval_channel(0, rr, vals, &ders);
    return coeff.dot(ders) / std::sqrt(4.0 * pi);
  }
};

}  // namespace bogospec
