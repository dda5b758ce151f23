#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bogospec/types.hpp"

namespace bogospec {

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> x, w;

  explicit GaussLegendre(int n) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      w[n - 1 - i] = w[i];
    }
  }
};

// Fixed-order panel rule: nodes/weights for ∫_a^b with `panels` equal panels.
struct PanelRule {
  std::vector<double> x, w;

  PanelRule() = default;
  PanelRule(double a, double b, int panels, int order) {
    GaussLegendre gl(order);
    for (int p = 0; p < panels; ++p) {
      double lo = a + (b - a) * p / panels;
      double hi = a + (b - a) * (p + 1) / panels;
      append_panel(lo, hi, gl);
    }
  }

  // Geometrically graded panels accumulating toward `a` (ratio < 1 shrinks).
  static PanelRule graded(double a, double b, int panels, int order, double ratio) {
    PanelRule r;
    GaussLegendre gl(order);
    std::vector<double> edges(panels + 1);
    double total = 0.0, len = 1.0;
    for (int p = 0; p < panels; ++p) {
      total += len;
      len *= ratio;
    }
    edges[0] = a;
    len = 1.0;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      acc += len;
      len *= ratio;
      edges[p + 1] = a + (b - a) * acc / total;
    }
    edges[panels] = b;
    for (int p = 0; p < panels; ++p) r.append_panel(edges[p], edges[p + 1], gl);
    return r;
  }

  void append_panel(double lo, double hi, const GaussLegendre& gl) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (size_t i = 0; i < gl.x.size(); ++i) {
      x.push_back(mid + half * gl.x[i]);
      w.push_back(half * gl.w[i]);
    }
  }

  double integrate(const std::function<double(double)>& f) const {
    KahanSum s;
    for (size_t i = 0; i < x.size(); ++i) s.add(w[i] * f(x[i]));
    return s.value();
  }
};

inline double integrate_gl(const std::function<double(double)>& f, double a, double b,
                           int panels = 8, int order = 12) {
  return PanelRule(a, b, panels, order).integrate(f);
}

// Adaptive panel-splitting integrator; relative tolerance on the total.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol = 1e-12, int max_depth = 24) {
  static const GaussLegendre gl8(8), gl16(16);
  std::function<double(double, double, double, int)> rec = [&](double lo, double hi,
                                                               double coarse, int depth) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto eval = [&](const GaussLegendre& g, double l, double h) {
      double m = 0.5 * (l + h), hh = 0.5 * (h - l), s = 0.0;
      for (size_t i = 0; i < g.x.size(); ++i) s += hh * g.w[i] * f(m + hh * g.x[i]);
      return s;
    };
    (void)half;
    double left = eval(gl16, lo, mid), right = eval(gl16, mid, hi);
    double fine = left + right;
    if (depth >= max_depth || std::abs(fine - coarse) <= rel_tol * (std::abs(fine) + 1e-300))
      return fine;
    return rec(lo, mid, left, depth + 1) + rec(mid, hi, right, depth + 1);
  };
  static const GaussLegendre gl0(16);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a), coarse = 0.0;
  for (size_t i = 0; i < gl0.x.size(); ++i) coarse += half * gl0.w[i] * f(mid + half * gl0.x[i]);
  return rec(a, b, coarse, 0);
}

}  // namespace bogospec
