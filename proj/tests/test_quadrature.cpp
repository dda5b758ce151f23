#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bogospec/interp.hpp"
#include "bogospec/quadrature.hpp"

using namespace bogospec;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  GaussLegendre gl(8);
  double s = 0;
  for (size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * std::pow(gl.x[i], 14);
  REQUIRE(s == Catch::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("panel rule handles smooth integrands") {
  double v = integrate_gl([](double x) { return std::exp(-x) * std::sin(3 * x); }, 0.0, 5.0,
                          16, 10);
  double exact = (3.0 - std::exp(-5.0) * (3.0 * std::cos(15.0) + std::sin(15.0))) / 10.0;
  REQUIRE(v == Catch::Approx(exact).epsilon(1e-12));
}

TEST_CASE("adaptive integrator hits tight tolerance") {
  double v = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-4); }, 0.0, 1.0,
                                1e-12);
  double exact = 2.0 * (std::sqrt(1.0 + 1e-4) - std::sqrt(1e-4));
  REQUIRE(v == Catch::Approx(exact).epsilon(1e-10));
}

TEST_CASE("graded panels accumulate near the left edge") {
  auto r = PanelRule::graded(0.0, 1.0, 20, 6, 1.4);
  REQUIRE(r.x.front() < 1e-3);
  double v = r.integrate([](double x) { return std::sqrt(x); });
  REQUIRE(v == Catch::Approx(2.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("spline reproduces smooth functions and derivatives") {
  std::vector<double> x, y;
  for (int i = 0; i <= 200; ++i) {
    double t = i / 200.0 * 3.0;
    x.push_back(t);
    y.push_back(std::sin(t));
  }
  Spline s(x, y);
  REQUIRE(s(1.234) == Catch::Approx(std::sin(1.234)).epsilon(1e-8));
  REQUIRE(s.deriv(1.234) == Catch::Approx(std::cos(1.234)).margin(1e-6));
}

TEST_CASE("hermite curve interpolates ODE-style samples") {
  std::vector<double> x, y, yp;
  for (int i = 0; i <= 100; ++i) {
    double t = i / 100.0 * 2.0;
    x.push_back(t);
    y.push_back(std::exp(-t));
    yp.push_back(-std::exp(-t));
  }
  HermiteCurve h(x, y, yp);
  REQUIRE(h(0.777) == Catch::Approx(std::exp(-0.777)).epsilon(1e-9));
  REQUIRE(h.deriv(0.777) == Catch::Approx(-std::exp(-0.777)).epsilon(1e-7));
}
