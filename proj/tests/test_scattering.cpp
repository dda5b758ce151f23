#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bogospec/radial_potential.hpp"
#include "bogospec/scattering.hpp"

using namespace bogospec;

// soft ball v0=2, R=1: interior u = sinh(r)/cosh(1), exterior u = r - a0,
// matching gives a0 = 1 - tanh(1)
static const double kSoftBallA0 = 1.0 - std::tanh(1.0);

TEST_CASE("soft ball scattering length matches the closed form") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto s = solve_zero_energy(V, 10.0, 1e-11);
  REQUIRE(s.a0 == Catch::Approx(kSoftBallA0).epsilon(1e-9));
  REQUIRE(s.born_integral == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  REQUIRE(s.a0 < s.born_integral);
  REQUIRE(s.a0 >= 0.0);
}

TEST_CASE("free potential gives zero scattering length and f = 1") {
  auto s = solve_zero_energy(RadialPotential::zero(), 5.0);
  REQUIRE(s.a0 == 0.0);
  REQUIRE(s.f(0.3) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(s.f(4.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("exterior profile is 1 - a0/r and matches the interior at the edge") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto s = solve_zero_energy(V, 12.0, 1e-11);
  for (double r : {1.5, 3.0, 7.0, 11.0}) {
    REQUIRE(s.f(r) == Catch::Approx(1.0 - s.a0 / r).margin(1e-10));
  }
  // interior closed form sinh(r)/(r cosh 1)
  for (double r : {0.2, 0.5, 0.9}) {
    REQUIRE(s.f(r) == Catch::Approx(std::sinh(r) / (r * std::cosh(1.0))).margin(1e-9));
  }
}

TEST_CASE("scaling: N^2 V(N.) has scattering length a0/N") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  double a0 = solve_zero_energy(V, 10.0, 1e-11).a0;
  for (double N : {2.0, 10.0}) {
    auto VN = V.rescaled(N);
    double aN = solve_zero_energy(VN, 10.0 / N + 2.0, 1e-11).a0;
    REQUIRE(aN == Catch::Approx(a0 / N).epsilon(1e-7));
  }
}

TEST_CASE("a0 is nondecreasing in the soft-ball strength") {
  double prev = -1;
  for (double v0 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    double a = solve_zero_energy(RadialPotential::soft_ball(v0, 1.0), 8.0, 1e-10).a0;
    REQUIRE(a > prev);
    prev = a;
  }
}

TEST_CASE("tabulated potential agrees with its closed-form twin") {
  // fine piecewise-linear sampling of the soft ball edge-aligned
  std::vector<double> r{0.0, 1.0 - 1e-9, 1.0, 1.2};
  std::vector<double> v{2.0, 2.0, 0.0, 0.0};
  auto V = RadialPotential::tabulated(r, v);
  auto s = solve_zero_energy(V, 8.0, 1e-9);
  REQUIRE(s.a0 == Catch::Approx(kSoftBallA0).margin(1e-6));
}

TEST_CASE("Neumann: free potential gives the constant ground state") {
  auto n = solve_neumann(RadialPotential::zero(), 25.0);
  REQUIRE(n.lambda == 0.0);
  REQUIRE(n.f(3.0) == 1.0);
  REQUIRE(n.w(3.0) == 0.0);
  REQUIRE(n.moments.Vw == 0.0);
  REQUIRE(n.moments.ball_w2 == 0.0);
}

TEST_CASE("Neumann: boundary normalization and Neumann condition") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto n = solve_neumann(V, 50.0, 1e-11);
  REQUIRE(n.lambda > 0.0);
  REQUIRE(n.f(50.0) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(n.fp(49.999999) == Catch::Approx(0.0).margin(1e-7));
  // eigenvalue scale ~ 3 a0 / B^3
  double a0 = kSoftBallA0;
  REQUIRE(n.lambda == Catch::Approx(3.0 * a0 / std::pow(50.0, 3)).epsilon(0.25));
}

TEST_CASE("Neumann identity: (1/2)∫V f = λ ∫_ball f") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto n = solve_neumann(V, 40.0, 1e-11);
  double lhs = 0.5 * n.moments.Vf;
  double rhs = n.lambda * n.profile_moment([&](double t) { return n.f(t); }, 0, false);
  REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("Neumann: large-ball limit reproduces 8 pi a0 and monotone lambda") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto s = solve_zero_energy(V, 10.0, 1e-11);
  auto n = solve_neumann(V, 50.0, 1e-11);
  REQUIRE(n.moments.Vf == Catch::Approx(8.0 * pi * s.a0).epsilon(0.05));
  auto n2 = solve_neumann(V, 100.0, 1e-11);
  REQUIRE(n2.lambda < n.lambda);
  // f_l -> f pointwise on compacts as the ball grows
  double err_prev = 1e9;
  for (double B : {25.0, 50.0, 100.0}) {
    auto nb = solve_neumann(V, B, 1e-11);
    double err = 0;
    for (double t : {0.3, 0.8, 2.0, 5.0})
      err = std::max(err, std::abs(nb.f(t) - s.f(t)));
    REQUIRE(err < err_prev);
    err_prev = err;
  }
}

TEST_CASE("Neumann: pointwise decay bounds hold with a moderate constant") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto n = solve_neumann(V, 80.0, 1e-10);
  auto [c0, c1] = n.fitted_bound_constants();
  REQUIRE(c0 > 0);
  REQUIRE(c0 < 10.0);
  REQUIRE(c1 < 10.0);
}

TEST_CASE("Neumann rejects a ball inside the support") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  REQUIRE_THROWS_AS(solve_neumann(V, 0.5), ValidationError);
}

TEST_CASE("moments are stable to 8+ digits under quadrature refinement") {
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto n = solve_neumann(V, 50.0, 1e-11);
  auto n2 = solve_neumann(V, 50.0, 1e-13);
  REQUIRE(n.moments.Vf == Catch::Approx(n2.moments.Vf).epsilon(1e-9));
  REQUIRE(n.moments.Vw2 == Catch::Approx(n2.moments.Vw2).epsilon(1e-8));
  REQUIRE(n.moments.ball_w == Catch::Approx(n2.moments.ball_w).epsilon(1e-8));
}
