#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "bogospec/operator_algebra.hpp"

using namespace bogospec;

static DiscretizationSpec disc(int nr = 24) {
  DiscretizationSpec d;
  d.l_max = 3;
  d.n_r = nr;
  d.r_max = 15.0;
  d.quad_panels = 60;
  d.quad_order = 10;
  return d;
}

TEST_CASE("box H_GP is diagonal |p|^2") {
  auto lat = std::make_shared<BoxLattice>(BoxLattice::build(6 * pi));
  DiscretizationSpec d;
  d.backend = Backend::PlaneWave;
  auto st = minimize_gp(TrapPotential::box(), 0.2384, d);
  auto H = build_hgp(st, lat);
  for (int i = 0; i < lat->size(); ++i) REQUIRE(H.diag[i] == Catch::Approx(lat->p2[i]).margin(1e-12));
}

TEST_CASE("harmonic a0=0 H_GP has the shifted oscillator ladder") {
  auto d = disc();
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.0, d, 1e-11);
  auto H = build_hgp(st, TrapPotential::harmonic(1.0), st.basis);
  // block l: eigenvalues 4n + 2l + 3 - 3
  for (int l = 0; l <= 2; ++l) {
    Eigen::SelfAdjointEigenSolver<Mat> es(H.blocks[l]);
    for (int n = 0; n < 3; ++n)
      REQUIRE(es.eigenvalues()[n] == Catch::Approx(4.0 * n + 2.0 * l).margin(1e-8));
  }
  REQUIRE(hgp_phi_residual(H, st) < 1e-9);
}

TEST_CASE("H_GP annihilates the interacting minimizer") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2384, disc(), 1e-11);
  auto H = build_hgp(st, TrapPotential::harmonic(1.0), st.basis);
  REQUIRE(hgp_phi_residual(H, st) <= 10 * std::max(st.residual, 1e-12));
  REQUIRE(min_eigenvalue(H) > -1e-8);
}

TEST_CASE("op_function: identity, sqrt of a diagonal, and sqrt squared") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.1, disc(), 1e-10);
  auto H = build_hgp(st, TrapPotential::harmonic(1.0), st.basis);
  auto same = op_function(H, [](double x) { return x; });
  double diff = 0;
  for (size_t l = 0; l < H.blocks.size(); ++l)
    diff = std::max(diff, (H.blocks[l] - same.blocks[l]).norm());
  REQUIRE(diff < 1e-9);

  // random PSD: sqrt squared returns the matrix
  std::mt19937 rng(42);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 5; ++rep) {
    int n = 8;
    Mat A = Mat::NullaryExpr(n, n, [&]() { return g(rng); });
    Mat P = A * A.transpose();
    OperatorRep op;
    op.backend = Backend::RadialChannels;
    op.blocks = {P};
    auto r = op_function(op, [](double x) { return std::sqrt(x); }, 1e-9 * P.norm());
    REQUIRE((r.blocks[0] * r.blocks[0] - P).norm() < 1e-10 * std::max(1.0, P.norm()));
  }
}

TEST_CASE("op_function flags genuine negativity under sqrt") {
  OperatorRep op;
  op.backend = Backend::RadialChannels;
  Mat A(2, 2);
  A << 1.0, 0.0, 0.0, -0.5;
  op.blocks = {A};
  REQUIRE_THROWS_AS(op_function(op, [](double x) { return std::sqrt(x); }, 1e-9),
                    NumericalError);
}

TEST_CASE("project_perp annihilates the condensate direction") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2, disc(), 1e-10);
  auto H = build_hgp(st, TrapPotential::harmonic(1.0), st.basis);
  auto Hq = project_perp(H, st);
  REQUIRE(std::abs(st.coeff.dot(Hq.blocks[0] * st.coeff)) < 1e-12);
  REQUIRE(Hq.perp_flag);

  // trace identity tr(QAQ) = tr(A) - <φ|A|φ> on random symmetric A
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  OperatorRep A = H;
  for (auto& b : A.blocks) {
    Mat r = Mat::NullaryExpr(b.rows(), b.cols(), [&]() { return g(rng); });
    b = 0.5 * (r + r.transpose());
  }
  auto Aq = project_perp(A, st);
  double phiA = st.coeff.dot(A.blocks[0] * st.coeff);
  REQUIRE(Aq.trace() == Catch::Approx(A.trace() - phiA).margin(1e-9));
}

TEST_CASE("eigenvalues are invariant under an orthogonal re-basis") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.15, disc(), 1e-10);
  auto H = build_hgp(st, TrapPotential::harmonic(1.0), st.basis);
  Mat block = H.blocks[1];
  // random rotation via QR
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  Mat R = Mat::NullaryExpr(block.rows(), block.cols(), [&]() { return g(rng); });
  Eigen::HouseholderQR<Mat> qr(R);
  Mat Q = qr.householderQ();
  Mat rotated = Q.transpose() * block * Q;
  Eigen::SelfAdjointEigenSolver<Mat> e1(block), e2(rotated);
  REQUIRE((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("short-range matrix: zero profile gives the zero matrix") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2, disc(), 1e-10);
  KernelProfile W;
  W.f = [](double) { return 0.0; };
  W.support = 1.0;
  auto K = short_range_matrix(W, 100.0, st, 2, st.basis);
  for (auto& b : K.blocks) REQUIRE(b.norm() == 0.0);
}

TEST_CASE("short-range diagonal expectation reproduces (∫W)·||φ||_4^4") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2384, disc(), 1e-10);
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto W = profile_V(V);
  REQUIRE(W.moment(0) == Catch::Approx(8.0 * pi / 3.0).epsilon(1e-12));
  auto K = short_range_matrix(W, 200.0, st, 0, st.basis);
  double expect = st.coeff.dot(K.blocks[0] * st.coeff);
  REQUIRE(expect == Catch::Approx(W.moment(0) * st.quartic_norm).epsilon(1e-10));
}

TEST_CASE("box short-range matrix equals the momentum-space evaluation") {
  auto lat = std::make_shared<BoxLattice>(BoxLattice::build(8 * pi));
  auto V = RadialPotential::soft_ball(2.0, 1.0);
  auto W = profile_V(V);
  double N = 100.0;
  auto K = short_range_matrix(W, N, lat);
  REQUIRE(K.diag[0] == Catch::Approx(V.moment(0)).epsilon(1e-12));
  for (int i = 0; i < lat->size(); ++i) {
    double q = std::sqrt(lat->p2[i]) / N;
    REQUIRE(K.diag[i] == Catch::Approx(V.fourier(q)).margin(1e-12));
  }
}

TEST_CASE("order-2 correction scales like 1/N^2") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2384, disc(), 1e-10);
  auto W = profile_V(RadialPotential::soft_ball(2.0, 1.0));
  double prev = -1;
  std::vector<double> diffs;
  for (double N : {50.0, 100.0, 200.0}) {
    auto K0 = short_range_matrix(W, N, st, 0, st.basis);
    auto K2 = short_range_matrix(W, N, st, 2, st.basis);
    double d = 0;
    for (size_t l = 0; l < K0.blocks.size(); ++l)
      d = std::max(d, (K0.blocks[l] - K2.blocks[l]).norm());
    diffs.push_back(d);
    (void)prev;
  }
  REQUIRE(diffs[0] / diffs[1] == Catch::Approx(4.0).epsilon(0.05));
  REQUIRE(diffs[1] / diffs[2] == Catch::Approx(4.0).epsilon(0.05));
}

TEST_CASE("exact convolution profile matches the moment expansion for large N") {
  auto st = minimize_gp(TrapPotential::harmonic(1.0), 0.2384, disc(), 1e-10);
  auto W = profile_V(RadialPotential::soft_ball(2.0, 1.0));
  double N = 400.0;
  ShortRangeConvolution conv(W, N, st, 15.0);
  double m0 = W.moment(0);
  for (double r : {0.0, 0.5, 1.3, 3.0}) {
    REQUIRE(conv(r) == Catch::Approx(m0 * sq(st.phi(r))).margin(2e-5 * m0));
  }
}
