#include <catch_amalgamated.hpp>

#include <random>

#include "jacobi_oracle.hpp"
#include "junctionlab/bdg.hpp"
#include "junctionlab/eig.hpp"

using namespace junctionlab;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXcd random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return 0.5 * (a + a.adjoint());
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
  Eigen::MatrixXcd a = random_hermitian(n, seed) + cplx(0, 1) * random_hermitian(n, seed + 1);
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

}  // namespace

TEST_CASE("2x2 diagonal input") {
  Eigen::MatrixXcd h(2, 2);
  h << 1, 0, 0, -1;
  const auto sol = eig_hermitian(h);
  CHECK(sol.values[0] == -1.0);
  CHECK(sol.values[1] == 1.0);
}

TEST_CASE("two-site Kitaev chain has spectrum -2, 0, 0, 2") {
  const auto sol = eig_hermitian(assemble(oracle::single_chain(RegionKind::KitaevTSC, 2, 0.0, 1.0, 1.0)));
  const double expect[] = {-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) CHECK_THAT(sol.values[k], WithinAbs(expect[k], 1e-14));
}

TEST_CASE("random 8x8 Hermitian matches the Jacobi oracle") {
  const Eigen::MatrixXcd h = random_hermitian(8, 7);
  const auto sol = eig_hermitian(h);
  const auto ref = oracle::jacobi_eigen(h);
  for (int k = 0; k < 8; ++k) {
    CHECK_THAT(sol.values[k], WithinAbs(ref.values[k], 1e-9));
    // Nondegenerate spectrum: vectors agree up to a phase.
    CHECK_THAT(std::abs(ref.vectors.col(k).dot(sol.vectors.col(k))), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("solution invariants on a larger random matrix") {
  const Eigen::MatrixXcd h = random_hermitian(60, 11);
  const auto sol = eig_hermitian(h);
  const double fro = h.norm();
  for (Eigen::Index k = 1; k < sol.values.size(); ++k) CHECK(sol.values[k - 1] <= sol.values[k]);
  CHECK(sol.max_residual <= 1e-9 * fro);
  CHECK(orthogonality_defect(sol.vectors) <= 1e-10);
  const Eigen::MatrixXcd rec = sol.vectors * sol.values.asDiagonal() * sol.vectors.adjoint();
  CHECK((rec - h).norm() <= 1e-8 * fro);
}

TEST_CASE("eigenvalues survive a unitary similarity") {
  const Eigen::MatrixXcd h = random_hermitian(24, 3);
  const Eigen::MatrixXcd u = random_unitary(24, 5);
  const auto a = eig_hermitian(h);
  const auto b = eig_hermitian(Eigen::MatrixXcd(u * h * u.adjoint()));
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("identical input gives bitwise identical output") {
  const Eigen::MatrixXcd h = random_hermitian(30, 21);
  const auto a = eig_hermitian(h);
  const auto b = eig_hermitian(h);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("degenerate clusters get a basis that depends only on the subspace") {
  // Same eigenspaces, different rotations inside the degenerate pair.
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d.diagonal() << 1.0, 1.0, 2.0, 3.0;
  const Eigen::MatrixXcd q = random_unitary(4, 9);
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Identity(4, 4);
  mix.topLeftCorner(2, 2) = random_unitary(2, 13);
  const Eigen::MatrixXcd q2 = q * mix;
  const Eigen::MatrixXcd h1 = q * d * q.adjoint();
  const Eigen::MatrixXcd h2 = q2 * d * q2.adjoint();
  const auto a = eig_hermitian(Eigen::MatrixXcd(0.5 * (h1 + h1.adjoint())));
  const auto b = eig_hermitian(Eigen::MatrixXcd(0.5 * (h2 + h2.adjoint())));
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() <= 1e-10);
  // The largest component of every vector is real and positive.
  for (Eigen::Index k = 0; k < 4; ++k) {
    Eigen::Index i = 0;
    a.vectors.col(k).cwiseAbs().maxCoeff(&i);
    CHECK(a.vectors(i, k).imag() == 0.0);
    CHECK(a.vectors(i, k).real() > 0.0);
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  Eigen::MatrixXcd h(2, 2);
  h << 0, 1, 0, 0;
  CHECK_THROWS_AS(eig_hermitian(h), NonHermitianInput);
  CHECK_THROWS_AS(eig_hermitian(Eigen::MatrixXcd(2, 3)), NonHermitianInput);
}

TEST_CASE("empty input gives an empty solution") {
  const auto sol = eig_hermitian(Eigen::MatrixXcd(0, 0));
  CHECK(sol.values.size() == 0);
  CHECK(orthogonality_defect(sol.vectors) == 0.0);
}

TEST_CASE("windowed solve keeps only the requested eigenpairs") {
  const Eigen::MatrixXcd h = random_hermitian(40, 17);
  const auto ref = oracle::jacobi_eigen(h);
  const double lo = -1.0, hi = 2.0;
  const auto w = eig_hermitian_window(h, lo, hi);
  std::vector<double> expected;
  for (Eigen::Index k = 0; k < ref.values.size(); ++k)
    if (ref.values[k] > lo && ref.values[k] <= hi) expected.push_back(ref.values[k]);
  REQUIRE(w.values.size() == static_cast<Eigen::Index>(expected.size()));
  REQUIRE(!expected.empty());
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK_THAT(w.values[k], WithinAbs(expected[k], 1e-12));
  CHECK(w.max_residual <= 1e-12);
  CHECK(orthogonality_defect(w.vectors) <= 1e-12);
  for (Eigen::Index k = 0; k < w.vectors.cols(); ++k) {
    Eigen::Index top;
    w.vectors.col(k).cwiseAbs().maxCoeff(&top);
    CHECK(w.vectors(top, k).imag() == 0.0);
  }
  CHECK(eig_hermitian_window(h, 100.0, 101.0).values.size() == 0);
  CHECK_THROWS_AS(eig_hermitian_window(h, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("windowed and full solves agree on a degenerate device") {
  // Two identical decoupled chains: every level is doubly degenerate.
  DeviceSpec spec;
  spec.regions.push_back({"a", RegionKind::NormalSC, 0.3, 1.0, 0.5, 0.0});
  spec.regions.push_back({"b", RegionKind::NormalSC, 0.3, 1.0, 0.5, 0.0});
  for (std::size_t r = 0; r < 2; ++r)
    for (int i = 0; i < 8; ++i) spec.sites.push_back({r, i, int(r) * 2});
  for (SiteId i = 0; i < 7; ++i) {
    spec.bonds.push_back({i, i + 1});
    spec.bonds.push_back({i + 8, i + 9});
  }
  const auto h = assemble(spec).h;
  const auto full = eig_hermitian(h);
  const auto w = eig_hermitian_window(h, -1.0, 1.0);
  Eigen::Index first = 0;
  while (full.values[first] <= -1.0) ++first;
  REQUIRE(w.values.size() > 1);
  for (Eigen::Index k = 0; k < w.values.size(); ++k) {
    CHECK_THAT(w.values[k], WithinAbs(full.values[first + k], 1e-12));
    CHECK((w.vectors.col(k) - full.vectors.col(first + k)).norm() <= 1e-9);
  }
}
