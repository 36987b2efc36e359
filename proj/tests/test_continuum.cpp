#include <catch_amalgamated.hpp>

#include <sstream>

#include "junctionlab/continuum.hpp"
#include "junctionlab/phase.hpp"
#include "junctionlab/sweep.hpp"

using namespace junctionlab;
using Catch::Matchers::WithinAbs;

namespace {

const cplx I(0, 1);

// Dirichlet Green's function of y'' + q y on [0, L] as an eigenfunction sum.
// The q = 0 part is summed in closed form, leaving a tail that falls as n^-4.
double dirichlet_green_sum(double q, double len, double x, double xp, int terms) {
  const double lo = std::min(x, xp), hi = std::max(x, xp);
  double g = -lo * (len - hi) / len;
  for (int n = terms; n >= 1; --n) {
    const double kn = n * kPi / len;
    const double phi = 2.0 / len * std::sin(kn * x) * std::sin(kn * xp);
    g += phi * q / (kn * kn * (q - kn * kn));
  }
  return g;
}

BoundarySolution fn(std::function<cplx(double)> v, std::function<cplx(double)> d) { return {std::move(v), std::move(d)}; }

}  // namespace

TEST_CASE("coherence factors at the limits") {
  auto c = coherence_factors(1e8, 1.0);
  CHECK_THAT(c.u0.real(), WithinAbs(1.0, 1e-12));
  CHECK(std::abs(c.v0) <= 1e-7);
  c = coherence_factors(1.0, 1.0);
  CHECK(c.u0 == cplx(std::sqrt(0.5)));
  CHECK(c.v0 == cplx(std::sqrt(0.5)));
  CHECK_THROWS_AS(coherence_factors(0.0, 1.0), SingularInput);
}

TEST_CASE("coherence factors inside the gap") {
  const double e = std::cos(kPi / 8);
  const auto c = coherence_factors(e, 1.0);
  const cplx d = c.u0 * c.u0 - c.v0 * c.v0;
  CHECK(std::abs(d.real()) <= 1e-15);
  // √(1 - sec²) = i tan for the upper-half continuation.
  CHECK_THAT(d.imag(), WithinAbs(std::tan(kPi / 8), 1e-14));
  // Direct complex evaluation with E + i0.
  const cplx s = std::sqrt(1.0 - std::pow(1.0 / cplx(e, 1e-300), 2));
  CHECK_THAT(std::abs(s - d), WithinAbs(0.0, 1e-14));
  // Negative energies take the other side of the cut.
  const auto m = coherence_factors(-e, 1.0);
  CHECK_THAT((m.u0 * m.u0 - m.v0 * m.v0).imag(), WithinAbs(-std::tan(kPi / 8), 1e-14));
  for (double en : {-3.0, -0.7, -0.01, 0.2, 0.999, 1.0, 1.5})
    CHECK(std::abs(coherence_factors(en, 1.0).u0 * coherence_factors(en, 1.0).u0 +
                   coherence_factors(en, 1.0).v0 * coherence_factors(en, 1.0).v0 - 1.0) <= 1e-12);
}

TEST_CASE("pole residual") {
  const double e = abs_energy(kPi / 2, 1.0, 1.0).first;
  CHECK(std::abs(pole_residual(e, kPi / 2, 1.0)) <= 1e-10);
  CHECK(pole_residual(1.0, 0.0, 1.0) == cplx(0.0));
  CHECK(std::abs(pole_residual(0.5, 0.0, 1.0)) > 0.1);
  CHECK_THROWS_AS(pole_residual(0.0, 1.0, 1.0), SingularInput);
}

TEST_CASE("closed-form bound state energy") {
  auto [p, m] = abs_energy(kPi, 1.0, 1.0);
  CHECK(std::abs(p) <= 1e-12);
  CHECK(std::abs(m) <= 1e-12);
  for (double eta : {0.0, 0.3, 1.0}) {
    std::tie(p, m) = abs_energy(0.0, 1.0, eta);
    CHECK(p == 1.0);
    CHECK(m == -1.0);
  }
  CHECK_THAT(abs_energy(kPi / 2, 1.0, 1.0).first, WithinAbs(std::sqrt(0.5), 1e-12));
  CHECK_THAT(abs_energy(kPi / 2, 2.0, 1.0).second, WithinAbs(-std::sqrt(2.0), 1e-12));
}

TEST_CASE("weak transparency gives a cosine") {
  const double eta = 0.05;
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double phi = kTwoPi * i / 1000;
    const double series = 1.0 - eta * eta / 4 + eta * eta / 4 * std::cos(phi);
    worst = std::max(worst, std::abs(abs_energy(phi, 1.0, eta).first - series));
  }
  // Next term of the expansion is η⁴ sin⁴(φ/2) / 8.
  CHECK(worst <= 1.01 * std::pow(eta, 4) / 8);
  CHECK(worst >= 0.99 * std::pow(eta, 4) / 8);
}

TEST_CASE("bisection root of the pole condition") {
  for (int i = 1; i < 64; ++i) {
    const double phi = kTwoPi * i / 64;
    const auto root = pole_root(phi, 1.0);
    if (i == 32) {
      CHECK_FALSE(root);
      continue;
    }
    REQUIRE(root);
    const auto [ep, em] = abs_energy(phi, 1.0, 1.0);
    CHECK_THAT(*root, WithinAbs(phi < kPi ? ep : em, 1e-9));
  }
  CHECK_FALSE(pole_root(0.0, 1.0));
  CHECK_FALSE(pole_root(kTwoPi, 1.0));
}

TEST_CASE("Andreev coefficients") {
  const ContinuumParams params;
  const double phi = 0.7;
  const auto far = andreev_coefficients(1e9, phi, 0.1, params);
  const cplx limit = I * params.m / (params.hbar * params.hbar * params.k_f()) * std::polar(1.0, -phi);
  CHECK(std::abs(far.a_pp_hh - limit) <= 1e-12);

  const double e = abs_energy(kPi / 3, 0.1, 1.0).first;
  CHECK_THROWS_AS(andreev_coefficients(e, kPi / 3, 0.1, params), BoundStatePole);
  try {
    andreev_coefficients(e, kPi / 3, 0.1, params);
  } catch (const BoundStatePole& pole) {
    CHECK(pole.energy == e);
  }

  // Direct evaluation at E = 0.9Δ, φ = π/3.
  const double d = 0.1, en = 0.9 * d, ph = kPi / 3;
  const cplx s = std::sqrt(cplx(1.0 - (d / en) * (d / en), 1e-300));
  const cplx u2 = 0.5 * (1.0 + s), v2 = 0.5 * (1.0 - s);
  const cplx ex = std::polar(1.0, ph);
  const auto a = andreev_coefficients(en, ph, d, params);
  CHECK(std::abs(a.a_hp_over_a_ph - (ex * u2 - v2) / (ex * v2 - u2)) <= 1e-12);
  CHECK(std::abs(a.a_pp_hh - I / params.k_f() * std::conj(ex) / (u2 - v2)) <= 1e-12);
  CHECK(std::isfinite(std::abs(a.a_pp_hh)));
  CHECK(params.andreev_regime());
  CHECK_FALSE((ContinuumParams{1, 1, 0.5, 0.1, 0}.andreev_regime()));
}

TEST_CASE("exact momenta readings") {
  const ContinuumParams p;
  auto [sp, sm] = exact_k_squared(p.delta0, p);
  CHECK_THAT(sp.real(), WithinAbs(2.0, 1e-14));
  CHECK(sp == sm);
  auto [ap, am] = exact_k_squared(p.delta0, p, KfReading::AsPrinted);
  CHECK_THAT(ap.real(), WithinAbs(std::sqrt(2.0), 1e-14));
  // Inside the gap the momenta pick up an imaginary part.
  std::tie(sp, sm) = exact_k_squared(0.05, p);
  CHECK(sp.imag() > 0.0);
  CHECK_THAT(sm.imag(), WithinAbs(-sp.imag(), 1e-15));
  CHECK_THROWS_AS((ContinuumParams{1, 1, 0.0, 0.1, 0}.k_f()), std::invalid_argument);
}

TEST_CASE("Sturm-Liouville Green's function of a free particle") {
  const double k = 1.3, m = 1.0, hbar = 1.0;
  const auto left = fn([=](double x) { return std::exp(-I * k * x); }, [=](double x) { return -I * k * std::exp(-I * k * x); });
  const auto right = fn([=](double x) { return std::exp(I * k * x); }, [=](double x) { return I * k * std::exp(I * k * x); });
  const auto p = [=](double) { return -hbar * hbar / (2 * m); };
  for (auto [x, xp] : {std::pair{0.0, 0.0}, {0.4, -0.3}, {-1.0, 2.0}, {2.5, 2.5}}) {
    const cplx expect = I * m / (k * hbar * hbar) * std::exp(I * k * std::abs(x - xp));
    CHECK(std::abs(sl_green(left, right, p, x, xp) - expect) <= 1e-13);
  }
  // Continuity at x = x'.
  CHECK(std::abs(sl_green(left, right, p, 0.7 - 1e-9, 0.7) - sl_green(left, right, p, 0.7 + 1e-9, 0.7)) <= 1e-8);
  CHECK_THROWS_AS(sl_green(left, left, p, 0.0, 0.5), DegenerateSolutions);
}

TEST_CASE("Dirichlet Green's functions match eigenfunction sums") {
  const double len = 2.0;
  const auto one = [](double) { return 1.0; };
  const std::pair<double, double> samples[] = {{0.3, 1.1}, {1.7, 0.2}, {1.0, 1.0}, {0.05, 1.95}, {1.4, 0.9}};

  SECTION("oscillating solutions") {
    const double k = 1.1, q = k * k;
    const auto l = fn([=](double x) { return std::sin(k * x); }, [=](double x) { return k * std::cos(k * x); });
    const auto r = fn([=](double x) { return std::sin(k * (len - x)); }, [=](double x) { return -k * std::cos(k * (len - x)); });
    for (auto [x, xp] : samples)
      CHECK_THAT(sl_green(l, r, one, x, xp).real(), WithinAbs(dirichlet_green_sum(q, len, x, xp, 10000), 1e-8));
  }
  SECTION("growing solutions") {
    const double kap = 0.8, q = -kap * kap;
    const auto l = fn([=](double x) { return std::sinh(kap * x); }, [=](double x) { return kap * std::cosh(kap * x); });
    const auto r = fn([=](double x) { return std::sinh(kap * (len - x)); },
                      [=](double x) { return -kap * std::cosh(kap * (len - x)); });
    for (auto [x, xp] : samples)
      CHECK_THAT(sl_green(l, r, one, x, xp).real(), WithinAbs(dirichlet_green_sum(q, len, x, xp, 10000), 1e-8));
  }
}

TEST_CASE("delta potential scattering") {
  const ContinuumParams p;
  auto d = delta_scattering(1.0, 0.0, p);
  CHECK(d.b_over_a == cplx(0.0));
  CHECK(d.c_over_a == cplx(1.0));
  d = delta_scattering(2.0, 2.0, p);  // η = 1
  CHECK(d.eta_barrier == 1.0);
  CHECK_THAT(std::norm(d.b_over_a), WithinAbs(0.5, 1e-15));
  CHECK_THAT(std::norm(d.c_over_a), WithinAbs(0.5, 1e-15));
  for (int i = 1; i <= 100; ++i) {
    const double k = 0.05 * i;
    const auto s = delta_scattering(k, 0.7, p);
    CHECK(std::abs(std::norm(s.b_over_a) + std::norm(s.c_over_a) - 1.0) <= 1e-12);
    CHECK(std::abs(s.c - s.c_from_scattering) <= 1e-12);
  }
  CHECK_THROWS_AS(delta_scattering(0.0, 1.0, p), std::invalid_argument);
}

TEST_CASE("closed-form CSV") {
  std::ostringstream os;
  write_abs_csv(os, 3, 1.0, 1.0);
  CHECK(os.str().rfind("phi_rad,E_plus,E_minus\n0,1,-1\n", 0) == 0);
  CHECK(os.str().find("\n6.283185307179586,1,-1\n") != std::string::npos);
  CHECK_THROWS_AS(write_abs_csv(os, 1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tight-binding bound state follows the closed form") {
  // Small gap against the bandwidth, so the continuum picture applies.
  FamilyParams p;
  p.n = 200;
  p.mu = 0.0;
  p.delta0 = 0.1;
  auto c = make_sweep_config(p, SweptPhase::Phi, 64);
  c.gap_edge = 0.2;
  c.max_states = 2;
  const auto r = sweep(c);
  std::vector<double> phis, energies;
  for (std::size_t i = 0; i < r.phis.size(); ++i) {
    double best = 1e9;
    for (double e : r.in_gap_energies[i])
      if (e > 0.0) best = std::min(best, e);
    REQUIRE(best < 1e9);
    phis.push_back(r.phis[i]);
    energies.push_back(best);
  }
  const double d_eff = energies.front();
  CHECK_THAT(d_eff, WithinAbs(0.1, 0.01));
  auto rms = [&](double eta) {
    double s = 0.0;
    for (std::size_t i = 0; i < phis.size(); ++i) s += std::pow(energies[i] - abs_energy(phis[i], d_eff, eta).first, 2);
    return std::sqrt(s / phis.size());
  };
  // One-parameter golden-section fit.
  double a = 0.0, b = 1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  while (b - a > 1e-6) {
    const double x1 = b - g * (b - a), x2 = a + g * (b - a);
    (rms(x1) < rms(x2) ? b : a) = rms(x1) < rms(x2) ? x2 : x1;
  }
  const double eta = 0.5 * (a + b);
  INFO("eta " << eta << " rms " << rms(eta));
  CHECK(rms(eta) <= 0.03 * d_eff);
  CHECK(eta > 0.9);
}
