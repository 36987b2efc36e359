#include "junctionlab/continuum.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "junctionlab/csv.hpp"
#include "junctionlab/phase.hpp"

namespace junctionlab {

namespace {

constexpr cplx kI(0.0, 1.0);

// Imaginary part of e^{-iφ/2} (e^{iφ} v0² - u0²); the real part vanishes
// inside the gap, so this is the residual as a real function of E.
double reduced_residual(double energy, double phi, double delta) {
  return (std::polar(1.0, -0.5 * phi) * pole_residual(energy, phi, delta)).imag();
}

}  // namespace

BoundStatePole::BoundStatePole(double energy, double phi)
    : std::domain_error("bound-state pole at E=" + std::to_string(energy) + ", phi=" + std::to_string(phi)),
      energy(energy),
      phi(phi) {}

double ContinuumParams::k_f() const {
  if (!(mu > 0.0) || !(m > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("k_f needs m, hbar, mu > 0");
  return std::sqrt(2.0 * m * mu) / hbar;
}

CoherencePair coherence_factors(double energy, double delta) {
  if (energy == 0.0) throw SingularInput("coherence factors are singular at E = 0");
  const double r = (delta / energy) * (delta / energy);
  const cplx s = r <= 1.0 ? cplx(std::sqrt(1.0 - r), 0.0) : cplx(0.0, std::copysign(std::sqrt(r - 1.0), energy));
  return {std::sqrt(0.5 * (1.0 + s)), std::sqrt(0.5 * (1.0 - s))};
}

cplx pole_residual(double energy, double phi, double delta) {
  const auto [u0, v0] = coherence_factors(energy, delta);
  return std::polar(1.0, phi) * v0 * v0 - u0 * u0;
}

std::optional<double> pole_root(double phi, double delta, double tol) {
  const double p = normalize_phase(phi);
  if (p == 0.0 || p == kPi) return std::nullopt;
  // Inside the gap the reduced residual is sin(φ/2) - sgn(E) τ(E) cos(φ/2)
  // with τ falling from ∞ at E = 0 to 0 at |E| = Δ: the root is on the
  // positive side for φ < π and on the negative side for φ > π.
  double lo = p < kPi ? 0.0 : -delta;
  double hi = p < kPi ? delta : 0.0;
  // Sign at the lower end: -∞ as E -> 0+ for φ < π, sin(φ/2) > 0 at E = -Δ.
  double flo = p < kPi ? -1.0 : reduced_residual(lo, p, delta);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = reduced_residual(mid, p, delta);
    if ((fm > 0) == (flo > 0)) {
      lo = mid, flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> abs_energy(double phi, double delta, double eta) {
  const double s = std::sin(0.5 * phi);
  const double e = delta * std::sqrt(std::max(0.0, 1.0 - eta * eta * s * s));
  return {e, -e};
}

void write_abs_csv(std::ostream& os, int n_phi, double delta, double eta) {
  if (n_phi < 2) throw std::invalid_argument("write_abs_csv needs n_phi >= 2");
  os << "phi_rad,E_plus,E_minus\n";
  for (int i = 0; i < n_phi; ++i) {
    const double phi = i + 1 == n_phi ? kTwoPi : kTwoPi * i / (n_phi - 1);
    const auto [ep, em] = abs_energy(phi, delta, eta);
    os << fmt_double(phi) << ',' << fmt_double(ep) << ',' << fmt_double(em) << '\n';
  }
}

AndreevCoefficients andreev_coefficients(double energy, double phi, double delta, const ContinuumParams& params) {
  const auto [u0, v0] = coherence_factors(energy, delta);
  const cplx u2 = u0 * u0, v2 = v0 * v0;
  const cplx e = std::polar(1.0, phi);
  const cplx den = e * v2 - u2;
  if (std::abs(den) <= 1e-10) throw BoundStatePole(energy, phi);
  if (std::abs(u2 - v2) <= 1e-14) throw SingularInput("u0^2 = v0^2: A_pp,hh is undefined");
  const cplx pref = kI * params.m / (params.hbar * params.hbar * params.k_f());
  return {pref * std::conj(e) / (u2 - v2), (e * u2 - v2) / den};
}

std::pair<cplx, cplx> exact_k_squared(double energy, const ContinuumParams& params, KfReading reading) {
  const double kf = params.k_f();
  const cplx root = std::sqrt(cplx(energy * energy - params.delta0 * params.delta0, 0.0)) / params.mu;
  const double pref = reading == KfReading::Squared ? kf * kf : kf;
  return {pref * (1.0 + root), pref * (1.0 - root)};
}

cplx sl_green(const BoundarySolution& left, const BoundarySolution& right, const std::function<double(double)>& p,
              double x, double xp) {
  const cplx l = left.value(xp), dl = left.derivative(xp);
  const cplx r = right.value(xp), dr = right.derivative(xp);
  const cplx w = l * dr - dl * r;
  if (std::abs(w) <= 1e-14 * (std::abs(l * dr) + std::abs(dl * r)) || w == cplx(0.0))
    throw DegenerateSolutions("Wronskian vanishes: boundary solutions are linearly dependent");
  const double lo = std::min(x, xp), hi = std::max(x, xp);
  return left.value(lo) * right.value(hi) / (p(xp) * w);
}

DeltaScattering delta_scattering(double k, double v_c, const ContinuumParams& params) {
  if (!(k > 0.0)) throw std::invalid_argument("delta_scattering needs k > 0");
  const double h2 = params.hbar * params.hbar;
  DeltaScattering d;
  d.eta_barrier = params.m * v_c / (k * h2);
  const cplx den = 1.0 + kI * d.eta_barrier;
  d.b_over_a = -kI * d.eta_barrier / den;
  d.c_over_a = 1.0 / den;
  d.c = 1.0 / (v_c - kI * k * h2 / params.m);
  d.c_from_scattering = kI * params.m / (k * h2) * d.c_over_a;
  return d;
}

}  // namespace junctionlab
