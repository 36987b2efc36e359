#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>

namespace junctionlab {

using cplx = std::complex<double>;

struct SingularInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateSolutions : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised instead of returning an infinite coefficient.
struct BoundStatePole : std::domain_error {
  BoundStatePole(double energy, double phi);
  double energy;
  double phi;
};

/// Natural units m = ħ = 1 by default.
struct ContinuumParams {
  double m = 1.0;
  double hbar = 1.0;
  double mu = 1.0;
  double delta0 = 0.1;
  double phi = 0.0;

  double k_f() const;
  /// μ at least ten times Δ0.
  bool andreev_regime() const { return mu >= 10.0 * delta0; }
};

struct CoherencePair {
  cplx u0;
  cplx v0;
};

/// u0 = √(½(1 + s)), v0 = √(½(1 - s)) with s = √(1 - (Δ/E)²) evaluated at
/// E + i0: real for |E| ≥ Δ, and i·sgn(E)·√((Δ/E)² - 1) inside the gap.
CoherencePair coherence_factors(double energy, double delta);

/// e^{iφ} v0² - u0².
cplx pole_residual(double energy, double phi, double delta);

/// Root of pole_residual in (-Δ, Δ) by bisection; empty at φ = 0 or π
/// (mod 2π), where the bound state sits on the gap edge or at E = 0.
std::optional<double> pole_root(double phi, double delta, double tol = 1e-13);

/// ±Δ √(1 - η² sin²(φ/2)), η being the junction transparency.
std::pair<double, double> abs_energy(double phi, double delta, double eta_transparency);

/// Columns phi_rad, E_plus, E_minus on the sweep grid 2π i / (n_phi - 1).
void write_abs_csv(std::ostream& os, int n_phi, double delta, double eta_transparency);

struct AndreevCoefficients {
  cplx a_pp_hh;
  cplx a_hp_over_a_ph;
};

/// A_pp,hh = (i m / ħ² k_f) e^{-iφ} / (u0² - v0²) and
/// A_hp / A_ph = (e^{iφ} u0² - v0²) / (e^{iφ} v0² - u0²).
AndreevCoefficients andreev_coefficients(double energy, double phi, double delta, const ContinuumParams& params);

/// Which reading of the printed k± formula to evaluate. The dimensionally
/// consistent one squares k_f.
enum class KfReading { Squared, AsPrinted };

/// k±² = k_f^p (1 ± √(E² - Δ²)/μ), for diagnostics only; the Andreev
/// approximation uses k± ≅ k_f everywhere else.
std::pair<cplx, cplx> exact_k_squared(double energy, const ContinuumParams& params,
                                      KfReading reading = KfReading::Squared);

struct BoundarySolution {
  std::function<cplx(double)> value;
  std::function<cplx(double)> derivative;
};

/// G(x, x') = ψ<(min) ψ>(max) / (p W) for the operator (p y')' + q y, with
/// W = ψ< ψ>' - ψ<' ψ> taken at x'.
cplx sl_green(const BoundarySolution& left, const BoundarySolution& right, const std::function<double(double)>& p,
              double x, double xp);

struct DeltaScattering {
  double eta_barrier = 0.0;  // m V_c / (k ħ²)
  cplx b_over_a;
  cplx c_over_a;
  /// From the jump condition: 1 / (V_c - i k ħ² / m).
  cplx c;
  /// A (C/A) with the free-particle A = i m / (k ħ²).
  cplx c_from_scattering;
};

DeltaScattering delta_scattering(double k, double v_c, const ContinuumParams& params);

}  // namespace junctionlab
