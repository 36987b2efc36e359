#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <stdexcept>

#include "junctionlab/lattice.hpp"

namespace junctionlab {

using cplx = std::complex<double>;
using Block = Eigen::Matrix2cd;

struct InvalidDevice : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Block tau_x();
Block tau_y();
Block tau_z();

/// Δ0 [[0, e^{iφ}], [e^{-iφ}, 0]] = Δ0 (τx cos φ - τy sin φ).
Block pairing_onsite_block(double delta0, double phi);
/// -iΔ0 τy, the n+1 <- n block.
Block kitaev_hopping_block(double delta0);
/// -Δ̂(φ) τz, the n+1 <- n block.
Block tsc_phase_hopping_block(double delta0, double phi);

/// Nambu basis: site s occupies rows 2s (particle) and 2s+1 (hole).
struct BdgMatrix {
  Eigen::MatrixXcd h;

  Eigen::Index dim() const { return h.rows(); }
  static Eigen::Index offset(SiteId s) { return 2 * static_cast<Eigen::Index>(s); }
  Block block(SiteId row, SiteId col) const { return h.block<2, 2>(offset(row), offset(col)); }
};

/// Term groups, combinable as bit flags.
enum Terms : unsigned {
  kNormalTerms = 1u,     // -μτz onsite, -tτz hopping, -Vτz couplings
  kOnsitePairing = 2u,   // NormalSC onsite Δ̂
  kHoppingPairing = 4u,  // KitaevTSC and TscPhaseHopping bond pairing
  kAllTerms = 7u,
};

/// Onsite terms enter once; "+h.c." supplies only the partner of each
/// off-diagonal block.
BdgMatrix assemble(const DeviceSpec& spec, unsigned terms = kAllTerms);

double hermiticity_defect(const Eigen::MatrixXcd& h);

/// Nonzero entries as (row, col, re, im).
void write_matrix_csv(std::ostream& os, const BdgMatrix& m);

}  // namespace junctionlab
