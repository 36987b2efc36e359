#include "junctionlab/bdg.hpp"

#include <limits>
#include <ostream>

#include "junctionlab/csv.hpp"
#include "junctionlab/phase.hpp"

namespace junctionlab {

Block tau_x() {
  Block b;
  b << 0, 1, 1, 0;
  return b;
}

Block tau_y() {
  const cplx i(0, 1);
  Block b;
  b << 0, -i, i, 0;
  return b;
}

Block tau_z() {
  Block b;
  b << 1, 0, 0, -1;
  return b;
}

Block pairing_onsite_block(double delta0, double phi) {
  const cplx e = std::polar(1.0, normalize_phase(phi));
  Block b;
  b << 0, delta0 * e, delta0 * std::conj(e), 0;
  return b;
}

Block kitaev_hopping_block(double delta0) {
  Block b;
  b << 0, -delta0, delta0, 0;
  return b;
}

Block tsc_phase_hopping_block(double delta0, double phi) {
  return -pairing_onsite_block(delta0, phi) * tau_z();
}

BdgMatrix assemble(const DeviceSpec& spec, unsigned terms) {
  if (auto v = validate(spec); !v.empty())
    throw InvalidDevice("invalid device: " + to_string(v.front().kind) + " (" + v.front().detail + ")");
  const auto n = static_cast<Eigen::Index>(spec.size());
  BdgMatrix m{Eigen::MatrixXcd::Zero(2 * n, 2 * n)};
  auto put = [&](SiteId row, SiteId col, const Block& b) { m.h.block<2, 2>(2 * row, 2 * col) += b; };
  // Off-diagonal block at (to, from) plus its Hermitian partner.
  auto put_pair = [&](SiteId from, SiteId to, const Block& b) {
    put(to, from, b);
    put(from, to, b.adjoint());
  };
  const bool normal = terms & kNormalTerms;

  for (SiteId s = 0; s < spec.size(); ++s) {
    const auto& r = spec.regions[spec.sites[s].region];
    if (normal) put(s, s, -r.mu * tau_z());
    if ((terms & kOnsitePairing) && r.kind == RegionKind::NormalSC) put(s, s, pairing_onsite_block(r.delta0, r.phase));
  }
  for (const auto& b : spec.bonds) {
    const auto& r = spec.regions[spec.sites[b.from].region];
    if (normal) put_pair(b.from, b.to, -r.t * tau_z());
    if (!(terms & kHoppingPairing)) continue;
    if (r.kind == RegionKind::KitaevTSC) put_pair(b.from, b.to, kitaev_hopping_block(r.delta0));
    if (r.kind == RegionKind::TscPhaseHopping) put_pair(b.from, b.to, tsc_phase_hopping_block(r.delta0, r.phase));
  }
  if (normal)
    for (const auto& c : spec.couplings) put_pair(c.site_a, c.site_b, -c.strength * tau_z());
  return m;
}

double hermiticity_defect(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

void write_matrix_csv(std::ostream& os, const BdgMatrix& m) {
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.dim(); ++r)
    for (Eigen::Index c = 0; c < m.dim(); ++c) {
      const cplx z = m.h(r, c);
      if (z == cplx(0)) continue;
      os << r << ',' << c << ',' << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << '\n';
    }
}

}  // namespace junctionlab
