#include "junctionlab/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "junctionlab/csv.hpp"
#include "junctionlab/phase.hpp"

namespace junctionlab {

namespace {

DeviceSpec open_chain(const RegionModel& region, int n) {
  DeviceSpec spec;
  spec.regions = {region};
  spec.regions[0].phase = normalize_phase(region.phase);
  for (int i = 0; i < n; ++i) spec.sites.push_back({0, i, 0});
  for (int i = 0; i + 1 < n; ++i) spec.bonds.push_back({SiteId(i), SiteId(i + 1)});
  return spec;
}

// Eigenvalues of a 2x2 Hermitian block, ascending.
std::pair<double, double> eig2(const Block& b) {
  const double a = b(0, 0).real(), d = b(1, 1).real();
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(b(0, 1)));
  return {mean - r, mean + r};
}

double abs_min(const RegionModel& region, double k) {
  auto [lo, hi] = eig2(bloch_block(region, k));
  return std::min(std::abs(lo), std::abs(hi));
}

double golden_min(const RegionModel& region, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = abs_min(region, c), fd = abs_min(region, d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = abs_min(region, c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = abs_min(region, d);
    }
  }
  return std::min({fc, fd, abs_min(region, 0.5 * (a + b))});
}

}  // namespace

ChainStencil chain_stencil(const RegionModel& region) {
  const BdgMatrix m = assemble(open_chain(region, 3));
  return {m.block(1, 1), m.block(2, 1)};
}

Block bloch_block(const RegionModel& region, double k) {
  const ChainStencil s = chain_stencil(region);
  const cplx e = std::polar(1.0, -k);
  return s.onsite + s.hop * e + s.hop.adjoint() * std::conj(e);
}

BulkBands bulk_bands(const RegionModel& region, int n_k) {
  if (n_k < 16) throw std::invalid_argument("bulk_bands: n_k must be >= 16");
  const ChainStencil s = chain_stencil(region);
  BulkBands out;
  std::vector<double> amin;
  for (int i = 0; i < n_k; ++i) {
    const double k = i == n_k - 1 ? kPi : -kPi + kTwoPi * i / (n_k - 1);
    const cplx e = std::polar(1.0, -k);
    auto [lo, hi] = eig2(s.onsite + s.hop * e + s.hop.adjoint() * std::conj(e));
    out.k.push_back(k);
    out.e_minus.push_back(lo);
    out.e_plus.push_back(hi);
    amin.push_back(std::min(std::abs(lo), std::abs(hi)));
  }
  out.gap_edge = *std::min_element(amin.begin(), amin.end());
  for (int i = 0; i < n_k; ++i) {
    const int l = std::max(i - 1, 0), r = std::min(i + 1, n_k - 1);
    if (amin[i] <= amin[l] && amin[i] <= amin[r])
      out.gap_edge = std::min(out.gap_edge, golden_min(region, out.k[l], out.k[r]));
  }
  return out;
}

double gap_edge(const RegionModel& region) { return bulk_bands(region, 1024).gap_edge; }

double device_gap_edge(const DeviceSpec& spec) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& r : spec.regions) g = std::min(g, gap_edge(r));
  return g;
}

DeviceSpec build_ring(const RegionModel& region, int n) {
  if (n < 3) throw InvalidGeometry("ring needs at least 3 sites");
  DeviceSpec spec = open_chain(region, n);
  spec.bonds.push_back({SiteId(n - 1), 0});
  return spec;
}

void write_bulk_csv(std::ostream& os, const BulkBands& bands) {
  os << "k,E_minus,E_plus\n";
  for (std::size_t i = 0; i < bands.k.size(); ++i)
    os << fmt_double(bands.k[i]) << ',' << fmt_double(bands.e_minus[i]) << ',' << fmt_double(bands.e_plus[i])
       << '\n';
}

}  // namespace junctionlab
