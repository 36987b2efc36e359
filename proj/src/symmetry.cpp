#include "junctionlab/symmetry.hpp"

#include <cmath>

#include "junctionlab/bulk.hpp"

namespace junctionlab {

SymmetryReport ph_defect(const BdgMatrix& h, double block_tol) {
  SymmetryReport r;
  const Block tx = tau_x();
  const auto n = static_cast<SiteId>(h.dim() / 2);
  double sum = 0.0;
  for (SiteId i = 0; i < n; ++i)
    for (SiteId j = 0; j < n; ++j) {
      const Block b = h.block(i, j);
      if (b.isZero(0.0)) continue;
      const Block d = tx * b.conjugate() * tx + b;
      const double norm = d.norm();
      sum += norm * norm;
      if (norm > block_tol) r.symmetric_terms.push_back({i, j, norm});
    }
  r.defect = std::sqrt(sum);
  return r;
}

double spectrum_symmetry_defect(const EigenSolution& sol) {
  const auto n = sol.values.size();
  double m = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) m = std::max(m, std::abs(sol.values[k] + sol.values[n - 1 - k]));
  return m;
}

std::vector<EdgeModeSample> edge_mode_splitting(RegionKind kind, int n, double t, double delta0,
                                                const std::vector<double>& mu_over_t) {
  std::vector<EdgeModeSample> out;
  for (double ratio : mu_over_t) {
    RegionModel r{"chain", kind, ratio * t, t, delta0, 0.0};
    const DeviceSpec chain = [&] {
      DeviceSpec s;
      s.regions = {r};
      for (int i = 0; i < n; ++i) s.sites.push_back({0, i, 0});
      for (int i = 0; i + 1 < n; ++i) s.bonds.push_back({SiteId(i), SiteId(i + 1)});
      return s;
    }();
    const EigenSolution sol = eig_hermitian(assemble(chain));
    out.push_back({ratio, sol.values.cwiseAbs().minCoeff(), gap_edge(r)});
  }
  return out;
}

nlohmann::json to_json(const SymmetryReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& b : r.symmetric_terms) terms.push_back({{"row", b.row}, {"col", b.col}, {"norm", b.norm}});
  nlohmann::json j = {{"defect", r.defect}, {"symmetric_terms", terms}};
  if (r.spectrum_defect) j["spectrum_defect"] = *r.spectrum_defect;
  return j;
}

}  // namespace junctionlab
