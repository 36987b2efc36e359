#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "junctionlab/eig.hpp"

namespace junctionlab {

struct OffendingBlock {
  SiteId row = 0;
  SiteId col = 0;
  double norm = 0.0;
};

struct SymmetryReport {
  /// ‖Tx conj(H) Tx + H‖_F with Tx = τx on every site.
  double defect = 0.0;
  std::vector<OffendingBlock> symmetric_terms;
  std::optional<double> spectrum_defect;
};

/// Blocks whose contribution exceeds block_tol are listed as offending.
SymmetryReport ph_defect(const BdgMatrix& h, double block_tol = 1e-12);

/// max_k |E_k + E_{n-1-k}| over the ascending spectrum.
double spectrum_symmetry_defect(const EigenSolution& sol);

struct EdgeModeSample {
  double mu_over_t = 0.0;
  double min_abs_energy = 0.0;
  double gap_edge = 0.0;
};

/// Lowest |E| of an open n-site chain of the given kind against μ/t, next
/// to the bulk gap edge, so the topological transition can be read off.
std::vector<EdgeModeSample> edge_mode_splitting(RegionKind kind, int n, double t, double delta0,
                                                const std::vector<double>& mu_over_t);

nlohmann::json to_json(const SymmetryReport& r);

}  // namespace junctionlab
