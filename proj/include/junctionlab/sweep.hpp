#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "junctionlab/eig.hpp"
#include "junctionlab/lattice.hpp"

namespace junctionlab {

enum class DeviceFamily { ScSc, ScTsc, TscTsc, Msq };
enum class SweptPhase { Phi, Phi1, Phi2 };

std::string to_string(DeviceFamily f);
DeviceFamily device_family_from_string(const std::string& s);
std::string to_string(SweptPhase p);
SweptPhase swept_phase_from_string(const std::string& s);

/// Parameters of one of the four canonical device families. `coupling` is
/// the junction hopping (SC-SC), V_c (SC-TSC) or the TSC-TSC junction
/// hopping, where a negative value means "use t".
struct FamilyParams {
  DeviceFamily family = DeviceFamily::ScSc;
  int n = 30;
  double mu = 0.5;
  double mu_right = 0.5;
  double t = 1.0;
  double delta0 = 1.0;
  double coupling = 1.0;
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::array<double, 6> gates{1, 1, 0, 1, 1, 0};
  MsqGeometry geometry;
  MsqMaterial material;
};

DeviceSpec build_family(const FamilyParams& p);

struct SweepConfig {
  DeviceSpec base;
  /// Regions whose phase is offset by the swept value.
  std::vector<std::size_t> swept_regions;
  std::string swept_name = "phi";
  int n_phi = 128;
  bool track = true;
  int threads = 1;
  bool refine_crossings = true;
  double crossing_tol = 1e-4;
  /// Defaults to device_gap_edge(base).
  std::optional<double> gap_edge;
  /// Extra |E| <= window requirement for in-gap states.
  std::optional<double> energy_window;
  /// Keep only this many in-gap states per grid point.
  std::optional<int> max_states;
  /// When non-empty, states are ranked by their weight on these regions
  /// (largest first) instead of by |E| before max_states is applied.
  std::vector<std::size_t> rank_regions;
  /// States closer than this are treated as one subspace during tracking.
  double degeneracy_tol = 1e-6;
  bool letter_labels = false;
  /// Free-form parameters copied into the JSON sidecar.
  nlohmann::json description = nlohmann::json::object();
};

/// Validates the swept phase against the family (φ1, φ2 are MSQ only).
SweepConfig make_sweep_config(const FamilyParams& p, SweptPhase swept, int n_phi = 128, bool track = true);

struct CurvePoint {
  double phi = 0.0;
  double energy = 0.0;
  /// |<v(φ_prev), v(φ)>|; 1 at the first point of a curve.
  double overlap = 1.0;
  std::size_t grid_index = 0;
  Eigen::VectorXcd state;
};

enum class CurveEnd { GridEdge, CountChange, LowOverlap };
std::string to_string(CurveEnd e);

struct BoundStateCurve {
  int branch_id = 0;
  std::string label;
  std::vector<CurvePoint> points;
  std::vector<double> crossings;
  CurveEnd start = CurveEnd::GridEdge;
  CurveEnd end = CurveEnd::GridEdge;

  bool full_span(std::size_t n_phi) const;
  bool split() const { return start == CurveEnd::LowOverlap || end == CurveEnd::LowOverlap; }
  double mean_energy() const;
  double spread() const;
  double max_abs() const;
  double min_overlap() const;
};

struct SweepResult {
  std::vector<double> phis;
  double gap_edge = 0.0;
  std::vector<BoundStateCurve> curves;
  /// Every in-gap energy at each grid point, ascending.
  std::vector<std::vector<double>> in_gap_energies;
  /// For curves spanning the full grid: branch index whose φ=0 state the
  /// branch ends on at φ=2π.
  std::vector<std::pair<int, int>> end_permutation;
  bool branch_exchange = false;
};

std::vector<std::size_t> classify_in_gap(const EigenSolution& sol, double gap_edge,
                                         std::optional<double> energy_window = {});

/// The states a sweep keeps at one grid point: in-gap (and inside the energy
/// window), ranked and cut to max_states, returned in ascending order.
std::vector<std::size_t> select_states(const SweepConfig& config, const DeviceSpec& spec, const EigenSolution& sol,
                                       double gap_edge);

/// Grid φ_i = 2π i / (n_phi - 1), i = 0..n_phi-1.
std::vector<double> phase_grid(int n_phi);

SweepResult sweep(const SweepConfig& config);

/// Single diagonalization at one value of the swept phase. With an energy
/// window set, only the eigenpairs with |E| <= window are computed.
EigenSolution solve_at(const SweepConfig& config, double phi);
DeviceSpec device_at(const SweepConfig& config, double phi);

/// The eight island-weighted in-gap branches of the two-island device,
/// labeled a-h by mean energy, swept over φ.
SweepResult msq_sweep(double phi1, double phi2, int n_phi, int threads = 1, const MsqGeometry& geometry = {},
                      const std::array<double, 6>& gates = {1, 1, 0, 1, 1, 0}, bool track = true);

nlohmann::json device_json(const DeviceSpec& spec);
nlohmann::json sweep_json(const SweepConfig& config, const SweepResult& result);

/// Columns phi_rad, branch_id, energy_ev, overlap_score. branch_prefix is
/// prepended to every branch id, for files holding several sweeps.
void write_curves_csv(std::ostream& os, const SweepResult& result, const std::string& branch_prefix = "",
                      bool header = true);

}  // namespace junctionlab
