#pragma once

#include <iosfwd>
#include <vector>

#include "junctionlab/sweep.hpp"

namespace junctionlab {

/// Per-site Nambu spinor moments: rho = |a_p|^2 + |a_h|^2,
/// tx = 2 Re(a_p* a_h), ty = 2 Im(a_p* a_h), tz = |a_p|^2 - |a_h|^2.
/// With this ty, <Δ̂> = Δ0 (tx cos φ - ty sin φ) on a NormalSC site.
struct LocalDensityField {
  std::vector<double> rho, tx, ty, tz;

  std::size_t size() const { return rho.size(); }
};

LocalDensityField local_densities(const Eigen::VectorXcd& state, const DeviceSpec& spec);

/// Σ tz.
double total_charge(const LocalDensityField& field);

/// 1 / Σ rho^2.
double participation_ratio(const LocalDensityField& field);

double weight_on(const LocalDensityField& field, const std::vector<SiteId>& sites);

/// The `width` sites at the open end of a two-region chain: the far edge
/// of the right region (or the left region when `left` is set).
std::vector<SiteId> edge_window(const DeviceSpec& spec, bool left, int width = 4);

struct OrbitTrace {
  SiteId site = 0;
  struct Point {
    double phi, tx, ty, tz;
  };
  std::vector<Point> points;
  /// Distance between the last and first (tx, ty, tz).
  double closure_defect = 0.0;
};

OrbitTrace orbit_trace(const BoundStateCurve& curve, SiteId site);

/// Columns phi_rad, site, rho, tx, ty, tz.
void write_densities_csv(std::ostream& os, double phi, const LocalDensityField& field, bool header = true);
/// Columns phi_rad, tx, ty, tz.
void write_orbit_csv(std::ostream& os, const OrbitTrace& orbit);

}  // namespace junctionlab
