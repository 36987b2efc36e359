#pragma once

#include <iosfwd>
#include <vector>

#include "junctionlab/bdg.hpp"

namespace junctionlab {

/// In-gap test margin: a state is in-gap iff |E| < gap_edge - kGapMargin.
inline constexpr double kGapMargin = 1e-6;

struct BulkBands {
  std::vector<double> k;
  std::vector<double> e_minus;
  std::vector<double> e_plus;
  double gap_edge = 0.0;
};

/// Onsite block and n+1 <- n hopping block of an infinite chain of `region`,
/// read off the assembled matrix of a short open chain.
struct ChainStencil {
  Block onsite;
  Block hop;
};
ChainStencil chain_stencil(const RegionModel& region);

/// H(k) = onsite + hop e^{-ik} + hop^† e^{ik}.
Block bloch_block(const RegionModel& region, double k);

/// Uniform grid over [-π, π] (both ends included), n_k >= 16. gap_edge is
/// refined between grid points, so it is the true minimum of |E(k)|.
BulkBands bulk_bands(const RegionModel& region, int n_k);

double gap_edge(const RegionModel& region);

/// Smallest bulk gap edge over the regions of a device.
double device_gap_edge(const DeviceSpec& spec);

/// Closed ring of n sites of one region (the closing bond is an ordinary bond).
DeviceSpec build_ring(const RegionModel& region, int n);

void write_bulk_csv(std::ostream& os, const BulkBands& bands);

}  // namespace junctionlab
