#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace junctionlab {

using SiteId = std::size_t;

struct InvalidGeometry : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class RegionKind { NormalSC, KitaevTSC, TscPhaseHopping };

std::string to_string(RegionKind kind);
RegionKind region_kind_from_string(const std::string& name);

/// Energies in eV, phase in radians. The phase is stored normalized.
struct RegionModel {
  std::string name;
  RegionKind kind = RegionKind::NormalSC;
  double mu = 0.0;
  double t = 1.0;
  double delta0 = 0.0;
  double phase = 0.0;
  double lattice_const = 1.0;
};

struct Site {
  std::size_t region = 0;
  int x = 0;
  int y = 0;
};

/// Directed intra-region bond from -> to. Hopping-pairing blocks sit at
/// (to, from), i.e. the |n+1><n| slot with n = from.
struct Bond {
  SiteId from = 0;
  SiteId to = 0;
};

struct Coupling {
  SiteId site_a = 0;
  SiteId site_b = 0;
  double strength = 0.0;
  std::string name;
};

struct DeviceSpec {
  std::vector<Site> sites;
  std::vector<RegionModel> regions;
  std::vector<Bond> bonds;
  std::vector<Coupling> couplings;
  std::map<std::string, SiteId> labels;

  std::size_t size() const { return sites.size(); }
  std::size_t region_index(const std::string& name) const;
  std::vector<SiteId> sites_in_region(std::size_t region) const;
};

struct Violation {
  enum class Kind {
    SelfBond,
    DuplicateBond,
    UnknownSite,
    UnknownRegion,
    CrossRegionBond,
    SelfCoupling,
    NegativeCoupling,
    BadRegionParameter,
    DuplicateRegionName,
    OverlappingSites,
    UnknownLabel,
  };
  Kind kind;
  std::string detail;
};

std::string to_string(Violation::Kind kind);

std::vector<Violation> validate(const DeviceSpec& spec);

/// Adds `offset` to the phase of each listed region (normalized).
DeviceSpec with_phase_offset(DeviceSpec spec, const std::vector<std::size_t>& regions, double offset);

DeviceSpec build_sc_sc(int n, double mu, double t, double delta0, double phi, double v_junction);
DeviceSpec build_sc_tsc(int n, double mu, double t, double delta0, double phi, double v_c);
/// v_junction < 0 means "use t".
DeviceSpec build_tsc_tsc(int n, double mu_left, double mu_right, double t, double delta0, double phi,
                         double v_junction = -1.0);

/// Layout of the two-island device. Host blocks are host_rows x host_cols
/// NormalSC squares separated by gap_cols empty columns. Island I is a wire
/// whose ends touch the inner host edges at wire_row. Island II is a bar
/// whose ends touch the hosts at bar_row, with two stubs hanging off bar
/// sites stub_attach; the stub tips touch the hosts at stub_row.
struct MsqGeometry {
  int host_rows = 20;
  int host_cols = 15;
  int gap_cols = 3;
  int wire_len = 20;
  int wire_row = 7;
  int bar_len = 20;
  int bar_row = 14;
  int stub_len = 8;
  std::array<int, 2> stub_attach{9, 11};
  /// true: bonds run bar -> tip; false: tip -> bar.
  std::array<bool, 2> stub_outward{true, false};
  int stub_row = 10;

  int island_sites() const { return wire_len + bar_len + 2 * stub_len; }
};

struct MsqMaterial {
  double mu = 0.25;
  double t = 0.5;
  double delta0 = 1.0;
};

void check_geometry(const MsqGeometry& g);

/// Region order: host_left, host_right, tsc_wire, tsc_i. Couplings V1..V6 are
/// always present; contact_k labels mark the island-side contact sites.
DeviceSpec build_msq(double phi, double phi1, double phi2, const std::array<double, 6>& gates,
                     const MsqGeometry& geometry = {}, const MsqMaterial& material = {});

}  // namespace junctionlab
