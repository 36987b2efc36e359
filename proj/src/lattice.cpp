#include "junctionlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "junctionlab/phase.hpp"

namespace junctionlab {

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::NormalSC: return "NormalSC";
    case RegionKind::KitaevTSC: return "KitaevTSC";
    case RegionKind::TscPhaseHopping: return "TscPhaseHopping";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& name) {
  if (name == "NormalSC") return RegionKind::NormalSC;
  if (name == "KitaevTSC") return RegionKind::KitaevTSC;
  if (name == "TscPhaseHopping") return RegionKind::TscPhaseHopping;
  throw std::invalid_argument("unknown region kind '" + name + "'");
}

std::string to_string(Violation::Kind kind) {
  using K = Violation::Kind;
  switch (kind) {
    case K::SelfBond: return "SelfBond";
    case K::DuplicateBond: return "DuplicateBond";
    case K::UnknownSite: return "UnknownSite";
    case K::UnknownRegion: return "UnknownRegion";
    case K::CrossRegionBond: return "CrossRegionBond";
    case K::SelfCoupling: return "SelfCoupling";
    case K::NegativeCoupling: return "NegativeCoupling";
    case K::BadRegionParameter: return "BadRegionParameter";
    case K::DuplicateRegionName: return "DuplicateRegionName";
    case K::OverlappingSites: return "OverlappingSites";
    case K::UnknownLabel: return "UnknownLabel";
  }
  return "?";
}

std::size_t DeviceSpec::region_index(const std::string& name) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].name == name) return i;
  throw std::out_of_range("no region named '" + name + "'");
}

std::vector<SiteId> DeviceSpec::sites_in_region(std::size_t region) const {
  std::vector<SiteId> out;
  for (SiteId s = 0; s < sites.size(); ++s)
    if (sites[s].region == region) out.push_back(s);
  return out;
}

std::vector<Violation> validate(const DeviceSpec& spec) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  auto add = [&](K k, std::string d) { out.push_back({k, std::move(d)}); };
  const std::size_t n = spec.sites.size();

  std::set<std::string> names;
  for (const auto& r : spec.regions) {
    if (!names.insert(r.name).second) add(K::DuplicateRegionName, r.name);
    if (!(r.t > 0.0)) add(K::BadRegionParameter, r.name + ": t must be > 0");
    if (!(r.delta0 >= 0.0)) add(K::BadRegionParameter, r.name + ": delta0 must be >= 0");
    if (!std::isfinite(r.mu)) add(K::BadRegionParameter, r.name + ": mu must be finite");
    if (!(r.phase >= 0.0 && r.phase < kTwoPi)) add(K::BadRegionParameter, r.name + ": phase outside [0, 2pi)");
  }

  std::set<std::pair<int, int>> coords;
  for (SiteId s = 0; s < n; ++s) {
    const auto& site = spec.sites[s];
    if (site.region >= spec.regions.size()) add(K::UnknownRegion, "site " + std::to_string(s));
    if (!coords.insert({site.x, site.y}).second)
      add(K::OverlappingSites, "site " + std::to_string(s) + " at (" + std::to_string(site.x) + "," +
                                   std::to_string(site.y) + ")");
  }

  std::set<std::pair<SiteId, SiteId>> edges;
  auto check_edge = [&](SiteId a, SiteId b, const std::string& what) {
    bool ok = true;
    if (a >= n) add(K::UnknownSite, what + " references site " + std::to_string(a)), ok = false;
    if (b >= n) add(K::UnknownSite, what + " references site " + std::to_string(b)), ok = false;
    if (!ok) return false;
    if (!edges.insert(std::minmax(a, b)).second)
      add(K::DuplicateBond, what + " " + std::to_string(a) + "-" + std::to_string(b));
    return true;
  };

  for (const auto& b : spec.bonds) {
    if (b.from == b.to) {
      add(K::SelfBond, "site " + std::to_string(b.from));
      continue;
    }
    if (!check_edge(b.from, b.to, "bond")) continue;
    if (spec.sites[b.from].region != spec.sites[b.to].region)
      add(K::CrossRegionBond, std::to_string(b.from) + "-" + std::to_string(b.to));
  }
  for (const auto& c : spec.couplings) {
    if (c.site_a == c.site_b) {
      add(K::SelfCoupling, c.name + " at site " + std::to_string(c.site_a));
      continue;
    }
    check_edge(c.site_a, c.site_b, "coupling " + c.name);
    if (!(c.strength >= 0.0)) add(K::NegativeCoupling, c.name);
  }
  for (const auto& [label, s] : spec.labels)
    if (s >= n) add(K::UnknownLabel, label);
  return out;
}

DeviceSpec with_phase_offset(DeviceSpec spec, const std::vector<std::size_t>& regions, double offset) {
  for (auto r : regions) {
    auto& reg = spec.regions.at(r);
    reg.phase = normalize_phase(reg.phase + offset);
  }
  return spec;
}

namespace {

void check_chain_length(int n) {
  if (n < 4 || n % 2 != 0)
    throw InvalidGeometry("junction length must be even and >= 4, got " + std::to_string(n));
}

// Two chains of n/2 sites joined by a coupling between sites n/2-1 and n/2.
DeviceSpec two_chain(int n, RegionModel left, RegionModel right, double v) {
  check_chain_length(n);
  DeviceSpec spec;
  left.phase = normalize_phase(left.phase);
  right.phase = normalize_phase(right.phase);
  spec.regions = {std::move(left), std::move(right)};
  const int half = n / 2;
  for (int i = 0; i < n; ++i) spec.sites.push_back({i < half ? 0u : 1u, i, 0});
  for (int i = 0; i + 1 < n; ++i)
    if (i != half - 1) spec.bonds.push_back({SiteId(i), SiteId(i + 1)});
  spec.couplings.push_back({SiteId(half - 1), SiteId(half), v, "junction"});
  spec.labels["junction_left"] = half - 1;
  spec.labels["junction_right"] = half;
  spec.labels["left_edge"] = 0;
  spec.labels["right_edge"] = n - 1;
  return spec;
}

}  // namespace

DeviceSpec build_sc_sc(int n, double mu, double t, double delta0, double phi, double v_junction) {
  return two_chain(n, {"left", RegionKind::NormalSC, mu, t, delta0, 0.0},
                   {"right", RegionKind::NormalSC, mu, t, delta0, phi}, v_junction);
}

DeviceSpec build_sc_tsc(int n, double mu, double t, double delta0, double phi, double v_c) {
  return two_chain(n, {"sc", RegionKind::NormalSC, mu, t, delta0, phi},
                   {"tsc", RegionKind::KitaevTSC, mu, t, delta0, 0.0}, v_c);
}

DeviceSpec build_tsc_tsc(int n, double mu_left, double mu_right, double t, double delta0, double phi,
                         double v_junction) {
  return two_chain(n, {"left", RegionKind::TscPhaseHopping, mu_left, t, delta0, 0.0},
                   {"right", RegionKind::TscPhaseHopping, mu_right, t, delta0, phi},
                   v_junction < 0.0 ? t : v_junction);
}

void check_geometry(const MsqGeometry& g) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidGeometry("msq geometry: " + msg);
  };
  need(g.host_rows >= 1 && g.host_cols >= 1, "host block must be non-empty");
  need(g.gap_cols >= 1, "hosts must be separated by at least one column");
  need(g.wire_len >= 2, "wire needs at least two sites");
  need(g.bar_len >= 3, "bar needs at least three sites");
  need(g.stub_len >= 1, "stubs need at least one site");
  for (int row : {g.wire_row, g.bar_row, g.stub_row})
    need(row >= 0 && row < g.host_rows, "contact row " + std::to_string(row) + " outside host block");
  need(g.wire_row != g.bar_row && g.wire_row != g.stub_row && g.bar_row != g.stub_row,
       "contact rows must be distinct");
  for (int a : g.stub_attach)
    need(a >= 1 && a <= g.bar_len - 2, "stub attachment " + std::to_string(a) + " not interior to the bar");
  need(g.stub_attach[0] != g.stub_attach[1], "stubs attach to the same bar site");
}

DeviceSpec build_msq(double phi, double phi1, double phi2, const std::array<double, 6>& gates,
                     const MsqGeometry& g, const MsqMaterial& m) {
  check_geometry(g);
  DeviceSpec spec;
  spec.regions = {
      {"host_left", RegionKind::NormalSC, m.mu, m.t, m.delta0, 0.0},
      {"host_right", RegionKind::NormalSC, m.mu, m.t, m.delta0, normalize_phase(phi)},
      {"tsc_wire", RegionKind::TscPhaseHopping, m.mu, m.t, m.delta0, normalize_phase(phi1)},
      {"tsc_i", RegionKind::TscPhaseHopping, m.mu, m.t, m.delta0, normalize_phase(phi2)},
  };
  const int right_x0 = g.host_cols + g.gap_cols;
  auto add_site = [&](std::size_t region, int x, int y) {
    spec.sites.push_back({region, x, y});
    return SiteId(spec.sites.size() - 1);
  };
  auto host_site = [&](int block, int row, int col) {
    return SiteId(block * g.host_rows * g.host_cols + row * g.host_cols + col);
  };

  for (int block = 0; block < 2; ++block)
    for (int r = 0; r < g.host_rows; ++r)
      for (int c = 0; c < g.host_cols; ++c) add_site(block, (block ? right_x0 : 0) + c, r);
  for (int block = 0; block < 2; ++block)
    for (int r = 0; r < g.host_rows; ++r)
      for (int c = 0; c < g.host_cols; ++c) {
        if (c + 1 < g.host_cols) spec.bonds.push_back({host_site(block, r, c), host_site(block, r, c + 1)});
        if (r + 1 < g.host_rows) spec.bonds.push_back({host_site(block, r, c), host_site(block, r + 1, c)});
      }

  // Islands are drawn below the hosts; their coordinates only label sites.
  const int y_wire = g.host_rows + 2;
  const int y_bar = g.host_rows + 4;
  std::vector<SiteId> wire, bar;
  for (int k = 0; k < g.wire_len; ++k) wire.push_back(add_site(2, k, y_wire));
  for (int k = 0; k + 1 < g.wire_len; ++k) spec.bonds.push_back({wire[k], wire[k + 1]});
  for (int k = 0; k < g.bar_len; ++k) bar.push_back(add_site(3, k, y_bar));
  for (int k = 0; k + 1 < g.bar_len; ++k) spec.bonds.push_back({bar[k], bar[k + 1]});
  std::array<SiteId, 2> tips{};
  for (int s = 0; s < 2; ++s) {
    SiteId prev = bar[g.stub_attach[s]];
    for (int k = 0; k < g.stub_len; ++k) {
      SiteId cur = add_site(3, g.stub_attach[s], y_bar + 1 + k);
      spec.bonds.push_back(g.stub_outward[s] ? Bond{prev, cur} : Bond{cur, prev});
      prev = cur;
    }
    tips[s] = prev;
  }

  const int lcol = g.host_cols - 1;
  const std::array<std::pair<SiteId, SiteId>, 6> contacts{{
      {wire.front(), host_site(0, g.wire_row, lcol)},
      {wire.back(), host_site(1, g.wire_row, 0)},
      {tips[0], host_site(0, g.stub_row, lcol)},
      {bar.back(), host_site(1, g.bar_row, 0)},
      {bar.front(), host_site(0, g.bar_row, lcol)},
      {tips[1], host_site(1, g.stub_row, 0)},
  }};
  for (int i = 0; i < 6; ++i) {
    const auto& [island, host] = contacts[i];
    spec.couplings.push_back({island, host, gates[i], "V" + std::to_string(i + 1)});
    spec.labels["contact_" + std::to_string(i + 1)] = island;
  }
  return spec;
}

}  // namespace junctionlab
