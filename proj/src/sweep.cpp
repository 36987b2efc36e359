#include "junctionlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>

#include "junctionlab/bulk.hpp"
#include "junctionlab/csv.hpp"
#include "junctionlab/phase.hpp"

namespace junctionlab {

namespace {

constexpr double kMsqEnergyWindow = 0.6;
constexpr int kMsqStates = 8;
constexpr double kMinOverlap = 0.5;
constexpr double kSignNoise = 1e-10;

struct GridPoint {
  std::vector<double> energies;  // ascending
  Eigen::MatrixXcd vectors;
};

std::vector<double> region_weights(const EigenSolution& sol, const DeviceSpec& spec,
                                   const std::vector<std::size_t>& regions) {
  std::vector<double> w(sol.values.size(), 0.0);
  for (SiteId s = 0; s < spec.size(); ++s) {
    if (std::find(regions.begin(), regions.end(), spec.sites[s].region) == regions.end()) continue;
    const auto rows = sol.vectors.middleRows(BdgMatrix::offset(s), 2);
    for (Eigen::Index k = 0; k < sol.vectors.cols(); ++k) w[k] += rows.col(k).squaredNorm();
  }
  return w;
}

GridPoint evaluate(const SweepConfig& c, double gap, double phi) {
  const DeviceSpec spec = device_at(c, phi);
  const EigenSolution sol = solve_at(c, phi);
  const std::vector<std::size_t> idx = select_states(c, spec, sol, gap);
  GridPoint p;
  p.vectors.resize(sol.vectors.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    p.energies.push_back(sol.values[idx[j]]);
    p.vectors.col(j) = sol.vectors.col(idx[j]);
  }
  return p;
}

std::vector<GridPoint> evaluate_grid(const SweepConfig& c, double gap, const std::vector<double>& phis) {
  const int n = static_cast<int>(phis.size());
  std::vector<GridPoint> pts(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        pts[i] = evaluate(c, gap, phis[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int extra = std::clamp(c.threads, 1, n) - 1;
  std::vector<std::thread> pool;
  for (int k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return pts;
}

// Rotates each near-degenerate group of new states so that it best matches
// the previous tracked vectors (orthogonal Procrustes on the overlap block).
void align_clusters(const Eigen::MatrixXcd& prev, GridPoint& cur, double tol) {
  const auto m_total = static_cast<Eigen::Index>(cur.energies.size());
  for (Eigen::Index s = 0; s < m_total;) {
    Eigen::Index e = s + 1;
    while (e < m_total && cur.energies[e] - cur.energies[e - 1] < tol) ++e;
    const Eigen::Index m = e - s;
    if (m > 1 && prev.cols() > 0) {
      const Eigen::MatrixXcd q = cur.vectors.middleCols(s, m);
      const Eigen::MatrixXcd ov = prev.adjoint() * q;
      std::vector<Eigen::Index> rows(ov.rows());
      std::iota(rows.begin(), rows.end(), 0);
      std::stable_sort(rows.begin(), rows.end(),
                       [&](auto a, auto b) { return ov.row(a).squaredNorm() > ov.row(b).squaredNorm(); });
      const Eigen::Index r = std::min<Eigen::Index>(m, ov.rows());
      rows.resize(r);
      std::sort(rows.begin(), rows.end());
      Eigen::MatrixXcd sub(r, m);
      for (Eigen::Index k = 0; k < r; ++k) sub.row(k) = ov.row(rows[k]);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::MatrixXcd u(m, m);
      u.leftCols(r) = svd.matrixV().leftCols(r) * svd.matrixU().adjoint();
      if (m > r) u.rightCols(m - r) = svd.matrixV().rightCols(m - r);
      cur.vectors.middleCols(s, m) = q * u;
      std::vector<double> old(cur.energies.begin() + s, cur.energies.begin() + e);
      for (Eigen::Index j = 0; j < m; ++j) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) acc += std::norm(u(k, j)) * old[k];
        cur.energies[s + j] = acc;
      }
    }
    s = e;
  }
}

double refine_crossing(const SweepConfig& c, double pa, double ea, Eigen::VectorXcd va, double pb, double eb) {
  while (pb - pa > c.crossing_tol) {
    const double pm = 0.5 * (pa + pb);
    const EigenSolution sol = solve_at(c, pm);
    Eigen::Index j = 0;
    (va.adjoint() * sol.vectors).cwiseAbs().maxCoeff(&j);
    const double em = sol.values[j];
    if (em == 0.0) return pm;
    if ((em > 0) == (ea > 0)) {
      pa = pm, ea = em, va = sol.vectors.col(j);
    } else {
      pb = pm, eb = em;
    }
  }
  return pa + (pb - pa) * ea / (ea - eb);
}

std::string letter_label(int i) { return i < 26 ? std::string(1, char('a' + i)) : "b" + std::to_string(i); }

}  // namespace

std::string to_string(DeviceFamily f) {
  switch (f) {
    case DeviceFamily::ScSc: return "sc-sc";
    case DeviceFamily::ScTsc: return "sc-tsc";
    case DeviceFamily::TscTsc: return "tsc-tsc";
    case DeviceFamily::Msq: return "msq";
  }
  return "?";
}

DeviceFamily device_family_from_string(const std::string& s) {
  for (auto f : {DeviceFamily::ScSc, DeviceFamily::ScTsc, DeviceFamily::TscTsc, DeviceFamily::Msq})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown device family '" + s + "'");
}

std::string to_string(SweptPhase p) {
  switch (p) {
    case SweptPhase::Phi: return "phi";
    case SweptPhase::Phi1: return "phi1";
    case SweptPhase::Phi2: return "phi2";
  }
  return "?";
}

SweptPhase swept_phase_from_string(const std::string& s) {
  for (auto p : {SweptPhase::Phi, SweptPhase::Phi1, SweptPhase::Phi2})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown swept phase '" + s + "'");
}

std::string to_string(CurveEnd e) {
  switch (e) {
    case CurveEnd::GridEdge: return "grid_edge";
    case CurveEnd::CountChange: return "count_change";
    case CurveEnd::LowOverlap: return "low_overlap";
  }
  return "?";
}

DeviceSpec build_family(const FamilyParams& p) {
  switch (p.family) {
    case DeviceFamily::ScSc: return build_sc_sc(p.n, p.mu, p.t, p.delta0, p.phi, p.coupling);
    case DeviceFamily::ScTsc: return build_sc_tsc(p.n, p.mu, p.t, p.delta0, p.phi, p.coupling);
    case DeviceFamily::TscTsc: return build_tsc_tsc(p.n, p.mu, p.mu_right, p.t, p.delta0, p.phi, p.coupling);
    case DeviceFamily::Msq: return build_msq(p.phi, p.phi1, p.phi2, p.gates, p.geometry, p.material);
  }
  throw std::logic_error("unreachable");
}

SweepConfig make_sweep_config(const FamilyParams& p, SweptPhase swept, int n_phi, bool track) {
  if (swept != SweptPhase::Phi && p.family != DeviceFamily::Msq)
    throw std::invalid_argument(to_string(swept) + " can only be swept on the msq family");
  FamilyParams base = p;
  std::size_t region = 0;
  switch (swept) {
    case SweptPhase::Phi:
      base.phi = 0.0;
      region = p.family == DeviceFamily::ScTsc ? 0 : 1;
      break;
    case SweptPhase::Phi1: base.phi1 = 0.0, region = 2; break;
    case SweptPhase::Phi2: base.phi2 = 0.0, region = 3; break;
  }
  SweepConfig c;
  c.base = build_family(base);
  c.swept_regions = {region};
  c.swept_name = to_string(swept);
  c.n_phi = n_phi;
  c.track = track;
  nlohmann::json d = {{"family", to_string(p.family)}, {"swept", to_string(swept)}};
  if (p.family == DeviceFamily::Msq) {
    c.gap_edge = gap_edge(c.base.regions[0]);
    c.energy_window = kMsqEnergyWindow;
    c.max_states = kMsqStates;
    c.rank_regions = {2, 3};
    c.refine_crossings = false;
    c.letter_labels = true;
    d.update({{"mu", p.material.mu}, {"t", p.material.t}, {"delta0", p.material.delta0}, {"phi", p.phi},
              {"phi1", p.phi1}, {"phi2", p.phi2}, {"gates", p.gates}});
    const auto& g = p.geometry;
    d["geometry"] = {{"host_rows", g.host_rows}, {"host_cols", g.host_cols}, {"gap_cols", g.gap_cols},
                     {"wire_len", g.wire_len},   {"wire_row", g.wire_row},   {"bar_len", g.bar_len},
                     {"bar_row", g.bar_row},     {"stub_len", g.stub_len},   {"stub_attach", g.stub_attach},
                     {"stub_outward", g.stub_outward}, {"stub_row", g.stub_row}};
    d["selection"] = {{"energy_window_ev", kMsqEnergyWindow}, {"states", kMsqStates},
                      {"rank", "island weight"}};
  } else {
    d.update({{"n", p.n}, {"mu", p.mu}, {"t", p.t}, {"delta0", p.delta0}, {"coupling", p.coupling}, {"phi", p.phi}});
    if (p.family == DeviceFamily::TscTsc) d["mu_right"] = p.mu_right;
  }
  c.description = d;
  return c;
}

bool BoundStateCurve::full_span(std::size_t n_phi) const {
  return points.size() == n_phi && points.front().grid_index == 0;
}

double BoundStateCurve::mean_energy() const {
  double s = 0.0;
  for (const auto& p : points) s += p.energy;
  return points.empty() ? 0.0 : s / points.size();
}

double BoundStateCurve::spread() const {
  if (points.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                      [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return hi->energy - lo->energy;
}

double BoundStateCurve::max_abs() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(p.energy));
  return m;
}

double BoundStateCurve::min_overlap() const {
  double m = 1.0;
  for (const auto& p : points) m = std::min(m, p.overlap);
  return m;
}

std::vector<std::size_t> classify_in_gap(const EigenSolution& sol, double gap_edge,
                                         std::optional<double> energy_window) {
  std::vector<std::size_t> out;
  for (Eigen::Index k = 0; k < sol.values.size(); ++k) {
    const double a = std::abs(sol.values[k]);
    if (a < gap_edge - kGapMargin && (!energy_window || a <= *energy_window)) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> select_states(const SweepConfig& c, const DeviceSpec& spec, const EigenSolution& sol,
                                       double gap_edge) {
  std::vector<std::size_t> idx = classify_in_gap(sol, gap_edge, c.energy_window);
  if (!c.rank_regions.empty()) {
    const auto w = region_weights(sol, spec, c.rank_regions);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return w[a] > w[b]; });
  } else {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](auto a, auto b) { return std::abs(sol.values[a]) < std::abs(sol.values[b]); });
  }
  if (c.max_states && idx.size() > static_cast<std::size_t>(*c.max_states)) idx.resize(*c.max_states);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<double> phase_grid(int n_phi) {
  std::vector<double> g(n_phi);
  for (int i = 0; i < n_phi; ++i) g[i] = kTwoPi * i / (n_phi - 1);
  g.back() = kTwoPi;
  return g;
}

DeviceSpec device_at(const SweepConfig& config, double phi) {
  return with_phase_offset(config.base, config.swept_regions, phi);
}

EigenSolution solve_at(const SweepConfig& config, double phi) {
  const BdgMatrix h = assemble(device_at(config, phi));
  if (!config.energy_window) return eig_hermitian(h);
  const double w = *config.energy_window;
  return eig_hermitian_window(h.h, std::nextafter(-w, -std::numeric_limits<double>::infinity()), w);
}

SweepResult sweep(const SweepConfig& c) {
  if (c.n_phi < 16) throw std::invalid_argument("sweep: n_phi must be >= 16");
  SweepResult res;
  res.phis = phase_grid(c.n_phi);
  res.gap_edge = c.gap_edge ? *c.gap_edge : device_gap_edge(c.base);
  std::vector<GridPoint> pts = evaluate_grid(c, res.gap_edge, res.phis);

  std::vector<BoundStateCurve> curves;
  std::vector<int> active;  // curve index per column of prev
  Eigen::MatrixXcd prev;
  auto start_curve = [&](std::size_t i, std::size_t j, CurveEnd why) {
    BoundStateCurve cv;
    cv.start = why;
    cv.points.push_back({res.phis[i], pts[i].energies[j], 1.0, i, pts[i].vectors.col(j)});
    curves.push_back(std::move(cv));
    return static_cast<int>(curves.size() - 1);
  };

  for (std::size_t i = 0; i < pts.size(); ++i) {
    GridPoint& cur = pts[i];
    res.in_gap_energies.push_back(cur.energies);
    const std::size_t b = cur.energies.size();
    std::vector<int> next(b, -1);
    if (i == 0) {
      for (std::size_t j = 0; j < b; ++j) next[j] = start_curve(i, j, CurveEnd::GridEdge);
    } else {
      if (c.track) align_clusters(prev, cur, c.degeneracy_tol);
      const std::size_t a = active.size();
      const bool count_changed = a != b;
      const Eigen::MatrixXd ov = (prev.adjoint() * cur.vectors).cwiseAbs();
      std::vector<int> match(a, -1);
      if (c.track) {
        std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
        for (std::size_t p = 0; p < a; ++p)
          for (std::size_t q = 0; q < b; ++q) pairs.emplace_back(-ov(p, q), p, q);
        std::sort(pairs.begin(), pairs.end());
        std::vector<bool> used(b, false);
        for (auto [neg, p, q] : pairs) {
          if (-neg < kMinOverlap) break;
          if (match[p] >= 0 || used[q]) continue;
          match[p] = static_cast<int>(q);
          used[q] = true;
        }
      } else if (!count_changed) {
        for (std::size_t p = 0; p < a; ++p) match[p] = static_cast<int>(p);
      }
      for (std::size_t p = 0; p < a; ++p) {
        auto& cv = curves[active[p]];
        if (match[p] < 0) {
          cv.end = count_changed ? CurveEnd::CountChange : CurveEnd::LowOverlap;
          continue;
        }
        const auto q = static_cast<std::size_t>(match[p]);
        cv.points.push_back({res.phis[i], cur.energies[q], ov(p, q), i, cur.vectors.col(q)});
        next[q] = active[p];
      }
      for (std::size_t q = 0; q < b; ++q)
        if (next[q] < 0) next[q] = start_curve(i, q, count_changed ? CurveEnd::CountChange : CurveEnd::LowOverlap);
    }
    active = next;
    prev = cur.vectors;
  }

  std::vector<std::size_t> order(curves.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> means;
  for (const auto& cv : curves) means.push_back(cv.mean_energy());
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    if (means[x] != means[y]) return means[x] < means[y];
    return curves[x].points.front().grid_index < curves[y].points.front().grid_index;
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    BoundStateCurve cv = std::move(curves[order[r]]);
    cv.branch_id = static_cast<int>(r);
    cv.label = c.letter_labels ? letter_label(static_cast<int>(r)) : std::to_string(r);
    res.curves.push_back(std::move(cv));
  }

  if (c.refine_crossings) {
    for (auto& cv : res.curves)
      for (std::size_t k = 0; k + 1 < cv.points.size(); ++k) {
        const auto& p = cv.points[k];
        const auto& q = cv.points[k + 1];
        if (std::abs(p.energy) < kSignNoise || std::abs(q.energy) < kSignNoise) continue;
        if ((p.energy > 0) == (q.energy > 0)) continue;
        cv.crossings.push_back(refine_crossing(c, p.phi, p.energy, p.state, q.phi, q.energy));
      }
  }

  const std::size_t n = res.phis.size();
  std::vector<int> full;
  for (std::size_t k = 0; k < res.curves.size(); ++k)
    if (res.curves[k].full_span(n)) full.push_back(static_cast<int>(k));
  for (int bi : full) {
    const auto& end = res.curves[bi].points.back();
    double best = std::numeric_limits<double>::infinity();
    for (int cj : full) best = std::min(best, std::abs(res.curves[cj].points.front().energy - end.energy));
    int pick = -1;
    double pick_ov = -1.0;
    for (int cj : full) {
      const auto& start = res.curves[cj].points.front();
      if (std::abs(start.energy - end.energy) > best + 1e-6) continue;
      const double o = std::abs(start.state.dot(end.state));
      if (o > pick_ov) pick = cj, pick_ov = o;
    }
    res.end_permutation.emplace_back(bi, pick);
    if (pick != bi) res.branch_exchange = true;
  }
  return res;
}

SweepResult msq_sweep(double phi1, double phi2, int n_phi, int threads, const MsqGeometry& geometry,
                      const std::array<double, 6>& gates, bool track) {
  FamilyParams p;
  p.family = DeviceFamily::Msq;
  p.phi1 = phi1;
  p.phi2 = phi2;
  p.gates = gates;
  p.geometry = geometry;
  SweepConfig c = make_sweep_config(p, SweptPhase::Phi, n_phi, track);
  c.threads = threads;
  return sweep(c);
}

nlohmann::json device_json(const DeviceSpec& spec) {
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t r = 0; r < spec.regions.size(); ++r) {
    const auto& m = spec.regions[r];
    regions.push_back({{"name", m.name},
                       {"kind", to_string(m.kind)},
                       {"mu", m.mu},
                       {"t", m.t},
                       {"delta0", m.delta0},
                       {"phase", m.phase},
                       {"sites", spec.sites_in_region(r).size()}});
  }
  nlohmann::json couplings = nlohmann::json::array();
  for (const auto& c : spec.couplings)
    couplings.push_back({{"name", c.name}, {"site_a", c.site_a}, {"site_b", c.site_b}, {"strength", c.strength}});
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [k, v] : spec.labels) labels[k] = v;
  return {{"sites", spec.size()},
          {"bonds", spec.bonds.size()},
          {"regions", regions},
          {"couplings", couplings},
          {"labels", labels}};
}

nlohmann::json sweep_json(const SweepConfig& c, const SweepResult& r) {
  nlohmann::json swept = nlohmann::json::array();
  for (auto s : c.swept_regions) swept.push_back(c.base.regions.at(s).name);
  nlohmann::json cfg = {{"swept_phase", c.swept_name},
                        {"swept_regions", swept},
                        {"n_phi", c.n_phi},
                        {"track", c.track},
                        {"refine_crossings", c.refine_crossings},
                        {"crossing_tol", c.crossing_tol},
                        {"gap_edge_ev", r.gap_edge},
                        {"gap_margin_ev", kGapMargin},
                        {"degeneracy_tol_ev", c.degeneracy_tol},
                        {"min_overlap", kMinOverlap},
                        {"parameters", c.description},
                        {"device", device_json(c.base)}};
  if (c.energy_window) cfg["energy_window_ev"] = *c.energy_window;
  if (c.max_states) cfg["max_states"] = *c.max_states;
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& cv : r.curves) {
    branches.push_back({{"branch_id", cv.label},
                        {"points", cv.points.size()},
                        {"phi_start", cv.points.front().phi},
                        {"phi_end", cv.points.back().phi},
                        {"mean_energy_ev", cv.mean_energy()},
                        {"spread_ev", cv.spread()},
                        {"min_overlap", cv.min_overlap()},
                        {"start", to_string(cv.start)},
                        {"end", to_string(cv.end)},
                        {"split", cv.split()},
                        {"zero_crossings", cv.crossings}});
  }
  nlohmann::json perm = nlohmann::json::array();
  for (auto [from, to] : r.end_permutation) perm.push_back({r.curves[from].label, r.curves[to].label});
  return {{"config", cfg}, {"branches", branches}, {"end_permutation", perm}, {"branch_exchange", r.branch_exchange}};
}

void write_curves_csv(std::ostream& os, const SweepResult& r, const std::string& branch_prefix, bool header) {
  if (header) os << "phi_rad,branch_id,energy_ev,overlap_score\n";
  for (const auto& cv : r.curves)
    for (const auto& p : cv.points)
      os << fmt_double(p.phi) << ',' << branch_prefix << cv.label << ',' << fmt_double(p.energy) << ',' << fmt_double(p.overlap)
         << '\n';
}

}  // namespace junctionlab
