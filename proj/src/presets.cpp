#include "junctionlab/presets.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "junctionlab/bulk.hpp"
#include "junctionlab/continuum.hpp"
#include "junctionlab/csv.hpp"
#include "junctionlab/observables.hpp"
#include "junctionlab/phase.hpp"

namespace junctionlab {

namespace {

constexpr int kChainPhiSteps = 128;
constexpr int kMsqPhiSteps = 40;

const std::vector<std::string> kIds = {"Fig2", "Fig3",      "Fig4",      "Fig5", "Fig6", "Fig7",
                                       "Fig8upper", "Fig8lower", "Fig9", "Fig10", "Fig11"};

FamilyParams chain(DeviceFamily f, double mu, double t, double delta0, double coupling, double mu_right = 0.0) {
  FamilyParams p;
  p.family = f;
  p.n = 30;
  p.mu = mu;
  p.mu_right = mu_right;
  p.t = t;
  p.delta0 = delta0;
  p.coupling = coupling;
  return p;
}

PresetVariant variant(std::string name, const FamilyParams& p, int n_phi, std::optional<double> fixed = {},
                      SweptPhase swept = SweptPhase::Phi) {
  return {std::move(name), make_sweep_config(p, swept, n_phi, true), fixed};
}

std::string tag(const std::string& key, double v) { return key + "=" + fmt_double(v); }

std::string deg(double rad) { return fmt_double(std::round(rad * 180.0 / kPi * 1e6) / 1e6); }

FamilyParams msq(double phi1, double phi2) {
  FamilyParams p;
  p.family = DeviceFamily::Msq;
  p.phi1 = phi1;
  p.phi2 = phi2;
  return p;
}

struct Writer {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;

  void put(const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    files.push_back(dir / name);
  }
};

double max_spread(const SweepResult& r) {
  double m = 0.0;
  for (const auto& c : r.curves) m = std::max(m, c.spread());
  return m;
}

// Index of the curve with the largest mean rho on `site`.
std::size_t heaviest_on(const SweepResult& r, SiteId site) {
  std::size_t best = 0;
  double w = -1.0;
  for (std::size_t k = 0; k < r.curves.size(); ++k) {
    double s = 0.0;
    for (const auto& p : r.curves[k].points) s += p.state.segment(2 * site, 2).squaredNorm();
    s /= static_cast<double>(r.curves[k].points.size());
    if (s > w) best = k, w = s;
  }
  return best;
}

std::string densities_text(const BoundStateCurve& cv, const SweepConfig& c) {
  std::ostringstream os;
  bool header = true;
  for (const auto& p : cv.points) {
    write_densities_csv(os, p.phi, local_densities(p.state, device_at(c, p.phi)), header);
    header = false;
  }
  return os.str();
}

std::string orbit_text(const BoundStateCurve& cv, SiteId site, nlohmann::json& summary, const std::string& key) {
  const OrbitTrace o = orbit_trace(cv, site);
  std::ostringstream os;
  write_orbit_csv(os, o);
  summary[key] = {{"site", site}, {"closure_defect", o.closure_defect}, {"points", o.points.size()}};
  return os.str();
}

nlohmann::json spectrum(const PresetVariant& v, Writer& w) {
  const DeviceSpec spec = device_at(v.sweep, *v.fixed_phi);
  const EigenSolution sol = eig_hermitian(assemble(spec));
  const double gap = v.sweep.gap_edge ? *v.sweep.gap_edge : device_gap_edge(v.sweep.base);
  const auto in_gap = select_states(v.sweep, spec, sol, gap);
  std::ostringstream os;
  os << "index,energy_ev,in_gap\n";
  nlohmann::json energies = nlohmann::json::array();
  for (Eigen::Index k = 0; k < sol.values.size(); ++k) {
    const bool g = std::find(in_gap.begin(), in_gap.end(), static_cast<std::size_t>(k)) != in_gap.end();
    if (g) energies.push_back(sol.values[k]);
    os << k << ',' << fmt_double(sol.values[k]) << ',' << (g ? 1 : 0) << '\n';
  }
  nlohmann::json bulk = nlohmann::json::object();
  for (const auto& r : spec.regions) bulk[r.name] = gap_edge(r);
  w.put("spectrum.csv", os.str());
  return {{"phi", *v.fixed_phi},
          {"parameters", v.sweep.description},
          {"gap_edge_ev", gap},
          {"region_gap_edges_ev", bulk},
          {"in_gap_count", in_gap.size()},
          {"in_gap_energies_ev", energies},
          {"max_residual", sol.max_residual}};
}

}  // namespace

const char* library_version() { return JUNCTIONLAB_VERSION; }

std::vector<std::string> preset_ids() { return kIds; }

FigurePreset make_preset(const std::string& id, const PresetOptions& o) {
  FigurePreset p;
  p.id = id;
  p.directory = id;
  using F = DeviceFamily;
  if (id == "Fig2") {
    p.title = "SC-SC energy-phase relation with the transparent-barrier closed form";
    p.variants.push_back(variant("sc-sc", chain(F::ScSc, 0.5, 1, 1, 1), kChainPhiSteps));
    p.unspecified = {"v_junction"};
    p.outputs = {"curves.csv", "analytic.csv"};
  } else if (id == "Fig3") {
    p.title = "SC-SC finite spectrum against the bulk gap at phi = pi";
    p.variants.push_back(variant("sc-sc", chain(F::ScSc, 0.5, 1, 1, 1), kChainPhiSteps, kPi));
    p.unspecified = {"v_junction"};
    p.outputs = {"spectrum.csv"};
  } else if (id == "Fig4") {
    p.title = "SC-SC local densities of the lower bound state";
    p.variants.push_back(variant("sc-sc", chain(F::ScSc, 0.5, 1, 1, 1), kChainPhiSteps));
    p.unspecified = {"n", "mu", "v_junction"};
    p.outputs = {"curves.csv", "densities.csv", "orbit_left.csv", "orbit_right.csv"};
  } else if (id == "Fig5") {
    p.title = "SC-TSC finite spectrum against the bulk gaps";
    p.variants.push_back(variant("sc-tsc", chain(F::ScTsc, 1, 1, 1, 1), kChainPhiSteps, 0.0));
    p.unspecified = {"phi"};
    p.outputs = {"spectrum.csv"};
  } else if (id == "Fig6") {
    p.title = "SC-TSC energy-phase relation from trivial to topological";
    for (double r : {2.0, 1.75, 1.5, 1.25, 1.0})
      p.variants.push_back(variant(tag("mu_t", r), chain(F::ScTsc, r, 1, 1, 1), kChainPhiSteps));
    p.unspecified = {"t", "intermediate mu/t values"};
    p.outputs = {"curves.csv"};
  } else if (id == "Fig7") {
    p.title = "SC-TSC near the transition against the coupling";
    for (double vc : {0.0, 0.25, 0.5, 1.0})
      p.variants.push_back(variant(tag("v_c", vc), chain(F::ScTsc, 1.429, 1, 1, vc), kChainPhiSteps));
    p.unspecified = {"t", "intermediate v_c values"};
    p.outputs = {"curves.csv"};
  } else if (id == "Fig8upper" || id == "Fig8lower") {
    const bool tandem = id == "Fig8lower";
    p.title = tandem ? "TSC-TSC with both halves tuned together" : "TSC-TSC with the left half held topological";
    for (double r : {4.0, 2.0, 1.4, 1.0})
      p.variants.push_back(variant(tag("mu_t", r), chain(F::TscTsc, tandem ? r : 1.0, 1, 1, -1, r), kChainPhiSteps));
    p.unspecified = {"t", "v_junction", "intermediate mu/t values"};
    p.outputs = {"curves.csv"};
  } else if (id == "Fig9") {
    p.title = "TSC-TSC local densities of the phase-sensitive pair";
    p.variants.push_back(variant("tsc-tsc", chain(F::TscTsc, 1, 1, 1, -1, 1), kChainPhiSteps));
    p.unspecified = {"t", "v_junction"};
    p.outputs = {"curves.csv", "densities_<branch>.csv", "orbit_<branch>_left.csv", "orbit_<branch>_right.csv"};
  } else if (id == "Fig10") {
    p.title = "two-island device energy-phase relation, one (phi1, phi2) panel";
    if (o.phi1 != 0.0 || o.phi2 != 0.0) p.directory = "Fig10_phi1_" + deg(o.phi1) + "_phi2_" + deg(o.phi2);
    p.variants.push_back(variant("msq", msq(o.phi1, o.phi2), kMsqPhiSteps));
    p.unspecified = {"geometry", "host block size", "selection window"};
    p.outputs = {"curves.csv"};
  } else if (id == "Fig11") {
    p.title = "two-island device densities and junction-2 orbits";
    p.variants.push_back(variant("upper", msq(kPi, 0.0), kMsqPhiSteps, kPi / 4));
    p.variants.push_back(variant("lower", msq(0.0, 0.0), kMsqPhiSteps));
    p.unspecified = {"geometry", "host block size", "selection window"};
    p.outputs = {"densities_<label>.csv", "curves.csv", "orbit_left.csv", "orbit_right.csv"};
  } else {
    throw std::invalid_argument("unknown preset '" + id + "'");
  }
  for (auto& v : p.variants) v.sweep.threads = o.threads;
  return p;
}

PresetBundle run_preset(const FigurePreset& preset, const std::filesystem::path& out_root, int threads) {
  Writer w{out_root / preset.directory, {}};
  nlohmann::json variants = nlohmann::json::array();
  nlohmann::json extra = nlohmann::json::object();
  std::ostringstream curves;
  bool curves_header = true;
  const bool multi = preset.variants.size() > 1 && preset.id != "Fig11";

  for (const auto& v0 : preset.variants) {
    PresetVariant v = v0;
    v.sweep.threads = threads;
    if (v.fixed_phi) {
      if (preset.id == "Fig11") {
        const DeviceSpec spec = device_at(v.sweep, *v.fixed_phi);
        const EigenSolution sol = solve_at(v.sweep, *v.fixed_phi);
        const auto idx = select_states(v.sweep, spec, sol, *v.sweep.gap_edge);
        nlohmann::json states = nlohmann::json::array();
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const std::string label(1, char('a' + j));
          std::ostringstream os;
          write_densities_csv(os, *v.fixed_phi, local_densities(sol.vectors.col(idx[j]), spec));
          w.put("densities_" + label + ".csv", os.str());
          states.push_back({{"label", label}, {"energy_ev", sol.values[idx[j]]}});
        }
        variants.push_back({{"name", v.name},
                            {"phi", *v.fixed_phi},
                            {"parameters", v.sweep.description},
                            {"gap_edge_ev", *v.sweep.gap_edge},
                            {"states", states}});
      } else {
        nlohmann::json s = spectrum(v, w);
        s["name"] = v.name;
        variants.push_back(s);
      }
      continue;
    }

    const SweepResult r = sweep(v.sweep);
    write_curves_csv(curves, r, multi ? v.name + ":" : "", curves_header);
    curves_header = false;
    nlohmann::json s = sweep_json(v.sweep, r);
    s["name"] = v.name;
    s["max_branch_spread_ev"] = max_spread(r);
    variants.push_back(s);

    const auto& labels = v.sweep.base.labels;
    if (preset.id == "Fig4" && !r.curves.empty()) {
      const auto& cv = r.curves.front();
      w.put("densities.csv", densities_text(cv, v.sweep));
      w.put("orbit_left.csv", orbit_text(cv, labels.at("junction_left"), extra, "orbit_left"));
      w.put("orbit_right.csv", orbit_text(cv, labels.at("junction_right"), extra, "orbit_right"));
      extra["density_branch"] = cv.label;
    } else if (preset.id == "Fig9") {
      // The phase-sensitive pair: the two full-span branches with the largest spread.
      std::vector<std::size_t> order;
      for (std::size_t k = 0; k < r.curves.size(); ++k)
        if (r.curves[k].full_span(r.phis.size())) order.push_back(k);
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return r.curves[a].spread() > r.curves[b].spread(); });
      if (order.size() > 2) order.resize(2);
      std::sort(order.begin(), order.end());
      nlohmann::json names = nlohmann::json::array();
      for (auto k : order) {
        const auto& cv = r.curves[k];
        names.push_back(cv.label);
        w.put("densities_" + cv.label + ".csv", densities_text(cv, v.sweep));
        w.put("orbit_" + cv.label + "_left.csv",
              orbit_text(cv, labels.at("junction_left"), extra, "orbit_" + cv.label + "_left"));
        w.put("orbit_" + cv.label + "_right.csv",
              orbit_text(cv, labels.at("junction_right"), extra, "orbit_" + cv.label + "_right"));
      }
      extra["density_branches"] = names;
    } else if (preset.id == "Fig11" && !r.curves.empty()) {
      const SiteId island = labels.at("contact_2");
      SiteId host = island;
      for (const auto& c : v.sweep.base.couplings)
        if (c.name == "V2") host = c.site_a == island ? c.site_b : c.site_a;
      const auto& cv = r.curves[heaviest_on(r, island)];
      w.put("orbit_left.csv", orbit_text(cv, island, extra, "orbit_left"));
      w.put("orbit_right.csv", orbit_text(cv, host, extra, "orbit_right"));
      extra["orbit_branch"] = cv.label;
    }
  }

  if (!curves_header) w.put("curves.csv", curves.str());
  if (preset.id == "Fig2") {
    std::ostringstream os;
    write_abs_csv(os, preset.variants.front().sweep.n_phi, preset.variants.front().sweep.base.regions[0].delta0, 1.0);
    w.put("analytic.csv", os.str());
    extra["analytic"] = {{"delta_ev", preset.variants.front().sweep.base.regions[0].delta0}, {"eta_transparency", 1.0}};
  }

  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : w.files) files.push_back(f.filename().string());
  nlohmann::json manifest = {{"preset", preset.id},
                             {"title", preset.title},
                             {"version", library_version()},
                             {"files", files},
                             {"unspecified_parameters", preset.unspecified},
                             {"variants", variants}};
  if (!extra.empty()) manifest["observables"] = extra;
  w.put("manifest.json", manifest.dump(2) + "\n");
  return {w.dir, w.files, manifest};
}

}  // namespace junctionlab
