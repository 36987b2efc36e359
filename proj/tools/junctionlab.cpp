#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "junctionlab/bulk.hpp"
#include "junctionlab/config.hpp"
#include "junctionlab/continuum.hpp"
#include "junctionlab/csv.hpp"
#include "junctionlab/observables.hpp"
#include "junctionlab/phase.hpp"
#include "junctionlab/presets.hpp"
#include "junctionlab/symmetry.hpp"

namespace fs = std::filesystem;
using namespace junctionlab;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Angle {
  std::optional<double> rad;
  std::optional<double> deg;

  void add(CLI::App* app, const std::string& name, const std::string& what) {
    auto* r = app->add_option("--" + name, rad, what + " (radians)");
    auto* d = app->add_option("--" + name + "-deg", deg, what + " (degrees)");
    r->excludes(d);
  }
  std::optional<double> value() const {
    if (rad) return rad;
    if (deg) return *deg * kPi / 180.0;
    return std::nullopt;
  }
  double value_or(double v) const { return value().value_or(v); }
};

struct Common {
  std::optional<std::string> out;
  int phi_steps = 0;
  bool track = true;
  int threads = 1;
  bool json = false;

  fs::path output_dir() const {
    if (out) return *out;
    if (const char* env = std::getenv("JUNCTIONLAB_OUT"); env && *env) return env;
    return "out";
  }
};

void add_common(CLI::App* app, Common& c, int default_steps, bool sweep_flags, int min_steps = 16) {
  app->add_option("--out", c.out, "Output directory (default: $JUNCTIONLAB_OUT, else ./out)");
  app->add_flag("--json", c.json, "Print a JSON summary on standard output");
  if (default_steps > 0) {
    c.phi_steps = default_steps;
    app->add_option("--phi-steps", c.phi_steps, "Number of phase grid points over [0, 2pi]")
        ->capture_default_str()
        ->check(CLI::Range(min_steps, 1 << 20));
  }
  if (sweep_flags) {
    app->add_flag("--track,!--no-track", c.track, "Thread branches by eigenvector overlap");
    app->add_option("--threads", c.threads, "Worker threads over the phase grid")->check(CLI::Range(1, 1024));
  }
}

// Device given either as a config file or as family parameters.
struct DeviceArgs {
  std::string config;
  std::string family;
  int n = 30;
  std::optional<double> mu, mu_right, t, delta0, coupling;
  Angle phi, phi1, phi2;
  std::vector<double> gates;

  void add(CLI::App* app) {
    app->add_option("config", config, "Device config file")->check(CLI::ExistingFile);
    app->add_option("--family", family, "Device family instead of a config file")
        ->check(CLI::IsMember({"sc-sc", "sc-tsc", "tsc-tsc", "msq"}));
    app->add_option("--n", n, "Total chain sites")->capture_default_str();
    app->add_option("--mu", mu, "Chemical potential (left half for tsc-tsc), eV");
    app->add_option("--mu-right", mu_right, "Right-half chemical potential (tsc-tsc), eV");
    app->add_option("--t", t, "Hopping, eV");
    app->add_option("--delta0", delta0, "Pairing amplitude, eV");
    app->add_option("--coupling", coupling, "Junction coupling, eV (default: t)");
    app->add_option("--gates", gates, "msq: six gate couplings, eV")->expected(6);
    phi.add(app, "phi", "Phase of the right superconductor");
    phi1.add(app, "phi1", "msq: phase of island I");
    phi2.add(app, "phi2", "msq: phase of island II");
  }

  ParsedDevice load() const {
    if (!config.empty() && !family.empty()) throw UsageError("give either a config file or --family, not both");
    if (!config.empty()) return load_device_config(config);
    if (family.empty()) throw UsageError("a config file or --family is required");
    FamilyParams q;
    q.family = device_family_from_string(family);
    q.phi = phi.value_or(0.0);
    q.phi1 = phi1.value_or(0.0);
    q.phi2 = phi2.value_or(0.0);
    if (q.family == DeviceFamily::Msq) {
      q.material.mu = mu.value_or(q.material.mu);
      q.material.t = t.value_or(q.material.t);
      q.material.delta0 = delta0.value_or(q.material.delta0);
      if (!gates.empty()) std::copy(gates.begin(), gates.end(), q.gates.begin());
    } else {
      q.n = n;
      q.mu = mu.value_or(q.mu);
      q.mu_right = mu_right.value_or(q.mu);
      q.t = t.value_or(q.t);
      q.delta0 = delta0.value_or(q.delta0);
      q.coupling = coupling.value_or(q.family == DeviceFamily::TscTsc ? -1.0 : q.t);
    }
    ParsedDevice d;
    d.spec = build_family(q);
    d.swept_regions = {q.family == DeviceFamily::ScTsc ? 0u : 1u};
    d.family = q;
    return d;
  }
};

void emit(const Common& c, const nlohmann::json& summary) {
  if (c.json) std::cout << summary.dump(2) << '\n';
}

std::string text_of(const std::function<void(std::ostream&)>& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

nlohmann::json written(const std::vector<fs::path>& files) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : files) j.push_back(f.string());
  return j;
}

int run_sweep(const DeviceArgs& dev, const Common& c, const std::string& swept, bool dump) {
  const ParsedDevice d = dev.load();
  SweepConfig cfg = sweep_config_for(d, swept_phase_from_string(swept), c.phi_steps, c.track);
  cfg.threads = c.threads;
  const fs::path dir = c.output_dir();
  std::cerr << "sweeping " << cfg.swept_name << " over " << cfg.n_phi << " points (" << d.spec.size() << " sites)\n";
  std::vector<fs::path> files;
  if (dump) {
    write_text_file(dir / "matrix.csv", text_of([&](auto& os) { write_matrix_csv(os, assemble(d.spec)); }));
    files.push_back(dir / "matrix.csv");
  }
  const SweepResult r = sweep(cfg);
  write_text_file(dir / "curves.csv", text_of([&](auto& os) { write_curves_csv(os, r); }));
  const nlohmann::json sidecar = sweep_json(cfg, r);
  write_text_file(dir / "sweep.json", sidecar.dump(2) + "\n");
  files.push_back(dir / "curves.csv");
  files.push_back(dir / "sweep.json");
  std::cerr << r.curves.size() << " branches" << (r.branch_exchange ? ", branches exchange over 2pi" : "") << '\n';
  emit(c, {{"files", written(files)}, {"branches", sidecar["branches"]}, {"branch_exchange", r.branch_exchange}});
  return kOk;
}

int run_densities(const DeviceArgs& dev, const Common& c, bool dump) {
  const ParsedDevice d = dev.load();
  // Explicit configs carry their own phases; --phi then offsets the swept regions.
  SweepConfig cfg;
  double phi = dev.phi.value_or(0.0);
  if (d.family) {
    cfg = make_sweep_config(*d.family, SweptPhase::Phi, 16, true);
    phi = dev.phi.value_or(d.family->phi);
  } else {
    cfg.base = d.spec;
    cfg.swept_regions = d.swept_regions;
  }
  const DeviceSpec spec = device_at(cfg, phi);
  const BdgMatrix h = assemble(spec);
  const EigenSolution sol = eig_hermitian(h);
  const double gap = cfg.gap_edge ? *cfg.gap_edge : device_gap_edge(spec);
  const auto idx = select_states(cfg, spec, sol, gap);
  const fs::path dir = c.output_dir();
  std::vector<fs::path> files;
  if (dump) {
    write_text_file(dir / "matrix.csv", text_of([&](auto& os) { write_matrix_csv(os, h); }));
    files.push_back(dir / "matrix.csv");
  }
  nlohmann::json states = nlohmann::json::array();
  for (auto k : idx) {
    const auto f = local_densities(sol.vectors.col(static_cast<Eigen::Index>(k)), spec);
    const fs::path file = dir / ("densities_" + std::to_string(k) + ".csv");
    write_text_file(file, text_of([&](auto& os) { write_densities_csv(os, phi, f); }));
    files.push_back(file);
    states.push_back({{"index", k},
                      {"energy_ev", sol.values[static_cast<Eigen::Index>(k)]},
                      {"total_charge", total_charge(f)},
                      {"participation_ratio", participation_ratio(f)}});
  }
  std::cerr << idx.size() << " in-gap states below " << gap << " eV\n";
  emit(c, {{"files", written(files)}, {"phi", phi}, {"gap_edge_ev", gap}, {"states", states}});
  return kOk;
}

int run_bulk(const RegionModel& region, int n_k, const Common& c) {
  const BulkBands b = bulk_bands(region, n_k);
  const fs::path file = c.output_dir() / "bulk.csv";
  write_text_file(file, text_of([&](auto& os) { write_bulk_csv(os, b); }));
  std::cerr << "gap edge " << b.gap_edge << " eV\n";
  emit(c, {{"files", written({file})}, {"gap_edge_ev", b.gap_edge}, {"n_k", n_k}});
  return kOk;
}

int run_analytic(double delta, double eta, const Common& c) {
  const fs::path file = c.output_dir() / "analytic.csv";
  write_text_file(file, text_of([&](auto& os) { write_abs_csv(os, c.phi_steps, delta, eta); }));
  emit(c, {{"files", written({file})}, {"delta_ev", delta}, {"eta_transparency", eta}, {"points", c.phi_steps}});
  return kOk;
}

int run_preset(const std::string& id, const PresetOptions& o, const Common& c) {
  const FigurePreset p = make_preset(id, o);
  std::cerr << "preset " << id << ": " << p.title << '\n';
  const PresetBundle b = run_preset(p, c.output_dir(), o.threads);
  emit(c, {{"files", written(b.files)}, {"directory", b.directory.string()}});
  return kOk;
}

int run_validate(const std::string& path, const Common& c) {
  const ParsedDevice d = load_device_config(path);
  const SymmetryReport ph = ph_defect(assemble(d.spec));
  std::cerr << path << ": valid, " << d.spec.size() << " sites, " << d.spec.regions.size() << " regions\n";
  emit(c, {{"valid", true}, {"device", device_json(d.spec)}, {"particle_hole", to_json(ph)}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-phase relations of superconducting and topological Josephson junctions"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1, 1);

  Common common;
  DeviceArgs dev;
  bool dump = false;
  std::string swept = "phi";

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a phase and track the in-gap branches");
  dev.add(sweep_cmd);
  add_common(sweep_cmd, common, 128, true);
  sweep_cmd->add_option("--swept", swept, "Swept phase")->check(CLI::IsMember({"phi", "phi1", "phi2"}));
  sweep_cmd->add_flag("--dump-matrix", dump, "Also write the BdG matrix at the base phase");

  auto* dens_cmd = app.add_subcommand("densities", "Local densities of every in-gap state at one phase");
  dev.add(dens_cmd);
  add_common(dens_cmd, common, 0, false);
  dens_cmd->add_flag("--dump-matrix", dump, "Also write the BdG matrix");

  RegionModel region;
  std::string kind = "NormalSC";
  int n_k = 256;
  Angle region_phase;
  auto* bulk_cmd = app.add_subcommand("bulk", "Bulk bands of one region");
  bulk_cmd->add_option("--kind", kind)->check(CLI::IsMember({"NormalSC", "KitaevTSC", "TscPhaseHopping"}))->capture_default_str();
  bulk_cmd->add_option("--mu", region.mu, "eV")->capture_default_str();
  bulk_cmd->add_option("--t", region.t, "eV")->capture_default_str();
  bulk_cmd->add_option("--delta0", region.delta0, "eV")->capture_default_str();
  bulk_cmd->add_option("--nk", n_k, "k points over [-pi, pi]")->check(CLI::Range(16, 1 << 20))->capture_default_str();
  region_phase.add(bulk_cmd, "phase", "Region phase");
  add_common(bulk_cmd, common, 0, false);

  double delta = 1.0, eta = 1.0;
  auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form bound-state energies against phase");
  analytic_cmd->add_option("--delta", delta, "Gap, eV")->capture_default_str();
  analytic_cmd->add_option("--eta", eta, "Junction transparency in [0, 1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_common(analytic_cmd, common, 128, false, 2);

  DeviceArgs msq_dev;
  auto* msq_cmd = app.add_subcommand("msq", "Two-island device sweep over phi");
  msq_dev.phi1.add(msq_cmd, "phi1", "Phase of island I");
  msq_dev.phi2.add(msq_cmd, "phi2", "Phase of island II");
  msq_cmd->add_option("--gates", msq_dev.gates, "Six gate couplings, eV")->expected(6);
  add_common(msq_cmd, common, 32, true);

  std::string preset_id;
  PresetOptions popts;
  Angle p1, p2;
  auto* preset_cmd = app.add_subcommand("preset", "Reproduce one figure configuration");
  preset_cmd->add_option("id", preset_id, "Preset id")->required()->check(CLI::IsMember(preset_ids()));
  p1.add(preset_cmd, "phi1", "Fig10: phase of island I");
  p2.add(preset_cmd, "phi2", "Fig10: phase of island II");
  add_common(preset_cmd, common, 0, true);

  std::string config_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a device config");
  validate_cmd->add_option("config", config_path, "Device config file")->required()->check(CLI::ExistingFile);
  add_common(validate_cmd, common, 0, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kUsage;
  }

  try {
    if (*sweep_cmd) return run_sweep(dev, common, swept, dump);
    if (*dens_cmd) return run_densities(dev, common, dump);
    if (*bulk_cmd) {
      region.name = "bulk";
      region.kind = region_kind_from_string(kind);
      region.phase = normalize_phase(region_phase.value_or(0.0));
      return run_bulk(region, n_k, common);
    }
    if (*analytic_cmd) return run_analytic(delta, eta, common);
    if (*msq_cmd) {
      const SweepResult r = msq_sweep(msq_dev.phi1.value_or(0.0), msq_dev.phi2.value_or(0.0), common.phi_steps,
                                      common.threads, {},
                                      msq_dev.gates.empty() ? std::array<double, 6>{1, 1, 0, 1, 1, 0}
                                                            : std::array<double, 6>{msq_dev.gates[0], msq_dev.gates[1],
                                                                                    msq_dev.gates[2], msq_dev.gates[3],
                                                                                    msq_dev.gates[4], msq_dev.gates[5]},
                                      common.track);
      const fs::path file = common.output_dir() / "curves.csv";
      write_text_file(file, text_of([&](auto& os) { write_curves_csv(os, r); }));
      nlohmann::json branches = nlohmann::json::array();
      for (const auto& cv : r.curves)
        branches.push_back({{"branch_id", cv.label}, {"mean_energy_ev", cv.mean_energy()}, {"spread_ev", cv.spread()}});
      std::cerr << r.curves.size() << " branches\n";
      emit(common, {{"files", written({file})}, {"branches", branches}});
      return kOk;
    }
    if (*preset_cmd) {
      popts.phi1 = p1.value_or(0.0);
      popts.phi2 = p2.value_or(0.0);
      popts.threads = common.threads;
      return run_preset(preset_id, popts, common);
    }
    if (*validate_cmd) return run_validate(config_path, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidGeometry& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidDevice& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonHermitianInput& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
