#include "junctionlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "junctionlab/phase.hpp"

namespace junctionlab {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int key_col = 0;
  int value_col = 0;
  mutable bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }

bool is_ident(const std::string& s) { return !s.empty() && std::all_of(s.begin(), s.end(), ident_char); }

// Trims blanks, returning the 0-based offset of the first kept character.
std::string trim(const std::string& s, std::size_t& offset) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) {
    offset = s.size();
    return "";
  }
  const auto e = s.find_last_not_of(" \t");
  offset = b;
  return s.substr(b, e - b + 1);
}

std::vector<Section> lex(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::size_t off = 0;
    const std::string s = trim(raw, off);
    if (s.empty()) continue;
    const int col = static_cast<int>(off) + 1;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("section header must end with ']'", "", line, col + int(s.size()));
      std::size_t inner = 0;
      const std::string name = trim(s.substr(1, s.size() - 2), inner);
      if (!is_ident(name)) throw ConfigError("invalid section name '" + name + "'", "", line, col + 1);
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", sections.empty() ? "" : sections.back().name, line, col);
    if (sections.empty()) throw ConfigError("key outside of any section", "", line, col);
    auto& sec = sections.back();
    std::size_t koff = 0, voff = 0;
    const std::string key = trim(s.substr(0, eq), koff);
    const std::string value = trim(s.substr(eq + 1), voff);
    if (!is_ident(key)) throw ConfigError("invalid key '" + key + "'", sec.name, line, col);
    const int vcol = col + int(eq) + 1 + int(voff);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", sec.name, line, vcol);
    for (const auto& e : sec.entries)
      if (e.key == key) throw ConfigError("duplicate key '" + key + "'", sec.name, line, col);
    sec.entries.push_back({key, value, line, col, vcol});
  }
  return sections;
}

class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {}

  const Entry* find(const std::string& key) const {
    for (const auto& e : s_.entries)
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    return nullptr;
  }

  const Entry& require(const std::string& key) const {
    if (const Entry* e = find(key)) return *e;
    throw ConfigError("missing required key '" + key + "' in [" + s_.name + "]", s_.name, s_.line, 0);
  }

  double parse_number(const Entry& e) const {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
      throw ConfigError("'" + e.value + "' is not a number", s_.name, e.line, e.value_col + int(ptr - first));
    return v;
  }

  double number(const std::string& key) const { return parse_number(require(key)); }
  double number(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? parse_number(*e) : fallback;
  }

  int integer(const std::string& key) const {
    const Entry& e = require(key);
    int v = 0;
    auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc{} || ptr != e.value.data() + e.value.size())
      throw ConfigError("'" + e.value + "' is not an integer", s_.name, e.line, e.value_col);
    return v;
  }
  std::optional<int> opt_integer(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }

  bool has(const std::string& key) const {
    return std::any_of(s_.entries.begin(), s_.entries.end(), [&](const Entry& e) { return e.key == key; });
  }

  /// `key` in radians, `key_rad` in radians or `key_deg` in degrees.
  std::optional<double> angle(const std::string& key) const {
    const Entry* rad = find(key);
    const Entry* rad2 = find(key + "_rad");
    const Entry* deg = find(key + "_deg");
    const int given = (rad != nullptr) + (rad2 != nullptr) + (deg != nullptr);
    if (given > 1) {
      const Entry* e = deg ? deg : rad2;
      throw ConfigError("angle '" + key + "' given more than once", s_.name, e->line, e->key_col);
    }
    if (rad) return parse_number(*rad);
    if (rad2) return parse_number(*rad2);
    if (deg) return parse_number(*deg) * kPi / 180.0;
    return std::nullopt;
  }
  double angle_required(const std::string& key) const {
    if (auto a = angle(key)) return *a;
    throw ConfigError("missing required angle '" + key + "' in [" + s_.name + "]", s_.name, s_.line, 0);
  }

  bool boolean(const std::string& key, bool fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ConfigError("'" + e->value + "' is not true/false", s_.name, e->line, e->value_col);
  }

  std::vector<double> list(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
      const auto comma = e.value.find(',', start);
      std::size_t off = 0;
      const std::string item = trim(e.value.substr(start, comma == std::string::npos ? std::string::npos : comma - start), off);
      Entry tmp = e;
      tmp.value = item;
      tmp.value_col = e.value_col + int(start + off);
      out.push_back(parse_number(tmp));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  void finish() const {
    for (const auto& e : s_.entries)
      if (!e.used) throw ConfigError("unknown key '" + e.key + "' in [" + s_.name + "]", s_.name, e.line, e.key_col);
  }

  const Section& section() const { return s_; }

 private:
  const Section& s_;
};

FamilyParams parse_family(const Reader& r, const Section* geometry) {
  FamilyParams p;
  p.family = [&] {
    const Entry& e = r.require("family");
    try {
      return device_family_from_string(e.value);
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown family '" + e.value + "'", "device", e.line, e.value_col);
    }
  }();
  switch (p.family) {
    case DeviceFamily::ScSc:
    case DeviceFamily::ScTsc:
    case DeviceFamily::TscTsc:
      p.n = r.integer("n");
      p.t = r.number("t");
      p.delta0 = r.number("delta0");
      p.phi = r.angle_required("phi");
      if (p.family == DeviceFamily::TscTsc) {
        p.mu = r.number("mu_left");
        p.mu_right = r.number("mu_right");
        p.coupling = r.number("v_junction", -1.0);
      } else {
        p.mu = r.number("mu");
        p.coupling = p.family == DeviceFamily::ScSc ? r.number("v_junction", p.t) : r.number("v_c");
      }
      break;
    case DeviceFamily::Msq: {
      p.phi = r.angle_required("phi");
      p.phi1 = r.angle_required("phi1");
      p.phi2 = r.angle_required("phi2");
      const auto gates = r.list("gates");
      if (gates.size() != 6) {
        const Entry& e = r.require("gates");
        throw ConfigError("gates needs 6 values, got " + std::to_string(gates.size()), "device", e.line, e.value_col);
      }
      std::copy(gates.begin(), gates.end(), p.gates.begin());
      p.material.mu = r.number("mu", p.material.mu);
      p.material.t = r.number("t", p.material.t);
      p.material.delta0 = r.number("delta0", p.material.delta0);
      if (geometry) {
        Reader g(*geometry);
        auto& m = p.geometry;
        auto opt = [&](const char* key, int& field) {
          if (auto v = g.opt_integer(key)) field = *v;
        };
        opt("host_rows", m.host_rows);
        opt("host_cols", m.host_cols);
        opt("gap_cols", m.gap_cols);
        opt("wire_len", m.wire_len);
        opt("wire_row", m.wire_row);
        opt("bar_len", m.bar_len);
        opt("bar_row", m.bar_row);
        opt("stub_len", m.stub_len);
        opt("stub_row", m.stub_row);
        opt("stub1_attach", m.stub_attach[0]);
        opt("stub2_attach", m.stub_attach[1]);
        m.stub_outward[0] = g.boolean("stub1_outward", m.stub_outward[0]);
        m.stub_outward[1] = g.boolean("stub2_outward", m.stub_outward[1]);
        g.finish();
      }
      break;
    }
  }
  r.finish();
  return p;
}

struct RegionLayout {
  std::size_t first = 0;
  int count = 0;
  int rows = 1;
  int cols = 1;
  bool block = false;
};

SiteId resolve_site(const Entry& e, const std::string& section, const DeviceSpec& spec,
                    const std::map<std::string, RegionLayout>& layout) {
  const auto colon = e.value.find(':');
  if (colon == std::string::npos)
    throw ConfigError("expected REGION:INDEX, got '" + e.value + "'", section, e.line, e.value_col);
  const std::string region = e.value.substr(0, colon);
  const std::string idx = e.value.substr(colon + 1);
  auto it = layout.find(region);
  if (it == layout.end()) throw ConfigError("unknown region '" + region + "'", section, e.line, e.value_col);
  const auto& L = it->second;
  const int icol = e.value_col + int(colon) + 1;
  auto parse_int = [&](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      throw ConfigError("bad site index '" + idx + "'", section, e.line, icol);
    return v;
  };
  int k = 0;
  if (idx == "first") {
    k = 0;
  } else if (idx == "last") {
    k = L.count - 1;
  } else if (auto comma = idx.find(','); comma != std::string::npos) {
    if (!L.block) throw ConfigError("row,col index needs a block region", section, e.line, icol);
    const int r = parse_int(idx.substr(0, comma)), c = parse_int(idx.substr(comma + 1));
    if (r < 0 || r >= L.rows || c < 0 || c >= L.cols)
      throw ConfigError("site " + idx + " outside region '" + region + "'", section, e.line, icol);
    k = r * L.cols + c;
  } else {
    k = parse_int(idx);
  }
  if (k < 0 || k >= L.count)
    throw ConfigError("site index " + idx + " outside region '" + region + "'", section, e.line, icol);
  (void)spec;
  return L.first + static_cast<SiteId>(k);
}

ParsedDevice parse_explicit(const std::vector<Section>& sections) {
  ParsedDevice out;
  DeviceSpec& spec = out.spec;
  std::map<std::string, RegionLayout> layout;
  int cursor_x = 0;
  for (const auto& sec : sections) {
    if (sec.name.rfind("region.", 0) != 0) continue;
    const std::string name = sec.name.substr(7);
    if (name.empty()) throw ConfigError("region section needs a name", sec.name, sec.line, 1);
    if (layout.count(name)) throw ConfigError("duplicate region '" + name + "'", sec.name, sec.line, 1);
    Reader r(sec);
    RegionModel m;
    m.name = name;
    const Entry& kind = r.require("kind");
    try {
      m.kind = region_kind_from_string(kind.value);
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown region kind '" + kind.value + "'", sec.name, kind.line, kind.value_col);
    }
    m.mu = r.number("mu");
    m.t = r.number("t");
    m.delta0 = r.number("delta0");
    m.phase = normalize_phase(r.angle("phase").value_or(0.0));
    const bool swept = r.boolean("swept", false);
    RegionLayout L;
    L.first = spec.size();
    if (r.has("sites")) {
      if (r.has("rows") || r.has("cols")) throw ConfigError("give either sites or rows/cols", sec.name, sec.line, 0);
      L.count = L.cols = r.integer("sites");
    } else {
      L.rows = r.integer("rows");
      L.cols = r.integer("cols");
      L.count = L.rows * L.cols;
      L.block = true;
    }
    if (L.rows < 1 || L.cols < 1) throw ConfigError("region must have at least one site", sec.name, sec.line, 0);
    int ox = cursor_x, oy = 0;
    if (r.has("origin")) {
      const auto o = r.list("origin");
      const Entry& e = r.require("origin");
      if (o.size() != 2 || o[0] != std::floor(o[0]) || o[1] != std::floor(o[1]))
        throw ConfigError("origin must be two integers 'x, y'", sec.name, e.line, e.value_col);
      ox = int(o[0]), oy = int(o[1]);
    }
    r.finish();

    const std::size_t region = spec.regions.size();
    spec.regions.push_back(m);
    if (swept) out.swept_regions.push_back(region);
    for (int row = 0; row < L.rows; ++row)
      for (int c = 0; c < L.cols; ++c) spec.sites.push_back({region, ox + c, oy + row});
    auto id = [&](int row, int c) { return SiteId(L.first + row * L.cols + c); };
    for (int row = 0; row < L.rows; ++row)
      for (int c = 0; c < L.cols; ++c) {
        if (c + 1 < L.cols) spec.bonds.push_back({id(row, c), id(row, c + 1)});
        if (row + 1 < L.rows) spec.bonds.push_back({id(row, c), id(row + 1, c)});
      }
    cursor_x = std::max(cursor_x, ox + L.cols);
    layout[name] = L;
  }
  if (spec.regions.empty()) throw ConfigError("no [region.*] sections and no family given", "", 0, 0);

  for (const auto& sec : sections) {
    const bool coupling = sec.name.rfind("coupling.", 0) == 0;
    const bool label = sec.name.rfind("label.", 0) == 0;
    if (!coupling && !label) continue;
    Reader r(sec);
    if (coupling) {
      const std::string name = sec.name.substr(9);
      for (const auto& c : spec.couplings)
        if (c.name == name) throw ConfigError("duplicate coupling '" + name + "'", sec.name, sec.line, 1);
      const SiteId a = resolve_site(r.require("a"), sec.name, spec, layout);
      const SiteId b = resolve_site(r.require("b"), sec.name, spec, layout);
      const double strength = r.number("strength");
      r.finish();
      spec.couplings.push_back({a, b, strength, name});
    } else {
      const std::string name = sec.name.substr(6);
      if (spec.labels.count(name)) throw ConfigError("duplicate label '" + name + "'", sec.name, sec.line, 1);
      spec.labels[name] = resolve_site(r.require("site"), sec.name, spec, layout);
      r.finish();
    }
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& msg, std::string section, int line, int column)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + (column > 0 ? ":" + std::to_string(column) : "") + ": "
                                   : std::string()) +
                         (section.empty() ? "" : "[" + section + "] ") + msg),
      section(std::move(section)),
      line(line),
      column(column) {}

ParsedDevice parse_device_config(const std::string& text) {
  const std::vector<Section> sections = lex(text);
  std::map<std::string, int> seen;
  const Section* device = nullptr;
  const Section* geometry = nullptr;
  for (const auto& s : sections) {
    if (seen.count(s.name)) {
      const bool region = s.name.rfind("region.", 0) == 0;
      throw ConfigError(region ? "duplicate region '" + s.name.substr(7) + "'" : "duplicate section", s.name, s.line, 1);
    }
    seen[s.name] = s.line;
    const bool known = s.name == "device" || s.name == "geometry" || s.name.rfind("region.", 0) == 0 ||
                       s.name.rfind("coupling.", 0) == 0 || s.name.rfind("label.", 0) == 0;
    if (!known) throw ConfigError("unknown section", s.name, s.line, 1);
    if (s.name == "device") device = &s;
    if (s.name == "geometry") geometry = &s;
  }

  ParsedDevice out;
  if (device) {
    for (const auto& s : sections)
      if (&s != device && &s != geometry)
        throw ConfigError("a family device cannot have extra sections", s.name, s.line, 1);
    FamilyParams p = parse_family(Reader(*device), geometry);
    if (geometry && p.family != DeviceFamily::Msq)
      throw ConfigError("[geometry] only applies to the msq family", "geometry", geometry->line, 1);
    try {
      out.spec = build_family(p);
    } catch (const InvalidGeometry& e) {
      throw ConfigError(e.what(), "device", device->line, 0);
    }
    out.swept_regions = {p.family == DeviceFamily::ScTsc ? 0u : 1u};
    out.family = p;
  } else {
    if (geometry) throw ConfigError("[geometry] needs a [device] section", "geometry", geometry->line, 1);
    out = parse_explicit(sections);
  }
  if (auto v = validate(out.spec); !v.empty())
    throw ConfigError("invalid device: " + to_string(v.front().kind) + " (" + v.front().detail + ")", "device", 0, 0);
  return out;
}

ParsedDevice load_device_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'", "", 0, 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_device_config(ss.str());
}

SweepConfig sweep_config_for(const ParsedDevice& d, SweptPhase swept, int n_phi, bool track) {
  if (d.family) return make_sweep_config(*d.family, swept, n_phi, track);
  if (swept != SweptPhase::Phi) throw std::invalid_argument(to_string(swept) + " can only be swept on the msq family");
  if (d.swept_regions.empty()) throw std::invalid_argument("no region is marked 'swept = true'");
  SweepConfig c;
  c.base = d.spec;
  c.swept_regions = d.swept_regions;
  c.n_phi = n_phi;
  c.track = track;
  c.description = {{"family", "explicit"}};
  return c;
}

}  // namespace junctionlab
