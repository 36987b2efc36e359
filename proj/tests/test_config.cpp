#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "junctionlab/bdg.hpp"
#include "junctionlab/config.hpp"
#include "junctionlab/phase.hpp"

using namespace junctionlab;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* kMinimal =
    "[device]\n"
    "family = sc-sc\n"
    "n = 30\n"
    "mu = 0.5\n"
    "t = 1\n"
    "delta0 = 1\n"
    "phi = 0\n";

ConfigError error_of(const std::string& text) {
  try {
    parse_device_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("no ConfigError for:\n" << text);
  throw std::logic_error("unreachable");
}

const char* kExplicit = R"(# Two chains joined by a weak link
[region.left]
kind = NormalSC
mu = 0.5
t = 1
delta0 = 1
sites = 10

[region.right]
kind = NormalSC
mu = 0.5
t = 1
delta0 = 1
phase_deg = 90
sites = 10
swept = true

[coupling.link]
a = left:last
b = right:first
strength = 0.4

[label.probe]
site = right:2
)";

}  // namespace

TEST_CASE("minimal family config") {
  const auto d = parse_device_config(kMinimal);
  REQUIRE(d.family);
  CHECK(d.family->family == DeviceFamily::ScSc);
  CHECK(d.spec.size() == 30);
  CHECK(d.spec.couplings[0].strength == 1.0);  // v_junction defaults to t
  CHECK(d.swept_regions == std::vector<std::size_t>{1});
  CHECK(assemble(d.spec).h == assemble(build_sc_sc(30, 0.5, 1, 1, 0, 1)).h);
}

TEST_CASE("angles in degrees or radians") {
  std::string text = kMinimal;
  text.replace(text.find("phi = 0"), 7, "phi_deg = 180");
  CHECK(parse_device_config(text).spec.regions[1].phase == kPi);
  text = kMinimal;
  text.replace(text.find("phi = 0"), 7, "phi_rad = 1.5");
  CHECK(parse_device_config(text).family->phi == 1.5);
  text = std::string(kMinimal) + "phi_deg = 10\n";
  const auto e = error_of(text);
  CHECK_THAT(e.what(), ContainsSubstring("more than once"));
  CHECK(e.line == 8);
}

TEST_CASE("explicit regions, couplings and labels") {
  const auto d = parse_device_config(kExplicit);
  CHECK_FALSE(d.family);
  CHECK(d.spec.size() == 20);
  CHECK(d.spec.regions[1].phase == kPi / 2);
  CHECK(d.swept_regions == std::vector<std::size_t>{1});
  REQUIRE(d.spec.couplings.size() == 1);
  CHECK(d.spec.couplings[0].site_a == 9);
  CHECK(d.spec.couplings[0].site_b == 10);
  CHECK(d.spec.couplings[0].name == "link");
  CHECK(d.spec.labels.at("probe") == 12);
  // Regions are laid out side by side.
  CHECK(d.spec.sites[10].x == 10);

  const auto c = sweep_config_for(d, SweptPhase::Phi, 32, true);
  CHECK(c.swept_regions == std::vector<std::size_t>{1});
  CHECK(c.description["family"] == "explicit");
  CHECK_THROWS_AS(sweep_config_for(d, SweptPhase::Phi1, 32, true), std::invalid_argument);
}

TEST_CASE("block regions and row,col sites") {
  const auto d = parse_device_config(R"(
[region.host]
kind = NormalSC
mu = 0.25
t = 0.5
delta0 = 1
rows = 3
cols = 4

[region.wire]
kind = TscPhaseHopping
mu = 0.25
t = 0.5
delta0 = 1
sites = 5
origin = 0, 5

[coupling.v]
a = host:2,3
b = wire:0
strength = 1
)");
  CHECK(d.spec.size() == 17);
  CHECK(d.spec.bonds.size() == std::size_t(3 * 3 + 2 * 4 + 4));
  CHECK(d.spec.couplings[0].site_a == 11);
  CHECK(d.spec.sites[12].y == 5);
  CHECK(d.swept_regions.empty());
  CHECK_THROWS_AS(sweep_config_for(d, SweptPhase::Phi, 32, true), std::invalid_argument);
}

TEST_CASE("duplicate region names the section") {
  std::string text = kExplicit;
  text.replace(text.find("[region.right]"), 14, "[region.left]");
  const auto e = error_of(text);
  CHECK(e.section == "region.left");
  CHECK_THAT(e.what(), ContainsSubstring("duplicate region 'left'"));
  CHECK(e.line == 9);
}

TEST_CASE("unknown keys are hard errors with a position") {
  const auto e = error_of(std::string(kMinimal) + "  colour = red\n");
  CHECK(e.line == 8);
  CHECK(e.column == 3);
  CHECK(e.section == "device");
  CHECK_THAT(e.what(), ContainsSubstring("unknown key 'colour'"));
  CHECK_THAT(e.what(), ContainsSubstring("line 8:3"));
}

TEST_CASE("syntax errors") {
  CHECK(error_of("[device\nfamily = sc-sc\n").line == 1);
  CHECK(error_of("family = sc-sc\n").line == 1);
  auto e = error_of("[device]\nfamily sc-sc\n");
  CHECK(e.line == 2);
  CHECK_THAT(e.what(), ContainsSubstring("key = value"));
  e = error_of("[device]\nfamily =\n");
  CHECK_THAT(e.what(), ContainsSubstring("missing value"));
  e = error_of(std::string(kMinimal) + "mu = 2\n");
  CHECK_THAT(e.what(), ContainsSubstring("duplicate key 'mu'"));
  e = error_of("[device]\nfamily = sc-sc\nn = 30\nmu = 0.5x\nt = 1\ndelta0 = 1\nphi = 0\n");
  CHECK(e.line == 4);
  CHECK(e.column == 9);
  CHECK_THAT(e.what(), ContainsSubstring("not a number"));
  e = error_of("[device]\nfamily = sc-sc\nn = 3.5\n");
  CHECK_THAT(e.what(), ContainsSubstring("not an integer"));
  CHECK_THAT(error_of("[nonsense]\n").what(), ContainsSubstring("unknown section"));
  CHECK_THAT(error_of("[device]\nfamily = sc-nsc\n").what(), ContainsSubstring("unknown family"));
}

TEST_CASE("missing keys and inconsistent files") {
  auto e = error_of("[device]\nfamily = sc-tsc\nn = 30\nmu = 1\nt = 1\ndelta0 = 1\nphi = 0\n");
  CHECK_THAT(e.what(), ContainsSubstring("missing required key 'v_c'"));
  e = error_of("[device]\nfamily = sc-sc\nn = 30\nmu = 1\nt = 1\ndelta0 = 1\n");
  CHECK_THAT(e.what(), ContainsSubstring("angle 'phi'"));
  e = error_of(std::string(kMinimal) + "[region.x]\nkind = NormalSC\n");
  CHECK_THAT(e.what(), ContainsSubstring("extra sections"));
  e = error_of(std::string(kMinimal) + "[geometry]\nhost_rows = 4\n");
  CHECK_THAT(e.what(), ContainsSubstring("msq"));
  CHECK_THAT(error_of("# empty\n").what(), ContainsSubstring("no [region.*]"));
  std::string odd = kMinimal;
  odd.replace(odd.find("n = 30"), 6, "n = 31");
  CHECK_THAT(error_of(odd).what(), ContainsSubstring("even"));
}

TEST_CASE("semantic violations become config errors") {
  std::string text = kExplicit;
  text.replace(text.find("strength = 0.4"), 14, "strength = -1");
  const auto e = error_of(text);
  CHECK_THAT(e.what(), ContainsSubstring("NegativeCoupling"));
  text = kExplicit;
  text.replace(text.find("b = right:first"), 15, "b = right:10");
  CHECK_THAT(error_of(text).what(), ContainsSubstring("outside region 'right'"));
  text = kExplicit;
  text.replace(text.find("b = right:first"), 15, "b = middle:0");
  CHECK_THAT(error_of(text).what(), ContainsSubstring("unknown region 'middle'"));
  text = kExplicit;
  text.replace(text.find("kind = NormalSC"), 15, "kind = Metal");
  CHECK_THAT(error_of(text).what(), ContainsSubstring("unknown region kind"));
}

TEST_CASE("family variants") {
  auto d = parse_device_config(
      "[device]\nfamily = tsc-tsc\nn = 30\nmu_left = 4\nmu_right = 1\nt = 1\ndelta0 = 1\nphi = 0\n");
  CHECK(d.spec.regions[0].mu == 4.0);
  CHECK(d.spec.regions[1].mu == 1.0);
  CHECK(d.spec.couplings[0].strength == 1.0);
  d = parse_device_config("[device]\nfamily = sc-tsc\nn = 30\nmu = 1\nt = 1\ndelta0 = 1\nphi = 0\nv_c = 0.25\n");
  CHECK(d.spec.couplings[0].strength == 0.25);
  CHECK(d.swept_regions == std::vector<std::size_t>{0});
}

TEST_CASE("msq family with a custom geometry") {
  const auto d = parse_device_config(R"([device]
family = msq
phi = 0
phi1_deg = 90
phi2 = 0
gates = 1, 1, 0, 1, 1, 0

[geometry]
host_rows = 12
host_cols = 6
wire_len = 5
bar_len = 6
bar_row = 11
stub_len = 2
stub1_attach = 1
stub2_attach = 4
stub2_outward = true
)");
  REQUIRE(d.family);
  CHECK(d.spec.size() == std::size_t(2 * 12 * 6 + 5 + 6 + 4));
  CHECK(d.family->geometry.stub_outward[1]);
  CHECK(d.spec.regions[2].phase == kPi / 2);
  const auto c = sweep_config_for(d, SweptPhase::Phi2, 16, true);
  CHECK(c.swept_regions == std::vector<std::size_t>{3});

  auto e = error_of("[device]\nfamily = msq\nphi = 0\nphi1 = 0\nphi2 = 0\ngates = 1, 1, 0\n");
  CHECK_THAT(e.what(), ContainsSubstring("6 values"));
  e = error_of("[device]\nfamily = msq\nphi = 0\nphi1 = 0\nphi2 = 0\ngates = 1,1,0,1,1,0\n[geometry]\ngap_cols = 0\n");
  CHECK_THAT(e.what(), ContainsSubstring("separated"));
  e = error_of("[device]\nfamily = msq\nphi = 0\nphi1 = 0\nphi2 = 0\ngates = 1,1,0,1,1,0\n[geometry]\nstub1_outward = maybe\n");
  CHECK_THAT(e.what(), ContainsSubstring("true/false"));
}

TEST_CASE("config files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "junctionlab_test_config";
  std::filesystem::create_directories(dir);
  const auto path = dir / "scsc.cfg";
  std::ofstream(path) << kMinimal;
  CHECK(load_device_config(path.string()).spec.size() == 30);
  CHECK_THROWS_AS(load_device_config((dir / "missing.cfg").string()), ConfigError);
  std::filesystem::remove_all(dir);
}
