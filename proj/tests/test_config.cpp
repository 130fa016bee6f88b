#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "vecf/cli/config.hpp"

using namespace vecf;
using namespace vecf::cli;

namespace {

RawConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test");
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesSections) {
  const RawConfig rc = parse("[transport]\na2 = 6\neta_form = constant\n[solver]\nN = 64\nt_end=0.5\nic=gaussian\n");
  EXPECT_EQ(rc.real("transport.a2", 0), 6.0);
  EXPECT_EQ(rc.integer("solver.N", 0), 64);
  const TransportModel m = transport_from(rc);
  EXPECT_EQ(m.a1, 4.0);
  EXPECT_EQ(m.a2, 6.0);
  EXPECT_EQ(m.eta_form, EtaForm::constant);
  const SolverConfig c = solver_from(rc, 2);
  EXPECT_EQ(c.N, 64);
  EXPECT_EQ(c.ic.kind, ICKind::gaussian_eps);
  EXPECT_EQ(c.ic.center, 10.0);
  EXPECT_EQ(c.threads, 2);
}

TEST(Config, Defaults) {
  const RawConfig rc = parse("");
  const TransportModel m = transport_from(rc);
  EXPECT_EQ(m.a1, 4.0);
  EXPECT_EQ(m.a2, 4.0);
  const VerifySettings v = verify_from(rc);
  EXPECT_EQ(v.samples, 10000u);
  EXPECT_EQ(v.oracle_resolutions, (std::vector<int>{32, 64, 128, 256}));
  const ScanSettings s = scan_from(rc);
  EXPECT_EQ(s.a2_list, (std::vector<double>{4, 5, 6, 8, 10}));
  EXPECT_EQ(s.theta_steps, 720);
}

TEST(Config, UnknownKey) {
  EXPECT_EQ(error_of([] { parse("[solver]\ncells = 3\n"); }), "unknown config key 'solver.cells'");
  EXPECT_EQ(error_of([] { parse("[nowhere]\nx = 1\n"); }), "unknown config key 'nowhere.x'");
  EXPECT_EQ(error_of([] { parse("[nowhere]\n"); }), "");
  EXPECT_NE(error_of([] { parse("N = 3\n"); }).find("outside any section"), std::string::npos);
}

TEST(Config, RangeAndTypeChecks) {
  EXPECT_NE(error_of([] { parse("[solver]\ncfl = 1.5\n"); }).find("out of range"), std::string::npos);
  EXPECT_NE(error_of([] { parse("[solver]\ncfl = 0\n"); }).find("out of range"), std::string::npos);
  EXPECT_NE(error_of([] { parse("[solver]\nN = 12.5\n"); }).find("not an integer"), std::string::npos);
  EXPECT_NE(error_of([] { parse("[solver]\nL = abc\n"); }).find("not a finite number"), std::string::npos);
  EXPECT_NE(error_of([] { parse("[dod]\nresolutions =\n"); }).find("empty"), std::string::npos);
}

TEST(Config, MissingRequiredKeys) {
  EXPECT_EQ(error_of([] { solver_from(parse(""), 1); }), "missing required config key 'solver.N'");
  EXPECT_EQ(error_of([] { solver_from(parse("[solver]\nN=64\nic=constant\n"), 1); }),
            "missing required config key 'solver.t_end'");
  EXPECT_EQ(error_of([] { dod_from(parse("[dod]\nprobe_x=1\n"), 1); }), "missing required config key 'dod.probe_t'");
}

TEST(Config, SolverValidationBecomesConfigError) {
  EXPECT_NE(error_of([] { solver_from(parse("[transport]\na2=3\n[solver]\nN=64\nt_end=1\nic=constant\n"), 1); })
                .find("a2 must be >= 4"),
            std::string::npos);
  EXPECT_NE(error_of([] { solver_from(parse("[solver]\nN=64\nt_end=1\nic=vortex\n"), 1); }).find("solver.ic"),
            std::string::npos);
}

TEST(Config, Overrides) {
  RawConfig rc = parse("[solver]\nN = 64\n");
  rc.set_assignment("solver.N=128");
  rc.set_assignment(" transport.a2 = 8 ");
  EXPECT_EQ(rc.integer("solver.N", 0), 128);
  EXPECT_EQ(rc.real("transport.a2", 0), 8.0);
  EXPECT_THROW(rc.set_assignment("solver.N"), ConfigError);
  EXPECT_THROW(rc.set_assignment("solver.bogus=1"), ConfigError);
}

TEST(Config, Lists) {
  const RawConfig rc = parse("[scan]\na2_list = 4, 6.5 ,9\n[dod]\nresolutions = 64,128\n");
  EXPECT_EQ(scan_from(rc).a2_list, (std::vector<double>{4, 6.5, 9}));
  EXPECT_EQ(rc.int_list("dod.resolutions", {}), (std::vector<int>{64, 128}));
  EXPECT_EQ(linspace(0, 1, 3), (std::vector<double>{0, 0.5, 1}));
}

TEST(Config, IcTable) {
  const auto path = std::filesystem::temp_directory_path() / "vecf_ic_table_test.csv";
  {
    std::ofstream f(path);
    f << "eps0,eps1,v0x,v0y,v0z,v1x,v1y,v1z\n";
    for (int j = 0; j < 8; ++j) f << 1.0 + 0.01 * j << ",0,0.1,0,0,0,0,0\n";
  }
  const auto rows = read_ic_table(path.string());
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_DOUBLE_EQ(rows[3].eps0, 1.03);
  EXPECT_EQ(rows[3].v0[0], 0.1);
  const RawConfig rc = parse("[solver]\nN=8\nt_end=0.1\nic=custom\nic_table=" + path.string() + "\n");
  const SolverConfig c = solver_from(rc, 1);
  EXPECT_EQ(c.ic.table.size(), 8u);
  const RawConfig bad = parse("[solver]\nN=16\nt_end=0.1\nic=custom\nic_table=" + path.string() + "\n");
  EXPECT_THROW(solver_from(bad, 1), ConfigError);
  {
    std::ofstream f(path);
    f << "1,0,0\n";
  }
  EXPECT_NE(error_of([&] { read_ic_table(path.string()); }).find("expected 8 columns"), std::string::npos);
  std::filesystem::remove(path);
  EXPECT_THROW(read_ic_table(path.string()), ConfigError);
}

TEST(Config, DodView) {
  const RawConfig rc = parse(
      "[transport]\na2=6\n[dod]\nprobe_x=10\nprobe_t=2\noutside_center=13.5\ninside_center=10.3\nresolutions=64,128\n");
  const DodConfig d = dod_from(rc, 1);
  EXPECT_EQ(d.probe_t, 2.0);
  EXPECT_EQ(d.outside.center, 13.5);
  EXPECT_EQ(d.inside.radius, 1.0);
  EXPECT_EQ(d.base.ic.kind, ICKind::constant);
  EXPECT_EQ(d.resolutions, (std::vector<int>{64, 128}));
}

TEST(Config, LoadMissingFile) {
  EXPECT_NE(error_of([] { load_config("/nonexistent/file.ini"); }).find("cannot open"), std::string::npos);
}
