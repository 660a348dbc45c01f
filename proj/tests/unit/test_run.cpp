#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "netstab/error.hpp"
#include "netstab/scenario.hpp"
#include "oracles.hpp"

using namespace netstab;
namespace fs = std::filesystem;

namespace {

fs::path scenario(const char* name) { return fs::path(NETSTAB_SCENARIO_DIR) / name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("netstab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(RunScenario, StableReferenceScenario) {
  auto cfg = load_scenario(scenario("fig2.scenario"));
  cfg.output_dir = scratch("fig2");
  const auto r = run_scenario(cfg);

  EXPECT_NEAR(r.report.equilibrium.x_star, oracle::kXStarB02, 4e-16);
  EXPECT_EQ(r.report.verdict, Verdict::certified_stable);
  EXPECT_EQ(r.classification.kind, TrajectoryKind::converged);
  EXPECT_LT(r.classification.final_error, 1e-6);
  EXPECT_EQ(r.trajectory.samples.size(), 20001u);
  EXPECT_EQ(r.lyapunov.size(), 198u);
  EXPECT_TRUE(r.classification_note.empty());

  ASSERT_EQ(r.files.size(), 5u);
  for (const char* f : {"trajectory.csv", "lyapunov.csv", "report.txt", "plot.svg", "scenario.echo"}) {
    EXPECT_TRUE(fs::is_regular_file(cfg.output_dir / f)) << f;
  }
  const std::string csv = slurp(cfg.output_dir / "trajectory.csv");
  EXPECT_EQ(csv.rfind("t,x,c,dxdt\n0,1,4,", 0), 0u) << csv.substr(0, 80);
  EXPECT_EQ(slurp(cfg.output_dir / "lyapunov.csv").rfind("t,V\n3,", 0), 0u);
  const std::string report = slurp(cfg.output_dir / "report.txt");
  EXPECT_NE(report.find("verdict = CertifiedStable"), std::string::npos) << report;
  EXPECT_NE(report.find("kind = Converged"), std::string::npos) << report;
  EXPECT_EQ(slurp(cfg.output_dir / "plot.svg").rfind("<svg", 0), 0u);
  fs::remove_all(cfg.output_dir);
}

TEST(RunScenario, LargerExponentIsNotCertified) {
  auto cfg = load_scenario(scenario("fig1.scenario"));
  const auto r = run_scenario(cfg, {.write_files = false, .sample_lyapunov = false});
  EXPECT_EQ(r.report.verdict, Verdict::not_certified);
  EXPECT_LT(r.report.min_margin, 0.0);
  EXPECT_TRUE(r.files.empty());
  EXPECT_TRUE(r.lyapunov.empty());
}

TEST(RunScenario, ShortHorizonIsUndetermined) {
  auto cfg = load_scenario(scenario("fig2.scenario"));
  cfg.t_end = 5.0;
  const auto r = run_scenario(cfg, {.write_files = false});
  EXPECT_EQ(r.classification.kind, TrajectoryKind::undetermined);
  EXPECT_NE(r.classification_note.find("10 tau"), std::string::npos);
  EXPECT_EQ(exit_code(r.classification.kind), 12);
}

TEST(RunScenario, HorizonScalesWithDelay) {
  auto cfg = load_scenario(scenario("fig2.scenario"));
  cfg.horizon_tau_multiple = 100.0;
  const auto r = run_scenario(cfg, {.write_files = false, .sample_lyapunov = false});
  EXPECT_DOUBLE_EQ(r.trajectory.t_end, 300.0);
}

TEST(RunScenario, EchoReproducesRunExactly) {
  auto cfg = load_scenario(scenario("fig1.scenario"));
  cfg.t_end = 40.0;
  cfg.output_dir = scratch("echo_a");
  run_scenario(cfg);

  auto echoed = load_scenario(cfg.output_dir / "scenario.echo");
  echoed.output_dir = scratch("echo_b");
  run_scenario(echoed);
  EXPECT_EQ(slurp(cfg.output_dir / "trajectory.csv"), slurp(echoed.output_dir / "trajectory.csv"));
  EXPECT_EQ(slurp(cfg.output_dir / "lyapunov.csv"), slurp(echoed.output_dir / "lyapunov.csv"));
  fs::remove_all(cfg.output_dir);
  fs::remove_all(echoed.output_dir);
}

TEST(RunScenario, FailedWriteLeavesNoPartialOutput) {
  auto cfg = load_scenario(scenario("fig2.scenario"));
  cfg.t_end = 30.0;
  cfg.output_dir = scratch("partial");
  fs::create_directories(cfg.output_dir / "plot.svg");  // blocks the plot file
  EXPECT_THROW(run_scenario(cfg), Error);
  EXPECT_FALSE(fs::exists(cfg.output_dir / "trajectory.csv"));
  EXPECT_FALSE(fs::exists(cfg.output_dir / "lyapunov.csv"));
  EXPECT_FALSE(fs::exists(cfg.output_dir / "report.txt"));
  fs::remove_all(cfg.output_dir);
}

TEST(RunScenario, NoEquilibriumWritesNothing) {
  auto cfg = load_scenario(scenario("fig2.scenario"));
  cfg.params.x_min = 2.0;
  cfg.params.x_max = 3.0;
  cfg.init.value = 2.5;
  cfg.output_dir = scratch("noeq");
  EXPECT_THROW(run_scenario(cfg), NoEquilibriumError);
  EXPECT_FALSE(fs::exists(cfg.output_dir));
}

TEST(RunScenario, StartingAtEquilibriumStaysThere) {
  auto cfg = load_scenario(scenario("fig1.scenario"));
  cfg.init = {InitialHistory::Kind::equilibrium, 0.0};
  const auto r = run_scenario(cfg, {.write_files = false});
  EXPECT_EQ(r.classification.kind, TrajectoryKind::converged);
  EXPECT_LT(r.classification.final_error, 1e-9);
}

TEST(CheckScenario, EnvelopeOfInitialValueAndEquilibrium) {
  const auto stable = check_scenario(load_scenario(scenario("fig2.scenario")));
  EXPECT_EQ(stable.verdict, Verdict::certified_stable);
  EXPECT_LT(stable.range.lo, 1.0);
  EXPECT_GT(stable.range.hi, oracle::kXStarB02);

  const auto unstable = check_scenario(load_scenario(scenario("fig1.scenario")));
  EXPECT_EQ(unstable.verdict, Verdict::not_certified);
}

TEST(PaddedEnvelope, PadsAndClips) {
  ModelParams p;
  const auto law = CapacityLaw::affine(5.0, 1.0);
  const double xs[] = {1.0, 2.0};
  const auto r = padded_envelope(xs, p, law);
  EXPECT_DOUBLE_EQ(r.lo, 0.8);
  EXPECT_DOUBLE_EQ(r.hi, 2.2);

  const double flat[] = {1.5, 1.5};
  const auto f = padded_envelope(flat, p, law);
  EXPECT_DOUBLE_EQ(f.lo, 1.2);
  EXPECT_DOUBLE_EQ(f.hi, 1.8);

  const double wide[] = {0.01, 4.9};
  const auto w = padded_envelope(wide, p, law);
  EXPECT_EQ(w.lo, p.x_min);
  EXPECT_LT(w.hi, 5.0);
  EXPECT_GT(law.value(w.hi), 0.0);
}

TEST(ExitCode, Mapping) {
  EXPECT_EQ(exit_code(TrajectoryKind::converged), 0);
  EXPECT_EQ(exit_code(TrajectoryKind::oscillating), 10);
  EXPECT_EQ(exit_code(TrajectoryKind::saturated), 11);
  EXPECT_EQ(exit_code(TrajectoryKind::undetermined), 12);
}
