#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsi/cli.hpp"
#include "fsi/serialization.hpp"
#include "support.hpp"

using namespace fsi;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(RunConfig config) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config_for(Subcommand cmd, std::vector<std::string> args) {
  RunConfig c;
  c.subcommand = cmd;
  c.problem_args = std::move(args);
  return c;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("fsi_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(CliCertify, QuadraticExample) {
  const auto r = invoke(config_for(Subcommand::Certify,
                                   {"scalar_quadratic", "c=2", "x0=2", "b=0.25", "R=10"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["status"], "Certified");
  EXPECT_NEAR(j["nu_star"].get<double>(), 0.585786, 1e-6);
  EXPECT_EQ(j["uniqueness_boundary"], "Open");
  for (const char* key : {"nu", "eta", "R", "nu_star_star", "gamma_star", "lambda_star",
                          "scalar_sequence"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(CliCertify, NotCertifiedStillEmitsCertificate) {
  const auto r = invoke(config_for(Subcommand::Certify,
                                   {"scalar_quadratic", "c=3", "x0=1", "b=0.5"}));
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["status"], "NotCertified");
  EXPECT_EQ(j["reason"], "ConstraintAFails");
}

TEST(CliCertify, EstimatedMeasureForChandrasekhar) {
  const auto r = invoke(config_for(Subcommand::Certify, {"chandrasekhar"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["omega"]["kind"], "tabulated");
}

TEST(CliCertify, DirectFallsBackWhenNuIsLarge) {
  auto config = config_for(Subcommand::Certify, {"scalar_quadratic", "b=1"});
  config.measure = MeasureSource::Direct;
  const auto r = invoke(config);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["reason"], "NuTooLarge");
}

TEST(CliCertify, ProblemFileMatchesArguments) {
  TempDir dir;
  const std::string spec = dir.file("problem.json");
  std::ofstream(spec) << R"({"schema": 1, "fixture": "poly2d",
                            "params": {"x0": [1.05, 1.95]}, "norm": "max", "R": 0.5})";
  auto from_file = config_for(Subcommand::Certify, {});
  from_file.problem_file = spec;
  const auto a = invoke(from_file);
  const auto b = invoke(config_for(Subcommand::Certify,
                                   {"poly2d", "x0=1.05,1.95", "norm=max", "R=0.5"}));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliExitCodes, InvalidInputAndEvaluationFailure) {
  EXPECT_EQ(invoke(config_for(Subcommand::Certify, {"nonexistent"})).code, 2);
  EXPECT_EQ(invoke(config_for(Subcommand::Certify, {"linear", "zeta=1"})).code, 2);
  EXPECT_EQ(invoke(config_for(Subcommand::Certify, {"linear", "x0=abc"})).code, 2);
  EXPECT_EQ(invoke(config_for(Subcommand::Certify, {})).code, 2);
  auto missing = config_for(Subcommand::Certify, {});
  missing.problem_file = "/nonexistent/problem.json";
  EXPECT_EQ(invoke(missing).code, 2);
  auto bad_tol = config_for(Subcommand::Solve, {"linear"});
  bad_tol.tolerances.tol_step = 0.0;
  EXPECT_EQ(invoke(bad_tol).code, 2);

  auto estimate = config_for(Subcommand::EstimateOmega, {"scalar_quadratic", "b=1"});
  const auto r = invoke(estimate);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NuNotContractive"), std::string::npos);
}

TEST(CliCompare, Example) {
  TempDir dir;
  auto config = config_for(Subcommand::Compare,
                           {"l0=1", "alpha=1", "nu=0", "eta=0.3", "R=10"});
  config.report_path = dir.file("report.json");
  const auto r = invoke(config);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("new           true"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ahues         false"), std::string::npos) << r.out;
  const json j = json::parse(slurp(config.report_path.value()));
  EXPECT_TRUE(j["new_condition"]["holds"].get<bool>());
  EXPECT_FALSE(j["ahues_condition"]["holds"].get<bool>());
  EXPECT_TRUE(j["kantorovich_condition"].get<bool>());
  EXPECT_DOUBLE_EQ(j["eta_max_ratio"].get<double>(), 2.0);
}

TEST(CliCompare, FixtureConstants) {
  const auto r = invoke(config_for(Subcommand::Compare, {"scalar_quadratic"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("eta_max_ratio 2"), std::string::npos);
  EXPECT_EQ(invoke(config_for(Subcommand::Compare, {"chandrasekhar"})).code, 2);
  EXPECT_EQ(invoke(config_for(Subcommand::Compare, {"l0=1", "eta=0.1"})).code, 2);
}

TEST(CliSolve, LinearTraceHasOneStep) {
  TempDir dir;
  auto config = config_for(Subcommand::Solve, {"linear"});
  config.trace_path = dir.file("trace.csv");
  config.report_path = dir.file("report.json");
  const auto r = invoke(config);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(*config.trace_path));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "k,step_norm,residual_norm,v_step,bound_slack,error_bound");
  EXPECT_EQ(lines[2].substr(0, 5), "1,,0,");
  const json j = json::parse(slurp(*config.report_path));
  EXPECT_EQ(j["iterations"], 1);
  EXPECT_EQ(j["final_residual"], 0.0);
  EXPECT_TRUE(j["majorization"]["passed"].get<bool>());
  EXPECT_TRUE(j["uniqueness_probe"]["passed"].get<bool>());
}

TEST(CliSolve, DeterministicFiles) {
  TempDir dir;
  std::vector<std::string> traces;
  std::vector<std::string> reports;
  for (int i = 0; i < 2; ++i) {
    auto config = config_for(Subcommand::Solve, {"chandrasekhar", "n=12"});
    config.num_starts = 10;
    config.trace_path = dir.file("trace" + std::to_string(i) + ".csv");
    config.report_path = dir.file("report" + std::to_string(i) + ".json");
    ASSERT_EQ(invoke(config).code, 0);
    traces.push_back(slurp(*config.trace_path));
    reports.push_back(slurp(*config.report_path));
  }
  EXPECT_EQ(traces[0], traces[1]);
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_FALSE(traces[0].empty());
}

TEST(CliEstimate, QuadraticRows) {
  auto config = config_for(Subcommand::EstimateOmega, {"scalar_quadratic"});
  config.num_radii = 4;
  const auto r = invoke(config);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "radius,value\n0,0\n2.5,1.25\n5,2.5\n7.5,3.75\n10,5\n");
}

TEST(CliList, NamesEveryFixture) {
  const auto r = invoke(config_for(Subcommand::ListProblems, {}));
  ASSERT_EQ(r.code, 0);
  for (const char* name : {"scalar_quadratic", "scalar_holder", "poly2d", "chandrasekhar",
                           "linear"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}

TEST(Serialization, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  test::Gen gen(51);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.log_uniform(1e-300, 1e300) * (i % 2 ? -1.0 : 1.0);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Serialization, CertificateRoundTripIsExact) {
  test::Gen gen(52);
  for (int trial = 0; trial < 300; ++trial) {
    const double radius = gen.log_uniform(0.1, 100.0);
    const OmegaMeasure w = trial % 2 == 0
                               ? OmegaMeasure::hoelder(gen.hoelder_params().measure())
                               : gen.tabulated(radius, 1.3);
    const auto c = certify(MajorantModel(gen.log_uniform(1e-4, 2.0), radius, w));
    const std::string text = certificate_to_json(c).dump(2);
    const auto back = certificate_from_json(json::parse(text));
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(certificate_to_json(back).dump(2), text);
  }
}

TEST(Serialization, MalformedCertificateIsRejected) {
  EXPECT_THROW(certificate_from_json(json::parse(R"({"schema": 1})")), Error);
  EXPECT_THROW(certificate_from_json(json::parse(R"({"schema": 2})")), Error);
  json j = certificate_to_json(
      certify(MajorantModel(0.5, 10.0, OmegaMeasure::hoelder(0.5, 1.0, 0.0))));
  j["status"] = "Maybe";
  EXPECT_THROW(certificate_from_json(j), Error);
}

TEST(Serialization, AssignmentsAndSpecDocuments) {
  FixtureSpec spec{"poly2d", {}, {}, {}};
  apply_assignments(spec, {"x0=1.5, 2.5", "R=0.25", "norm=two", "a=-1e-3"});
  EXPECT_EQ(spec.params["x0"], (std::vector<double>{1.5, 2.5}));
  EXPECT_EQ(spec.params["a"], (std::vector<double>{-1e-3}));
  EXPECT_EQ(spec.radius, 0.25);
  EXPECT_EQ(spec.norm, Norm::Two);
  EXPECT_THROW(apply_assignments(spec, {"x0"}), Error);
  EXPECT_THROW(apply_assignments(spec, {"R=1,2"}), Error);
  EXPECT_THROW(apply_assignments(spec, {"norm=seven"}), Error);

  const auto back = fixture_spec_from_json(fixture_spec_to_json(spec));
  EXPECT_EQ(back.name, spec.name);
  EXPECT_EQ(back.params, spec.params);
  EXPECT_EQ(back.radius, spec.radius);
  EXPECT_EQ(back.norm, spec.norm);

  const auto nested = fixture_spec_from_json(
      json::parse(R"({"fixture": "linear", "params": {"A": [[2, 1], [0, 4]]}})"));
  EXPECT_EQ(nested.params.at("A"), (std::vector<double>{2, 1, 0, 4}));
}
