#include "fsi/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "fsi/comparison.hpp"
#include "fsi/problems.hpp"
#include "fsi/serialization.hpp"

namespace fsi {

using nlohmann::json;

namespace {

constexpr double kProbeTol = 1e-8;

bool is_assignment(const std::string& token) {
  return token.find('=') != std::string::npos;
}

FixtureSpec load_spec(const RunConfig& config) {
  FixtureSpec spec;
  std::vector<std::string> assignments;
  if (config.problem_file) {
    std::ifstream in(*config.problem_file);
    if (!in) {
      throw Error(ErrorCode::InvalidArgument,
                  "cannot open problem file '" + *config.problem_file + "'");
    }
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, e.what());
    }
    spec = fixture_spec_from_json(j);
  }
  for (const std::string& token : config.problem_args) {
    if (is_assignment(token)) {
      assignments.push_back(token);
    } else if (spec.name.empty()) {
      spec.name = token;
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "unexpected argument '" + token + "'");
    }
  }
  apply_assignments(spec, assignments);
  if (config.norm) spec.norm = config.norm;
  return spec;
}

Fixture load_fixture(const RunConfig& config, FixtureSpec& spec) {
  spec = load_spec(config);
  if (spec.name.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no fixture named");
  }
  return build_fixture(spec);
}

std::vector<double> radius_grid(double radius, int count) {
  std::vector<double> radii(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    radii[static_cast<std::size_t>(i - 1)] =
        i == count ? radius : radius * i / count;
  }
  return radii;
}

MeasureSource resolve(MeasureSource source, const Fixture& f) {
  if (source != MeasureSource::Auto) return source;
  return f.analytic ? MeasureSource::Analytic : MeasureSource::Direct;
}

std::string_view to_string(MeasureSource s) {
  switch (s) {
    case MeasureSource::Auto: return "auto";
    case MeasureSource::Analytic: return "analytic";
    case MeasureSource::Direct: return "direct";
    case MeasureSource::Centered: return "centered";
  }
  return "auto";
}

MajorantModel obtain_model(const Fixture& f, const RunConfig& config,
                           MeasureSource source) {
  const Problem& p = f.problem;
  if (source == MeasureSource::Analytic) {
    if (!f.analytic) {
      throw Error(ErrorCode::InvalidArgument,
                  "fixture '" + f.name + "' has no analytic constants");
    }
    return MajorantModel(f.analytic->eta, p.radius,
                         OmegaMeasure::hoelder(f.analytic->measure()));
  }
  const auto radii = radius_grid(p.radius, config.num_radii);
  if (source == MeasureSource::Direct) {
    try {
      return estimated_model(p, EstimateMode::Direct, radii, config.samples,
                             config.seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NuNotContractive) throw;
    }
  }
  return estimated_model(p, EstimateMode::Centered, radii, config.samples,
                         config.seed);
}

void emit(const std::optional<std::string>& path, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  if (!path) {
    write(out);
    return;
  }
  std::ofstream file(*path);
  if (!file) {
    throw Error(ErrorCode::InvalidArgument, "cannot write '" + *path + "'");
  }
  write(file);
}

json vector_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

int run_certify(const RunConfig& config, std::ostream& out) {
  FixtureSpec spec;
  const Fixture f = load_fixture(config, spec);
  const MajorantModel model =
      obtain_model(f, config, resolve(config.measure, f));
  const ConvergenceCertificate c = certify(model, config.tolerances.root_tol);
  emit(config.certificate_path, out, [&](std::ostream& os) {
    os << certificate_to_json(c).dump(2) << '\n';
  });
  if (config.certificate_path) {
    out << to_string(c.status);
    if (c.certified()) out << " nu_star=" << format_double(*c.nu_star);
    out << '\n';
  }
  return c.certified() ? 0 : 1;
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  FixtureSpec spec;
  const Fixture f = load_fixture(config, spec);
  const Problem& p = f.problem;
  const MeasureSource source = resolve(config.measure, f);

  std::optional<ConvergenceCertificate> cert;
  std::string cert_error;
  try {
    cert = certify(obtain_model(f, config, source), config.tolerances.root_tol);
  } catch (const Error& e) {
    cert_error = e.what();
  }
  const ConvergenceCertificate* attached =
      cert && cert->certified() ? &*cert : nullptr;

  const StopCriteria stop{config.tolerances.tol_step,
                          config.tolerances.tol_residual, config.max_iter};
  const SolveResult result = fsi_solve(p, stop, attached);
  const IterationTrace& trace = result.trace;

  json report;
  report["schema"] = kSchemaVersion;
  report["problem"] = fixture_spec_to_json(spec);
  report["measure_source"] = to_string(source);
  report["certificate"] = cert ? certificate_to_json(*cert) : json(nullptr);
  if (!cert_error.empty()) report["certificate_error"] = cert_error;
  report["stop_reason"] = to_string(trace.stop_reason);
  report["converged"] = trace.converged();
  report["iterations"] = trace.step_norms.size();
  report["solution"] = vector_json(result.solution);
  report["final_residual"] = trace.residual_norms.back();
  report["final_step"] =
      trace.step_norms.empty() ? json(nullptr) : json(trace.step_norms.back());

  report["majorization"] = nullptr;
  report["uniqueness_probe"] = nullptr;
  if (attached) {
    const MajorizationReport m =
        verify_majorization(trace, attached->model, config.tolerances.slack_tol,
                            config.tolerances.root_tol);
    report["majorization"] = {{"passed", m.passed},
                              {"worst_slack", m.worst_slack},
                              {"tail_checked", m.tail_checked},
                              {"steps_checked", m.checks.size()}};
    if (config.num_starts > 0) {
      const ProbeReport probe = uniqueness_probe(
          p, *attached, config.num_starts, config.seed, kProbeTol, stop);
      std::size_t converged = 0;
      for (const ProbeStart& s : probe.starts) converged += s.limit ? 1 : 0;
      report["uniqueness_probe"] = {
          {"starts", probe.starts.size()},
          {"converged", converged},
          {"max_pairwise_distance", probe.max_pairwise_distance},
          {"tol", kProbeTol},
          {"passed", probe.passed}};
    }
  }

  emit(config.trace_path, out,
       [&](std::ostream& os) { write_trace_csv(os, trace); });
  const auto write_report = [&](std::ostream& os) {
    os << report.dump(2) << '\n';
  };
  if (config.report_path) {
    emit(config.report_path, out, write_report);
  } else if (config.trace_path) {
    write_report(out);
  } else {
    write_report(err);
  }
  return 0;
}

int run_compare(const RunConfig& config, std::ostream& out) {
  FixtureSpec spec = load_spec(config);
  std::optional<double> delta;
  if (auto it = spec.params.find("delta"); it != spec.params.end()) {
    if (it->second.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "delta takes a single number");
    }
    delta = it->second.front();
    spec.params.erase(it);
  }

  HoelderParams params;
  double radius = 0.0;
  if (spec.name.empty()) {
    params.alpha = 1.0;
    params.nu = 0.0;
    bool have_l0 = false;
    bool have_eta = false;
    for (const auto& [key, values] : spec.params) {
      if (values.size() != 1) {
        throw Error(ErrorCode::InvalidArgument, key + " takes a single number");
      }
      const double v = values.front();
      if (key == "l0") {
        params.l0 = v;
        have_l0 = true;
      } else if (key == "alpha") {
        params.alpha = v;
      } else if (key == "nu") {
        params.nu = v;
      } else if (key == "eta") {
        params.eta = v;
        have_eta = true;
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + key + "'");
      }
    }
    if (!have_l0 || !have_eta || !spec.radius) {
      throw Error(ErrorCode::InvalidArgument, "compare needs l0, eta and R");
    }
    radius = *spec.radius;
  } else {
    const Fixture f = build_fixture(spec);
    if (!f.analytic) {
      throw Error(ErrorCode::InvalidArgument,
                  "fixture '" + f.name + "' has no analytic constants");
    }
    params = {f.analytic->l0, f.analytic->alpha, f.analytic->nu, f.analytic->eta};
    radius = f.problem.radius;
  }

  const ConditionReport report =
      compare_report(params, radius, config.tolerances.root_tol, delta);
  out << condition_table(report);
  if (config.report_path) {
    emit(config.report_path, out, [&](std::ostream& os) {
      os << condition_report_to_json(report).dump(2) << '\n';
    });
  }
  return 0;
}

int run_estimate(const RunConfig& config, std::ostream& out) {
  FixtureSpec spec;
  const Fixture f = load_fixture(config, spec);
  if (config.measure == MeasureSource::Analytic) {
    throw Error(ErrorCode::InvalidArgument,
                "estimate-omega takes --measure direct or centered");
  }
  const EstimateMode mode = config.measure == MeasureSource::Centered
                                ? EstimateMode::Centered
                                : EstimateMode::Direct;
  const auto radii = radius_grid(f.problem.radius, config.num_radii);
  const OmegaMeasure omega =
      estimate_omega(f.problem, mode, radii, config.samples, config.seed);
  emit(config.report_path, out,
       [&](std::ostream& os) { write_omega_csv(os, omega); });
  return 0;
}

int run_list(std::ostream& out) {
  for (const FixtureInfo& info : fixture_catalog()) {
    out << info.name << "  " << info.summary << '\n';
    out << "  default R=" << format_double(info.default_radius)
        << " norm=" << to_string(info.default_norm) << '\n';
    for (const ParamInfo& param : info.params) {
      out << "  " << std::left << std::setw(8) << param.name << std::setw(20)
          << param.default_value << param.description << '\n';
    }
  }
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::EvaluationFailed:
    case ErrorCode::MaxIterExceeded:
    case ErrorCode::NotCertified:
    case ErrorCode::NuNotContractive:
    case ErrorCode::ConditionFails:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

void validate(const RunConfig& config) {
  const Tolerances& t = config.tolerances;
  if (!(t.tol_step > 0.0 && t.tol_residual > 0.0 && t.root_tol > 0.0 &&
        t.slack_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (config.max_iter <= 0 || config.num_starts < 0 || config.num_radii < 1 ||
      config.samples < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "max_iter > 0, num_starts >= 0, num_radii >= 1, samples >= 0");
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    switch (config.subcommand) {
      case Subcommand::Certify: return run_certify(config, out);
      case Subcommand::Solve: return run_solve(config, out, err);
      case Subcommand::Compare: return run_compare(config, out);
      case Subcommand::EstimateOmega: return run_estimate(config, out);
      case Subcommand::ListProblems: return run_list(out);
    }
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace fsi
