#include "fsi/serialization.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <system_error>

namespace fsi {

using nlohmann::json;

namespace {

json number_or_null(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json eta_max_json(double eta_max) {
  if (is_unbounded(eta_max)) return "Unbounded";
  return eta_max;
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key) {
  auto v = optional_number(j, key);
  if (!v) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("missing numeric field '") + key + "'");
  }
  return *v;
}

void flatten(const json& j, std::vector<double>& out, const std::string& key) {
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) flatten(e, out, key);
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "parameter '" + key + "' must be numbers");
  }
}

double parse_number(std::string_view text, const std::string& key) {
  const auto first = text.find_first_not_of(' ');
  const auto last = text.find_last_not_of(' ');
  if (first == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "empty value for '" + key + "'");
  }
  text = text.substr(first, last - first + 1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot parse '" + std::string(text) + "' for '" + key + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

json omega_to_json(const OmegaMeasure& omega) {
  if (omega.is_hoelder()) {
    const auto& h = omega.hoelder_params();
    return {{"kind", "hoelder"}, {"l0", h.l0}, {"alpha", h.alpha}, {"nu", h.nu}};
  }
  json knots = json::array();
  for (const Knot& k : omega.knots()) knots.push_back({k.radius, k.value});
  return {{"kind", "tabulated"}, {"knots", knots}};
}

OmegaMeasure omega_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "hoelder") {
    return OmegaMeasure::hoelder(required_number(j, "l0"),
                                 required_number(j, "alpha"),
                                 required_number(j, "nu"));
  }
  if (kind == "tabulated") {
    std::vector<Knot> knots;
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2) {
        throw Error(ErrorCode::InvalidArgument, "knots are [radius, value] pairs");
      }
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return OmegaMeasure::tabulated(std::move(knots));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure kind '" + kind + "'");
}

json certificate_to_json(const ConvergenceCertificate& c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["status"] = to_string(c.status);
  j["reason"] = c.reason == NotCertifiedReason::None
                    ? json(nullptr)
                    : json(std::string(to_string(c.reason)));
  j["nu"] = c.nu;
  j["eta"] = c.eta;
  j["R"] = c.radius;
  j["nu_star"] = number_or_null(c.nu_star);
  if (c.certified() && !c.nu_star_star) {
    j["nu_star_star"] = "AtBoundary";
  } else {
    j["nu_star_star"] = number_or_null(c.nu_star_star);
  }
  j["gamma_star"] = number_or_null(c.gamma_star);
  j["lambda_star"] = number_or_null(c.lambda_star);
  j["uniqueness_boundary"] =
      c.boundary ? json(std::string(to_string(*c.boundary))) : json(nullptr);
  j["required_radius"] = number_or_null(c.required_radius);
  j["scalar_sequence"] = c.scalar_sequence;
  j["omega"] = omega_to_json(c.model.omega());
  return j;
}

ConvergenceCertificate certificate_from_json(const json& j) {
  try {
    if (j.value("schema", 0) != kSchemaVersion) {
      throw Error(ErrorCode::InvalidArgument, "unsupported certificate schema");
    }
    const double eta = required_number(j, "eta");
    const double radius = required_number(j, "R");
    ConvergenceCertificate c{
        .nu = required_number(j, "nu"),
        .eta = eta,
        .radius = radius,
        .model = MajorantModel(eta, radius, omega_from_json(j.at("omega"))),
    };
    const std::string status = j.at("status").get<std::string>();
    if (status == "Certified") {
      c.status = CertificateStatus::Certified;
    } else if (status != "NotCertified") {
      throw Error(ErrorCode::InvalidArgument, "unknown status '" + status + "'");
    }
    if (j.contains("reason") && !j.at("reason").is_null()) {
      const std::string reason = j.at("reason").get<std::string>();
      for (auto r : {NotCertifiedReason::NuTooLarge,
                     NotCertifiedReason::ConstraintAFails,
                     NotCertifiedReason::RadiusTooSmall}) {
        if (reason == to_string(r)) c.reason = r;
      }
      if (c.reason == NotCertifiedReason::None) {
        throw Error(ErrorCode::InvalidArgument, "unknown reason '" + reason + "'");
      }
    }
    c.nu_star = optional_number(j, "nu_star");
    if (!(j.contains("nu_star_star") && j.at("nu_star_star").is_string())) {
      c.nu_star_star = optional_number(j, "nu_star_star");
    }
    c.gamma_star = optional_number(j, "gamma_star");
    c.lambda_star = optional_number(j, "lambda_star");
    if (j.contains("uniqueness_boundary") && !j.at("uniqueness_boundary").is_null()) {
      c.boundary = j.at("uniqueness_boundary").get<std::string>() == "Open"
                       ? Boundary::Open
                       : Boundary::Closed;
    }
    c.required_radius = optional_number(j, "required_radius");
    c.scalar_sequence = j.at("scalar_sequence").get<std::vector<double>>();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "k,step_norm,residual_norm,v_step,bound_slack,error_bound\n";
  const std::size_t steps = trace.step_norms.size();
  const bool scalar = trace.has_certificate();
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    os << k << ',';
    if (k < steps) os << format_double(trace.step_norms[k]);
    os << ',' << format_double(trace.residual_norms[k]) << ',';
    if (scalar && k < steps) os << format_double(trace.scalar_steps[k]);
    os << ',';
    if (scalar && k < steps) os << format_double(trace.bound_slacks[k]);
    os << ',';
    if (scalar) os << format_double(trace.error_bounds[k]);
    os << '\n';
  }
}

void write_omega_csv(std::ostream& os, const OmegaMeasure& omega) {
  os << "radius,value\n";
  for (const Knot& k : omega.knots()) {
    os << format_double(k.radius) << ',' << format_double(k.value) << '\n';
  }
}

json condition_report_to_json(const ConditionReport& r) {
  const auto& c = r.certificate;
  json radii;
  radii["nu_star"] = number_or_null(c.nu_star);
  radii["nu_star_star"] = c.certified() && !c.nu_star_star
                              ? json("AtBoundary")
                              : number_or_null(c.nu_star_star);
  radii["lambda_star"] = number_or_null(c.lambda_star);
  radii["r_star"] = r.ahues_roots ? json(r.ahues_roots->min_root) : json(nullptr);
  radii["r_star_star"] = r.ahues_roots
                             ? (r.ahues_roots->max_root
                                    ? json(*r.ahues_roots->max_root)
                                    : json("AtBoundary"))
                             : json(nullptr);

  json j;
  j["schema"] = kSchemaVersion;
  j["params"] = {{"l0", r.params.l0},     {"alpha", r.params.alpha},
                 {"nu", r.params.nu},     {"eta", r.params.eta},
                 {"delta", r.delta},      {"R", r.radius}};
  j["new_condition"] = {{"holds", r.new_condition.holds},
                        {"eta_max", eta_max_json(r.new_condition.eta_max)}};
  j["ahues_condition"] = {{"holds", r.ahues.holds},
                          {"eta_max", eta_max_json(r.ahues.eta_max)}};
  j["kantorovich_condition"] =
      r.kantorovich ? json(*r.kantorovich) : json("NotApplicable");
  j["certificate_status"] = to_string(c.status);
  j["uniqueness_boundary"] =
      c.boundary ? json(std::string(to_string(*c.boundary))) : json(nullptr);
  j["radii"] = radii;
  j["eta_max_ratio"] = number_or_null(r.eta_max_ratio);
  j["roots_nested"] = r.roots_nested ? json(*r.roots_nested) : json(nullptr);
  j["ahues_ball_inside"] =
      r.ahues_ball_inside ? json(*r.ahues_ball_inside) : json(nullptr);
  j["ordering"] = {{"reference", r.reference_ordering},
                   {"observed", r.observed_ordering.empty()
                                    ? json(nullptr)
                                    : json(r.observed_ordering)}};
  return j;
}

std::string condition_table(const ConditionReport& r) {
  auto yes_no = [](bool b) { return b ? "true" : "false"; };
  auto eta_text = [](double e) {
    return is_unbounded(e) ? std::string("unbounded") : format_double(e);
  };
  auto opt_text = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("-");
  };

  std::ostringstream os;
  os << std::left;
  os << std::setw(14) << "condition" << std::setw(8) << "holds" << "eta_max\n";
  os << std::setw(14) << "new" << std::setw(8) << yes_no(r.new_condition.holds)
     << eta_text(r.new_condition.eta_max) << '\n';
  os << std::setw(14) << "ahues" << std::setw(8) << yes_no(r.ahues.holds)
     << eta_text(r.ahues.eta_max) << '\n';
  os << std::setw(14) << "kantorovich" << std::setw(8)
     << (r.kantorovich ? yes_no(*r.kantorovich) : "n/a")
     << (r.kantorovich ? format_double(0.5 / r.params.l0) : std::string("-"))
     << '\n';
  os << '\n';

  const auto& c = r.certificate;
  std::optional<double> r_star;
  std::optional<double> r_star_star;
  if (r.ahues_roots) {
    r_star = r.ahues_roots->min_root;
    r_star_star = r.ahues_roots->max_root;
  }
  os << std::setw(14) << "radius" << "value\n";
  os << std::setw(14) << "nu_star" << opt_text(c.nu_star) << '\n';
  os << std::setw(14) << "nu_star_star"
     << (c.certified() && !c.nu_star_star ? std::string("beyond R")
                                          : opt_text(c.nu_star_star))
     << '\n';
  os << std::setw(14) << "lambda_star" << opt_text(c.lambda_star);
  if (c.boundary) os << " (" << to_string(*c.boundary) << ')';
  os << '\n';
  os << std::setw(14) << "r_star" << opt_text(r_star) << '\n';
  os << std::setw(14) << "r_star_star"
     << (r.ahues_roots && !r_star_star ? std::string("beyond R")
                                       : opt_text(r_star_star))
     << '\n';
  os << '\n';
  os << std::setw(14) << "eta_max_ratio" << format_double(r.eta_max_ratio) << '\n';
  os << std::setw(14) << "ordering"
     << (r.observed_ordering.empty() ? std::string("-") : r.observed_ordering)
     << "  (reference: " << r.reference_ordering << ")\n";
  return os.str();
}

FixtureSpec fixture_spec_from_json(const json& j) {
  try {
    if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
      throw Error(ErrorCode::InvalidArgument, "unsupported problem schema");
    }
    FixtureSpec spec;
    spec.name = j.at("fixture").get<std::string>();
    if (j.contains("params")) {
      for (const auto& [key, value] : j.at("params").items()) {
        std::vector<double> values;
        flatten(value, values, key);
        spec.params[key] = std::move(values);
      }
    }
    if (j.contains("norm")) {
      const std::string name = j.at("norm").get<std::string>();
      spec.norm = parse_norm(name);
      if (!spec.norm) {
        throw Error(ErrorCode::InvalidArgument, "unknown norm '" + name + "'");
      }
    }
    spec.radius = optional_number(j, "R");
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }
}

json fixture_spec_to_json(const FixtureSpec& spec) {
  json params = json::object();
  for (const auto& [key, values] : spec.params) {
    params[key] = values.size() == 1 ? json(values.front()) : json(values);
  }
  json j{{"schema", kSchemaVersion}, {"fixture", spec.name}, {"params", params}};
  if (spec.norm) j["norm"] = std::string(to_string(*spec.norm));
  if (spec.radius) j["R"] = *spec.radius;
  return j;
}

void apply_assignments(FixtureSpec& spec, const std::vector<std::string>& tokens) {
  for (const std::string& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string_view value = std::string_view(token).substr(eq + 1);
    if (key == "norm") {
      spec.norm = parse_norm(value);
      if (!spec.norm) {
        throw Error(ErrorCode::InvalidArgument,
                    "unknown norm '" + std::string(value) + "'");
      }
      continue;
    }
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto end = value.find_first_of(",;", start);
      const auto piece = value.substr(
          start, end == std::string_view::npos ? std::string_view::npos : end - start);
      values.push_back(parse_number(piece, key));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    if (key == "R") {
      if (values.size() != 1) {
        throw Error(ErrorCode::InvalidArgument, "R takes a single number");
      }
      spec.radius = values.front();
    } else {
      spec.params[key] = std::move(values);
    }
  }
}

}  // namespace fsi
