#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsi/comparison.hpp"
#include "fsi/problems.hpp"
#include "fsi/solver.hpp"

namespace fsi {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

nlohmann::json omega_to_json(const OmegaMeasure& omega);
OmegaMeasure omega_from_json(const nlohmann::json& j);

/// Certificate document: schema, status, reason, nu, eta, R, nu_star,
/// nu_star_star ("AtBoundary" past R), gamma_star, lambda_star,
/// uniqueness_boundary, required_radius, scalar_sequence and the measure.
nlohmann::json certificate_to_json(const ConvergenceCertificate& c);
// Throws InvalidArgument on a malformed document.
ConvergenceCertificate certificate_from_json(const nlohmann::json& j);

// k,step_norm,residual_norm,v_step,bound_slack,error_bound; one row per
// iterate, step columns empty on the last row and scalar columns empty
// without a certificate.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

// radius,value
void write_omega_csv(std::ostream& os, const OmegaMeasure& omega);

nlohmann::json condition_report_to_json(const ConditionReport& r);
std::string condition_table(const ConditionReport& r);

/// Problem-spec document: {"schema": 1, "fixture": name, "params": {...},
/// "norm": "max" | "one" | "two", "R": number}.  Parameter values are
/// numbers or (nested) arrays, flattened row-major.
FixtureSpec fixture_spec_from_json(const nlohmann::json& j);
nlohmann::json fixture_spec_to_json(const FixtureSpec& spec);

// Applies "key=value" tokens; values are comma-separated numbers, with "R"
// and "norm" routed to the spec fields.
void apply_assignments(FixtureSpec& spec, const std::vector<std::string>& tokens);

}  // namespace fsi
