#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "cosym/dynamics.hpp"
#include "cosym/structures.hpp"

namespace cosym {

/// 17 significant digits.
std::string format_double(double v);

/// {"name", "chart": {"name", "coordinates", "guards"}, "parameters", "theta", "omega"}.
/// Form terms are {"index": [...], "coefficient": "<expr>"}. Throws Error for opaque
/// coefficients or charts with predicate guards.
nlohmann::json structure_to_json(const StructureSpec & s);
/// Throws Error (or ParseError) on malformed documents.
StructureSpec structure_from_json(const nlohmann::json & doc);

/// Header `t,<coords...>,H,dissipation_residual`; NaN residuals are written as `nan`.
void write_trajectory_csv(std::ostream & os, const Trajectory & traj);
nlohmann::json trajectory_to_json(const Trajectory & traj);

}  // namespace cosym
