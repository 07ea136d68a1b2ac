#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "torus_holonomy/classical_dynamics.hpp"
#include "torus_holonomy/core_types.hpp"
#include "torus_holonomy/quantization.hpp"

namespace torus::io {

nlohmann::json model_to_json(const TorusModel& model);

/// {"model": ..., "layout": [[n...]...], "bandwidth": C, "rows": R, "cols": C,
///  "entries": [[re, im], ...]} with entries row-major in mode_iter layout.
nlohmann::json operator_to_json(const OperatorMatrix& op);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

/// Header t,I_1..I_m,phi_1..phi_m; every value with 17 significant digits.
std::string trajectory_csv(const Trajectory& trajectory);

/// %.17g formatting of a double.
std::string format_double(double value);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace torus::io
