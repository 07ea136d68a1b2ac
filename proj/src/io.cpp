#include "torus_holonomy/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace torus::io {

nlohmann::json model_to_json(const TorusModel& model) {
  return {{"m", model.dimension()},
          {"controlled", model.controlled()},
          {"lambda", model.lambda()},
          {"N", model.truncation()}};
}

nlohmann::json operator_to_json(const OperatorMatrix& op) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c)
      entries.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
  return {{"model", model_to_json(op.model)},
          {"layout", mode_iter(op.model)},
          {"bandwidth", op.bandwidth},
          {"rows", op.matrix.rows()},
          {"cols", op.matrix.cols()},
          {"entries", std::move(entries)}};
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
    throw std::invalid_argument("entry count does not match rows * cols");
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = entries[static_cast<std::size_t>(r * cols + c)];
      m(r, c) = {e.at(0).get<double>(), e.at(1).get<double>()};
    }
  return m;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t";
  const std::size_t m = trajectory.empty() ? 0 : trajectory.front().state.actions.size();
  for (std::size_t k = 1; k <= m; ++k) out += ",I_" + std::to_string(k);
  for (std::size_t k = 1; k <= m; ++k) out += ",phi_" + std::to_string(k);
  out += '\n';
  for (const auto& sample : trajectory) {
    out += format_double(sample.time);
    for (double v : sample.state.actions) out += "," + format_double(v);
    for (double v : sample.state.angles) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!file) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace torus::io
