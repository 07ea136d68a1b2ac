#include "torus_holonomy/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace torus {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

const json& require(const json& object, const std::string& path, const char* key) {
  if (!object.is_object()) throw ConfigError(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw ConfigError(child(path, key), "missing required field");
  return *it;
}

const json* optional(const json& object, const char* key) {
  auto it = object.find(key);
  return it == object.end() || it->is_null() ? nullptr : &*it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> as_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], child(path, i)));
  return out;
}

std::vector<int> as_ints(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], child(path, i)));
  return out;
}

Eigen::VectorXd as_vector(const json& j, const std::string& path) {
  const auto v = as_doubles(j, path);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return as_double(j, path);
  if (j.is_array() && j.size() == 2)
    return {as_double(j[0], child(path, 0)), as_double(j[1], child(path, 1))};
  throw ConfigError(path, "expected a number or [re, im]");
}

void check_length(std::size_t got, std::size_t want, const std::string& path) {
  if (got != want)
    throw ConfigError(path, "expected length " + std::to_string(want) + ", got " +
                                std::to_string(got));
}

TorusModel parse_model(const json& j, const std::string& path) {
  const int m = as_int(require(j, path, "m"), child(path, "m"));
  if (m < 1) throw ConfigError(child(path, "m"), "torus dimension must be positive");
  const int n = as_int(require(j, path, "N"), child(path, "N"));
  if (n < 1) throw ConfigError(child(path, "N"), "truncation must be at least 1");
  std::vector<int> controlled;
  if (const json* c = optional(j, "controlled")) controlled = as_ints(*c, child(path, "controlled"));
  for (std::size_t i = 0; i < controlled.size(); ++i)
    if (controlled[i] < 0 || controlled[i] >= m)
      throw ConfigError(child(child(path, "controlled"), i), "axis out of range [0, m)");
  auto sorted = controlled;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError(child(path, "controlled"), "axes must be distinct");
  std::vector<double> lambda(m, 0.0);
  if (const json* l = optional(j, "lambda")) {
    lambda = as_doubles(*l, child(path, "lambda"));
    check_length(lambda.size(), static_cast<std::size_t>(m), child(path, "lambda"));
  }
  return TorusModel(m, controlled, lambda, n);
}

DynamicHamiltonian parse_hamiltonian(const json* j, int m, const std::string& path) {
  DynamicHamiltonian h(m);
  if (j == nullptr) return h;
  const json& terms = j->is_object() ? require(*j, path, "terms") : *j;
  const std::string terms_path = j->is_object() ? child(path, "terms") : path;
  if (!terms.is_array()) throw ConfigError(terms_path, "expected an array of terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = child(terms_path, i);
    auto exponent = as_ints(require(terms[i], p, "exponent"), child(p, "exponent"));
    check_length(exponent.size(), static_cast<std::size_t>(m), child(p, "exponent"));
    if (std::any_of(exponent.begin(), exponent.end(), [](int e) { return e < 0; }))
      throw ConfigError(child(p, "exponent"), "exponents must be non-negative");
    h.add_term(std::move(exponent), as_double(require(terms[i], p, "coefficient"),
                                              child(p, "coefficient")));
  }
  return h;
}

ComplexPolynomial parse_polynomial(const json& j, int d, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of polynomial terms");
  ComplexPolynomial poly(d);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = child(path, i);
    auto exponent = as_ints(require(j[i], p, "exponent"), child(p, "exponent"));
    check_length(exponent.size(), static_cast<std::size_t>(d), child(p, "exponent"));
    if (std::any_of(exponent.begin(), exponent.end(), [](int e) { return e < 0; }))
      throw ConfigError(child(p, "exponent"), "exponents must be non-negative");
    poly.add_term(std::move(exponent), as_complex(require(j[i], p, "coefficient"),
                                                  child(p, "coefficient")));
  }
  return poly;
}

bool conjugate_pair(const ComplexPolynomial& p, const ComplexPolynomial& q) {
  std::map<std::vector<int>, Complex> diff;
  for (const auto& [e, v] : p.terms()) diff[e] += v;
  for (const auto& [e, v] : q.terms()) diff[e] -= std::conj(v);
  for (const auto& [e, v] : diff) {
    const double scale = std::max({1.0, std::abs(p.terms().count(e) ? p.terms().at(e) : 0.0)});
    if (std::abs(v) > 1e-12 * scale) return false;
  }
  return true;
}

ControlConnection parse_connection(const json* j, int m, int default_d, const std::string& path) {
  if (j == nullptr) return ControlConnection(m, default_d);
  int d = default_d;
  if (const json* p = optional(*j, "parameters")) {
    d = as_int(*p, child(path, "parameters"));
    if (d < 1) throw ConfigError(child(path, "parameters"), "must be positive");
  }
  ControlConnection connection(m, d);
  const json* components = optional(*j, "components");
  if (components == nullptr) return connection;
  const std::string cpath = child(path, "components");
  if (!components->is_array()) throw ConfigError(cpath, "expected an array");
  for (std::size_t i = 0; i < components->size(); ++i) {
    const json& comp = (*components)[i];
    const std::string p = child(cpath, i);
    const int axis = as_int(require(comp, p, "axis"), child(p, "axis"));
    if (axis < 0 || axis >= m) throw ConfigError(child(p, "axis"), "axis out of range [0, m)");
    const int parameter = as_int(require(comp, p, "parameter"), child(p, "parameter"));
    if (parameter < 0 || parameter >= d)
      throw ConfigError(child(p, "parameter"), "parameter index out of range [0, d)");
    const json& modes = require(comp, p, "modes");
    const std::string mpath = child(p, "modes");
    if (!modes.is_array()) throw ConfigError(mpath, "expected an array");

    std::map<Shift, std::pair<ComplexPolynomial, std::string>> given;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const std::string q = child(mpath, k);
      auto shift = as_ints(require(modes[k], q, "shift"), child(q, "shift"));
      check_length(shift.size(), static_cast<std::size_t>(m), child(q, "shift"));
      auto poly = parse_polynomial(require(modes[k], q, "polynomial"), d, child(q, "polynomial"));
      if (given.count(shift)) throw ConfigError(child(q, "shift"), "duplicate Fourier shift");
      given.emplace(std::move(shift), std::pair{std::move(poly), q});
    }
    for (const auto& [c, entry] : given) {
      const auto& [poly, where] = entry;
      Shift minus(c.size());
      std::transform(c.begin(), c.end(), minus.begin(), [](int v) { return -v; });
      if (minus == c) {
        for (const auto& [e, v] : poly.terms())
          if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
            throw ConfigError(child(where, "polynomial"),
                              "angle-independent coefficient must be real");
        ComplexPolynomial real_part(d);
        for (const auto& [e, v] : poly.terms()) real_part.add_term(e, v.real());
        connection.add_mode(axis, parameter, c, real_part);
        continue;
      }
      auto partner = given.find(minus);
      if (partner == given.end()) {
        connection.add_real_mode(axis, parameter, c, poly);
      } else if (c < minus) {
        if (!conjugate_pair(poly, partner->second.first))
          throw ConfigError(where, "modes c and -c are not complex conjugates");
        connection.add_real_mode(axis, parameter, c, poly);
      }
    }
  }
  return connection;
}

ParameterCurve parse_curve(const json& j, const std::string& path) {
  const json& type_json = require(j, path, "type");
  if (!type_json.is_string()) throw ConfigError(child(path, "type"), "expected a string");
  const std::string type = type_json.get<std::string>();
  const double duration = as_double(require(j, path, "duration"), child(path, "duration"));
  if (!(duration > 0.0)) throw ConfigError(child(path, "duration"), "must be positive");

  auto plane_axes = [&](int d) {
    std::vector<int> axes{0, 1};
    if (const json* a = optional(j, "axes")) axes = as_ints(*a, child(path, "axes"));
    check_length(axes.size(), 2, child(path, "axes"));
    if (axes[0] == axes[1] || std::min(axes[0], axes[1]) < 0 || std::max(axes[0], axes[1]) >= d)
      throw ConfigError(child(path, "axes"), "need two distinct axes within the parameter space");
    return axes;
  };
  auto turns = [&] {
    const json* t = optional(j, "turns");
    return t ? as_int(*t, child(path, "turns")) : 1;
  };

  std::optional<ParameterCurve> curve;
  if (type == "circle" || type == "ellipse") {
    const Eigen::VectorXd center = as_vector(require(j, path, "center"), child(path, "center"));
    if (center.size() < 2) throw ConfigError(child(path, "center"), "need dimension >= 2");
    const auto axes = plane_axes(static_cast<int>(center.size()));
    if (type == "circle") {
      const double r = as_double(require(j, path, "radius"), child(path, "radius"));
      curve = ParameterCurve::circle(center, r, axes[0], axes[1], duration, turns());
    } else {
      const auto radii = as_doubles(require(j, path, "radii"), child(path, "radii"));
      check_length(radii.size(), 2, child(path, "radii"));
      curve = ParameterCurve::ellipse(center, radii[0], radii[1], axes[0], axes[1], duration,
                                      turns());
    }
  } else if (type == "waypoints") {
    const json& points = require(j, path, "points");
    const std::string ppath = child(path, "points");
    if (!points.is_array() || points.size() < 2)
      throw ConfigError(ppath, "need an array of at least two points");
    std::vector<Eigen::VectorXd> pts;
    for (std::size_t i = 0; i < points.size(); ++i) {
      pts.push_back(as_vector(points[i], child(ppath, i)));
      check_length(static_cast<std::size_t>(pts.back().size()),
                   static_cast<std::size_t>(pts.front().size()), child(ppath, i));
    }
    if (pts.front().size() < 1) throw ConfigError(ppath, "points must be non-empty");
    curve = ParameterCurve::waypoints(std::move(pts), duration);
  } else if (type == "linear") {
    const Eigen::VectorXd start = as_vector(require(j, path, "start"), child(path, "start"));
    const Eigen::VectorXd velocity =
        as_vector(require(j, path, "velocity"), child(path, "velocity"));
    check_length(static_cast<std::size_t>(velocity.size()),
                 static_cast<std::size_t>(start.size()), child(path, "velocity"));
    if (start.size() < 1) throw ConfigError(child(path, "start"), "must be non-empty");
    curve = ParameterCurve::linear(start, velocity, duration);
  } else if (type == "constant") {
    const Eigen::VectorXd point = as_vector(require(j, path, "point"), child(path, "point"));
    if (point.size() < 1) throw ConfigError(child(path, "point"), "must be non-empty");
    curve = ParameterCurve::constant(point, duration);
  } else {
    throw ConfigError(child(path, "type"),
                      "unknown curve type '" + type +
                          "' (expected circle, ellipse, waypoints, linear or constant)");
  }
  if (const json* closed = optional(j, "closed")) {
    if (!closed->is_boolean()) throw ConfigError(child(path, "closed"), "expected a boolean");
    if (closed->get<bool>() != curve->closed())
      throw ConfigError(child(path, "closed"), "flag disagrees with the curve endpoints");
  }
  return *curve;
}

RunSettings parse_run(const json* j, const TorusModel& model, const std::string& path) {
  RunSettings run;
  run.dynamic_index.assign(model.dynamic().size(), 0);
  if (j == nullptr) return run;
  if (!j->is_object()) throw ConfigError(path, "expected an object");
  if (const json* s = optional(*j, "steps")) {
    run.steps = as_int(*s, child(path, "steps"));
    if (run.steps < 1) throw ConfigError(child(path, "steps"), "must be at least 1");
  }
  if (const json* s = optional(*j, "initial_state")) {
    const std::string p = child(path, "initial_state");
    const auto m = static_cast<std::size_t>(model.dimension());
    ClassicalState state{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    if (const json* i = optional(*s, "I")) {
      state.actions = as_doubles(*i, child(p, "I"));
      check_length(state.actions.size(), m, child(p, "I"));
    }
    if (const json* a = optional(*s, "phi")) {
      state.angles = as_doubles(*a, child(p, "phi"));
      check_length(state.angles.size(), m, child(p, "phi"));
    }
    run.initial_state = std::move(state);
  }
  if (const json* d = optional(*j, "dynamic_index")) {
    run.dynamic_index = as_ints(*d, child(path, "dynamic_index"));
    check_length(run.dynamic_index.size(), model.dynamic().size(), child(path, "dynamic_index"));
  }
  if (const json* s = optional(*j, "seed")) {
    if (!s->is_number_unsigned()) throw ConfigError(child(path, "seed"), "expected a non-negative integer");
    run.seed = s->get<std::uint64_t>();
  }
  if (const json* o = optional(*j, "outputs")) {
    if (!o->is_array()) throw ConfigError(child(path, "outputs"), "expected an array of strings");
    for (std::size_t i = 0; i < o->size(); ++i) {
      if (!(*o)[i].is_string()) throw ConfigError(child(child(path, "outputs"), i), "expected a string");
      run.outputs.push_back((*o)[i].get<std::string>());
    }
  }
  if (const json* f = optional(*j, "fault_injection")) {
    if (!f->is_string()) throw ConfigError(child(path, "fault_injection"), "expected a string");
    run.fault_injection = f->get<std::string>();
    if (run.fault_injection != "lambda" && !run.fault_injection.empty())
      throw ConfigError(child(path, "fault_injection"), "only \"lambda\" is supported");
  }
  return run;
}

}  // namespace

const ParameterCurve& ExperimentConfig::require_curve() const {
  if (!curve) throw ConfigError("/curve", "this run needs a parameter curve");
  return *curve;
}

ExperimentConfig parse_config(const json& document) {
  if (!document.is_object()) throw ConfigError("", "config must be a JSON object");
  const json& version = require(document, "", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ConfigError("/schema_version", "unsupported schema version (expected " +
                                             std::to_string(kSchemaVersion) + ")");

  TorusModel model = parse_model(require(document, "", "model"), "/model");
  std::optional<ParameterCurve> curve;
  if (const json* c = optional(document, "curve")) curve = parse_curve(*c, "/curve");
  const int default_d = curve ? curve->dimension() : 1;

  DynamicHamiltonian hamiltonian =
      parse_hamiltonian(optional(document, "hamiltonian"), model.dimension(), "/hamiltonian");
  ControlConnection connection = parse_connection(optional(document, "connection"),
                                                  model.dimension(), default_d, "/connection");
  if (curve && curve->dimension() != connection.parameter_dimension())
    throw ConfigError("/connection/parameters",
                      "parameter dimension differs from the curve dimension " +
                          std::to_string(curve->dimension()));
  RunSettings run = parse_run(optional(document, "run"), model, "/run");
  return ExperimentConfig{std::move(model), std::move(hamiltonian), std::move(connection),
                          std::move(curve), std::move(run), document};
}

ExperimentConfig parse_config_text(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column),
                      "JSON syntax error");
  }
  return parse_config(document);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace torus
