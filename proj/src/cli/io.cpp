#include "cli/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pta::cli {

namespace {

[[noreturn]] void parse_error(const std::string& message) {
  throw Error(ErrorKind::ParseError, message);
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

json json_from_arg(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_json_file(arg);
  try {
    return json::parse(arg);
  } catch (const json::exception& e) {
    parse_error("'" + arg + "' is neither a readable file nor valid JSON");
  }
}

double number_from(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (!text.empty()) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() + text.size() && errno == 0) return v;
    }
    parse_error(what + ": '" + text + "' is not a decimal number");
  }
  parse_error(what + " must be a number");
}

Vector vector_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) parse_error(what + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number_from(j[i], what + "[" + std::to_string(i) + "]");
  }
  return v;
}

NonnegMatrix matrix_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) parse_error(what + " must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array()) parse_error(what + " row " + std::to_string(i) + " is not an array");
    std::vector<double> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      row.push_back(number_from(j[i][k], what + "[" + std::to_string(i) + "][" +
                                             std::to_string(k) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return NonnegMatrix::validate(rows);
}

PowerAffineSystem system_from(const json& doc) {
  if (!doc.is_object()) parse_error("system file must be a JSON object");
  for (const char* key : {"n", "A", "b", "s"}) {
    if (!doc.contains(key)) parse_error(std::string("system file is missing \"") + key + "\"");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    parse_error("n must be a positive integer");
  }
  const auto n = doc["n"].get<std::size_t>();
  NonnegMatrix a = matrix_from(doc["A"], "A");
  Vector b = vector_from(doc["b"], "b");
  if (a.size() != n || static_cast<std::size_t>(b.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "A and b must have dimension n = " +
                                                  std::to_string(n));
  }
  return make_system(std::move(a), std::move(b), number_from(doc["s"], "s"));
}

json system_to_json(const PowerAffineSystem& sys) {
  json a = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < sys.size(); ++j) row.push_back(sys.a()(i, j));
    a.push_back(std::move(row));
  }
  return json{{"n", sys.size()}, {"A", std::move(a)}, {"b", to_json(sys.b())}, {"s", sys.s()}};
}

Vector start_vector_from(const json& doc) {
  if (doc.is_object()) {
    if (!doc.contains("y_star")) parse_error("start document has no \"y_star\" field");
    return vector_from(doc["y_star"], "y_star");
  }
  return vector_from(doc, "start");
}

json to_json(const Vector& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json to_json(const SolvabilityCertificate& c) {
  return json{{"r", c.r},
              {"s", c.s},
              {"r_pow_s", c.r_pow_s},
              {"criterion", c.criterion},
              {"verdict", to_string(c.verdict)},
              {"margin", c.margin},
              {"boundary_warning", c.boundary_warning}};
}

json to_json(const Bracket& b) {
  return json{{"c_lo", b.c_lo},
              {"c_hi", b.c_hi},
              {"p", to_json(b.p.values())},
              {"q", to_json(b.q.values())}};
}

json to_json(const SolveReport& r) {
  return json{{"status", "converged"},
              {"x_star", to_json(r.x_star.values())},
              {"y_star", to_json(r.y_star.values())},
              {"iterations", r.iterations},
              {"residual_y", r.residual_y},
              {"relative_residual_y", r.relative_residual_y},
              {"residual_x", r.residual_x},
              {"x_tolerance", r.x_tolerance},
              {"bracket", to_json(r.bracket)},
              {"certificate", to_json(r.certificate)}};
}

json to_json(const ProbeReport& p) {
  return json{{"probe_name", p.probe_name},
              {"trials", p.trials},
              {"worst_violation", p.worst_violation},
              {"tolerance", p.tolerance},
              {"passed", p.passed},
              {"inconclusive", p.inconclusive},
              {"witness", p.witness ? json(*p.witness) : json(nullptr)}};
}

json to_json(const AppSolution& a) {
  json secondary = nullptr;
  if (!a.secondary_name.empty()) {
    secondary = json{{"name", a.secondary_name}, {"values", to_json(a.secondary_output)}};
  }
  return json{{"status", "converged"},
              {"model", a.model},
              {"output", {{"name", a.output_name}, {"values", to_json(a.primary_output)}}},
              {"secondary", std::move(secondary)},
              {"model_residual", a.model_residual},
              {"x_star", to_json(a.report.x_star.values())},
              {"y_star", to_json(a.report.y_star.values())},
              {"iterations", a.report.iterations},
              {"certificate", to_json(a.report.certificate)},
              {"system", system_to_json(a.system)}};
}

json error_document(ErrorKind kind, const std::string& message) {
  return json{{"status", "error"},
              {"error", {{"kind", std::string(to_string(kind))}, {"message", message}}}};
}

}  // namespace pta::cli
