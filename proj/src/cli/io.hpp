#pragma once

#include <json.hpp>

#include <string>

#include "pta/applications.hpp"
#include "pta/probes.hpp"

namespace pta::cli {

using nlohmann::json;

/// Reads a JSON document from a file; ParseError on I/O or syntax failure.
json read_json_file(const std::string& path);
/// A flag value that is either a path to a JSON file or an inline JSON literal.
json json_from_arg(const std::string& arg);

/// Numbers may be JSON numbers or decimal strings ("0.1"), the latter parsed
/// once with correct rounding.
double number_from(const json& j, const std::string& what);
Vector vector_from(const json& j, const std::string& what);
NonnegMatrix matrix_from(const json& j, const std::string& what);

/// {"n": int, "A": [[num]], "b": [num], "s": num}
PowerAffineSystem system_from(const json& doc);
json system_to_json(const PowerAffineSystem& sys);

/// A bare JSON array or a solve report carrying "y_star".
Vector start_vector_from(const json& doc);

json to_json(const Vector& v);
json to_json(const SolvabilityCertificate& c);
json to_json(const Bracket& b);
json to_json(const SolveReport& r);
json to_json(const ProbeReport& p);
json to_json(const AppSolution& a);

json error_document(ErrorKind kind, const std::string& message);

}  // namespace pta::cli
