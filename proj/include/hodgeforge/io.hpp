#pragma once

#include "hodgeforge/strata.hpp"
#include "hodgeforge/toric.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hodgeforge {

using Json = nlohmann::ordered_json;

/// Parses a file; syntax errors become SchemaError with the line number.
Json load_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& source = "<input>");

/// "n" for integers, "num/den" otherwise.
Json rational_json(const Rational& q);
/// Accepts "a", "a/b" or a JSON integer.  Throws SchemaError naming `field`.
Rational rational_from_json(const Json& j, const std::string& field);

Json matrix_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& field);

Json strata_json(const StrataComplex& s);
/// Validated through make_strata.
StrataComplex strata_from_json(const Json& j);

/// {"vertices": [[x, y, z], ...]}
std::vector<IVec> polytope_from_json(const Json& j);
/// {"terms": [{"exponent": [a, b, c], "coefficient": "p/q"}, ...]}
LaurentData laurent_from_json(const Json& j);
Json laurent_json(const LaurentData& l);
/// {"dim": n, "rays": [...], "cones": [[...], ...]}
Fan fan_from_json(const Json& j);
Json fan_json(const Fan& f);

/// FNV-1a, hex.
std::string digest(const std::string& bytes);

} // namespace hodgeforge
