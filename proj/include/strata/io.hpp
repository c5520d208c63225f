#pragma once

// Matrix files: {"n": 2, "rows": [[[re, im], ...], ...]}.

#include <string>

#include <json.hpp>

#include "strata/numeric.hpp"

namespace strata {

/// Accepts [re, im] pairs or bare real numbers; throws ParseError unless square and finite.
CMatrix matrix_from_json(const nlohmann::json& doc);
nlohmann::json matrix_to_json(const CMatrix& m);

CMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const CMatrix& m);

/// Rounds every floating value to 12 significant digits so dumps are byte-stable.
nlohmann::json rounded(const nlohmann::json& doc);

} // namespace strata
