#pragma once

// JSON and CSV encodings. Numbers are written with 17 significant digits so
// that every double round-trips exactly and output is byte-stable.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cutloci/cutengine.hpp"
#include "cutloci/report.hpp"

namespace cutloci {

using Json = nlohmann::ordered_json;

/// Serializes with %.17g numbers; non-finite numbers become null.
std::string dump_json(const Json& value, int indent = 2);

std::string format_double(double x);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

/// {"rows", "cols", "field": "real"|"complex", "data"}; complex data is
/// row-major with each entry as an [re, im] pair.
Json matrix_to_json(const Mat& a);
Json matrix_to_json(const CMat& a);
Mat real_matrix_from_json(const Json& j);
CMat complex_matrix_from_json(const Json& j);

Json minimizer_set_to_json(const MinimizerSet& m);
Json checks_to_json(const std::vector<Check>& checks);

/// {"submanifold", "ambient", "seed", "samples": [...], "unresolved": [...]}.
Json cut_cloud_to_json(const Submanifold& n, std::uint64_t seed, const CutCloud& cloud);
/// Same columns as the JSON samples, flattened; starts with a comment row.
std::string cut_cloud_to_csv(const Submanifold& n, std::uint64_t seed, const CutCloud& cloud);

}  // namespace cutloci
