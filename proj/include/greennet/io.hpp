#pragma once

#include "greennet/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace greennet {

// Matrix output: the vertex ordering plus the rows, printed with enough
// digits (17 significant) that reading the file back reproduces every value
// exactly.
struct MatrixFile {
  std::vector<std::string> order;
  Eigen::MatrixXd rows;
};

// Network input. JSON schema:
//   { "version": 1, "vertices": [...], "edges": [{"u":..,"v":..,"c":..}, ...],
//     "weight": {label: value, ...}, "lambda": 0.0, "normalize": false }
// weight, lambda, normalize and version are optional. The plain-text form is
// one "u v c" edge per line ('#' comments allowed), uniform weight, lambda 0.
NetworkData parse_network_json(const std::string& text);
NetworkData parse_network_text(const std::string& text);

// Auto-detects JSON (first non-space byte '{') unless format is given.
NetworkData read_network_file(const std::string& path,
                              const std::optional<std::string>& format = std::nullopt);

std::string matrix_to_json(const MatrixFile& m);
std::string matrix_to_text(const MatrixFile& m);
MatrixFile matrix_from_json(const std::string& text);
MatrixFile matrix_from_text(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// 17 significant digits; round-trips exactly through parsing.
std::string format_double(double v);

}  // namespace greennet
