#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hermite/specfun.hpp"

namespace hermite {

// Reference values file:
//   {"meta": {"precision_digits": int, "generator": str},
//    "entries": [{"fn": "H"|"D"|"R", "nu": num, "x": num,
//                 "log_value": num and/or "value": num}, ...]}
// log_value is canonical; value is used (through its log) only when
// log_value is absent.
struct GoldenEntry {
  std::string fn;
  double nu = 0.0;
  double x = 0.0;
  double log_value = 0.0;
};

struct GoldenFile {
  int precision_digits = 0;
  std::string generator;
  std::vector<GoldenEntry> entries;
};

class GoldenFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GoldenFile parse_golden(const nlohmann::json& doc);
GoldenFile load_golden(const std::filesystem::path& path);

struct GoldenCheck {
  GoldenEntry entry;
  double computed_log = 0.0;
  double abs_diff = 0.0;  // |computed - expected| in log space, i.e. the relative error
  bool ok = false;
};

// Evaluates each entry (H, D or log R) and compares in log space.
std::vector<GoldenCheck> check_golden(const GoldenFile& file, double tol, const QuadratureConfig& cfg = {});

}  // namespace hermite
