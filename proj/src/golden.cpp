#include "hermite/golden.hpp"

#include <cmath>
#include <fstream>

#include "hermite/ratio.hpp"

namespace hermite {

namespace {

double number_field(const nlohmann::json& obj, const char* key, std::size_t index) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw GoldenFormatError("entry " + std::to_string(index) + ": missing numeric field '" + key + "'");
  return it->get<double>();
}

}  // namespace

GoldenFile parse_golden(const nlohmann::json& doc) {
  if (!doc.is_object()) throw GoldenFormatError("top level must be an object");
  const auto meta = doc.find("meta");
  if (meta == doc.end() || !meta->is_object()) throw GoldenFormatError("missing 'meta' object");
  const auto digits = meta->find("precision_digits");
  const auto generator = meta->find("generator");
  if (digits == meta->end() || !digits->is_number_integer())
    throw GoldenFormatError("meta.precision_digits must be an integer");
  if (generator == meta->end() || !generator->is_string()) throw GoldenFormatError("meta.generator must be a string");
  const auto entries = doc.find("entries");
  if (entries == doc.end() || !entries->is_array()) throw GoldenFormatError("missing 'entries' array");

  GoldenFile out;
  out.precision_digits = digits->get<int>();
  out.generator = generator->get<std::string>();
  out.entries.reserve(entries->size());
  for (std::size_t i = 0; i < entries->size(); ++i) {
    const auto& e = (*entries)[i];
    if (!e.is_object()) throw GoldenFormatError("entry " + std::to_string(i) + " is not an object");
    GoldenEntry g;
    const auto fn = e.find("fn");
    if (fn == e.end() || !fn->is_string()) throw GoldenFormatError("entry " + std::to_string(i) + ": missing 'fn'");
    g.fn = fn->get<std::string>();
    if (g.fn != "H" && g.fn != "D" && g.fn != "R")
      throw GoldenFormatError("entry " + std::to_string(i) + ": fn must be H, D or R");
    g.nu = number_field(e, "nu", i);
    g.x = number_field(e, "x", i);
    if (!(g.nu < 0.0) || !std::isfinite(g.nu) || !std::isfinite(g.x))
      throw GoldenFormatError("entry " + std::to_string(i) + ": need finite nu < 0 and finite x");
    if (e.contains("log_value")) {
      g.log_value = number_field(e, "log_value", i);
    } else {
      const double v = number_field(e, "value", i);
      if (!(v > 0.0)) throw GoldenFormatError("entry " + std::to_string(i) + ": value must be positive");
      g.log_value = std::log(v);
    }
    out.entries.push_back(std::move(g));
  }
  return out;
}

GoldenFile load_golden(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GoldenFormatError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw GoldenFormatError(std::string("invalid JSON: ") + e.what());
  }
  return parse_golden(doc);
}

std::vector<GoldenCheck> check_golden(const GoldenFile& file, double tol, const QuadratureConfig& cfg) {
  std::vector<GoldenCheck> out;
  out.reserve(file.entries.size());
  for (const auto& e : file.entries) {
    GoldenCheck c{e};
    const Order nu(e.nu);
    if (e.fn == "H")
      c.computed_log = hermite(nu, e.x, cfg).value.log_mag;
    else if (e.fn == "D")
      c.computed_log = dnu(nu, e.x, cfg).value.log_mag;
    else
      c.computed_log = std::log(ratio_hermite(nu, e.x, cfg).r);
    c.abs_diff = std::fabs(c.computed_log - e.log_value);
    c.ok = c.abs_diff <= tol;
    out.push_back(c);
  }
  return out;
}

}  // namespace hermite
