#include "hillspec/potential_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hillspec/errors.hpp"
#include "json.hpp"

namespace hillspec {

using nlohmann::json;

PeriodicPotential parse_step_potential(std::string_view json_text, std::string default_name) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("potential file: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("potential file: expected a JSON object");
  for (const char* key : {"period", "breakpoints", "values"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("potential file: missing '") + key + "'");
    }
  }
  try {
    const double period = doc.at("period").get<double>();
    auto breakpoints = doc.at("breakpoints").get<std::vector<double>>();
    auto values = doc.at("values").get<std::vector<double>>();
    std::string name = doc.value("name", default_name);
    return PeriodicPotential::step(std::move(name), period, std::move(breakpoints),
                                   std::move(values));
  } catch (const json::type_error& e) {
    throw std::invalid_argument(std::string("potential file: ") + e.what());
  }
}

PeriodicPotential load_step_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open potential file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_step_potential(buffer.str(), path.stem().string());
}

std::string to_json(const PeriodicPotential& step_potential) {
  if (!step_potential.is_step()) {
    throw std::invalid_argument("only step potentials have a file representation");
  }
  const auto bp = step_potential.step_breakpoints();
  const auto values = step_potential.step_values();
  json doc;
  doc["name"] = step_potential.name();
  doc["period"] = step_potential.period();
  doc["breakpoints"] = std::vector<double>(bp.begin(), bp.end());
  doc["values"] = std::vector<double>(values.begin(), values.end());
  return doc.dump();
}

PeriodicPotential resolve_potential(const std::string& spec) {
  for (const auto& name : builtin_names()) {
    if (spec == name) return builtin(spec);
  }
  if (std::filesystem::exists(spec)) return load_step_potential(spec);
  throw NotFoundError("'" + spec + "' is neither a builtin potential nor a readable file");
}

}  // namespace hillspec
