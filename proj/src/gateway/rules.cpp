#include "pharmachain/gateway/rules.hpp"

#include <fstream>
#include <stdexcept>

namespace pharmachain::gateway {

std::string comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::Greater: return ">";
    case Comparator::Less: return "<";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::LessEqual: return "<=";
  }
  return "?";
}

Comparator parse_comparator(const std::string& s) {
  if (s == ">") return Comparator::Greater;
  if (s == "<") return Comparator::Less;
  if (s == ">=" || s == "≥") return Comparator::GreaterEqual;
  if (s == "<=" || s == "≤") return Comparator::LessEqual;
  throw std::invalid_argument("unknown comparator " + s);
}

bool Rule::violated_by(const telemetry::TelemetryReading& r) const {
  double v = r.field(field);
  switch (comparator) {
    case Comparator::Greater: return v > threshold;
    case Comparator::Less: return v < threshold;
    case Comparator::GreaterEqual: return v >= threshold;
    case Comparator::LessEqual: return v <= threshold;
  }
  return false;
}

nlohmann::json Rule::to_json() const {
  nlohmann::json actions = nlohmann::json::array();
  if (audit) actions.push_back("audit");
  if (notify) actions.push_back("notify");
  return {{"name", name},
          {"field", field},
          {"comparator", comparator_symbol(comparator)},
          {"threshold", threshold},
          {"actions", actions}};
}

Rule Rule::from_json(const nlohmann::json& j) {
  Rule r;
  r.name = j.at("name").get<std::string>();
  r.field = j.at("field").get<std::string>();
  telemetry::TelemetryReading probe;
  probe.field(r.field);  // rejects unknown fields
  r.comparator = parse_comparator(j.at("comparator").get<std::string>());
  r.threshold = j.at("threshold").get<double>();
  r.audit = r.notify = false;
  for (const auto& a : j.at("actions")) {
    auto s = a.get<std::string>();
    if (s == "audit") r.audit = true;
    else if (s == "notify") r.notify = true;
    else throw std::invalid_argument("unknown rule action " + s);
  }
  return r;
}

RuleSet RuleSet::defaults() {
  return RuleSet{{Rule{"temperature-above-25", "temp", Comparator::Greater, 25.0, true, true}}};
}

RuleSet RuleSet::from_json(const nlohmann::json& j) {
  const auto& arr = j.is_object() ? j.at("rules") : j;
  RuleSet s;
  for (const auto& r : arr) s.rules.push_back(Rule::from_json(r));
  return s;
}

RuleSet RuleSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rules file " + path.string());
  return from_json(nlohmann::json::parse(in));
}

nlohmann::json RuleSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rules) arr.push_back(r.to_json());
  return {{"rules", arr}};
}

}  // namespace pharmachain::gateway
