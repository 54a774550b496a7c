#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pharmachain/telemetry/reading.hpp"

namespace pharmachain::gateway {

enum class Comparator { Greater, Less, GreaterEqual, LessEqual };

std::string comparator_symbol(Comparator c);
Comparator parse_comparator(const std::string& s);  // ">", "<", ">=", "<=" (also "≥", "≤")

struct Rule {
  std::string name;
  std::string field;  // reading key: temp, hum, lat, lng
  Comparator comparator = Comparator::Greater;
  double threshold = 0;
  bool audit = true;
  bool notify = true;

  bool violated_by(const telemetry::TelemetryReading& r) const;
  nlohmann::json to_json() const;
  static Rule from_json(const nlohmann::json& j);
};

struct RuleSet {
  std::vector<Rule> rules;

  // temperature > 25 -> audit + notify
  static RuleSet defaults();
  // Either {"rules":[...]} or a bare array of rules.
  static RuleSet from_json(const nlohmann::json& j);
  static RuleSet load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

}  // namespace pharmachain::gateway
