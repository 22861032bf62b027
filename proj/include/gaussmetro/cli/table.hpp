#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace gaussmetro::cli {

/// 12 significant digits, locale independent; "inf", "-inf" and "nan" for
/// non-finite values.
std::string format_number(double x);

/// x rounded to 12 significant digits (the value format_number prints).
double round12(double x);

/// JSON number rounded to 12 significant digits; null if not finite.
nlohmann::json json_number(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  /// {"columns": [...], "rows": [[...], ...]}, non-finite entries as strings.
  nlohmann::json to_json() const;
  std::vector<double> column(const std::string& name) const;
};

/// Fixed two-space indentation, trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace gaussmetro::cli
