#pragma once

#include <string>

#include <json.hpp>

#include "gaussmetro/elements.hpp"

namespace gaussmetro::cli {

struct EvalSettings {
  double phi = 0.0;
  bool oracle = false;
  int dims = 30;
};

/// A validated pipeline description.
///
/// JSON layout:
///   { "modes": 1|2,
///     "input": {"alpha": a, "r": r},
///     "elements": [ {"type": "bs"},
///                   {"type": "phase", "value": "PHI" | number, "weights": [..]},
///                   {"type": "opa", "g": g, "sign": "+"|"-"},
///                   {"type": "loss", "xi": [xi1, ...]} ],
///     "eval": {"phi": p, "oracle": bool, "dims": n} }
///
/// Exactly one phase element carries "PHI". Shape and type problems raise
/// SchemaError with the offending field path (e.g. "elements[2].xi[0]");
/// out-of-range physics (transmissivity outside [0, 1], negative gain) raises
/// PhysicsError.
struct PipelineConfig {
  Pipeline pipeline;
  EvalSettings eval;
};

PipelineConfig parse_config(const nlohmann::json& doc);

/// Parses JSON text; syntax errors become SchemaError with line and column.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json load_json_file(const std::string& path);

/// Field path "a.b[2].c" or "a.b.2.c" as a JSON pointer.
nlohmann::json::json_pointer field_pointer(const std::string& path);

}  // namespace gaussmetro::cli
