#include "gaussmetro/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gaussmetro::cli {

namespace {

using nlohmann::json;

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }
std::string key_path(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw SchemaError(key_path(path, key), "required field is missing");
  return obj.at(key);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
}

void allow_keys(const json& obj, const std::set<std::string>& keys, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!keys.count(key)) throw SchemaError(key_path(path, key), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& path, std::size_t size) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  if (j.size() != size) throw SchemaError(path, "expected " + std::to_string(size) + " entries, one per mode");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index_path(path, i)));
  return out;
}

Element parse_element(const json& e, const std::string& path, int modes, bool& is_carrier) {
  require_object(e, path);
  const json& type = require(e, "type", path);
  if (!type.is_string()) throw SchemaError(key_path(path, "type"), "expected a string");
  const std::string name = type.get<std::string>();
  is_carrier = false;

  if (name == "bs") {
    allow_keys(e, {"type"}, path);
    if (modes != 2) throw SchemaError(key_path(path, "type"), "beam splitter needs modes = 2");
    return BeamSplitter{};
  }
  if (name == "phase") {
    allow_keys(e, {"type", "value", "weights"}, path);
    PhaseShifter p = modes == 2 ? symmetric_phase() : number_phase();
    const json& value = require(e, "value", path);
    if (value.is_string()) {
      if (value.get<std::string>() != "PHI") throw SchemaError(key_path(path, "value"), "expected a number or \"PHI\"");
      is_carrier = true;
    } else {
      p.phi = number(value, key_path(path, "value"));
    }
    if (e.contains("weights")) p.weights = number_list(e["weights"], key_path(path, "weights"), modes);
    return p;
  }
  if (name == "opa") {
    allow_keys(e, {"type", "g", "sign"}, path);
    Opa o;
    o.g = number(require(e, "g", path), key_path(path, "g"));
    if (e.contains("sign")) {
      const json& s = e["sign"];
      const std::string sp = key_path(path, "sign");
      if (s.is_string() && s.get<std::string>() == "+") o.sign = +1;
      else if (s.is_string() && s.get<std::string>() == "-") o.sign = -1;
      else if (s.is_number_integer() && (s.get<int>() == 1 || s.get<int>() == -1)) o.sign = s.get<int>();
      else throw SchemaError(sp, "expected \"+\" or \"-\"");
    }
    if (o.g < 0.0) throw PhysicsError(key_path(path, "g") + ": amplifier strength must be non-negative");
    return o;
  }
  if (name == "loss") {
    allow_keys(e, {"type", "xi"}, path);
    Loss l{number_list(require(e, "xi", path), key_path(path, "xi"), modes)};
    for (std::size_t i = 0; i < l.transmissivity.size(); ++i) {
      const double xi = l.transmissivity[i];
      if (!(xi >= 0.0 && xi <= 1.0))
        throw PhysicsError(index_path(key_path(path, "xi"), i) + ": transmissivity must lie in [0, 1]");
    }
    return l;
  }
  throw SchemaError(key_path(path, "type"), "unknown element type \"" + name + "\" (bs, phase, opa, loss)");
}

}  // namespace

PipelineConfig parse_config(const json& doc) {
  require_object(doc, "");
  allow_keys(doc, {"modes", "input", "elements", "eval"}, "");

  const json& modes_j = require(doc, "modes", "");
  if (!modes_j.is_number_integer() || (modes_j.get<int>() != 1 && modes_j.get<int>() != 2))
    throw SchemaError("modes", "expected 1 or 2");
  const int modes = modes_j.get<int>();

  const json& input_j = require(doc, "input", "");
  require_object(input_j, "input");
  allow_keys(input_j, {"alpha", "r"}, "input");
  InputSpec input;
  input.alpha = number(require(input_j, "alpha", "input"), "input.alpha");
  input.r = number(require(input_j, "r", "input"), "input.r");
  if (input.alpha < 0.0 || input.r < 0.0) throw PhysicsError("input: alpha and r must be non-negative");

  const json& elements_j = require(doc, "elements", "");
  if (!elements_j.is_array() || elements_j.empty()) throw SchemaError("elements", "expected a non-empty array");
  std::vector<Element> elements;
  std::size_t carrier = 0;
  int carriers = 0;
  for (std::size_t i = 0; i < elements_j.size(); ++i) {
    bool is_carrier = false;
    elements.push_back(parse_element(elements_j[i], index_path("elements", i), modes, is_carrier));
    if (is_carrier) {
      carrier = i;
      ++carriers;
    }
  }
  if (carriers != 1)
    throw SchemaError("elements", "exactly one phase element must have value \"PHI\" (found " +
                                      std::to_string(carriers) + ")");

  EvalSettings eval;
  if (doc.contains("eval")) {
    const json& e = doc["eval"];
    require_object(e, "eval");
    allow_keys(e, {"phi", "oracle", "dims"}, "eval");
    if (e.contains("phi")) eval.phi = number(e["phi"], "eval.phi");
    if (e.contains("oracle")) {
      if (!e["oracle"].is_boolean()) throw SchemaError("eval.oracle", "expected true or false");
      eval.oracle = e["oracle"].get<bool>();
    }
    if (e.contains("dims")) {
      if (!e["dims"].is_number_integer() || e["dims"].get<int>() < 3)
        throw SchemaError("eval.dims", "expected an integer >= 3");
      eval.dims = e["dims"].get<int>();
    }
  }
  return {Pipeline(modes, input, std::move(elements), carrier), eval};
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Locate the byte offset as line:column.
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(column), "malformed JSON");
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json_text(text.str());
}

json::json_pointer field_pointer(const std::string& path) {
  if (path.empty()) throw SchemaError(path, "empty field path");
  std::string pointer;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw SchemaError(path, "malformed field path");
    pointer += "/" + token;
    token.clear();
  };
  for (std::size_t i = 0; i < path.size(); ++i) {
    const char c = path[i];
    if (c == '.') {
      flush();
    } else if (c == '[') {
      flush();
      const auto close = path.find(']', i);
      if (close == std::string::npos) throw SchemaError(path, "unbalanced '[' in field path");
      token = path.substr(i + 1, close - i - 1);
      if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        throw SchemaError(path, "array index must be a non-negative integer");
      i = close;
      if (i + 1 < path.size() && path[i + 1] != '.' && path[i + 1] != '[')
        throw SchemaError(path, "malformed field path");
      if (i + 1 < path.size() && path[i + 1] == '.') ++i;
      pointer += "/" + token;
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) pointer += "/" + token;
  return json::json_pointer(pointer);
}

}  // namespace gaussmetro::cli
