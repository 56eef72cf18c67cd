#include "opus/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opus/errors.hpp"

namespace opus {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

}  // namespace

std::vector<Polygon> Instance::expand() const {
  std::vector<Polygon> out;
  for (size_t i = 0; i < pieces.size(); ++i) {
    Polygon p(pieces[i].vertices);
    for (int k = 0; k < pieces[i].count; ++k) out.push_back(p);
  }
  return out;
}

Instance parse_instance(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("$: expected an object");

  Instance inst;
  if (!root.contains("name") || !root["name"].is_string())
    throw ParseError("$.name: expected a string");
  inst.name = root["name"].get<std::string>();

  if (!root.contains("height")) throw ParseError("$.height: missing");
  inst.height = require_number(root["height"], "$.height");
  if (inst.height <= 0.0) throw ParseError("$.height: must be positive");

  if (root.contains("rotation_step_deg")) {
    double step = require_number(root["rotation_step_deg"], "$.rotation_step_deg");
    if (step <= 0.0 || step > 360.0)
      throw ParseError("$.rotation_step_deg: must be in (0, 360]");
    inst.rotation_step_deg = step;
  }

  if (!root.contains("pieces") || !root["pieces"].is_array() || root["pieces"].empty())
    throw ParseError("$.pieces: expected a non-empty array");

  for (size_t i = 0; i < root["pieces"].size(); ++i) {
    const std::string base = "$.pieces[" + std::to_string(i) + "]";
    const json& jp = root["pieces"][i];
    if (!jp.is_object()) throw ParseError(base + ": expected an object");

    PieceSpec spec;
    if (!jp.contains("vertices") || !jp["vertices"].is_array() || jp["vertices"].size() < 3)
      throw ParseError(base + ".vertices: expected an array of at least 3 points");
    for (size_t v = 0; v < jp["vertices"].size(); ++v) {
      const std::string vp = base + ".vertices[" + std::to_string(v) + "]";
      const json& jv = jp["vertices"][v];
      if (!jv.is_array() || jv.size() != 2) throw ParseError(vp + ": expected [x, y]");
      spec.vertices.push_back({require_number(jv[0], vp + "[0]"),
                               require_number(jv[1], vp + "[1]")});
    }
    if (jp.contains("count")) {
      if (!jp["count"].is_number_integer() || jp["count"].get<int>() < 1)
        throw ParseError(base + ".count: expected a positive integer");
      spec.count = jp["count"].get<int>();
    }
    try {
      Polygon check(spec.vertices);
      (void)check;
    } catch (const Error& e) {
      throw ParseError(base + ".vertices: " + e.what());
    }
    inst.pieces.push_back(std::move(spec));
  }

  for (const auto& [key, _] : root.items()) {
    if (key != "name" && key != "height" && key != "rotation_step_deg" && key != "pieces")
      throw ParseError("$." + key + ": unknown field");
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  json root;
  root["name"] = inst.name;
  root["height"] = inst.height;
  if (inst.rotation_step_deg) root["rotation_step_deg"] = *inst.rotation_step_deg;
  root["pieces"] = json::array();
  for (const PieceSpec& p : inst.pieces) {
    json jp;
    jp["vertices"] = json::array();
    for (const Point& v : p.vertices) jp["vertices"].push_back({v.x, v.y});
    jp["count"] = p.count;
    root["pieces"].push_back(std::move(jp));
  }
  return root.dump(2) + "\n";
}

}  // namespace opus
