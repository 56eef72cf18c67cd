#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opus/geometry.hpp"

namespace opus {

struct PieceSpec {
  std::vector<Point> vertices;
  int count = 1;
};

struct Instance {
  std::string name;
  double height = 0.0;
  std::optional<double> rotation_step_deg;
  std::vector<PieceSpec> pieces;

  // Pieces expanded by multiplicity, in file order.
  std::vector<Polygon> expand() const;
};

// Schema: {"name": str, "height": num, "rotation_step_deg": num?,
//          "pieces": [{"vertices": [[x, y], ...], "count": int?}, ...]}
// Errors carry the JSON path of the offending element.
Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& inst);

}  // namespace opus
