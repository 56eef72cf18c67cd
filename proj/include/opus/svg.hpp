#pragma once

#include <string>

#include "opus/packing.hpp"

namespace opus {

// Deterministic SVG rendering of a layout: container outline, one filled
// path per piece, y flipped to screen convention, annotated with the used
// length and waste percentage.
std::string render_svg(const Layout& layout, double waste_ratio);

void write_svg(const std::string& path, const Layout& layout, double waste_ratio);

}  // namespace opus
