#include "opus/svg.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "opus/errors.hpp"

namespace opus {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Layout& layout, double waste_ratio) {
  const double L = layout.length();
  const double H = layout.height();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(L) << " " << fmt(H)
      << "\" width=\"800\">\n";
  out << "  <title>L=" << fmt(L) << ", waste=" << fmt(waste_ratio * 100.0) << "%</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(L) << "\" height=\"" << fmt(H)
      << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"" << fmt(H * 0.002) << "\"/>\n";
  for (size_t i = 0; i < layout.size(); ++i) {
    const Polygon& p = layout.placed(i);
    out << "  <path d=\"";
    const auto& vs = p.vertices();
    for (size_t v = 0; v < vs.size(); ++v) {
      out << (v == 0 ? "M " : "L ") << fmt(vs[v].x) << " " << fmt(H - vs[v].y) << " ";
    }
    out << "Z\" fill=\"" << kPalette[i % kPalette.size()]
        << "\" fill-opacity=\"0.8\" stroke=\"#333333\" stroke-width=\"" << fmt(H * 0.0015)
        << "\"/>\n";
  }
  out << "  <text x=\"" << fmt(L * 0.01) << "\" y=\"" << fmt(H * 0.04) << "\" font-size=\""
      << fmt(H * 0.03) << "\" font-family=\"monospace\">L=" << fmt(L) << " waste="
      << fmt(waste_ratio * 100.0) << "%</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::string& path, const Layout& layout, double waste_ratio) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << render_svg(layout, waste_ratio);
}

}  // namespace opus
