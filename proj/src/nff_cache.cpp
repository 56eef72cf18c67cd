#include "opus/nff_cache.hpp"

#include <json.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace opus {

namespace {

constexpr int kCacheFormatVersion = 1;

std::string canonical_shape(const Polygon& p) {
  Point c = p.centroid();
  std::ostringstream os;
  os.precision(12);
  for (const Point& v : p.vertices()) os << v.x - c.x << "," << v.y - c.y << ";";
  return os.str();
}

std::string config_echo(const DiscretizationConfig& cfg) {
  std::ostringstream os;
  os.precision(12);
  os << "theta:";
  for (double a : cfg.theta_deg) os << a << ",";
  os << "|phi:";
  for (double a : cfg.phi_deg) os << a << ",";
  os << "|r_step:" << cfg.r_step << "|r_max:" << cfg.r_max << "|eps:" << cfg.eps_area
     << "|v:" << kCacheFormatVersion;
  return os.str();
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path cache_path(const std::string& dir, const std::string& key) {
  return std::filesystem::path(dir) / ("nff_" + key + ".json");
}

}  // namespace

std::string nff_cache_key(const Polygon& a, const Polygon& b, const DiscretizationConfig& cfg) {
  std::string payload = canonical_shape(a) + "#" + canonical_shape(b) + "#" + config_echo(cfg);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(payload)));
  return buf;
}

std::optional<NoFitTable> nff_cache_load(const std::string& dir, const Polygon& a,
                                         const Polygon& b, const DiscretizationConfig& cfg) {
  auto path = cache_path(dir, nff_cache_key(a, b, cfg));
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
    if (j.value("version", 0) != kCacheFormatVersion) return std::nullopt;
    if (j.value("config", "") != config_echo(cfg)) return std::nullopt;
    if (j.value("shape_a", "") != canonical_shape(a)) return std::nullopt;
    if (j.value("shape_b", "") != canonical_shape(b)) return std::nullopt;
    NoFitTable t;
    for (const auto& e : j.at("entries")) {
      NffEntry n;
      n.theta_deg = e.at(0).get<double>();
      n.r = e.at(1).get<double>();
      n.phi_deg = e.at(2).get<double>();
      n.hull_area = e.at(3).get<double>();
      n.mirrored = e.at(4).get<bool>();
      n.fallback = e.at(5).get<bool>();
      t.entries.push_back(n);
    }
    if (t.entries.size() != cfg.theta_deg.size()) return std::nullopt;
    return t;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void nff_cache_store(const std::string& dir, const Polygon& a, const Polygon& b,
                     const DiscretizationConfig& cfg, const NoFitTable& table) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir + ": " + ec.message());
  nlohmann::json j;
  j["version"] = kCacheFormatVersion;
  j["config"] = config_echo(cfg);
  j["shape_a"] = canonical_shape(a);
  j["shape_b"] = canonical_shape(b);
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const NffEntry& e : table.entries)
    entries.push_back({e.theta_deg, e.r, e.phi_deg, e.hull_area, e.mirrored, e.fallback});

  auto final_path = cache_path(dir, nff_cache_key(a, b, cfg));
  auto tmp_path = final_path;
  tmp_path += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp_path);
    if (!out) throw IoError("cannot write cache file " + tmp_path.string());
    out << j.dump();
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) std::filesystem::remove(tmp_path, ec);
}

}  // namespace opus
