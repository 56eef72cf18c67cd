#pragma once

#include <optional>
#include <string>

#include "opus/compat.hpp"

namespace opus {

// On-disk cache for no-fit tables.  One JSON file per (shape pair, config)
// under `dir`, keyed by a hash of the canonical vertex lists and the full
// discretization; a config echo inside the file guards against collisions.
// The OPUS_CACHE_DIR environment variable supplies `dir` for the CLI.

std::string nff_cache_key(const Polygon& a, const Polygon& b, const DiscretizationConfig& cfg);

std::optional<NoFitTable> nff_cache_load(const std::string& dir, const Polygon& a,
                                         const Polygon& b, const DiscretizationConfig& cfg);

void nff_cache_store(const std::string& dir, const Polygon& a, const Polygon& b,
                     const DiscretizationConfig& cfg, const NoFitTable& table);

}  // namespace opus
