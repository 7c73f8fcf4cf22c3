#pragma once

#include <cstdint>

namespace s2gnn {

using index_t = std::int64_t;

// Dense fallbacks are only needed for small oracle/analysis graphs, never for
// the sparse propagation path.
inline constexpr index_t kDefaultDenseCap = 5000;
inline constexpr index_t kDefaultKroneckerCap = 4096;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace s2gnn
