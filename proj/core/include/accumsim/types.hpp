#pragma once

#include <cstdint>
#include <limits>

namespace accumsim {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;

// Reserved tag for empty accumulator lanes; never a real vertex ID.
inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

// Orientation of a compressed adjacency: whether neighbors_of(v) lists
// the in-neighbors (CSC-like) or the out-neighbors (CSR-like) of v.
enum class DirectionMode : std::uint8_t { InEdges = 0, OutEdges = 1 };

}  // namespace accumsim
