#include "accumsim/accumulator.hpp"

namespace accumsim {

ScanNetwork ScanNetwork::build(std::uint32_t width) {
  if (width == 0 || (width & (width - 1)) != 0)
    throw std::invalid_argument("scan network: width must be a power of two");
  ScanNetwork net;
  net.width_ = width;
  for (std::uint32_t block = 2; block <= width; block *= 2) {
    std::vector<Node> level;
    for (std::uint32_t base = 0; base < width; base += block) {
      const std::uint32_t mid = base + block / 2;
      for (std::uint32_t lane = mid; lane < base + block; ++lane) {
        level.push_back({mid - 1, lane});
      }
    }
    net.levels_.push_back(std::move(level));
  }
  return net;
}

std::uint64_t ScanNetwork::node_count() const {
  std::uint64_t count = 0;
  for (const auto& level : levels_) count += level.size();
  return count;
}

std::uint32_t ScanNetwork::lane_depth(std::uint32_t lane) const {
  std::uint32_t depth = 0;
  for (const auto& level : levels_) {
    for (const Node& node : level) {
      if (node.right_lane == lane) {
        ++depth;
        break;
      }
    }
  }
  return depth;
}

}  // namespace accumsim
