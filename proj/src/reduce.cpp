#include "poho/reduce.hpp"

namespace poho {

double pairwise_sum(std::span<const double> v) {
  return pairwise_map_sum(0, v.size(), [&](std::size_t k) { return v[k]; });
}

}  // namespace poho
