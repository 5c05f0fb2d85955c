#pragma once

#include <cstddef>
#include <span>

namespace poho {

namespace detail {

template <class F>
double pairwise_map_sum_impl(std::size_t lo, std::size_t hi, const F& term) {
  if (hi - lo <= 16) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += term(k);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_map_sum_impl(lo, mid, term) + pairwise_map_sum_impl(mid, hi, term);
}

}  // namespace detail

/// Pairwise sum of term(lo), ..., term(hi-1) over a fixed binary tree
/// (split at the midpoint, serial run below 16 elements). The tree depends
/// only on the index range, never on thread count or traversal order, so
/// every reduction in this library is bit-reproducible.
template <class F>
double pairwise_map_sum(std::size_t lo, std::size_t hi, F&& term) {
  if (lo >= hi) return 0.0;
  return detail::pairwise_map_sum_impl(lo, hi, term);
}

/// Pairwise sum of a contiguous buffer, same tree as pairwise_map_sum.
double pairwise_sum(std::span<const double> v);

}  // namespace poho
