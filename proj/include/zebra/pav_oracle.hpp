#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zebra/calibration.hpp"
#include "zebra/types.hpp"

namespace zebra {

// Exhaustive reference for isotonic regression, kept deliberately independent
// of pav_fit so the two can cross-check each other. Enumerates every
// contiguous partition of the tie-grouped sequence, keeps those whose block
// means are non-decreasing, and returns the per-entry fitted posteriors of
// the squared-error minimizer (which is unique as a fitted vector). Cost is
// O(2^groups), hence the hard length cap; validation use only.
inline std::vector<double> pav_brute_force_oracle(
    std::span<const PooledScore> pooled) {
  if (pooled.size() > 14) {
    throw TooLargeError("pav_brute_force_oracle: sequence longer than 14");
  }
  if (pooled.empty()) return {};

  struct Group {
    std::uint64_t n_mated = 0;
    std::uint64_t total = 0;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < pooled.size();) {
    if (i > 0 && pooled[i].score < pooled[i - 1].score) {
      throw Error("pav_brute_force_oracle requires a score-sorted sequence");
    }
    Group g;
    const double score = pooled[i].score;
    while (i < pooled.size() && pooled[i].score == score) {
      g.n_mated += pooled[i].is_mated ? 1 : 0;
      ++g.total;
      ++i;
    }
    groups.push_back(g);
  }

  const std::size_t m = groups.size();
  double best_sse = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;

  // Bit k of the mask cuts the partition between groups k and k+1.
  for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
    double sse = 0.0;
    bool monotone = true;
    std::uint64_t prev_a = 0, prev_t = 0;
    std::size_t g = 0;
    while (g < m && monotone) {
      std::uint64_t a = groups[g].n_mated;
      std::uint64_t t = groups[g].total;
      while (g + 1 < m && !(mask & (1u << g))) {
        ++g;
        a += groups[g].n_mated;
        t += groups[g].total;
      }
      ++g;
      // means must be non-decreasing: prev_a/prev_t <= a/t, cross-multiplied
      if (prev_t != 0 && prev_a * t > a * prev_t) {
        monotone = false;
        break;
      }
      // within-block squared error of fitting a/(a+b) to a ones and b zeros
      const std::uint64_t b = t - a;
      sse += static_cast<double>(a) * static_cast<double>(b) /
             static_cast<double>(t);
      prev_a = a;
      prev_t = t;
    }
    if (monotone && sse < best_sse) {
      best_sse = sse;
      best_mask = mask;
    }
  }

  std::vector<double> fitted;
  fitted.reserve(pooled.size());
  std::size_t g = 0;
  while (g < m) {
    std::uint64_t a = groups[g].n_mated;
    std::uint64_t t = groups[g].total;
    while (g + 1 < m && !(best_mask & (1u << g))) {
      ++g;
      a += groups[g].n_mated;
      t += groups[g].total;
    }
    ++g;
    const double posterior = static_cast<double>(a) / static_cast<double>(t);
    for (std::uint64_t k = 0; k < t; ++k) fitted.push_back(posterior);
  }
  return fitted;
}

}  // namespace zebra
