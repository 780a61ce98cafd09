#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zebra/types.hpp"

namespace zebra {

// One entry of the pooled, class-labeled sequence fed to isotonic regression.
// source_index is the position within the entry's class list; the dummies
// injected by laplace_augment carry npos.
struct PooledScore {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double score = 0.0;
  bool is_mated = false;
  bool is_dummy = false;
  std::size_t source_index = npos;
};

// Contiguous block of the score-sorted pooled sequence after isotonic
// regression. [start_index, end_index) indexes that sequence; counts include
// dummies; posterior = n_mated / (n_mated + n_nonmated).
struct PavBlock {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  std::size_t n_mated = 0;
  std::size_t n_nonmated = 0;
  double posterior = 0.0;
};

// Pools both classes and adds one dummy per class beyond the extremes: a
// mated dummy below the minimum and a non-mated dummy above the maximum.
// The top dummy acts as a Bayesian predictor for the LR of the highest mated
// scores and the bottom dummy caps the other extreme, so every fitted block
// stays mixed and every output LLR finite. Returned sorted ascending.
inline std::vector<PooledScore> laplace_augment(const ScoreSet& scores) {
  std::vector<PooledScore> pooled;
  pooled.reserve(scores.mated().size() + scores.nonmated().size() + 2);
  for (std::size_t i = 0; i < scores.mated().size(); ++i) {
    pooled.push_back({scores.mated()[i], true, false, i});
  }
  for (std::size_t i = 0; i < scores.nonmated().size(); ++i) {
    pooled.push_back({scores.nonmated()[i], false, false, i});
  }

  double lo = pooled.front().score;
  double hi = lo;
  for (const auto& entry : pooled) {
    lo = std::min(lo, entry.score);
    hi = std::max(hi, entry.score);
  }
  // Any positive offset gives the same fit; only the ordering matters. For
  // scores so large that the offset rounds away, fall back to the adjacent
  // representable value so the dummies stay strictly outside the range.
  const double delta = std::max(1.0, 1e-6 * (hi - lo));
  double below = lo - delta;
  if (!(below < lo)) {
    below = std::nextafter(lo, -std::numeric_limits<double>::infinity());
  }
  double above = hi + delta;
  if (!(above > hi)) {
    above = std::nextafter(hi, std::numeric_limits<double>::infinity());
  }
  pooled.push_back({below, true, true, PooledScore::npos});
  pooled.push_back({above, false, true, PooledScore::npos});

  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const PooledScore& a, const PooledScore& b) {
                     return a.score < b.score;
                   });
  return pooled;
}

// Pool-adjacent-violators isotonic regression on the class indicators
// (mated = 1, non-mated = 0) of a score-sorted sequence. Entries with equal
// scores are merged into one group up front, so the fit cannot depend on the
// input order of ties. Violator comparisons use exact integer arithmetic;
// block posteriors are non-decreasing in the result.
inline std::vector<PavBlock> pav_fit(std::span<const PooledScore> pooled) {
  if (!std::is_sorted(pooled.begin(), pooled.end(),
                      [](const PooledScore& a, const PooledScore& b) {
                        return a.score < b.score;
                      })) {
    throw Error("pav_fit requires a score-sorted sequence");
  }

  std::vector<PavBlock> stack;
  std::size_t i = 0;
  while (i < pooled.size()) {
    PavBlock block{i, i, 0, 0, 0.0};
    const double score = pooled[i].score;
    while (block.end_index < pooled.size() &&
           pooled[block.end_index].score == score) {
      if (pooled[block.end_index].is_mated) {
        ++block.n_mated;
      } else {
        ++block.n_nonmated;
      }
      ++block.end_index;
    }
    i = block.end_index;

    // Merge while the previous block's posterior exceeds this one's:
    // a/(a+b) > c/(c+d)  <=>  a*(c+d) > c*(a+b).
    while (!stack.empty()) {
      const PavBlock& prev = stack.back();
      const std::uint64_t lhs =
          static_cast<std::uint64_t>(prev.n_mated) *
          (block.n_mated + block.n_nonmated);
      const std::uint64_t rhs =
          static_cast<std::uint64_t>(block.n_mated) *
          (prev.n_mated + prev.n_nonmated);
      if (lhs <= rhs) break;
      block.start_index = prev.start_index;
      block.n_mated += prev.n_mated;
      block.n_nonmated += prev.n_nonmated;
      stack.pop_back();
    }
    stack.push_back(block);
  }

  for (auto& block : stack) {
    block.posterior = static_cast<double>(block.n_mated) /
                      static_cast<double>(block.n_mated + block.n_nonmated);
  }
  return stack;
}

// Oracle calibration: Laplace augmentation, isotonic fit, then block
// posteriors converted to natural-log LLRs with the augmented class
// proportions divided out:
//   llr = ln(n_mated / n_nonmated) - ln(N_mated / N_nonmated)
// per block. The dummies shape the extreme blocks but are dropped from the
// output, which is aligned with the original score order.
inline CalibratedLLRs pav_calibrate(const ScoreSet& scores) {
  const auto pooled = laplace_augment(scores);
  const auto blocks = pav_fit(pooled);

  const double n_mated_aug = static_cast<double>(scores.mated().size() + 1);
  const double n_nonmated_aug = static_cast<double>(scores.nonmated().size() + 1);
  const double prior_log_odds = std::log(n_mated_aug / n_nonmated_aug);

  CalibratedLLRs out;
  out.n_mated = scores.mated().size();
  out.n_nonmated = scores.nonmated().size();
  out.mated_llr.resize(out.n_mated);
  out.nonmated_llr.resize(out.n_nonmated);

  for (const auto& block : blocks) {
    const double llr = std::log(static_cast<double>(block.n_mated) /
                                static_cast<double>(block.n_nonmated)) -
                       prior_log_odds;
    for (std::size_t k = block.start_index; k < block.end_index; ++k) {
      const PooledScore& entry = pooled[k];
      if (entry.is_dummy) continue;
      if (entry.is_mated) {
        out.mated_llr[entry.source_index] = llr;
      } else {
        out.nonmated_llr[entry.source_index] = llr;
      }
    }
  }
  return out;
}

}  // namespace zebra
