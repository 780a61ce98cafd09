#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "zebra/calibration.hpp"
#include "zebra/types.hpp"

namespace zebra {

// Prior probability of the mated proposition, strictly inside (0, 1).
class Prior {
 public:
  explicit Prior(double pi) : pi_(pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
      throw Error("prior must lie strictly between 0 and 1");
    }
  }
  double pi() const noexcept { return pi_; }
  // Natural-log prior odds ln(pi / (1 - pi)).
  double log_odds() const noexcept { return std::log(pi_) - std::log1p(-pi_); }

 private:
  double pi_;
};

namespace detail {

// ln(1 + e^t) without overflow on either side.
inline double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// Neumaier-compensated accumulator. Keeps serial and any-order parallel
// reductions of the same terms within ~1 ulp of each other.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact-equal values collapsed to (value, count). Calibration emits
// block-constant LLRs, so this turns per-score sums into per-block sums.
struct WeightedValues {
  std::vector<double> values;
  std::vector<double> counts;
  double n = 0.0;
};

inline WeightedValues group_values(std::span<const double> values) {
  if (values.empty()) throw Error("empty LLR list");
  WeightedValues grouped;
  grouped.n = static_cast<double>(values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    grouped.values.push_back(sorted[i]);
    grouped.counts.push_back(static_cast<double>(j - i));
    i = j;
  }
  return grouped;
}

template <typename F>
inline double weighted_mean(const WeightedValues& grouped, F&& f) {
  // Single distinct value: return it exactly, no rounding through sum/divide.
  if (grouped.values.size() == 1) return f(grouped.values.front());
  CompensatedSum sum;
  for (std::size_t i = 0; i < grouped.values.size(); ++i) {
    sum.add(grouped.counts[i] * f(grouped.values[i]));
  }
  return sum.value() / grouped.n;
}

// Empirical cross-entropy in bits for prior pi with natural log-odds theta:
//   (pi * <ln(1 + e^-(llr+theta))>_mated + (1-pi) * <ln(1 + e^(llr+theta))>_nonmated) / ln 2.
// The softplus form stays finite for arbitrarily large |llr| even though the
// likelihood ratios themselves would overflow.
inline double ece_grouped(const WeightedValues& mated,
                          const WeightedValues& nonmated, double pi,
                          double theta) {
  const double mean_mated =
      weighted_mean(mated, [theta](double llr) { return softplus(-(llr + theta)); });
  const double mean_nonmated =
      weighted_mean(nonmated, [theta](double llr) { return softplus(llr + theta); });
  return (pi * mean_mated + (1.0 - pi) * mean_nonmated) / std::numbers::ln2;
}

inline double perfect_privacy_ece_theta(double pi, double theta) {
  return (pi * softplus(-theta) + (1.0 - pi) * softplus(theta)) /
         std::numbers::ln2;
}

// Z(1+e) = e/6 - e^2/8 + e^3/10 + O(e^4); used for |e| <= 1e-3 where the
// truncation stays below 1e-13 and the closed form would cancel to noise.
inline double kernel_series(double e) {
  return e * (1.0 / 6.0 + e * (-0.125 + e * 0.1));
}

inline double kernel_exact(double x, double log_x) {
  const double d = x - 1.0;
  return ((x - 3.0) * d + 2.0 * log_x) / (4.0 * d * d);
}

}  // namespace detail

// Empirical cross-entropy (bits) of calibrated LLRs at the given prior.
inline double ece(const CalibratedLLRs& cal, Prior prior) {
  const auto mated = detail::group_values(cal.mated_llr);
  const auto nonmated = detail::group_values(cal.nonmated_llr);
  return detail::ece_grouped(mated, nonmated, prior.pi(), prior.log_odds());
}

// Cross-entropy when every LR equals one (zero evidence): the adversary
// learns nothing and the curve reduces to the binary entropy of the prior.
inline double perfect_privacy_ece(Prior prior) {
  return detail::perfect_privacy_ece_theta(prior.pi(), prior.log_odds());
}

// Per-score expected-disclosure kernel. Averaging it over mated LRs and
// reciprocal non-mated LRs integrates the gap between the zero-evidence and
// calibrated cross-entropy curves across all priors. The removable
// singularity at lr = 1 is bridged by a short series; the kernel increases
// monotonically to its limit 1/4.
inline double disclosure_kernel(double lr) {
  if (!(lr > 0.0)) throw Error("likelihood ratio must be positive");
  const double e = lr - 1.0;
  if (std::fabs(e) < 1e-3) return detail::kernel_series(e);
  if (lr > 1e18) return 0.25 - 0.5 / lr;
  return detail::kernel_exact(lr, std::log(lr));
}

// Same kernel parameterized by the natural-log LR; safe for any finite llr.
inline double disclosure_kernel_llr(double llr) {
  const double e = std::expm1(llr);
  if (std::fabs(e) < 1e-3) return detail::kernel_series(e);
  if (llr > 41.0) return 0.25 - 0.5 * std::exp(-llr);
  return detail::kernel_exact(e + 1.0, llr);
}

// Expected privacy disclosure in bits:
//   (<Z(a)>_mated + <Z(1/b)>_nonmated) / ln 2
// over likelihood ratios a, b. Zero for flat LLRs, 1/(2 ln 2) ~ 0.721 for
// perfectly separated classes. A negative result means the LLRs were not
// oracle-calibrated; the value is returned as computed and *miscalibrated is
// set when the caller provides it.
inline double d_ece_closed_form(const CalibratedLLRs& cal,
                                bool* miscalibrated = nullptr) {
  const auto mated = detail::group_values(cal.mated_llr);
  const auto nonmated = detail::group_values(cal.nonmated_llr);
  const double mean_mated = detail::weighted_mean(
      mated, [](double llr) { return disclosure_kernel_llr(llr); });
  const double mean_nonmated = detail::weighted_mean(
      nonmated, [](double llr) { return disclosure_kernel_llr(-llr); });
  const double bits = (mean_mated + mean_nonmated) / std::numbers::ln2;
  if (miscalibrated != nullptr) *miscalibrated = bits < 0.0;
  return bits;
}

// Quadrature cross-check for d_ece_closed_form: composite Simpson over
// pi in [1e-8, 1 - 1e-8] of (zero-evidence ECE - calibrated ECE). The
// integrand vanishes toward both endpoints, so the excluded tails contribute
// O(1e-15) bits, far below the agreement tolerances this oracle backs.
inline double d_ece_numeric(const CalibratedLLRs& cal, std::size_t n_points) {
  if (n_points < 64) throw Error("d_ece_numeric needs n_points >= 64");
  const auto mated = detail::group_values(cal.mated_llr);
  const auto nonmated = detail::group_values(cal.nonmated_llr);

  const auto integrand = [&](double pi) {
    const double theta = std::log(pi) - std::log1p(-pi);
    return detail::perfect_privacy_ece_theta(pi, theta) -
           detail::ece_grouped(mated, nonmated, pi, theta);
  };

  const double lo = 1e-8;
  const double hi = 1.0 - 1e-8;
  const std::size_t intervals = n_points + (n_points & 1);  // even count
  const double h = (hi - lo) / static_cast<double>(intervals);

  detail::CompensatedSum sum;
  sum.add(integrand(lo));
  sum.add(integrand(hi));
  for (std::size_t k = 1; k < intervals; ++k) {
    const double pi =
        lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(intervals));
    sum.add(((k & 1) ? 4.0 : 2.0) * integrand(pi));
  }
  return sum.value() * h / 3.0;
}

// Worst-case privacy disclosure: the largest absolute log-LR across both
// classes, reported in base 10.
inline double worst_case_llr(const CalibratedLLRs& cal) {
  if (cal.mated_llr.empty() || cal.nonmated_llr.empty()) {
    throw Error("empty LLR list");
  }
  double peak = 0.0;
  for (double llr : cal.mated_llr) peak = std::max(peak, std::fabs(llr));
  for (double llr : cal.nonmated_llr) peak = std::max(peak, std::fabs(llr));
  return peak / std::numbers::ln10;
}

// Band lookup for the worst-case magnitude. Zero is literal: only an exact
// 0 (all LRs equal to one) earns tag 0; anything above is at least A.
inline Tag categorical_tag(double log10_l) {
  if (!(log10_l >= 0.0)) {
    throw NegativeMagnitudeError(
        "worst-case magnitude must be a non-negative number");
  }
  if (log10_l == 0.0) return Tag::Zero;
  if (log10_l < 1.0) return Tag::A;
  if (log10_l < 2.0) return Tag::B;
  if (log10_l < 4.0) return Tag::C;
  if (log10_l < 5.0) return Tag::D;
  if (log10_l < 6.0) return Tag::E;
  return Tag::F;
}

// Goodness of the calibrated LLRs at the even prior:
//   (<log2(1 + 1/a)>_mated + <log2(1 + b)>_nonmated) / 2.
// Coincides with ece at pi = 1/2; kept as an independently computed contrast
// baseline and cross-check.
inline double cllr(const CalibratedLLRs& cal) {
  const auto mated = detail::group_values(cal.mated_llr);
  const auto nonmated = detail::group_values(cal.nonmated_llr);
  const double mean_mated = detail::weighted_mean(
      mated, [](double llr) { return detail::softplus(-llr); });
  const double mean_nonmated = detail::weighted_mean(
      nonmated, [](double llr) { return detail::softplus(llr); });
  return (0.5 * mean_mated + 0.5 * mean_nonmated) / std::numbers::ln2;
}

// Equal error rate on the convex hull of the ROC. The hull vertices fall out
// of the same isotonic machinery used for calibration (no dummies here); the
// EER is the hull's crossing with the miss = false-alarm diagonal, linearly
// interpolated between vertices.
inline double eer(const ScoreSet& scores) {
  std::vector<PooledScore> pooled;
  pooled.reserve(scores.mated().size() + scores.nonmated().size());
  for (std::size_t i = 0; i < scores.mated().size(); ++i) {
    pooled.push_back({scores.mated()[i], true, false, i});
  }
  for (std::size_t i = 0; i < scores.nonmated().size(); ++i) {
    pooled.push_back({scores.nonmated()[i], false, false, i});
  }
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const PooledScore& a, const PooledScore& b) {
                     return a.score < b.score;
                   });
  const auto blocks = pav_fit(pooled);

  const double n_mated = static_cast<double>(scores.mated().size());
  const double n_nonmated = static_cast<double>(scores.nonmated().size());

  // Hull vertices: thresholds at block boundaries, decide mated above.
  double prev_miss = 0.0;
  double prev_fa = 1.0;
  std::size_t cum_mated = 0;
  std::size_t cum_nonmated = 0;
  for (const auto& block : blocks) {
    cum_mated += block.n_mated;
    cum_nonmated += block.n_nonmated;
    const double miss = static_cast<double>(cum_mated) / n_mated;
    const double fa = 1.0 - static_cast<double>(cum_nonmated) / n_nonmated;
    if (miss >= fa) {
      const double d = (miss - prev_miss) - (fa - prev_fa);
      const double t = (prev_fa - prev_miss) / d;
      return prev_miss + t * (miss - prev_miss);
    }
    prev_miss = miss;
    prev_fa = fa;
  }
  return 1.0;  // unreachable: the final vertex is (fa = 0, miss = 1)
}

// Full assessment pipeline: oracle calibration, expected disclosure from the
// closed form, worst-case disclosure and its tag; Cllr and EER contrast
// baselines attached on request.
inline ZebraReport evaluate(const ScoreSet& scores, bool with_baselines = false) {
  const CalibratedLLRs cal = pav_calibrate(scores);
  ZebraReport report;
  report.source_id = scores.source_id();
  report.d_ece = d_ece_closed_form(cal);
  report.log10_l = worst_case_llr(cal);
  report.tag = categorical_tag(report.log10_l);
  if (with_baselines) {
    report.cllr = cllr(cal);
    report.eer = eer(scores);
  }
  return report;
}

}  // namespace zebra
