#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include <zebra/calibration.hpp>
#include <zebra/pav_oracle.hpp>
#include <zebra/types.hpp>

#include "support/test_helpers.hpp"

namespace {

std::vector<zebra::PooledScore> pooled_from_labels(const std::vector<int>& labels) {
  std::vector<zebra::PooledScore> pooled(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    pooled[i] = {static_cast<double>(i), labels[i] == 1, false,
                 zebra::PooledScore::npos};
  }
  return pooled;
}

}  // namespace

TEST_CASE("laplace_augment adds one dummy per class beyond the extremes") {
  const zebra::ScoreSet set({2.0}, {1.0}, "sys");
  const auto pooled = zebra::laplace_augment(set);
  REQUIRE(pooled.size() == 4);
  REQUIRE(pooled.front().is_dummy);
  REQUIRE(pooled.front().is_mated);
  REQUIRE(pooled.front().score < 1.0);
  REQUIRE(pooled.back().is_dummy);
  REQUIRE_FALSE(pooled.back().is_mated);
  REQUIRE(pooled.back().score > 2.0);
  REQUIRE(std::is_sorted(pooled.begin(), pooled.end(),
                         [](const auto& a, const auto& b) {
                           return a.score < b.score;
                         }));
}

TEST_CASE("laplace_augment handles a degenerate score range") {
  const zebra::ScoreSet set({5.0}, {5.0}, "sys");
  const auto pooled = zebra::laplace_augment(set);
  REQUIRE(pooled.size() == 4);
  REQUIRE(pooled.front().score == 4.0);  // delta = 1 when max == min
  REQUIRE(pooled.back().score == 6.0);
}

TEST_CASE("laplace_augment keeps dummies strictly outside huge score ranges") {
  const zebra::ScoreSet set({1e300}, {-1e300}, "sys");
  const auto pooled = zebra::laplace_augment(set);
  REQUIRE(pooled.front().is_dummy);
  REQUIRE(pooled.front().score < -1e300);
  REQUIRE(pooled.back().is_dummy);
  REQUIRE(pooled.back().score > 1e300);

  const auto cal = zebra::pav_calibrate(set);
  REQUIRE(std::isfinite(cal.mated_llr[0]));
  REQUIRE(std::isfinite(cal.nonmated_llr[0]));
}

TEST_CASE("laplace_augment pools every observation") {
  const zebra::ScoreSet set({0.0, 1.0, 2.0}, {-1.0, 0.5}, "sys");
  const auto pooled = zebra::laplace_augment(set);
  REQUIRE(pooled.size() == 7);
  REQUIRE(pooled.front().is_dummy);
  REQUIRE(pooled.back().is_dummy);
  for (std::size_t i = 1; i + 1 < pooled.size(); ++i) {
    REQUIRE_FALSE(pooled[i].is_dummy);
  }
}

TEST_CASE("brute-force oracle agrees with hand-worked merges") {
  SECTION("one violator pair collapses to a single block") {
    const auto fitted = zebra::pav_brute_force_oracle(pooled_from_labels({1, 0}));
    REQUIRE(fitted == std::vector<double>{0.5, 0.5});
  }
  SECTION("already isotonic labels stay untouched") {
    const auto fitted = zebra::pav_brute_force_oracle(pooled_from_labels({0, 1}));
    REQUIRE(fitted == std::vector<double>{0.0, 1.0});
  }
  SECTION("length cap") {
    std::vector<int> labels(15, 1);
    REQUIRE_THROWS_AS(zebra::pav_brute_force_oracle(pooled_from_labels(labels)),
                      zebra::TooLargeError);
  }
}

TEST_CASE("pav_fit matches the exhaustive oracle on an alternating pattern") {
  // labels 0,1,0,1: the oracle itself is the provenance of the expectation
  const auto pooled = pooled_from_labels({0, 1, 0, 1});
  const auto expected = zebra::pav_brute_force_oracle(pooled);
  const auto fitted = zebra::test::expand_blocks(zebra::pav_fit(pooled));
  REQUIRE(fitted == expected);
}

TEST_CASE("pav_fit equals the oracle on random pooled sequences") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    const auto pooled = zebra::test::random_pooled(rng, 12);
    const auto expected = zebra::pav_brute_force_oracle(pooled);
    const auto fitted = zebra::test::expand_blocks(zebra::pav_fit(pooled));
    REQUIRE(fitted == expected);
  }
}

TEST_CASE("pav_fit blocks partition the sequence with non-decreasing posteriors") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto set = zebra::test::random_score_set(rng, 3, 200);
    const auto pooled = zebra::laplace_augment(set);
    const auto blocks = zebra::pav_fit(pooled);
    std::size_t expected_start = 0;
    double prev_posterior = 0.0;
    for (const auto& block : blocks) {
      REQUIRE(block.start_index == expected_start);
      REQUIRE(block.end_index > block.start_index);
      REQUIRE(block.n_mated + block.n_nonmated ==
              block.end_index - block.start_index);
      REQUIRE(block.posterior >= prev_posterior);
      REQUIRE(block.posterior ==
              static_cast<double>(block.n_mated) /
                  static_cast<double>(block.n_mated + block.n_nonmated));
      // with dummies at both extremes no block can be single-class
      REQUIRE(block.n_mated > 0);
      REQUIRE(block.n_nonmated > 0);
      expected_start = block.end_index;
      prev_posterior = block.posterior;
    }
    REQUIRE(expected_start == pooled.size());
  }
}

TEST_CASE("pav_fit rejects unsorted input") {
  std::vector<zebra::PooledScore> pooled = {
      {1.0, true, false, 0}, {0.0, false, false, 0}};
  REQUIRE_THROWS_AS(zebra::pav_fit(pooled), zebra::Error);
}

TEST_CASE("a single separated pair carries no usable evidence") {
  // dummies turn the sorted labels into A,B,A,B; the oracle says both
  // observed scores land in posterior-0.5 blocks, hence LLR 0
  const zebra::ScoreSet set({3.0}, {1.0}, "sys");
  const auto pooled = zebra::laplace_augment(set);
  const auto expected = zebra::pav_brute_force_oracle(pooled);
  const auto fitted = zebra::test::expand_blocks(zebra::pav_fit(pooled));
  REQUIRE(fitted == expected);

  const auto cal = zebra::pav_calibrate(set);
  REQUIRE(cal.mated_llr == std::vector<double>{0.0});
  REQUIRE(cal.nonmated_llr == std::vector<double>{0.0});
}

TEST_CASE("fully overlapped scores calibrate to zero LLRs") {
  const zebra::ScoreSet tied({1.0}, {1.0}, "sys");
  const auto cal = zebra::pav_calibrate(tied);
  REQUIRE(cal.mated_llr == std::vector<double>{0.0});
  REQUIRE(cal.nonmated_llr == std::vector<double>{0.0});
  REQUIRE(cal.n_mated == 1);
  REQUIRE(cal.n_nonmated == 1);
}

TEST_CASE("calibrated LLRs are finite and non-decreasing in the score") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 60; ++rep) {
    const auto set = zebra::test::random_score_set(rng, 2, 300);
    const auto cal = zebra::pav_calibrate(set);
    REQUIRE(cal.mated_llr.size() == set.mated().size());
    REQUIRE(cal.nonmated_llr.size() == set.nonmated().size());

    std::vector<std::pair<double, double>> by_score;
    for (std::size_t i = 0; i < set.mated().size(); ++i) {
      REQUIRE(std::isfinite(cal.mated_llr[i]));
      by_score.emplace_back(set.mated()[i], cal.mated_llr[i]);
    }
    for (std::size_t i = 0; i < set.nonmated().size(); ++i) {
      REQUIRE(std::isfinite(cal.nonmated_llr[i]));
      by_score.emplace_back(set.nonmated()[i], cal.nonmated_llr[i]);
    }
    std::sort(by_score.begin(), by_score.end());
    for (std::size_t i = 1; i < by_score.size(); ++i) {
      REQUIRE(by_score[i].second >= by_score[i - 1].second);
      if (by_score[i].first == by_score[i - 1].first) {
        REQUIRE(by_score[i].second == by_score[i - 1].second);  // tied scores
      }
    }
  }
}

TEST_CASE("calibration is invariant under input permutation") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const auto set = zebra::test::random_score_set(rng, 3, 150);
    auto mated = set.mated();
    auto nonmated = set.nonmated();
    std::shuffle(mated.begin(), mated.end(), rng);
    std::shuffle(nonmated.begin(), nonmated.end(), rng);
    const zebra::ScoreSet shuffled(mated, nonmated, set.source_id());

    const auto cal_a = zebra::pav_calibrate(set);
    const auto cal_b = zebra::pav_calibrate(shuffled);

    const auto assignments = [](const zebra::ScoreSet& s,
                                const zebra::CalibratedLLRs& c) {
      std::multimap<double, double> m;
      for (std::size_t i = 0; i < s.mated().size(); ++i) {
        m.emplace(s.mated()[i], c.mated_llr[i]);
      }
      for (std::size_t i = 0; i < s.nonmated().size(); ++i) {
        m.emplace(s.nonmated()[i], c.nonmated_llr[i]);
      }
      return m;
    };
    REQUIRE(assignments(set, cal_a) == assignments(shuffled, cal_b));
  }
}

TEST_CASE("strictly increasing score transforms leave LLRs unchanged") {
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const auto set = zebra::test::random_score_set(rng, 2, 200);
    auto mated = set.mated();
    auto nonmated = set.nonmated();
    for (double& s : mated) s = 2.0 * s + 1.0;
    for (double& s : nonmated) s = 2.0 * s + 1.0;
    const zebra::ScoreSet transformed(mated, nonmated, set.source_id());

    const auto cal_a = zebra::pav_calibrate(set);
    const auto cal_b = zebra::pav_calibrate(transformed);
    REQUIRE(cal_a.mated_llr == cal_b.mated_llr);
    REQUIRE(cal_a.nonmated_llr == cal_b.nonmated_llr);
  }
}
