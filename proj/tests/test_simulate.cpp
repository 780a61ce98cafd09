#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <zebra/calibration.hpp>
#include <zebra/metrics.hpp>
#include <zebra/simulate.hpp>

using Catch::Approx;

namespace {

zebra::ScoreSimSpec make_spec(double mu_mated, double mu_nonmated, double sigma,
                              std::size_t n, std::uint64_t seed) {
  zebra::ScoreSimSpec spec;
  spec.mu_mated = mu_mated;
  spec.mu_nonmated = mu_nonmated;
  spec.sigma = sigma;
  spec.n_mated = n;
  spec.n_nonmated = n;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("simulation is deterministic in the seed") {
  const auto spec = make_spec(2.0, 0.0, 1.0, 1000, 7);
  const auto a = zebra::simulate_scores(spec);
  const auto b = zebra::simulate_scores(spec);
  REQUIRE(a.mated() == b.mated());
  REQUIRE(a.nonmated() == b.nonmated());

  auto other = spec;
  other.seed = 8;
  const auto c = zebra::simulate_scores(other);
  REQUIRE(a.mated() != c.mated());
}

TEST_CASE("invalid specs are rejected") {
  REQUIRE_THROWS_AS(zebra::simulate_scores(make_spec(0, 0, 0.0, 10, 1)),
                    zebra::InvalidSpecError);
  REQUIRE_THROWS_AS(zebra::simulate_scores(make_spec(0, 0, -1.0, 10, 1)),
                    zebra::InvalidSpecError);
  auto spec = make_spec(0, 0, 1.0, 1, 1);
  spec.n_mated = 0;
  REQUIRE_THROWS_AS(zebra::simulate_scores(spec), zebra::InvalidSpecError);
  spec = make_spec(NAN, 0, 1.0, 10, 1);
  REQUIRE_THROWS_AS(zebra::simulate_scores(spec), zebra::InvalidSpecError);
}

TEST_CASE("analytic LLR of the generating model") {
  const auto spec = make_spec(2.0, 0.0, 1.0, 10, 1);
  REQUIRE(zebra::analytic_llr(spec, 1.0) == 0.0);   // midpoint of the means
  REQUIRE(zebra::analytic_llr(spec, 2.0) == 2.0);   // (2-0)/1 * (2-1)
  const auto flat = make_spec(0.0, 0.0, 2.0, 10, 1);
  REQUIRE(zebra::analytic_llr(flat, 5.0) == 0.0);
}

TEST_CASE("sampled moments track the requested parameters") {
  const auto spec = make_spec(2.0, -1.0, 0.5, 20000, 99);
  const auto scores = zebra::simulate_scores(spec);
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  REQUIRE(mean(scores.mated()) == Approx(2.0).margin(0.02));
  REQUIRE(mean(scores.nonmated()) == Approx(-1.0).margin(0.02));
}

TEST_CASE("equal means carry no evidence downstream") {
  const auto scores = zebra::simulate_scores(make_spec(0.0, 0.0, 1.0, 3000, 5));
  const auto report = zebra::evaluate(scores);
  REQUIRE(report.d_ece < 0.05);
}

TEST_CASE("calibrated LLRs increase with the analytic LLR") {
  const auto spec = make_spec(2.0, 0.0, 1.0, 400, 17);
  const auto scores = zebra::simulate_scores(spec);
  const auto cal = zebra::pav_calibrate(scores);

  std::vector<std::pair<double, double>> pairs;  // (analytic, calibrated)
  for (std::size_t i = 0; i < scores.mated().size(); ++i) {
    pairs.emplace_back(zebra::analytic_llr(spec, scores.mated()[i]),
                       cal.mated_llr[i]);
  }
  for (std::size_t i = 0; i < scores.nonmated().size(); ++i) {
    pairs.emplace_back(zebra::analytic_llr(spec, scores.nonmated()[i]),
                       cal.nonmated_llr[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    REQUIRE(pairs[i].second >= pairs[i - 1].second);
  }
}

TEST_CASE("pipeline disclosure converges toward the analytic disclosure") {
  const auto spec = make_spec(2.0, 0.0, 1.0, 20000, 2020);
  const auto scores = zebra::simulate_scores(spec);

  zebra::CalibratedLLRs analytic;
  for (double s : scores.mated()) {
    analytic.mated_llr.push_back(zebra::analytic_llr(spec, s));
  }
  for (double s : scores.nonmated()) {
    analytic.nonmated_llr.push_back(zebra::analytic_llr(spec, s));
  }
  analytic.n_mated = analytic.mated_llr.size();
  analytic.n_nonmated = analytic.nonmated_llr.size();

  const double d_pav = zebra::d_ece_closed_form(zebra::pav_calibrate(scores));
  const double d_analytic = zebra::d_ece_closed_form(analytic);
  REQUIRE(std::fabs(d_pav - d_analytic) < 0.02);
}
