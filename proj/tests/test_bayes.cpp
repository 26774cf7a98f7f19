// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fisherdpi/bayes.hpp"
#include "fisherdpi/random.hpp"

namespace fisherdpi {
namespace {

constexpr double kPi = std::numbers::pi;

PriorGrid point_mass_at(double theta) {
  return PriorGrid({theta - 0.1, theta, theta + 0.1}, {0.0, 1.0, 0.0}, "point");
}

// 10⁶-node midpoint rule for ∫θ·f / ∫f on [a, b].
template <typename F>
double reference_mean(F&& f, double a, double b) {
  const int n = 1'000'000;
  const double h = (b - a) / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = a + (i + 0.5) * h;
    num += t * f(t);
    den += f(t);
  }
  return num / den;
}

struct RandomConfig {
  ParameterizedModel model;
  Povm povm;
};

RandomConfig random_config(Rng& rng) {
  const std::size_t dim = std::uniform_int_distribution<int>(2, 3)(rng);
  const auto g = random_hermitian(dim, rng);
  auto model = make_unitary_family(g, random_pure_state(dim, rng));
  return {model, random_povm(dim, 2 + dim, rng)};
}

TEST(Prior, UniformGridMoments) {
  const auto prior = PriorGrid::uniform(0.0, 1.0);
  EXPECT_EQ(prior.size(), kDefaultGridNodes);
  EXPECT_NEAR(prior.mean(), 0.5, 1e-14);
  EXPECT_NEAR(prior.variance(), 1.0 / 12.0, 1e-12);
  // Even node counts close with a 3/8 panel and stay exact.
  EXPECT_NEAR(PriorGrid::uniform(0.0, 1.0, 200).variance(), 1.0 / 12.0, 1e-12);
}

TEST(Prior, ParseSpecs) {
  EXPECT_NEAR(PriorGrid::parse("uniform:0,1").variance(), 1.0 / 12.0, 1e-12);
  const auto g = PriorGrid::parse("gauss:0.5,0.1,-0.5,1.5", 401);
  EXPECT_NEAR(g.mean(), 0.5, 1e-10);
  EXPECT_NEAR(g.variance(), 0.01, 1e-8);
  ASSERT_TRUE(g.prior_information().has_value());
  EXPECT_NEAR(*g.prior_information(), 100.0, 1e-4);
  for (const char* bad : {"uniform", "uniform:1", "uniform:1,0", "gauss:0,1,2", "beta:1,2", "uniform:a,b"}) {
    try {
      PriorGrid::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}

TEST(Prior, RejectsInvalidGrids) {
  EXPECT_THROW(PriorGrid({0.0, 1.0}, {0.5, 0.5}), Error);
  EXPECT_THROW(PriorGrid({0.0, 1.0, 0.5}, {0.3, 0.3, 0.4}), Error);
  EXPECT_THROW(PriorGrid({0.0, 0.5, 1.0}, {0.3, 0.3, 0.3}), Error);
}

TEST(Posterior, UninformativeMeasurementKeepsPrior) {
  const auto prior = PriorGrid::uniform(0.0, 1.0);
  for (int label : {0, 1}) {
    const auto post = posterior(prior, sigma_z_rotation_model(), computational_basis_povm(2), label);
    EXPECT_NEAR(post.evidence(), 0.5, 1e-12);
    for (std::size_t i = 0; i < prior.size(); ++i) EXPECT_NEAR(post.weights()[i], prior.weights()[i], 1e-14);
    EXPECT_NEAR(bayes_estimator(post), 0.5, 1e-12);
  }
}

TEST(Posterior, PlusOutcomeFollowsSquaredCosine) {
  const auto prior = PriorGrid::uniform(0.0, kPi);
  const auto post = posterior(prior, sigma_z_rotation_model(), sigma_x_povm(), 0);
  std::vector<double> oracle(prior.size());
  double total = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const double c = std::cos(prior.nodes()[i]);
    oracle[i] = c * c * prior.weights()[i];
    total += oracle[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) worst = std::max(worst, std::abs(post.weights()[i] - oracle[i] / total));
  EXPECT_LT(worst, 1e-8);
  EXPECT_NEAR(post.evidence(), 0.5, 1e-10);
  EXPECT_NEAR(bayes_estimator(post), kPi / 2.0, 1e-12);
}

TEST(Posterior, HalfIntervalMeanMatchesReferenceQuadrature) {
  const auto prior = PriorGrid::uniform(0.0, kPi / 2.0);
  const auto post = posterior(prior, sigma_z_rotation_model(), sigma_x_povm(), 0);
  const double reference = reference_mean([](double t) { return std::cos(t) * std::cos(t); }, 0.0, kPi / 2.0);
  EXPECT_NEAR(reference, kPi / 4.0 - 1.0 / kPi, 1e-11);
  EXPECT_NEAR(bayes_estimator(post), reference, 1e-8);
}

TEST(Posterior, PointMassPriorIgnoresOutcome) {
  const auto prior = point_mass_at(0.4);
  const auto plus = posterior(prior, sigma_z_rotation_model(), sigma_x_povm(), 0);
  const auto minus = posterior(prior, sigma_z_rotation_model(), sigma_x_povm(), 1);
  EXPECT_EQ(plus.weights(), minus.weights());
  EXPECT_DOUBLE_EQ(bayes_estimator(plus), 0.4);
}

TEST(Posterior, ZeroEvidenceIsReported) {
  // At θ = 0 the σ_x readout of the rotated |+⟩ never yields "−".
  try {
    posterior(point_mass_at(0.0), sigma_z_rotation_model(), sigma_x_povm(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroEvidence);
  }
}

TEST(BayesRisk, UninformativeMeasurementGivesPriorVariance) {
  const auto prior = PriorGrid::uniform(0.0, 1.0);
  EXPECT_NEAR(bayes_risk(prior, sigma_z_rotation_model(), computational_basis_povm(2)), 1.0 / 12.0, 1e-6);
}

TEST(BayesRisk, PointMassPriorHasZeroRisk) {
  EXPECT_NEAR(bayes_risk(point_mass_at(0.7), sigma_z_rotation_model(), sigma_x_povm()), 0.0, 1e-15);
}

TEST(BayesRisk, SymmetricHalfTurnPriorLearnsNothingOnAverage) {
  // Both posteriors are symmetric about π/2, so both estimates equal the
  // prior mean and the risk equals the prior variance (π²/12 in the limit).
  const auto prior = PriorGrid::uniform(0.0, kPi);
  const auto br = bayes_risk_breakdown(prior, sigma_z_rotation_model(), sigma_x_povm());
  EXPECT_NEAR(br.estimates[0], kPi / 2.0, 1e-12);
  EXPECT_NEAR(br.estimates[1], kPi / 2.0, 1e-12);
  EXPECT_NEAR(br.expected_posterior_variance, prior.variance(), 1e-12);
  EXPECT_NEAR(prior.variance(), kPi * kPi / 12.0, 1e-10);
}

TEST(BayesRisk, MonteCarloOracle) {
  // Quarter-turn prior, where the readout is informative.
  const auto prior = PriorGrid::uniform(0.0, kPi / 2.0, 401);
  const auto br = bayes_risk_breakdown(prior, sigma_z_rotation_model(), sigma_x_povm());
  EXPECT_LT(br.expected_posterior_variance, prior.variance() - 0.01);

  Rng rng = make_rng(51);
  std::uniform_real_distribution<double> theta_dist(0.0, kPi / 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int samples = 100'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double theta = theta_dist(rng);
    const double c = std::cos(theta);
    const int x = unit(rng) < c * c ? 0 : 1;
    const double err = theta - br.estimates[static_cast<std::size_t>(x)];
    sum += err * err;
    sum_sq += err * err * err * err;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  EXPECT_NEAR(br.expected_posterior_variance, mean, 3.0 * se);
}

TEST(BayesRisk, RouteAgreementOptimalityAndMonotonicity) {
  double worst_route = 0.0, worst_gain = -1.0, worst_excess = -1.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_rng(52, static_cast<std::uint64_t>(i));
    const auto cfg = random_config(rng);
    const double a = std::uniform_real_distribution<double>(-2.0, 1.0)(rng);
    const double b = a + std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    const auto prior = i % 2 == 0 ? PriorGrid::uniform(a, b)
                                  : PriorGrid::gaussian((a + b) / 2.0, (b - a) / 4.0, a, b);
    const LikelihoodTable table(prior, cfg.model, cfg.povm);
    const auto br = bayes_risk_breakdown(prior, cfg.model, cfg.povm);
    worst_route = std::max(worst_route, std::abs(br.direct - br.expected_posterior_variance));
    worst_excess = std::max(worst_excess, br.expected_posterior_variance - prior.variance());

    const std::size_t x = static_cast<std::size_t>(i) % cfg.povm.size();
    if (std::isnan(br.estimates[x])) continue;
    auto perturbed = br.estimates;
    perturbed[x] += 0.01;
    worst_gain = std::max(worst_gain, br.direct - risk_of_estimator(prior, table, perturbed));
  }
  EXPECT_LT(worst_route, 1e-10);
  EXPECT_LE(worst_gain, 1e-12);
  EXPECT_LE(worst_excess, 1e-10);
}

TEST(Bcrb, UninformativeMeasurementIsVacuous) {
  const auto check = check_bcrb(PriorGrid::uniform(0.0, 1.0), sigma_z_rotation_model(), computational_basis_povm(2));
  EXPECT_EQ(check.j, 0.0);
  EXPECT_TRUE(check.vacuous);
  EXPECT_FALSE(check.satisfied);
}

TEST(Bcrb, NarrowUniformPriorBeatsInverseInformation) {
  // A prior of width 0.1 already has variance 1/1200, far below 1/J = 1/4;
  // the inverse-information form ignores what the prior contributes.
  const auto prior = PriorGrid::uniform(0.7, 0.8);
  const auto single = check_bcrb(prior, sigma_z_rotation_model(1), sigma_x_povm());
  const auto double_pass = check_bcrb(prior, sigma_z_rotation_model(2), sigma_x_povm());
  EXPECT_NEAR(single.j, 4.0, 1e-8);
  EXPECT_NEAR(single.bound, 0.25, 1e-8);
  EXPECT_NEAR(double_pass.bound, 1.0 / 16.0, 1e-8);
  EXPECT_LT(single.risk, prior.variance());
  EXPECT_FALSE(single.satisfied);
  EXPECT_LT(double_pass.risk, single.risk);
  ASSERT_TRUE(single.van_trees_satisfied.has_value());
  EXPECT_TRUE(*single.van_trees_satisfied);
}

TEST(Bcrb, WidePriorSatisfiesInverseInformation) {
  // One-shot risk on a wide prior stays far above 1/J.
  const auto check = check_bcrb(PriorGrid::uniform(-3.0, 3.0, 401), sigma_z_rotation_model(), sigma_x_povm());
  EXPECT_FALSE(check.vacuous);
  EXPECT_TRUE(check.satisfied);
}

TEST(Bcrb, VanTreesFormHoldsForGaussianPriors) {
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_rng(53, static_cast<std::uint64_t>(i));
    const auto cfg = random_config(rng);
    const double mu = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const double sigma = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    const auto prior = PriorGrid::gaussian(mu, sigma, mu - 7.0 * sigma, mu + 7.0 * sigma, 401);
    const auto check = check_bcrb(prior, cfg.model, cfg.povm);
    ASSERT_TRUE(check.van_trees_bound.has_value());
    EXPECT_TRUE(*check.van_trees_satisfied) << "config " << i << " risk " << check.risk << " bound "
                                            << *check.van_trees_bound;
  }
}

TEST(Bcrb, TruncatedGaussianHasNoPriorInformation) {
  EXPECT_FALSE(PriorGrid::gaussian(0.0, 0.5, -1.0, 1.0).prior_information().has_value());
  const auto wide = PriorGrid::gaussian(0.0, 0.1, -0.6, 0.6, 401).prior_information();
  ASSERT_TRUE(wide.has_value());
  EXPECT_NEAR(*wide, 100.0, 1e-4);
  EXPECT_FALSE(check_bcrb(PriorGrid::gaussian(0.0, 0.5, -1.0, 1.0), sigma_z_rotation_model(), sigma_x_povm())
                   .van_trees_bound.has_value());
}

}  // namespace
}  // namespace fisherdpi
