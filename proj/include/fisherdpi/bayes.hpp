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

/**
 * @file
 * Grid Bayesian estimation under squared-error loss: posteriors, the
 * posterior-mean estimator, Bayes risk, and the Bayesian Cramér–Rao check.
 * All quantities are exact sums over the prior grid and the outcome set.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/fisher.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/prior.hpp"
#include "fisherdpi/quantum.hpp"

namespace fisherdpi {

inline constexpr double kMinEvidence = 1e-300;
inline constexpr double kBcrbTol = 1e-9;

class PosteriorGrid {
 public:
  PosteriorGrid(std::vector<double> nodes, std::vector<double> weights, int outcome, double evidence)
      : nodes_(std::move(nodes)), weights_(std::move(weights)), outcome_(outcome), evidence_(evidence) {}

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  int outcome() const noexcept { return outcome_; }
  /// Pr(x; C), the marginal probability of this outcome.
  double evidence() const noexcept { return evidence_; }

  double mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) m += weights_[i] * nodes_[i];
    return m;
  }
  double variance() const noexcept {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) v += weights_[i] * (nodes_[i] - m) * (nodes_[i] - m);
    return v;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  int outcome_;
  double evidence_;
};

/// Pr(x | θ_i) for every grid node (rows) and outcome (columns).
class LikelihoodTable {
 public:
  LikelihoodTable(const PriorGrid& prior, const ParameterizedModel& model, const Povm& povm)
      : outcomes_(povm.size()), values_(prior.size() * povm.size()) {
    if (model.dim() != povm.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "model and POVM differ in dimension");
    }
    for (std::size_t i = 0; i < prior.size(); ++i) {
      const auto p = born_probabilities(model.state_at(prior.nodes()[i]), povm);
      for (std::size_t x = 0; x < outcomes_; ++x) values_[i * outcomes_ + x] = p[x];
    }
  }

  std::size_t outcomes() const noexcept { return outcomes_; }
  double operator()(std::size_t node, std::size_t outcome) const noexcept {
    return values_[node * outcomes_ + outcome];
  }

 private:
  std::size_t outcomes_;
  std::vector<double> values_;
};

namespace detail {

inline std::optional<PosteriorGrid> posterior_from_table(const PriorGrid& prior,
                                                         const LikelihoodTable& table,
                                                         std::size_t x, int label) {
  std::vector<double> w(prior.size());
  double evidence = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    w[i] = table(i, x) * prior.weights()[i];
    evidence += w[i];
  }
  if (!(evidence > kMinEvidence)) return std::nullopt;
  for (auto& wi : w) wi /= evidence;
  return PosteriorGrid(prior.nodes(), std::move(w), label, evidence);
}

}  // namespace detail

inline PosteriorGrid posterior(const PriorGrid& prior, const ParameterizedModel& model,
                               const Povm& povm, int outcome) {
  const std::size_t x = povm.index_of(outcome);
  const LikelihoodTable table(prior, model, povm);
  auto post = detail::posterior_from_table(prior, table, x, outcome);
  if (!post) {
    throw Error(ErrorCode::ZeroEvidence,
                "outcome " + std::to_string(outcome) + " has zero marginal probability");
  }
  return *std::move(post);
}

/// Posterior mean: the minimizer of expected squared error.
inline double bayes_estimator(const PosteriorGrid& post) { return post.mean(); }

/// Both routes to the Bayes risk of the posterior-mean estimator.
struct BayesRiskBreakdown {
  double expected_posterior_variance = 0.0;  ///< Σ_x Pr(x)·Var[θ | x]
  double direct = 0.0;                       ///< E_θ E_{x|θ}[(θ − θ̂(x))²]
  std::vector<double> estimates;             ///< θ̂ per outcome index (NaN if impossible)
  std::vector<double> evidence;              ///< Pr(x) per outcome index
};

/// E_θ E_{x|θ}[(θ − estimates[x])²] for an arbitrary estimator; outcomes with
/// zero evidence carry no weight.
inline double risk_of_estimator(const PriorGrid& prior, const LikelihoodTable& table,
                                std::span<const double> estimates) {
  double r = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    double inner = 0.0;
    for (std::size_t x = 0; x < table.outcomes(); ++x) {
      const double pxt = table(i, x);
      if (pxt == 0.0 || std::isnan(estimates[x])) continue;
      const double err = prior.nodes()[i] - estimates[x];
      inner += pxt * err * err;
    }
    r += prior.weights()[i] * inner;
  }
  return r;
}

inline BayesRiskBreakdown bayes_risk_breakdown(const PriorGrid& prior, const ParameterizedModel& model,
                                               const Povm& povm) {
  const LikelihoodTable table(prior, model, povm);
  BayesRiskBreakdown out;
  out.estimates.assign(povm.size(), std::numeric_limits<double>::quiet_NaN());
  out.evidence.assign(povm.size(), 0.0);
  for (std::size_t x = 0; x < povm.size(); ++x) {
    const auto post = detail::posterior_from_table(prior, table, x, povm.labels()[x]);
    if (!post) continue;
    out.estimates[x] = post->mean();
    out.evidence[x] = post->evidence();
    out.expected_posterior_variance += post->evidence() * post->variance();
  }
  out.direct = risk_of_estimator(prior, table, out.estimates);
  return out;
}

inline double bayes_risk(const PriorGrid& prior, const ParameterizedModel& model, const Povm& povm) {
  return bayes_risk_breakdown(prior, model, povm).expected_posterior_variance;
}

struct BcrbCheck {
  double risk = 0.0;
  double j = 0.0;
  /// 1/J, or +inf when J = 0.
  double bound = std::numeric_limits<double>::infinity();
  bool vacuous = true;
  /// risk ≥ 1/J − 1e-9 (false whenever the bound is vacuous).
  bool satisfied = false;
  /// 1/(J + J_prior) when the prior's own information is known; van Trees
  /// form, which includes the prior score term.
  std::optional<double> van_trees_bound;
  std::optional<bool> van_trees_satisfied;
};

inline BcrbCheck check_bcrb(const PriorGrid& prior, const ParameterizedModel& model, const Povm& povm) {
  BcrbCheck out;
  out.risk = bayes_risk(prior, model, povm);
  out.j = bayesian_information(model, povm, prior, SingularPolicy::Limit);
  if (out.j > 0.0) {
    out.bound = 1.0 / out.j;
    out.vacuous = false;
    out.satisfied = out.risk >= out.bound - kBcrbTol;
  }
  if (const auto jp = prior.prior_information()) {
    const double total = out.j + *jp;
    out.van_trees_bound = total > 0.0 ? 1.0 / total : std::numeric_limits<double>::infinity();
    out.van_trees_satisfied = out.risk >= *out.van_trees_bound - kBcrbTol;
  }
  return out;
}

}  // namespace fisherdpi
