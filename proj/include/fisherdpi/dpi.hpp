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
 * Randomized checks of the data-processing inequalities.
 *
 * Classical: raw outcomes x are pushed through a θ-independent stochastic
 * map Pr(y|x); the information carried by y never exceeds that carried by x.
 *
 * Quantum: a θ-independent channel E is applied to ρ(θ); the information
 * maximized over probes and measurements never exceeds the unprocessed
 * maximum. Both sides of that comparison come from the context optimizer,
 * so the tolerance there is the optimizer's (1e-3), not roundoff.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/fisher.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/optimize.hpp"
#include "fisherdpi/prior.hpp"
#include "fisherdpi/quantum.hpp"
#include "fisherdpi/random.hpp"

namespace fisherdpi {

inline constexpr double kClassicalDpiTol = 1e-9;
inline constexpr double kQuantumDpiTol = 1e-3;
inline constexpr double kSldMonotonicityTol = 1e-7;
inline constexpr double kDualIdentityTol = 1e-12;

/// Pr(y|x): column x is a distribution over outputs y.
class StochasticMap {
 public:
  StochasticMap(std::size_t outputs, std::size_t inputs, std::vector<double> column_major)
      : outputs_(outputs), inputs_(inputs), data_(std::move(column_major)) {
    if (outputs_ == 0 || inputs_ == 0 || data_.size() != outputs_ * inputs_) {
      throw Error(ErrorCode::DimensionMismatch, "stochastic map shape does not match its data");
    }
    for (std::size_t x = 0; x < inputs_; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < outputs_; ++y) {
        if (!((*this)(y, x) >= 0.0)) {
          throw Error(ErrorCode::InvalidArgument, "stochastic map has a negative entry");
        }
        sum += (*this)(y, x);
      }
      if (!(std::abs(sum - 1.0) <= 1e-12)) {
        throw Error(ErrorCode::InvalidArgument,
                    "column " + std::to_string(x) + " of stochastic map sums to " + std::to_string(sum));
      }
    }
  }

  static StochasticMap identity(std::size_t n) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return StochasticMap(n, n, std::move(d));
  }

  /// Output y = perm[x].
  static StochasticMap permutation(const std::vector<std::size_t>& perm) {
    const std::size_t n = perm.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x) d[x * n + perm.at(x)] = 1.0;
    return StochasticMap(n, n, std::move(d));
  }

  /// Every input mapped to the same output distribution.
  static StochasticMap constant(std::vector<double> distribution, std::size_t inputs) {
    const std::size_t m = distribution.size();
    std::vector<double> d;
    d.reserve(m * inputs);
    for (std::size_t x = 0; x < inputs; ++x) d.insert(d.end(), distribution.begin(), distribution.end());
    return StochasticMap(m, inputs, std::move(d));
  }

  /// Uniform(0,1) entries, columns normalized.
  static StochasticMap random(std::size_t outputs, std::size_t inputs, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> d(outputs * inputs);
    for (std::size_t x = 0; x < inputs; ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < outputs; ++y) sum += d[x * outputs + y] = u(rng);
      for (std::size_t y = 0; y < outputs; ++y) d[x * outputs + y] /= sum;
    }
    return StochasticMap(outputs, inputs, std::move(d));
  }

  /// Identity plus a leakage of `eps` spread over the other outputs; a
  /// detector-confusion model.
  static StochasticMap confusion(std::size_t n, double eps) {
    std::vector<double> d(n * n, eps / static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0 - eps;
    return StochasticMap(n, n, std::move(d));
  }

  std::size_t outputs() const noexcept { return outputs_; }
  std::size_t inputs() const noexcept { return inputs_; }
  double operator()(std::size_t y, std::size_t x) const noexcept { return data_[x * outputs_ + y]; }

  /// Pushes per-outcome jets through the map; p, ∂p and ∂²p are all linear.
  std::vector<OutcomeJet> apply(const std::vector<OutcomeJet>& in) const {
    if (in.size() != inputs_) {
      throw Error(ErrorCode::DimensionMismatch, "stochastic map expects " + std::to_string(inputs_) +
                                                    " inputs, got " + std::to_string(in.size()));
    }
    std::vector<OutcomeJet> out(outputs_);
    for (std::size_t y = 0; y < outputs_; ++y)
      for (std::size_t x = 0; x < inputs_; ++x) {
        const double t = (*this)(y, x);
        out[y].p += t * in[x].p;
        out[y].dp += t * in[x].dp;
        out[y].d2p += t * in[x].d2p;
      }
    return out;
  }

 private:
  std::size_t outputs_;
  std::size_t inputs_;
  std::vector<double> data_;
};

struct PostprocessedInformation {
  double i_x = 0.0;
  double i_y = 0.0;
};

inline PostprocessedInformation postprocess_likelihood(const ParameterizedModel& model, const Povm& povm,
                                                       double theta, const StochasticMap& map) {
  if (map.inputs() != povm.size()) {
    throw Error(ErrorCode::DimensionMismatch, "stochastic map columns do not match POVM outcomes");
  }
  const auto raw = outcome_jets(model.jet_at(theta), povm);
  const auto processed = map.apply(raw);
  return {fisher_from_jets(raw, SingularPolicy::Throw, theta),
          fisher_from_jets(processed, SingularPolicy::Throw, theta)};
}

/// Prior-averaged counterpart: (J_x, J_y).
inline PostprocessedInformation postprocess_bayesian(const ParameterizedModel& model, const Povm& povm,
                                                     const PriorGrid& prior, const StochasticMap& map) {
  PostprocessedInformation out;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    const auto pi = postprocess_likelihood(model, povm, prior.nodes()[i], map);
    out.i_x += prior.weights()[i] * pi.i_x;
    out.i_y += prior.weights()[i] * pi.i_y;
  }
  return out;
}

/// Isometry V: C^d → C^{d·k} from a Gaussian matrix with orthonormalized
/// columns, cut into k blocks K_j of size d×d; Σ K_j†K_j = V†V = 1.
inline KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed) {
  if (dim == 0 || kraus_count == 0 || dim * kraus_count > kMaxDim) {
    throw Error(ErrorCode::InvalidArgument, "random_channel needs 1 <= dim*kraus_count <= 64");
  }
  Rng rng = make_rng(seed);
  const auto iso = random_isometry(dim * kraus_count, dim, rng);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t j = 0; j < kraus_count; ++j) {
    ComplexMatrix k(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) k(r, c) = iso[(j * dim + r) * dim + c];
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus));
}

enum class MapKind { Random, Permutation, Identity, Constant };

inline const char* map_kind_name(MapKind k) noexcept {
  switch (k) {
    case MapKind::Random: return "random";
    case MapKind::Permutation: return "permutation";
    case MapKind::Identity: return "identity";
    case MapKind::Constant: return "constant";
  }
  return "unknown";
}

struct DpiTrialReport {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string kind;
  double i_before = 0.0;
  double i_after = 0.0;
  double gap = 0.0;
  bool violated = false;
  /// Classical trials: prior-averaged informations.
  std::optional<double> j_before;
  std::optional<double> j_after;
  /// Quantum trials: SLD values at the optimizer's probe and the largest
  /// Heisenberg-picture mismatch found.
  std::optional<double> sld_before;
  std::optional<double> sld_after;
  std::optional<double> dual_identity_error;
  std::string detail;
};

struct ClassicalDpiOptions {
  /// 0 picks qubit or qutrit per trial.
  std::size_t dim = 0;
  std::optional<MapKind> forced_map;
};

/// One classical trial. Every 10th trial (offset 3) uses a permutation and
/// every 10th (offset 7) a constant map; the rest are random maps with 2–4
/// outputs. Permutation and identity trials must also reach equality.
inline DpiTrialReport classical_dpi_trial(std::uint64_t seed, std::size_t index,
                                          const ClassicalDpiOptions& options = {}) {
  Rng rng = make_rng(seed, index);
  std::uniform_int_distribution<int> pick_dim(2, 3);
  const std::size_t dim = options.dim != 0 ? options.dim : static_cast<std::size_t>(pick_dim(rng));
  const auto model = make_unitary_family(random_hermitian(dim, rng), random_density_matrix(dim, rng));
  const auto povm = random_projective_povm(dim, rng);
  std::uniform_real_distribution<double> pick_theta(0.2, 1.2);
  const double theta = pick_theta(rng);

  MapKind kind = MapKind::Random;
  if (index % 10 == 3) kind = MapKind::Permutation;
  if (index % 10 == 7) kind = MapKind::Constant;
  if (options.forced_map) kind = *options.forced_map;

  const std::size_t n = povm.size();
  std::optional<StochasticMap> map;
  switch (kind) {
    case MapKind::Identity: map = StochasticMap::identity(n); break;
    case MapKind::Permutation: {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      map = StochasticMap::permutation(perm);
      break;
    }
    case MapKind::Constant: {
      const auto col = StochasticMap::random(3, 1, rng);
      map = StochasticMap::constant({col(0, 0), col(1, 0), col(2, 0)}, n);
      break;
    }
    case MapKind::Random: {
      std::uniform_int_distribution<std::size_t> outputs(2, 4);
      map = StochasticMap::random(outputs(rng), n, rng);
      break;
    }
  }

  const auto prior = PriorGrid::uniform(0.2, 1.2);
  const auto local = postprocess_likelihood(model, povm, theta, *map);
  const auto averaged = postprocess_bayesian(model, povm, prior, *map);

  DpiTrialReport r;
  r.index = index;
  r.seed = seed;
  r.kind = map_kind_name(kind);
  r.i_before = local.i_x;
  r.i_after = local.i_y;
  r.gap = local.i_x - local.i_y;
  r.j_before = averaged.i_x;
  r.j_after = averaged.i_y;
  const bool inequality_holds = local.i_y <= local.i_x + kClassicalDpiTol &&
                                averaged.i_y <= averaged.i_x + kClassicalDpiTol;
  const bool equality_expected = kind == MapKind::Permutation || kind == MapKind::Identity;
  const bool equality_holds = std::abs(r.gap) <= kClassicalDpiTol &&
                              std::abs(averaged.i_x - averaged.i_y) <= kClassicalDpiTol;
  r.violated = !inequality_holds || (equality_expected && !equality_holds);
  r.detail = "dim=" + std::to_string(dim) + " theta=" + std::to_string(theta);
  return r;
}

inline std::vector<DpiTrialReport> classical_dpi_suite(std::size_t trials, std::uint64_t seed,
                                                       const ClassicalDpiOptions& options = {}) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::vector<DpiTrialReport> out;
  out.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) out.push_back(classical_dpi_trial(seed, i, options));
  return out;
}

enum class ChannelKind { Random, Identity, Depolarizing };

struct QuantumDpiOptions {
  std::size_t dim = 2;
  std::size_t kraus_count = 2;
  ChannelKind channel = ChannelKind::Random;
  OptimizeOptions optimizer{};
};

namespace detail {

inline double dual_identity_error(const KrausChannel& channel, const DensityMatrix& rho,
                                  const Povm& povm) {
  const auto dual = dual_channel(channel);
  const ComplexMatrix out = channel.apply(rho.matrix());
  double worst = 0.0;
  for (const auto& e : povm.effects()) {
    const Complex lhs = trace_product(out, e);
    const Complex rhs = trace_product(rho.matrix(), dual.apply(e));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace detail

/// One quantum trial: random generator, random channel, both maxima found by
/// the context optimizer, plus the dual-channel identity and SLD
/// monotonicity at the probe that maximized the processed information.
inline DpiTrialReport quantum_dpi_trial(std::uint64_t seed, std::size_t index,
                                        const QuantumDpiOptions& options = {}) {
  const std::size_t dim = options.dim;
  if (dim < 2 || dim > 4) throw Error(ErrorCode::InvalidArgument, "quantum DPI suite supports dim 2..4");
  if (options.kraus_count < 1) throw Error(ErrorCode::InvalidArgument, "kraus_count must be >= 1");
  Rng rng = make_rng(seed, index);
  const auto generator = random_hermitian(dim, rng);
  const auto probe = random_pure_state(dim, rng);
  std::uniform_real_distribution<double> pick_theta(0.0, std::numbers::pi);
  const double theta = pick_theta(rng);
  const std::uint64_t channel_seed = rng();
  const std::uint64_t optimizer_seed = rng();

  KrausChannel channel = KrausChannel::identity(dim);
  std::string kind = "random";
  switch (options.channel) {
    case ChannelKind::Random: channel = random_channel(dim, options.kraus_count, channel_seed); break;
    case ChannelKind::Identity: kind = "identity"; break;
    case ChannelKind::Depolarizing:
      if (dim != 2) throw Error(ErrorCode::InvalidArgument, "depolarizing channel is qubit-only");
      channel = depolarizing_channel(1.0);
      kind = "depolarizing";
      break;
  }

  const auto bare = make_unitary_family(generator, probe);
  const auto processed = compose(bare, channel, Placement::Post);
  OptimizeOptions opt = options.optimizer;
  opt.seed = optimizer_seed;
  const auto before = maximize_fisher(bare, ContextSpace::unrestricted(dim), theta, opt);
  const auto after = maximize_fisher(processed, ContextSpace::unrestricted(dim), theta, opt);

  const auto& state = after.best_state;
  const double sld_before = sld_solve(bare.with_initial_state(state), theta).qfi;
  const double sld_after = sld_solve(processed.with_initial_state(state), theta).qfi;
  const double dual_err =
      detail::dual_identity_error(channel, bare.with_initial_state(state).state_at(theta), after.best_povm);

  DpiTrialReport r;
  r.index = index;
  r.seed = seed;
  r.kind = kind;
  r.i_before = before.best_value;
  r.i_after = after.best_value;
  r.gap = before.best_value - after.best_value;
  r.sld_before = sld_before;
  r.sld_after = sld_after;
  r.dual_identity_error = dual_err;
  r.violated = after.best_value > before.best_value + kQuantumDpiTol ||
               sld_after > sld_before + kSldMonotonicityTol || dual_err > kDualIdentityTol;
  r.detail = "dim=" + std::to_string(dim) + " kraus=" + std::to_string(channel.kraus().size()) +
             " theta=" + std::to_string(theta);
  return r;
}

inline std::vector<DpiTrialReport> quantum_dpi_suite(std::size_t trials, std::uint64_t seed,
                                                     const QuantumDpiOptions& options = {}) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::vector<DpiTrialReport> out;
  out.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) out.push_back(quantum_dpi_trial(seed, i, options));
  return out;
}

inline std::size_t count_violations(const std::vector<DpiTrialReport>& reports) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.violated; }));
}

}  // namespace fisherdpi
