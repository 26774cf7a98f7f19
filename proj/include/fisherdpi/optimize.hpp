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
 * Maximization of Fisher or Bayesian information over experimental
 * contexts (probe state, measurement).
 *
 * Probes are pure states parameterized by 2(d−1) hyperspherical angles and
 * phases; measurements are rank-one projective bases U = e^{−iH}, with the
 * Hermitian H spanned by d² reals. Either part can be pinned by a
 * restriction. The search is multi-start Nelder–Mead, each restart drawing
 * its start point from its own (seed, restart) stream so results depend only
 * on the seed and restart count.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/fisher.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/nelder_mead.hpp"
#include "fisherdpi/prior.hpp"
#include "fisherdpi/quantum.hpp"
#include "fisherdpi/random.hpp"

namespace fisherdpi {

/// The set C of allowed experiments. An unset state or POVM is searched
/// over; a set one is held fixed.
struct ContextSpace {
  std::size_t dim = 2;
  std::optional<DensityMatrix> fixed_state;
  std::optional<Povm> fixed_povm;
  std::string restriction_label = "unrestricted";

  static ContextSpace unrestricted(std::size_t dim) { return {dim, std::nullopt, std::nullopt, "unrestricted"}; }

  std::size_t state_parameter_count() const noexcept { return fixed_state ? 0 : 2 * (dim - 1); }
  std::size_t povm_parameter_count() const noexcept { return fixed_povm ? 0 : dim * dim; }
  std::size_t parameter_count() const noexcept {
    return state_parameter_count() + povm_parameter_count();
  }
};

struct OptimizationResult {
  double best_value = 0.0;
  DensityMatrix best_state;
  Povm best_povm;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  std::vector<double> best_parameters;
  /// Objective at each restart's starting point.
  std::vector<double> start_values;
};

struct OptimizeOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  NelderMeadOptions nelder_mead{};
};

/// Amplitudes (cos a1, sin a1 cos a2, …, sin a1…sin a_{d−1}) with phases
/// e^{iφ_k} on components 1..d−1. `params` = (a_1..a_{d−1}, φ_1..φ_{d−1}).
inline ComplexVector pure_state_amplitudes(std::span<const double> params, std::size_t dim) {
  ComplexVector psi(dim);
  double sin_prod = 1.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double mag = sin_prod;
    if (k + 1 < dim) {
      mag *= std::cos(params[k]);
      sin_prod *= std::sin(params[k]);
    }
    psi[k] = k == 0 ? Complex(mag) : std::polar(mag, params[dim - 1 + k - 1]);
  }
  return psi;
}

/// Hermitian H from d² reals: diagonal first, then (re, im) pairs of the
/// strict upper triangle.
inline ComplexMatrix hermitian_from_parameters(std::span<const double> params, std::size_t dim) {
  ComplexMatrix h(dim);
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = params[k++];
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      h(i, j) = Complex(params[k], params[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

inline ComplexMatrix basis_from_parameters(std::span<const double> params, std::size_t dim) {
  return unitary_exp(hermitian_from_parameters(params, dim), 1.0);
}

namespace detail {

class ContextObjective {
 public:
  ContextObjective(const ParameterizedModel& model, const ContextSpace& space)
      : model_(model), space_(space) {
    if (space.dim != model.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "context space and model differ in dimension");
    }
    if (space.fixed_state && space.fixed_state->dim() != space.dim) {
      throw Error(ErrorCode::DimensionMismatch, "fixed state has wrong dimension");
    }
    if (space.fixed_povm && space.fixed_povm->dim() != space.dim) {
      throw Error(ErrorCode::DimensionMismatch, "fixed POVM has wrong dimension");
    }
  }

  ComplexMatrix probe(std::span<const double> x) const {
    if (space_.fixed_state) return space_.fixed_state->matrix();
    const auto psi = pure_state_amplitudes(x.first(space_.state_parameter_count()), space_.dim);
    return ComplexMatrix::outer(psi, psi);
  }

  ComplexMatrix basis(std::span<const double> x) const {
    return basis_from_parameters(x.subspan(space_.state_parameter_count()), space_.dim);
  }

  double fisher_at(const ComplexMatrix& probe, const std::optional<ComplexMatrix>& basis,
                   double theta) const {
    // ∂²ρ only matters at vanishing outcomes; compute it on demand.
    auto jets = outcome_jets_for(model_.jet_from(probe, theta, false), basis, false);
    const bool vanishing = std::any_of(jets.begin(), jets.end(),
                                       [](const OutcomeJet& j) { return j.p <= kProbabilityFloor; });
    if (vanishing) jets = outcome_jets_for(model_.jet_from(probe, theta, true), basis, true);
    return fisher_from_jets(jets, SingularPolicy::Limit, theta);
  }

  /// Information at parameter vector x, averaged over `nodes` with `weights`.
  double operator()(std::span<const double> x, std::span<const double> nodes,
                    std::span<const double> weights) const {
    const ComplexMatrix rho0 = probe(x);
    std::optional<ComplexMatrix> u;
    if (!space_.fixed_povm) u = basis(x);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (weights[i] == 0.0) continue;
      total += weights[i] * fisher_at(rho0, u, nodes[i]);
    }
    return total;
  }

  DensityMatrix best_state(std::span<const double> x) const {
    if (space_.fixed_state) return *space_.fixed_state;
    return DensityMatrix(probe(x));
  }

  Povm best_povm(std::span<const double> x) const {
    if (space_.fixed_povm) return *space_.fixed_povm;
    return projective_povm(basis(x));
  }

 private:
  std::vector<OutcomeJet> outcome_jets_for(const ModelJet& jet, const std::optional<ComplexMatrix>& basis,
                                           bool second) const {
    if (!basis) {
      if (second) return outcome_jets(jet, *space_.fixed_povm);
      std::vector<OutcomeJet> jets(space_.fixed_povm->size());
      for (std::size_t k = 0; k < jets.size(); ++k) {
        const auto& e = space_.fixed_povm->effect(k);
        jets[k] = {std::max(trace_product(jet.rho, e).real(), 0.0), trace_product(jet.d1, e).real(), 0.0};
      }
      return jets;
    }
    std::vector<OutcomeJet> jets(space_.dim);
    ComplexVector u(space_.dim);
    for (std::size_t k = 0; k < space_.dim; ++k) {
      for (std::size_t i = 0; i < space_.dim; ++i) u[i] = (*basis)(i, k);
      jets[k] = {std::max(quadratic_form(jet.rho, u), 0.0), quadratic_form(jet.d1, u),
                 second ? quadratic_form(jet.d2, u) : 0.0};
    }
    return jets;
  }

  static double quadratic_form(const ComplexMatrix& a, const ComplexVector& u) {
    Complex s{};
    for (std::size_t i = 0; i < u.size(); ++i) {
      Complex row{};
      for (std::size_t j = 0; j < u.size(); ++j) row += a(i, j) * u[j];
      s += std::conj(u[i]) * row;
    }
    return s.real();
  }

  const ParameterizedModel& model_;
  const ContextSpace& space_;
};

inline OptimizationResult maximize_over_contexts(const ParameterizedModel& model,
                                                 const ContextSpace& space,
                                                 std::span<const double> nodes,
                                                 std::span<const double> weights,
                                                 const OptimizeOptions& options) {
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  const ContextObjective objective(model, space);
  const std::size_t n = space.parameter_count();
  const auto negated = [&](const std::vector<double>& x) { return -objective(x, nodes, weights); };

  std::vector<double> best_x;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> start_values;
  const int restarts = n == 0 ? 1 : options.restarts;
  for (int r = 0; r < restarts; ++r) {
    Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::vector<double> x0(n);
    for (auto& v : x0) v = angle(rng);
    start_values.push_back(objective(x0, nodes, weights));
    const auto res = nelder_mead(negated, x0, options.nelder_mead);
    // Ties keep the earliest restart.
    if (-res.value > best) {
      best = -res.value;
      best_x = res.x;
    }
  }

  OptimizationResult out{0.0, objective.best_state(best_x), objective.best_povm(best_x), restarts,
                         options.seed, best_x, std::move(start_values)};
  out.best_value = objective(best_x, nodes, weights);
  return out;
}

}  // namespace detail

/// max over the space of I(θ; C).
inline OptimizationResult maximize_fisher(const ParameterizedModel& model, const ContextSpace& space,
                                          double theta, const OptimizeOptions& options = {}) {
  const double node[] = {theta};
  const double weight[] = {1.0};
  return detail::maximize_over_contexts(model, space, node, weight, options);
}

/// max over the space of J(C) = Σ_i w_i·I(θ_i; C).
inline OptimizationResult maximize_bayesian(const ParameterizedModel& model, const ContextSpace& space,
                                            const PriorGrid& prior, const OptimizeOptions& options = {}) {
  return detail::maximize_over_contexts(model, space, prior.nodes(), prior.weights(), options);
}

/// The four qubit numbers of the σ_z-rotation example, computed live.
struct CircumventionReport {
  double theta = 0.0;
  double base = 0.0;                      ///< |+⟩ probe, σ_x readout
  double multipass = 0.0;                 ///< rotation applied twice
  double restricted = 0.0;                ///< probe pinned to |+⟩, readout pinned to σ_z
  double restricted_plus_rotation = 0.0;  ///< same pins after e^{−iπ/4·σ_x}
  double unrestricted_optimum = 0.0;      ///< search over all qubit contexts
  std::vector<std::string> notes;
};

inline CircumventionReport circumvention_report(double theta, const OptimizeOptions& options = {}) {
  const auto base_model = sigma_z_rotation_model(1);
  const auto x_readout = sigma_x_povm();
  ContextSpace pinned{2, plus_state(), computational_basis_povm(2), "probe |+>, sigma_z readout"};
  const auto rotation = unitary_channel(unitary_exp(pauli_x(), std::numbers::pi / 4.0));

  CircumventionReport r;
  r.theta = theta;
  r.base = classical_fisher(base_model, x_readout, theta).value;
  r.multipass = classical_fisher(sigma_z_rotation_model(2), x_readout, theta).value;
  r.restricted = maximize_fisher(base_model, pinned, theta, options).best_value;
  r.restricted_plus_rotation =
      maximize_fisher(compose(base_model, rotation, Placement::Post), pinned, theta, options).best_value;
  r.unrestricted_optimum =
      maximize_fisher(base_model, ContextSpace::unrestricted(2), theta, options).best_value;
  r.notes = {
      "base: |+> probe with sigma_x readout reaches the unrestricted optimum; no theta-independent "
      "channel can raise it",
      "multipass: the extra channel depends on theta, so processing bounds do not apply",
      "restricted: a sigma_z readout cannot see a rotation about z",
      "restricted_plus_rotation: a theta-independent rotation lifts the readout restriction but "
      "stays at or below the unrestricted optimum",
  };
  return r;
}

}  // namespace fisherdpi
