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
 * Classical Fisher information of a (model, measurement) pair, its prior
 * average, and the symmetric logarithmic derivative route to the
 * measurement-optimized value for a fixed state.
 *
 * Outcomes whose probability vanishes need a convention. With
 * p ≤ 1e-12 and |∂p| ≤ 1e-9 the point is a zero of a smooth nonnegative
 * function, hence a minimum, and (∂p)²/p tends to 2·∂²p there; that limit is
 * what gets added (it is 0 when the outcome is impossible near θ). With
 * p ≤ 1e-12 but a large slope the information cannot be resolved numerically
 * and SingularOutcome is raised instead of clamping.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/prior.hpp"
#include "fisherdpi/quantum.hpp"

namespace fisherdpi {

inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kSlopeFloor = 1e-9;
inline constexpr double kSldEigenFloor = 1e-10;
inline constexpr double kSldOffSupportTol = 1e-8;

/// p, ∂θp and ∂²θp for one outcome.
struct OutcomeJet {
  double p = 0.0;
  double dp = 0.0;
  double d2p = 0.0;
};

enum class SingularPolicy {
  Throw,  ///< unresolvable outcomes raise SingularOutcome
  Limit,  ///< every vanishing outcome takes its limiting value 2·∂²p
};

struct FisherValue {
  double value = 0.0;
  double theta = 0.0;
  std::string context_description;
};

struct SldResult {
  ComplexMatrix sld;
  double qfi = 0.0;
  int support_rank = 0;
};

inline std::vector<OutcomeJet> outcome_jets(const ModelJet& jet, const Povm& povm) {
  if (jet.rho.dim() != povm.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "model of dim " + std::to_string(jet.rho.dim()) +
                                                  " measured by POVM of dim " +
                                                  std::to_string(povm.dim()));
  }
  std::vector<OutcomeJet> out(povm.size());
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const auto& e = povm.effect(k);
    out[k] = {std::max(trace_product(jet.rho, e).real(), 0.0), trace_product(jet.d1, e).real(),
              trace_product(jet.d2, e).real()};
  }
  return out;
}

inline double fisher_from_jets(std::span<const OutcomeJet> jets,
                               SingularPolicy policy = SingularPolicy::Throw, double theta = 0.0) {
  double info = 0.0;
  for (std::size_t k = 0; k < jets.size(); ++k) {
    const auto& j = jets[k];
    if (j.p > kProbabilityFloor) {
      info += j.dp * j.dp / j.p;
      continue;
    }
    if (std::abs(j.dp) > kSlopeFloor && policy == SingularPolicy::Throw) {
      throw Error(ErrorCode::SingularOutcome,
                  "outcome " + std::to_string(k) + " has p=" + std::to_string(j.p) +
                      " but dp=" + std::to_string(j.dp) + " at theta=" + std::to_string(theta));
    }
    info += std::max(0.0, 2.0 * j.d2p);
  }
  return info;
}

inline FisherValue classical_fisher(const ParameterizedModel& model, const Povm& povm, double theta,
                                    SingularPolicy policy = SingularPolicy::Throw) {
  if (model.dim() != povm.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "model of dim " + std::to_string(model.dim()) +
                                                  " measured by POVM of dim " +
                                                  std::to_string(povm.dim()));
  }
  const auto jets = outcome_jets(model.jet_at(theta), povm);
  return {fisher_from_jets(jets, policy, theta), theta,
          std::to_string(povm.size()) + "-outcome POVM on dim " + std::to_string(povm.dim())};
}

/// J = Σ_i w_i·I(θ_i).
inline double bayesian_information(const ParameterizedModel& model, const Povm& povm,
                                   const PriorGrid& prior,
                                   SingularPolicy policy = SingularPolicy::Throw) {
  double j = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior.weights()[i] == 0.0) continue;
    j += prior.weights()[i] * classical_fisher(model, povm, prior.nodes()[i], policy).value;
  }
  return j;
}

/// Solves ∂ρ = (ρL + Lρ)/2 in the eigenbasis of ρ. Pairs with
/// λ_i + λ_j ≤ 1e-10 get L_ij = 0, provided the derivative has no weight
/// there either.
inline SldResult sld_solve(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  rho.require_same_dim(drho);
  const auto eig = eig_hermitian(rho);
  const std::size_t n = rho.dim();
  const ComplexMatrix& v = eig.vectors;
  const ComplexMatrix d = adjoint(v) * drho * v;

  ComplexMatrix l_eig(n);
  int rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.values[i] > kSldEigenFloor) ++rank;
    for (std::size_t j = 0; j < n; ++j) {
      const double denom = eig.values[i] + eig.values[j];
      if (denom > kSldEigenFloor) {
        l_eig(i, j) = 2.0 * d(i, j) / denom;
      } else if (std::abs(d(i, j)) > kSldOffSupportTol) {
        throw Error(ErrorCode::DerivativeOffSupport,
                    "derivative has weight " + std::to_string(std::abs(d(i, j))) +
                        " outside the support of the state");
      }
    }
  }
  SldResult out;
  out.sld = hermitian_part(v * l_eig * adjoint(v));
  out.qfi = trace_product(rho, out.sld * out.sld).real();
  out.support_rank = rank;
  return out;
}

inline SldResult sld_solve(const ParameterizedModel& model, double theta) {
  const auto jet = model.jet_at(theta);
  return sld_solve(jet.rho, jet.d1);
}

/// Projective measurement onto the eigenvectors of L; for a scalar parameter
/// it attains the SLD quantum Fisher information.
inline Povm sld_optimal_povm(const SldResult& sld) {
  return projective_povm(eig_hermitian(sld.sld).vectors);
}

}  // namespace fisherdpi
