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
 * Parameterized families θ ↦ ρ(θ).
 *
 * A model is a core evolution (a unitary rotation e^{−iθ·passes·G} or a
 * θ-dependent Kraus channel) sandwiched between fixed channels:
 *
 *     ρ(θ) = Post( Core_θ( Pre(ρ0) ) )
 *
 * Pre-placed channels act on the probe before the parameter is imprinted
 * ("encoding"), post-placed ones act on the output. Because every fixed
 * channel is linear, derivatives propagate through Post unchanged in form.
 *
 * Besides ρ and ∂θρ the model also provides ∂²θρ; Fisher information needs
 * it to resolve outcomes whose probability and slope vanish together.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/quantum.hpp"

namespace fisherdpi {

enum class ModelKind { Unitary, Kraus, Composed };
enum class Placement { Pre, Post };

inline constexpr double kDefaultFdStep = 1e-5;
// Central second differences lose ~eps/h² to roundoff; a wider step keeps
// that near 1e-8.
inline constexpr double kSecondDerivativeStep = 1e-4;

/// ρ(θ), ∂θρ(θ) and ∂²θρ(θ) at one parameter value.
struct ModelJet {
  ComplexMatrix rho;
  ComplexMatrix d1;
  ComplexMatrix d2;
};

class ParameterizedModel {
 public:
  using KrausFamilyFn = std::function<KrausChannel(double)>;

  static ParameterizedModel unitary_family(const ComplexMatrix& generator, DensityMatrix rho0,
                                           int passes = 1) {
    require_hermitian(generator, "generator");
    if (passes < 1) throw Error(ErrorCode::InvalidArgument, "passes must be >= 1");
    if (generator.dim() != rho0.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "generator and initial state differ in dimension");
    }
    UnitaryCore core{hermitian_part(generator), eig_hermitian(generator), passes};
    return ParameterizedModel(std::move(core), std::move(rho0));
  }

  static ParameterizedModel kraus_family(KrausFamilyFn kraus_at, DensityMatrix rho0,
                                         double fd_step = kDefaultFdStep) {
    if (!kraus_at) throw Error(ErrorCode::InvalidArgument, "empty Kraus family");
    if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd_step must be positive");
    return ParameterizedModel(KrausCore{std::move(kraus_at), fd_step}, std::move(rho0));
  }

  ModelKind kind() const noexcept {
    if (!pre_.empty() || !post_.empty()) return ModelKind::Composed;
    return std::holds_alternative<UnitaryCore>(core_) ? ModelKind::Unitary : ModelKind::Kraus;
  }

  std::size_t dim() const noexcept { return rho0_.dim(); }
  const DensityMatrix& initial_state() const noexcept { return rho0_; }
  const std::vector<KrausChannel>& pre_channels() const noexcept { return pre_; }
  const std::vector<KrausChannel>& post_channels() const noexcept { return post_; }

  bool is_unitary_core() const noexcept { return std::holds_alternative<UnitaryCore>(core_); }
  /// Only meaningful for unitary cores.
  const ComplexMatrix& generator() const { return std::get<UnitaryCore>(core_).generator; }
  int passes() const { return std::get<UnitaryCore>(core_).passes; }

  /// Same dynamics and channels, different probe.
  ParameterizedModel with_initial_state(DensityMatrix rho0) const {
    if (rho0.dim() != dim()) {
      throw Error(ErrorCode::DimensionMismatch, "replacement initial state has wrong dimension");
    }
    ParameterizedModel copy = *this;
    copy.rho0_ = std::move(rho0);
    return copy;
  }

  ParameterizedModel compose(const KrausChannel& channel, Placement placement) const {
    if (channel.dim() != dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "channel of dim " + std::to_string(channel.dim()) +
                      " composed with model of dim " + std::to_string(dim()));
    }
    ParameterizedModel copy = *this;
    (placement == Placement::Pre ? copy.pre_ : copy.post_).push_back(channel);
    return copy;
  }

  DensityMatrix state_at(double theta) const { return DensityMatrix(jet_at(theta).rho); }
  ComplexMatrix derivative_at(double theta) const { return jet_at(theta).d1; }
  ModelJet jet_at(double theta) const { return jet_from(rho0_.matrix(), theta); }

  /// Jet for an arbitrary probe matrix. The probe is not validated, so hot
  /// loops (context optimization) can skip the density-matrix checks. With
  /// `second_derivative` false, `d2` is left empty.
  ModelJet jet_from(const ComplexMatrix& probe, double theta, bool second_derivative = true) const {
    ComplexMatrix prepared = probe;
    for (const auto& ch : pre_) prepared = ch.apply(prepared);

    ModelJet jet = std::visit(
        [&](const auto& core) { return evolve(core, prepared, theta, second_derivative); }, core_);
    for (const auto& ch : post_) {
      jet.rho = ch.apply(jet.rho);
      jet.d1 = ch.apply(jet.d1);
      if (second_derivative) jet.d2 = ch.apply(jet.d2);
    }
    jet.rho = hermitian_part(jet.rho);
    jet.d1 = hermitian_part(jet.d1);
    if (second_derivative) jet.d2 = hermitian_part(jet.d2);
    return jet;
  }

 private:
  struct UnitaryCore {
    ComplexMatrix generator;
    HermitianEigen eig;
    int passes;
  };
  struct KrausCore {
    KrausFamilyFn kraus_at;
    double fd_step;
  };

  template <typename Core>
  ParameterizedModel(Core core, DensityMatrix rho0) : core_(std::move(core)), rho0_(std::move(rho0)) {}

  // ρ = U·ρ0·U†, ∂ρ = −ik[G, ρ], ∂²ρ = −k²[G, [G, ρ]] with k = passes.
  static ModelJet evolve(const UnitaryCore& core, const ComplexMatrix& probe, double theta,
                         bool second) {
    const double k = static_cast<double>(core.passes);
    const ComplexMatrix u = unitary_exp(core.eig, k * theta);
    ComplexMatrix rho = conjugate(u, probe);
    ComplexMatrix d1 = commutator(core.generator, rho) * Complex(0.0, -k);
    ComplexMatrix d2;
    if (second) d2 = commutator(core.generator, d1) * Complex(0.0, -k);
    return {std::move(rho), std::move(d1), std::move(d2)};
  }

  static ModelJet evolve(const KrausCore& core, const ComplexMatrix& probe, double theta,
                         bool second) {
    const auto at = [&](double t) { return core.kraus_at(t).apply(probe); };
    const double h = core.fd_step;
    const double h2 = kSecondDerivativeStep;
    ComplexMatrix rho = at(theta);
    ComplexMatrix d1 = (at(theta + h) - at(theta - h)) * Complex(1.0 / (2.0 * h));
    ComplexMatrix d2;
    if (second) {
      d2 = (at(theta + h2) - rho * Complex(2.0) + at(theta - h2)) * Complex(1.0 / (h2 * h2));
    }
    return {std::move(rho), std::move(d1), std::move(d2)};
  }

  std::variant<UnitaryCore, KrausCore> core_;
  DensityMatrix rho0_;
  std::vector<KrausChannel> pre_;
  std::vector<KrausChannel> post_;
};

inline ParameterizedModel make_unitary_family(const ComplexMatrix& generator, DensityMatrix rho0,
                                              int passes = 1) {
  return ParameterizedModel::unitary_family(generator, std::move(rho0), passes);
}

inline ParameterizedModel compose(const ParameterizedModel& model, const KrausChannel& channel,
                                  Placement placement) {
  return model.compose(channel, placement);
}

/// Largest entry-wise gap between the model derivative and a central finite
/// difference of state_at with step h.
inline double derivative_fd_error(const ParameterizedModel& model, double theta,
                                  double h = kDefaultFdStep) {
  const ComplexMatrix fd = (model.jet_at(theta + h).rho - model.jet_at(theta - h).rho) *
                           Complex(1.0 / (2.0 * h));
  return max_abs_diff(fd, model.derivative_at(theta));
}

/// e^{−iθσ_z} acting on |+⟩: the qubit phase-rotation example.
inline ParameterizedModel sigma_z_rotation_model(int passes = 1) {
  return make_unitary_family(pauli_z(), plus_state(), passes);
}

}  // namespace fisherdpi
