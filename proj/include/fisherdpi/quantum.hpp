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
 * Validated quantum objects: density matrices, POVMs and Kraus channels,
 * together with Born-rule probabilities and the Heisenberg-picture (dual)
 * action of a channel on measurement effects.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fisherdpi/error.hpp"
#include "fisherdpi/linalg.hpp"

namespace fisherdpi {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kCompletenessTol = 1e-10;

namespace detail {

inline double completeness_defect(const std::vector<ComplexMatrix>& kraus) {
  const std::size_t n = kraus.front().dim();
  ComplexMatrix sum(n);
  for (const auto& k : kraus) sum += adjoint(k) * k;
  return max_abs_diff(sum, ComplexMatrix::identity(n));
}

// Σ_j K_j·X·K_j† (Schrödinger picture) or Σ_j K_j†·X·K_j (dual).
inline ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& x,
                               bool dual) {
  const std::size_t n = x.dim();
  ComplexMatrix out(n);
  ComplexMatrix tmp(n);
  for (const auto& k : kraus) {
    // tmp = op(K)·X, then out += tmp·op(K)†
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s{};
        for (std::size_t a = 0; a < n; ++a) s += (dual ? std::conj(k(a, i)) : k(i, a)) * x(a, j);
        tmp(i, j) = s;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s{};
        for (std::size_t b = 0; b < n; ++b) s += tmp(i, b) * (dual ? k(b, j) : std::conj(k(j, b)));
        out(i, j) += s;
      }
  }
  return out;
}

}  // namespace detail

/// Hermitian, unit-trace, positive semidefinite. Eigenvalues in
/// [−1e-10, 0) are clamped to zero at construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& mat) : mat_(hermitian_part(mat)) {
    if (mat.empty()) throw Error(ErrorCode::InvalidState, "empty density matrix");
    const double defect = hermitian_defect(mat);
    if (!(defect <= kHermitianTol)) {
      throw Error(ErrorCode::InvalidState,
                  "density matrix not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const double tr = trace(mat_).real();
    if (!(std::abs(tr - 1.0) <= kTraceTol)) {
      throw Error(ErrorCode::InvalidState, "density matrix trace " + std::to_string(tr) + " != 1");
    }
    const auto eig = eig_hermitian(mat_);
    if (!(eig.values.front() >= kPsdFloor)) {
      throw Error(ErrorCode::InvalidState,
                  "density matrix has eigenvalue " + std::to_string(eig.values.front()));
    }
    if (eig.values.front() < 0.0) {
      mat_ = spectral_apply(eig, [](double l) { return std::max(l, 0.0); });
    }
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
  }

 private:
  ComplexMatrix mat_;
};

/// A measurement: PSD effects summing to the identity. Outcome labels are
/// stable integers so classical post-processing can refer to them.
class Povm {
 public:
  explicit Povm(std::vector<ComplexMatrix> effects, std::vector<int> labels = {})
      : effects_(std::move(effects)), labels_(std::move(labels)) {
    if (effects_.empty()) throw Error(ErrorCode::InvalidPovm, "POVM without effects");
    if (labels_.empty()) {
      labels_.resize(effects_.size());
      for (std::size_t k = 0; k < labels_.size(); ++k) labels_[k] = static_cast<int>(k);
    }
    if (labels_.size() != effects_.size()) {
      throw Error(ErrorCode::InvalidPovm, "label count does not match effect count");
    }
    const std::size_t n = effects_.front().dim();
    ComplexMatrix sum(n);
    for (std::size_t k = 0; k < effects_.size(); ++k) {
      if (effects_[k].dim() != n) {
        throw Error(ErrorCode::DimensionMismatch, "POVM effects of different dimension");
      }
      if (!is_hermitian(effects_[k], kCompletenessTol)) {
        throw Error(ErrorCode::InvalidPovm, "effect " + std::to_string(k) + " not Hermitian");
      }
      effects_[k] = hermitian_part(effects_[k]);
      if (eig_hermitian(effects_[k]).values.front() < kPsdFloor) {
        throw Error(ErrorCode::InvalidPovm, "effect " + std::to_string(k) + " not PSD");
      }
      sum += effects_[k];
    }
    const double defect = max_abs_diff(sum, ComplexMatrix::identity(n));
    if (!(defect <= kCompletenessTol)) {
      throw Error(ErrorCode::InvalidPovm,
                  "effects do not sum to identity (defect " + std::to_string(defect) + ")");
    }
  }

  std::size_t dim() const noexcept { return effects_.front().dim(); }
  std::size_t size() const noexcept { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(std::size_t k) const { return effects_.at(k); }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Index of the outcome carrying `label`.
  std::size_t index_of(int label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw Error(ErrorCode::InvalidArgument, "no outcome labelled " + std::to_string(label));
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

 private:
  std::vector<ComplexMatrix> effects_;
  std::vector<int> labels_;
};

/// Trace-preserving map in Kraus form: Σ_j K_j†·K_j = 1.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw Error(ErrorCode::InvalidChannel, "channel without Kraus operators");
    for (const auto& k : kraus_) {
      if (k.dim() != kraus_.front().dim()) {
        throw Error(ErrorCode::DimensionMismatch, "Kraus operators of different dimension");
      }
    }
    const double defect = detail::completeness_defect(kraus_);
    if (!(defect <= kCompletenessTol)) {
      throw Error(ErrorCode::InvalidChannel,
                  "Kraus operators not trace preserving (defect " + std::to_string(defect) + ")");
    }
  }

  std::size_t dim() const noexcept { return kraus_.front().dim(); }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  /// Σ_j K_j·X·K_j† for any operator X (linear extension; used on derivatives).
  ComplexMatrix apply(const ComplexMatrix& x) const {
    kraus_.front().require_same_dim(x);
    return detail::kraus_sum(kraus_, x, false);
  }

  static KrausChannel identity(std::size_t dim) {
    return KrausChannel({ComplexMatrix::identity(dim)});
  }

 private:
  std::vector<ComplexMatrix> kraus_;
};

/// Heisenberg picture of a channel: X ↦ Σ_j K_j†·X·K_j. Unital whenever the
/// underlying channel is trace preserving.
class DualChannel {
 public:
  explicit DualChannel(const KrausChannel& channel) : kraus_(channel.kraus()) {}

  std::size_t dim() const noexcept { return kraus_.front().dim(); }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    kraus_.front().require_same_dim(x);
    return detail::kraus_sum(kraus_, x, true);
  }

  /// Pulls every effect back through the channel; labels are preserved.
  Povm apply(const Povm& povm) const {
    std::vector<ComplexMatrix> effects;
    effects.reserve(povm.size());
    for (const auto& e : povm.effects()) effects.push_back(hermitian_part(apply(e)));
    return Povm(std::move(effects), povm.labels());
  }

 private:
  std::vector<ComplexMatrix> kraus_;
};

inline DualChannel dual_channel(const KrausChannel& channel) { return DualChannel(channel); }

inline DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  if (channel.dim() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "channel of dim " + std::to_string(channel.dim()) +
                                                  " applied to state of dim " +
                                                  std::to_string(rho.dim()));
  }
  return DensityMatrix(hermitian_part(channel.apply(rho.matrix())));
}

/// p_x = Re tr(ρ·E_x), with roundoff negatives above −1e-12 clamped to 0.
inline std::vector<double> born_probabilities(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state of dim " + std::to_string(rho.dim()) +
                                                  " measured by POVM of dim " +
                                                  std::to_string(povm.dim()));
  }
  std::vector<double> p(povm.size());
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const double v = trace_product(rho.matrix(), povm.effect(k)).real();
    if (v < -1e-12) {
      throw Error(ErrorCode::InvalidState, "negative outcome probability " + std::to_string(v));
    }
    p[k] = std::max(v, 0.0);
  }
  return p;
}

inline DensityMatrix pure_state(std::span<const Complex> amplitudes) {
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (!(std::abs(norm2 - 1.0) <= 1e-10)) {
    throw Error(ErrorCode::NotNormalized,
                "amplitudes have squared norm " + std::to_string(norm2));
  }
  return DensityMatrix(ComplexMatrix::outer(amplitudes, amplitudes));
}

inline DensityMatrix pure_state(std::initializer_list<Complex> amplitudes) {
  const ComplexVector v(amplitudes);
  return pure_state(std::span<const Complex>(v));
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return max_abs_diff(u * adjoint(u), ComplexMatrix::identity(u.dim()));
}

/// Rank-one projectors onto the columns of a unitary `basis`.
inline Povm projective_povm(const ComplexMatrix& basis) {
  if (!(unitarity_defect(basis) <= 1e-10)) {
    throw Error(ErrorCode::NotUnitary, "measurement basis is not unitary");
  }
  std::vector<ComplexMatrix> effects;
  effects.reserve(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto col = basis.column(k);
    effects.push_back(ComplexMatrix::outer(col, col));
  }
  return Povm(std::move(effects));
}

inline KrausChannel unitary_channel(const ComplexMatrix& u) {
  if (!(unitarity_defect(u) <= 1e-10)) {
    throw Error(ErrorCode::NotUnitary, "channel operator is not unitary");
  }
  return KrausChannel({u});
}

/// Qubit depolarizing channel ρ ↦ (1−p)ρ + p·1/2 in Pauli-Kraus form.
inline KrausChannel depolarizing_channel(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "depolarizing strength outside [0, 1]");
  }
  return KrausChannel({ComplexMatrix::identity(2) * Complex(std::sqrt(1.0 - 0.75 * p)),
                       pauli_x() * Complex(std::sqrt(p / 4.0)),
                       pauli_y() * Complex(std::sqrt(p / 4.0)),
                       pauli_z() * Complex(std::sqrt(p / 4.0))});
}

inline Povm computational_basis_povm(std::size_t dim) {
  return projective_povm(ComplexMatrix::identity(dim));
}

/// Eigenbasis of σ_x, outcome 0 = |+⟩, outcome 1 = |−⟩.
inline Povm sigma_x_povm() {
  const double h = 1.0 / std::sqrt(2.0);
  return projective_povm(ComplexMatrix{{h, h}, {h, -h}});
}

inline DensityMatrix plus_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return pure_state({h, h});
}

}  // namespace fisherdpi
