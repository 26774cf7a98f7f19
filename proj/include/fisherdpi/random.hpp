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

// Seeded samplers for random quantum objects. All of them draw from a
// caller-owned engine, so a (seed, index) pair pins every sample.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "fisherdpi/linalg.hpp"
#include "fisherdpi/quantum.hpp"

namespace fisherdpi {

using Rng = std::mt19937_64;

/// Independent stream for item `index` of a run seeded with `seed`.
inline Rng make_rng(std::uint64_t seed, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline Complex random_gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

/// Gaussian entries, symmetrized.
inline ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  ComplexMatrix a(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = random_gaussian_complex(rng);
  return hermitian_part(a);
}

/// Columns of a Gaussian rows×cols matrix after Gram–Schmidt (applied twice
/// for orthogonality at roundoff level). Returned row-major, rows·cols long.
inline ComplexVector random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexVector m(rows * cols);
  for (auto& z : m) z = random_gaussian_complex(rng);
  const auto at = [&](std::size_t i, std::size_t j) -> Complex& { return m[i * cols + j]; };
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot{};
        for (std::size_t i = 0; i < rows; ++i) dot += std::conj(at(i, k)) * at(i, j);
        for (std::size_t i = 0; i < rows; ++i) at(i, j) -= dot * at(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += std::norm(at(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) at(i, j) /= norm;
  }
  return m;
}

inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  return ComplexMatrix(dim, random_isometry(dim, dim, rng));
}

inline ComplexVector random_amplitudes(std::size_t dim, Rng& rng) {
  ComplexVector v(dim);
  double norm = 0.0;
  for (auto& z : v) {
    z = random_gaussian_complex(rng);
    norm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(norm);
  return v;
}

inline DensityMatrix random_pure_state(std::size_t dim, Rng& rng) {
  const auto v = random_amplitudes(dim, rng);
  return DensityMatrix(ComplexMatrix::outer(v, v));
}

/// G·G†/tr from a Gaussian G; full rank with probability one.
inline DensityMatrix random_density_matrix(std::size_t dim, Rng& rng) {
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = random_gaussian_complex(rng);
  ComplexMatrix rho = g * adjoint(g);
  rho *= Complex(1.0 / trace(rho).real());
  return DensityMatrix(hermitian_part(rho));
}

inline Povm random_projective_povm(std::size_t dim, Rng& rng) {
  return projective_povm(random_unitary(dim, rng));
}

/// E_k = V_k†·V_k for the dim×dim blocks V_k of a random isometry.
inline Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng) {
  const auto iso = random_isometry(dim * outcomes, dim, rng);
  std::vector<ComplexMatrix> effects;
  for (std::size_t k = 0; k < outcomes; ++k) {
    ComplexMatrix block(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) block(i, j) = iso[(k * dim + i) * dim + j];
    effects.push_back(hermitian_part(adjoint(block) * block));
  }
  return Povm(std::move(effects));
}

}  // namespace fisherdpi
