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
 * Dense complex matrices of small dimension and a cyclic Jacobi eigensolver
 * for the Hermitian case. Everything here is a value type; no function keeps
 * state between calls.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fisherdpi/error.hpp"

namespace fisherdpi {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr std::size_t kMaxDim = 64;
inline constexpr double kHermitianTol = 1e-12;

class ComplexMatrix {
 public:
  /// An empty (0×0) matrix; only useful as a placeholder.
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(checked_dim(dim)), data_(dim * dim) {}

  ComplexMatrix(std::size_t dim, const ComplexVector& entries)
      : dim_(checked_dim(dim)), data_(entries.begin(), entries.end()) {
    if (data_.size() != dim_ * dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix of dim " + std::to_string(dim_) + " needs " +
                      std::to_string(dim_ * dim_) + " entries, got " +
                      std::to_string(data_.size()));
    }
  }

  /// Row-major literal, e.g. `{{0, 1}, {1, 0}}`.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix literal is not square");
      }
      std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  /// |v⟩⟨w|
  static ComplexMatrix outer(std::span<const Complex> v, std::span<const Complex> w) {
    if (v.size() != w.size()) {
      throw Error(ErrorCode::DimensionMismatch, "outer product of vectors with different lengths");
    }
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  std::span<const Complex> entries() const noexcept { return {data_.data(), data_.size()}; }

  ComplexVector column(std::size_t j) const {
    ComplexVector c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_dim(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_dim(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same_dim(b);
    const std::size_t n = a.dim_;
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
    if (v.size() != a.dim_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
    }
    ComplexVector out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t j = 0; j < a.dim_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  void require_same_dim(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "dimension " + std::to_string(dim_) + " vs " + std::to_string(other.dim_));
    }
  }

 private:
  static std::size_t checked_dim(std::size_t dim) {
    if (dim == 0 || dim > kMaxDim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix dimension must be in [1, 64], got " + std::to_string(dim));
    }
    return dim;
  }

  std::size_t dim_ = 0;
  // Matrices up to 4×4 live inline; the optimizers build millions of them.
  boost::container::small_vector<Complex, 16> data_;
};

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = std::conj(a(j, i));
  return out;
}

inline Complex trace(const ComplexMatrix& a) noexcept {
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
  return t;
}

/// trace(A·B) without forming the product.
inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_dim(b);
  Complex t{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  return t;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_dim(b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline double max_abs(const ComplexMatrix& a) noexcept {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double frobenius_norm(const ComplexMatrix& a) noexcept {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

/// max |A[i,j] − conj(A[j,i])|
inline double hermitian_defect(const ComplexMatrix& a) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) noexcept {
  return hermitian_defect(a) <= tol;
}

/// (A + A†)/2; removes roundoff asymmetry from products of Hermitian factors.
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

inline void require_hermitian(const ComplexMatrix& a, std::string_view what,
                              double tol = kHermitianTol) {
  const double defect = hermitian_defect(a);
  if (!(defect <= tol)) {
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + " is not Hermitian (defect " + std::to_string(defect) + ")");
  }
}

/// Columns of `vectors` are orthonormal eigenvectors; `values` ascend.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

namespace detail {

// Conjugate A by the 2×2 unitary G acting on coordinates (p, q): A ← G†·A·G,
// and accumulate V ← V·G.
inline void apply_jacobi_rotation(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q,
                                  Complex gpp, Complex gpq, Complex gqp, Complex gqq) {
  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

inline double off_diagonal_norm(const ComplexMatrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// 1e-14 (relative to the matrix norm once that exceeds one).
inline HermitianEigen eig_hermitian(const ComplexMatrix& input) {
  require_hermitian(input, "eigensolver input");
  const std::size_t n = input.dim();
  ComplexMatrix a = hermitian_part(input);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = 1e-14 * std::max(1.0, frobenius_norm(a));

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && detail::off_diagonal_norm(a) >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        // Phase e^{-iφ} on coordinate q makes the (p,q) entry real and
        // positive; a real symmetric rotation then annihilates it.
        const Complex phase = std::conj(a(p, q)) / r;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        detail::apply_jacobi_rotation(a, v, p, q, c, s, -s * phase, c * phase);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// V·diag(f(λ))·V†
template <typename F>
ComplexMatrix spectral_apply(const HermitianEigen& eig, F&& f) {
  const std::size_t n = eig.vectors.dim();
  ComplexVector fl(n);
  for (std::size_t k = 0; k < n; ++k) fl[k] = f(eig.values[k]);
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k)
        s += eig.vectors(i, k) * fl[k] * std::conj(eig.vectors(j, k));
      out(i, j) = s;
    }
  return out;
}

/// e^{−itG} from a precomputed eigendecomposition of G.
inline ComplexMatrix unitary_exp(const HermitianEigen& generator, double t) {
  return spectral_apply(generator, [t](double lambda) { return std::polar(1.0, -t * lambda); });
}

/// e^{−itG} for Hermitian G.
inline ComplexMatrix unitary_exp(const ComplexMatrix& generator, double t) {
  return unitary_exp(eig_hermitian(generator), t);
}

/// A·B·A†
inline ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b * adjoint(a);
}

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace fisherdpi
