// Copyright 2026 The lzsm Authors
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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lzsm/errors.hpp"

namespace lzsm {

using cx = std::complex<double>;

/// Dense complex matrix, row-major.
///
/// Sized for the handful of small operators this project needs (the largest
/// is the 36x36 Liouvillian of a qubit coupled to a three-level resonator),
/// so there is no expression-template or sparse machinery here.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const cx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cx> entries() { return data_; }
  std::span<const cx> entries() const { return data_; }

  cx trace() const;
  double max_abs() const;
  /// Max row sum of absolute values.
  double norm_inf() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cx scalar);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cx scalar, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Pauli { x, y, z, plus, minus };

/// 2x2 Pauli matrices with sigma_pm = (sigma_x +- i sigma_y) / 2, so that
/// sigma_plus = |0><1| raises the second basis state into the first.
ComplexMatrix pauli(Pauli which);

/// Truncated resonator lowering operator, a[n-1][n] = sqrt(n).
ComplexMatrix fock_annihilation(std::size_t dim);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
/// a + c * b.
ComplexMatrix add_scaled(const ComplexMatrix& a, cx c, const ComplexMatrix& b);
std::vector<cx> matvec(const ComplexMatrix& a, std::span<const cx> x);

/// Largest elementwise |A - A^dagger|; infinite for non-square input.
double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol);

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// Throws ContractViolation if `a` is not Hermitian within 1e-10.
Eigensystem hermitian_eigensystem(const ComplexMatrix& a);

/// LU with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 1e-14 * ||A||_inf.
std::vector<cx> solve_linear(const ComplexMatrix& a, std::span<const cx> b);

}  // namespace lzsm
