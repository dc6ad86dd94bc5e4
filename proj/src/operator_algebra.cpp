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

#include "lzsm/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace lzsm {

namespace {

using DenseMap =
    Eigen::Map<const Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

DenseMap as_eigen(const ComplexMatrix& m) {
  return DenseMap(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidDimension(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                           "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                           "x" + std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidDimension("ComplexMatrix: " + std::to_string(data_.size()) +
                           " entries for a " + std::to_string(rows_) + "x" +
                           std::to_string(cols_) + " matrix");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cx> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

cx ComplexMatrix::trace() const {
  cx t{0.0, 0.0};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += std::abs((*this)(r, c));
    m = std::max(m, s);
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cx scalar) {
  for (auto& v : data_) v *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cx scalar, ComplexMatrix a) { return a *= scalar; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix pauli(Pauli which) {
  const cx i{0.0, 1.0};
  switch (which) {
    case Pauli::x:
      return {2, 2, {0.0, 1.0, 1.0, 0.0}};
    case Pauli::y:
      return {2, 2, {0.0, -i, i, 0.0}};
    case Pauli::z:
      return {2, 2, {1.0, 0.0, 0.0, -1.0}};
    case Pauli::plus:
      return {2, 2, {0.0, 1.0, 0.0, 0.0}};
    case Pauli::minus:
      return {2, 2, {0.0, 0.0, 1.0, 0.0}};
  }
  throw ContractViolation("pauli: unknown selector");
}

ComplexMatrix fock_annihilation(std::size_t dim) {
  if (dim < 2) {
    throw InvalidDimension("fock_annihilation: dimension must be >= 2, got " +
                           std::to_string(dim));
  }
  ComplexMatrix a(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cx av = a(ar, ac);
      if (av == cx{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& v : out.entries()) v = std::conj(v);
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidDimension("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                           std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cx av = a(r, k);
      if (av == cx{}) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += av * b(k, c);
    }
  }
  return out;
}

ComplexMatrix add_scaled(const ComplexMatrix& a, cx c, const ComplexMatrix& b) {
  require_same_shape(a, b, "add_scaled");
  ComplexMatrix out = a;
  auto dst = out.entries();
  auto src = b.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
  return out;
}

std::vector<cx> matvec(const ComplexMatrix& a, std::span<const cx> x) {
  if (a.cols() != x.size()) {
    throw InvalidDimension("matvec: matrix has " + std::to_string(a.cols()) +
                           " columns, vector has " + std::to_string(x.size()) + " entries");
  }
  std::vector<cx> y(a.rows(), cx{});
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cx s{};
    for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
    y[r] = s;
  }
  return y;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.is_square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = r; c < a.cols(); ++c)
      d = std::max(d, std::abs(a(r, c) - std::conj(a(c, r))));
  return d;
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermiticity_defect(a) <= tol; }

Eigensystem hermitian_eigensystem(const ComplexMatrix& input) {
  if (!input.is_square()) throw InvalidDimension("hermitian_eigensystem: matrix is not square");
  const double defect = hermiticity_defect(input);
  if (defect > 1e-10) {
    throw ContractViolation("hermitian_eigensystem: input is not Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
  const std::size_t n = input.rows();
  // lower triangle only
  const Eigen::SelfAdjointEigenSolver<DenseMap::PlainObject> solver(as_eigen(input));
  if (solver.info() != Eigen::Success) {
    throw ContractViolation("hermitian_eigensystem: eigensolver did not converge");
  }
  Eigensystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < n; ++r) {
      out.vectors(r, k) = solver.eigenvectors()(static_cast<Eigen::Index>(r),
                                                static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

std::vector<cx> solve_linear(const ComplexMatrix& a, std::span<const cx> b) {
  if (!a.is_square()) throw InvalidDimension("solve_linear: matrix is not square");
  const std::size_t n = a.rows();
  if (b.size() != n) {
    throw InvalidDimension("solve_linear: right-hand side has " + std::to_string(b.size()) +
                           " entries, expected " + std::to_string(n));
  }
  const Eigen::PartialPivLU<DenseMap::PlainObject> lu(as_eigen(a));
  const double threshold = 1e-14 * a.norm_inf();
  const auto& u = lu.matrixLU();
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const double pivot = std::abs(u(k, k));
    if (!(pivot > threshold)) {
      throw SingularMatrix("solve_linear: pivot " + std::to_string(pivot) + " in column " +
                           std::to_string(k) + " is below the singularity threshold");
    }
  }
  const Eigen::Map<const Eigen::VectorXcd> rhs(b.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXcd x = lu.solve(rhs);
  return std::vector<cx>(x.data(), x.data() + x.size());
}

}  // namespace lzsm
