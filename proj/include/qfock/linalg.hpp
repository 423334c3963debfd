#ifndef QFOCK_LINALG_HPP
#define QFOCK_LINALG_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfock {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

inline constexpr cplx kI{0.0, 1.0};

/// d^n for small non-negative exponents.
inline std::size_t ipow(std::size_t base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// M^{⊗n}; the 0-th power is the 1×1 identity.
inline Matrix kron_power(const Matrix& m, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, m);
  return out;
}

inline RealVector kron_power(const RealVector& v, int n) {
  RealVector out = RealVector::Ones(1);
  for (int i = 0; i < n; ++i) {
    RealVector next(out.size() * v.size());
    for (Eigen::Index a = 0; a < out.size(); ++a) next.segment(a * v.size(), v.size()) = out(a) * v;
    out = std::move(next);
  }
  return out;
}

/// Tensor of simple factors v1 ⊗ ... ⊗ vn (leftmost factor is the most significant index).
inline Vector simple_tensor(std::span<const Vector> factors) {
  Vector out = Vector::Ones(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// Multi-index digits of a flat tensor index, most significant first.
inline std::vector<int> tensor_digits(std::size_t index, int dim, int degree) {
  std::vector<int> digits(static_cast<std::size_t>(degree));
  for (int s = degree - 1; s >= 0; --s) {
    digits[static_cast<std::size_t>(s)] = static_cast<int>(index % static_cast<std::size_t>(dim));
    index /= static_cast<std::size_t>(dim);
  }
  return digits;
}

inline std::size_t tensor_index(std::span<const int> digits, int dim) {
  std::size_t idx = 0;
  for (int d : digits) idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d);
  return idx;
}

/// Index map of the axis reordering ξ ↦ ξ' with ξ'[i_{order[0]}, ..., i_{order[n-1]}] = ξ[i_0, ..., i_{n-1}].
/// Entry j of the result is the flat index of ξ' receiving coordinate j of ξ.
inline std::vector<std::size_t> axis_reorder_map(int dim, std::span<const int> order) {
  const int n = static_cast<int>(order.size());
  const std::size_t size = ipow(static_cast<std::size_t>(dim), n);
  std::vector<std::size_t> map(size);
  std::vector<int> permuted(order.size());
  for (std::size_t j = 0; j < size; ++j) {
    auto digits = tensor_digits(j, dim, n);
    for (int s = 0; s < n; ++s) permuted[static_cast<std::size_t>(s)] = digits[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])];
    map[j] = tensor_index(permuted, dim);
  }
  return map;
}

inline Vector reorder_axes(const Vector& tensor, int dim, std::span<const int> order) {
  const auto map = axis_reorder_map(dim, order);
  Vector out(tensor.size());
  for (std::size_t j = 0; j < map.size(); ++j) out(static_cast<Eigen::Index>(map[j])) = tensor(static_cast<Eigen::Index>(j));
  return out;
}

/// Largest singular value.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double spectral_norm(const RealMatrix& m) { return spectral_norm(Matrix(m.cast<cplx>())); }

/// Smallest eigenvalue of the Hermitian part of a square matrix.
inline double min_hermitian_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Square root of a Hermitian positive semidefinite matrix; eigenvalues in [-tol, 0) are clamped.
inline Matrix psd_sqrt(const Matrix& m, double tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw std::domain_error("psd_sqrt: matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

inline Vector random_vector(Eigen::Index size, Rng& rng) { return random_matrix(size, 1, rng).col(0); }

/// Numerical rank with singular values below rel_tol * largest counted as zero.
inline int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

}  // namespace qfock

#endif  // QFOCK_LINALG_HPP
