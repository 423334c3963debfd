#ifndef QFOCK_FOCK_HPP
#define QFOCK_FOCK_HPP

#include "qfock/crossing.hpp"
#include "qfock/deformed_space.hpp"
#include "qfock/graded.hpp"

#include <iostream>
#include <memory>

namespace qfock {

/// Σ_{σ ∈ S_n} q^{inv(σ)} π(σ) on (C^dim)^{⊗n}, accumulated through index maps.
inline RealMatrix build_symmetrizer(int dim, int n, double q) {
  const auto size = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(dim), n));
  RealMatrix p = RealMatrix::Zero(size, size);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    int inversions = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (sigma[static_cast<std::size_t>(a)] > sigma[static_cast<std::size_t>(b)]) ++inversions;
    const double weight = std::pow(q, inversions);
    if (weight == 0.0) continue;
    const auto map = axis_reorder_map(dim, sigma);
    for (std::size_t j = 0; j < map.size(); ++j)
      p(static_cast<Eigen::Index>(map[j]), static_cast<Eigen::Index>(j)) += weight;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return p;
}

/// ∏_{k≥1} (1 − |q|^k)^{-1}, truncated once the multiplicative increment drops below 1e-14.
inline double norm_constant(double q) {
  if (!(std::abs(q) < 1.0)) throw std::domain_error("norm_constant: |q| must be < 1");
  const double a = std::abs(q);
  double c = 1.0;
  double power = a;
  for (int k = 1; k < 100000; ++k) {
    const double factor = 1.0 / (1.0 - power);
    c *= factor;
    if (factor - 1.0 < 1e-14) break;
    power *= a;
  }
  return c;
}

/// The q-Fock space over a deformed space, truncated at max_degree, with the
/// per-degree symmetrizers and Gram matrices built eagerly. Copies share the
/// immutable cache.
class FockContext {
 public:
  static constexpr std::size_t kMaxBlockSize = 4096;

  FockContext(DeformedSpace space, double q, int max_degree) : space_(std::move(space)), q_(q), max_degree_(max_degree) {
    if (!(std::abs(q) < 1.0)) throw std::domain_error("FockContext: |q| must be < 1");
    if (max_degree < 0) throw std::invalid_argument("FockContext: negative truncation degree");
    if (ipow(static_cast<std::size_t>(space_.dim()), max_degree) > kMaxBlockSize)
      throw std::invalid_argument("FockContext: truncated space too large for dense storage");
    auto cache = std::make_shared<Cache>();
    for (int n = 0; n <= max_degree; ++n) {
      Degree deg;
      const RealMatrix p = build_symmetrizer(space_.dim(), n, q);
      {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(p, Eigen::EigenvaluesOnly);
        deg.min_eigenvalue = es.eigenvalues().minCoeff();
      }
      if (!(deg.min_eigenvalue > 0.0))
        throw std::domain_error("FockContext: q-symmetrizer is not positive definite");
      deg.symmetrizer = p.cast<cplx>();
      deg.symmetrizer_inverse = p.inverse().cast<cplx>();
      deg.metric_power = kron_power(space_.metric(), n);
      const RealMatrix gram = deg.metric_power.asDiagonal() * p;
      const RealMatrix gram_sym = 0.5 * (gram + gram.transpose());
      deg.gram = gram_sym.cast<cplx>();
      deg.gram_inverse = gram_sym.inverse().cast<cplx>();
      Eigen::LLT<RealMatrix> llt(gram_sym);
      if (llt.info() != Eigen::Success) throw std::domain_error("FockContext: Gram matrix is not positive definite");
      const RealMatrix l = llt.matrixL();
      deg.whiten = l.transpose().cast<cplx>();
      deg.unwhiten = l.transpose().inverse().cast<cplx>();
      cache->degrees.push_back(std::move(deg));
    }
    cache_ = std::move(cache);
  }

  const DeformedSpace& space() const { return space_; }
  int dim() const { return space_.dim(); }
  double q() const { return q_; }
  int max_degree() const { return max_degree_; }
  Eigen::Index block_size(int n) const { return static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(dim()), n)); }

  /// P_q^{(n)}.
  const Matrix& symmetrizer(int n) const { return degree(n).symmetrizer; }
  const Matrix& symmetrizer_inverse(int n) const { return degree(n).symmetrizer_inverse; }
  double symmetrizer_min_eigenvalue(int n) const { return degree(n).min_eigenvalue; }
  /// Diagonal of G^{⊗n}.
  const RealVector& metric_power(int n) const { return degree(n).metric_power; }
  /// G^{⊗n} P_q^{(n)}: the matrix of the q-inner product on degree n.
  const Matrix& gram(int n) const { return degree(n).gram; }
  const Matrix& gram_inverse(int n) const { return degree(n).gram_inverse; }
  /// L^H with gram = L L^H; maps coordinates to q-orthonormal coordinates.
  const Matrix& whiten(int n) const { return degree(n).whiten; }
  /// L^{-H}.
  const Matrix& unwhiten(int n) const { return degree(n).unwhiten; }

  GradedVector zero_vector() const { return GradedVector(dim(), max_degree_); }
  GradedVector vacuum() const { return GradedVector::vacuum(dim(), max_degree_); }
  GradedOperator identity() const { return GradedOperator::identity(dim(), max_degree_); }
  GradedOperator zero_operator() const { return GradedOperator(dim(), dim(), max_degree_); }

  /// Same base space and q with a different truncation.
  FockContext with_degree(int max_degree) const { return {space_, q_, max_degree}; }

 private:
  struct Degree {
    Matrix symmetrizer;
    Matrix symmetrizer_inverse;
    RealVector metric_power;
    Matrix gram;
    Matrix gram_inverse;
    Matrix whiten;
    Matrix unwhiten;
    double min_eigenvalue = 0.0;
  };
  struct Cache {
    std::vector<Degree> degrees;
  };

  const Degree& degree(int n) const {
    if (n < 0 || n > max_degree_) throw std::out_of_range("FockContext: degree out of range");
    return cache_->degrees[static_cast<std::size_t>(n)];
  }

  DeformedSpace space_;
  double q_ = 0.0;
  int max_degree_ = 0;
  std::shared_ptr<const Cache> cache_;
};

inline const Matrix& q_symmetrizer(const FockContext& ctx, int n) { return ctx.symmetrizer(n); }

/// ⟨ξ, η⟩_q on degree-n tensors (antilinear in ξ).
inline cplx q_inner(const FockContext& ctx, const Vector& xi, const Vector& eta, int n) {
  const auto& g = ctx.gram(n);
  if (xi.size() != g.rows() || eta.size() != g.rows()) throw std::invalid_argument("q_inner: block size mismatch");
  return xi.dot(g * eta);
}

inline cplx q_inner(const FockContext& ctx, const GradedVector& xi, const GradedVector& eta) {
  cplx s = 0.0;
  for (int n = 0; n <= ctx.max_degree(); ++n) s += q_inner(ctx, xi.block(n), eta.block(n), n);
  return s;
}

inline double q_norm(const FockContext& ctx, const GradedVector& xi) {
  return std::sqrt(std::max(0.0, q_inner(ctx, xi, xi).real()));
}

inline void check_vector(const FockContext& ctx, const Vector& v) {
  if (v.size() != ctx.dim()) throw std::invalid_argument("one-particle vector dimension mismatch");
}

/// a*_q(v): ξ ↦ v ⊗ ξ; the top degree is mapped to zero.
inline GradedOperator creation(const FockContext& ctx, const Vector& v) {
  check_vector(ctx, v);
  GradedOperator op = ctx.zero_operator();
  for (int n = 0; n + 1 <= ctx.max_degree(); ++n) {
    const Matrix col = v;
    op.set_block(n + 1, n, kron(col, Matrix(Matrix::Identity(ctx.block_size(n), ctx.block_size(n)))));
  }
  return op;
}

/// a_q(v) = P_q^{-1} a(v) P_q with a(v)(w₁⊗…⊗wₙ) = ⟨v, w₁⟩_U w₂⊗…⊗wₙ.
inline GradedOperator annihilation(const FockContext& ctx, const Vector& v) {
  check_vector(ctx, v);
  GradedOperator op = ctx.zero_operator();
  const Matrix row = (v.conjugate().array() * ctx.space().metric().cast<cplx>().array()).matrix().transpose();
  for (int n = 1; n <= ctx.max_degree(); ++n) {
    const Matrix free = kron(row, Matrix(Matrix::Identity(ctx.block_size(n - 1), ctx.block_size(n - 1))));
    op.set_block(n - 1, n, ctx.symmetrizer_inverse(n - 1) * free * ctx.symmetrizer(n));
  }
  return op;
}

/// s_q(h) = a*_q(h) + a_q(h). Warns on std::clog when h is not fixed by the conjugation.
inline GradedOperator s_q(const FockContext& ctx, const Vector& h, double tol = 1e-10) {
  check_vector(ctx, h);
  if ((ctx.space().conjugate(h) - h).norm() > tol)
    std::clog << "qfock: s_q called with a vector outside the real subspace\n";
  return creation(ctx, h) + annihilation(ctx, h);
}

/// F_q(T): degree-wise T^{⊗n}, from the Fock space of `source` to that of `target`.
inline GradedOperator first_quantization(const FockContext& source, const FockContext& target, const Matrix& t) {
  if (t.rows() != target.dim() || t.cols() != source.dim())
    throw std::invalid_argument("first_quantization: map shape mismatch");
  if (source.max_degree() != target.max_degree()) throw std::invalid_argument("first_quantization: truncation mismatch");
  GradedOperator op(target.dim(), source.dim(), source.max_degree());
  Matrix power = Matrix::Identity(1, 1);
  for (int n = 0; n <= source.max_degree(); ++n) {
    op.set_block(n, n, power);
    power = kron(power, t);
  }
  return op;
}

/// Adjoint with respect to the q-inner products of the two spaces.
inline GradedOperator q_adjoint(const GradedOperator& op, const FockContext& out, const FockContext& in) {
  GradedOperator adj(in.dim(), out.dim(), op.max_degree());
  for (const auto& [key, b] : op.blocks())
    adj.set_block(key.second, key.first, in.gram_inverse(key.second) * b.adjoint() * out.gram(key.first));
  return adj;
}

inline GradedOperator q_adjoint(const GradedOperator& op, const FockContext& ctx) { return q_adjoint(op, ctx, ctx); }

/// The operator in q-orthonormal coordinates, restricted to input degrees
/// <= max_in and output degrees <= max_out, as one dense matrix.
inline Matrix whitened_dense(const GradedOperator& op, const FockContext& out, const FockContext& in, int max_in,
                             int max_out) {
  std::vector<Eigen::Index> row_off{0}, col_off{0};
  for (int m = 0; m <= max_out; ++m) row_off.push_back(row_off.back() + out.block_size(m));
  for (int n = 0; n <= max_in; ++n) col_off.push_back(col_off.back() + in.block_size(n));
  Matrix dense = Matrix::Zero(row_off.back(), col_off.back());
  for (const auto& [key, b] : op.blocks()) {
    const auto [m, n] = key;
    if (m > max_out || n > max_in) continue;
    dense.block(row_off[static_cast<std::size_t>(m)], col_off[static_cast<std::size_t>(n)], b.rows(), b.cols()) =
        out.whiten(m) * b * in.unwhiten(n);
  }
  return dense;
}

/// Operator norm w.r.t. the q-inner products, restricted to input degrees <= max_in.
inline double q_operator_norm(const GradedOperator& op, const FockContext& out, const FockContext& in, int max_in) {
  if (max_in < 0) return 0.0;
  return spectral_norm(whitened_dense(op, out, in, max_in, out.max_degree()));
}

inline double q_operator_norm(const GradedOperator& op, const FockContext& ctx) {
  return q_operator_norm(op, ctx, ctx, ctx.max_degree());
}

/// ‖(a − b) restricted to input degrees <= max_in‖_q.
inline double window_residual(const GradedOperator& a, const GradedOperator& b, const FockContext& out,
                              const FockContext& in, int max_in) {
  return q_operator_norm(a - b, out, in, max_in);
}

inline double window_residual(const GradedOperator& a, const GradedOperator& b, const FockContext& ctx, int max_in) {
  return window_residual(a, b, ctx, ctx, max_in);
}

/// Smallest eigenvalue of a q-self-adjoint operator compressed to degrees <= window.
inline double q_min_eigenvalue(const GradedOperator& op, const FockContext& ctx, int window) {
  return min_hermitian_eigenvalue(whitened_dense(op, ctx, ctx, window, window));
}

/// R*_{n+k,k}: v₁⊗…⊗v_{n+k} ↦ Σ_{|I₁|=n} q^{i(I₁,I₂)} v_{I₁} ⊗ v_{I₂}.
inline Matrix r_star(const FockContext& ctx, int n, int k) {
  if (n < 0 || k < 0 || n + k > ctx.max_degree()) throw std::out_of_range("r_star: degree overflow");
  const auto size = ctx.block_size(n + k);
  Matrix r = Matrix::Zero(size, size);
  for (const auto& part : crossing_partitions(n + k, n)) {
    const double weight = std::pow(ctx.q(), crossing_number(part));
    if (weight == 0.0) continue;
    std::vector<int> order;
    for (int i : part.first) order.push_back(i - 1);
    for (int j : part.second) order.push_back(j - 1);
    const auto map = axis_reorder_map(ctx.dim(), order);
    for (std::size_t j = 0; j < map.size(); ++j) r(static_cast<Eigen::Index>(map[j]), static_cast<Eigen::Index>(j)) += weight;
  }
  return r;
}

/// ‖P_q^{(n+k)} − (P_q^{(n)} ⊗ P_q^{(k)}) R*_{n+k,k}‖.
inline double factorization_residual(const FockContext& ctx, int n, int k) {
  const Matrix rhs = kron(ctx.symmetrizer(n), ctx.symmetrizer(k)) * r_star(ctx, n, k);
  return spectral_norm(Matrix(ctx.symmetrizer(n + k) - rhs));
}

/// Norm of Id_{n,k}: H_q^{⊗n} ⊗ H_q^{⊗k} → H_q^{⊗(n+k)}.
inline double tensor_identity_norm(const FockContext& ctx, int n, int k) {
  const Matrix in_whiten = kron(ctx.whiten(n), ctx.whiten(k));
  return spectral_norm(Matrix(ctx.whiten(n + k) * in_whiten.inverse()));
}

/// Norm of R*_{n+k,k}: H_q^{⊗(n+k)} → H_q^{⊗n} ⊗ H_q^{⊗k}.
inline double r_star_q_norm(const FockContext& ctx, int n, int k) {
  const Matrix out_whiten = kron(ctx.whiten(n), ctx.whiten(k));
  return spectral_norm(Matrix(out_whiten * r_star(ctx, n, k) * ctx.unwhiten(n + k)));
}

/// Operator ζ ↦ Σ_{α,i} K[α,i] f_α ⊗ (P_q^{-1} contraction of the leading
/// indices of P_q ζ against i): the degree-(k, r) building block shared by Wick
/// words and Toeplitz monomials. K is dim^k × dim^r in plain coordinates, with
/// any metric weights already folded in. Blocks leaving the truncation are dropped.
inline GradedOperator contraction_operator(const FockContext& ctx, const Matrix& kernel, int k, int r) {
  const auto d = static_cast<std::size_t>(ctx.dim());
  if (kernel.rows() != static_cast<Eigen::Index>(ipow(d, k)) || kernel.cols() != static_cast<Eigen::Index>(ipow(d, r)))
    throw std::invalid_argument("contraction_operator: kernel shape mismatch");
  GradedOperator op = ctx.zero_operator();
  const auto dk = kernel.rows();
  const auto dr = kernel.cols();
  for (int m = r; m <= ctx.max_degree(); ++m) {
    const int rest = m - r;
    if (rest + k > ctx.max_degree()) break;
    const auto drest = ctx.block_size(rest);
    const auto dm = ctx.block_size(m);
    if (r == 0) {
      op.set_block(m + k, m, kron(kernel, Matrix(Matrix::Identity(drest, drest))));
      continue;
    }
    const Matrix& p = ctx.symmetrizer(m);
    // Column c of (K ⊗ I) P is K applied to the leading r indices of P[:, c].
    Matrix stage(drest, dk * dm);
    for (Eigen::Index c = 0; c < dm; ++c) {
      Eigen::Map<const Matrix> col(p.data() + c * dm, drest, dr);
      stage.middleCols(c * dk, dk).noalias() = col * kernel.transpose();
    }
    if (rest > 0) stage = ctx.symmetrizer_inverse(rest) * stage;
    op.set_block(m - r + k, m, Eigen::Map<const Matrix>(stage.data(), dk * drest, dm));
  }
  return op;
}

}  // namespace qfock

#endif  // QFOCK_FOCK_HPP
