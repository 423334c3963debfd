#ifndef QFOCK_TOEPLITZ_HPP
#define QFOCK_TOEPLITZ_HPP

#include "qfock/wick.hpp"

namespace qfock {

/// Σ K[α, β] a*_q(f_α) a_q(f̄_β) with k creations and r annihilations, where
/// a_q(f̄_β) = a_q(f_{β₁})…a_q(f_{β_r}). The A_{k,k+r} image of the coefficient
/// tensor K ∈ H^{⊗k} ⊗ H̄^{⊗r}.
class LengthElement {
 public:
  LengthElement(int creations, int annihilations, Matrix kernel, GradedOperator realized)
      : creations_(creations), annihilations_(annihilations), kernel_(std::move(kernel)), realized_(std::move(realized)) {}

  int creations() const { return creations_; }
  int annihilations() const { return annihilations_; }
  int total_length() const { return creations_ + annihilations_; }
  bool balanced() const { return creations_ == annihilations_; }

  /// n for elements a*_q(v_n)a_q(w̄_n).
  int length() const {
    if (!balanced()) throw std::logic_error("LengthElement: unbalanced element has no length in the balanced sense");
    return creations_;
  }

  const Matrix& kernel() const { return kernel_; }
  const GradedOperator& realized() const { return realized_; }

 private:
  int creations_;
  int annihilations_;
  Matrix kernel_;
  GradedOperator realized_;
};

inline LengthElement length_element(const FockContext& ctx, int creations, int annihilations, const Matrix& kernel) {
  if (creations < 0 || annihilations < 0 || creations + annihilations > ctx.max_degree())
    throw std::out_of_range("length_element: degree overflow");
  const auto d = static_cast<std::size_t>(ctx.dim());
  const auto dk = static_cast<Eigen::Index>(ipow(d, creations));
  const auto dr = static_cast<Eigen::Index>(ipow(d, annihilations));
  if (kernel.rows() != dk || kernel.cols() != dr) throw std::invalid_argument("length_element: kernel shape mismatch");
  // a_q(f_{β₁})…a_q(f_{β_r}) contracts the leading input indices against (β_r, …, β₁).
  const auto index = detail::annihilation_index(ctx.space(), annihilations, false);
  Matrix contracted = Matrix::Zero(dk, dr);
  for (Eigen::Index b = 0; b < dr; ++b)
    contracted.col(index.target[static_cast<std::size_t>(b)]) += index.weight[static_cast<std::size_t>(b)] * kernel.col(b);
  return {creations, annihilations, kernel, contraction_operator(ctx, contracted, creations, annihilations)};
}

/// a*_q(v₁)…a*_q(v_k) a_q(w₁)…a_q(w_r).
inline LengthElement monomial(const FockContext& ctx, std::span<const Vector> v, std::span<const Vector> w) {
  for (const auto& x : v) check_vector(ctx, x);
  for (const auto& x : w) check_vector(ctx, x);
  const Vector vt = v.empty() ? Vector::Ones(1) : simple_tensor(v);
  const Vector wt = w.empty() ? Vector::Ones(1) : simple_tensor(w);
  return length_element(ctx, static_cast<int>(v.size()), static_cast<int>(w.size()), vt * wt.adjoint());
}

/// Sum of balanced length elements; block diagonal in the degree grading.
class BalancedElement {
 public:
  explicit BalancedElement(std::vector<LengthElement> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("BalancedElement: empty");
    for (const auto& p : parts_)
      if (!p.balanced()) throw std::invalid_argument("BalancedElement: part is not balanced");
    realized_ = parts_.front().realized();
    for (std::size_t i = 1; i < parts_.size(); ++i) realized_ += parts_[i].realized();
  }

  const std::vector<LengthElement>& parts() const { return parts_; }
  const GradedOperator& realized() const { return realized_; }

 private:
  std::vector<LengthElement> parts_;
  GradedOperator realized_;
};

/// Random balanced element of length n with complex normal coefficients.
inline LengthElement random_balanced(const FockContext& ctx, int n, Rng& rng) {
  const auto size = ctx.block_size(n);
  return length_element(ctx, n, n, random_matrix(size, size, rng));
}

/// Average of F_q(e^{it}) x F_q(e^{-it}) over the circle: the degree-preserving blocks of x.
inline GradedOperator degree_expectation(const GradedOperator& x) {
  GradedOperator out(x.out_dim(), x.in_dim(), x.max_degree());
  for (const auto& [key, b] : x.blocks())
    if (key.first == key.second) out.set_block(key.first, key.second, b);
  return out;
}

/// Σ: h₁⊗…⊗hₙ ↦ hₙ⊗…⊗h₁ on degree-n tensors.
inline Matrix flip(int dim, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) order[static_cast<std::size_t>(s)] = n - 1 - s;
  const auto map = axis_reorder_map(dim, order);
  const auto size = static_cast<Eigen::Index>(map.size());
  Matrix out = Matrix::Zero(size, size);
  for (std::size_t j = 0; j < map.size(); ++j) out(static_cast<Eigen::Index>(map[j]), static_cast<Eigen::Index>(j)) = 1.0;
  return out;
}

inline Matrix flip(const FockContext& ctx, int n) {
  if (n < 0 || n > ctx.max_degree()) throw std::out_of_range("flip: degree overflow");
  return flip(ctx.dim(), n);
}

/// ‖a*_q(v)a_q(w̄)e − ⟨Σw, e⟩_q v‖_q on a degree-n input e. With
/// `plain_pairing` the pairing is the G-weighted tensor form without P_q.
inline double flip_pairing_residual(const FockContext& ctx, std::span<const Vector> v, std::span<const Vector> w,
                                    const Vector& e, bool plain_pairing = false) {
  const int n = static_cast<int>(v.size());
  if (static_cast<int>(w.size()) != n || n == 0) throw std::invalid_argument("flip_pairing_residual: need equal non-empty lists");
  if (e.size() != ctx.block_size(n)) throw std::invalid_argument("flip_pairing_residual: input degree mismatch");
  const auto x = monomial(ctx, v, w);
  const Vector lhs = x.realized().block(n, n) * e;
  const Vector sw = flip(ctx, n) * simple_tensor(w);
  const Vector pe = plain_pairing ? e : Vector(ctx.symmetrizer(n) * e);
  const cplx pairing = sw.dot(ctx.metric_power(n).cast<cplx>().cwiseProduct(pe));
  const Vector diff = lhs - pairing * simple_tensor(v);
  return std::sqrt(std::max(0.0, q_inner(ctx, diff, diff, n).real()));
}

/// x ↦ F_q(ι*) x F_q(ι) for the inclusion ι of a coordinate subspace K ⊂ H.
class Compression {
 public:
  Compression(const FockContext& ambient, std::vector<int> indices)
      : ambient_(ambient),
        indices_(std::move(indices)),
        sub_(ambient.space().subspace(indices_), ambient.q(), ambient.max_degree()) {
    inclusion_ = Matrix::Zero(ambient_.dim(), sub_.dim());
    for (std::size_t a = 0; a < indices_.size(); ++a)
      inclusion_(indices_[a], static_cast<Eigen::Index>(a)) = 1.0;
    lift_ = first_quantization(sub_, ambient_, inclusion_);
    restrict_ = first_quantization(ambient_, sub_, deformed_adjoint(sub_.space(), ambient_.space(), inclusion_));
  }

  const FockContext& ambient() const { return ambient_; }
  const FockContext& subspace() const { return sub_; }
  const Matrix& inclusion() const { return inclusion_; }
  const std::vector<int>& indices() const { return indices_; }

  GradedOperator operator()(const GradedOperator& x) const { return restrict_ * x * lift_; }

 private:
  FockContext ambient_;
  std::vector<int> indices_;
  FockContext sub_;
  Matrix inclusion_;
  GradedOperator lift_;
  GradedOperator restrict_;
};

struct RankReport {
  int columns = 0;
  int rank = 0;
  int rank_after_compression = 0;
  bool full() const { return rank == columns && rank_after_compression == columns; }
};

/// Column rank of A: 𝖳(K) → 𝒯_q(K, H) on the basis f_α ⊗ f̄_β (α ∈ K^k,
/// β ∈ K^r, k + r ≤ max_length), each realized operator flattened in whitened
/// coordinates on input degrees ≤ N − max_length; and the same after compressing to F_q(K).
inline RankReport finkernel_rank(const Compression& compression, int max_length, double rel_tol = 1e-8) {
  const auto& ctx = compression.ambient();
  const auto& sub = compression.subspace();
  if (max_length < 0 || 2 * max_length > ctx.max_degree())
    throw std::invalid_argument("finkernel_rank: max_length must be at most half the truncation degree");
  const int window = ctx.max_degree() - max_length;
  const auto dk = static_cast<std::size_t>(sub.dim());
  std::vector<Vector> on_h, on_k;
  for (int total = 0; total <= max_length; ++total) {
    for (int k = 0; k <= total; ++k) {
      const int r = total - k;
      const auto nk = ipow(dk, k), nr = ipow(dk, r);
      for (std::size_t alpha = 0; alpha < nk; ++alpha) {
        for (std::size_t beta = 0; beta < nr; ++beta) {
          std::vector<Vector> v, w;
          for (int digit : tensor_digits(alpha, sub.dim(), k))
            v.push_back(compression.inclusion().col(digit));
          for (int digit : tensor_digits(beta, sub.dim(), r))
            w.push_back(compression.inclusion().col(digit));
          const auto x = monomial(ctx, v, w).realized();
          const Matrix dense = whitened_dense(x, ctx, ctx, window, ctx.max_degree());
          on_h.push_back(Eigen::Map<const Vector>(dense.data(), dense.size()));
          const Matrix small = whitened_dense(compression(x), sub, sub, window, sub.max_degree());
          on_k.push_back(Eigen::Map<const Vector>(small.data(), small.size()));
        }
      }
    }
  }
  const auto stack = [](const std::vector<Vector>& cols) {
    Matrix m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(static_cast<Eigen::Index>(c)) = cols[c];
    return m;
  };
  RankReport report;
  report.columns = static_cast<int>(on_h.size());
  report.rank = numerical_rank(stack(on_h), rel_tol);
  report.rank_after_compression = numerical_rank(stack(on_k), rel_tol);
  return report;
}

/// Operator norm of a degree-n block in the q-inner product.
inline double q_block_norm(const FockContext& ctx, const Matrix& block, int n) {
  return spectral_norm(Matrix(ctx.whiten(n) * block * ctx.unwhiten(n)));
}

/// ‖P_{n+k} x P_{n+k} − Id_{n,k}(P_n x P_n ⊗ Id_k) R*_{n+k,k}‖_q for x of length n.
inline double compression_identity_residual(const FockContext& ctx, const LengthElement& x, int k) {
  const int n = x.length();
  if (k < 0 || n + k > ctx.max_degree()) throw std::out_of_range("compression_identity_residual: degree overflow");
  const Matrix lhs = x.realized().block(n + k, n + k);
  const auto dk = ctx.block_size(k);
  const Matrix rhs = kron(x.realized().block(n, n), Matrix(Matrix::Identity(dk, dk))) * r_star(ctx, n, k);
  return q_block_norm(ctx, Matrix(lhs - rhs), n + k);
}

/// C(q)‖P_n x P_n‖ − max_{k ≤ N−n} ‖P_{n+k} x P_{n+k}‖.
inline double norm_bound_margin(const FockContext& ctx, const LengthElement& x) {
  const int n = x.length();
  double sup = 0.0;
  for (int m = n; m <= ctx.max_degree(); ++m) sup = std::max(sup, q_block_norm(ctx, x.realized().block(m, m), m));
  return norm_constant(ctx.q()) * q_block_norm(ctx, x.realized().block(n, n), n) - sup;
}

struct MajorisationReport {
  bool consistent = false;    // A = B·T, A and B positive semidefinite
  double factor_residual = 0.0;  // ‖A − B T‖ / max(1, ‖A‖)
  double t_norm = 0.0;
  double margin = 0.0;  // min eigenvalue of ‖T‖B − A
};

/// A = B·T with A, B ⪰ 0 forces A ⪯ ‖T‖B.
inline MajorisationReport majorisation_check(const Matrix& a, const Matrix& b, const Matrix& t, double tol = 1e-12) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || t.rows() != b.cols() || t.cols() != a.cols())
    throw std::invalid_argument("majorisation_check: shape mismatch");
  MajorisationReport r;
  const double scale = std::max(1.0, spectral_norm(a));
  r.factor_residual = spectral_norm(Matrix(a - b * t)) / scale;
  const bool psd = min_hermitian_eigenvalue(a) >= -tol * scale && min_hermitian_eigenvalue(b) >= -tol * scale;
  const bool hermitian = (a - a.adjoint()).norm() <= tol * scale && (b - b.adjoint()).norm() <= tol * scale;
  r.consistent = psd && hermitian && r.factor_residual <= tol;
  r.t_norm = spectral_norm(t);
  r.margin = min_hermitian_eigenvalue(r.t_norm * b - a);
  return r;
}

/// The instance A = P_q^{(n+k)}, B = P_q^{(n)} ⊗ P_q^{(k)}, T = R*_{n+k,k}.
inline MajorisationReport symmetrizer_majorisation(const FockContext& ctx, int n, int k) {
  return majorisation_check(ctx.symmetrizer(n + k), kron(ctx.symmetrizer(n), ctx.symmetrizer(k)), r_star(ctx, n, k));
}

}  // namespace qfock

#endif  // QFOCK_TOEPLITZ_HPP
