#ifndef QFOCK_WICK_HPP
#define QFOCK_WICK_HPP

#include "qfock/crossing.hpp"
#include "qfock/fock.hpp"

namespace qfock {

/// A tensor ξ together with the operator W(ξ) satisfying W(ξ)Ω = ξ.
class WickWord {
 public:
  WickWord(GradedVector tensor, GradedOperator realized)
      : tensor_(std::move(tensor)), realized_(std::move(realized)) {}

  const GradedVector& tensor() const { return tensor_; }
  const GradedOperator& realized() const { return realized_; }

  /// Highest tensor degree present (0 for scalars and the zero word).
  int degree() const { return std::max(0, tensor_.top_degree()); }

  /// Largest input degree on which the truncated realization is exact.
  int safe_input_degree() const { return tensor_.max_degree() - degree(); }

 private:
  GradedVector tensor_;
  GradedOperator realized_;
};

namespace detail {

// For a multi-index β of length r, the contraction index (S β_r, ..., S β_1)
// and its metric weight Π G.
struct AnnihilationIndex {
  std::vector<Eigen::Index> target;
  std::vector<double> weight;
};

inline AnnihilationIndex annihilation_index(const DeformedSpace& space, int r, bool conjugate) {
  const int d = space.dim();
  const std::size_t size = ipow(static_cast<std::size_t>(d), r);
  AnnihilationIndex out;
  out.target.resize(size);
  out.weight.resize(size);
  std::vector<int> contracted(static_cast<std::size_t>(r));
  for (std::size_t beta = 0; beta < size; ++beta) {
    const auto digits = tensor_digits(beta, d, r);
    double w = 1.0;
    for (int s = 0; s < r; ++s) {
      int b = digits[static_cast<std::size_t>(r - 1 - s)];
      if (conjugate) b = space.pairing()[static_cast<std::size_t>(b)];
      contracted[static_cast<std::size_t>(s)] = b;
      w *= space.metric()(b);
    }
    out.target[beta] = static_cast<Eigen::Index>(tensor_index(contracted, d));
    out.weight[beta] = w;
  }
  return out;
}

}  // namespace detail

/// W(ξ) for a homogeneous degree-n tensor, expanded by the crossing-weighted
/// sum over partitions I₁ ⊔ I₂ of creations a*_q(e_{I₁}) followed by
/// annihilations a_q(I e_{I₂}).
inline GradedOperator wick_operator(const FockContext& ctx, const Vector& tensor, int n) {
  if (n < 0 || n > ctx.max_degree()) throw std::out_of_range("wick_operator: degree overflow");
  if (tensor.size() != ctx.block_size(n)) throw std::invalid_argument("wick_operator: tensor size mismatch");
  const int d = ctx.dim();
  GradedOperator op = ctx.zero_operator();
  if (n == 0) return tensor(0) * ctx.identity();

  for (int k = 0; k <= n; ++k) {
    const int r = n - k;
    const auto dk = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), k));
    const auto dr = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), r));
    const auto index = detail::annihilation_index(ctx.space(), r, true);
    Matrix kernel = Matrix::Zero(dk, dr);
    for (const auto& part : crossing_partitions(n, k)) {
      const double weight = std::pow(ctx.q(), crossing_number(part));
      if (weight == 0.0) continue;
      std::vector<int> order;
      for (int i : part.first) order.push_back(i - 1);
      for (int j : part.second) order.push_back(j - 1);
      const Vector reordered = reorder_axes(tensor, d, order);
      for (Eigen::Index alpha = 0; alpha < dk; ++alpha)
        for (Eigen::Index beta = 0; beta < dr; ++beta)
          kernel(alpha, index.target[static_cast<std::size_t>(beta)]) +=
              weight * index.weight[static_cast<std::size_t>(beta)] * reordered(alpha * dr + beta);
    }
    op += contraction_operator(ctx, kernel, k, r);
  }
  return op;
}

inline WickWord wick_word(const FockContext& ctx, const GradedVector& xi) {
  if (xi.dim() != ctx.dim() || xi.max_degree() != ctx.max_degree())
    throw std::invalid_argument("wick_word: tensor shape mismatch");
  GradedOperator op = ctx.zero_operator();
  for (int n = 0; n <= ctx.max_degree(); ++n) {
    if (xi.block(n).cwiseAbs().maxCoeff() == 0.0) continue;
    op += wick_operator(ctx, xi.block(n), n);
  }
  return {xi, std::move(op)};
}

/// W(e₁ ⊗ … ⊗ eₙ).
inline WickWord wick_word(const FockContext& ctx, std::span<const Vector> factors) {
  const int n = static_cast<int>(factors.size());
  if (n > ctx.max_degree()) throw std::out_of_range("wick_word: degree overflow");
  for (const auto& f : factors) check_vector(ctx, f);
  return wick_word(ctx, GradedVector::homogeneous(ctx.dim(), ctx.max_degree(), n, simple_tensor(factors)));
}

/// ‖W(ξ)Ω − ξ‖_q.
inline double vacuum_residual(const FockContext& ctx, const GradedVector& xi) {
  const auto word = wick_word(ctx, xi);
  return q_norm(ctx, word.realized().apply(ctx.vacuum()) - xi);
}

}  // namespace qfock

#endif  // QFOCK_WICK_HPP
