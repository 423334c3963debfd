#ifndef QFOCK_QUANTIZATION_HPP
#define QFOCK_QUANTIZATION_HPP

#include "qfock/wick.hpp"

#include <array>

namespace qfock {

/// x ↦ F_q(V) x F_q(V)^† from operators on the Fock space of `in` to those of `out`.
class ConjugationChannel {
 public:
  ConjugationChannel(const FockContext& out, const FockContext& in, const Matrix& v)
      : implementer_(first_quantization(in, out, v)), implementer_adjoint_(q_adjoint(implementer_, out, in)) {}

  GradedOperator operator()(const GradedOperator& x) const { return implementer_ * x * implementer_adjoint_; }

  const GradedOperator& implementer() const { return implementer_; }
  const GradedOperator& implementer_adjoint() const { return implementer_adjoint_; }

 private:
  GradedOperator implementer_;
  GradedOperator implementer_adjoint_;
};

inline ConjugationChannel conjugation_channel(const FockContext& out, const FockContext& in, const Matrix& v) {
  return {out, in, v};
}

/// Γ_q(ι) on Wick words: W_K(ξ) ↦ W_{K⊕H}(ι^{⊗n} ξ), with ι the given isometric inclusion.
inline WickWord embed_wick(const FockContext& small, const FockContext& large, const WickWord& x,
                           const Matrix& inclusion) {
  if (x.tensor().dim() != small.dim()) throw std::invalid_argument("embed_wick: word does not live over the source");
  const auto lifted = first_quantization(small, large, inclusion).apply(x.tensor());
  return wick_word(large, lifted);
}

/// Inclusion onto the leading coordinates of `large`.
inline WickWord embed_wick(const FockContext& small, const FockContext& large, const WickWord& x) {
  if (large.dim() < small.dim()) throw std::invalid_argument("embed_wick: target smaller than source");
  Matrix inclusion = Matrix::Zero(large.dim(), small.dim());
  inclusion.topRows(small.dim()).setIdentity();
  return embed_wick(small, large, x, inclusion);
}

/// Largest truncation degree (capped at 5) keeping Fock blocks over a space of
/// dimension `sum_dim` at most `max_block` wide.
inline int quantization_degree(int sum_dim, std::size_t max_block = 300) {
  int n = 0;
  while (n < 5 && ipow(static_cast<std::size_t>(sum_dim), n + 1) <= max_block) ++n;
  return n;
}

/// Γ_q(T) = 𝒯_q(P) ∘ 𝒯_q(U_T) ∘ Γ_q(ι) for a contraction with J·T·I = T, acting
/// on Wick words of the source. Results are exact on input degrees up to
/// max_degree − (word degree).
class QuantizationChannel {
 public:
  /// `sum` may carry a prebuilt context over source ⊕ target so that channels
  /// between the same spaces share their symmetrizer cache.
  QuantizationChannel(FockContext source, FockContext target, DeformedContraction t, double iti_tol = 1e-10,
                      std::shared_ptr<const FockContext> sum = nullptr)
      : source_(std::move(source)), target_(std::move(target)), contraction_(std::move(t)), sum_(std::move(sum)) {
    if (source_.dim() != contraction_.source().dim() || target_.dim() != contraction_.target().dim())
      throw std::invalid_argument("QuantizationChannel: contexts do not match the contraction");
    if (source_.q() != target_.q() || source_.max_degree() != target_.max_degree())
      throw std::invalid_argument("QuantizationChannel: contexts differ in q or truncation");
    const double r = contraction_.iti_residual();
    if (r > iti_tol)
      throw std::domain_error("QuantizationChannel: contraction violates J T I = T (residual " + std::to_string(r) + ")");
    dilation_ = dilate(contraction_);
    if (!sum_) {
      sum_ = std::make_shared<const FockContext>(dilation_.sum, source_.q(), source_.max_degree());
    } else if (sum_->dim() != dilation_.sum.dim() || sum_->q() != source_.q() ||
               sum_->max_degree() != source_.max_degree() ||
               sum_->space().generator() != dilation_.sum.generator()) {
      throw std::invalid_argument("QuantizationChannel: supplied context is not over source ⊕ target");
    }
    // 𝒯_q(P)∘𝒯_q(U_T) is conjugation by F_q(P)F_q(U_T) = F_q(P U_T).
    conjugator_ = first_quantization(*sum_, target_, dilation_.projection * dilation_.unitary);
    conjugator_adjoint_ = q_adjoint(conjugator_, target_, *sum_);
  }

  const FockContext& source() const { return source_; }
  const FockContext& target() const { return target_; }
  const FockContext& sum_context() const { return *sum_; }
  const DeformedContraction& contraction() const { return contraction_; }
  const Dilation& dilation() const { return dilation_; }

  /// Γ_q(ι)(x) realized on the Fock space over source ⊕ target.
  GradedOperator embed(const WickWord& x) const {
    return embed_wick(source_, *sum_, x, dilation_.inclusion).realized();
  }

  const GradedOperator& conjugator() const { return conjugator_; }

  /// 𝒯_q(P) ∘ 𝒯_q(U_T) applied to an operator over source ⊕ target.
  GradedOperator conjugate(const GradedOperator& y) const { return conjugator_ * y * conjugator_adjoint_; }

  GradedOperator apply(const WickWord& x) const { return conjugate(embed(x)); }

  /// Φ(x^† y), using that Γ_q(ι) is a *-homomorphism.
  GradedOperator apply_product(const WickWord& x, const WickWord& y) const {
    return conjugate(q_adjoint(embed(x), *sum_) * embed(y));
  }

  /// The Wick word of the target determined by Φ(x)Ω.
  WickWord apply_word(const WickWord& x) const { return wick_word(target_, apply(x).apply(target_.vacuum())); }

  /// W(T^{⊗n} ξ) built directly over the target.
  GradedOperator direct(const WickWord& x) const { return wick_word(target_, gns(x.tensor())).realized(); }

  /// F_q(T)ξ.
  GradedVector gns(const GradedVector& xi) const {
    return first_quantization(source_, target_, contraction_.matrix()).apply(xi);
  }

 private:
  FockContext source_;
  FockContext target_;
  DeformedContraction contraction_;
  std::shared_ptr<const FockContext> sum_;
  Dilation dilation_;
  GradedOperator conjugator_;
  GradedOperator conjugator_adjoint_;
};

inline QuantizationChannel second_quantization(const FockContext& source, const FockContext& target,
                                               const DeformedContraction& t) {
  return {source, target, t};
}

/// ‖Φ(W(ξ))Ω − F_q(T)ξ‖_q.
inline double gns_residual(const QuantizationChannel& channel, const GradedVector& xi) {
  const auto& tgt = channel.target();
  const auto image = channel.apply(wick_word(channel.source(), xi)).apply(tgt.vacuum());
  return q_norm(tgt, image - channel.gns(xi));
}

/// ‖Φ(W(ξ)) − W(T^{⊗n}ξ)‖ on the safe window.
inline double covariance_residual(const QuantizationChannel& channel, const WickWord& x) {
  return window_residual(channel.apply(x), channel.direct(x), channel.target(), x.safe_input_degree());
}

/// |⟨Ω, Φ(x)Ω⟩ − ⟨Ω, xΩ⟩|.
inline double vacuum_state_residual(const QuantizationChannel& channel, const WickWord& x) {
  const cplx before = x.realized().block(0, 0)(0, 0);
  const cplx after = channel.apply(x).block(0, 0)(0, 0);
  return std::abs(after - before);
}

inline double unitality_residual(const QuantizationChannel& channel) {
  const auto id = channel.apply(wick_word(channel.source(), channel.source().vacuum()));
  return window_residual(id, channel.target().identity(), channel.target(), channel.target().max_degree());
}

struct PositivityReport {
  int samples = 0;
  double min_phi_square = 0.0;      // min eigenvalue of Φ(x^†x)
  double min_kadison_schwarz = 0.0;  // min eigenvalue of Φ(x^†x) − Φ(x)^†Φ(x)
  double min_two_positivity = 0.0;   // min eigenvalue of Φ⁽²⁾(X^†X)
};

/// How Φ is evaluated on products of Wick words. `direct` writes x^†y as the
/// Wick word of x^†yΩ and applies W(ζ) ↦ W(T^{⊗n}ζ); `dilation` conjugates
/// Γ_q(ι)(x)^†Γ_q(ι)(y) by F_q(P U_T).
enum class ChannelRoute { direct, dilation };

/// Random Wick word of degree at most `degree` over ctx.
inline WickWord random_wick_word(const FockContext& ctx, int degree, Rng& rng) {
  GradedVector xi = ctx.zero_vector();
  for (int n = 0; n <= degree; ++n) xi.block(n) = random_vector(ctx.block_size(n), rng);
  return wick_word(ctx, xi);
}

/// Numerical complete-positivity probe on Wick words of degree at most
/// `word_degree`, compressed to degrees <= max_degree − 2·word_degree.
inline PositivityReport positivity_probe(const QuantizationChannel& channel, int samples, int word_degree, Rng& rng,
                                         ChannelRoute route = ChannelRoute::direct) {
  if (samples < 1) throw std::invalid_argument("positivity_probe: need at least one sample");
  const auto& src = channel.source();
  const auto& tgt = channel.target();
  const int window = tgt.max_degree() - 2 * word_degree;
  if (window < 0) throw std::invalid_argument("positivity_probe: word degree too large for truncation");

  const auto phi = [&](const WickWord& x) {
    return route == ChannelRoute::direct ? channel.direct(x) : channel.apply(x);
  };
  const auto phi_product = [&](const WickWord& x, const WickWord& y) {
    if (route == ChannelRoute::dilation) return channel.apply_product(x, y);
    const auto zeta = q_adjoint(x.realized(), src).apply(y.tensor());
    return wick_word(tgt, channel.gns(zeta)).realized();
  };

  PositivityReport report;
  report.samples = samples;
  report.min_phi_square = report.min_kadison_schwarz = report.min_two_positivity =
      std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const auto x = random_wick_word(src, word_degree, rng);
    const auto phi_sq = phi_product(x, x);
    const auto phi_x = phi(x);
    const auto ks = phi_sq - q_adjoint(phi_x, tgt) * phi_x;
    report.min_phi_square = std::min(report.min_phi_square, q_min_eigenvalue(phi_sq, tgt, window));
    report.min_kadison_schwarz = std::min(report.min_kadison_schwarz, q_min_eigenvalue(ks, tgt, window));

    // Φ⁽²⁾(X^†X) for a random 2×2 matrix X of Wick words: entry (i, j) = Σ_k Φ(x_ki^† x_kj).
    std::vector<WickWord> xs;  // xs[2k + i] = x_ki
    for (int i = 0; i < 4; ++i) xs.push_back(random_wick_word(src, word_degree, rng));
    std::array<std::array<Matrix, 2>, 2> entries;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto e = phi_product(xs[i], xs[j]) + phi_product(xs[2 + i], xs[2 + j]);
        entries[i][j] = whitened_dense(e, tgt, tgt, window, window);
      }
    const auto b = entries[0][0].rows();
    Matrix big(2 * b, 2 * b);
    big << entries[0][0], entries[0][1], entries[1][0], entries[1][1];
    report.min_two_positivity = std::min(report.min_two_positivity, min_hermitian_eigenvalue(big));
  }
  return report;
}

}  // namespace qfock

#endif  // QFOCK_QUANTIZATION_HPP
