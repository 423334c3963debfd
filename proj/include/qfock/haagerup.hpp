#ifndef QFOCK_HAAGERUP_HPP
#define QFOCK_HAAGERUP_HPP

#include "qfock/quantization.hpp"

namespace qfock {

/// h_k(λ) = μ/(μ + 1/k) with μ = min(λ, 1/λ), written in terms of max(λ, 1/λ).
inline double admissible_weight(int k, double lambda_max) { return 1.0 / (1.0 + lambda_max / k); }

/// T_k = h_k(A): commutes with A^{it} and satisfies I T_k I = T_k; T_k → Id as k → ∞.
inline DeformedContraction generate_admissible(const DeformedSpace& space, int k) {
  if (k < 1) throw std::invalid_argument("generate_admissible: k must be positive");
  return {space, space, paired_spectral_map(space, [k](double a) { return admissible_weight(k, a); })};
}

/// A random contraction with J T I = T that need not commute with A^{it}.
inline DeformedContraction generate_real_contraction(const DeformedSpace& space, double norm, Rng& rng) {
  return random_contraction(space, space, norm, rng, true);
}

inline std::vector<int> default_k_grid() { return {1, 2, 4, 8, 16, 32, 64}; }
inline std::vector<double> default_t_grid() {
  return {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
}

/// The maps e^{−t}T_k over a (k, t) grid, with their first and second quantizations.
class ApproximantFamily {
 public:
  explicit ApproximantFamily(FockContext ctx, std::vector<int> ks = default_k_grid(),
                             std::vector<double> ts = default_t_grid())
      : ctx_(std::move(ctx)), ks_(std::move(ks)), ts_(std::move(ts)) {
    if (ks_.empty() || ts_.empty()) throw std::invalid_argument("ApproximantFamily: empty grid");
    for (double t : ts_)
      if (!(t > 0.0)) throw std::invalid_argument("ApproximantFamily: t must be positive");
    for (int k : ks_) {
      base_.push_back(generate_admissible(ctx_.space(), k));
      if (base_.back().iti_residual() > 1e-10) throw std::logic_error("ApproximantFamily: generated map is not real");
    }
    const int channel_degree =
        std::min(ctx_.max_degree(), quantization_degree(2 * ctx_.dim()));
    channel_ctx_ = std::make_shared<const FockContext>(ctx_.with_degree(channel_degree));
    sum_ctx_ = std::make_shared<const FockContext>(DeformedSpace::direct_sum(ctx_.space(), ctx_.space()), ctx_.q(),
                                                    channel_degree);
  }

  const FockContext& context() const { return ctx_; }
  const FockContext& channel_context() const { return *channel_ctx_; }
  const std::vector<int>& ks() const { return ks_; }
  const std::vector<double>& ts() const { return ts_; }
  const DeformedContraction& base(std::size_t ki) const { return base_.at(ki); }

  DeformedContraction map(std::size_t ki, std::size_t ti) const { return base(ki).scaled(std::exp(-ts_.at(ti))); }

  /// F_q(e^{−t}T_k) on the family's truncation.
  GradedOperator implementer(std::size_t ki, std::size_t ti) const {
    return first_quantization(ctx_, ctx_, map(ki, ti).matrix());
  }

  /// Γ_q(e^{−t}T_k), on the (possibly lower) truncation used for channels.
  QuantizationChannel channel(std::size_t ki, std::size_t ti) const {
    return {*channel_ctx_, *channel_ctx_, map(ki, ti), 1e-10, sum_ctx_};
  }

  /// Grid points (k_i, t_i) with k increasing and t decreasing together.
  std::size_t diagonal_size() const { return std::min(ks_.size(), ts_.size()); }

 private:
  FockContext ctx_;
  std::vector<int> ks_;
  std::vector<double> ts_;
  std::vector<DeformedContraction> base_;
  std::shared_ptr<const FockContext> channel_ctx_;
  std::shared_ptr<const FockContext> sum_ctx_;
};

/// ‖F_q(e^{−t}T)‖ restricted to each degree m = 0..N.
inline std::vector<double> degree_norms(const FockContext& ctx, const Matrix& t_map, double t) {
  if (t_map.rows() != ctx.dim() || t_map.cols() != ctx.dim()) throw std::invalid_argument("tail_norm: shape mismatch");
  const Matrix scaled = std::exp(-t) * t_map;
  std::vector<double> out{1.0};
  for (int m = 1; m <= ctx.max_degree(); ++m)
    out.push_back(spectral_norm(Matrix(ctx.whiten(m) * kron_power(scaled, m) * ctx.unwhiten(m))));
  return out;
}

/// Tail norms for n = 0..N−1 from per-degree norms.
inline std::vector<double> tail_profile(const std::vector<double>& degree_norm) {
  std::vector<double> tails(degree_norm.size() - 1);
  double sup = 0.0;
  for (std::size_t n = tails.size(); n-- > 0;) tails[n] = sup = std::max(sup, degree_norm[n + 1]);
  return tails;
}

/// ‖P_n^⊥ F_q(e^{−t}T)‖ on the truncated Fock space, P_n^⊥ the projection onto degrees > n.
inline double tail_norm(const FockContext& ctx, const Matrix& t_map, double t, int n) {
  if (n < 0 || n >= ctx.max_degree()) throw std::out_of_range("tail_norm: need 0 <= n < N");
  return tail_profile(degree_norms(ctx, t_map, t))[static_cast<std::size_t>(n)];
}

inline double tail_bound(double t, int n) { return std::exp(-t * (n + 1)); }

/// |tail norm with the q-metric − tail norm with the q = 0 metric| over the same space.
inline double free_reduction_crosscheck(const FockContext& ctx, const FockContext& free_ctx, const Matrix& t_map,
                                        double t, int n) {
  if (free_ctx.q() != 0.0 || free_ctx.max_degree() != ctx.max_degree() || free_ctx.dim() != ctx.dim())
    throw std::invalid_argument("free_reduction_crosscheck: mismatched free context");
  return std::abs(tail_norm(ctx, t_map, t, n) - tail_norm(free_ctx, t_map, t, n));
}

inline double free_reduction_crosscheck(const FockContext& ctx, const Matrix& t_map, double t, int n) {
  return free_reduction_crosscheck(ctx, FockContext(ctx.space(), 0.0, ctx.max_degree()), t_map, t, n);
}

struct ConvergenceReport {
  std::vector<std::vector<double>> distances;  // [vector][diagonal step]
  bool monotone = true;
  double finest = 0.0;  // worst distance at the last diagonal point
  double tolerance = 1e-6;
  bool pass() const { return monotone && finest <= tolerance; }
};

/// ‖F_q(e^{−t_i}T_{k_i})ξ − ξ‖_q along the diagonal of the grid.
inline ConvergenceReport strong_convergence_sweep(const ApproximantFamily& family, const std::vector<GradedVector>& vectors,
                                                  double tolerance = 1e-6, double monotone_slack = 1e-14) {
  if (vectors.empty()) throw std::invalid_argument("strong_convergence_sweep: no test vectors");
  const auto& ctx = family.context();
  ConvergenceReport report;
  report.tolerance = tolerance;
  std::vector<GradedOperator> ops;
  for (std::size_t i = 0; i < family.diagonal_size(); ++i) ops.push_back(family.implementer(i, i));
  for (const auto& xi : vectors) {
    std::vector<double> row;
    for (const auto& op : ops) row.push_back(q_norm(ctx, op.apply(xi) - xi));
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i] > row[i - 1] + monotone_slack) report.monotone = false;
    report.finest = std::max(report.finest, row.back());
    report.distances.push_back(std::move(row));
  }
  return report;
}

/// sup over the given Wick words of |⟨Ω, Φ(x)Ω⟩ − ⟨Ω, xΩ⟩|.
inline double state_preservation_check(const QuantizationChannel& channel, const std::vector<WickWord>& words) {
  double sup = 0.0;
  for (const auto& x : words) sup = std::max(sup, vacuum_state_residual(channel, x));
  return sup;
}

struct CompactnessRow {
  int n = 0;
  double tail = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // tail(n) / tail(n−1); 0 for the first row
};

inline std::vector<CompactnessRow> compactness_profile(const FockContext& ctx, const Matrix& t_map, double t, int n_max) {
  if (n_max >= ctx.max_degree()) throw std::out_of_range("compactness_profile: n_max must be below N");
  std::vector<CompactnessRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    CompactnessRow r;
    r.n = n;
    r.tail = tail_norm(ctx, t_map, t, n);
    r.bound = tail_bound(t, n);
    if (n > 0 && rows.back().tail > 0.0) r.ratio = r.tail / rows.back().tail;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qfock

#endif  // QFOCK_HAAGERUP_HPP
