#ifndef QFOCK_REPORT_HPP
#define QFOCK_REPORT_HPP

#include "qfock/haagerup.hpp"
#include "qfock/toeplitz.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace qfock {

struct SampleCounts {
  int wick_vectors = 100;
  int contractions = 50;
  int positivity = 100;
  int balanced = 5;
  int test_vectors = 4;
};

struct SweepConfig {
  std::vector<double> q{-0.9, -0.5, 0.0, 0.3, 0.5, 0.9};
  std::vector<std::string> spectra{"1", "1,1", "2", "2,1"};
  int degree = 5;
  std::uint64_t seed = 1;
  SampleCounts samples;
  std::map<std::string, double> tolerances;  // per-check bound overrides

  void validate() const {
    if (q.empty()) throw std::invalid_argument("config: q list is empty");
    for (double v : q)
      if (!(std::abs(v) < 1.0)) throw std::invalid_argument("config: q values must lie in (-1, 1)");
    if (spectra.empty()) throw std::invalid_argument("config: spectra list is empty");
    for (const auto& s : spectra) BlockSpectrum::parse(s);
    if (degree < 2 || degree > 6) throw std::invalid_argument("config: degree must be between 2 and 6");
    const int counts[] = {samples.wick_vectors, samples.contractions, samples.positivity, samples.balanced,
                          samples.test_vectors};
    for (int c : counts)
      if (c < 1) throw std::invalid_argument("config: sample counts must be positive");
  }

  double bound(const std::string& check, double fallback) const {
    const auto it = tolerances.find(check);
    return it == tolerances.end() ? fallback : it->second;
  }
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line, std::string field)
      : std::runtime_error(format(message, line, field)), line_(line), field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& message, int line, const std::string& field) {
    std::string out = "config";
    if (line > 0) out += " line " + std::to_string(line);
    if (!field.empty()) out += " field '" + field + "'";
    return out + ": " + message;
  }

  int line_;
  std::string field_;
};

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

}  // namespace detail

/// JSON config: {"q": [...], "spectra": [...], "degree": N, "seed": s,
/// "samples": {...}, "tolerances": {"check": bound}}. Missing keys keep defaults.
inline SweepConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what(), detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "");
  }
  if (!doc.is_object()) throw ConfigError("top level must be an object", 1, "");

  SweepConfig cfg;
  const auto fail = [&](const std::string& field, const std::string& what) -> ConfigError {
    const auto leaf = field.substr(field.rfind('.') == std::string::npos ? 0 : field.rfind('.') + 1);
    return ConfigError(what, detail::line_of_key(text, leaf), field);
  };
  const auto get_int = [&](const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw fail(field, "expected an integer");
    return v.get<long long>();
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "q") {
      if (!value.is_array()) throw fail(key, "expected an array of numbers");
      cfg.q.clear();
      for (const auto& v : value) {
        if (!v.is_number()) throw fail(key, "expected an array of numbers");
        cfg.q.push_back(v.get<double>());
      }
    } else if (key == "spectra") {
      if (!value.is_array()) throw fail(key, "expected an array of strings");
      cfg.spectra.clear();
      for (const auto& v : value) {
        if (!v.is_string()) throw fail(key, "expected an array of strings");
        cfg.spectra.push_back(v.get<std::string>());
      }
    } else if (key == "degree") {
      cfg.degree = static_cast<int>(get_int(value, key));
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw fail(key, "expected a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "samples") {
      if (!value.is_object()) throw fail(key, "expected an object");
      for (const auto& [name, count] : value.items()) {
        const std::string field = "samples." + name;
        int* slot = name == "wick_vectors"   ? &cfg.samples.wick_vectors
                    : name == "contractions" ? &cfg.samples.contractions
                    : name == "positivity"   ? &cfg.samples.positivity
                    : name == "balanced"     ? &cfg.samples.balanced
                    : name == "test_vectors" ? &cfg.samples.test_vectors
                                             : nullptr;
        if (!slot) throw fail(field, "unknown sample count");
        *slot = static_cast<int>(get_int(count, field));
      }
    } else if (key == "tolerances") {
      if (!value.is_object()) throw fail(key, "expected an object");
      for (const auto& [name, bound] : value.items()) {
        if (!bound.is_number()) throw fail("tolerances." + name, "expected a number");
        cfg.tolerances[name] = bound.get<double>();
      }
    } else {
      throw fail(key, "unknown key");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "");
  }
  return cfg;
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path, 0, "");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

struct VerificationReport {
  std::string check;
  std::string suite;
  double q = 0.0;
  std::string spectrum;
  int dim = 0;
  int degree = 0;
  double value = 0.0;
  std::string relation;  // "<=", ">=" or ">"
  double bound = 0.0;
  bool pass = false;
  std::optional<double> wall_ms;

  bool operator==(const VerificationReport&) const = default;
};

inline bool satisfies(double value, const std::string& relation, double bound) {
  if (std::isnan(value)) return false;
  if (relation == "<=") return value <= bound;
  if (relation == ">=") return value >= bound;
  if (relation == ">") return value > bound;
  throw std::invalid_argument("unknown relation " + relation);
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"symmetrizer", "wick", "quantization", "toeplitz", "haagerup"};
  return names;
}

inline std::vector<std::string> resolve_suites(const std::string& selector) {
  if (selector == "all") return suite_names();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), selector) == names.end())
    throw std::invalid_argument("unknown suite '" + selector + "'");
  return {selector};
}

struct RunOptions {
  int jobs = 1;
  bool timings = false;
};

namespace detail {

struct GridPoint {
  double q;
  std::string spectrum;
};

class Recorder {
 public:
  Recorder(const SweepConfig& cfg, std::string suite, const GridPoint& point, int dim, int degree, bool timings)
      : cfg_(cfg), suite_(std::move(suite)), point_(point), dim_(dim), degree_(degree), timings_(timings) {}

  /// Runs `compute`, recording its value against the (overridable) bound.
  template <class F>
  void check(const std::string& name, const std::string& relation, double bound, F&& compute) {
    VerificationReport r;
    r.check = name;
    r.suite = suite_;
    r.q = point_.q;
    r.spectrum = point_.spectrum;
    r.dim = dim_;
    r.degree = degree_;
    r.relation = relation;
    r.bound = cfg_.bound(name, bound);
    const auto start = std::chrono::steady_clock::now();
    try {
      r.value = compute();
    } catch (const std::exception&) {
      r.value = std::numeric_limits<double>::quiet_NaN();
    }
    if (timings_)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.pass = satisfies(r.value, r.relation, r.bound);
    out_.push_back(std::move(r));
  }

  std::vector<VerificationReport> take() { return std::move(out_); }

 private:
  const SweepConfig& cfg_;
  std::string suite_;
  GridPoint point_;
  int dim_;
  int degree_;
  bool timings_;
  std::vector<VerificationReport> out_;
};

inline GradedVector random_graded(const FockContext& ctx, int degree, Rng& rng) {
  GradedVector v = ctx.zero_vector();
  for (int n = 0; n <= degree; ++n) v.block(n) = random_vector(ctx.block_size(n), rng);
  return v;
}

inline Vector random_real(const DeformedSpace& space, Rng& rng) {
  std::normal_distribution<double> normal;
  RealVector c(space.dim());
  for (int i = 0; i < space.dim(); ++i) c(i) = normal(rng);
  return space.real_vector(c);
}

/// First pairing-closed block of the eigenbasis, used as the subspace K.
inline std::vector<int> leading_block(const DeformedSpace& space) {
  const int p = space.pairing().front();
  return p == 0 ? std::vector<int>{0} : std::vector<int>{0, p};
}

inline void symmetrizer_checks(Recorder& rec, const FockContext& ctx) {
  const int n_max = ctx.max_degree();
  rec.check("symmetrizer_min_eigenvalue", ">", 0.0, [&] {
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_max; ++n) m = std::min(m, ctx.symmetrizer_min_eigenvalue(n));
    return m;
  });
  rec.check("factorization_residual", "<=", 1e-10, [&] {
    double r = 0.0;
    for (int n = 1; n < n_max; ++n)
      for (int k = 1; n + k <= n_max; ++k) r = std::max(r, factorization_residual(ctx, n, k));
    return r;
  });
  rec.check("majorisation_consistency", "<=", 1e-12, [&] {
    double r = 0.0;
    for (int n = 1; n < n_max; ++n)
      for (int k = 1; n + k <= n_max; ++k) {
        const auto rep = symmetrizer_majorisation(ctx, n, k);
        r = std::max(r, rep.consistent ? rep.factor_residual : std::numeric_limits<double>::infinity());
      }
    return r;
  });
  rec.check("majorisation_margin", ">=", -1e-10, [&] {
    double m = std::numeric_limits<double>::infinity();
    for (int n = 1; n < n_max; ++n)
      for (int k = 1; n + k <= n_max; ++k) m = std::min(m, symmetrizer_majorisation(ctx, n, k).margin);
    return m;
  });
  rec.check("r_star_norm_excess", "<=", 1e-10, [&] {
    double m = 0.0;
    for (int n = 1; n < n_max; ++n)
      for (int k = 1; n + k <= n_max; ++k) m = std::max(m, spectral_norm(r_star(ctx, n, k)));
    return m - norm_constant(ctx.q());
  });
}

inline void wick_checks(Recorder& rec, const FockContext& ctx, const SweepConfig& cfg, Rng& rng) {
  rec.check("wick_vacuum", "<=", 1e-10, [&] {
    double r = 0.0;
    for (int i = 0; i < cfg.samples.wick_vectors; ++i)
      r = std::max(r, vacuum_residual(ctx, random_graded(ctx, ctx.max_degree(), rng)));
    return r;
  });
  rec.check("wick_semicircular", "<=", 1e-10, [&] {
    const Vector h = random_real(ctx.space(), rng);
    const auto w = wick_word(ctx, std::vector<Vector>{h});
    return window_residual(w.realized(), s_q(ctx, h), ctx, ctx.max_degree() - 1);
  });
  rec.check("wick_degree_two_product", "<=", 1e-10, [&] {
    const Vector h1 = random_real(ctx.space(), rng), h2 = random_real(ctx.space(), rng);
    const auto expected = s_q(ctx, h1) * s_q(ctx, h2) - deformed_inner(ctx.space(), h1, h2) * ctx.identity();
    const auto w = wick_word(ctx, std::vector<Vector>{h1, h2}).realized();
    return window_residual(w, expected, ctx, ctx.max_degree() - 2) / (1.0 + q_operator_norm(expected, ctx));
  });
}

inline void quantization_checks(Recorder& rec, const FockContext& full, const SweepConfig& cfg, Rng& rng) {
  const int n_q = std::min(full.max_degree(), quantization_degree(2 * full.dim()));
  const FockContext ctx = full.with_degree(n_q);
  const auto& space = ctx.space();
  const auto sum = std::make_shared<const FockContext>(DeformedSpace::direct_sum(space, space), ctx.q(), n_q);
  std::vector<QuantizationChannel> channels;
  for (int i = 0; i < cfg.samples.contractions; ++i)
    channels.emplace_back(ctx, ctx, random_contraction(space, space, 1.0 - 0.5 * (i % 2) * 0.2, rng), 1e-10, sum);

  rec.check("wick_covariance", "<=", 1e-8, [&] {
    double r = 0.0;
    for (const auto& ch : channels)
      for (int n = 1; n <= std::min(2, n_q); ++n) {
        std::vector<Vector> f;
        for (int j = 0; j < n; ++j) f.push_back(random_vector(space.dim(), rng));
        const auto x = wick_word(ctx, GradedVector::homogeneous(space.dim(), n_q, n, simple_tensor(f)));
        r = std::max(r, covariance_residual(ch, x));
      }
    return r;
  });
  rec.check("gns_residual", "<=", 1e-8, [&] {
    double r = 0.0;
    for (const auto& ch : channels) r = std::max(r, gns_residual(ch, random_graded(ctx, n_q, rng)));
    return r;
  });
  rec.check("functoriality", "<=", 1e-8, [&] {
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < channels.size() || i == 0; i += 2) {
      const auto& t = channels[i].contraction();
      const auto s = random_contraction(space, space, 0.9, rng);
      const QuantizationChannel phi_s(ctx, ctx, s, 1e-10, sum);
      const QuantizationChannel phi_st(ctx, ctx, s.after(t), 1e-10, sum);
      const auto x = random_wick_word(ctx, std::min(2, n_q), rng);
      const auto lhs = phi_s.apply(channels[i].apply_word(x));
      r = std::max(r, window_residual(lhs, phi_st.apply(x), ctx, x.safe_input_degree()));
      if (channels.size() == 1) break;
    }
    return r;
  });
  rec.check("vacuum_state", "<=", 1e-10, [&] {
    double r = 0.0;
    for (const auto& ch : channels) r = std::max(r, vacuum_state_residual(ch, random_wick_word(ctx, std::min(2, n_q), rng)));
    return r;
  });
  rec.check("unitality", "<=", 1e-10, [&] {
    double r = 0.0;
    for (const auto& ch : channels) r = std::max(r, unitality_residual(ch));
    return r;
  });
  PositivityReport probe;
  bool probed = false;
  const auto run_probe = [&] {
    if (!probed) {
      probe = positivity_probe(channels.front(), cfg.samples.positivity, 1, rng);
      probed = true;
    }
  };
  rec.check("kadison_schwarz", ">=", -1e-8, [&] { run_probe(); return probe.min_kadison_schwarz; });
  rec.check("phi_square_positivity", ">=", -1e-8, [&] { run_probe(); return probe.min_phi_square; });
  rec.check("two_positivity", ">=", -1e-8, [&] { run_probe(); return probe.min_two_positivity; });
}

inline void toeplitz_checks(Recorder& rec, const FockContext& ctx, const SweepConfig& cfg, Rng& rng) {
  const int n_max = ctx.max_degree();
  rec.check("compression_identity", "<=", 1e-10, [&] {
    double r = 0.0;
    for (int n = 1; 2 * n <= n_max; ++n)
      for (int i = 0; i < cfg.samples.balanced; ++i) {
        const auto x = random_balanced(ctx, n, rng);
        const double scale = std::max(1.0, q_block_norm(ctx, x.realized().block(n, n), n));
        for (int k = 0; n + k <= n_max; ++k) r = std::max(r, compression_identity_residual(ctx, x, k) / scale);
      }
    return r;
  });
  rec.check("norm_bound_margin", ">=", -1e-8, [&] {
    double m = std::numeric_limits<double>::infinity();
    for (int n = 0; 2 * n <= n_max; ++n)
      for (int i = 0; i < cfg.samples.balanced; ++i) m = std::min(m, norm_bound_margin(ctx, random_balanced(ctx, n, rng)));
    return m;
  });
  const Compression compression(ctx, leading_block(ctx.space()));
  rec.check("finkernel_rank_deficit", "<=", 0.0, [&] {
    const auto rep = finkernel_rank(compression, std::min(2, n_max / 2));
    return static_cast<double>(rep.columns - std::min(rep.rank, rep.rank_after_compression));
  });
  rec.check("compression_multiplicativity", "<=", 1e-9, [&] {
    const auto gen = [&] {
      const Vector v = compression.inclusion() * random_vector(compression.subspace().dim(), rng);
      const Vector w = compression.inclusion() * random_vector(compression.subspace().dim(), rng);
      return creation(ctx, v) + annihilation(ctx, w) + creation(ctx, v) * annihilation(ctx, w);
    };
    const auto x = gen(), y = gen();
    const auto& sub = compression.subspace();
    const auto xy = compression(x * y);
    return window_residual(xy, compression(x) * compression(y), sub, n_max - 2) / (1.0 + q_operator_norm(xy, sub));
  });
  rec.check("flip_pairing", "<=", 1e-10, [&] {
    double r = 0.0;
    for (int n = 1; 2 * n <= n_max; ++n) {
      std::vector<Vector> v, w;
      for (int j = 0; j < n; ++j) {
        v.push_back(random_vector(ctx.dim(), rng));
        w.push_back(random_vector(ctx.dim(), rng));
      }
      r = std::max(r, flip_pairing_residual(ctx, v, w, random_vector(ctx.block_size(n), rng)));
    }
    return r;
  });
  rec.check("degree_expectation_idempotence", "<=", 1e-12, [&] {
    const auto x = creation(ctx, random_vector(ctx.dim(), rng)) * annihilation(ctx, random_vector(ctx.dim(), rng)) +
                   creation(ctx, random_vector(ctx.dim(), rng));
    const auto e = degree_expectation(x);
    return window_residual(degree_expectation(e), e, ctx, n_max);
  });
}

inline void haagerup_checks(Recorder& rec, const FockContext& ctx, const SweepConfig& cfg, Rng& rng) {
  const ApproximantFamily family(ctx);
  const int n_max = ctx.max_degree();
  const FockContext free_ctx(ctx.space(), 0.0, n_max);
  std::vector<std::vector<double>> norms, free_norms;
  for (std::size_t ki = 0; ki < family.ks().size(); ++ki) {
    norms.push_back(degree_norms(ctx, family.base(ki).matrix(), 0.0));
    free_norms.push_back(degree_norms(free_ctx, family.base(ki).matrix(), 0.0));
  }
  // F_q(e^{−t}T) = e^{−tm}F_q(T) on degree m.
  const auto tails_at = [](std::vector<double> d, double t) {
    for (std::size_t m = 0; m < d.size(); ++m) d[m] *= std::exp(-t * static_cast<double>(m));
    return tail_profile(d);
  };
  rec.check("tail_bound_excess", "<=", 1e-10, [&] {
    double r = -std::numeric_limits<double>::infinity();
    for (const auto& d : norms)
      for (double t : family.ts()) {
        const auto tails = tails_at(d, t);
        for (int n = 0; n < n_max; ++n) r = std::max(r, tails[static_cast<std::size_t>(n)] - tail_bound(t, n));
      }
    return r;
  });
  rec.check("free_reduction", "<=", std::abs(ctx.q()) <= 0.5 ? 1e-8 : 1e-6, [&] {
    double r = 0.0;
    for (std::size_t ki = 0; ki < norms.size(); ++ki)
      for (double t : family.ts()) {
        const auto a = tails_at(norms[ki], t), b = tails_at(free_norms[ki], t);
        for (std::size_t n = 0; n < a.size(); ++n) r = std::max(r, std::abs(a[n] - b[n]));
      }
    return r;
  });
  std::vector<GradedVector> vectors{ctx.vacuum()};
  for (int i = 0; i < cfg.samples.test_vectors; ++i) vectors.push_back(random_graded(ctx, n_max, rng));
  const auto sweep = strong_convergence_sweep(family, vectors);
  rec.check("strong_convergence_monotone", "<=", 0.0, [&] { return sweep.monotone ? 0.0 : 1.0; });
  rec.check("strong_convergence_finest", "<=", 1e-6, [&] { return sweep.finest; });
  const std::size_t last = family.diagonal_size() - 1;
  rec.check("approximant_state_preservation", "<=", 1e-10, [&] {
    const auto& cctx = family.channel_context();
    std::vector<WickWord> words{wick_word(cctx, cctx.vacuum())};
    for (int i = 0; i < 3; ++i) words.push_back(random_wick_word(cctx, std::min(2, cctx.max_degree()), rng));
    return std::max(state_preservation_check(family.channel(0, 0), words),
                    state_preservation_check(family.channel(last, last), words));
  });
  rec.check("approximant_unitality", "<=", 1e-10, [&] {
    return std::max(unitality_residual(family.channel(0, 0)), unitality_residual(family.channel(last, last)));
  });
  rec.check("approximant_gns", "<=", 1e-8, [&] {
    const auto& cctx = family.channel_context();
    return gns_residual(family.channel(last, last), random_graded(cctx, cctx.max_degree(), rng));
  });
}

inline std::vector<VerificationReport> run_point(const SweepConfig& cfg, const std::string& suite, std::size_t suite_index,
                                                 const GridPoint& point, std::size_t point_index, bool timings) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(suite_index), static_cast<std::uint32_t>(point_index)};
  Rng rng(seq);
  const auto space = DeformedSpace::build(BlockSpectrum::parse(point.spectrum));
  Recorder rec(cfg, suite, point, space.dim(), cfg.degree, timings);
  std::optional<FockContext> ctx;
  rec.check(suite + "_setup", "<=", 0.0, [&] {
    ctx.emplace(space, point.q, cfg.degree);
    return 0.0;
  });
  if (!ctx) return rec.take();
  if (suite == "symmetrizer") symmetrizer_checks(rec, *ctx);
  else if (suite == "wick") wick_checks(rec, *ctx, cfg, rng);
  else if (suite == "quantization") quantization_checks(rec, *ctx, cfg, rng);
  else if (suite == "toeplitz") toeplitz_checks(rec, *ctx, cfg, rng);
  else if (suite == "haagerup") haagerup_checks(rec, *ctx, cfg, rng);
  return rec.take();
}

}  // namespace detail

/// Runs the selected suites over the q × spectrum grid. Each grid point draws
/// from its own generator seeded by (seed, suite, point), so results do not
/// depend on `jobs`.
inline std::vector<VerificationReport> run_suite(const SweepConfig& cfg, const std::string& selector,
                                                 const RunOptions& options = {}) {
  cfg.validate();
  struct Task {
    std::string suite;
    std::size_t suite_index;
    detail::GridPoint point;
    std::size_t point_index;
  };
  std::vector<Task> tasks;
  const auto& all = suite_names();
  for (const auto& suite : resolve_suites(selector)) {
    const auto si = static_cast<std::size_t>(std::find(all.begin(), all.end(), suite) - all.begin());
    std::size_t pi = 0;
    for (double q : cfg.q)
      for (const auto& s : cfg.spectra) tasks.push_back({suite, si, {q, s}, pi++});
  }
  std::vector<std::vector<VerificationReport>> results(tasks.size());
  const auto work = [&](std::size_t i) {
    const auto& t = tasks[i];
    results[i] = detail::run_point(cfg, t.suite, t.suite_index, t.point, t.point_index, options.timings);
  };
  const auto jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, tasks.size()); ++j)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }
  std::vector<VerificationReport> out;
  for (auto& r : results) out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return out;
}

inline bool all_pass(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

namespace detail {

inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline std::string json_number(double v) {
  return std::isfinite(v) ? number(v) : "\"" + number(v) + "\"";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Serializes reports as "json" or "csv" with a fixed field order.
inline std::string emit(const std::vector<VerificationReport>& reports, const std::string& format) {
  const bool timed = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.wall_ms.has_value(); });
  std::ostringstream out;
  if (format == "json") {
    out << "{\n  \"reports\": [";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out << (i ? ",\n" : "\n") << "    {\"check\": " << detail::json_string(r.check)
          << ", \"suite\": " << detail::json_string(r.suite) << ", \"q\": " << detail::json_number(r.q)
          << ", \"spectrum\": " << detail::json_string(r.spectrum) << ", \"dim\": " << r.dim
          << ", \"degree\": " << r.degree << ", \"value\": " << detail::json_number(r.value)
          << ", \"relation\": " << detail::json_string(r.relation) << ", \"bound\": " << detail::json_number(r.bound)
          << ", \"pass\": " << (r.pass ? "true" : "false");
      if (r.wall_ms) out << ", \"wall_ms\": " << detail::json_number(*r.wall_ms);
      out << "}";
    }
    out << (reports.empty() ? "]\n}\n" : "\n  ]\n}\n");
  } else if (format == "csv") {
    out << "check,suite,q,spectrum,dim,degree,value,relation,bound,pass" << (timed ? ",wall_ms" : "") << "\n";
    for (const auto& r : reports) {
      out << detail::csv_field(r.check) << ',' << detail::csv_field(r.suite) << ',' << detail::number(r.q) << ','
          << detail::csv_field(r.spectrum) << ',' << r.dim << ',' << r.degree << ',' << detail::number(r.value) << ','
          << detail::csv_field(r.relation) << ',' << detail::number(r.bound) << ',' << (r.pass ? "true" : "false");
      if (timed) out << ',' << (r.wall_ms ? detail::number(*r.wall_ms) : "");
      out << "\n";
    }
  } else {
    throw std::invalid_argument("unknown report format '" + format + "'");
  }
  return out.str();
}

inline void write_report(const std::string& path, const std::vector<VerificationReport>& reports,
                         const std::string& format) {
  const auto text = emit(reports, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

/// Reads back a document produced by emit(..., "json").
inline std::vector<VerificationReport> parse_json_reports(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const auto num = [](const nlohmann::json& v) {
    if (v.is_string()) return std::stod(v.get<std::string>());
    return v.get<double>();
  };
  std::vector<VerificationReport> out;
  for (const auto& j : doc.at("reports")) {
    VerificationReport r;
    r.check = j.at("check").get<std::string>();
    r.suite = j.at("suite").get<std::string>();
    r.q = num(j.at("q"));
    r.spectrum = j.at("spectrum").get<std::string>();
    r.dim = j.at("dim").get<int>();
    r.degree = j.at("degree").get<int>();
    r.value = num(j.at("value"));
    r.relation = j.at("relation").get<std::string>();
    r.bound = num(j.at("bound"));
    r.pass = j.at("pass").get<bool>();
    if (j.contains("wall_ms")) r.wall_ms = num(j.at("wall_ms"));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qfock

#endif  // QFOCK_REPORT_HPP
