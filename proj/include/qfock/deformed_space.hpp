#ifndef QFOCK_DEFORMED_SPACE_HPP
#define QFOCK_DEFORMED_SPACE_HPP

#include "qfock/linalg.hpp"

#include <charconv>
#include <functional>
#include <sstream>
#include <string_view>

namespace qfock {

// A finite-dimensional real Hilbert space with a one-parameter orthogonal group
// U_t = A^{it}, described by the spectrum of its generator. Every block with
// eigenvalue λ is a rotation plane (contributing λ and 1/λ to A), trivial
// directions are fixed by the group.
struct SpectrumBlock {
  double lambda = 1.0;
  int multiplicity = 1;
};

struct BlockSpectrum {
  std::vector<SpectrumBlock> blocks;
  int trivial = 0;

  int complex_dim() const {
    int d = trivial;
    for (const auto& b : blocks) d += 2 * b.multiplicity;
    return d;
  }

  void validate() const {
    if (trivial < 0) throw std::invalid_argument("BlockSpectrum: negative trivial count");
    for (const auto& b : blocks) {
      if (!(b.lambda >= 1.0) || !std::isfinite(b.lambda))
        throw std::invalid_argument("BlockSpectrum: block eigenvalue must satisfy lambda >= 1");
      if (b.multiplicity < 1) throw std::invalid_argument("BlockSpectrum: multiplicity must be positive");
    }
    if (complex_dim() == 0) throw std::invalid_argument("BlockSpectrum: empty spectrum");
  }

  /// Comma-separated tokens: "1" is a trivial direction, "λ" (> 1) a rotation
  /// block, "λ:m" a block of multiplicity m. Example: "2,1" is one λ=2 block
  /// plus one trivial direction.
  static BlockSpectrum parse(std::string_view text) {
    BlockSpectrum spec;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find(',', pos), text.size());
      std::string token(text.substr(pos, end - pos));
      token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                  token.end());
      if (token.empty()) throw std::invalid_argument("BlockSpectrum: empty token in '" + std::string(text) + "'");
      int mult = 1;
      if (auto colon = token.find(':'); colon != std::string::npos) {
        mult = std::stoi(token.substr(colon + 1));
        token = token.substr(0, colon);
      }
      std::size_t used = 0;
      const double lambda = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument("BlockSpectrum: bad number '" + token + "'");
      if (lambda == 1.0) {
        spec.trivial += mult;
      } else {
        spec.blocks.push_back({lambda, mult});
      }
      pos = end + 1;
    }
    spec.validate();
    return spec;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(15);
    bool first = true;
    for (const auto& b : blocks) {
      os << (first ? "" : ",") << b.lambda;
      if (b.multiplicity != 1) os << ':' << b.multiplicity;
      first = false;
    }
    for (int i = 0; i < trivial; ++i) {
      os << (first ? "" : ",") << 1;
      first = false;
    }
    return os.str();
  }
};

/// The complexified space in an eigenbasis of A. The deformed metric
/// G = 2A/(1+A) is diagonal and the conjugation is I x = S·conj(x), where the
/// permutation S pairs each λ-eigenvector with its 1/λ partner.
class DeformedSpace {
 public:
  DeformedSpace() = default;

  DeformedSpace(RealVector generator, std::vector<int> pairing, double tol = 1e-12)
      : generator_(std::move(generator)), pairing_(std::move(pairing)) {
    const auto d = generator_.size();
    if (d == 0) throw std::invalid_argument("DeformedSpace: dimension must be positive");
    if (static_cast<Eigen::Index>(pairing_.size()) != d)
      throw std::invalid_argument("DeformedSpace: pairing size mismatch");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(generator_(i) > 0.0)) throw std::invalid_argument("DeformedSpace: generator must be positive definite");
      const int j = pairing_[static_cast<std::size_t>(i)];
      if (j < 0 || j >= d || pairing_[static_cast<std::size_t>(j)] != i)
        throw std::invalid_argument("DeformedSpace: pairing is not an involution");
      if (std::abs(generator_(i) * generator_(j) - 1.0) > tol)
        throw std::invalid_argument("DeformedSpace: paired eigenvalues must be reciprocal");
    }
    metric_ = (2.0 * generator_.array() / (1.0 + generator_.array())).matrix();
  }

  int dim() const { return static_cast<int>(generator_.size()); }
  const RealVector& generator() const { return generator_; }
  const RealVector& metric() const { return metric_; }
  const std::vector<int>& pairing() const { return pairing_; }

  Matrix generator_matrix() const { return generator_.cast<cplx>().asDiagonal(); }
  Matrix metric_matrix() const { return metric_.cast<cplx>().asDiagonal(); }
  Matrix pairing_matrix() const {
    Matrix s = Matrix::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) s(pairing_[static_cast<std::size_t>(i)], i) = 1.0;
    return s;
  }

  /// U_t = A^{it}.
  Matrix group_element(double t) const {
    Vector diag(dim());
    for (int i = 0; i < dim(); ++i) diag(i) = std::exp(kI * t * std::log(generator_(i)));
    return diag.asDiagonal();
  }

  /// The antilinear conjugation I.
  Vector conjugate(const Vector& x) const {
    check_size(x);
    Vector out(dim());
    for (int i = 0; i < dim(); ++i) out(pairing_[static_cast<std::size_t>(i)]) = std::conj(x(i));
    return out;
  }

  /// Columns: an undeformed-orthonormal basis of the real subspace fixed by I.
  Matrix real_basis() const {
    Matrix b = Matrix::Zero(dim(), dim());
    int col = 0;
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim(); ++i) {
      const int j = pairing_[static_cast<std::size_t>(i)];
      if (j == i) {
        b(i, col++) = 1.0;
      } else if (i < j) {
        b(i, col) = r;
        b(j, col) = r;
        ++col;
        b(i, col) = kI * r;
        b(j, col) = -kI * r;
        ++col;
      }
    }
    return b;
  }

  /// Embeds real coordinates (w.r.t. real_basis) into the complexified space.
  Vector real_vector(const RealVector& coords) const {
    if (coords.size() != dim()) throw std::invalid_argument("DeformedSpace: real coordinate size mismatch");
    return real_basis() * coords.cast<cplx>();
  }

  static DeformedSpace build(const BlockSpectrum& spec) {
    spec.validate();
    const int d = spec.complex_dim();
    RealVector gen(d);
    std::vector<int> pairing(static_cast<std::size_t>(d));
    int i = 0;
    for (const auto& b : spec.blocks) {
      for (int m = 0; m < b.multiplicity; ++m) {
        gen(i) = b.lambda;
        gen(i + 1) = 1.0 / b.lambda;
        pairing[static_cast<std::size_t>(i)] = i + 1;
        pairing[static_cast<std::size_t>(i + 1)] = i;
        i += 2;
      }
    }
    for (int t = 0; t < spec.trivial; ++t, ++i) {
      gen(i) = 1.0;
      pairing[static_cast<std::size_t>(i)] = i;
    }
    return DeformedSpace(std::move(gen), std::move(pairing));
  }

  static DeformedSpace direct_sum(const DeformedSpace& a, const DeformedSpace& b) {
    RealVector gen(a.dim() + b.dim());
    gen << a.generator(), b.generator();
    std::vector<int> pairing = a.pairing();
    for (int p : b.pairing()) pairing.push_back(p + a.dim());
    return DeformedSpace(std::move(gen), std::move(pairing));
  }

  /// The subspace spanned by the given basis vectors; must be closed under the pairing.
  DeformedSpace subspace(std::span<const int> indices) const {
    RealVector gen(static_cast<Eigen::Index>(indices.size()));
    std::vector<int> pairing(indices.size(), -1);
    for (std::size_t a = 0; a < indices.size(); ++a) {
      const int i = indices[a];
      if (i < 0 || i >= dim()) throw std::invalid_argument("DeformedSpace: subspace index out of range");
      gen(static_cast<Eigen::Index>(a)) = generator_(i);
      const auto it = std::find(indices.begin(), indices.end(), pairing_[static_cast<std::size_t>(i)]);
      if (it == indices.end())
        throw std::invalid_argument("DeformedSpace: subspace is not invariant under the conjugation");
      pairing[a] = static_cast<int>(it - indices.begin());
    }
    return DeformedSpace(std::move(gen), std::move(pairing));
  }

 private:
  void check_size(const Vector& x) const {
    if (x.size() != dim()) throw std::invalid_argument("DeformedSpace: vector dimension mismatch");
  }

  RealVector generator_;
  RealVector metric_;
  std::vector<int> pairing_;
};

/// ⟨x, y⟩_U = ⟨2A/(1+A) x, y⟩, antilinear in x.
inline cplx deformed_inner(const DeformedSpace& space, const Vector& x, const Vector& y) {
  if (x.size() != space.dim() || y.size() != space.dim())
    throw std::invalid_argument("deformed_inner: dimension mismatch");
  cplx s = 0.0;
  for (int i = 0; i < space.dim(); ++i) s += std::conj(x(i)) * space.metric()(i) * y(i);
  return s;
}

inline void check_map_shape(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map) {
  if (map.rows() != target.dim() || map.cols() != source.dim())
    throw std::invalid_argument("map shape does not match source/target dimensions");
}

/// Operator norm between the deformed metrics.
inline double deformed_norm(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map) {
  check_map_shape(source, target, map);
  const Matrix scaled = target.metric().cwiseSqrt().cast<cplx>().asDiagonal() * map *
                        source.metric().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal();
  return spectral_norm(scaled);
}

/// Adjoint with respect to the deformed inner products: G_src^{-1} T^H G_tgt.
inline Matrix deformed_adjoint(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map) {
  check_map_shape(source, target, map);
  return source.metric().cwiseInverse().cast<cplx>().asDiagonal() * map.adjoint() *
         target.metric().cast<cplx>().asDiagonal();
}

/// The linear map J·T·I.
inline Matrix conjugate_sandwich(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map) {
  check_map_shape(source, target, map);
  return target.pairing_matrix() * map.conjugate() * source.pairing_matrix();
}

inline double iti_residual(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map) {
  return deformed_norm(source, target, conjugate_sandwich(source, target, map) - map);
}

/// max(‖T A_src − A_tgt T‖, max_t ‖T U_t − V_t T‖).
inline double intertwiner_residual(const DeformedSpace& source, const DeformedSpace& target, const Matrix& map,
                                   std::span<const double> t_samples) {
  check_map_shape(source, target, map);
  double r = deformed_norm(source, target, map * source.generator_matrix() - target.generator_matrix() * map);
  for (double t : t_samples)
    r = std::max(r, deformed_norm(source, target, map * source.group_element(t) - target.group_element(t) * map));
  return r;
}

/// f(A) in the eigenbasis.
inline Matrix spectral_map(const DeformedSpace& space, const std::function<double(double)>& f) {
  Vector d(space.dim());
  for (int i = 0; i < space.dim(); ++i) d(i) = f(space.generator()(i));
  return d.asDiagonal();
}

/// f evaluated on max(λ, 1/λ), so the map is constant on each conjugation pair.
inline Matrix paired_spectral_map(const DeformedSpace& space, const std::function<double(double)>& f) {
  return spectral_map(space, [&f](double a) { return f(std::max(a, 1.0 / a)); });
}

/// A linear map between deformed spaces with deformed operator norm at most one.
class DeformedContraction {
 public:
  DeformedContraction(DeformedSpace source, DeformedSpace target, Matrix map, double tol = 1e-8)
      : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
    check_map_shape(source_, target_, map_);
    if (deformed_norm(source_, target_, map_) > 1.0 + tol)
      throw std::domain_error("DeformedContraction: deformed norm exceeds one");
  }

  const DeformedSpace& source() const { return source_; }
  const DeformedSpace& target() const { return target_; }
  const Matrix& matrix() const { return map_; }
  double norm() const { return deformed_norm(source_, target_, map_); }
  Matrix adjoint() const { return deformed_adjoint(source_, target_, map_); }
  double iti_residual() const { return qfock::iti_residual(source_, target_, map_); }

  DeformedContraction scaled(double s) const { return {source_, target_, s * map_}; }

  /// this ∘ other.
  DeformedContraction after(const DeformedContraction& other) const {
    return {other.source_, target_, map_ * other.map_};
  }

 private:
  DeformedSpace source_;
  DeformedSpace target_;
  Matrix map_;
};

/// The unitary dilation of a contraction on source ⊕ target, with T = P·U·ι.
struct Dilation {
  DeformedSpace sum;
  Matrix unitary;
  Matrix inclusion;   // source -> sum, first summand
  Matrix projection;  // sum -> target, second summand
};

inline Dilation dilate(const DeformedContraction& t, double tol = 1e-8) {
  const auto& src = t.source();
  const auto& tgt = t.target();
  const int ds = src.dim();
  const int dt = tgt.dim();
  if (t.norm() > 1.0 + tol) throw std::domain_error("dilate: contraction norm exceeds one");

  const RealVector gs = src.metric().cwiseSqrt();
  const RealVector gt = tgt.metric().cwiseSqrt();
  const Matrix tt = gt.cast<cplx>().asDiagonal() * t.matrix() * gs.cwiseInverse().cast<cplx>().asDiagonal();

  const Matrix defect_src = psd_sqrt(Matrix::Identity(ds, ds) - tt.adjoint() * tt, 10 * tol);
  const Matrix defect_tgt = psd_sqrt(Matrix::Identity(dt, dt) - tt * tt.adjoint(), 10 * tol);

  Matrix u(ds + dt, ds + dt);
  u.topLeftCorner(ds, ds) = defect_src;
  u.topRightCorner(ds, dt) = tt.adjoint();
  u.bottomLeftCorner(dt, ds) = tt;
  u.bottomRightCorner(dt, dt) = -defect_tgt;

  Dilation out;
  out.sum = DeformedSpace::direct_sum(src, tgt);
  const RealVector gsum = out.sum.metric().cwiseSqrt();
  out.unitary = gsum.cwiseInverse().cast<cplx>().asDiagonal() * u * gsum.cast<cplx>().asDiagonal();
  out.inclusion = Matrix::Zero(ds + dt, ds);
  out.inclusion.topRows(ds).setIdentity();
  out.projection = Matrix::Zero(dt, ds + dt);
  out.projection.rightCols(dt).setIdentity();
  return out;
}

/// Random map rescaled to the given deformed norm. With real_structure the
/// sample is first averaged with J·T·I so that it satisfies J·T·I = T.
inline DeformedContraction random_contraction(const DeformedSpace& source, const DeformedSpace& target, double norm,
                                              Rng& rng, bool real_structure = true) {
  Matrix t = random_matrix(target.dim(), source.dim(), rng);
  if (real_structure) t = 0.5 * (t + conjugate_sandwich(source, target, t));
  const double current = deformed_norm(source, target, t);
  if (current == 0.0) return {source, target, t};
  return {source, target, (norm / current) * t};
}

}  // namespace qfock

#endif  // QFOCK_DEFORMED_SPACE_HPP
