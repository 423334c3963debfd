#ifndef QFOCK_GRADED_HPP
#define QFOCK_GRADED_HPP

#include "qfock/linalg.hpp"

#include <map>
#include <utility>

namespace qfock {

/// A vector in the Fock space truncated at max_degree: one dense coordinate
/// block of length dim^n per tensor degree n. Block 0 is the vacuum coefficient.
class GradedVector {
 public:
  GradedVector() = default;
  GradedVector(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
    if (dim < 1 || max_degree < 0) throw std::invalid_argument("GradedVector: bad shape");
    for (int n = 0; n <= max_degree; ++n) blocks_.push_back(Vector::Zero(static_cast<Eigen::Index>(ipow(dim, n))));
  }

  static GradedVector vacuum(int dim, int max_degree) {
    GradedVector v(dim, max_degree);
    v.blocks_[0](0) = 1.0;
    return v;
  }

  static GradedVector homogeneous(int dim, int max_degree, int degree, const Vector& tensor) {
    GradedVector v(dim, max_degree);
    v.block(degree) = tensor;
    return v;
  }

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }

  Vector& block(int n) {
    check_degree(n);
    return blocks_[static_cast<std::size_t>(n)];
  }
  const Vector& block(int n) const {
    check_degree(n);
    return blocks_[static_cast<std::size_t>(n)];
  }

  /// Highest degree with a nonzero block, -1 for the zero vector.
  int top_degree() const {
    for (int n = max_degree_; n >= 0; --n)
      if (blocks_[static_cast<std::size_t>(n)].cwiseAbs().maxCoeff() > 0.0) return n;
    return -1;
  }

  GradedVector& operator+=(const GradedVector& o) {
    check_shape(o);
    for (std::size_t n = 0; n < blocks_.size(); ++n) blocks_[n] += o.blocks_[n];
    return *this;
  }
  GradedVector& operator-=(const GradedVector& o) {
    check_shape(o);
    for (std::size_t n = 0; n < blocks_.size(); ++n) blocks_[n] -= o.blocks_[n];
    return *this;
  }
  GradedVector& operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }
  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
  friend GradedVector operator*(cplx s, GradedVector a) { return a *= s; }

 private:
  void check_degree(int n) const {
    if (n < 0 || n > max_degree_) throw std::out_of_range("GradedVector: degree out of range");
  }
  void check_shape(const GradedVector& o) const {
    if (o.dim_ != dim_ || o.max_degree_ != max_degree_) throw std::invalid_argument("GradedVector: shape mismatch");
  }

  int dim_ = 0;
  int max_degree_ = -1;
  std::vector<Vector> blocks_;
};

/// Block operator between two truncated Fock spaces: block (m, n) maps degree-n
/// coordinates of the input space to degree-m coordinates of the output space.
/// Absent blocks are zero.
class GradedOperator {
 public:
  using Key = std::pair<int, int>;

  GradedOperator() = default;
  GradedOperator(int out_dim, int in_dim, int max_degree)
      : out_dim_(out_dim), in_dim_(in_dim), max_degree_(max_degree) {
    if (out_dim < 1 || in_dim < 1 || max_degree < 0) throw std::invalid_argument("GradedOperator: bad shape");
  }

  static GradedOperator identity(int dim, int max_degree) {
    GradedOperator op(dim, dim, max_degree);
    for (int n = 0; n <= max_degree; ++n) {
      const auto s = static_cast<Eigen::Index>(ipow(dim, n));
      op.set_block(n, n, Matrix::Identity(s, s));
    }
    return op;
  }

  int out_dim() const { return out_dim_; }
  int in_dim() const { return in_dim_; }
  int max_degree() const { return max_degree_; }
  const std::map<Key, Matrix>& blocks() const { return blocks_; }

  const Matrix* find(int m, int n) const {
    auto it = blocks_.find({m, n});
    return it == blocks_.end() ? nullptr : &it->second;
  }

  Matrix block(int m, int n) const {
    if (const Matrix* b = find(m, n)) return *b;
    return Matrix::Zero(rows(m), cols(n));
  }

  void set_block(int m, int n, Matrix b) {
    check_block(m, n, b);
    blocks_[{m, n}] = std::move(b);
  }

  void add_block(int m, int n, const Matrix& b) {
    check_block(m, n, b);
    auto it = blocks_.find({m, n});
    if (it == blocks_.end()) {
      blocks_.emplace(Key{m, n}, b);
    } else {
      it->second += b;
    }
  }

  GradedOperator& operator+=(const GradedOperator& o) {
    check_same_shape(o);
    for (const auto& [key, b] : o.blocks_) add_block(key.first, key.second, b);
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& o) {
    check_same_shape(o);
    for (const auto& [key, b] : o.blocks_) add_block(key.first, key.second, -b);
    return *this;
  }
  GradedOperator& operator*=(cplx s) {
    for (auto& [key, b] : blocks_) b *= s;
    return *this;
  }
  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(cplx s, GradedOperator a) { return a *= s; }

  friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
    if (a.in_dim_ != b.out_dim_ || a.max_degree_ != b.max_degree_)
      throw std::invalid_argument("GradedOperator: product shape mismatch");
    GradedOperator c(a.out_dim_, b.in_dim_, a.max_degree_);
    for (const auto& [ka, ma] : a.blocks_) {
      const int mid = ka.second;
      for (auto it = b.blocks_.lower_bound({mid, -1}); it != b.blocks_.end() && it->first.first == mid; ++it)
        c.add_block(ka.first, it->first.second, ma * it->second);
    }
    return c;
  }

  GradedVector apply(const GradedVector& v) const {
    if (v.dim() != in_dim_ || v.max_degree() != max_degree_)
      throw std::invalid_argument("GradedOperator: vector shape mismatch");
    GradedVector out(out_dim_, max_degree_);
    for (const auto& [key, b] : blocks_) out.block(key.first) += b * v.block(key.second);
    return out;
  }

  /// Keeps only blocks with input degree <= max_in and output degree <= max_out.
  GradedOperator window(int max_in, int max_out) const {
    GradedOperator out(out_dim_, in_dim_, max_degree_);
    for (const auto& [key, b] : blocks_)
      if (key.second <= max_in && key.first <= max_out) out.blocks_.emplace(key, b);
    return out;
  }

  /// Largest |output degree − input degree| among nonzero blocks.
  int degree_spread() const {
    int s = 0;
    for (const auto& [key, b] : blocks_) s = std::max(s, std::abs(key.first - key.second));
    return s;
  }

  Eigen::Index rows(int m) const { return static_cast<Eigen::Index>(ipow(out_dim_, m)); }
  Eigen::Index cols(int n) const { return static_cast<Eigen::Index>(ipow(in_dim_, n)); }

 private:
  void check_block(int m, int n, const Matrix& b) const {
    if (m < 0 || n < 0 || m > max_degree_ || n > max_degree_)
      throw std::out_of_range("GradedOperator: block degree out of range");
    if (b.rows() != rows(m) || b.cols() != cols(n)) throw std::invalid_argument("GradedOperator: block shape mismatch");
  }
  void check_same_shape(const GradedOperator& o) const {
    if (o.out_dim_ != out_dim_ || o.in_dim_ != in_dim_ || o.max_degree_ != max_degree_)
      throw std::invalid_argument("GradedOperator: shape mismatch");
  }

  int out_dim_ = 0;
  int in_dim_ = 0;
  int max_degree_ = -1;
  std::map<Key, Matrix> blocks_;
};

}  // namespace qfock

#endif  // QFOCK_GRADED_HPP
