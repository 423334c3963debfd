#ifndef QFOCK_CROSSING_HPP
#define QFOCK_CROSSING_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qfock {

/// An ordered split of {1, ..., n} into two increasing index lists.
/// Indices are 1-based.
struct CrossingPartition {
  std::vector<int> first;
  std::vector<int> second;

  int size() const { return static_cast<int>(first.size() + second.size()); }

  void validate() const {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    auto check = [&](const std::vector<int>& part) {
      for (std::size_t l = 0; l < part.size(); ++l) {
        const int i = part[l];
        if (i < 1 || i > n || seen[static_cast<std::size_t>(i)])
          throw std::invalid_argument("CrossingPartition: indices do not partition {1..n}");
        if (l > 0 && part[l - 1] >= i) throw std::invalid_argument("CrossingPartition: lists must be increasing");
        seen[static_cast<std::size_t>(i)] = true;
      }
    };
    check(first);
    check(second);
  }
};

/// Σ_l (i_l − l) over the first list: the number of pairs (i ∈ first, j ∈ second) with j < i.
inline int crossing_number(const CrossingPartition& p) {
  p.validate();
  int c = 0;
  for (std::size_t l = 0; l < p.first.size(); ++l) c += p.first[l] - static_cast<int>(l + 1);
  return c;
}

/// All partitions of {1..n}, first lists in lexicographic order.
inline std::vector<CrossingPartition> crossing_partitions(int n) {
  if (n < 0) throw std::invalid_argument("crossing_partitions: negative size");
  std::vector<CrossingPartition> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    CrossingPartition p;
    for (int i = 1; i <= n; ++i) (mask & (1u << (i - 1)) ? p.first : p.second).push_back(i);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Partitions of {1..n} whose first list has exactly first_size elements.
inline std::vector<CrossingPartition> crossing_partitions(int n, int first_size) {
  auto all = crossing_partitions(n);
  std::erase_if(all, [&](const auto& p) { return static_cast<int>(p.first.size()) != first_size; });
  return all;
}

}  // namespace qfock

#endif  // QFOCK_CROSSING_HPP
