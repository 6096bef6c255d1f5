#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace bassnet::detail {

// Binary tree of nonnegative weights supporting O(log n) update and
// inverse-CDF lookup. Parents are recomputed from children on each update,
// so the total never accumulates drift from repeated increments.
class SumTree {
 public:
  explicit SumTree(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    leaves_ = 1;
    while (leaves_ < n) leaves_ <<= 1;
    tree_.assign(2 * leaves_, 0.0);
    size_ = n;
  }

  // Sets all weights at once in O(n).
  template <typename Range>
  void assign(const Range& weights) {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    std::size_t i = 0;
    for (double w : weights) tree_[leaves_ + i++] = w;
    for (std::size_t k = leaves_ - 1; k >= 1; --k) tree_[k] = tree_[2 * k] + tree_[2 * k + 1];
  }

  void set(std::size_t i, double w) {
    std::size_t k = leaves_ + i;
    tree_[k] = w;
    for (k >>= 1; k >= 1; k >>= 1) tree_[k] = tree_[2 * k] + tree_[2 * k + 1];
  }

  [[nodiscard]] double get(std::size_t i) const { return tree_[leaves_ + i]; }
  [[nodiscard]] double total() const { return leaves_ ? tree_[1] : 0.0; }
  [[nodiscard]] std::size_t size() const { return size_; }

  // Index i with cumulative weight bracket containing u, for u in [0, total()).
  // Never returns a zero-weight leaf while total() > 0.
  [[nodiscard]] std::size_t find(double u) const {
    std::size_t k = 1;
    while (k < leaves_) {
      const double left = tree_[2 * k];
      const double right = tree_[2 * k + 1];
      if ((u < left && left > 0.0) || right <= 0.0) {
        k = 2 * k;
      } else {
        u -= left;
        k = 2 * k + 1;
      }
    }
    return k - leaves_;
  }

 private:
  std::vector<double> tree_;
  std::size_t leaves_ = 1;
  std::size_t size_ = 0;
};

}  // namespace bassnet::detail
