#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace msflab {

// Weighted quick-union with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t v) {
    while (v != parent_[v]) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

  // Returns false when a and b were already in one set.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::uint32_t component_size(std::uint32_t v) { return size_[find(v)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace msflab
