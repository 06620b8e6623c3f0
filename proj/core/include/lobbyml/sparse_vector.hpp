#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lobbyml {

// Sparse real vector with strictly increasing indices and no stored zeros.
class SparseVector {
 public:
  struct Entry {
    std::uint32_t index;
    double value;
    bool operator==(const Entry&) const = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  // Sorts, drops zeros, and rejects duplicate or out-of-range indices.
  static SparseVector from_pairs(std::size_t dimension,
                                 std::vector<std::pair<std::uint32_t, double>> pairs);
  // Dense values with zeros omitted.
  static SparseVector from_dense(std::span<const double> dense);

  std::size_t dimension() const { return dimension_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  // Value at index (0 when absent); binary search.
  double at(std::uint32_t index) const;
  double dot(std::span<const double> dense) const;
  double sum() const;
  double norm() const;
  void scale(double factor);

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
};

// Dense materialization is refused above this many total nonzeros.
inline constexpr std::size_t kMaxDenseNonzeros = 1'000'000;

}  // namespace lobbyml
