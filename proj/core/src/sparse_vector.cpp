#include "lobbyml/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

#include "lobbyml/error.hpp"

namespace lobbyml {

SparseVector SparseVector::from_pairs(std::size_t dimension,
                                      std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v(dimension);
  v.entries_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [index, value] = pairs[i];
    if (index >= dimension) {
      throw ContractError("sparse index " + std::to_string(index) + " out of range for dimension " +
                          std::to_string(dimension));
    }
    if (i > 0 && pairs[i - 1].first == index) {
      throw ContractError("duplicate sparse index " + std::to_string(index));
    }
    if (value != 0.0) v.entries_.push_back({index, value});
  }
  return v;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.entries_.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return v;
}

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::uint32_t i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::dot(std::span<const double> dense) const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.value * dense[e.index];
  return total;
}

double SparseVector::sum() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.value;
  return total;
}

double SparseVector::norm() const {
  double total = 0.0;
  for (const Entry& e : entries_) total += e.value * e.value;
  return std::sqrt(total);
}

void SparseVector::scale(double factor) {
  if (factor == 0.0) {
    entries_.clear();
    return;
  }
  for (Entry& e : entries_) e.value *= factor;
}

}  // namespace lobbyml
