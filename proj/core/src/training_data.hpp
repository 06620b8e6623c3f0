#pragma once

#include <span>
#include <string>

#include "lobbyml/error.hpp"
#include "lobbyml/sparse_vector.hpp"

namespace lobbyml::detail {

inline void validate_training_data(std::span<const SparseVector> X, std::span<const int> y) {
  if (X.size() != y.size()) {
    throw ContractError("feature rows (" + std::to_string(X.size()) + ") and labels (" +
                        std::to_string(y.size()) + ") differ in count");
  }
  if (X.size() < 2) throw ContractError("training needs at least two examples");
  bool pos = false, neg = false;
  for (int label : y) {
    if (label != 0 && label != 1) throw ContractError("labels must be 0 or 1");
    (label == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw ContractError("training data contains a single class");
  for (const SparseVector& row : X) {
    if (row.dimension() != X[0].dimension()) throw ContractError("feature rows differ in dimension");
  }
}

}  // namespace lobbyml::detail
