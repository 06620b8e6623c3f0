#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lobbyml/sparse_vector.hpp"

namespace lobbyml {

enum class Penalty { L1, L2 };

std::string_view to_string(Penalty penalty);
Penalty parse_penalty(std::string_view text);

struct LogisticParams {
  Penalty penalty = Penalty::L2;
  double C = 1.0;  // inverse regularization strength
  double tol = 1e-6;
  int max_iter = 1000;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  Penalty penalty = Penalty::L2;
  double C = 1.0;
  std::string trained_on;

  // Training diagnostics; not persisted.
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;

  double decision(const SparseVector& x) const;
  double predict_proba(const SparseVector& x) const;
};

double sigmoid(double z);
// log(1 + exp(z)) without overflow.
double softplus(double z);

// Mean logistic loss + penalty / (C n), with penalty = 0.5 ||w||^2 (L2) or
// ||w||_1 (L1). The bias is unpenalized.
class LogisticObjective {
 public:
  LogisticObjective(std::span<const SparseVector> X, std::span<const int> y, Penalty penalty,
                    double C);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return X_.size(); }
  // Penalty multiplier 1 / (C n).
  double lambda() const { return lambda_; }

  double value(std::span<const double> w, double b) const;
  double mean_loss(std::span<const double> w, double b) const;

  // Gradient of the smooth part: the mean loss plus, for L2, the penalty.
  // For L1 only the loss gradient is returned. Returns the value of the
  // smooth part.
  double smooth_gradient(std::span<const double> w, double b, std::span<double> grad_w,
                         double& grad_b) const;

 private:
  std::span<const SparseVector> X_;
  std::span<const int> y_;
  Penalty penalty_;
  double lambda_;
  std::size_t dimension_;
};

// Throws ContractError for |X| != |y|, fewer than two rows, a single class,
// or rows of differing dimension.
LogisticModel train_logistic(std::span<const SparseVector> X, std::span<const int> y,
                             const LogisticParams& params);

}  // namespace lobbyml
