#include "lobbyml/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "lobbyml/error.hpp"
#include "training_data.hpp"

namespace lobbyml {
namespace {

constexpr std::size_t kLbfgsMemory = 10;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-20;
constexpr int kMaxBacktracks = 40;

// Logistic loss for label y at margin z.
double point_loss(double z, int y) { return y == 1 ? softplus(-z) : softplus(z); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

LogisticModel train_l2(const LogisticObjective& objective, const LogisticParams& params) {
  const std::size_t d = objective.dimension();
  // Parameters packed as [w_0 .. w_{d-1}, b].
  std::vector<double> x(d + 1, 0.0), g(d + 1, 0.0);
  auto evaluate = [&](const std::vector<double>& at, std::vector<double>& grad) {
    std::span<const double> w(at.data(), d);
    double gb = 0.0;
    double f = objective.smooth_gradient(w, at[d], std::span<double>(grad.data(), d), gb);
    grad[d] = gb;
    return f;
  };

  LogisticModel model;
  double f = evaluate(x, g);
  model.objective_trace.push_back(f);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> direction(d + 1), x_new(d + 1), g_new(d + 1);
  std::vector<double> alpha(kLbfgsMemory);

  int iter = 0;
  for (; iter < params.max_iter; ++iter) {
    if (max_abs(g) <= params.tol) {
      model.converged = true;
      break;
    }
    // Two-loop recursion.
    direction = g;
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * std::inner_product(s_hist[k].begin(), s_hist[k].end(), direction.begin(), 0.0);
      for (std::size_t i = 0; i <= d; ++i) direction[i] -= alpha[k] * y_hist[k][i];
    }
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& yv = y_hist.back();
      double gamma = std::inner_product(s.begin(), s.end(), yv.begin(), 0.0) /
                     std::inner_product(yv.begin(), yv.end(), yv.begin(), 0.0);
      for (double& v : direction) v *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      double beta = rho_hist[k] * std::inner_product(y_hist[k].begin(), y_hist[k].end(), direction.begin(), 0.0);
      for (std::size_t i = 0; i <= d; ++i) direction[i] += (alpha[k] - beta) * s_hist[k][i];
    }
    for (double& v : direction) v = -v;

    double slope = std::inner_product(g.begin(), g.end(), direction.begin(), 0.0);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i <= d; ++i) direction[i] = -g[i];
      slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(max_abs(g), 1e-300)) : 1.0;
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks && step >= kMinStep; ++bt, step *= 0.5) {
      for (std::size_t i = 0; i <= d; ++i) x_new[i] = x[i] + step * direction[i];
      f_new = evaluate(x_new, g_new);
      if (f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // line search stalled at floating-point resolution

    std::vector<double> s(d + 1), yv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      s[i] = x_new[i] - x[i];
      yv[i] = g_new[i] - g[i];
    }
    double sy = std::inner_product(s.begin(), s.end(), yv.begin(), 0.0);
    if (sy > 1e-12 * std::inner_product(yv.begin(), yv.end(), yv.begin(), 0.0)) {
      if (s_hist.size() == kLbfgsMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    model.objective_trace.push_back(f);
  }
  if (!model.converged && max_abs(g) <= params.tol) model.converged = true;

  model.iterations = iter;
  model.weights.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = x[d];
  return model;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

LogisticModel train_l1(std::span<const SparseVector> X, std::span<const int> y, const LogisticObjective& objective,
                       const LogisticParams& params) {
  const std::size_t n = X.size();
  const std::size_t d = objective.dimension();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lambda = objective.lambda();

  std::vector<std::vector<ColumnEntry>> columns(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : X[i].entries()) columns[e.index].push_back({static_cast<std::uint32_t>(i), e.value});
  }

  std::vector<double> w(d, 0.0), z(n, 0.0);
  double b = 0.0;
  LogisticModel model;
  model.objective_trace.push_back(objective.value(w, b));

  auto optimality = [&]() {
    std::vector<double> residual(n);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = sigmoid(z[i]) - y[i];
      gb += residual[i];
    }
    double worst = std::abs(gb * inv_n);
    for (std::size_t j = 0; j < d; ++j) {
      double gj = 0.0;
      for (const auto& e : columns[j]) gj += residual[e.row] * e.value;
      gj *= inv_n;
      double sub = w[j] > 0 ? gj + lambda : w[j] < 0 ? gj - lambda : std::max(std::abs(gj) - lambda, 0.0);
      worst = std::max(worst, std::abs(sub));
    }
    return worst;
  };

  int sweep = 0;
  for (; sweep < params.max_iter; ++sweep) {
    if (optimality() <= params.tol) {
      model.converged = true;
      break;
    }

    // Bias: damped Newton step over all rows.
    {
      double g = 0.0, h = 0.0, loss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double p = sigmoid(z[i]);
        g += p - y[i];
        h += p * (1.0 - p);
        loss += point_loss(z[i], y[i]);
      }
      double delta = -g / std::max(h, 1e-12);
      for (int bt = 0; bt < kMaxBacktracks && delta != 0.0; ++bt, delta *= 0.5) {
        double trial = 0.0;
        for (std::size_t i = 0; i < n; ++i) trial += point_loss(z[i] + delta, y[i]);
        if (trial <= loss) {
          for (double& zi : z) zi += delta;
          b += delta;
          break;
        }
      }
    }

    for (std::size_t j = 0; j < d; ++j) {
      const auto& col = columns[j];
      if (col.empty()) continue;
      double g = 0.0, h = 0.0;
      for (const auto& e : col) {
        double p = sigmoid(z[e.row]);
        g += (p - y[e.row]) * e.value;
        h += p * (1.0 - p) * e.value * e.value;
      }
      g *= inv_n;
      h = std::max(h * inv_n, 1e-12);
      double delta = soft_threshold(w[j] - g / h, lambda / h) - w[j];
      for (int bt = 0; bt < kMaxBacktracks && delta != 0.0; ++bt, delta *= 0.5) {
        double change = lambda * (std::abs(w[j] + delta) - std::abs(w[j]));
        for (const auto& e : col) {
          change += inv_n * (point_loss(z[e.row] + delta * e.value, y[e.row]) - point_loss(z[e.row], y[e.row]));
        }
        if (change <= 0.0) {
          w[j] += delta;
          for (const auto& e : col) z[e.row] += delta * e.value;
          break;
        }
      }
    }
    model.objective_trace.push_back(objective.value(w, b));
  }
  if (!model.converged && optimality() <= params.tol) model.converged = true;

  model.iterations = sweep;
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

}  // namespace

std::string_view to_string(Penalty penalty) { return penalty == Penalty::L1 ? "l1" : "l2"; }

Penalty parse_penalty(std::string_view text) {
  if (text == "l1" || text == "L1") return Penalty::L1;
  if (text == "l2" || text == "L2") return Penalty::L2;
  throw ContractError("unknown penalty '" + std::string(text) + "' (expected l1 or l2)");
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double LogisticModel::decision(const SparseVector& x) const {
  if (x.dimension() != weights.size()) {
    throw ContractError("feature dimension " + std::to_string(x.dimension()) + " does not match model dimension " +
                        std::to_string(weights.size()));
  }
  return x.dot(weights) + bias;
}

double LogisticModel::predict_proba(const SparseVector& x) const { return sigmoid(decision(x)); }

LogisticObjective::LogisticObjective(std::span<const SparseVector> X, std::span<const int> y, Penalty penalty,
                                     double C)
    : X_(X), y_(y), penalty_(penalty), lambda_(0.0), dimension_(X.empty() ? 0 : X[0].dimension()) {
  if (X.size() != y.size() || X.empty()) throw ContractError("objective needs matching, non-empty X and y");
  if (!(C > 0.0) || !std::isfinite(C)) throw ContractError("C must be a positive finite number");
  lambda_ = 1.0 / (C * static_cast<double>(X.size()));
}

double LogisticObjective::mean_loss(std::span<const double> w, double b) const {
  double total = 0.0;
  for (std::size_t i = 0; i < X_.size(); ++i) total += point_loss(X_[i].dot(w) + b, y_[i]);
  return total / static_cast<double>(X_.size());
}

double LogisticObjective::value(std::span<const double> w, double b) const {
  double reg = 0.0;
  if (penalty_ == Penalty::L2) {
    for (double v : w) reg += 0.5 * v * v;
  } else {
    for (double v : w) reg += std::abs(v);
  }
  return mean_loss(w, b) + lambda_ * reg;
}

double LogisticObjective::smooth_gradient(std::span<const double> w, double b, std::span<double> grad_w,
                                          double& grad_b) const {
  const double inv_n = 1.0 / static_cast<double>(X_.size());
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < X_.size(); ++i) {
    double z = X_[i].dot(w) + b;
    loss += point_loss(z, y_[i]);
    double r = sigmoid(z) - y_[i];
    grad_b += r;
    for (const auto& e : X_[i].entries()) grad_w[e.index] += r * e.value;
  }
  loss *= inv_n;
  grad_b *= inv_n;
  for (double& g : grad_w) g *= inv_n;
  if (penalty_ == Penalty::L2) {
    double reg = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      grad_w[j] += lambda_ * w[j];
      reg += 0.5 * w[j] * w[j];
    }
    loss += lambda_ * reg;
  }
  return loss;
}

LogisticModel train_logistic(std::span<const SparseVector> X, std::span<const int> y, const LogisticParams& params) {
  detail::validate_training_data(X, y);
  if (!(params.tol > 0.0)) throw ContractError("tol must be positive");
  if (params.max_iter < 1) throw ContractError("max_iter must be >= 1");
  LogisticObjective objective(X, y, params.penalty, params.C);
  LogisticModel model = params.penalty == Penalty::L2 ? train_l2(objective, params) : train_l1(X, y, objective, params);
  model.penalty = params.penalty;
  model.C = params.C;
  return model;
}

}  // namespace lobbyml
