#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nwdag/approx.hpp"
#include "nwdag/builders.hpp"
#include "nwdag/error.hpp"

namespace nwdag {

// Clamp to [0, 1].
double truncate(double v) noexcept;

// 1/2 |truncate(f(x; theta)) - y|^2.
double loss(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double y);

struct Dataset {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;

  std::size_t size() const noexcept { return xs.size(); }
};

// Throws DomainError unless the dataset is nonempty, every point lies in
// [0,1]^d, and every label lies in [0,1].
void check_dataset(const Dataset& data, std::size_t d);

// n points uniform on [0,1]^d labeled by target.label.
Dataset sample_dataset(const BarronTarget& target, std::size_t n, Rng& rng);

double empirical_risk(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data);

// Monte Carlo estimate of the population risk against target.label under the
// uniform distribution on [0,1]^d: (mean, standard error).
std::pair<double, double> holdout_risk(const NonlinearDag& dag, const ParamVector& theta, const BarronTarget& target, std::size_t samples, Rng& rng);

// out[slot] += scale * d f(x; theta) / d theta_slot, by one reverse sweep.
// relu'(0) is taken as 0.
void accumulate_output_gradient(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double scale, std::span<double> out);

// Same sweep from node values z already computed by node_values().
void backpropagate(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> z, double scale, std::span<double> out);

// Gradient of loss(dag, theta, x, y) over the Param slots. The truncation
// derivative is 1 strictly inside (0, 1) and 0 elsewhere.
std::vector<double> grad(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double y);

// sign(theta_e) times the weighted mass of all source-to-sink paths through
// Param edge e with |theta_e| factored out; sign(0) = 0.
std::vector<double> path_norm_subgradient(const NonlinearDag& dag, const ParamVector& theta);

// R_S + lambda / sqrt(n) * path norm.
double regularized_objective(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, double lambda);

struct TrainConfig {
  double lambda = 0.0;
  std::size_t steps = 200;  // epochs
  double step_size = 0.1;
  // 0 selects full-batch descent with backtracking (J never increases);
  // otherwise mini-batches of this size with step size step_size / sqrt(t).
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  InitScheme init = InitScheme::scaled();
  std::optional<ParamVector> initial;  // overrides init when set
};

struct TraceEntry {
  std::size_t epoch = 0;
  double r_s = 0.0;
  double path_norm = 0.0;
  double objective = 0.0;
};

struct TrainResult {
  ParamVector theta;
  std::vector<TraceEntry> trace;  // entry 0 is the initial point
};

class TrainingDiverged : public NumericFailure {
 public:
  TrainingDiverged(const std::string& what, std::vector<TraceEntry> trace) : NumericFailure(what), trace_(std::move(trace)) {}
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

 private:
  std::vector<TraceEntry> trace_;
};

// Subgradient descent on J(theta) = R_S(theta) + lambda / sqrt(n) ||theta||_P.
// Requires the input assumption. Throws TrainingDiverged on a non-finite J.
TrainResult train_regularized(const NonlinearDag& dag, const Dataset& data, const TrainConfig& config);

struct RiskReport {
  double r_s = 0.0;
  double r_d_hat = 0.0;
  double r_d_stderr = 0.0;
  double path_norm = 0.0;
  double aposteriori_bound = 0.0;
  std::optional<double> apriori_bound;
  double delta = 0.1;
};

struct AssessConfig {
  std::size_t holdout_samples = 20000;
  double delta = 0.1;
  std::optional<double> lambda0;  // a priori bound reported when set
  std::uint64_t holdout_seed = 0;
};

RiskReport assess(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, const BarronTarget& target, const AssessConfig& config);

}  // namespace nwdag
