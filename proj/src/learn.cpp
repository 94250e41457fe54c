#include "nwdag/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nwdag/adjacency.hpp"
#include "nwdag/bounds.hpp"
#include "nwdag/pathnorm.hpp"

namespace nwdag {

double truncate(double v) noexcept { return std::min(std::max(v, 0.0), 1.0); }

double loss(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double y) {
  const double diff = truncate(evaluate(dag, theta, x)) - y;
  return 0.5 * diff * diff;
}

void check_dataset(const Dataset& data, std::size_t d) {
  if (data.size() == 0) throw DomainError("dataset is empty");
  if (data.ys.size() != data.xs.size()) throw ShapeError("dataset has " + std::to_string(data.xs.size()) + " points but " + std::to_string(data.ys.size()) + " labels");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.xs[i].size() != d) throw ShapeError("point " + std::to_string(i) + " does not have dimension " + std::to_string(d));
    for (double v : data.xs[i]) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("point " + std::to_string(i) + " leaves [0,1]^d");
    }
    if (!(data.ys[i] >= 0.0 && data.ys[i] <= 1.0)) throw DomainError("label " + std::to_string(i) + " leaves [0,1]");
  }
}

Dataset sample_dataset(const BarronTarget& target, std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data;
  data.xs.reserve(n);
  data.ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(target.input_dim());
    for (double& v : x) v = unit(rng);
    data.ys.push_back(truncate(target.label(x)));
    data.xs.push_back(std::move(x));
  }
  return data;
}

double empirical_risk(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data) {
  if (data.size() == 0) throw DomainError("empirical risk of an empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) sum += loss(dag, theta, data.xs[i], data.ys[i]);
  return sum / static_cast<double>(data.size());
}

std::pair<double, double> holdout_risk(const NonlinearDag& dag, const ParamVector& theta, const BarronTarget& target, std::size_t samples, Rng& rng) {
  if (samples < 2) throw DomainError("holdout risk needs at least two samples");
  if (target.input_dim() != dag.input_dim()) throw ShapeError("target and network disagree on d");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(dag.input_dim());
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& v : x) v = unit(rng);
    const double l = loss(dag, theta, x, truncate(target.label(x)));
    sum += l;
    sum_sq += l * l;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

void accumulate_output_gradient(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double scale, std::span<double> out) {
  backpropagate(dag, theta, node_values(dag, theta, x), scale, out);
}

void backpropagate(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> z, double scale, std::span<double> out) {
  if (out.size() != dag.param_count()) throw ShapeError("gradient buffer does not have one slot per Param edge");
  if (z.size() != dag.node_count()) throw ShapeError("node values do not have one entry per node");
  const std::size_t n = dag.node_count();
  const std::size_t d = dag.input_dim();
  std::vector<double> adj(n + 1, 0.0);
  adj[n] = scale;
  for (NodeId i = n; i > d; --i) {
    const double g = adj[i];
    if (g == 0.0) continue;
    for (const Arc& arc : dag.incoming(i)) {
      const double zj = z[arc.src - 1];
      switch (arc.kind) {
        case EdgeKind::Param:
          out[arc.slot] += g * zj;
          adj[arc.src] += g * theta[arc.slot];
          break;
        case EdgeKind::Fixed:
          adj[arc.src] += g * arc.weight;
          break;
        case EdgeKind::Nonlinear:
          if (zj > 0.0) adj[arc.src] += g;
          break;
      }
    }
  }
}

std::vector<double> grad(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x, double y) {
  check_params(dag, theta);
  std::vector<double> g(dag.param_count(), 0.0);
  const double f = evaluate(dag, theta, x);
  if (f > 0.0 && f < 1.0) accumulate_output_gradient(dag, theta, x, f - y, g);
  return g;
}

std::vector<double> path_norm_subgradient(const NonlinearDag& dag, const ParamVector& theta) {
  const PathMass mass = path_mass(dag, theta);
  std::vector<double> g(dag.param_count(), 0.0);
  for (NodeId i = dag.input_dim() + 1; i <= dag.node_count(); ++i) {
    for (const Arc& arc : dag.incoming(i)) {
      if (arc.kind != EdgeKind::Param) continue;
      const double w = theta[arc.slot];
      const double sign = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
      g[arc.slot] = sign * mass.inflow[arc.src] * mass.outflow[i];
    }
  }
  return g;
}

namespace {

double path_norm_of(const NonlinearDag& dag, const ParamVector& theta) { return path_norm_neumann(dag, theta).value; }

TraceEntry measure(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, double penalty, std::size_t epoch) {
  TraceEntry e;
  e.epoch = epoch;
  e.r_s = empirical_risk(dag, theta, data);
  e.path_norm = path_norm_of(dag, theta);
  e.objective = e.r_s + penalty * e.path_norm;
  return e;
}

// Gradient of the mean loss over data.xs[idx] plus penalty times the path-norm
// subgradient. Samples are summed in index order.
std::vector<double> objective_gradient(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, std::span<const std::size_t> idx, double penalty) {
  std::vector<double> g(dag.param_count(), 0.0);
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (std::size_t k : idx) {
    const StateVector z = node_values(dag, theta, data.xs[k]);
    const double f = z.back();
    if (f > 0.0 && f < 1.0) backpropagate(dag, theta, z, (f - data.ys[k]) * inv, g);
  }
  if (penalty != 0.0) {
    const auto sub = path_norm_subgradient(dag, theta);
    for (std::size_t s = 0; s < g.size(); ++s) g[s] += penalty * sub[s];
  }
  return g;
}

void check_finite(const TraceEntry& e, std::vector<TraceEntry>& trace) {
  if (!std::isfinite(e.objective)) {
    trace.push_back(e);
    throw TrainingDiverged("objective became non-finite at epoch " + std::to_string(e.epoch), std::move(trace));
  }
}

}  // namespace

double regularized_objective(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, double lambda) {
  return empirical_risk(dag, theta, data) + lambda / std::sqrt(static_cast<double>(data.size())) * path_norm_of(dag, theta);
}

TrainResult train_regularized(const NonlinearDag& dag, const Dataset& data, const TrainConfig& config) {
  if (!(config.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (!(config.step_size > 0.0)) throw DomainError("step size must be positive");
  if (!validate_input_assumption(dag)) throw DomainError("training requires every edge leaving an input to be a Param edge");
  check_dataset(data, dag.input_dim());

  Rng rng(config.seed);
  TrainResult result;
  if (config.initial) {
    check_params(dag, *config.initial);
    result.theta = *config.initial;
  } else {
    result.theta = init_params(dag, config.init, rng);
  }
  ParamVector& theta = result.theta;
  const double penalty = config.lambda / std::sqrt(static_cast<double>(data.size()));

  TraceEntry current = measure(dag, theta, data, penalty, 0);
  check_finite(current, result.trace);
  result.trace.push_back(current);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  if (config.batch_size == 0) {
    double eta = config.step_size;
    const double eta_floor = config.step_size * 1e-12;
    for (std::size_t epoch = 1; epoch <= config.steps; ++epoch) {
      const auto g = objective_gradient(dag, theta, data, order, penalty);
      bool moved = false;
      while (eta >= eta_floor) {
        ParamVector trial = theta;
        for (std::size_t s = 0; s < g.size(); ++s) trial[s] -= eta * g[s];
        TraceEntry next = measure(dag, trial, data, penalty, epoch);
        if (std::isfinite(next.objective) && next.objective <= current.objective) {
          theta = std::move(trial);
          current = next;
          moved = true;
          eta = std::min(config.step_size, 2.0 * eta);
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;  // no descent step above the floor: stationary to working precision
      result.trace.push_back(current);
    }
    return result;
  }

  const std::size_t batch = std::min(config.batch_size, data.size());
  std::size_t t = 0;
  for (std::size_t epoch = 1; epoch <= config.steps; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t lo = 0; lo < order.size(); lo += batch) {
      const std::size_t hi = std::min(order.size(), lo + batch);
      const auto g = objective_gradient(dag, theta, data, std::span<const std::size_t>(order).subspan(lo, hi - lo), penalty);
      const double eta = config.step_size / std::sqrt(static_cast<double>(++t));
      for (std::size_t s = 0; s < g.size(); ++s) theta[s] -= eta * g[s];
    }
    current = measure(dag, theta, data, penalty, epoch);
    check_finite(current, result.trace);
    result.trace.push_back(current);
  }
  return result;
}

RiskReport assess(const NonlinearDag& dag, const ParamVector& theta, const Dataset& data, const BarronTarget& target, const AssessConfig& config) {
  RiskReport report;
  report.delta = config.delta;
  report.r_s = empirical_risk(dag, theta, data);
  Rng rng(config.holdout_seed);
  std::tie(report.r_d_hat, report.r_d_stderr) = holdout_risk(dag, theta, target, config.holdout_samples, rng);
  report.path_norm = path_norm_of(dag, theta);
  report.aposteriori_bound = aposteriori_bound(report.path_norm, data.size(), dag.input_dim(), config.delta);
  if (config.lambda0) {
    // Shifted labels are not a Barron function of x (the constant part is not
    // representable without biases), so only scaled targets qualify.
    if (target.label_offset() != 0.0) throw DomainError("the a priori bound needs labels without an affine offset");
    report.apriori_bound = apriori_bound(std::abs(target.label_scale()) * target.barron_bound(),edge_counts(dag).n_non, data.size(), dag.input_dim(), *config.lambda0, config.delta);
  }
  return report;
}

}  // namespace nwdag
