#include "nwdag/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nwdag/adjacency.hpp"
#include "nwdag/error.hpp"
#include "nwdag/learn.hpp"
#include "nwdag/parallel.hpp"
#include "nwdag/pathnorm.hpp"

namespace nwdag {

Projection projection_mode(const NonlinearDag& dag) {
  dag.require_valid();
  const auto sink_arcs = dag.incoming(dag.sink());
  const bool output_layer = std::all_of(sink_arcs.begin(), sink_arcs.end(), [](const Arc& a) { return a.kind == EdgeKind::Param; });
  if (output_layer) return {ProjectionMode::OutputLayer, 0, ""};

  // Fewest and most Param edges on any source-to-node path.
  const std::size_t n = dag.node_count();
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> lo(n + 1, kUnreached), hi(n + 1, 0);
  for (NodeId i = 1; i <= dag.input_dim(); ++i) lo[i] = 0;
  for (NodeId i = dag.input_dim() + 1; i <= n; ++i) {
    for (const Arc& arc : dag.incoming(i)) {
      if (lo[arc.src] == kUnreached) continue;
      const std::size_t step = arc.kind == EdgeKind::Param ? 1 : 0;
      lo[i] = std::min(lo[i], lo[arc.src] + step);
      hi[i] = std::max(hi[i], hi[arc.src] + step);
    }
  }
  if (lo[n] == hi[n] && lo[n] >= 1) return {ProjectionMode::Layered, lo[n], ""};
  return {ProjectionMode::Unsupported, 0,
          "sink reads non-Param edges and source-to-sink paths cross between " + std::to_string(lo[n]) + " and " + std::to_string(hi[n]) + " Param edges"};
}

ParamVector scale_output_layer(const NonlinearDag& dag, const ParamVector& theta, double factor) {
  check_params(dag, theta);
  ParamVector out = theta;
  for (const Arc& arc : dag.incoming(dag.sink())) {
    if (arc.kind == EdgeKind::Param) out[arc.slot] *= factor;
  }
  return out;
}

namespace {

ParamVector rescale(const NonlinearDag& dag, const Projection& projection, const ParamVector& theta, double ratio) {
  switch (projection.mode) {
    case ProjectionMode::OutputLayer:
      return scale_output_layer(dag, theta, ratio);
    case ProjectionMode::Layered: {
      const double c = std::pow(ratio, 1.0 / static_cast<double>(projection.depth));
      ParamVector out = theta;
      for (double& v : out.values) v *= c;
      return out;
    }
    case ProjectionMode::Unsupported:
      break;
  }
  throw DomainError("no norm-ball projection for this DAG: " + projection.diagnostic);
}

struct TrialContext {
  const std::vector<std::vector<double>>& xs;
  const NonlinearDag& dag;
  const Projection& projection;
  double q;
  const RademacherBudget& budget;
};

double run_trial(const TrialContext& ctx, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = ctx.xs.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> tau(n);
  std::bernoulli_distribution coin(0.5);
  for (double& t : tau) t = coin(rng) ? 1.0 : -1.0;

  const auto sink_arcs = ctx.dag.incoming(ctx.dag.sink());
  const bool polish = ctx.projection.mode == ProjectionMode::OutputLayer;
  double best = 0.0;  // theta = 0 is feasible

  for (std::size_t r = 0; r < ctx.budget.restarts; ++r) {
    ParamVector theta = init_params(ctx.dag, InitScheme::scaled(), rng);
    const double p0 = path_norm_neumann(ctx.dag, theta).value;
    if (p0 == 0.0) continue;
    theta = rescale(ctx.dag, ctx.projection, theta, ctx.q / p0);
    double ref = 0.0;
    for (double v : theta) ref = std::max(ref, std::abs(v));

    std::vector<double> g(ctx.dag.param_count());
    std::vector<double> corr(sink_arcs.size());
    for (std::size_t t = 0; t <= ctx.budget.steps; ++t) {
      std::fill(g.begin(), g.end(), 0.0);
      std::fill(corr.begin(), corr.end(), 0.0);
      double value = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const StateVector z = node_values(ctx.dag, theta, ctx.xs[i]);
        value += tau[i] * z.back() * inv_n;
        if (polish) {
          for (std::size_t a = 0; a < sink_arcs.size(); ++a) corr[a] += tau[i] * z[sink_arcs[a].src - 1] * inv_n;
        }
        backpropagate(ctx.dag, theta, z, tau[i] * inv_n, g);
      }
      best = std::max(best, value);
      if (polish) {
        // Best output layer for the current features: all of the budget q on
        // the single sink input with the largest correlation per unit mass.
        const PathMass mass = path_mass(ctx.dag, theta);
        for (std::size_t a = 0; a < sink_arcs.size(); ++a) {
          const double inflow = mass.inflow[sink_arcs[a].src];
          if (inflow > 0.0) best = std::max(best, ctx.q * std::abs(corr[a]) / inflow);
        }
      }
      if (t == ctx.budget.steps) break;

      double gmax = 0.0;
      for (double v : g) gmax = std::max(gmax, std::abs(v));
      if (gmax == 0.0) break;
      const double eta = ctx.budget.step_size * ref / std::sqrt(static_cast<double>(t + 1));
      for (std::size_t s = 0; s < g.size(); ++s) theta[s] += eta * g[s] / gmax;
      theta = project_to_ball(ctx.dag, ctx.projection, theta, ctx.q);
    }
  }
  return best;
}

}  // namespace

ParamVector project_to_ball(const NonlinearDag& dag, const Projection& projection, const ParamVector& theta, double q) {
  const double p = path_norm_neumann(dag, theta).value;
  if (p <= q) return theta;
  return rescale(dag, projection, theta, q / p);
}

RademacherEstimate rademacher_estimate(const std::vector<std::vector<double>>& xs, const NonlinearDag& skeleton, double q, std::size_t trials, const RademacherBudget& budget, Rng& rng) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("Q must be finite and nonnegative");
  if (xs.empty()) throw DomainError("Rademacher estimate needs at least one point");
  if (trials < 1) throw DomainError("at least one sign trial is required");
  for (const auto& x : xs) {
    if (x.size() != skeleton.input_dim()) throw ShapeError("sample point does not match the skeleton's input dimension");
  }
  skeleton.require_valid();

  std::vector<std::uint64_t> seeds(trials);
  for (auto& s : seeds) s = rng();

  RademacherEstimate out;
  const Projection projection = projection_mode(skeleton);
  if (q == 0.0) {
    out.trials_used = trials;
    out.per_trial.assign(trials, 0.0);
    return out;
  }
  if (projection.mode == ProjectionMode::Unsupported) {
    out.rejected = trials;
    out.diagnostic = projection.diagnostic;
    out.estimate = std::numeric_limits<double>::quiet_NaN();
    out.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  const TrialContext ctx{xs, skeleton, projection, q, budget};
  out.per_trial.assign(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) { out.per_trial[t] = run_trial(ctx, seeds[t]); });

  out.trials_used = trials;
  double sum = 0.0;
  for (double v : out.per_trial) sum += v;
  out.estimate = sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double v : out.per_trial) ss += (v - out.estimate) * (v - out.estimate);
    out.stderr_ = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
  }
  return out;
}

}  // namespace nwdag
