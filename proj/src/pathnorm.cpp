#include "nwdag/pathnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nwdag/adjacency.hpp"
#include "nwdag/error.hpp"

namespace nwdag {

namespace {

double arc_factor(const Arc& arc, const ParamVector& theta) {
  return arc.kind == EdgeKind::Nonlinear ? kNonlinearPathFactor : std::abs(arc_weight(arc, theta));
}

}  // namespace

PathNormReport path_norm_neumann(const NonlinearDag& dag, const ParamVector& theta) {
  const SymbolMatrix a = symbol(dag, theta, kNonlinearPathFactor, /*absolute=*/true);
  StateVector v = io_vectors(dag).one_in;

  PathNormReport report;
  report.method = PathNormReport::Method::Neumann;
  auto nonzero = [](const StateVector& z) { return std::any_of(z.begin(), z.end(), [](double e) { return e != 0.0; }); };
  // A is nilpotent, so this runs at most nilpotency_index(dag) times.
  while (nonzero(v)) {
    ++report.terms;
    report.value += v.back();
    v = a.apply(v);
  }
  return report;
}

std::size_t count_paths(const NonlinearDag& dag) {
  dag.require_valid();
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> count(dag.node_count() + 1, 0);
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    if (i <= dag.input_dim()) {
      count[i] = 1;
      continue;
    }
    for (const Arc& arc : dag.incoming(i)) {
      count[i] = count[arc.src] > kMax - count[i] ? kMax : count[i] + count[arc.src];
    }
  }
  return count[dag.sink()];
}

namespace {

struct Enumerator {
  const NonlinearDag& dag;
  const ParamVector& theta;
  double total = 0.0;
  std::size_t paths = 0;

  // Walks backwards from node i; product already holds the factors between i
  // and the sink.
  void walk(NodeId i, double product) {
    if (i <= dag.input_dim()) {
      total += product;
      ++paths;
      return;
    }
    for (const Arc& arc : dag.incoming(i)) walk(arc.src, product * arc_factor(arc, theta));
  }
};

}  // namespace

PathNormReport path_norm_enumerate(const NonlinearDag& dag, const ParamVector& theta, std::size_t max_paths) {
  check_params(dag, theta);
  const std::size_t expected = count_paths(dag);
  if (expected > max_paths) {
    throw BudgetExceeded("DAG has more than " + std::to_string(max_paths) + " source-to-sink paths; use the Neumann method");
  }
  Enumerator e{dag, theta};
  e.walk(dag.sink(), 1.0);

  PathNormReport report;
  report.method = PathNormReport::Method::Enumeration;
  report.value = e.total;
  report.paths_counted = e.paths;
  return report;
}

PathMass path_mass(const NonlinearDag& dag, const ParamVector& theta) {
  check_params(dag, theta);
  const std::size_t n = dag.node_count();
  PathMass mass{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  for (NodeId i = 1; i <= n; ++i) {
    if (i <= dag.input_dim()) {
      mass.inflow[i] = 1.0;
      continue;
    }
    for (const Arc& arc : dag.incoming(i)) mass.inflow[i] += arc_factor(arc, theta) * mass.inflow[arc.src];
  }
  mass.outflow[n] = 1.0;
  for (NodeId i = n; i >= 1; --i) {
    for (const Arc& arc : dag.incoming(i)) mass.outflow[arc.src] += arc_factor(arc, theta) * mass.outflow[i];
  }
  return mass;
}

EdgeCounts edge_counts(const NonlinearDag& dag) {
  auto count = [&](EdgeKind kind) { return static_cast<std::size_t>(indicator_symbol(dag, kind).l11_norm()); };
  return EdgeCounts{count(EdgeKind::Param), count(EdgeKind::Fixed), count(EdgeKind::Nonlinear)};
}

}  // namespace nwdag
