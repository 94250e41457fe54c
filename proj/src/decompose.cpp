#include <string>

#include "nwdag/builders.hpp"
#include "nwdag/error.hpp"

namespace nwdag {

namespace {

// Edges of dag with Param weights taken from theta.
std::vector<Edge> edges_with(const NonlinearDag& dag, const ParamVector& theta) {
  check_params(dag, theta);
  std::vector<Edge> edges(dag.edges().begin(), dag.edges().end());
  std::size_t slot = 0;
  for (Edge& e : edges) {
    if (e.kind == EdgeKind::Param) e.weight = theta[slot++];
  }
  return edges;
}

}  // namespace

BuiltNetwork embed_pad(const NonlinearDag& dag, const ParamVector& theta, std::size_t n_bar) {
  if (n_bar <= dag.node_count()) {
    throw DomainError("padding target N_bar=" + std::to_string(n_bar) + " must exceed N=" + std::to_string(dag.node_count()));
  }
  std::vector<Edge> edges = edges_with(dag, theta);
  edges.push_back(fixed_edge(n_bar, dag.sink(), 1.0));
  NonlinearDag padded(n_bar, dag.input_dim(), std::move(edges));
  padded.require_valid();
  // The relay is Fixed and sorts last, so the Param slots are unchanged.
  return {std::move(padded), theta};
}

BuiltNetwork truncate_at(const NonlinearDag& dag, const ParamVector& theta, NodeId i) {
  if (i <= dag.input_dim() || i > dag.node_count()) throw DomainError("truncation node must lie in d+1..N");
  std::vector<Edge> edges;
  ParamVector sub_theta;
  for (const Edge& e : edges_with(dag, theta)) {
    if (e.dst > i) break;
    if (e.kind == EdgeKind::Param) sub_theta.values.push_back(*e.weight);
    edges.push_back(e);
  }
  // A node no source reaches yields an invalid (zero-function) sub-network;
  // callers see that through validate().
  return {NonlinearDag(i, dag.input_dim(), std::move(edges)), std::move(sub_theta)};
}

std::vector<std::vector<double>> decomposition_coefficients(const NonlinearDag& dag, const ParamVector& theta) {
  check_params(dag, theta);
  if (!validate_input_assumption(dag)) throw DomainError("decomposition requires every edge leaving an input to be a Param edge");
  const std::size_t n = dag.node_count();
  const std::size_t d = dag.input_dim();

  // Basis index b < d is x_{b+1}; b >= d is relu(h_{b+1}).
  std::vector<std::vector<double>> coeff(n + 1, std::vector<double>(n, 0.0));
  for (NodeId i = 1; i <= d; ++i) coeff[i][i - 1] = 1.0;
  for (NodeId i = d + 1; i <= n; ++i) {
    auto& row = coeff[i];
    for (const Arc& arc : dag.incoming(i)) {
      if (arc.kind == EdgeKind::Nonlinear) {
        row[arc.src - 1] += 1.0;
      } else {
        const double w = arc_weight(arc, theta);
        const auto& src_row = coeff[arc.src];
        for (std::size_t b = 0; b < n; ++b) row[b] += w * src_row[b];
      }
    }
  }
  return coeff;
}

SinkDecomposition decompose_sink(const NonlinearDag& dag, const ParamVector& theta) {
  const auto coeff = decomposition_coefficients(dag, theta);
  const std::size_t n = dag.node_count();
  const std::size_t d = dag.input_dim();
  const auto& top = coeff[n];

  SinkDecomposition out;
  out.linear.assign(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(d));
  out.nonlinear.assign(top.begin() + static_cast<std::ptrdiff_t>(d), top.begin() + static_cast<std::ptrdiff_t>(n - 1));
  for (NodeId i = d + 1; i < n; ++i) out.subnets.push_back(truncate_at(dag, theta, i));
  return out;
}

}  // namespace nwdag
