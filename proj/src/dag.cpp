#include "nwdag/dag.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "nwdag/error.hpp"

namespace nwdag {

const char* to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::Param:
      return "param";
    case EdgeKind::Fixed:
      return "fixed";
    case EdgeKind::Nonlinear:
      return "nonlinear";
  }
  return "?";
}

namespace {

std::string edge_label(const Edge& e) {
  return std::to_string(e.dst) + "<-" + std::to_string(e.src) + " (" + to_string(e.kind) + ")";
}

}  // namespace

NonlinearDag::NonlinearDag(std::size_t node_count, std::size_t input_dim, std::vector<Edge> edges)
    : node_count_(node_count), input_dim_(input_dim), edges_(std::move(edges)) {
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.dst, a.src, a.kind) < std::tie(b.dst, b.src, b.kind);
  });

  const std::size_t n = node_count_;
  const std::size_t d = input_dim_;

  // Messages are grouped by category; within a category they follow edge order.
  std::vector<std::string> shape, ordering, sources, duplicates, weights;
  if (d < 1) shape.push_back("shape: input dimension d must be at least 1");
  if (n < d + 1) shape.push_back("shape: node count N=" + std::to_string(n) + " must be at least d+1=" + std::to_string(d + 1));

  std::vector<bool> structural(edges_.size(), true);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.src < 1 || e.dst < 1 || e.src > n || e.dst > n) {
      ordering.push_back("range: edge " + edge_label(e) + " has an endpoint outside 1.." + std::to_string(n));
      structural[k] = false;
      continue;
    }
    if (e.src >= e.dst) {
      ordering.push_back("ordering: edge " + edge_label(e) + " does not satisfy src < dst");
      structural[k] = false;
      continue;
    }
    if (e.dst <= d) {
      sources.push_back("source: edge " + edge_label(e) + " enters source node " + std::to_string(e.dst));
      structural[k] = false;
    }
  }
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    const Edge& prev = edges_[k - 1];
    const Edge& e = edges_[k];
    if (prev.dst == e.dst && prev.src == e.src && (k < 2 || edges_[k - 2].dst != e.dst || edges_[k - 2].src != e.src)) {
      duplicates.push_back("duplicate: more than one edge for (dst=" + std::to_string(e.dst) + ", src=" + std::to_string(e.src) + ")");
    }
  }
  for (const Edge& e : edges_) {
    const bool weighted = e.kind != EdgeKind::Nonlinear;
    if (weighted && !e.weight) {
      weights.push_back("weight: edge " + edge_label(e) + " is missing its weight");
    } else if (!weighted && e.weight) {
      weights.push_back("weight: edge " + edge_label(e) + " carries a dangling weight");
    } else if (weighted && !std::isfinite(*e.weight)) {
      weights.push_back("weight: edge " + edge_label(e) + " has a non-finite weight");
    }
  }

  for (auto* group : {&shape, &ordering, &sources, &duplicates, &weights}) {
    violations_.insert(violations_.end(), group->begin(), group->end());
  }

  if (shape.empty() && !edges_.empty()) {
    // Edges are sorted by dst, so one pass propagates reachability forward.
    std::vector<bool> reached(n + 1, false);
    for (std::size_t i = 1; i <= d; ++i) reached[i] = true;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      if (structural[k] && reached[edges_[k].src]) reached[edges_[k].dst] = true;
    }
    if (!reached[n]) violations_.push_back("reachability: sink " + std::to_string(n) + " is not reachable from any source");
  }

  if (!violations_.empty()) return;

  row_begin_.assign(n + 2, 0);
  arcs_.reserve(edges_.size());
  std::size_t k = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    row_begin_[i] = arcs_.size();
    for (; k < edges_.size() && edges_[k].dst == i; ++k) {
      const Edge& e = edges_[k];
      Arc arc{e.src, e.kind, e.weight.value_or(0.0), kNoSlot};
      if (e.kind == EdgeKind::Param) arc.slot = param_count_++;
      arcs_.push_back(arc);
    }
  }
  row_begin_[n + 1] = arcs_.size();
}

void NonlinearDag::require_valid() const {
  if (!is_valid()) throw InvalidDag("invalid DAG: " + violations_.front());
}

std::span<const Arc> NonlinearDag::incoming(NodeId i) const {
  require_valid();
  if (i < 1 || i > node_count_) throw ShapeError("node index " + std::to_string(i) + " out of range");
  return std::span<const Arc>(arcs_).subspan(row_begin_[i], row_begin_[i + 1] - row_begin_[i]);
}

std::vector<std::string> validate(const NonlinearDag& dag) { return dag.violations(); }

std::vector<std::pair<NodeId, NodeId>> canonical_param_order(const NonlinearDag& dag) {
  dag.require_valid();
  std::vector<std::pair<NodeId, NodeId>> order;
  order.reserve(dag.param_count());
  for (const Edge& e : dag.edges()) {
    if (e.kind == EdgeKind::Param) order.emplace_back(e.dst, e.src);
  }
  return order;
}

std::vector<NodeId> topological_nodes(const NonlinearDag& dag) {
  dag.require_valid();
  std::vector<NodeId> nodes(dag.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i + 1;
  return nodes;
}

ParamVector stored_params(const NonlinearDag& dag) {
  dag.require_valid();
  ParamVector theta;
  theta.values.reserve(dag.param_count());
  for (const Edge& e : dag.edges()) {
    if (e.kind == EdgeKind::Param) theta.values.push_back(*e.weight);
  }
  return theta;
}

NonlinearDag with_params(const NonlinearDag& dag, const ParamVector& theta) {
  check_params(dag, theta);
  std::vector<Edge> edges(dag.edges().begin(), dag.edges().end());
  std::size_t slot = 0;
  for (Edge& e : edges) {
    if (e.kind == EdgeKind::Param) e.weight = theta[slot++];
  }
  return NonlinearDag(dag.node_count(), dag.input_dim(), std::move(edges));
}

void check_params(const NonlinearDag& dag, const ParamVector& theta) {
  dag.require_valid();
  if (theta.size() != dag.param_count()) {
    throw ShapeError("parameter vector has " + std::to_string(theta.size()) + " slots, DAG has " + std::to_string(dag.param_count()) + " Param edges");
  }
}

}  // namespace nwdag
