#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nwdag {

// 1-based node index. Nodes 1..d are the sources (network inputs), node N is
// the sink (network output); every edge points from a smaller to a larger index.
using NodeId = std::size_t;

// Red edges carry trainable weights, green edges carry weights fixed by the
// architecture, Nonlinear edges apply ReLU and carry no weight.
enum class EdgeKind { Param, Fixed, Nonlinear };

const char* to_string(EdgeKind kind) noexcept;

struct Edge {
  NodeId dst = 0;
  NodeId src = 0;
  EdgeKind kind = EdgeKind::Param;
  std::optional<double> weight;  // present iff kind is Param or Fixed

  bool operator==(const Edge&) const = default;
};

inline Edge param_edge(NodeId dst, NodeId src, double w) { return {dst, src, EdgeKind::Param, w}; }
inline Edge fixed_edge(NodeId dst, NodeId src, double w) { return {dst, src, EdgeKind::Fixed, w}; }
inline Edge relu_edge(NodeId dst, NodeId src) { return {dst, src, EdgeKind::Nonlinear, std::nullopt}; }

// Trainable weights, one slot per Param edge in canonical (dst, src) order.
struct ParamVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  auto begin() const noexcept { return values.begin(); }
  auto end() const noexcept { return values.end(); }

  bool operator==(const ParamVector&) const = default;
};

inline constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

// An incoming edge as seen from its destination during a sweep.
struct Arc {
  NodeId src;
  EdgeKind kind;
  double weight;     // fixed weight; the stored value for Param arcs
  std::size_t slot;  // ParamVector slot for Param arcs, kNoSlot otherwise
};

// G = (V, E, w, Sigma) with V = {1..N}. Immutable once constructed. Construction
// never throws on structural problems: they are recorded and reported by
// validate(), and operations that need a valid DAG throw InvalidDag.
class NonlinearDag {
 public:
  NonlinearDag() = default;
  NonlinearDag(std::size_t node_count, std::size_t input_dim, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  NodeId sink() const noexcept { return node_count_; }

  // Sorted by (dst, src, kind).
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t param_count() const noexcept { return param_count_; }

  bool is_valid() const noexcept { return violations_.empty(); }
  const std::vector<std::string>& violations() const noexcept { return violations_; }
  void require_valid() const;

  // Incoming arcs of node i sorted by source. Requires a valid DAG.
  std::span<const Arc> incoming(NodeId i) const;

  bool operator==(const NonlinearDag& other) const { return node_count_ == other.node_count_ && input_dim_ == other.input_dim_ && edges_ == other.edges_; }

 private:
  std::size_t node_count_ = 0;
  std::size_t input_dim_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> violations_;
  std::size_t param_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> row_begin_;  // CSR offsets into arcs_, indexed by node
};

std::vector<std::string> validate(const NonlinearDag& dag);

// (dst, src) of every Param edge, lexicographically sorted; slot k of a
// ParamVector belongs to entry k.
std::vector<std::pair<NodeId, NodeId>> canonical_param_order(const NonlinearDag& dag);

std::vector<NodeId> topological_nodes(const NonlinearDag& dag);

// Weights currently stored on the Param edges.
ParamVector stored_params(const NonlinearDag& dag);

// Copy of dag with the Param edge weights replaced by theta.
NonlinearDag with_params(const NonlinearDag& dag, const ParamVector& theta);

// Throws ShapeError when theta does not have one slot per Param edge.
void check_params(const NonlinearDag& dag, const ParamVector& theta);

inline double arc_weight(const Arc& arc, const ParamVector& theta) {
  return arc.kind == EdgeKind::Param ? theta[arc.slot] : arc.weight;
}

}  // namespace nwdag
