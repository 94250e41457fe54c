#include "nwdag/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nwdag/error.hpp"

namespace nwdag {

void SymbolMatrix::add(NodeId i, NodeId j, double v) {
  if (i < 1 || i > size() || j < 1 || j >= i) {
    throw ShapeError("symbol entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not strictly lower triangular");
  }
  auto& r = rows_[i - 1];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, NodeId c) { return e.col < c; });
  if (it != r.end() && it->col == j) {
    it->value += v;
    if (it->value == 0.0) r.erase(it);
  } else if (v != 0.0) {
    r.insert(it, Entry{j, v});
  }
}

double SymbolMatrix::at(NodeId i, NodeId j) const {
  const auto& r = rows_.at(i - 1);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, NodeId c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

std::size_t SymbolMatrix::nonzero_count() const noexcept {
  std::size_t count = 0;
  for (const auto& r : rows_) count += r.size();
  return count;
}

double SymbolMatrix::l11_norm() const noexcept {
  double sum = 0.0;
  for (const auto& r : rows_)
    for (const auto& e : r) sum += std::abs(e.value);
  return sum;
}

StateVector SymbolMatrix::apply(std::span<const double> z) const {
  if (z.size() != size()) throw ShapeError("vector length does not match symbol size");
  StateVector out(size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double acc = 0.0;
    for (const auto& e : rows_[i]) acc += e.value * z[e.col - 1];
    out[i] = acc;
  }
  return out;
}

SymbolMatrix SymbolMatrix::operator*(const SymbolMatrix& rhs) const {
  if (rhs.size() != size()) throw ShapeError("symbol sizes differ");
  SymbolMatrix out(size());
  std::vector<double> acc(size() + 1, 0.0);
  std::vector<NodeId> touched;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    touched.clear();
    for (const auto& a : rows_[i]) {
      for (const auto& b : rhs.rows_[a.col - 1]) {
        if (acc[b.col] == 0.0) touched.push_back(b.col);
        acc[b.col] += a.value * b.value;
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (NodeId c : touched) {
      if (acc[c] != 0.0) out.rows_[i].push_back(Entry{c, acc[c]});
      acc[c] = 0.0;
    }
  }
  return out;
}

SymbolMatrix symbol(const NonlinearDag& dag, const ParamVector& theta, double xi, bool absolute) {
  check_params(dag, theta);
  SymbolMatrix sym(dag.node_count());
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    for (const Arc& arc : dag.incoming(i)) {
      double v = arc.kind == EdgeKind::Nonlinear ? xi : arc_weight(arc, theta);
      if (absolute && arc.kind != EdgeKind::Nonlinear) v = std::abs(v);
      sym.add(i, arc.src, v);
    }
  }
  return sym;
}

SymbolMatrix indicator_symbol(const NonlinearDag& dag, EdgeKind kind) {
  dag.require_valid();
  SymbolMatrix sym(dag.node_count());
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    for (const Arc& arc : dag.incoming(i)) {
      if (arc.kind == kind) sym.add(i, arc.src, 1.0);
    }
  }
  return sym;
}

SymbolMatrix structure_symbol(const NonlinearDag& dag) {
  dag.require_valid();
  SymbolMatrix sym(dag.node_count());
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    for (const Arc& arc : dag.incoming(i)) sym.add(i, arc.src, 1.0);
  }
  return sym;
}

IOVectors io_vectors(const NonlinearDag& dag) {
  dag.require_valid();
  const std::size_t n = dag.node_count();
  IOVectors io{StateVector(n, 0.0), StateVector(n, 0.0), StateVector(n, 0.0)};
  for (std::size_t i = 0; i < dag.input_dim(); ++i) io.one_in[i] = io.p0_diagonal[i] = 1.0;
  io.one_out[n - 1] = 1.0;
  return io;
}

StateVector apply_operator(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> z) {
  check_params(dag, theta);
  if (z.size() != dag.node_count()) throw ShapeError("state vector length does not match node count");
  StateVector out(dag.node_count(), 0.0);
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    double acc = 0.0;
    for (const Arc& arc : dag.incoming(i)) {
      const double zj = z[arc.src - 1];
      acc += arc.kind == EdgeKind::Nonlinear ? relu(zj) : arc_weight(arc, theta) * zj;
    }
    out[i - 1] = acc;
  }
  return out;
}

SymbolMatrix matrix_power(const SymbolMatrix& sym, std::size_t s) {
  if (s < 1) throw DomainError("matrix power exponent must be at least 1");
  SymbolMatrix result = sym;
  for (std::size_t k = 1; k < s && !result.is_zero(); ++k) result = sym * result;
  return result;
}

bool matrix_power_is_zero(const SymbolMatrix& sym, std::size_t s) { return matrix_power(sym, s).is_zero(); }

std::size_t nilpotency_index(const NonlinearDag& dag) {
  dag.require_valid();
  std::vector<std::size_t> depth(dag.node_count() + 1, 0);
  std::size_t longest = 0;
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    for (const Arc& arc : dag.incoming(i)) depth[i] = std::max(depth[i], depth[arc.src] + 1);
    longest = std::max(longest, depth[i]);
  }
  return longest + 1;
}

namespace {

StateVector initial_state(const NonlinearDag& dag, std::span<const double> x) {
  if (x.size() != dag.input_dim()) {
    throw ShapeError("input has length " + std::to_string(x.size()) + ", expected d=" + std::to_string(dag.input_dim()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw NumericFailure("non-finite network input");
  }
  StateVector z0(dag.node_count(), 0.0);
  std::copy(x.begin(), x.end(), z0.begin());
  return z0;
}

void require_finite(std::span<const double> z) {
  for (double v : z) {
    if (!std::isfinite(v)) throw NumericFailure("non-finite intermediate value during forward evaluation");
  }
}

}  // namespace

std::vector<StateVector> forward_iterates(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x) {
  check_params(dag, theta);
  const StateVector z0 = initial_state(dag, x);
  std::vector<StateVector> iterates{z0};
  // Nilpotency bounds the iteration count by N; the extra slack only guards
  // against a logic error turning into an endless loop.
  for (std::size_t s = 1; s <= dag.node_count() + 1; ++s) {
    StateVector z = apply_operator(dag, theta, iterates.back());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += z0[i];
    require_finite(z);
    const bool stationary = z == iterates.back();
    iterates.push_back(std::move(z));
    if (stationary) return iterates;
  }
  throw NumericFailure("fixed-point iteration failed to become stationary");
}

FixedPointResult forward_fixed_point(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x) {
  auto iterates = forward_iterates(dag, theta, x);
  FixedPointResult result;
  result.steps = iterates.size() - 1;
  result.z_inf = std::move(iterates.back());
  result.output = result.z_inf.back();
  return result;
}

StateVector node_values(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x) {
  check_params(dag, theta);
  StateVector h = initial_state(dag, x);
  for (NodeId i = dag.input_dim() + 1; i <= dag.node_count(); ++i) {
    double acc = 0.0;
    for (const Arc& arc : dag.incoming(i)) {
      const double hj = h[arc.src - 1];
      acc += arc.kind == EdgeKind::Nonlinear ? relu(hj) : arc_weight(arc, theta) * hj;
    }
    if (!std::isfinite(acc)) throw NumericFailure("non-finite intermediate value at node " + std::to_string(i));
    h[i - 1] = acc;
  }
  return h;
}

double evaluate(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x) {
  return node_values(dag, theta, x).back();
}

}  // namespace nwdag
