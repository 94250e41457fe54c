#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nwdag/dag.hpp"

namespace nwdag {

// z in R^N; entry i-1 holds the value at node i.
using StateVector = std::vector<double>;

inline double relu(double v) noexcept { return v > 0.0 ? v : 0.0; }

// Numeric N x N strictly lower-triangular matrix stored by destination row.
// Exact zeros are never stored, so structural and numeric sparsity coincide.
class SymbolMatrix {
 public:
  struct Entry {
    NodeId col;
    double value;
    bool operator==(const Entry&) const = default;
  };

  SymbolMatrix() = default;
  explicit SymbolMatrix(std::size_t n) : rows_(n) {}

  std::size_t size() const noexcept { return rows_.size(); }

  // Adds v to entry (i, j); requires j < i.
  void add(NodeId i, NodeId j, double v);
  double at(NodeId i, NodeId j) const;
  std::span<const Entry> row(NodeId i) const { return rows_.at(i - 1); }

  std::size_t nonzero_count() const noexcept;
  bool is_zero() const noexcept { return nonzero_count() == 0; }
  // Entrywise L_{1,1} norm.
  double l11_norm() const noexcept;

  StateVector apply(std::span<const double> z) const;
  SymbolMatrix operator*(const SymbolMatrix& rhs) const;

  bool operator==(const SymbolMatrix&) const = default;

 private:
  std::vector<std::vector<Entry>> rows_;
};

// A(theta, c, xi): theta on Param positions, c on Fixed positions, xi on
// Nonlinear positions. With absolute = true, |theta| and |c| are used.
SymbolMatrix symbol(const NonlinearDag& dag, const ParamVector& theta, double xi, bool absolute);

// Ones on the positions of the given kind only, e.g. A(1_theta, 0, 0) for Param.
SymbolMatrix indicator_symbol(const NonlinearDag& dag, EdgeKind kind);

// Ones on every edge position.
SymbolMatrix structure_symbol(const NonlinearDag& dag);

struct IOVectors {
  StateVector one_in;        // d ones then zeros
  StateVector one_out;       // zeros then a single one at the sink
  StateVector p0_diagonal;   // P_0 = diag(one_in)
};

IOVectors io_vectors(const NonlinearDag& dag);

// A(theta, sigma) z: row i sums theta_ij z_j, c_ij z_j and relu(z_j) over its
// Param, Fixed and Nonlinear edges.
StateVector apply_operator(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> z);

SymbolMatrix matrix_power(const SymbolMatrix& sym, std::size_t s);
bool matrix_power_is_zero(const SymbolMatrix& sym, std::size_t s);

// Smallest s0 with A^{s0} = 0 for the all-ones symbol: one plus the number of
// edges on the longest directed path.
std::size_t nilpotency_index(const NonlinearDag& dag);

struct FixedPointResult {
  double output = 0.0;
  StateVector z_inf;
  std::size_t steps = 0;  // operator applications, including the one that confirmed stationarity
};

// Iterates z_s = z_0 + A(theta, sigma) z_{s-1} from z_0 = (x, 0, ..., 0) until
// two successive iterates are bit-identical, then reads the sink.
FixedPointResult forward_fixed_point(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x);

// All iterates z_0, z_1, ..., z_s of the same iteration, ending with the first
// repeated vector.
std::vector<StateVector> forward_iterates(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x);

// Single topological sweep of the node recursion. Produces the same z_inf as
// forward_fixed_point in one pass; this is the path training uses.
StateVector node_values(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x);
double evaluate(const NonlinearDag& dag, const ParamVector& theta, std::span<const double> x);

}  // namespace nwdag
