#pragma once

#include <cstddef>
#include <vector>

#include "nwdag/dag.hpp"

namespace nwdag {

// Each path picks up this factor once per nonlinearity it passes through.
inline constexpr double kNonlinearPathFactor = 3.0;

inline constexpr std::size_t kDefaultMaxPaths = 1'000'000;

struct PathNormReport {
  enum class Method { Enumeration, Neumann };

  double value = 0.0;
  Method method = Method::Neumann;
  std::size_t paths_counted = 0;  // Enumeration only
  std::size_t terms = 0;          // Neumann only: nonzero vectors A^s 1_in summed
};

// 1_out^T sum_s A^s(|theta|, 3) 1_in, accumulated by repeated sparse
// application of the absolute symbol to 1_in; the series stops at the first
// vanishing power.
PathNormReport path_norm_neumann(const NonlinearDag& dag, const ParamVector& theta);

// Depth-first enumeration of every source-to-sink path, each contributing
// 3^p times the product of its absolute weights. Throws BudgetExceeded when
// the DAG has more than max_paths such paths.
PathNormReport path_norm_enumerate(const NonlinearDag& dag, const ParamVector& theta, std::size_t max_paths = kDefaultMaxPaths);

// Number of source-to-sink paths, saturating at SIZE_MAX.
std::size_t count_paths(const NonlinearDag& dag);

// inflow[i]: weighted path mass of all source-to-i paths (1 at sources), i.e.
// the path norm of the network re-sinked at node i.
// outflow[i]: weighted path mass of all i-to-sink paths (1 at the sink).
// Both are indexed by node (entry 0 unused). inflow[N] is the path norm.
struct PathMass {
  std::vector<double> inflow;
  std::vector<double> outflow;
};

PathMass path_mass(const NonlinearDag& dag, const ParamVector& theta);

struct EdgeCounts {
  std::size_t n_para = 0;
  std::size_t n_fix = 0;
  std::size_t n_non = 0;

  std::size_t total() const noexcept { return n_para + n_fix + n_non; }
  bool operator==(const EdgeCounts&) const = default;
};

EdgeCounts edge_counts(const NonlinearDag& dag);

}  // namespace nwdag
