#include "random_dag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nwdag::testing {

NonlinearDag random_dag(Rng& rng, const RandomDagOptions& o) {
  auto uniform_int = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::uniform_real_distribution<double> weight(-o.weight_scale, o.weight_scale);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t d = uniform_int(1, o.max_inputs);
  const std::size_t n = uniform_int(d + 1, std::max(d + 1, o.max_nodes));
  std::vector<Edge> edges;
  std::vector<NodeId> candidates;
  for (NodeId i = d + 1; i <= n; ++i) {
    candidates.resize(i - 1);
    std::iota(candidates.begin(), candidates.end(), NodeId{1});
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const std::size_t fan_in = uniform_int(1, std::min(o.max_fan_in, i - 1));
    for (std::size_t k = 0; k < fan_in; ++k) {
      const NodeId src = candidates[k];
      const double r = unit(rng);
      EdgeKind kind = r < 0.5 ? EdgeKind::Param : (r < 0.7 ? EdgeKind::Fixed : EdgeKind::Nonlinear);
      if (o.input_assumption && src <= d) kind = EdgeKind::Param;
      if (kind == EdgeKind::Nonlinear) {
        edges.push_back(relu_edge(i, src));
      } else {
        edges.push_back({i, src, kind, weight(rng)});
      }
    }
  }
  return NonlinearDag(n, d, std::move(edges));
}

ParamVector random_theta(const NonlinearDag& dag, Rng& rng, double scale) {
  std::uniform_real_distribution<double> weight(-scale, scale);
  ParamVector theta;
  theta.values.resize(dag.param_count());
  for (double& v : theta.values) v = weight(rng);
  return theta;
}

std::vector<double> random_point(std::size_t d, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(d);
  for (double& v : x) v = u(rng);
  return x;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (double& v : m.data) v = u(rng);
  return m;
}

ArchitectureParams random_params(const ArchitectureDims& dims, Rng& rng, double scale) {
  return make_params(dims, InitScheme::uniform(-scale, scale), rng);
}

std::vector<ArchitectureDims> sample_architectures() {
  return {TwoLayerDims{3, 4}, FcDims{{3, 4, 3, 2}}, ResNetDims{2, 4, 3, 2}, DenseNetDims{2, 3, 2, 2, 2}};
}

bool close_rel(double a, double b, double rel, double abs_floor) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300}) + abs_floor;
}

}  // namespace nwdag::testing
