#include <doctest.h>

#include <cmath>
#include <limits>

#include "nwdag/adjacency.hpp"
#include "nwdag/error.hpp"
#include "random_dag.hpp"

using namespace nwdag;

namespace {

BuiltNetwork tiny_two_layer() {
  TwoLayerParams p;
  p.w = Matrix(1, 2);
  p.w(0, 0) = 0.5;
  p.w(0, 1) = -1.0;
  p.a = {2.0};
  return build_two_layer(2, 1, p);
}

// |A| v for a numeric symbol.
StateVector abs_apply(const SymbolMatrix& a, const StateVector& v) {
  StateVector out(v.size(), 0.0);
  for (NodeId i = 1; i <= a.size(); ++i)
    for (const auto& e : a.row(i)) out[i - 1] += std::abs(e.value) * v[e.col - 1];
  return out;
}

}  // namespace

TEST_CASE("absolute symbol of the two-layer example") {
  const auto net = tiny_two_layer();
  const SymbolMatrix a = symbol(net.dag, net.theta, 3.0, true);
  CHECK(a.nonzero_count() == 4);
  CHECK(a.at(3, 1) == 0.5);
  CHECK(a.at(3, 2) == 1.0);
  CHECK(a.at(4, 3) == 3.0);
  CHECK(a.at(5, 4) == 2.0);
  CHECK(symbol(net.dag, net.theta, 3.0, false).at(3, 2) == -1.0);
}

TEST_CASE("zero weights and xi = 0 give the zero symbol") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto net = build_two_layer(3, 4, std::get<TwoLayerParams>(make_params(TwoLayerDims{3, 4}, InitScheme::zero(), rng)));
    CHECK(symbol(net.dag, net.theta, 0.0, false).is_zero());
  }
}

TEST_CASE("ResNet skip blocks appear as identity blocks on the Fixed positions") {
  Rng rng(4);
  const std::size_t d = 1, D = 3, m = 2, L = 2;
  const auto net = build_network(testing::random_params(ResNetDims{d, D, m, L}, rng));
  const SymbolMatrix fixed = indicator_symbol(net.dag, EdgeKind::Fixed);
  const SymbolMatrix a = symbol(net.dag, net.theta, 1.0, false);
  CHECK(fixed.nonzero_count() == L * D);
  // Layout: x, h0 (D), then per block pre (m), post (m), h (D).
  NodeId h_prev = d + 1;
  for (std::size_t l = 1; l <= L; ++l) {
    const NodeId h = h_prev + D + 2 * m;
    for (std::size_t r = 0; r < D; ++r) {
      for (std::size_t c = 0; c < D; ++c) {
        CHECK(fixed.at(h + r, h_prev + c) == (r == c ? 1.0 : 0.0));
        if (r == c) CHECK(a.at(h + r, h_prev + c) == 1.0);
      }
    }
    h_prev = h;
  }
}

TEST_CASE("apply_operator examples") {
  const auto net = tiny_two_layer();
  CHECK(apply_operator(net.dag, net.theta, StateVector(5, 0.0)) == StateVector(5, 0.0));
  CHECK(apply_operator(net.dag, net.theta, StateVector{1, 1, 0, 0, 0}) == StateVector{0, 0, -0.5, 0, 0});
  CHECK(apply_operator(net.dag, net.theta, StateVector{0, 0, -0.5, 0, 0}) == StateVector(5, 0.0));
  CHECK_THROWS_AS(apply_operator(net.dag, net.theta, StateVector(4, 0.0)), ShapeError);
}

TEST_CASE("matrix powers vanish exactly") {
  const auto net = tiny_two_layer();
  const SymbolMatrix a = symbol(net.dag, net.theta, 3.0, true);
  CHECK_FALSE(matrix_power_is_zero(a, 3));
  CHECK(matrix_power_is_zero(a, 4));
  CHECK(matrix_power_is_zero(SymbolMatrix(5), 1));
  CHECK(nilpotency_index(net.dag) == 4);
  CHECK(nilpotency_index(NonlinearDag(3, 2, {})) == 1);

  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto dag = testing::random_dag(rng);
    const auto theta = testing::random_theta(dag, rng);
    const double xi = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
    const SymbolMatrix s = symbol(dag, theta, xi, true);
    const std::size_t s0 = nilpotency_index(dag);
    CHECK(s0 <= dag.node_count());
    CHECK(matrix_power_is_zero(s, dag.node_count()));
    CHECK(matrix_power_is_zero(s, s0));
    if (s0 > 1) CHECK_FALSE(matrix_power_is_zero(s, s0 - 1));
  }
}

TEST_CASE("nilpotency index of a DenseNet agrees with its symbol powers") {
  Rng rng(9);
  const auto net = build_network(testing::random_params(DenseNetDims{2, 3, 2, 2, 2}, rng));
  const std::size_t s0 = nilpotency_index(net.dag);
  const SymbolMatrix ones = structure_symbol(net.dag);
  CHECK(matrix_power_is_zero(ones, s0));
  CHECK_FALSE(matrix_power_is_zero(ones, s0 - 1));
  // x -> V -> (W, relu, U) per block -> u: 2 + 3L edges.
  CHECK(s0 == 1 + 2 + 3 * 2);
}

TEST_CASE("fixed-point forward pass") {
  const auto net = tiny_two_layer();
  const auto fp = forward_fixed_point(net.dag, net.theta, std::vector<double>{2.0, 0.0});
  CHECK(fp.output == 2.0);
  CHECK(fp.steps <= nilpotency_index(net.dag));

  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto dag = testing::random_dag(rng);
    const auto theta = testing::random_theta(dag, rng);
    CHECK(forward_fixed_point(dag, theta, std::vector<double>(dag.input_dim(), 0.0)).output == 0.0);

    const auto x = testing::random_point(dag.input_dim(), rng, -2.0, 2.0);
    const auto r = forward_fixed_point(dag, theta, x);
    CHECK(r.steps <= nilpotency_index(dag));
    CHECK(r.z_inf == node_values(dag, theta, x));
    CHECK(r.output == evaluate(dag, theta, x));
    // z_inf is a fixed point of z -> z_0 + A z.
    StateVector next = apply_operator(dag, theta, r.z_inf);
    for (std::size_t i = 0; i < dag.input_dim(); ++i) next[i] += x[i];
    CHECK(next == r.z_inf);
  }
}

TEST_CASE("contraction: |z_{s+1} - z_s| <= A^s(|theta|,1) |z_1 - z_0| componentwise") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto dag = testing::random_dag(rng);
    const auto theta = testing::random_theta(dag, rng);
    const auto x = testing::random_point(dag.input_dim(), rng, -2.0, 2.0);
    const auto zs = forward_iterates(dag, theta, x);
    const SymbolMatrix a = symbol(dag, theta, 1.0, true);
    StateVector bound(dag.node_count());
    for (std::size_t k = 0; k < bound.size(); ++k) bound[k] = std::abs(zs[1][k] - zs[0][k]);
    for (std::size_t s = 0; s + 1 < zs.size(); ++s) {
      for (std::size_t k = 0; k < bound.size(); ++k) CHECK(std::abs(zs[s + 1][k] - zs[s][k]) <= bound[k] + 1e-12);
      bound = abs_apply(a, bound);
    }
  }
}

TEST_CASE("two-layer nets are positively homogeneous in x") {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const auto net = build_network(testing::random_params(TwoLayerDims{3, 5}, rng));
    const auto x = testing::random_point(3, rng, -1.0, 1.0);
    const double lambda = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    std::vector<double> y(x);
    for (double& v : y) v *= lambda;
    CHECK(testing::close_rel(evaluate(net.dag, net.theta, y), lambda * evaluate(net.dag, net.theta, x), 1e-12, 1e-15));
  }
}

TEST_CASE("non-finite inputs and overflow are numeric failures") {
  const auto net = tiny_two_layer();
  CHECK_THROWS_AS(forward_fixed_point(net.dag, net.theta, std::vector<double>{std::nan(""), 0.0}), NumericFailure);
  CHECK_THROWS_AS(evaluate(net.dag, net.theta, std::vector<double>{INFINITY, 0.0}), NumericFailure);
  CHECK_THROWS_AS(evaluate(net.dag, net.theta, std::vector<double>{1.0}), ShapeError);

  NonlinearDag chain(4, 1, {param_edge(2, 1, 1e200), param_edge(3, 2, 1e200), param_edge(4, 3, 1.0)});
  const auto theta = stored_params(chain);
  CHECK_THROWS_AS(forward_fixed_point(chain, theta, std::vector<double>{1.0}), NumericFailure);
  CHECK_THROWS_AS(evaluate(chain, theta, std::vector<double>{1.0}), NumericFailure);
}

TEST_CASE("io vectors") {
  const auto io = io_vectors(tiny_two_layer().dag);
  CHECK(io.one_in == StateVector{1, 1, 0, 0, 0});
  CHECK(io.one_out == StateVector{0, 0, 0, 0, 1});
  CHECK(io.p0_diagonal == io.one_in);
}

TEST_CASE("sparse symbol products match dense multiplication") {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto dag = testing::random_dag(rng);
    const auto theta = testing::random_theta(dag, rng);
    const SymbolMatrix a = symbol(dag, theta, 2.0, false);
    const SymbolMatrix a2 = a * a;
    const std::size_t n = dag.node_count();
    for (NodeId i = 1; i <= n; ++i) {
      for (NodeId j = 1; j <= n; ++j) {
        double dense = 0.0;
        for (NodeId k = 1; k <= n; ++k) {
          const double left = k < i ? a.at(i, k) : 0.0;
          const double right = j < k ? a.at(k, j) : 0.0;
          dense += left * right;
        }
        CHECK(testing::close_rel(j < i ? a2.at(i, j) : 0.0, dense, 1e-12, 1e-14));
      }
    }
    CHECK(matrix_power(a, 2) == a2);
  }
}
