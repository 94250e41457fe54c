#include <doctest.h>

#include <cmath>

#include "nwdag/adjacency.hpp"
#include "nwdag/bounds.hpp"
#include "nwdag/error.hpp"
#include "nwdag/pathnorm.hpp"
#include "nwdag/rademacher.hpp"
#include "random_dag.hpp"

using namespace nwdag;

namespace {

std::vector<std::vector<double>> cube_points(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<std::vector<double>> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(testing::random_point(d, rng));
  return xs;
}

}  // namespace

TEST_CASE("projection modes") {
  Rng rng(1);
  CHECK(projection_mode(build_network(make_params(TwoLayerDims{2, 3}, InitScheme::zero(), rng)).dag).mode == ProjectionMode::OutputLayer);
  CHECK(projection_mode(build_network(make_params(DenseNetDims{2, 3, 1, 3, 2}, InitScheme::zero(), rng)).dag).mode == ProjectionMode::OutputLayer);
  // Output arc is Fixed, every path crosses exactly two Param edges.
  NonlinearDag layered(5, 1, {param_edge(2, 1, 1.0), relu_edge(3, 2), param_edge(4, 3, 1.0), fixed_edge(5, 4, 1.0)});
  const auto p = projection_mode(layered);
  CHECK(p.mode == ProjectionMode::Layered);
  CHECK(p.depth == 2);
  // Paths with one and with two Param edges reach a Fixed output arc.
  NonlinearDag mixed(4, 1, {param_edge(2, 1, 1.0), param_edge(3, 2, 1.0), fixed_edge(4, 3, 1.0), fixed_edge(4, 2, 1.0)});
  CHECK(projection_mode(mixed).mode == ProjectionMode::Unsupported);
  CHECK_FALSE(projection_mode(mixed).diagnostic.empty());
}

TEST_CASE("scaling the output layer scales f and the path norm alike") {
  Rng rng(3);
  for (const auto& dims : testing::sample_architectures()) {
    const auto net = build_network(testing::random_params(dims, rng));
    const double c = std::uniform_real_distribution<double>(0.1, 4.0)(rng);
    const auto scaled = scale_output_layer(net.dag, net.theta, c);
    CHECK(testing::close_rel(path_norm_neumann(net.dag, scaled).value, c * path_norm_neumann(net.dag, net.theta).value, 1e-12));
    const auto x = testing::random_point(input_dim(dims), rng);
    CHECK(testing::close_rel(evaluate(net.dag, scaled, x), c * evaluate(net.dag, net.theta, x), 1e-12, 1e-14));
  }
}

TEST_CASE("projection lands inside the ball") {
  Rng rng(5);
  const auto net = build_network(testing::random_params(FcDims{{2, 4, 3}}, rng, 2.0));
  const auto proj = projection_mode(net.dag);
  const double p = path_norm_neumann(net.dag, net.theta).value;
  REQUIRE(p > 1.0);
  const auto inside = project_to_ball(net.dag, proj, net.theta, 1.0);
  CHECK(path_norm_neumann(net.dag, inside).value <= 1.0 + 1e-12);
  CHECK(path_norm_neumann(net.dag, inside).value >= 1.0 - 1e-12);
  CHECK(project_to_ball(net.dag, proj, net.theta, 2.0 * p) == net.theta);

  NonlinearDag layered(5, 1, {param_edge(2, 1, 3.0), relu_edge(3, 2), param_edge(4, 3, 2.0), fixed_edge(5, 4, 1.0)});
  const auto lp = project_to_ball(layered, projection_mode(layered), stored_params(layered), 1.5);
  CHECK(path_norm_neumann(layered, lp).value == doctest::Approx(1.5).epsilon(1e-12));

  NonlinearDag mixed(4, 1, {param_edge(2, 1, 1.0), param_edge(3, 2, 1.0), fixed_edge(4, 3, 1.0), fixed_edge(4, 2, 1.0)});
  CHECK_THROWS_AS(project_to_ball(mixed, projection_mode(mixed), stored_params(mixed), 0.5), DomainError);
}

TEST_CASE("Q = 0 gives estimate 0") {
  Rng rng(7);
  const auto xs = cube_points(16, 2, rng);
  const auto skeleton = build_network(make_params(TwoLayerDims{2, 4}, InitScheme::zero(), rng)).dag;
  const auto est = rademacher_estimate(xs, skeleton, 0.0, 8, RademacherBudget{}, rng);
  CHECK(est.estimate == 0.0);
  CHECK(est.stderr_ == 0.0);
}

TEST_CASE("estimates on a small cell stay below the bound and are deterministic") {
  const std::size_t d = 2, n = 32;
  Rng rng(11);
  const auto xs = cube_points(n, d, rng);
  const auto skeleton = build_network(make_params(TwoLayerDims{d, 8}, InitScheme::zero(), rng)).dag;
  RademacherBudget budget;
  budget.steps = 30;
  Rng a(13), b(13);
  const auto est = rademacher_estimate(xs, skeleton, 1.0, 24, budget, a);
  const auto again = rademacher_estimate(xs, skeleton, 1.0, 24, budget, b);
  CHECK(est.estimate == again.estimate);
  CHECK(est.per_trial == again.per_trial);
  CHECK(est.trials_used == 24);
  CHECK(est.rejected == 0);
  CHECK(est.estimate > 0.0);
  CHECK(est.estimate <= rademacher_bound(1.0, n, d));
  for (double v : est.per_trial) CHECK(v >= 0.0);
}

TEST_CASE("a linear skeleton attains Q max_j |(1/n) sum_i tau_i x_ij|") {
  const std::size_t d = 3, n = 24;
  Rng rng(17);
  const auto xs = cube_points(n, d, rng);
  // Inputs wired straight into the sink: the class is {w^T x : |w|_1 <= Q}.
  NonlinearDag skeleton(d + 1, d, {param_edge(4, 1, 0.0), param_edge(4, 2, 0.0), param_edge(4, 3, 0.0)});
  Rng a(19), b(19);
  const auto one = rademacher_estimate(xs, skeleton, 1.0, 16, RademacherBudget{}, a);
  const auto two = rademacher_estimate(xs, skeleton, 2.0, 16, RademacherBudget{}, b);
  CHECK(two.estimate == doctest::Approx(2.0 * one.estimate).epsilon(1e-12));
  // The bound is at least the exact supremum for every trial.
  CHECK(one.estimate <= rademacher_bound(1.0, n, d));
  for (double v : one.per_trial) CHECK(v >= 0.0);
}

TEST_CASE("unsupported skeletons reject every trial") {
  Rng rng(23);
  const auto xs = cube_points(8, 1, rng);
  NonlinearDag mixed(4, 1, {param_edge(2, 1, 1.0), param_edge(3, 2, 1.0), fixed_edge(4, 3, 1.0), fixed_edge(4, 2, 1.0)});
  const auto est = rademacher_estimate(xs, mixed, 1.0, 4, RademacherBudget{}, rng);
  CHECK(std::isnan(est.estimate));
  CHECK(est.rejected == 4);
  CHECK(est.trials_used == 0);
  CHECK_FALSE(est.diagnostic.empty());
}
