#include <doctest.h>

#include <cmath>

#include "nwdag/adjacency.hpp"
#include "nwdag/approx.hpp"
#include "nwdag/error.hpp"
#include "nwdag/pathnorm.hpp"
#include "random_dag.hpp"

using namespace nwdag;

namespace {

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

TwoLayerParams random_two_layer(std::size_t d, std::size_t m, Rng& rng) {
  TwoLayerParams p;
  p.w = testing::random_matrix(m, d, rng);
  p.a = testing::random_point(m, rng, -1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("a single atom c = 1, w = e1 has bound 1 and f*(x) = x1") {
  const BarronTarget f({BarronAtom{1.0, {1.0, 0.0}}});
  CHECK(f.barron_bound() == 1.0);
  CHECK(f(std::vector<double>{0.37, 0.9}) == 0.37);
  CHECK(f.input_dim() == 2);
  CHECK(f.probabilities().size() == 1);
  CHECK(f.amplitude(0) == 1.0);
}

TEST_CASE("two atoms with opposite signs") {
  const BarronTarget f({BarronAtom{0.5, {1.0, 0.0}}, BarronAtom{-0.5, {0.0, 1.0}}});
  CHECK(f.barron_bound() == 1.0);
  CHECK(f(std::vector<double>{0.8, 0.2}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(f.probabilities()[0] == 0.5);
  CHECK(f.amplitude(0) == 1.0);
  CHECK(f.amplitude(1) == -1.0);
}

TEST_CASE("malformed atoms are rejected") {
  CHECK_THROWS_AS(BarronTarget({}), DomainError);
  CHECK_THROWS_AS(BarronTarget({BarronAtom{1.0, {0.0, 0.0}}}), DomainError);
  CHECK_THROWS_AS(BarronTarget({BarronAtom{0.0, {1.0}}}), DomainError);
  CHECK_THROWS(BarronTarget({BarronAtom{1.0, {1.0}}, BarronAtom{1.0, {1.0, 2.0}}}));
}

TEST_CASE("generated targets") {
  for (AtomSigns signs : {AtomSigns::Mixed, AtomSigns::NonNegative}) {
    const auto f = make_target(17, 6, 5, 3, signs);
    CHECK(f.barron_bound() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.atoms().size() == 5);
    for (const auto& atom : f.atoms()) {
      std::size_t nonzero = 0;
      for (double v : atom.w) nonzero += v != 0.0;
      CHECK(nonzero == 3);
    }
    const auto g = make_target(17, 6, 5, 3, signs);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(f.atoms()[k].c == g.atoms()[k].c);
      CHECK(f.atoms()[k].w == g.atoms()[k].w);
    }
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
      const auto x = testing::random_point(6, rng);
      CHECK(f.label(x) >= 0.0);
      CHECK(f.label(x) <= 1.0);
      CHECK(std::abs(f(x)) <= 1.0 + 1e-12);
    }
  }
  CHECK(make_target(1, 4, 3, 2).atoms()[0].w != make_target(2, 4, 3, 2).atoms()[0].w);
  CHECK(make_target(1, 4, 3, 2, AtomSigns::NonNegative).label_offset() == 0.0);
}

TEST_CASE("the atom sampler reproduces f* and the second moment B^2") {
  const auto f = make_target(5, 4, 6, 2);
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto x = testing::random_point(4, rng);
    CHECK(testing::close_rel(f.sampler_mean(x), f(x), 1e-12, 1e-14));
  }
  double second = 0.0;
  for (std::size_t k = 0; k < f.atoms().size(); ++k) {
    const double w1 = l1(f.atoms()[k].w);
    second += f.probabilities()[k] * f.amplitude(k) * f.amplitude(k) * w1 * w1;
  }
  CHECK(second == doctest::Approx(f.barron_bound() * f.barron_bound()).epsilon(1e-12));

  // Empirical frequencies follow the probabilities.
  std::vector<double> hits(f.atoms().size(), 0.0);
  const int draws = 200000;
  for (int t = 0; t < draws; ++t) hits[f.sample_atom(rng)] += 1.0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    const double p = f.probabilities()[k];
    CHECK(std::abs(hits[k] / draws - p) <= 5.0 * std::sqrt(p * (1 - p) / draws));
  }
}

TEST_CASE("one unit reproduces a single-atom target exactly") {
  const BarronTarget f({BarronAtom{0.75, {0.5, 0.25, 0.0}}});
  Rng rng(11);
  const auto s = sample_two_layer(f, MCBudget{1, 5, 2000}, rng);
  CHECK(s.risk == 0.0);
  CHECK(s.attempts == 1);
  CHECK(s.amplitude_norm == doctest::Approx(f.barron_bound()));
}

TEST_CASE("accepted draws satisfy both events") {
  const auto f = make_target(9, 5, 8, 3, AtomSigns::NonNegative);
  Rng rng(13);
  for (std::size_t m : {2u, 8u, 32u}) {
    const auto s = sample_two_layer(f, MCBudget{m, 50, 4000}, rng);
    CHECK(s.risk + 2.0 * s.risk_stderr < approx_error_bound(f.barron_bound(), m));
    CHECK(s.amplitude_norm < 2.0 * f.barron_bound());
    CHECK(s.params.a.size() == m);
    CHECK(s.params.w.rows == m);
    CHECK(s.attempts >= 1);
    // The amplitude norm is the sum over units of |a_k| |w_k|_1.
    double norm = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double row = 0.0;
      for (std::size_t c = 0; c < 5; ++c) row += std::abs(s.params.w(k, c));
      norm += std::abs(s.params.a[k]) * row;
    }
    CHECK(norm == doctest::Approx(s.amplitude_norm).epsilon(1e-12));
    // The norm event holds deterministically here: every unit has |a_k| |w_k|_1 = B / m.
    CHECK(s.amplitude_norm == doctest::Approx(f.barron_bound()).epsilon(1e-12));
  }
}

TEST_CASE("a zero retry budget is exhausted at once") {
  const auto f = make_target(21, 8, 8, 8);
  Rng rng(17);
  CHECK_THROWS_AS(sample_two_layer(f, MCBudget{1, 0, 100}, rng), RetriesExhausted);
  CHECK_THROWS_AS(sample_two_layer(f, MCBudget{0, 5, 100}, rng), DomainError);
}

TEST_CASE("embedding a two-layer network into shortcut blocks") {
  Rng rng(19);
  const std::size_t d = 2;
  SUBCASE("same function and path norm 3 sum |a_j| |b_j|_1 over several block layouts") {
    struct Layout {
      std::vector<std::size_t> d_seq, p_seq;
    };
    for (const Layout& lay : {Layout{{3, 3}, {6}}, Layout{{3, 4, 5}, {3, 3}}, Layout{{4, 4, 4, 4}, {3, 4, 5}}}) {
      std::size_t m = 0;
      for (std::size_t p : lay.p_seq) m += p;
      const auto two = random_two_layer(d, m, rng);
      const auto spec = make_block_spec(d, lay.d_seq, lay.p_seq);
      const auto net = embed_two_layer_into_blocks(two, spec);
      CHECK(net.dag.is_valid());
      CHECK(validate_shortcut_form(net.dag).satisfied);
      double expected_norm = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double b1 = 0.0;
        for (std::size_t c = 0; c < d; ++c) b1 += std::abs(two.w(j, c));
        expected_norm += std::abs(two.a[j]) * b1;
      }
      expected_norm *= 3.0;
      CHECK(testing::close_rel(path_norm_neumann(net.dag, net.theta).value, expected_norm, 1e-12));
      for (int t = 0; t < 30; ++t) {
        const auto x = testing::random_point(d, rng);
        CHECK(testing::close_rel(evaluate(net.dag, net.theta, x), direct_forward(two, x), 1e-12, 1e-14));
      }
    }
  }
  SUBCASE("permuted skips") {
    BlockSpec spec = make_block_spec(d, {3, 4, 5}, {4, 3});
    spec.s_perms[0] = {2, 3, 0};
    spec.s_perms[1] = {4, 1, 0, 2};
    const auto two = random_two_layer(d, 7, rng);
    const auto net = embed_two_layer_into_blocks(two, spec);
    for (int t = 0; t < 20; ++t) {
      const auto x = testing::random_point(d, rng);
      CHECK(testing::close_rel(evaluate(net.dag, net.theta, x), direct_forward(two, x), 1e-12, 1e-14));
    }
  }
  SUBCASE("a partition mismatch or a too narrow block is rejected") {
    const auto two = random_two_layer(d, 5, rng);
    CHECK_THROWS_AS(embed_two_layer_into_blocks(two, make_block_spec(d, {3, 3}, {4})), DomainError);
    CHECK_THROWS_AS(embed_two_layer_into_blocks(two, make_block_spec(d, {3, 3, 3}, {2, 3})), DomainError);
  }
  SUBCASE("the embedded sampler output stays within 6B in path norm") {
    const auto f = make_target(23, d, 4, 2, AtomSigns::NonNegative);
    const auto s = sample_two_layer(f, MCBudget{6, 50, 4000}, rng);
    const auto net = embed_two_layer_into_blocks(s.params, make_block_spec(d, {3, 3}, {6}));
    CHECK(path_norm_neumann(net.dag, net.theta).value <= 6.0 * f.barron_bound());
  }
}

TEST_CASE("approximation error bound") {
  CHECK(approx_error_bound(1.0, 6) == 0.25);
  CHECK(approx_error_bound(2.0, 3) == 2.0);
  CHECK_THROWS_AS(approx_error_bound(1.0, 0), DomainError);
}
