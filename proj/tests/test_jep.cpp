#include <doctest.h>

#include "jepq/jep.hpp"
#include "jepq/oracle.hpp"
#include "support.hpp"

using jepq::JugglerState;
using jepq::Rational;
using jepq::ThrowModel;

namespace {

std::vector<int> as_vec(const JugglerState& b) {
  return {b.heights().begin(), b.heights().end()};
}

}  // namespace

TEST_CASE("JugglerState basics") {
  const auto b = JugglerState::parse("0-2-3");
  CHECK(b.size() == 3);
  CHECK(b.contains(2));
  CHECK_FALSE(b.contains(1));
  CHECK(b.max() == 3);
  CHECK(b.to_string() == "0-2-3");
  CHECK(JugglerState::ground(3) == JugglerState::parse("0-1-2"));
  CHECK(JugglerState::top(5, 2) == JugglerState::parse("3-4"));
  CHECK(JugglerState().max() == -1);
  CHECK_THROWS_AS(JugglerState({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(JugglerState({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(JugglerState({-1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(JugglerState::parse("1-x"), std::invalid_argument);
}

TEST_CASE("enumerate_states is lexicographic and complete") {
  for (int m = 0; m <= 8; ++m) {
    for (int n = 0; n <= m; ++n) {
      const auto states = jepq::enumerate_states(m, n);
      const auto expected = oracle::subsets(m, n);
      REQUIRE(states.size() == expected.size());
      CHECK(jepq::state_count(m, n) == static_cast<std::size_t>(oracle::choose(m, n)));
      for (std::size_t i = 0; i < states.size(); ++i) {
        CHECK(as_vec(states[i]) == expected[i]);
      }
    }
  }
}

TEST_CASE("theta, vacancy rank and vacancies above are mutually consistent") {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = gen.range(1, 12);
    const int n = gen.range(0, m - 1);
    const JugglerState x(gen.subset(m, n));
    for (int k = 0; k < m - n; ++k) {
      const int h = jepq::theta(x, k);
      CHECK_FALSE(x.contains(h));
      CHECK(jepq::vacancy_rank(x, h) == k);
    }
    for (int h : x.heights()) {
      CHECK(jepq::vacancies_above(x, h, m) == oracle::empty_above(as_vec(x), h, m));
    }
  }
}

TEST_CASE("truncated geometric and throw pmfs") {
  const Rational q(1, 2);
  const auto t = jepq::truncated_geometric_pmf(3, q);
  CHECK(t.total() == 1);
  CHECK(t.at(0) == Rational(4, 7));
  CHECK(t.at(2) == Rational(1, 7));
  const auto g = jepq::geometric_pmf(q, 10);
  CHECK(g.total() == 1);
  CHECK(g.tail == jepq::ipow(q, 10));

  const auto model = ThrowModel<Rational>::bounded_geometric(5, 2, q);
  // after the shift the remaining particle sits at 1; vacancies 0,2,3,4
  const auto pmf = jepq::throw_pmf(JugglerState({1}), model);
  CHECK(pmf.total() == 1);
  CHECK(pmf.at(1) == 0);
  CHECK(pmf.at(0) == Rational(8, 15));
  CHECK(pmf.at(4) == Rational(1, 15));
  CHECK(jepq::throw_prob(JugglerState({1}), 3, model) == Rational(2, 15));
}

TEST_CASE("kernel rows sum to one for every model") {
  const Rational q(2, 3);
  for (int m = 1; m <= 6; ++m) {
    for (int n = 0; n <= m; ++n) {
      for (const auto& model : {ThrowModel<Rational>::bounded_geometric(m, n, q),
                                ThrowModel<Rational>::bounded_uniform(m, n)}) {
        for (const auto& b : jepq::enumerate_states(m, n)) {
          CHECK(jepq::step_kernel_row(b, model).total() == 1);
        }
      }
    }
  }
  const auto unbounded = ThrowModel<Rational>::unbounded_geometric(2, q);
  const auto row = jepq::step_kernel_row(JugglerState({0, 3}), unbounded, 30);
  CHECK(row.total() == 1);
  CHECK(row.tail > 0);
}

TEST_CASE("product form is stationary for the kernel built from the dynamics") {
  for (const Rational& q : {Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
    for (int m = 1; m <= 6; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto k = oracle::kernel(m, n, oracle::truncated_geometric(m - n + 1, q));
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        std::map<std::vector<int>, Rational> pi;
        Rational total(0);
        for (const auto& b : oracle::subsets(m, n)) {
          pi[b] = jepq::stationary_prob(JugglerState(b), model);
          total += pi[b];
          CHECK(jepq::stationary_weight(JugglerState(b), model) == oracle::product_weight(b, m, q));
        }
        CHECK(total == 1);
        CHECK(oracle::stationarity_defect(k, pi) == 0);
      }
    }
  }
}

TEST_CASE("library kernel equals the kernel built from the dynamics") {
  const Rational q(1, 3);
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= m; ++n) {
      const auto k = oracle::kernel(m, n, oracle::truncated_geometric(m - n + 1, q));
      const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
      for (const auto& [from, row] : k) {
        const auto lib = jepq::step_kernel_row(JugglerState(from), model);
        CHECK(lib.size() == row.size());
        for (const auto& [to, p] : row) {
          CHECK(lib.at(JugglerState(to)) == p);
        }
      }
    }
  }
}

TEST_CASE("stationary law: two-height example and closed forms") {
  const auto model = ThrowModel<Rational>::bounded_geometric(2, 1, Rational(1, 2));
  const auto d = jepq::stationary_distribution(model);
  REQUIRE(d.size() == 2);
  CHECK(d.at(JugglerState({0})) == Rational(3, 4));
  CHECK(d.at(JugglerState({1})) == Rational(1, 4));

  const auto s = jepq::closed_form_stats(3, 2, Rational(1, 2));
  CHECK(s.ground == Rational(9, 13));
  CHECK(s.top == Rational(1, 13));
  CHECK(s.throw_fraction == Rational(12, 13));
  CHECK(s.throw_fraction_paper == Rational(24, 13));
  CHECK(s.throw_fraction_paper > 1);
}

TEST_CASE("closed forms against direct sums (property)") {
  oracle::Gen gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = gen.range(1, 7);
    const int n = gen.range(1, m);
    const Rational q = gen.rational();
    const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
    const auto d = jepq::stationary_distribution(model);
    Rational zero(0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.support[i].contains(0)) {
        zero += d.prob[i];
      }
    }
    const auto s = jepq::closed_form_stats(m, n, q);
    CHECK(s.throw_fraction == zero);
    CHECK(s.ground == d.at(JugglerState::ground(n)));
    CHECK(s.top == d.at(JugglerState::top(m, n)));
    if (n == 1) {
      CHECK(s.throw_fraction_paper == s.throw_fraction);
    }
  }
}

TEST_CASE("uniform model product form") {
  for (int m = 1; m <= 6; ++m) {
    for (int n = 1; n <= m; ++n) {
      std::vector<Rational> ranks(m - n + 1, Rational(1, m - n + 1));
      const auto k = oracle::kernel(m, n, ranks);
      std::map<std::vector<int>, Rational> pi;
      Rational z(0);
      for (const auto& b : oracle::subsets(m, n)) {
        z += oracle::uniform_weight(b, m);
      }
      const auto model = ThrowModel<Rational>::bounded_uniform(m, n);
      for (const auto& b : oracle::subsets(m, n)) {
        pi[b] = oracle::uniform_weight(b, m) / z;
        CHECK(jepq::stationary_prob(JugglerState(b), model) == pi[b]);
      }
      CHECK(oracle::stationarity_defect(k, pi) == 0);
    }
  }
}

TEST_CASE("balance residual vanishes for the bounded and unbounded laws") {
  const Rational q(1, 2);
  const auto model = ThrowModel<Rational>::bounded_geometric(5, 3, q);
  jepq::StateFunction<Rational> pi = [&](const JugglerState& b) { return jepq::stationary_prob(b, model); };
  for (const auto& b : jepq::enumerate_states(5, 3)) {
    CHECK(jepq::balance_residual(b, pi, model) == 0);
  }
  const auto unbounded = ThrowModel<Rational>::unbounded_geometric(2, q);
  jepq::StateFunction<Rational> pinf = [&](const JugglerState& b) {
    return jepq::stationary_prob(b, unbounded);
  };
  for (const auto& b : jepq::enumerate_states(9, 2)) {
    CHECK(jepq::balance_residual(b, pinf, unbounded) == 0);
  }
  // a perturbed law is caught
  jepq::StateFunction<Rational> bad = [&](const JugglerState& b) {
    return b == JugglerState::ground(3) ? Rational(pi(b) * 2) : pi(b);
  };
  bool any_nonzero = false;
  for (const auto& b : jepq::enumerate_states(5, 3)) {
    any_nonzero = any_nonzero || jepq::balance_residual(b, bad, model) != 0;
  }
  CHECK(any_nonzero);
}

TEST_CASE("unbounded normalizer: sum of q^{sum B} over n-sets") {
  const Rational q(1, 3);
  const auto model = ThrowModel<Rational>::unbounded_geometric(2, q);
  Rational partial(0);
  for (const auto& b : jepq::enumerate_states(40, 2)) {
    partial += jepq::stationary_prob(b, model);
  }
  CHECK(partial < 1);
  CHECK(1 - partial < Rational(1, 1000000000));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ThrowModel<Rational>::bounded_geometric(2, 3, Rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(ThrowModel<Rational>::bounded_geometric(3, 1, Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(ThrowModel<Rational>::unbounded_geometric(2, Rational(0)), std::invalid_argument);
  const auto model = ThrowModel<Rational>::bounded_geometric(4, 2, Rational(1, 2));
  CHECK_THROWS_AS(jepq::stationary_prob(JugglerState({0, 4}), model), std::invalid_argument);
  CHECK_THROWS_AS(jepq::stationary_prob(JugglerState({0}), model), std::invalid_argument);
  CHECK(jepq::parse_model_kind("bounded-uniform") == jepq::ModelKind::BoundedUniform);
  CHECK_THROWS_AS(jepq::parse_model_kind("poisson"), std::invalid_argument);
}
