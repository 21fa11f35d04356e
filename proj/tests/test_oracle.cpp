#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "jepq/jep.hpp"
#include "jepq/oracle.hpp"
#include "jepq/qcomb.hpp"
#include "support.hpp"

using jepq::JugglerState;
using jepq::Rational;
using jepq::ThrowModel;

TEST_CASE("assembled matrix is stochastic and indexed by lexicographic states") {
  const auto model = ThrowModel<Rational>::bounded_geometric(5, 2, Rational(1, 3));
  const auto mat = jepq::build_transition_matrix(model);
  REQUIRE(mat.size() == 10);
  CHECK(mat.states.front() == JugglerState({0, 1}));
  CHECK(mat.states.back() == JugglerState({3, 4}));
  CHECK(mat.index_of(JugglerState({1, 3})) == 5);
  for (std::size_t i = 0; i < mat.size(); ++i) {
    CHECK(mat.row_sum(i) == 1);
  }
}

TEST_CASE("exact solve equals the product form") {
  for (const Rational& q : {Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
    for (int m = 1; m <= 6; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        const auto solved = jepq::solve_stationary(jepq::build_transition_matrix(model));
        for (std::size_t i = 0; i < solved.size(); ++i) {
          std::vector<int> b(solved.support[i].heights().begin(), solved.support[i].heights().end());
          CHECK(solved.prob[i] == oracle::product_weight(b, m, q) / jepq::partition_Z(m, n, q));
        }
      }
    }
  }
}

TEST_CASE("power iteration reaches the exact law in doubles") {
  const auto exact_model = ThrowModel<Rational>::bounded_geometric(7, 3, Rational(1, 2));
  const auto model = jepq::convert_model<double>(exact_model);
  const auto mat = jepq::build_transition_matrix(model);
  const auto solved = jepq::solve_stationary(mat);
  double worst = 0.0;
  for (std::size_t i = 0; i < solved.size(); ++i) {
    worst = std::max(worst, std::abs(solved.prob[i] - jepq::stationary_prob(solved.support[i], exact_model).get_d()));
  }
  CHECK(worst < 1e-12);
  CHECK(jepq::stationarity_residual(solved.prob, mat) < 1e-13);
}

TEST_CASE("a reducible chain is rejected") {
  // n = 0 and n = m have a single state; an unreachable pair needs a crafted matrix
  jepq::TransitionMatrix<Rational, JugglerState> mat;
  mat.states = {JugglerState({0}), JugglerState({1})};
  mat.rows = {{{0, Rational(1)}}, {{1, Rational(1)}}};
  CHECK_THROWS_AS(jepq::solve_stationary(mat), jepq::SolveError);
}

TEST_CASE("state cap") {
  const auto model = ThrowModel<Rational>::bounded_geometric(12, 6, Rational(1, 2));
  CHECK_THROWS_AS(jepq::build_transition_matrix(model, 100), jepq::StateCapExceeded);
  CHECK_THROWS_AS(jepq::build_extended_matrix(6, 3, Rational(1, 2), 349), jepq::StateCapExceeded);
  CHECK_NOTHROW(jepq::build_extended_matrix(6, 3, Rational(1, 2), 350));
  CHECK_THROWS_AS(jepq::build_transition_matrix(ThrowModel<Rational>::unbounded_geometric(2, Rational(1, 2))),
                  std::invalid_argument);
}

TEST_CASE("total variation") {
  using D = jepq::DistVector<Rational, int>;
  const auto a = D::from_atoms({{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  const auto b = D::from_atoms({{1, Rational(1, 4)}, {2, Rational(3, 4)}});
  CHECK(jepq::total_variation(a, b) == Rational(3, 4));
  CHECK(jepq::total_variation(a, a) == 0);
  // geometric vs ell-truncated geometric differ by exactly q^ell
  for (int ell = 1; ell <= 10; ++ell) {
    const Rational q(2, 3);
    CHECK(jepq::total_variation(jepq::geometric_pmf(q, ell + 5), jepq::truncated_geometric_pmf(ell, q)) ==
          jepq::ipow(q, ell));
  }
}

TEST_CASE("convergence rows match an independent exact computation") {
  // values produced by a separate brute-force script over all n-subsets
  const auto r = jepq::tv_to_unbounded<Rational>(5, 3, Rational(1, 2));
  CHECK(r.tv == Rational(21539, 85760));
  CHECK(r.bound_exact == 1 - jepq::ipow(Rational(7, 8), 5));
  CHECK(r.bound_simple == Rational(5, 8));
  const auto d = jepq::tv_to_unbounded<double>(15, 3, 0.5);
  CHECK(d.tv == doctest::Approx(0.0010463239878138084).epsilon(1e-10));
  const auto n1 = jepq::tv_to_unbounded<double>(13, 1, 0.5);
  CHECK(n1.tv == doctest::Approx(0.0006185472539556479).epsilon(1e-10));
}

TEST_CASE("convergence bound chain holds (property)") {
  oracle::Gen gen(29);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = gen.range(1, 3);
    const int m = n + gen.range(0, 7);
    const Rational q = gen.rational(6);
    const auto r = jepq::tv_to_unbounded<Rational>(m, n, q);
    CHECK(r.tv >= 0);
    CHECK(r.tv <= r.bound_exact);
    CHECK(r.bound_exact <= r.bound_simple);
  }
}

TEST_CASE("coupling bound") {
  CHECK(jepq::coupling_bound<Rational>(3, Rational(0), Rational(1, 2)) == Rational(7, 8));
  CHECK(jepq::coupling_bound<Rational>(2, Rational(1, 2), Rational(1, 2)) == Rational(7, 8));
  CHECK_THROWS_AS(jepq::coupling_bound<Rational>(1, Rational(2), Rational(0)), std::invalid_argument);
}

TEST_CASE("limit rows: corrected form converges to (q;q)_n, uncorrected does not") {
  const auto rows = jepq::limit_tables<double>(2, 0.5, {10, 20, 40});
  for (const auto& r : rows) {
    CHECK(r.target == doctest::Approx(0.375));
    CHECK(r.corrected_error <= r.bound);
  }
  CHECK(rows.back().corrected_error < 1e-10);
  CHECK(rows.back().literal == doctest::Approx(0.75).epsilon(1e-9));
  const auto exact = jepq::limit_tables<Rational>(3, Rational(1, 2), {6});
  CHECK(exact[0].corrected == jepq::stationary_prob(JugglerState::ground(3),
                                                    ThrowModel<Rational>::bounded_geometric(6, 3, Rational(1, 2))));
  const auto growing = jepq::limit_tables_growing<double>(0.5, {25});
  CHECK(growing[0].m == 50);
  CHECK(std::abs(growing[0].corrected - 0.288788095086602) < 1e-6);
}
