#include "jepq/verify.hpp"

#include <functional>
#include <sstream>

#include "jepq/jep.hpp"
#include "jepq/oracle.hpp"
#include "jepq/qcomb.hpp"
#include "jepq/rook.hpp"

namespace jepq {
namespace {

class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); result_.passed = true; }

  void expect(bool ok, const std::function<std::string()>& describe) {
    ++result_.cases;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = describe();
    }
  }

  CheckResult finish(const std::string& summary) {
    if (result_.passed) {
      result_.detail = summary;
    }
    return result_;
  }

 private:
  CheckResult result_;
};

std::string params(int m, int n, const Rational& q) {
  std::ostringstream os;
  os << "m=" << m << " n=" << n << " q=" << to_string(q);
  return os.str();
}

// Product-form weight evaluated at any q, including the classical q = 1.
Rational product_weight(const JugglerState& b, int m, const Rational& q) {
  Rational w(1);
  for (Height x : b.heights()) {
    w *= q_int(1 + vacancies_above(b, x, m), q) * ipow(q, x);
  }
  return w;
}

}  // namespace

CheckResult verify_stirling_relations(const VerifyOptions& options) {
  Checker check("q-Stirling vs Gould: S_q[a,b] = q^binom(b,2) G_q[a,b]");
  std::vector<Rational> qs = options.qs;
  qs.emplace_back(3, 2);
  qs.emplace_back(2);
  const int max_a = options.max_m + 2;
  for (const Rational& q : qs) {
    for (int a = 0; a <= max_a; ++a) {
      for (int b = 0; b <= a; ++b) {
        const Rational lhs = q_stirling(a, b, q);
        const Rational rhs = ipow(q, binom2(b)) * gould_stirling(a, b, q);
        check.expect(lhs == rhs, [&] {
          return "a=" + std::to_string(a) + " b=" + std::to_string(b) + " q=" + to_string(q);
        });
      }
    }
  }
  return check.finish("a <= " + std::to_string(max_a));
}

CheckResult verify_q_int_reflection(const VerifyOptions& options) {
  Checker check("[k]_q = q^(k-1) [k]_{1/q}");
  for (const Rational& q : options.qs) {
    const Rational inv = 1 / q;
    for (int k = 1; k <= 20; ++k) {
      check.expect(q_int(k, q) == ipow(q, k - 1) * q_int(k, inv),
                   [&] { return "k=" + std::to_string(k) + " q=" + to_string(q); });
      check.expect(q_int(k, q) * (1 - q) == 1 - ipow(q, k),
                   [&] { return "sum form, k=" + std::to_string(k); });
    }
  }
  return check.finish("k <= 20");
}

CheckResult verify_product_form_vs_solve(const VerifyOptions& options) {
  Checker check("stationary product form equals exact linear solve");
  for (const Rational& q : options.qs) {
    for (int m = 1; m <= options.max_m; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        const auto solved = solve_stationary(build_transition_matrix(model));
        const auto closed = stationary_distribution(model);
        check.expect(solved.support == closed.support && solved.prob == closed.prob,
                     [&] { return params(m, n, q); });
      }
    }
  }
  return check.finish("1 <= n <= m <= " + std::to_string(options.max_m));
}

CheckResult verify_normalization(const VerifyOptions& options) {
  Checker check("sum of product-form weights equals Z(m,n,q)");
  for (const Rational& q : options.qs) {
    for (int m = 0; m <= options.max_m; ++m) {
      for (int n = 0; n <= m; ++n) {
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        Rational sum(0);
        for (const auto& b : enumerate_states(m, n)) {
          sum += stationary_weight(b, model);
        }
        check.expect(sum == partition_Z(m, n, q), [&] { return params(m, n, q); });
        check.expect(sum == partition_Z_stable(m, n, q),
                     [&] { return "stable recursion, " + params(m, n, q); });
      }
    }
  }
  return check.finish("0 <= n <= m <= " + std::to_string(options.max_m));
}

CheckResult verify_circ_sum(const VerifyOptions& options) {
  Checker check("sum_C q^circ(C) = G_q[m+1, m-n+1]");
  for (int m = 0; m <= options.max_m; ++m) {
    for (int n = 0; n <= m; ++n) {
      const auto configs = enumerate_configs(m, n);
      check.expect(Rational(static_cast<long>(configs.size())) ==
                       gould_stirling(m + 1, m - n + 1, Rational(1)),
                   [&] { return "config count m=" + std::to_string(m) + " n=" + std::to_string(n); });
      for (const Rational& q : options.qs) {
        Rational sum(0);
        for (const auto& c : configs) {
          sum += ipow(q, circ(c));
        }
        check.expect(sum == gould_stirling(m + 1, m - n + 1, q), [&] { return params(m, n, q); });
      }
    }
  }
  return check.finish("0 <= n <= m <= " + std::to_string(options.max_m));
}

CheckResult verify_extension_sums(const VerifyOptions& options) {
  Checker check("sum over extensions of q^-circ = prod [1+v_B(x)]_{1/q}");
  for (const Rational& q : options.qs) {
    const Rational inv = 1 / q;
    for (int m = 0; m <= options.max_m; ++m) {
      for (int n = 0; n <= m; ++n) {
        for (const auto& b : enumerate_states(m, n)) {
          Rational sum(0);
          for (const auto& c : extensions(b, m)) {
            sum += extended_weight(c, q);
          }
          Rational product(1);
          for (Height x : b.heights()) {
            product *= q_int(1 + vacancies_above(b, x, m), inv);
          }
          check.expect(sum == product, [&] { return params(m, n, q) + " B={" + b.to_string() + "}"; });
        }
      }
    }
  }
  return check.finish("all B, m <= " + std::to_string(options.max_m));
}

CheckResult verify_rook_connection(const VerifyOptions& options) {
  Checker check("prod [1+v_B(x)]_{1/q} = prod_k [m-n-i_k+k]_{1/q}");
  const int max_m = options.max_m + 2;
  for (const Rational& q : options.qs) {
    const Rational inv = 1 / q;
    for (int m = 0; m <= max_m; ++m) {
      for (int n = 0; n <= m; ++n) {
        for (const auto& b : enumerate_states(m, n)) {
          Rational lhs(1);
          Rational rhs(1);
          auto hs = b.heights();
          for (std::size_t k = 0; k < hs.size(); ++k) {
            lhs *= q_int(1 + vacancies_above(b, hs[k], m), inv);
            rhs *= q_int(m - n - hs[k] + static_cast<int>(k) + 1, inv);
          }
          check.expect(lhs == rhs, [&] { return params(m, n, q) + " B={" + b.to_string() + "}"; });
        }
      }
    }
  }
  return check.finish("all B, m <= " + std::to_string(max_m));
}

CheckResult verify_extended_chain(const VerifyOptions& options) {
  Checker check("q^-circ / G_{1/q} is stationary for the rook chain and projects to the product form");
  for (const Rational& q : options.qs) {
    for (int m = 1; m <= options.max_extended_m; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto matrix = build_extended_matrix(m, n, q);
        const Rational norm = extended_normalizer(m, n, q);
        std::vector<Rational> mu;
        mu.reserve(matrix.size());
        Rational total(0);
        for (const auto& c : matrix.states) {
          mu.push_back(extended_weight(c, q) / norm);
          total += mu.back();
        }
        check.expect(total == 1, [&] { return "normalization " + params(m, n, q); });
        check.expect(stationarity_residual(mu, matrix) == 0,
                     [&] { return "residual " + params(m, n, q); });
        const auto solved = solve_stationary(matrix);
        check.expect(solved.prob == mu, [&] { return "linear solve " + params(m, n, q); });

        // Row projection onto juggler states.
        const auto base = stationary_distribution(ThrowModel<Rational>::bounded_geometric(m, n, q));
        std::vector<Rational> projected(base.size());
        for (std::size_t i = 0; i < matrix.size(); ++i) {
          auto it = std::lower_bound(base.support.begin(), base.support.end(), matrix.states[i].rows());
          projected[static_cast<std::size_t>(it - base.support.begin())] += mu[i];
        }
        check.expect(projected == base.prob, [&] { return "projection " + params(m, n, q); });
      }
    }
  }
  return check.finish("1 <= n <= m <= " + std::to_string(options.max_extended_m));
}

CheckResult verify_balance_bounded(const VerifyOptions& options) {
  Checker check("balance residual of the product form is zero (bounded)");
  for (const Rational& q : options.qs) {
    for (int m = 1; m <= options.max_m; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        const auto pi = stationary_distribution(model);
        const StateFunction<Rational> f = [&pi](const JugglerState& b) { return pi.at(b); };
        for (const auto& b : pi.support) {
          check.expect(balance_residual(b, f, model) == 0,
                       [&] { return params(m, n, q) + " B={" + b.to_string() + "}"; });
        }
      }
    }
  }
  return check.finish("every state, m <= " + std::to_string(options.max_m));
}

CheckResult verify_balance_unbounded(const VerifyOptions& options) {
  Checker check("balance residual of the unbounded law is zero");
  constexpr int kMaxHeight = 10;
  for (const Rational& q : options.qs) {
    for (int n = 1; n <= 3; ++n) {
      const auto model = ThrowModel<Rational>::unbounded_geometric(n, q);
      const StateFunction<Rational> f = [&model](const JugglerState& b) {
        return stationary_prob(b, model);
      };
      for (const auto& b : enumerate_states(kMaxHeight + 1, n)) {
        check.expect(balance_residual(b, f, model) == 0, [&] {
          return "n=" + std::to_string(n) + " q=" + to_string(q) + " B={" + b.to_string() + "}";
        });
      }
    }
  }
  return check.finish("n <= 3, heights <= 10");
}

CheckResult verify_closed_forms(const VerifyOptions& options) {
  Checker check("ground, top and throw-fraction closed forms");
  for (const Rational& q : options.qs) {
    for (int m = 1; m <= options.max_m; ++m) {
      for (int n = 1; n <= m; ++n) {
        const auto model = ThrowModel<Rational>::bounded_geometric(m, n, q);
        const auto pi = stationary_distribution(model);
        const auto stats = closed_form_stats(m, n, q);
        Rational zero_occupied(0);
        for (std::size_t i = 0; i < pi.size(); ++i) {
          if (pi.support[i].contains(0)) {
            zero_occupied += pi.prob[i];
          }
        }
        check.expect(stats.ground == pi.at(JugglerState::ground(n)),
                     [&] { return "ground " + params(m, n, q); });
        check.expect(stats.top == pi.at(JugglerState::top(m, n)),
                     [&] { return "top " + params(m, n, q); });
        check.expect(stats.throw_fraction == zero_occupied,
                     [&] { return "throw fraction " + params(m, n, q); });
      }
    }
  }
  return check.finish("1 <= n <= m <= " + std::to_string(options.max_m));
}

CheckResult verify_throw_fraction_discrepancy(const VerifyOptions& options) {
  Checker check("uncorrected throw fraction agrees only at n = 1");
  for (int m = 1; m <= options.max_m; ++m) {
    for (const Rational& q : options.qs) {
      const auto stats = closed_form_stats(m, 1, q);
      check.expect(stats.throw_fraction == stats.throw_fraction_paper,
                   [&] { return "n=1 " + params(m, 1, q); });
    }
  }
  const auto stats = closed_form_stats(3, 2, Rational(1, 2));
  check.expect(stats.throw_fraction_paper > 1, [&] {
    return "expected uncorrected value > 1 at m=3 n=2 q=1/2, got " + to_string(stats.throw_fraction_paper);
  });
  check.expect(stats.throw_fraction == Rational(12, 13), [&] {
    return "corrected value at m=3 n=2 q=1/2 is " + to_string(stats.throw_fraction);
  });
  return check.finish("at m=3 n=2 q=1/2: corrected 12/13, uncorrected " +
                      to_string(stats.throw_fraction_paper));
}

CheckResult verify_uniform_model(const VerifyOptions& options) {
  Checker check("uniform throws: prod (1+v_B(x)) is stationary and equals the q=1 product form");
  for (int m = 1; m <= options.max_m; ++m) {
    for (int n = 1; n <= m; ++n) {
      const auto model = ThrowModel<Rational>::bounded_uniform(m, n);
      const auto solved = solve_stationary(build_transition_matrix(model));
      const auto closed = stationary_distribution(model);
      check.expect(solved.prob == closed.prob,
                   [&] { return "m=" + std::to_string(m) + " n=" + std::to_string(n); });
      Rational z(0);
      std::vector<Rational> at_one;
      for (const auto& b : closed.support) {
        at_one.push_back(product_weight(b, m, Rational(1)));
        z += at_one.back();
      }
      for (auto& w : at_one) {
        w /= z;
      }
      check.expect(at_one == closed.prob,
                   [&] { return "q=1 limit m=" + std::to_string(m) + " n=" + std::to_string(n); });
    }
  }
  return check.finish("1 <= n <= m <= " + std::to_string(options.max_m));
}

CheckResult verify_truncation_distance(const VerifyOptions& options) {
  Checker check("TV(geometric, ell-truncated geometric) = q^ell");
  for (const Rational& q : options.qs) {
    for (int ell = 1; ell <= 12; ++ell) {
      const Rational tv = total_variation(geometric_pmf(q, ell), truncated_geometric_pmf(ell, q));
      check.expect(tv == ipow(q, ell), [&] { return "ell=" + std::to_string(ell) + " q=" + to_string(q); });
    }
  }
  return check.finish("ell <= 12");
}

CheckResult verify_convergence_bounds(const VerifyOptions& options) {
  Checker check("TV to unbounded law <= 1-(1-q^ell)^m <= m q^ell");
  for (const Rational& q : {Rational(1, 3), Rational(1, 2)}) {
    for (int n = 1; n <= 3; ++n) {
      for (int m = n; m <= n + options.max_m; ++m) {
        const auto row = tv_to_unbounded(m, n, q);
        check.expect(row.tv >= 0 && row.tv <= row.bound_exact && row.bound_exact <= row.bound_simple,
                     [&] { return params(m, n, q) + " tv=" + to_string(row.tv); });
      }
    }
  }
  return check.finish("n <= 3, m <= n + " + std::to_string(options.max_m));
}

CheckResult verify_ground_state_limits(const VerifyOptions& options) {
  Checker check("ground-state limit |Z^-1 [m-n+1]^n q^binom(n,2) - (q;q)_n| <= m q^ell");
  std::vector<int> ms;
  for (int m = 3; m <= 4 * options.max_m; ++m) {
    ms.push_back(m);
  }
  const auto rows = limit_tables(2, Rational(1, 2), ms);
  for (const auto& row : rows) {
    check.expect(row.corrected_error <= row.bound,
                 [&] { return "m=" + std::to_string(row.m) + " error=" + to_string(row.corrected_error); });
  }
  // The expression without q^binom(n,2) tends to (q;q)_2 / q = 3/4 instead of 3/8.
  check.expect(rows.back().literal_error > Rational(1, 4), [] { return "uncorrected form converged"; });
  return check.finish("n=2 q=1/2 m <= " + std::to_string(4 * options.max_m) +
                      "; uncorrected form misses (q;q)_n by " +
                      std::to_string(to_double(rows.back().literal_error)));
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  if (options.max_m < 1) {
    throw std::invalid_argument("verify: max-m must be at least 1");
  }
  VerifyOptions opts = options;
  opts.max_extended_m = std::min(options.max_extended_m, options.max_m);
  return {
      verify_stirling_relations(opts),   verify_q_int_reflection(opts),
      verify_normalization(opts),        verify_product_form_vs_solve(opts),
      verify_circ_sum(opts),             verify_extension_sums(opts),
      verify_rook_connection(opts),      verify_extended_chain(opts),
      verify_balance_bounded(opts),      verify_balance_unbounded(opts),
      verify_closed_forms(opts),         verify_throw_fraction_discrepancy(opts),
      verify_uniform_model(opts),        verify_truncation_distance(opts),
      verify_convergence_bounds(opts),   verify_ground_state_limits(opts),
  };
}

}  // namespace jepq
