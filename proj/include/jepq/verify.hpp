#pragma once

// Exhaustive identity checks in exact arithmetic. Each suite compares a
// closed form against an independent brute-force computation over a
// parameter grid and reports the first counterexample it finds.

#include <string>
#include <vector>

#include "jepq/scalar.hpp"

namespace jepq {

struct CheckResult {
  std::string name;
  bool passed = false;
  long long cases = 0;  // number of exact comparisons performed
  std::string detail;   // first failure, or a short summary
};

struct VerifyOptions {
  int max_m = 8;
  int max_extended_m = 6;  // the rook chain grows like Stirling numbers
  std::vector<Rational> qs = {Rational(1, 3), Rational(1, 2), Rational(2, 3)};
};

std::vector<CheckResult> run_verification(const VerifyOptions& options);

// Individual suites, exposed for tests.
CheckResult verify_stirling_relations(const VerifyOptions& options);
CheckResult verify_q_int_reflection(const VerifyOptions& options);
CheckResult verify_product_form_vs_solve(const VerifyOptions& options);
CheckResult verify_normalization(const VerifyOptions& options);
CheckResult verify_circ_sum(const VerifyOptions& options);
CheckResult verify_extension_sums(const VerifyOptions& options);
CheckResult verify_rook_connection(const VerifyOptions& options);
CheckResult verify_extended_chain(const VerifyOptions& options);
CheckResult verify_balance_bounded(const VerifyOptions& options);
CheckResult verify_balance_unbounded(const VerifyOptions& options);
CheckResult verify_closed_forms(const VerifyOptions& options);
CheckResult verify_throw_fraction_discrepancy(const VerifyOptions& options);
CheckResult verify_uniform_model(const VerifyOptions& options);
CheckResult verify_truncation_distance(const VerifyOptions& options);
CheckResult verify_convergence_bounds(const VerifyOptions& options);
CheckResult verify_ground_state_limits(const VerifyOptions& options);

}  // namespace jepq
