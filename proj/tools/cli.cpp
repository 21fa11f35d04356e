#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "jepq/jep.hpp"
#include "jepq/mc.hpp"
#include "jepq/oracle.hpp"
#include "jepq/qcomb.hpp"
#include "jepq/rook.hpp"
#include "jepq/verify.hpp"

namespace jepq::cli {
namespace {

using Json = nlohmann::ordered_json;
using Value = std::variant<std::monostate, bool, long long, double, std::string, Rational>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Report {
  std::string command;
  Json parameters = Json::object();
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::pair<std::string, Value>> summary;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<std::string> q;
  std::string model = "bounded-geometric";
  std::uint64_t seed = 1;
  long long steps = 100000;
  long long burn_in = 1000;
  std::optional<std::string> m_range;
  int max_m = 6;
  std::string format = "json";
  bool exact = false;
  bool paper_literal = false;
  std::optional<std::string> out;
};

Json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Rational>) {
          return Json{{"exact", to_string(x)}, {"float", x.get_d()}};
        } else if constexpr (std::is_same_v<T, double>) {
          return Json{{"exact", nullptr}, {"float", x}};
        } else {
          return x;
        }
      },
      v);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  }
  return out + "\"";
}

std::string csv_cell(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(x);
        } else {
          return to_string(x);
        }
      },
      v);
}

void write_json(const Report& report, std::ostream& os) {
  Json doc = Json::object();
  doc["command"] = report.command;
  doc["parameters"] = report.parameters;
  for (const auto& [name, table] : report.tables) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        obj[table.columns[c]] = to_json(row[c]);
      }
      rows.push_back(std::move(obj));
    }
    doc[name] = std::move(rows);
  }
  Json summary = Json::object();
  for (const auto& [key, value] : report.summary) {
    summary[key] = to_json(value);
  }
  doc["summary"] = std::move(summary);
  os << doc.dump(2) << '\n';
}

// One block per table, then a key/value summary block; blocks are separated
// by a blank line. Numeric columns expand to <name>_exact,<name>_float; the
// exact cell is empty for values computed in floating point.
void write_csv(const Report& report, std::ostream& os) {
  auto emit_table = [&os](const Table& table) {
    std::vector<bool> pair(table.columns.size(), false);
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        pair[c] = pair[c] || std::holds_alternative<Rational>(row[c]) ||
                  std::holds_alternative<double>(row[c]);
      }
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      os << (c > 0 ? "," : "");
      if (pair[c]) {
        os << table.columns[c] << "_exact," << table.columns[c] << "_float";
      } else {
        os << table.columns[c];
      }
    }
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << (c > 0 ? "," : "");
        if (pair[c]) {
          if (const auto* r = std::get_if<Rational>(&row[c])) {
            os << to_string(*r) << ',' << format_double(r->get_d());
          } else {
            os << ',' << csv_cell(row[c]);
          }
        } else {
          os << csv_cell(row[c]);
        }
      }
      os << '\n';
    }
  };
  for (const auto& [name, table] : report.tables) {
    emit_table(table);
    os << '\n';
  }
  Table summary;
  summary.columns = {"key", "value"};
  for (const auto& [key, value] : report.summary) {
    summary.rows.push_back({key, value});
  }
  emit_table(summary);
}

int require(const std::optional<int>& v, const char* name) {
  if (!v) {
    throw UsageError(std::string("--") + name + " is required for this subcommand");
  }
  return *v;
}

Rational require_q(const RunConfig& cfg) {
  if (!cfg.q) {
    throw UsageError("--q is required for this subcommand");
  }
  try {
    return parse_rational(*cfg.q);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--m-range must look like A:B");
  }
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a_text = text.substr(0, colon);
    const std::string b_text = text.substr(colon + 1);
    const int a = std::stoi(a_text, &used_a);
    const int b = std::stoi(b_text, &used_b);
    if (used_a != a_text.size() || used_b != b_text.size() || a > b) {
      throw UsageError("--m-range must satisfy A <= B");
    }
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("--m-range must look like A:B with integers");
  }
}

ThrowModel<Rational> make_model(const RunConfig& cfg) {
  ModelKind kind{};
  try {
    kind = parse_model_kind(cfg.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const int n = require(cfg.n, "n");
  switch (kind) {
    case ModelKind::BoundedGeometric:
      return ThrowModel<Rational>::bounded_geometric(require(cfg.m, "m"), n, require_q(cfg));
    case ModelKind::BoundedUniform:
      return ThrowModel<Rational>::bounded_uniform(require(cfg.m, "m"), n);
    case ModelKind::UnboundedGeometric:
      return ThrowModel<Rational>::unbounded_geometric(n, require_q(cfg));
  }
  throw UsageError("unknown model");
}

void describe_model(Report& report, const ThrowModel<Rational>& model) {
  report.parameters["model"] = to_string(model.kind);
  if (model.bounded()) {
    report.parameters["m"] = model.m;
  }
  report.parameters["n"] = model.n;
  if (model.kind != ModelKind::BoundedUniform) {
    report.parameters["q"] = to_json(Value(model.q));
  }
}

Report cmd_stationary(const RunConfig& cfg) {
  const auto model = make_model(cfg);
  Report report;
  report.command = "stationary";
  describe_model(report, model);
  Table states;
  states.columns = {"state", "weight", "prob"};

  if (!model.bounded()) {
    // Unbounded law, materialized on subsets of {0..m-1}; --m sets that ceiling.
    const int ceiling = cfg.m.value_or(2 * model.n + 8);
    if (ceiling < model.n) {
      throw UsageError("--m (height ceiling) must be at least n");
    }
    report.parameters["height_ceiling"] = ceiling;
    if (state_count(ceiling, model.n) > state_cap()) {
      throw StateCapExceeded("too many states below the height ceiling");
    }
    Rational covered(0);
    for (const auto& b : enumerate_states(ceiling, model.n)) {
      const Rational p = stationary_prob(b, model);
      covered += p;
      states.rows.push_back({b.to_string(), Rational(stationary_weight(b, model)), p});
    }
    report.tables.emplace_back("states", std::move(states));
    report.summary.emplace_back("normalizer", Rational(ipow(model.q, binom2(model.n)) /
                                                       q_pochhammer(model.n, model.q)));
    report.summary.emplace_back("tail_mass", Rational(1 - covered));
    return report;
  }

  if (state_count(model.m, model.n) > state_cap()) {
    throw StateCapExceeded("state space exceeds JEPQ_STATE_CAP");
  }
  const auto dist = stationary_distribution(model);
  Rational z(0);
  Rational zero_occupied(0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const Rational w = stationary_weight(dist.support[i], model);
    z += w;
    if (dist.support[i].contains(0)) {
      zero_occupied += dist.prob[i];
    }
    states.rows.push_back({dist.support[i].to_string(), w, dist.prob[i]});
  }
  report.tables.emplace_back("states", std::move(states));
  if (model.kind == ModelKind::BoundedGeometric) {
    report.summary.emplace_back("Z", partition_Z(model.m, model.n, model.q));
    if (model.n >= 1) {
      const auto stats = closed_form_stats(model.m, model.n, model.q);
      report.summary.emplace_back("ground", stats.ground);
      report.summary.emplace_back("top", stats.top);
      report.summary.emplace_back(
          "throw_fraction", cfg.paper_literal ? stats.throw_fraction_paper : stats.throw_fraction);
      report.summary.emplace_back("throw_fraction_convention",
                                  std::string(cfg.paper_literal ? "paper-literal" : "corrected"));
      report.summary.emplace_back("throw_fraction_corrected", stats.throw_fraction);
      report.summary.emplace_back("throw_fraction_paper", stats.throw_fraction_paper);
      report.summary.emplace_back("throw_fraction_direct_sum", zero_occupied);
    }
  } else {
    report.summary.emplace_back("weight_sum", z);
    report.summary.emplace_back("throw_fraction_direct_sum", zero_occupied);
  }
  return report;
}

Report cmd_verify(const RunConfig& cfg, bool& all_passed) {
  VerifyOptions options;
  options.max_m = cfg.max_m;
  if (options.max_m < 1 || options.max_m > 10) {
    throw UsageError("--max-m must lie in [1, 10]");
  }
  Report report;
  report.command = "verify";
  report.parameters["max_m"] = options.max_m;
  Table checks;
  checks.columns = {"check", "passed", "cases", "detail"};
  all_passed = true;
  for (const auto& r : run_verification(options)) {
    all_passed = all_passed && r.passed;
    checks.rows.push_back({r.name, r.passed, r.cases, r.detail});
  }
  report.tables.emplace_back("checks", std::move(checks));
  report.summary.emplace_back("all_passed", all_passed);
  return report;
}

Report cmd_simulate(const RunConfig& cfg) {
  const auto exact_model = make_model(cfg);
  const auto model = convert_model<double>(exact_model);
  if (cfg.steps < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.steps) {
    throw UsageError("require steps >= 1 and 0 <= burn-in < steps");
  }
  Report report;
  report.command = "simulate";
  describe_model(report, exact_model);
  report.parameters["seed"] = cfg.seed;
  report.parameters["steps"] = cfg.steps;
  report.parameters["burn_in"] = cfg.burn_in;

  const auto start = JugglerState::ground(model.n);
  const auto traj = simulate(model, start, cfg.steps, cfg.seed);
  const auto empirical = empirical_distribution(traj, cfg.burn_in);

  Table states;
  states.columns = {"state", "empirical", "exact"};
  double tv = 0.0;
  std::optional<double> exact_throw;
  if (model.bounded()) {
    if (state_count(model.m, model.n) > state_cap()) {
      throw StateCapExceeded("state space exceeds JEPQ_STATE_CAP");
    }
    const auto exact = stationary_distribution(exact_model);
    DistVector<double, JugglerState> exact_d;
    exact_d.support = exact.support;
    double zero_occupied = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      exact_d.prob.push_back(exact.prob[i].get_d());
      if (exact.support[i].contains(0)) {
        zero_occupied += exact_d.prob.back();
      }
      states.rows.push_back({exact.support[i].to_string(), empirical.at(exact.support[i]),
                             exact.prob[i]});
    }
    exact_throw = zero_occupied;
    tv = total_variation(empirical, exact_d);
  } else {
    // Exact law on the visited states; the unvisited mass enters as a tail.
    DistVector<double, JugglerState> exact_d;
    exact_d.support = empirical.support;
    double covered = 0.0;
    for (const auto& b : empirical.support) {
      exact_d.prob.push_back(stationary_prob(b, model));
      covered += exact_d.prob.back();
    }
    exact_d.tail = std::max(0.0, 1.0 - covered);
    for (std::size_t i = 0; i < empirical.size(); ++i) {
      states.rows.push_back({empirical.support[i].to_string(), empirical.prob[i], exact_d.prob[i]});
    }
    tv = total_variation(empirical, exact_d);
    // States avoiding 0 are shifts B+1, each weighing q^n times B.
    exact_throw = 1.0 - std::pow(model.q, model.n);
  }
  report.tables.emplace_back("states", std::move(states));
  report.summary.emplace_back("throw_count", traj.throw_count);
  report.summary.emplace_back("empirical_throw_fraction", occupancy_of_zero(traj, cfg.burn_in));
  if (exact_throw) {
    report.summary.emplace_back("exact_throw_fraction", *exact_throw);
  }
  report.summary.emplace_back("tv_empirical_vs_exact", tv);
  return report;
}

template <Scalar S>
void converge_rows(Table& table, int n, const Rational& q, int lo, int hi) {
  const S qs = from_rational<S>(q);
  for (int m = lo; m <= hi; ++m) {
    const auto row = tv_to_unbounded<S>(m, n, qs);
    const bool ok = row.tv <= row.bound_exact && row.bound_exact <= row.bound_simple;
    table.rows.push_back({static_cast<long long>(m), static_cast<long long>(n),
                          static_cast<long long>(m - n + 1), row.tv, row.bound_exact,
                          row.bound_simple, ok});
  }
}

Report cmd_converge(const RunConfig& cfg) {
  const int n = require(cfg.n, "n");
  const Rational q = require_q(cfg);
  const auto [lo, hi] = cfg.m_range ? parse_range(*cfg.m_range) : std::pair{n, n + 12};
  if (lo < n) {
    throw UsageError("--m-range must start at or above n");
  }
  check_geometric_params<Rational>(hi, n, q);
  Report report;
  report.command = "converge";
  report.parameters["n"] = n;
  report.parameters["q"] = to_json(Value(q));
  report.parameters["m_range"] = std::to_string(lo) + ":" + std::to_string(hi);
  report.parameters["exact"] = cfg.exact;
  Table table;
  table.columns = {"m", "n", "ell", "tv", "bound_exact", "bound_simple", "within_bound"};
  if (cfg.exact) {
    converge_rows<Rational>(table, n, q, lo, hi);
  } else {
    converge_rows<double>(table, n, q, lo, hi);
  }
  bool all_ok = true;
  for (const auto& row : table.rows) {
    all_ok = all_ok && std::get<bool>(row.back());
  }
  report.tables.emplace_back("rows", std::move(table));
  report.summary.emplace_back("all_within_bound", all_ok);
  return report;
}

template <Scalar S>
Table limit_table(const std::vector<LimitRow<S>>& rows, bool paper_literal) {
  Table table;
  table.columns = {"m",      "n",      "value",           "literal",       "corrected",
                   "target", "corrected_error", "literal_error", "bound",     "within_bound"};
  for (const auto& r : rows) {
    table.rows.push_back({static_cast<long long>(r.m), static_cast<long long>(r.n),
                          paper_literal ? r.literal : r.corrected, r.literal, r.corrected,
                          r.target, r.corrected_error, r.literal_error, r.bound,
                          r.corrected_error <= r.bound});
  }
  return table;
}

template <Scalar S>
void limits_tables(Report& report, int n, const Rational& q, int lo, int hi, bool paper_literal) {
  const S qs = from_rational<S>(q);
  std::vector<int> ms;
  for (int m = lo; m <= hi; ++m) {
    ms.push_back(m);
  }
  report.tables.emplace_back("fixed_n", limit_table(limit_tables<S>(n, qs, ms), paper_literal));
  std::vector<int> ns;
  for (int k = 1; 2 * k <= hi; ++k) {
    ns.push_back(k);
  }
  report.tables.emplace_back("growing_n", limit_table(limit_tables_growing<S>(qs, ns), paper_literal));
  const auto phi = euler_phi(qs, 1e-15);
  report.summary.emplace_back("pochhammer", q_pochhammer(n, qs));
  report.summary.emplace_back("euler_phi", phi.value);
  report.summary.emplace_back("euler_phi_terms", phi.terms);
  report.summary.emplace_back("euler_phi_tail_bound", phi.tail_bound);
}

Report cmd_limits(const RunConfig& cfg) {
  const int n = require(cfg.n, "n");
  const Rational q = require_q(cfg);
  const auto [lo, hi] = cfg.m_range ? parse_range(*cfg.m_range) : std::pair{std::max(n, 1), 40};
  if (lo < n) {
    throw UsageError("--m-range must start at or above n");
  }
  check_geometric_params<Rational>(hi, n, q);
  Report report;
  report.command = "limits";
  report.parameters["n"] = n;
  report.parameters["q"] = to_json(Value(q));
  report.parameters["m_range"] = std::to_string(lo) + ":" + std::to_string(hi);
  report.parameters["exact"] = cfg.exact;
  report.parameters["value_convention"] = cfg.paper_literal ? "paper-literal" : "corrected";
  if (cfg.exact) {
    limits_tables<Rational>(report, n, q, lo, hi, cfg.paper_literal);
  } else {
    limits_tables<double>(report, n, q, lo, hi, cfg.paper_literal);
  }
  return report;
}

Report cmd_rook(const RunConfig& cfg) {
  const int m = require(cfg.m, "m");
  const int n = require(cfg.n, "n");
  const Rational q = require_q(cfg);
  check_geometric_params<Rational>(m, n, q);
  const double count = gould_stirling<double>(m + 1, m - n + 1, 1.0);
  if (count > static_cast<double>(state_cap())) {
    throw StateCapExceeded("configuration count exceeds JEPQ_STATE_CAP");
  }
  Report report;
  report.command = "rook";
  report.parameters["m"] = m;
  report.parameters["n"] = n;
  report.parameters["q"] = to_json(Value(q));
  const auto configs = enumerate_configs(m, n);
  std::map<int, long long> histogram;
  Rational sum_pos(0);
  Rational sum_neg(0);
  for (const auto& c : configs) {
    const int k = circ(c);
    ++histogram[k];
    sum_pos += ipow(q, k);
    sum_neg += extended_weight(c, q);
  }
  Table table;
  table.columns = {"circ", "count"};
  for (const auto& [k, c] : histogram) {
    table.rows.push_back({static_cast<long long>(k), c});
  }
  report.tables.emplace_back("circ_histogram", std::move(table));
  const Rational gould = gould_stirling(m + 1, m - n + 1, q);
  const Rational gould_inv = extended_normalizer(m, n, q);
  report.summary.emplace_back("configs", static_cast<long long>(configs.size()));
  report.summary.emplace_back("classical_stirling", Rational(gould_stirling(m + 1, m - n + 1, Rational(1))));
  report.summary.emplace_back("sum_q_circ", sum_pos);
  report.summary.emplace_back("gould_q", gould);
  report.summary.emplace_back("sum_q_neg_circ", sum_neg);
  report.summary.emplace_back("gould_inv_q", gould_inv);
  report.summary.emplace_back("match", sum_pos == gould && sum_neg == gould_inv &&
                                           Rational(static_cast<long>(configs.size())) ==
                                               gould_stirling(m + 1, m - n + 1, Rational(1)));
  return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Bounded geometric juggler's exclusion process: exact laws, checks and simulation",
               "jepq"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--m", cfg.m, "admissible heights (height ceiling for unbounded tables)");
  app.add_option("--n", cfg.n, "particle count");
  app.add_option("--q", cfg.q, "throw parameter as p/r or decimal");
  app.add_option("--model", cfg.model, "bounded-geometric | unbounded-geometric | bounded-uniform")
      ->check(CLI::IsMember({"bounded-geometric", "unbounded-geometric", "bounded-uniform"}));
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--steps", cfg.steps, "simulation steps");
  app.add_option("--burn-in", cfg.burn_in, "discarded initial steps");
  app.add_option("--m-range", cfg.m_range, "inclusive range A:B of m");
  app.add_option("--max-m", cfg.max_m, "largest m for verify");
  app.add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--exact", cfg.exact, "exact rational arithmetic for converge/limits");
  app.add_flag("--paper-literal", cfg.paper_literal,
               "headline values use the uncorrected throw-fraction and limit expressions");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  for (const char* name : {"stationary", "verify", "simulate", "converge", "limits", "rook"}) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.subcommand = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "jepq: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    Report report;
    bool verify_ok = true;
    if (cfg.subcommand == "stationary") {
      report = cmd_stationary(cfg);
    } else if (cfg.subcommand == "verify") {
      report = cmd_verify(cfg, verify_ok);
    } else if (cfg.subcommand == "simulate") {
      report = cmd_simulate(cfg);
    } else if (cfg.subcommand == "converge") {
      report = cmd_converge(cfg);
    } else if (cfg.subcommand == "limits") {
      report = cmd_limits(cfg);
    } else {
      report = cmd_rook(cfg);
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.out) {
      file.open(*cfg.out);
      if (!file) {
        err << "jepq: cannot open " << *cfg.out << " for writing\n";
        return kExitUsage;
      }
      sink = &file;
    }
    if (cfg.format == "csv") {
      write_csv(report, *sink);
    } else {
      write_json(report, *sink);
    }
    return verify_ok ? kExitOk : kExitFailure;
  } catch (const UsageError& e) {
    err << "jepq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "jepq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StateCapExceeded& e) {
    err << "jepq: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "jepq: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace jepq::cli
