#include "jepq/jep.hpp"

#include <stdexcept>

#include "jepq/qcomb.hpp"

namespace jepq {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::BoundedGeometric:
      return "bounded-geometric";
    case ModelKind::UnboundedGeometric:
      return "unbounded-geometric";
    case ModelKind::BoundedUniform:
      return "bounded-uniform";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "bounded-geometric") {
    return ModelKind::BoundedGeometric;
  }
  if (name == "unbounded-geometric") {
    return ModelKind::UnboundedGeometric;
  }
  if (name == "bounded-uniform") {
    return ModelKind::BoundedUniform;
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

template <Scalar S>
ThrowModel<S> ThrowModel<S>::bounded_geometric(int m, int n, S q) {
  check_geometric_params<S>(m, n, q);
  return {ModelKind::BoundedGeometric, m, n, std::move(q)};
}

template <Scalar S>
ThrowModel<S> ThrowModel<S>::unbounded_geometric(int n, S q) {
  if (n < 0) {
    throw std::invalid_argument("unbounded_geometric: negative n");
  }
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("unbounded_geometric: require 0 < q < 1");
  }
  return {ModelKind::UnboundedGeometric, 0, n, std::move(q)};
}

template <Scalar S>
ThrowModel<S> ThrowModel<S>::bounded_uniform(int m, int n) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("bounded_uniform: require 0 <= n <= m");
  }
  return {ModelKind::BoundedUniform, m, n, S(1)};
}

template <Scalar S>
bool ThrowModel<S>::admits(const JugglerState& b) const {
  if (b.size() != static_cast<std::size_t>(n)) {
    return false;
  }
  return !bounded() || b.max() <= m - 1;
}

template <Scalar S>
void ThrowModel<S>::validate_state(const JugglerState& b) const {
  if (!admits(b)) {
    throw std::invalid_argument("state {" + b.to_string() + "} is not valid for " +
                                to_string(kind) + " with n=" + std::to_string(n) +
                                (bounded() ? ", m=" + std::to_string(m) : std::string()));
  }
}

template <Scalar S>
ThrowModel<S> convert_model(const ThrowModel<Rational>& model) {
  return {model.kind, model.m, model.n, from_rational<S>(model.q)};
}

template <Scalar S>
DistVector<S, Height> truncated_geometric_pmf(int ell, const S& q) {
  if (ell < 1) {
    throw std::invalid_argument("truncated_geometric_pmf: ell must be positive");
  }
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("truncated_geometric_pmf: require 0 < q < 1");
  }
  const S scale = (S(1) - q) / (S(1) - ipow(q, ell));
  DistVector<S, Height> d;
  S power(1);
  for (Height x = 0; x < ell; ++x) {
    d.support.push_back(x);
    d.prob.push_back(scale * power);
    power *= q;
  }
  return d;
}

template <Scalar S>
DistVector<S, Height> geometric_pmf(const S& q, Height ceiling) {
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("geometric_pmf: require 0 < q < 1");
  }
  if (ceiling < 0) {
    throw std::invalid_argument("geometric_pmf: negative ceiling");
  }
  DistVector<S, Height> d;
  S power(1);
  for (Height x = 0; x < ceiling; ++x) {
    d.support.push_back(x);
    d.prob.push_back((S(1) - q) * power);
    power *= q;
  }
  d.tail = power;
  return d;
}

namespace {

template <Scalar S>
void check_after_shift(const JugglerState& after_shift, const ThrowModel<S>& model) {
  if (model.n < 1 || after_shift.size() != static_cast<std::size_t>(model.n - 1)) {
    throw std::invalid_argument("throw: X* must hold n-1 particles");
  }
  if (model.bounded() && after_shift.max() > model.m - 2) {
    throw std::invalid_argument("throw: X* = {" + after_shift.to_string() +
                                "} occupies a height above m-2");
  }
}

// Probability of the throw index with the given rank among vacancies.
template <Scalar S>
S rank_prob(int rank, const ThrowModel<S>& model) {
  switch (model.kind) {
    case ModelKind::BoundedGeometric:
      return (S(1) - model.q) * ipow(model.q, rank) / (S(1) - ipow(model.q, model.ell()));
    case ModelKind::BoundedUniform:
      return S(1) / S(model.ell());
    case ModelKind::UnboundedGeometric:
      return (S(1) - model.q) * ipow(model.q, rank);
  }
  return S(0);
}

template <Scalar S>
S normalizer(const ThrowModel<S>& model) {
  switch (model.kind) {
    case ModelKind::BoundedGeometric:
      return normalizing_Z<S>(model.m, model.n, model.q);
    case ModelKind::BoundedUniform: {
      S sum(0);
      for (const auto& b : enumerate_states(model.m, model.n)) {
        sum += stationary_weight(b, model);
      }
      return sum;
    }
    case ModelKind::UnboundedGeometric:
      return ipow(model.q, binom2(model.n)) / q_pochhammer(model.n, model.q);
  }
  return S(1);
}

}  // namespace

template <Scalar S>
S throw_prob(const JugglerState& after_shift, Height target, const ThrowModel<S>& model) {
  check_after_shift(after_shift, model);
  if (target < 0 || after_shift.contains(target) || (model.bounded() && target > model.m - 1)) {
    return S(0);
  }
  return rank_prob(vacancy_rank(after_shift, target), model);
}

template <Scalar S>
DistVector<S, Height> throw_pmf(const JugglerState& after_shift, const ThrowModel<S>& model,
                                Height ceiling) {
  check_after_shift(after_shift, model);
  DistVector<S, Height> d;
  const Height limit = model.bounded() ? model.m : ceiling;
  int rank = 0;
  for (Height h = 0; h < limit; ++h) {
    if (after_shift.contains(h)) {
      continue;
    }
    d.support.push_back(h);
    d.prob.push_back(rank_prob(rank, model));
    ++rank;
  }
  if (!model.bounded()) {
    // P(xi >= rank) for the untruncated geometric index
    d.tail = ipow(model.q, rank);
  }
  return d;
}

template <Scalar S>
DistVector<S, JugglerState> step_kernel_row(const JugglerState& b, const ThrowModel<S>& model,
                                            Height ceiling) {
  model.validate_state(b);
  if (!b.contains(0)) {
    return DistVector<S, JugglerState>::point_mass(b.shifted(-1));
  }
  const JugglerState rest = b.without(0).shifted(-1);
  const auto pmf = throw_pmf(rest, model, ceiling);
  // X* u {eta} is not lexicographically monotone in eta; from_atoms sorts.
  std::vector<std::pair<JugglerState, S>> atoms;
  atoms.reserve(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    atoms.emplace_back(rest.with(pmf.support[i]), pmf.prob[i]);
  }
  return DistVector<S, JugglerState>::from_atoms(std::move(atoms), pmf.tail);
}

template <Scalar S>
S stationary_weight(const JugglerState& b, const ThrowModel<S>& model) {
  model.validate_state(b);
  S w(1);
  for (Height x : b.heights()) {
    switch (model.kind) {
      case ModelKind::BoundedGeometric:
        w *= q_int(1 + vacancies_above(b, x, model.m), model.q) * ipow(model.q, x);
        break;
      case ModelKind::BoundedUniform:
        w *= S(1 + vacancies_above(b, x, model.m));
        break;
      case ModelKind::UnboundedGeometric:
        w *= ipow(model.q, x);
        break;
    }
  }
  return w;
}

template <Scalar S>
S stationary_prob(const JugglerState& b, const ThrowModel<S>& model) {
  return stationary_weight(b, model) / normalizer(model);
}

template <Scalar S>
DistVector<S, JugglerState> stationary_distribution(const ThrowModel<S>& model) {
  if (!model.bounded()) {
    throw std::invalid_argument("stationary_distribution: state space must be finite");
  }
  DistVector<S, JugglerState> d;
  d.support = enumerate_states(model.m, model.n);
  d.prob.reserve(d.support.size());
  S z(0);
  for (const auto& b : d.support) {
    d.prob.push_back(stationary_weight(b, model));
    z += d.prob.back();
  }
  if (model.kind == ModelKind::BoundedGeometric) {
    z = normalizer(model);
  }
  for (S& p : d.prob) {
    p /= z;
  }
  return d;
}

template <Scalar S>
ClosedFormStats<S> closed_form_stats(int m, int n, const S& q) {
  check_geometric_params<S>(m, n, q);
  if (n < 1) {
    throw std::invalid_argument("closed_form_stats: require n >= 1");
  }
  const S z = normalizing_Z<S>(m, n, q);
  const S z_prev = normalizing_Z<S>(m - 1, n - 1, q);
  const S ell_q = q_int(m - n + 1, q);
  ClosedFormStats<S> out;
  out.ground = ipow(ell_q, n) * ipow(q, binom2(n)) / z;
  out.top = ipow(q, static_cast<long long>(n) * m - binom2(n + 1)) / z;
  out.throw_fraction_paper = z_prev / z * ell_q;
  out.throw_fraction = ipow(q, n - 1) * out.throw_fraction_paper;
  return out;
}

template <Scalar S>
S balance_residual(const JugglerState& b, const StateFunction<S>& pi, const ThrowModel<S>& model) {
  model.validate_state(b);
  S rhs(0);
  const JugglerState raised = b.shifted(1);
  if (model.admits(raised)) {
    rhs += pi(raised);
  }
  for (Height h : b.heights()) {
    const JugglerState others = b.without(h);
    const JugglerState pred = others.shifted(1).with(0);
    if (model.admits(pred)) {
      rhs += pi(pred) * throw_prob(others, h, model);
    }
  }
  return pi(b) - rhs;
}

#define JEPQ_INSTANTIATE(S)                                                                     \
  template struct ThrowModel<S>;                                                                \
  template ThrowModel<S> convert_model<S>(const ThrowModel<Rational>&);                         \
  template DistVector<S, Height> truncated_geometric_pmf<S>(int, const S&);                     \
  template DistVector<S, Height> geometric_pmf<S>(const S&, Height);                            \
  template S throw_prob<S>(const JugglerState&, Height, const ThrowModel<S>&);                  \
  template DistVector<S, Height> throw_pmf<S>(const JugglerState&, const ThrowModel<S>&, Height); \
  template DistVector<S, JugglerState> step_kernel_row<S>(const JugglerState&,                  \
                                                          const ThrowModel<S>&, Height);        \
  template S stationary_weight<S>(const JugglerState&, const ThrowModel<S>&);                   \
  template S stationary_prob<S>(const JugglerState&, const ThrowModel<S>&);                     \
  template DistVector<S, JugglerState> stationary_distribution<S>(const ThrowModel<S>&);        \
  template ClosedFormStats<S> closed_form_stats<S>(int, int, const S&);                         \
  template S balance_residual<S>(const JugglerState&, const StateFunction<S>&,                  \
                                 const ThrowModel<S>&);

JEPQ_INSTANTIATE(Rational)
JEPQ_INSTANTIATE(double)

#undef JEPQ_INSTANTIATE

}  // namespace jepq
