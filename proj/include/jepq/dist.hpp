#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jepq/scalar.hpp"

namespace jepq {

/// A finitely supported distribution over ordered keys, plus an optional
/// mass `tail` sitting on keys that were not materialized (used for the
/// countable unbounded laws). Support is kept sorted and duplicate free.
template <Scalar S, class Key>
struct DistVector {
  std::vector<Key> support;
  std::vector<S> prob;
  S tail{0};

  [[nodiscard]] std::size_t size() const { return support.size(); }

  [[nodiscard]] S total() const {
    S sum = tail;
    for (const S& p : prob) {
      sum += p;
    }
    return sum;
  }

  /// Probability of key (zero when not in the support).
  [[nodiscard]] S at(const Key& key) const {
    auto it = std::lower_bound(support.begin(), support.end(), key);
    if (it == support.end() || *it != key) {
      return S(0);
    }
    return prob[static_cast<std::size_t>(it - support.begin())];
  }

  /// Builds a distribution from unsorted atoms, merging repeated keys.
  static DistVector from_atoms(std::vector<std::pair<Key, S>> atoms, S tail_mass = S(0)) {
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    DistVector d;
    d.tail = tail_mass;
    for (auto& [key, p] : atoms) {
      if (!d.support.empty() && d.support.back() == key) {
        d.prob.back() += p;
      } else {
        d.support.push_back(std::move(key));
        d.prob.push_back(std::move(p));
      }
    }
    return d;
  }

  static DistVector point_mass(Key key) {
    DistVector d;
    d.support.push_back(std::move(key));
    d.prob.push_back(S(1));
    return d;
  }
};

/// Half the l1 distance. A tail is treated as mass on keys where the other
/// distribution vanishes, so the value is exact when at most one side has a
/// tail and an upper bound otherwise. Throws on negative entries.
template <Scalar S, class Key>
S total_variation(const DistVector<S, Key>& mu, const DistVector<S, Key>& nu) {
  auto check = [](const DistVector<S, Key>& d) {
    if (d.tail < 0) {
      throw std::invalid_argument("total_variation: negative tail mass");
    }
    for (const S& p : d.prob) {
      if (p < 0) {
        throw std::invalid_argument("total_variation: negative probability");
      }
    }
  };
  check(mu);
  check(nu);
  S sum = mu.tail + nu.tail;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < mu.size() || j < nu.size()) {
    if (j == nu.size() || (i < mu.size() && mu.support[i] < nu.support[j])) {
      sum += mu.prob[i++];
    } else if (i == mu.size() || nu.support[j] < mu.support[i]) {
      sum += nu.prob[j++];
    } else {
      sum += abs_value<S>(mu.prob[i++] - nu.prob[j++]);
    }
  }
  return sum / 2;
}

}  // namespace jepq
