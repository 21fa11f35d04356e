#pragma once

// Test-only oracles. Everything here is written from the definitions and
// shares no code with the library beyond the Rational typedef.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "jepq/scalar.hpp"

namespace oracle {

using jepq::Rational;

// Small seeded generator for property tests (xorshift64*).
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 2685821657736338717ULL;
  }
  // uniform in [lo, hi]
  int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rational(int max_den = 9) {
    const int den = range(2, max_den);
    Rational r(range(1, den - 1), den);
    r.canonicalize();
    return r;
  }
  // random n-subset of {0..m-1}, sorted
  std::vector<int> subset(int m, int n) {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < n; ++i) {
      std::swap(all[i], all[range(i, m - 1)]);
    }
    all.resize(n);
    std::sort(all.begin(), all.end());
    return all;
  }

 private:
  std::uint64_t s_;
};

inline Rational power(const Rational& x, long long e) {
  Rational r(1);
  const Rational b = e >= 0 ? x : Rational(1 / x);
  for (long long i = 0; i < (e >= 0 ? e : -e); ++i) {
    r *= b;
  }
  return r;
}

// (1 - q^k)/(1 - q), or k at q = 1
inline Rational qint(long long k, const Rational& q) {
  if (q == 1) {
    return Rational(static_cast<long>(k));
  }
  return (1 - power(q, k)) / (1 - q);
}

inline long long choose(long long a, long long b) {
  if (b < 0 || b > a) {
    return 0;
  }
  long long r = 1;
  for (long long i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;
  }
  return r;
}

// Stirling numbers of the second kind by inclusion-exclusion.
inline long stirling2(int a, int b) {
  if (a == 0 && b == 0) {
    return 1;
  }
  if (b == 0) {
    return 0;
  }
  long long sum = 0;
  long long fact = 1;
  for (int j = 0; j <= b; ++j) {
    long long p = 1;
    for (int i = 0; i < a; ++i) {
      p *= (b - j);
    }
    sum += (j % 2 == 0 ? 1 : -1) * choose(b, j) * p;
  }
  for (int i = 2; i <= b; ++i) {
    fact *= i;
  }
  return sum / fact;
}

// Gould q-Stirling G_q[a,b] = h_{a-b}([1]_q, ..., [b]_q), summed over multisets.
inline Rational gould(int a, int b, const Rational& q) {
  if (a < b || b < 0) {
    return Rational(0);
  }
  if (b == 0) {
    return Rational(a == 0 ? 1 : 0);
  }
  const int d = a - b;
  Rational total(0);
  std::vector<int> idx(d, 1);
  while (true) {
    Rational term(1);
    for (int i : idx) {
      term *= qint(i, q);
    }
    total += term;
    int k = d - 1;
    while (k >= 0 && idx[k] == b) {
      --k;
    }
    if (k < 0) {
      break;
    }
    ++idx[k];
    for (int j = k + 1; j < d; ++j) {
      idx[j] = idx[k];
    }
  }
  return total;
}

// All n-subsets of {0..m-1} as sorted vectors, lexicographic.
inline std::vector<std::vector<int>> subsets(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int h = start; h < m; ++h) {
      cur.push_back(h);
      self(self, h + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Number of empty heights strictly above x and below m.
inline int empty_above(const std::vector<int>& b, int x, int m) {
  int count = 0;
  for (int y = x + 1; y < m; ++y) {
    count += std::find(b.begin(), b.end(), y) == b.end() ? 1 : 0;
  }
  return count;
}

inline Rational product_weight(const std::vector<int>& b, int m, const Rational& q) {
  Rational w(1);
  for (int x : b) {
    w *= qint(1 + empty_above(b, x, m), q) * power(q, x);
  }
  return w;
}

inline Rational uniform_weight(const std::vector<int>& b, int m) {
  Rational w(1);
  for (int x : b) {
    w *= 1 + empty_above(b, x, m);
  }
  return w;
}

// One step of the bounded chain read straight off the dynamics: drop every
// particle by one; if a particle sat at 0, rethrow it to the k-th vacant
// height of {0..m-1} (counting up from 0) with probability p_k.
using Kernel = std::map<std::vector<int>, std::map<std::vector<int>, Rational>>;

inline Kernel kernel(int m, int n, const std::vector<Rational>& rank_probs) {
  Kernel k;
  for (const auto& b : subsets(m, n)) {
    auto& row = k[b];
    std::vector<int> fallen;
    bool thrown = false;
    for (int x : b) {
      if (x == 0) {
        thrown = true;
      } else {
        fallen.push_back(x - 1);
      }
    }
    if (!thrown) {
      row[fallen] += 1;
      continue;
    }
    int rank = 0;
    for (int h = 0; h < m; ++h) {
      if (std::find(fallen.begin(), fallen.end(), h) != fallen.end()) {
        continue;
      }
      auto next = fallen;
      next.push_back(h);
      std::sort(next.begin(), next.end());
      row[next] += rank_probs[rank++];
    }
  }
  return k;
}

inline std::vector<Rational> truncated_geometric(int ell, const Rational& q) {
  std::vector<Rational> p;
  for (int x = 0; x < ell; ++x) {
    p.push_back(power(q, x) * (1 - q) / (1 - power(q, ell)));
  }
  return p;
}

// Largest |(pi K)(B) - pi(B)| over all states.
inline Rational stationarity_defect(const Kernel& k, const std::map<std::vector<int>, Rational>& pi) {
  std::map<std::vector<int>, Rational> out;
  for (const auto& [from, row] : k) {
    for (const auto& [to, p] : row) {
      out[to] += pi.at(from) * p;
    }
  }
  Rational worst(0);
  for (const auto& [b, v] : pi) {
    worst = std::max(worst, Rational(abs(out[b] - v)));
  }
  return worst;
}

// Brute force over all subsets of staircase cells (r + c <= m - 1) with
// distinct rows and columns; returns circ values computed from the definition.
inline std::vector<std::pair<std::vector<std::pair<int, int>>, int>> rook_placements(int m, int n) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; r + c <= m - 1; ++c) {
      cells.emplace_back(r, c);
    }
  }
  std::vector<std::pair<std::vector<std::pair<int, int>>, int>> out;
  const int total = static_cast<int>(cells.size());
  std::vector<std::pair<int, int>> cur;
  auto rec = [&](auto& self, int start) -> void {
    if (static_cast<int>(cur.size()) == n) {
      std::set<std::pair<int, int>> disabled;
      for (auto [r, c] : cur) {
        for (int cc = 0; cc < c; ++cc) {
          disabled.insert({r, cc});
        }
        for (int rr = 0; rr < r; ++rr) {
          disabled.insert({rr, c});
        }
      }
      int circ = 0;
      for (auto [r, c] : cells) {
        const bool rook_row = std::any_of(cur.begin(), cur.end(), [r](auto p) { return p.first == r; });
        const bool is_rook = std::find(cur.begin(), cur.end(), std::pair{r, c}) != cur.end();
        if (rook_row && !is_rook && disabled.count({r, c}) == 0) {
          ++circ;
        }
      }
      out.emplace_back(cur, circ);
      return;
    }
    for (int i = start; i < total; ++i) {
      const auto [r, c] = cells[i];
      const bool clash = std::any_of(cur.begin(), cur.end(),
                                     [r, c](auto p) { return p.first == r || p.second == c; });
      if (clash) {
        continue;
      }
      cur.push_back(cells[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace oracle
