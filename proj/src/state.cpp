#include "jepq/state.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace jepq {

JugglerState::JugglerState(std::vector<Height> heights) : heights_(std::move(heights)) {
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    if (heights_[i] < 0) {
      throw std::invalid_argument("JugglerState: negative height");
    }
    if (i > 0 && heights_[i - 1] >= heights_[i]) {
      throw std::invalid_argument("JugglerState: heights must be strictly increasing");
    }
  }
}

JugglerState JugglerState::ground(int n) {
  std::vector<Height> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    h[i] = i;
  }
  return JugglerState(std::move(h));
}

JugglerState JugglerState::top(int m, int n) { return ground(n).shifted(m - n); }

JugglerState JugglerState::parse(std::string_view text) {
  std::vector<Height> h;
  if (text.empty()) {
    return {};
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dash = text.find('-', pos);
    if (dash == std::string_view::npos) {
      dash = text.size();
    }
    std::string_view token = text.substr(pos, dash - pos);
    Height value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw std::invalid_argument("JugglerState::parse: bad token '" + std::string(token) + "'");
    }
    h.push_back(value);
    pos = dash + 1;
  }
  return JugglerState(std::move(h));
}

bool JugglerState::contains(Height h) const {
  return std::binary_search(heights_.begin(), heights_.end(), h);
}

JugglerState JugglerState::shifted(Height delta) const {
  JugglerState out = *this;
  for (Height& h : out.heights_) {
    h += delta;
    if (h < 0) {
      throw std::invalid_argument("JugglerState::shifted: height would become negative");
    }
  }
  return out;
}

JugglerState JugglerState::without(Height h) const {
  JugglerState out = *this;
  auto it = std::lower_bound(out.heights_.begin(), out.heights_.end(), h);
  if (it == out.heights_.end() || *it != h) {
    throw std::invalid_argument("JugglerState::without: height not present");
  }
  out.heights_.erase(it);
  return out;
}

JugglerState JugglerState::with(Height h) const {
  if (h < 0) {
    throw std::invalid_argument("JugglerState::with: negative height");
  }
  JugglerState out = *this;
  auto it = std::lower_bound(out.heights_.begin(), out.heights_.end(), h);
  if (it != out.heights_.end() && *it == h) {
    throw std::invalid_argument("JugglerState::with: collision at height " + std::to_string(h));
  }
  out.heights_.insert(it, h);
  return out;
}

std::string JugglerState::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    if (i > 0) {
      s += '-';
    }
    s += std::to_string(heights_[i]);
  }
  return s;
}

std::vector<JugglerState> enumerate_states(int m, int n) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("enumerate_states: require 0 <= n <= m");
  }
  std::vector<JugglerState> out;
  std::vector<Height> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    h[i] = i;
  }
  while (true) {
    out.emplace_back(h);
    // advance to the next combination in lexicographic order
    int i = n - 1;
    while (i >= 0 && h[i] == m - n + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++h[i];
    for (int j = i + 1; j < n; ++j) {
      h[j] = h[j - 1] + 1;
    }
  }
  return out;
}

std::size_t state_count(int m, int n) {
  if (n < 0 || m < n) {
    return 0;
  }
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  // binom(m, k) built incrementally stays integral at each step.
  unsigned __int128 c = 1;
  const int k = std::min(n, m - n);
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(m - k + i) / static_cast<unsigned>(i);
    if (c > kMax) {
      return kMax;
    }
  }
  return static_cast<std::size_t>(c);
}

Height theta(const JugglerState& excluded, Height x) {
  if (x < 0) {
    throw std::invalid_argument("theta: negative argument");
  }
  Height y = x;
  for (Height a : excluded.heights()) {
    if (a <= y) {
      ++y;
    } else {
      break;
    }
  }
  return y;
}

Height vacancy_rank(const JugglerState& excluded, Height h) {
  if (excluded.contains(h)) {
    throw std::invalid_argument("vacancy_rank: height is occupied");
  }
  auto hs = excluded.heights();
  auto below = std::lower_bound(hs.begin(), hs.end(), h) - hs.begin();
  return h - static_cast<Height>(below);
}

int vacancies_above(const JugglerState& b, Height x, int m) {
  auto hs = b.heights();
  auto first = std::lower_bound(hs.begin(), hs.end(), x);
  auto last = std::lower_bound(hs.begin(), hs.end(), m);
  const int occupied = static_cast<int>(last - first);
  return std::max(0, m - x) - occupied;
}

}  // namespace jepq
