#include "jepq/rook.hpp"

#include <algorithm>
#include <stdexcept>

#include "jepq/qcomb.hpp"

namespace jepq {

RookConfig::RookConfig(int m, std::vector<Cell> rooks) : m_(m), rooks_(std::move(rooks)) {
  if (m_ < 0) {
    throw std::invalid_argument("RookConfig: negative m");
  }
  std::sort(rooks_.begin(), rooks_.end());
  const StaircaseBoard board{m_};
  std::vector<bool> row_used(static_cast<std::size_t>(m_) + 1, false);
  std::vector<bool> col_used(static_cast<std::size_t>(m_) + 1, false);
  for (const Cell& c : rooks_) {
    if (!board.contains(c)) {
      throw std::invalid_argument("RookConfig: cell (" + std::to_string(c.row) + "," +
                                  std::to_string(c.col) + ") is off the board");
    }
    if (row_used[c.row] || col_used[c.col]) {
      throw std::invalid_argument("RookConfig: attacking rooks");
    }
    row_used[c.row] = true;
    col_used[c.col] = true;
  }
}

JugglerState RookConfig::rows() const {
  std::vector<Height> h;
  h.reserve(rooks_.size());
  for (const Cell& c : rooks_) {
    h.push_back(c.row);
  }
  return JugglerState(std::move(h));
}

bool RookConfig::has_rook_in_row(int row) const {
  return std::any_of(rooks_.begin(), rooks_.end(), [row](const Cell& c) { return c.row == row; });
}

std::string RookConfig::to_string() const {
  if (rooks_.empty()) {
    return "()";
  }
  std::string s;
  for (const Cell& c : rooks_) {
    if (!s.empty()) {
      s += ' ';
    }
    s += "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
  }
  return s;
}

namespace {

// Places rooks in the given rows, highest row first, into unused columns.
void place_rows(int m, std::span<const int> rows, std::vector<bool>& col_used,
                std::vector<Cell>& current, std::vector<RookConfig>& out) {
  if (rows.empty()) {
    out.emplace_back(m, current);
    return;
  }
  const int r = rows.front();
  for (int c = 0; c + r <= m - 1; ++c) {
    if (col_used[c]) {
      continue;
    }
    col_used[c] = true;
    current.push_back({r, c});
    place_rows(m, rows.subspan(1), col_used, current, out);
    current.pop_back();
    col_used[c] = false;
  }
}

std::vector<RookConfig> configs_on_rows(int m, const JugglerState& b) {
  std::vector<int> rows(b.heights().rbegin(), b.heights().rend());
  std::vector<bool> col_used(static_cast<std::size_t>(m) + 1, false);
  std::vector<Cell> current;
  std::vector<RookConfig> out;
  place_rows(m, rows, col_used, current, out);
  return out;
}

}  // namespace

std::vector<RookConfig> enumerate_configs(int m, int n) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("enumerate_configs: require 0 <= n <= m");
  }
  std::vector<RookConfig> out;
  for (const auto& b : enumerate_states(m, n)) {
    auto part = configs_on_rows(m, b);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int circ(const RookConfig& config) {
  const int m = config.m();
  // column_rook[c] = row of the rook in column c, or -1; cells below it are disabled.
  std::vector<int> column_rook(static_cast<std::size_t>(m) + 1, -1);
  for (const Cell& rook : config.rooks()) {
    column_rook[rook.col] = rook.row;
  }
  int count = 0;
  for (const Cell& rook : config.rooks()) {
    for (int c = rook.col + 1; rook.row + c <= m - 1; ++c) {
      if (column_rook[c] > rook.row) {
        continue;  // below a rook in column c
      }
      ++count;
    }
  }
  return count;
}

std::vector<RookConfig> extensions(const JugglerState& b, int m) {
  if (b.max() > m - 1) {
    throw std::invalid_argument("extensions: state {" + b.to_string() +
                                "} exceeds height m-1 = " + std::to_string(m - 1));
  }
  auto out = configs_on_rows(m, b);
  std::sort(out.begin(), out.end());
  return out;
}

RookConfig extended_ground(int m, int n) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("extended_ground: require 0 <= n <= m");
  }
  std::vector<Cell> cells;
  for (int r = 0; r < n; ++r) {
    cells.push_back({r, n - 1 - r});
  }
  return RookConfig(m, std::move(cells));
}

namespace {

std::vector<Cell> drifted_without_bottom(const RookConfig& config) {
  std::vector<Cell> out;
  for (const Cell& c : config.rooks()) {
    if (c.row > 0) {
      out.push_back({c.row - 1, c.col + 1});
    }
  }
  return out;
}

// Free rows of column 0 after the drift, listed top-down.
std::vector<int> free_rows_top_down(int m, const std::vector<Cell>& cells) {
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (const Cell& c : cells) {
    used[c.row] = true;
  }
  std::vector<int> out;
  for (int r = m - 1; r >= 0; --r) {
    if (!used[r]) {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

RookConfig lowest_throw_step(const RookConfig& config) {
  auto cells = drifted_without_bottom(config);
  if (config.has_rook_in_row(0)) {
    cells.push_back({free_rows_top_down(config.m(), cells).back(), 0});
  }
  return RookConfig(config.m(), std::move(cells));
}

template <Scalar S>
DistVector<S, RookConfig> extended_kernel_row(const RookConfig& config, const S& q) {
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("extended_kernel_row: require 0 < q < 1");
  }
  const int m = config.m();
  auto cells = drifted_without_bottom(config);
  if (!config.has_rook_in_row(0)) {
    return DistVector<S, RookConfig>::point_mass(RookConfig(m, std::move(cells)));
  }
  const int n = static_cast<int>(config.size());
  const S inv_q = S(1) / q;
  const S denom = q_int(m - n + 1, inv_q);
  const auto targets = free_rows_top_down(m, cells);
  std::vector<std::pair<RookConfig, S>> atoms;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    auto next = cells;
    next.push_back({targets[j], 0});
    atoms.emplace_back(RookConfig(m, std::move(next)),
                       ipow(q, -static_cast<long long>(j)) / denom);
  }
  return DistVector<S, RookConfig>::from_atoms(std::move(atoms));
}

template <Scalar S>
S extended_weight(const RookConfig& config, const S& q) {
  return ipow(q, -static_cast<long long>(circ(config)));
}

template <Scalar S>
S extended_normalizer(int m, int n, const S& q) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("extended_normalizer: require 0 <= n <= m");
  }
  return gould_stirling(m + 1, m - n + 1, S(S(1) / q));
}

#define JEPQ_INSTANTIATE(S)                                                                 \
  template DistVector<S, RookConfig> extended_kernel_row<S>(const RookConfig&, const S&); \
  template S extended_weight<S>(const RookConfig&, const S&);                              \
  template S extended_normalizer<S>(int, int, const S&);

JEPQ_INSTANTIATE(Rational)
JEPQ_INSTANTIATE(double)

#undef JEPQ_INSTANTIATE

}  // namespace jepq
