#pragma once

// Non-attacking rook placements on the staircase board S_{m+1}.
//
// A cell (row, col) records (remaining flight time, elapsed flight time) of a
// particle. The board has columns 0..m; column c holds rows 0..m-1-c, so the
// last column is void and (row, col) is a cell iff row + col <= m-1.
// Between throws rooks drift south-east, (r, c) -> (r-1, c+1); a rook
// leaving row 0 is rethrown into column 0.

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "jepq/dist.hpp"
#include "jepq/scalar.hpp"
#include "jepq/state.hpp"

namespace jepq {

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct StaircaseBoard {
  int m = 0;

  [[nodiscard]] bool contains(Cell cell) const {
    return cell.row >= 0 && cell.col >= 0 && cell.row + cell.col <= m - 1;
  }
  [[nodiscard]] long long cell_count() const { return static_cast<long long>(m) * (m + 1) / 2; }
};

class RookConfig {
 public:
  RookConfig() = default;
  /// Throws std::invalid_argument on off-board cells or attacking rooks.
  RookConfig(int m, std::vector<Cell> rooks);

  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] StaircaseBoard board() const { return {m_}; }
  /// Sorted by (row, col).
  [[nodiscard]] std::span<const Cell> rooks() const { return rooks_; }
  [[nodiscard]] std::size_t size() const { return rooks_.size(); }
  /// Projection onto occupied rows, i.e. the underlying juggler state.
  [[nodiscard]] JugglerState rows() const;
  [[nodiscard]] bool has_rook_in_row(int row) const;

  /// "(r,c) (r,c) ..." in storage order; "()" when empty.
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const RookConfig&, const RookConfig&) = default;
  friend bool operator==(const RookConfig&, const RookConfig&) = default;

 private:
  int m_ = 0;
  std::vector<Cell> rooks_;
};

/// C_n(S_{m+1}) sorted ascending. |C_n(S_{m+1})| = S(m+1, m+1-n).
std::vector<RookConfig> enumerate_configs(int m, int n);

/// Each rook disables every cell strictly left of it in its row and strictly
/// below it in its column; circ counts the remaining non-rook cells in rows
/// that hold a rook.
int circ(const RookConfig& config);

/// Every configuration whose occupied rows are exactly B, sorted ascending.
std::vector<RookConfig> extensions(const JugglerState& b, int m);

/// The n-diagonal {(r, n-1-r)}: fixed point of always throwing to the
/// lowest free row.
RookConfig extended_ground(int m, int n);

/// Deterministic step that throws to the lowest available row.
RookConfig lowest_throw_step(const RookConfig& config);

/// Transition law of the extended chain. A rook in row 0 is removed, the
/// rest drift, and a rook lands at (eta, 0), where the j-th free row counted
/// from the top receives probability q^{-(j-1)} / [m-n+1]_{1/q}.
template <Scalar S>
DistVector<S, RookConfig> extended_kernel_row(const RookConfig& config, const S& q);

/// q^{-circ(C)}
template <Scalar S>
S extended_weight(const RookConfig& config, const S& q);

/// G_{1/q}[m+1, m-n+1]
template <Scalar S>
S extended_normalizer(int m, int n, const S& q);

}  // namespace jepq
