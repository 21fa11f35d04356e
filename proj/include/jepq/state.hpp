#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jepq {

using Height = int;

/// A set of particle heights, kept as a strictly increasing vector.
/// Ordering is lexicographic on the sorted heights, which is the canonical
/// state order used for matrices and reports.
class JugglerState {
 public:
  JugglerState() = default;
  /// Throws std::invalid_argument unless heights are nonnegative and strictly increasing.
  explicit JugglerState(std::vector<Height> heights);

  /// {0, 1, ..., n-1}
  static JugglerState ground(int n);
  /// {m-n, ..., m-1}
  static JugglerState top(int m, int n);
  /// Parses the hyphen-joined form produced by to_string ("0-2-3"; "" is empty).
  static JugglerState parse(std::string_view text);

  [[nodiscard]] std::span<const Height> heights() const { return heights_; }
  [[nodiscard]] std::size_t size() const { return heights_.size(); }
  [[nodiscard]] bool empty() const { return heights_.empty(); }
  [[nodiscard]] bool contains(Height h) const;
  /// Largest height, or -1 for the empty state.
  [[nodiscard]] Height max() const { return heights_.empty() ? -1 : heights_.back(); }

  /// Every height moved by delta; throws if a height would become negative.
  [[nodiscard]] JugglerState shifted(Height delta) const;
  [[nodiscard]] JugglerState without(Height h) const;
  [[nodiscard]] JugglerState with(Height h) const;

  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const JugglerState&, const JugglerState&) = default;
  friend bool operator==(const JugglerState&, const JugglerState&) = default;

 private:
  std::vector<Height> heights_;
};

/// All n-subsets of {0..m-1} in lexicographic order.
std::vector<JugglerState> enumerate_states(int m, int n);

/// Number of n-subsets of {0..m-1}; saturates at SIZE_MAX.
std::size_t state_count(int m, int n);

/// The (x+1)-th smallest element of Z_+ \ excluded.
Height theta(const JugglerState& excluded, Height x);

/// Position of h among Z_+ \ excluded (inverse of theta); h must not be excluded.
Height vacancy_rank(const JugglerState& excluded, Height h);

/// v_B(x) = |{x, ..., m-1} \ B|
int vacancies_above(const JugglerState& b, Height x, int m);

}  // namespace jepq
