#pragma once

// Objects of the category: finitely generated abelian groups in canonical
// invariant-factor form, plus the group-spec text format shared with the CLI.

#include "fisplit/intlin.hpp"

#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fisplit {

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Domain/codomain disagreement between composable arrows or subobjects.
struct ObjectMismatch : AlgebraError {
  using AlgebraError::AlgebraError;
};

/// An enumeration was asked to go beyond its configured cap.
struct CapExceeded : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct ParseError : std::invalid_argument {
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

/// Z/d_1 x ... x Z/d_k with d_i | d_{i+1}, no d_i = 1, and 0 standing for Z.
/// The divisibility convention (every integer divides 0) forces free factors last.
class FgAbGroup {
 public:
  FgAbGroup() = default;

  /// Validates an already canonical list.
  explicit FgAbGroup(std::vector<Int> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 0) throw std::invalid_argument("invariant factor must be non-negative");
      if (factors_[i] == 1) throw std::invalid_argument("invariant factor 1 is not allowed");
      if (i + 1 < factors_.size() && !divides(factors_[i], factors_[i + 1]))
        throw std::invalid_argument("invariant factors must form a divisibility chain");
    }
  }

  static FgAbGroup trivial() { return FgAbGroup{}; }
  static FgAbGroup cyclic(const Int& n) { return n == 1 ? FgAbGroup{} : FgAbGroup({n}); }
  static FgAbGroup free(std::size_t rank) { return FgAbGroup(std::vector<Int>(rank, Int(0))); }

  /// Canonical form of Z/c_1 x ... x Z/c_k for an arbitrary list of cyclic orders
  /// (1 allowed and dropped, 0 meaning Z).
  static FgAbGroup from_cyclic_orders(const std::vector<Int>& orders);

  static FgAbGroup of(std::initializer_list<long> factors) {
    std::vector<Int> f;
    for (long x : factors) f.emplace_back(x);
    return FgAbGroup(std::move(f));
  }

  const std::vector<Int>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  const Int& factor(std::size_t i) const { return factors_[i]; }
  bool is_trivial() const { return factors_.empty(); }

  std::size_t free_rank() const {
    std::size_t r = 0;
    for (const Int& d : factors_)
      if (d == 0) ++r;
    return r;
  }
  std::size_t torsion_size() const { return factors_.size() - free_rank(); }
  bool is_finite() const { return free_rank() == 0; }

  /// Group order, or nothing when infinite.
  std::optional<Int> order() const {
    if (!is_finite()) return std::nullopt;
    Int n = 1;
    for (const Int& d : factors_) n *= d;
    return n;
  }

  /// Largest invariant factor (0 for infinite groups, 1 for the trivial group).
  Int exponent() const { return factors_.empty() ? Int(1) : factors_.back(); }

  FgAbGroup torsion_part() const {
    std::vector<Int> t;
    for (const Int& d : factors_)
      if (d != 0) t.push_back(d);
    return FgAbGroup(std::move(t));
  }

  /// "Z/2 x Z/4 x Z"; the trivial group prints as "trivial".
  std::string to_string() const {
    if (factors_.empty()) return "trivial";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += " x ";
      s += factors_[i] == 0 ? std::string("Z") : "Z/" + factors_[i].get_str();
    }
    return s;
  }

  /// "2,4,0"
  std::string to_comma_string() const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += ',';
      s += factors_[i].get_str();
    }
    return s;
  }

  friend bool operator==(const FgAbGroup& a, const FgAbGroup& b) { return a.factors_ == b.factors_; }
  friend std::strong_ordering operator<=>(const FgAbGroup& a, const FgAbGroup& b) {
    if (a.factors_.size() != b.factors_.size()) return a.factors_.size() <=> b.factors_.size();
    for (std::size_t i = 0; i < a.factors_.size(); ++i) {
      int c = cmp(a.factors_[i], b.factors_[i]);
      if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

 private:
  std::vector<Int> factors_;
};

/// A canonical group presented as Z^n / (column span of the relations),
/// together with the coordinate changes in both directions.
struct CanonicalPresentation {
  FgAbGroup group;
  IntMatrix to_canonical;    // group.size() x n: old coordinates -> canonical ones
  IntMatrix from_canonical;  // n x group.size(): canonical generators in old coordinates
};

/// Cokernel of `relations` (n rows) in canonical invariant-factor form.
inline CanonicalPresentation canonical_group(const IntMatrix& relations, std::size_t generators) {
  if (relations.rows() != generators)
    throw std::invalid_argument("canonical_group: relation matrix must have one row per generator");
  const SnfDecomposition d = snf(relations);
  std::vector<Int> factors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < generators; ++i) {
    Int s = i < d.rank ? d.S(i, i) : Int(0);
    if (s == 1) continue;
    factors.push_back(s);
    kept.push_back(i);
  }
  IntMatrix to = d.U.select_rows(kept);
  for (std::size_t r = 0; r < kept.size(); ++r)
    for (std::size_t c = 0; c < to.cols(); ++c) to(r, c) = reduce_mod(to(r, c), factors[r]);
  IntMatrix from = d.U_inv.select_cols(kept);
  return CanonicalPresentation{FgAbGroup(std::move(factors)), std::move(to), std::move(from)};
}

inline FgAbGroup FgAbGroup::from_cyclic_orders(const std::vector<Int>& orders) {
  for (const Int& n : orders)
    if (n < 0) throw std::invalid_argument("cyclic order must be non-negative");
  return canonical_group(IntMatrix::diagonal(orders), orders.size()).group;
}

namespace detail {

inline std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

inline Int parse_number(std::string_view s, std::size_t& i) {
  std::size_t start = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (start == i) throw ParseError("expected a number", start);
  return Int(std::string(s.substr(start, i - start)));
}

}  // namespace detail

/// Parses `Z` | `Z/<n>` joined by `x` (whitespace-insensitive), the comma form
/// `<d1>,<d2>,...` with 0 for Z, or `trivial`. Factor 1 is rejected in both
/// forms. The result is canonicalized, so "Z/2 x Z/3" parses to Z/6.
inline FgAbGroup parse_group(std::string_view text) {
  std::size_t i = detail::skip_space(text, 0);
  if (i == text.size()) throw ParseError("empty group spec", i);
  {
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (text.substr(i, end - i) == "trivial") return FgAbGroup::trivial();
  }
  std::vector<Int> orders;
  if (std::isdigit(static_cast<unsigned char>(text[i]))) {
    while (true) {
      i = detail::skip_space(text, i);
      std::size_t at = i;
      Int n = detail::parse_number(text, i);
      if (n == 1) throw ParseError("factor 1 is not allowed", at);
      orders.push_back(n);
      i = detail::skip_space(text, i);
      if (i == text.size()) break;
      if (text[i] != ',') throw ParseError("expected ','", i);
      ++i;
    }
  } else {
    while (true) {
      i = detail::skip_space(text, i);
      if (i >= text.size() || text[i] != 'Z') throw ParseError("expected 'Z'", i);
      ++i;
      i = detail::skip_space(text, i);
      if (i < text.size() && text[i] == '/') {
        ++i;
        i = detail::skip_space(text, i);
        std::size_t at = i;
        Int n = detail::parse_number(text, i);
        if (n == 1) throw ParseError("factor 1 is not allowed", at);
        if (n == 0) throw ParseError("use 'Z' for the infinite cyclic group", at);
        orders.push_back(n);
      } else {
        orders.emplace_back(0);
      }
      i = detail::skip_space(text, i);
      if (i == text.size()) break;
      if (text[i] != 'x') throw ParseError("expected 'x'", i);
      ++i;
    }
  }
  return FgAbGroup::from_cyclic_orders(orders);
}

}  // namespace fisplit
