#pragma once

#include "fisplit/morphism.hpp"

#include <string>
#include <vector>

namespace fisplit {

/// A subgroup of `ambient`, stored as the lattice L in Z^n generated by its
/// generators together with the relation vectors d_j e_j. The Hermite basis of
/// L is unique, so two generating sets of the same subgroup compare equal.
class Subgroup {
 public:
  Subgroup() = default;

  /// `gens` holds generators as columns in ambient coordinates.
  Subgroup(FgAbGroup ambient, const IntMatrix& gens) : ambient_(std::move(ambient)) {
    const std::size_t n = ambient_.size();
    if (gens.rows() != n && !(gens.cols() == 0))
      throw ObjectMismatch("generator length does not match " + ambient_.to_string());
    std::size_t rel = 0;
    for (const Int& d : ambient_.factors())
      if (d != 0) ++rel;
    IntMatrix rows(gens.cols() + rel, n);
    for (std::size_t c = 0; c < gens.cols(); ++c)
      for (std::size_t i = 0; i < n; ++i) rows(c, i) = gens(i, c);
    std::size_t r = gens.cols();
    for (std::size_t i = 0; i < n; ++i)
      if (ambient_.factor(i) != 0) rows(r++, i) = ambient_.factor(i);
    basis_ = hermite_rows(std::move(rows));
    build_object();
  }

  static Subgroup trivial(const FgAbGroup& m) { return Subgroup(m, IntMatrix(m.size(), 0)); }
  static Subgroup whole(const FgAbGroup& m) { return Subgroup(m, IntMatrix::identity(m.size())); }
  static Subgroup generated_by(const FgAbGroup& m, const std::vector<IntVector>& elements) {
    IntMatrix g(m.size(), elements.size());
    for (std::size_t c = 0; c < elements.size(); ++c) g.set_col(c, elements[c]);
    return Subgroup(m, g);
  }

  const FgAbGroup& ambient() const { return ambient_; }
  /// Hermite basis of the lattice, one basis vector per row.
  const IntMatrix& lattice_basis() const { return basis_; }
  /// The same basis as columns.
  IntMatrix canonical() const { return basis_.transpose(); }

  /// The subgroup as an abstract canonical group.
  const FgAbGroup& object() const { return object_; }
  /// Mono object() -> ambient() with image this subgroup.
  const Morphism& inclusion() const { return inclusion_; }

  /// Images of the canonical generators of object(): a minimal generating set.
  std::vector<IntVector> generators() const {
    std::vector<IntVector> g;
    for (std::size_t j = 0; j < inclusion_.matrix().cols(); ++j) g.push_back(inclusion_.matrix().col(j));
    return g;
  }

  bool contains(std::span<const Int> x) const {
    if (x.size() != ambient_.size()) throw ObjectMismatch("element does not belong to " + ambient_.to_string());
    return hermite_coordinates(basis_, x).has_value();
  }

  /// Coordinates of a member in object(); throws when x is not a member.
  IntVector object_coordinates(std::span<const Int> x) const {
    auto c = hermite_coordinates(basis_, x);
    if (!c) throw AlgebraError("element is not in the subgroup");
    IntVector y = to_object_ * std::span<const Int>(*c);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = reduce_mod(y[i], object_.factor(i));
    return y;
  }

  bool contains(const Subgroup& other) const {
    check_same_ambient(other);
    for (std::size_t r = 0; r < other.basis_.rows(); ++r)
      if (!contains(other.basis_.row(r))) return false;
    return true;
  }

  bool is_trivial() const { return object_.is_trivial(); }
  bool is_whole() const { return basis_ == IntMatrix::identity(ambient_.size()); }
  std::optional<Int> order() const { return object_.order(); }

  void check_same_ambient(const Subgroup& other) const {
    if (!(ambient_ == other.ambient_)) throw ObjectMismatch("subgroups live in different groups");
  }

  std::string key() const { return ambient_.to_comma_string() + "|" + basis_.to_string(); }

  std::string to_string() const {
    std::string s = "<";
    auto g = generators();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (i) s += ", ";
      s += "(";
      for (std::size_t j = 0; j < g[i].size(); ++j) s += (j ? "," : "") + g[i][j].get_str();
      s += ")";
    }
    return s + ">";
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  void build_object() {
    // relations of the ambient, written in the Hermite basis of L
    const std::size_t r = basis_.rows();
    std::vector<IntVector> rels;
    for (std::size_t i = 0; i < ambient_.size(); ++i) {
      if (ambient_.factor(i) == 0) continue;
      IntVector v(ambient_.size());
      v[i] = ambient_.factor(i);
      rels.push_back(*hermite_coordinates(basis_, v));
    }
    IntMatrix R(r, rels.size());
    for (std::size_t c = 0; c < rels.size(); ++c) R.set_col(c, rels[c]);
    CanonicalPresentation p = canonical_group(R, r);
    object_ = p.group;
    to_object_ = p.to_canonical;
    inclusion_ = Morphism(object_, ambient_, basis_.transpose() * p.from_canonical);
  }

  FgAbGroup ambient_;
  IntMatrix basis_;
  FgAbGroup object_;
  IntMatrix to_object_;
  Morphism inclusion_;
};

}  // namespace fisplit
