#pragma once

#include "fisplit/group.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fisplit {

/// A homomorphism dom -> cod. Rows of the matrix index cod factors, columns
/// dom factors; entry (i, j) is the i-th coordinate of the image of the j-th
/// generator, stored as its canonical residue modulo cod.factor(i).
class Morphism {
 public:
  Morphism() = default;

  Morphism(FgAbGroup dom, FgAbGroup cod, IntMatrix matrix)
      : dom_(std::move(dom)), cod_(std::move(cod)), m_(std::move(matrix)) {
    if (m_.rows() != cod_.size() || m_.cols() != dom_.size())
      throw ObjectMismatch("morphism matrix shape does not match " + dom_.to_string() + " -> " +
                           cod_.to_string());
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < m_.cols(); ++j) {
        Int& e = m_(i, j);
        e = reduce_mod(e, cod_.factor(i));
        // the image of a generator of order d must be killed by d
        if (!divides(cod_.factor(i), dom_.factor(j) * e))
          throw AlgebraError("ill-defined morphism " + dom_.to_string() + " -> " + cod_.to_string() +
                             ": entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }

  static Morphism zero(const FgAbGroup& dom, const FgAbGroup& cod) {
    return Morphism(dom, cod, IntMatrix(cod.size(), dom.size()));
  }
  static Morphism identity(const FgAbGroup& m) { return Morphism(m, m, IntMatrix::identity(m.size())); }
  /// Multiplication by k on m.
  static Morphism scalar(const FgAbGroup& m, const Int& k) {
    IntMatrix d(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) d(i, i) = k;
    return Morphism(m, m, std::move(d));
  }

  const FgAbGroup& dom() const { return dom_; }
  const FgAbGroup& cod() const { return cod_; }
  const IntMatrix& matrix() const { return m_; }

  bool is_zero() const { return m_.is_zero(); }

  IntVector apply(std::span<const Int> x) const {
    if (x.size() != dom_.size()) throw ObjectMismatch("element does not belong to " + dom_.to_string());
    IntVector y = m_ * x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = reduce_mod(y[i], cod_.factor(i));
    return y;
  }

  std::string to_string() const { return dom_.to_string() + " -> " + cod_.to_string() + " " + m_.to_string(); }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.m_ == b.m_;
  }

 private:
  FgAbGroup dom_, cod_;
  IntMatrix m_;
};

/// f o g
inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(g.cod() == f.dom()))
    throw ObjectMismatch("cannot compose: " + g.cod().to_string() + " != " + f.dom().to_string());
  return Morphism(g.dom(), f.cod(), f.matrix() * g.matrix());
}

inline Morphism operator+(const Morphism& f, const Morphism& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw ObjectMismatch("cannot add morphisms of different type");
  return Morphism(f.dom(), f.cod(), f.matrix() + g.matrix());
}

inline Morphism operator-(const Morphism& f) { return Morphism(f.dom(), f.cod(), -f.matrix()); }

inline Morphism operator-(const Morphism& f, const Morphism& g) { return f + (-g); }

/// Hom(dom, cod) as a direct sum of cyclic groups: every morphism is uniquely
/// sum_t c_t * basis[t] with 0 <= c_t < orders[t] (c_t unrestricted when the
/// order is 0). Each basis element has a single nonzero entry.
struct HomGroup {
  struct Generator {
    std::size_t row = 0;  // cod factor
    std::size_t col = 0;  // dom factor
    Int value;
    Int order;  // 0: infinite
  };

  FgAbGroup dom, cod;
  std::vector<Generator> generators;

  std::size_t rank() const { return generators.size(); }
  bool enumerable() const {
    for (const auto& g : generators)
      if (g.order == 0) return false;
    return true;
  }
  bool is_zero() const { return generators.empty(); }

  /// Number of morphisms, or nothing when infinite.
  std::optional<Int> size() const {
    Int n = 1;
    for (const auto& g : generators) {
      if (g.order == 0) return std::nullopt;
      n *= g.order;
    }
    return n;
  }

  Morphism basis(std::size_t t) const {
    IntMatrix m(cod.size(), dom.size());
    m(generators[t].row, generators[t].col) = generators[t].value;
    return Morphism(dom, cod, std::move(m));
  }

  std::vector<Morphism> basis() const {
    std::vector<Morphism> b;
    b.reserve(generators.size());
    for (std::size_t t = 0; t < generators.size(); ++t) b.push_back(basis(t));
    return b;
  }

  std::vector<Int> orders() const {
    std::vector<Int> o;
    for (const auto& g : generators) o.push_back(g.order);
    return o;
  }

  Morphism combine(std::span<const Int> coeffs) const {
    IntMatrix m(cod.size(), dom.size());
    for (std::size_t t = 0; t < generators.size(); ++t)
      m(generators[t].row, generators[t].col) += coeffs[t] * generators[t].value;
    return Morphism(dom, cod, std::move(m));
  }
};

/// Basis of Hom(M, N) built factor pair by factor pair:
/// Hom(Z/a, Z/b) = Z/gcd(a,b) generated by 1 -> b/gcd(a,b); Hom(Z, Z/b) = Z/b
/// generated by 1 -> 1; Hom(Z/a, Z) = 0; Hom(Z, Z) = Z generated by 1 -> 1.
inline HomGroup hom_basis(const FgAbGroup& M, const FgAbGroup& N) {
  HomGroup h{M, N, {}};
  for (std::size_t j = 0; j < M.size(); ++j)
    for (std::size_t i = 0; i < N.size(); ++i) {
      const Int& a = M.factor(j);
      const Int& b = N.factor(i);
      if (a != 0 && b != 0) {
        Int g = gcd(a, b);
        if (g == 1) continue;
        h.generators.push_back({i, j, b / g, g});
      } else if (a == 0 && b != 0) {
        h.generators.push_back({i, j, Int(1), b});
      } else if (a == 0 && b == 0) {
        h.generators.push_back({i, j, Int(1), Int(0)});
      }
    }
  return h;
}

struct Unknown {
  std::string reason;
};

inline constexpr std::uint64_t kDefaultHomBudget = 1'000'000;

/// Reason the Hom group cannot be enumerated within `budget`, if any.
inline std::optional<Unknown> hom_enumeration_blocker(const HomGroup& H, std::uint64_t budget) {
  auto n = H.size();
  if (!n) return Unknown{"Hom(" + H.dom.to_string() + ", " + H.cod.to_string() + ") is infinite"};
  if (*n > Int(std::to_string(budget)))
    return Unknown{"Hom(" + H.dom.to_string() + ", " + H.cod.to_string() + ") has " + n->get_str() +
                   " elements, over the budget of " + std::to_string(budget)};
  return std::nullopt;
}

/// Advances a mixed-radix counter (first digit fastest); false after the last value.
inline bool next_coefficients(std::vector<std::uint64_t>& c, std::span<const std::uint64_t> radix) {
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (++c[t] < radix[t]) return true;
    c[t] = 0;
  }
  return false;
}

inline std::vector<std::uint64_t> hom_radix(const HomGroup& H) {
  std::vector<std::uint64_t> r;
  for (const auto& g : H.generators) r.push_back(g.order.get_ui());
  return r;
}

/// Visits every morphism in canonical order until `fn` returns false.
/// Returns Unknown without visiting anything when the set is infinite or over budget.
inline std::optional<Unknown> for_each_hom(const HomGroup& H, std::uint64_t budget,
                                           const std::function<bool(const Morphism&)>& fn) {
  if (auto blocked = hom_enumeration_blocker(H, budget)) return blocked;
  const auto radix = hom_radix(H);
  std::vector<std::uint64_t> c(radix.size(), 0);
  std::vector<Int> coeffs(radix.size());
  do {
    for (std::size_t t = 0; t < c.size(); ++t) coeffs[t] = static_cast<unsigned long>(c[t]);
    if (!fn(H.combine(coeffs))) break;
  } while (next_coefficients(c, radix));
  return std::nullopt;
}

inline std::variant<std::vector<Morphism>, Unknown> enumerate_hom(const HomGroup& H,
                                                                  std::uint64_t budget = kDefaultHomBudget) {
  std::vector<Morphism> out;
  if (auto blocked = for_each_hom(H, budget, [&](const Morphism& f) {
        out.push_back(f);
        return true;
      }))
    return *blocked;
  return out;
}

}  // namespace fisplit
