#pragma once

// Subgroup calculus and full invariance.

#include "fisplit/category.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace fisplit {

inline Subgroup sum(const Subgroup& s, const Subgroup& t) {
  s.check_same_ambient(t);
  return Subgroup(s.ambient(), IntMatrix::hcat(s.canonical(), t.canonical()));
}

/// S meet T, computed as the image of the pullback of the two inclusions.
inline Subgroup intersect(const Subgroup& s, const Subgroup& t) {
  s.check_same_ambient(t);
  Pullback p = pullback(s.inclusion(), t.inclusion());
  return image(compose(s.inclusion(), p.pA));
}

inline const Morphism& inclusion(const Subgroup& s) { return s.inclusion(); }

/// Image of a subgroup under a morphism.
inline Subgroup image_of(const Morphism& f, const Subgroup& s) {
  if (!(f.dom() == s.ambient())) throw ObjectMismatch("image_of: subgroup is not in the domain");
  return image(compose(f, s.inclusion()));
}

/// Preimage f^{-1}(T).
inline Subgroup preimage(const Morphism& f, const Subgroup& t) {
  if (!(f.cod() == t.ambient())) throw ObjectMismatch("preimage: subgroup is not in the codomain");
  return kernel_subgroup(compose(quotient(t).epi, f));
}

inline bool is_summand(const Subgroup& s) { return is_section(s.inclusion()).has_value(); }

/// An endomorphism of the ambient moving S outside itself, if there is one.
/// Checking the additive basis of End suffices: h(S) <= S survives sums and negatives.
inline std::optional<Morphism> full_invariance_witness(const Subgroup& s) {
  const HomGroup end = hom_basis(s.ambient(), s.ambient());
  const auto gens = s.generators();
  for (std::size_t t = 0; t < end.rank(); ++t) {
    Morphism h = end.basis(t);
    for (const auto& x : gens)
      if (!s.contains(h.apply(x))) return h;
  }
  return std::nullopt;
}

inline bool is_fully_invariant(const Subgroup& s) { return !full_invariance_witness(s).has_value(); }

/// A cokernel d is fully coinvariant iff its kernel is fully invariant.
inline bool is_fully_coinvariant(const Morphism& d) {
  if (!is_epi(d)) throw std::invalid_argument("is_fully_coinvariant: morphism is not an epimorphism");
  return is_fully_invariant(kernel_subgroup(d));
}

struct NotFullyInvariant : AlgebraError {
  NotFullyInvariant(const Subgroup& s, Morphism w)
      : AlgebraError("subgroup " + s.to_string() + " of " + s.ambient().to_string() +
                     " is not fully invariant; moved by " + w.to_string()),
        witness(std::move(w)) {}
  Morphism witness;
};

/// 0 -> S -> M -> M/S -> 0, only for fully invariant S.
inline ShortExactSequence fi_ses(const Subgroup& s) {
  if (auto w = full_invariance_witness(s)) throw NotFullyInvariant(s, *w);
  return ShortExactSequence(s.inclusion(), quotient(s).epi);
}

inline constexpr std::uint64_t kDefaultSubgroupCap = 512;

/// Orders subgroups by order, then by Hermite basis.
inline bool subgroup_less(const Subgroup& a, const Subgroup& b) {
  auto oa = a.order(), ob = b.order();
  if (oa && ob && *oa != *ob) return *oa < *ob;
  return a.key() < b.key();
}

/// Every element of a finite group, first coordinate varying fastest.
inline std::vector<IntVector> all_elements(const FgAbGroup& m) {
  if (!m.is_finite()) throw CapExceeded("cannot list the elements of infinite " + m.to_string());
  std::vector<IntVector> out;
  IntVector x(m.size(), 0);
  while (true) {
    out.push_back(x);
    std::size_t t = 0;
    while (t < x.size()) {
      x[t] += 1;
      if (x[t] < m.factor(t)) break;
      x[t] = 0;
      ++t;
    }
    if (t == x.size()) return out;
  }
}

/// All subgroups of a finite group of order at most `cap`: cyclic subgroups,
/// closed under sums with cyclic subgroups, deduplicated by canonical form.
inline std::vector<Subgroup> all_subgroups(const FgAbGroup& m, std::uint64_t cap = kDefaultSubgroupCap) {
  auto order = m.order();
  if (!order) throw CapExceeded(m.to_string() + " is infinite; subgroup enumeration refused");
  if (*order > Int(std::to_string(cap)))
    throw CapExceeded(m.to_string() + " has order " + order->get_str() + ", above the subgroup cap " +
                      std::to_string(cap));
  std::map<std::string, Subgroup> seen;
  std::vector<Subgroup> cyclic;
  for (const auto& x : all_elements(m)) {
    Subgroup c = Subgroup::generated_by(m, {x});
    if (seen.emplace(c.key(), c).second) cyclic.push_back(c);
  }
  std::deque<Subgroup> queue(cyclic.begin(), cyclic.end());
  while (!queue.empty()) {
    Subgroup s = queue.front();
    queue.pop_front();
    for (const auto& c : cyclic) {
      if (s.contains(c)) continue;
      Subgroup t = sum(s, c);
      if (seen.emplace(t.key(), t).second) queue.push_back(t);
    }
  }
  std::vector<Subgroup> out;
  for (auto& [k, s] : seen) out.push_back(s);
  std::sort(out.begin(), out.end(), subgroup_less);
  return out;
}

}  // namespace fisplit
