#pragma once

// (dual)(strongly) M-F-splitness and (dual)(strongly) self-Rickart objects.
//
// Brute force quantifies over Hom and checks every kernel ker(d g) (resp. every
// image g(F)) directly. Theorem mode reduces self-F-splitness to F being a
// summand plus a Rickart condition on M/F (resp. on F), and settles strongness
// three ways: via M/F strongly self-Rickart, via abelianness of its
// endomorphism ring, and via full invariance of the summands containing F.

#include "fisplit/finite.hpp"
#include "fisplit/preradical.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <variant>

namespace fisplit {

enum class Answer { Yes, No, Unknown };
enum class Mode { BruteForce, Theorem };
enum class Failure { NotSummand, NotFullyInvariant };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "";
}

inline const char* to_string(Mode m) { return m == Mode::BruteForce ? "brute-force" : "theorem"; }

inline const char* to_string(Failure f) {
  return f == Failure::NotSummand ? "not a direct summand" : "not fully invariant";
}

/// Primal: subgroup = ker(d g) in M, witness r with r o inclusion = id.
/// Dual: subgroup = g(F) in M, witness s with p o s = id for p: M -> M/g(F).
struct Certificate {
  Morphism g;
  Subgroup subgroup;
  Morphism witness;
};

struct Counterexample {
  Morphism g;
  Subgroup subgroup;
  Failure failure;
};

struct SplitVerdict {
  Answer answer = Answer::Unknown;
  Mode mode = Mode::BruteForce;
  bool dual = false;
  bool strongly = false;
  FgAbGroup M;  // g: M -> N, or g: N -> M when dual
  Subgroup F;   // fully invariant in N
  std::vector<Certificate> certificates;
  std::optional<Counterexample> counterexample;
  std::string reason;
  std::vector<std::string> trace;

  const FgAbGroup& N() const { return F.ambient(); }
};

struct SplitPair {
  SplitVerdict plain, strong;
};

/// Self-Rickart verdicts and ring checks keyed by group, shared between calls.
struct RickartCache {
  std::map<std::string, SplitPair> rickart, dual_rickart;
  std::map<std::string, std::pair<Answer, std::optional<Morphism>>> abelian;
};

inline constexpr std::uint64_t kDefaultEndringCap = 1'000'000;
inline constexpr int kDefaultEntryBound = 3;
inline constexpr std::uint64_t kElementEngineLimit = 4096;

struct SplitOptions {
  std::uint64_t hom_budget = kDefaultHomBudget;
  std::uint64_t endring_cap = kDefaultEndringCap;
  std::uint64_t subgroup_cap = kDefaultSubgroupCap;
  int entry_bound = kDefaultEntryBound;
  bool keep_certificates = true;
  std::shared_ptr<RickartCache> cache;
};

namespace detail {

inline void require_fully_invariant(const Subgroup& F) {
  if (auto w = full_invariance_witness(F)) throw NotFullyInvariant(F, *w);
}

inline SplitVerdict blank(const FgAbGroup& M, const Subgroup& F, bool dual, bool strongly, Mode mode) {
  SplitVerdict v;
  v.M = M;
  v.F = F;
  v.dual = dual;
  v.strongly = strongly;
  v.mode = mode;
  return v;
}

inline SplitPair blank_pair(const FgAbGroup& M, const Subgroup& F, bool dual, Mode mode) {
  return {blank(M, F, dual, false, mode), blank(M, F, dual, true, mode)};
}

// What the definition tests for one quantified g, given the resulting subgroup of M.
struct SubgroupCheck {
  Subgroup sub;
  std::optional<Morphism> witness;
  bool fully_invariant = false;
};

inline SubgroupCheck check_subgroup(const Subgroup& X, bool dual) {
  SubgroupCheck c{X, std::nullopt, false};
  if (dual) {
    c.witness = is_retraction(quotient(X).epi);
  } else {
    c.witness = is_section(X.inclusion());
  }
  if (c.witness) c.fully_invariant = is_fully_invariant(X);
  return c;
}

/// ker(d g) for primal g: M -> N, g(F) for dual g: N -> M.
inline Subgroup quantified_subgroup(const Morphism& g, const Subgroup& F, bool dual) {
  if (dual) return image(compose(g, F.inclusion()));
  return kernel_subgroup(compose(quotient(F).epi, g));
}

// Collects the outcome of a brute-force pass.
struct BruteState {
  std::optional<Counterexample> plain_cex, strong_cex;
  std::vector<Certificate> certs;
  std::size_t visited = 0, distinct = 0;

  bool done() const { return plain_cex && strong_cex; }

  void record(const Morphism& g, const SubgroupCheck& c, bool fresh, bool keep) {
    const bool plain_bad = !c.witness;
    const bool strong_bad = plain_bad || !c.fully_invariant;
    if (plain_bad && !plain_cex) plain_cex = Counterexample{g, c.sub, Failure::NotSummand};
    if (strong_bad && !strong_cex)
      strong_cex = Counterexample{g, c.sub, plain_bad ? Failure::NotSummand : Failure::NotFullyInvariant};
    if (fresh && !plain_bad && keep) certs.push_back({g, c.sub, *c.witness});
  }
};

// g -> mask of ker(d g) (primal) or g(F) (dual), element by element.
inline void brute_elements(const HomGroup& H, const Subgroup& F, bool dual, bool keep, BruteState& st) {
  const FiniteView dom(H.dom), cod(H.cod);
  const FiniteView& target = dual ? cod : dom;  // where the tested subgroup lives
  const ElementMask fmask = (dual ? dom : cod).mask_of(F);
  std::vector<Element> f_elements;
  if (dual)
    for (Element x = 0; x < dom.size(); ++x)
      if (fmask.test(x)) f_elements.push_back(x);

  const auto radix = hom_radix(H);
  std::vector<Element> contrib(H.rank());
  for (std::size_t t = 0; t < H.rank(); ++t) contrib[t] = cod.basis_multiple(H.generators[t].row, H.generators[t].value);

  std::vector<std::uint64_t> c(radix.size(), 0);
  std::vector<Element> gen_img(dom.rank(), 0), img;
  std::unordered_map<ElementMask, std::size_t, ElementMaskHash> memo;
  std::vector<SubgroupCheck> results;
  std::vector<Int> coeffs(radix.size());
  ElementMask mask(target.size());

  while (true) {
    dom.images(gen_img, cod, img);
    mask.clear();
    if (dual) {
      for (Element x : f_elements) mask.set(img[x]);
    } else {
      for (Element x = 0; x < dom.size(); ++x)
        if (fmask.test(img[x])) mask.set(x);
    }
    auto [it, fresh] = memo.try_emplace(mask, results.size());
    if (fresh) results.push_back(check_subgroup(target.subgroup_of(mask), dual));
    const SubgroupCheck& res = results[it->second];
    ++st.visited;
    const bool plain_bad = !res.witness, strong_bad = plain_bad || !res.fully_invariant;
    if ((fresh && keep) || (plain_bad && !st.plain_cex) || (strong_bad && !st.strong_cex)) {
      for (std::size_t t = 0; t < c.size(); ++t) coeffs[t] = static_cast<unsigned long>(c[t]);
      Morphism g = H.combine(coeffs);
      st.record(g, res, fresh, keep);
    }
    if (st.done()) break;
    // advance the counter; a wrapping digit has added its generator radix times, i.e. zero
    std::size_t t = 0;
    for (; t < c.size(); ++t) {
      gen_img[H.generators[t].col] = cod.add(gen_img[H.generators[t].col], contrib[t]);
      if (++c[t] < radix[t]) break;
      c[t] = 0;
    }
    if (t == c.size()) break;
  }
  st.distinct = results.size();
}

inline void brute_categorical(const HomGroup& H, const Subgroup& F, bool dual, bool keep, BruteState& st,
                              std::uint64_t budget) {
  std::map<std::string, SubgroupCheck> memo;
  for_each_hom(H, budget, [&](const Morphism& g) {
    Subgroup X = quantified_subgroup(g, F, dual);
    auto it = memo.find(X.key());
    bool fresh = it == memo.end();
    if (fresh) it = memo.emplace(X.key(), check_subgroup(X, dual)).first;
    ++st.visited;
    st.record(g, it->second, fresh, keep);
    return !st.done();
  });
  st.distinct = memo.size();
}

inline bool element_engine_fits(const FgAbGroup& a, const FgAbGroup& b) {
  auto oa = a.order(), ob = b.order();
  return oa && ob && *oa <= static_cast<unsigned long>(kElementEngineLimit) &&
         *ob <= static_cast<unsigned long>(kElementEngineLimit);
}

}  // namespace detail

/// Brute force over Hom(M, N) (primal) or Hom(N, M) (dual), N = F.ambient().
/// Plain and strong verdicts come out of one pass.
inline SplitPair brute_force_split(const FgAbGroup& M, const Subgroup& F, bool dual,
                                   const SplitOptions& opts = {}) {
  detail::require_fully_invariant(F);
  SplitPair out = detail::blank_pair(M, F, dual, Mode::BruteForce);
  const HomGroup H = dual ? hom_basis(F.ambient(), M) : hom_basis(M, F.ambient());
  if (auto blocked = hom_enumeration_blocker(H, opts.hom_budget)) {
    out.plain.reason = out.strong.reason = blocked->reason;
    return out;
  }
  detail::BruteState st;
  if (detail::element_engine_fits(H.dom, H.cod)) {
    detail::brute_elements(H, F, dual, opts.keep_certificates, st);
  } else {
    detail::brute_categorical(H, F, dual, opts.keep_certificates, st, opts.hom_budget);
  }
  const std::string what = dual ? "image g(F)" : "kernel ker(d g)";
  auto settle = [&](SplitVerdict& v, const std::optional<Counterexample>& cex) {
    if (cex) {
      v.answer = Answer::No;
      v.counterexample = cex;
      v.reason = std::string("the ") + what + " is " + to_string(cex->failure);
    } else {
      v.answer = Answer::Yes;
      v.certificates = st.certs;
      v.reason = "all " + std::to_string(st.visited) + " morphisms checked, " + std::to_string(st.distinct) +
                 " distinct subgroups";
    }
  };
  settle(out.plain, st.plain_cex);
  settle(out.strong, st.strong_cex);
  return out;
}

/// N is (strongly) M-F-split.
inline SplitVerdict is_M_F_split(const FgAbGroup& M, const FgAbGroup& N, const Subgroup& F, bool strongly,
                                 const SplitOptions& opts = {}) {
  if (!(F.ambient() == N)) throw ObjectMismatch("F is not a subgroup of " + N.to_string());
  auto p = brute_force_split(M, F, false, opts);
  return strongly ? p.strong : p.plain;
}

/// N is dual (strongly) M-F-split: quantifies g: N -> M.
inline SplitVerdict is_dual_M_F_split(const FgAbGroup& N, const FgAbGroup& M, const Subgroup& F, bool strongly,
                                      const SplitOptions& opts = {}) {
  if (!(F.ambient() == N)) throw ObjectMismatch("F is not a subgroup of " + N.to_string());
  auto p = brute_force_split(M, F, true, opts);
  return strongly ? p.strong : p.plain;
}

inline SplitVerdict is_self_rickart(const FgAbGroup& M, bool strongly, const SplitOptions& opts = {}) {
  return is_M_F_split(M, M, Subgroup::trivial(M), strongly, opts);
}

inline SplitVerdict is_dual_self_rickart(const FgAbGroup& M, bool strongly, const SplitOptions& opts = {}) {
  return is_dual_M_F_split(M, M, Subgroup::whole(M), strongly, opts);
}

// ---------------------------------------------------------------------------
// Endomorphism rings

struct EndRingView {
  FgAbGroup object;
  HomGroup hom;
  std::vector<Morphism> elements;
  std::vector<Morphism> idempotents;
};

inline std::variant<EndRingView, Unknown> end_ring(const FgAbGroup& M, std::uint64_t cap = kDefaultEndringCap) {
  EndRingView v{M, hom_basis(M, M), {}, {}};
  auto all = enumerate_hom(v.hom, cap);
  if (auto* u = std::get_if<Unknown>(&all)) return *u;
  v.elements = std::move(std::get<0>(all));
  for (const auto& e : v.elements)
    if (compose(e, e) == e) v.idempotents.push_back(e);
  return v;
}

/// Commutation is additive in the second argument, so the additive basis suffices.
inline std::optional<Morphism> noncentral_idempotent(const EndRingView& E) {
  const auto basis = E.hom.basis();
  for (const auto& e : E.idempotents)
    for (const auto& b : basis)
      if (!(compose(e, b) == compose(b, e))) return e;
  return std::nullopt;
}

inline bool is_abelian_ring(const EndRingView& E) { return !noncentral_idempotent(E).has_value(); }

namespace detail {

// The first non-central idempotent of End(C) in canonical order, scanning elements only.
inline std::pair<Answer, std::optional<Morphism>> scan_end_abelian(const FgAbGroup& C, std::uint64_t cap,
                                                                   std::string& reason) {
  const HomGroup H = hom_basis(C, C);
  if (auto blocked = hom_enumeration_blocker(H, cap)) {
    reason = blocked->reason;
    return {Answer::Unknown, std::nullopt};
  }
  if (!element_engine_fits(C, C)) {
    auto v = std::get<EndRingView>(end_ring(C, cap));
    auto e = noncentral_idempotent(v);
    return {e ? Answer::No : Answer::Yes, e};
  }
  const FiniteView view(C);
  const auto radix = hom_radix(H);
  std::vector<Element> contrib(H.rank());
  for (std::size_t t = 0; t < H.rank(); ++t) contrib[t] = view.basis_multiple(H.generators[t].row, H.generators[t].value);
  // full tables of the basis endomorphisms
  std::vector<std::vector<Element>> basis_tab(H.rank());
  for (std::size_t t = 0; t < H.rank(); ++t) {
    std::vector<Element> gi(view.rank(), 0);
    gi[H.generators[t].col] = contrib[t];
    view.images(gi, view, basis_tab[t]);
  }
  std::vector<std::uint64_t> c(radix.size(), 0);
  std::vector<Element> gen_img(view.rank(), 0), img;
  std::vector<Element> unit(view.rank());
  for (std::size_t j = 0; j < view.rank(); ++j) unit[j] = view.stride(j);
  while (true) {
    view.images(gen_img, view, img);
    bool idem = true;
    for (std::size_t j = 0; j < view.rank() && idem; ++j) idem = img[gen_img[j]] == gen_img[j];
    if (idem) {
      for (std::size_t t = 0; t < H.rank(); ++t) {
        for (std::size_t j = 0; j < view.rank(); ++j) {
          // e(b(u_j)) against b(e(u_j))
          if (img[basis_tab[t][unit[j]]] != basis_tab[t][gen_img[j]]) {
            std::vector<Int> coeffs(c.size());
            for (std::size_t s = 0; s < c.size(); ++s) coeffs[s] = static_cast<unsigned long>(c[s]);
            return {Answer::No, H.combine(coeffs)};
          }
        }
      }
    }
    std::size_t t = 0;
    for (; t < c.size(); ++t) {
      gen_img[H.generators[t].col] = view.add(gen_img[H.generators[t].col], contrib[t]);
      if (++c[t] < radix[t]) break;
      c[t] = 0;
    }
    if (t == c.size()) break;
  }
  return {Answer::Yes, std::nullopt};
}

// Infinite C: commutative basis means a commutative ring; otherwise look for a
// non-central idempotent among the basis idempotents.
inline std::pair<Answer, std::optional<Morphism>> infinite_end_abelian(const FgAbGroup& C, std::string& reason) {
  const HomGroup H = hom_basis(C, C);
  const auto basis = H.basis();
  bool commutative = true;
  for (std::size_t a = 0; a < basis.size() && commutative; ++a)
    for (std::size_t b = a + 1; b < basis.size() && commutative; ++b)
      commutative = compose(basis[a], basis[b]) == compose(basis[b], basis[a]);
  if (commutative) {
    reason = "End(" + C.to_string() + ") is commutative";
    return {Answer::Yes, std::nullopt};
  }
  for (const auto& e : basis) {
    if (!(compose(e, e) == e)) continue;
    for (const auto& b : basis)
      if (!(compose(e, b) == compose(b, e))) {
        reason = "basis idempotent does not commute with the basis";
        return {Answer::No, e};
      }
  }
  reason = "no non-central idempotent among the basis idempotents of End(" + C.to_string() + ")";
  return {Answer::Unknown, std::nullopt};
}

}  // namespace detail

struct AbelianCheck {
  Answer answer = Answer::Unknown;
  std::optional<Morphism> noncentral;  // an idempotent that is not central
  std::string reason;
};

inline AbelianCheck end_ring_is_abelian(const FgAbGroup& C, const SplitOptions& opts = {}) {
  const std::string key = C.to_comma_string();
  if (opts.cache) {
    auto it = opts.cache->abelian.find(key);
    if (it != opts.cache->abelian.end()) return {it->second.first, it->second.second, "cached"};
  }
  AbelianCheck out;
  std::pair<Answer, std::optional<Morphism>> r;
  if (C.is_finite()) {
    r = detail::scan_end_abelian(C, opts.endring_cap, out.reason);
    if (out.reason.empty())
      out.reason = r.first == Answer::Yes ? "every idempotent of End(" + C.to_string() + ") is central"
                                          : "End(" + C.to_string() + ") has a non-central idempotent";
  } else {
    r = detail::infinite_end_abelian(C, out.reason);
  }
  out.answer = r.first;
  out.noncentral = r.second;
  if (opts.cache && out.answer != Answer::Unknown) opts.cache->abelian[key] = r;
  return out;
}

// ---------------------------------------------------------------------------
// Witness search and summand properties

namespace detail {

// 0, 1, -1, 2, -2, ... up to the bound, reduced and deduplicated modulo d
inline std::vector<Int> small_values(const Int& d, int bound) {
  std::vector<Int> v{0};
  for (int k = 1; k <= bound; ++k)
    for (int s : {k, -k}) {
      Int x = d == 0 ? Int(s) : reduce_mod(Int(s), d);
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
  return v;
}

inline std::vector<IntVector> small_vectors(const FgAbGroup& M, int bound) {
  std::vector<std::vector<Int>> vals;
  std::vector<std::uint64_t> radix;
  for (const Int& d : M.factors()) {
    vals.push_back(small_values(d, bound));
    radix.push_back(vals.back().size());
  }
  std::vector<IntVector> out;
  std::vector<std::uint64_t> c(radix.size(), 0);
  do {
    IntVector v(M.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vals[i][c[i]];
    out.push_back(std::move(v));
  } while (next_coefficients(c, radix));
  return out;
}

/// id - k r: an endomorphism whose kernel is the summand X.
inline Morphism complement_projection(const Subgroup& X, const Morphism& r) {
  return Morphism::identity(X.ambient()) - compose(X.inclusion(), r);
}

}  // namespace detail

/// A summand X containing F that is not fully invariant, among X = F + <v> (and
/// F + <v, w> when the candidate list is short) with entries bounded by `entry_bound`.
/// The returned g has ker(d g) = X. Finding nothing proves nothing.
inline std::optional<Counterexample> strongly_no_witness_search(const FgAbGroup& M, const Subgroup& F,
                                                                int entry_bound = kDefaultEntryBound) {
  if (!(F.ambient() == M)) throw ObjectMismatch("witness search: F is not a subgroup of M");
  const auto vs = detail::small_vectors(M, entry_bound);
  std::map<std::string, bool> seen;
  auto try_subgroup = [&](const Subgroup& X) -> std::optional<Counterexample> {
    if (!seen.emplace(X.key(), true).second) return std::nullopt;
    auto r = is_section(X.inclusion());
    if (!r || is_fully_invariant(X)) return std::nullopt;
    Morphism g = detail::complement_projection(X, *r);
    return Counterexample{g, detail::quantified_subgroup(g, F, false), Failure::NotFullyInvariant};
  };
  const IntMatrix fgens = F.canonical();
  auto with = [&](std::initializer_list<const IntVector*> extra) {
    IntMatrix g(M.size(), extra.size());
    std::size_t k = 0;
    for (const IntVector* v : extra) g.set_col(k++, *v);
    return Subgroup(M, IntMatrix::hcat(fgens, g));
  };
  for (const auto& v : vs)
    if (auto w = try_subgroup(with({&v}))) return w;
  if (vs.size() <= 400)
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        if (auto w = try_subgroup(with({&vs[a], &vs[b]}))) return w;
  return std::nullopt;
}

inline std::vector<Subgroup> summands_containing(const Subgroup& F, std::uint64_t cap = kDefaultSubgroupCap) {
  std::vector<Subgroup> out;
  for (const auto& s : all_subgroups(F.ambient(), cap))
    if (s.contains(F) && is_summand(s)) out.push_back(s);
  return out;
}

inline std::vector<Subgroup> summands_contained_in(const Subgroup& F, std::uint64_t cap = kDefaultSubgroupCap) {
  std::vector<Subgroup> out;
  for (const auto& s : all_subgroups(F.ambient(), cap))
    if (F.contains(s) && is_summand(s)) out.push_back(s);
  return out;
}

/// Two (fully invariant) summands containing F whose intersection is not one.
inline std::optional<std::pair<Subgroup, Subgroup>> sip_violation(const Subgroup& F, bool fully_invariant_only = false,
                                                                  std::uint64_t cap = kDefaultSubgroupCap) {
  std::vector<Subgroup> xs;
  for (auto& s : summands_containing(F, cap))
    if (!fully_invariant_only || is_fully_invariant(s)) xs.push_back(s);
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = a + 1; b < xs.size(); ++b) {
      Subgroup m = intersect(xs[a], xs[b]);
      if (!is_summand(m) || (fully_invariant_only && !is_fully_invariant(m))) return std::make_pair(xs[a], xs[b]);
    }
  return std::nullopt;
}

/// Two (fully invariant) summands contained in F whose sum is not one.
inline std::optional<std::pair<Subgroup, Subgroup>> ssp_violation(const Subgroup& F, bool fully_invariant_only = false,
                                                                  std::uint64_t cap = kDefaultSubgroupCap) {
  std::vector<Subgroup> xs;
  for (auto& s : summands_contained_in(F, cap))
    if (!fully_invariant_only || is_fully_invariant(s)) xs.push_back(s);
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = a + 1; b < xs.size(); ++b) {
      Subgroup m = sum(xs[a], xs[b]);
      if (!is_summand(m) || (fully_invariant_only && !is_fully_invariant(m))) return std::make_pair(xs[a], xs[b]);
    }
  return std::nullopt;
}

inline bool has_sip_summands_containing(const FgAbGroup& M, const Subgroup& F, bool fully_invariant_only = false,
                                        std::uint64_t cap = kDefaultSubgroupCap) {
  if (!(F.ambient() == M)) throw ObjectMismatch("SIP: F is not a subgroup of M");
  return !sip_violation(F, fully_invariant_only, cap);
}

inline bool has_ssp_summands_contained_in(const FgAbGroup& M, const Subgroup& F, bool fully_invariant_only = false,
                                          std::uint64_t cap = kDefaultSubgroupCap) {
  if (!(F.ambient() == M)) throw ObjectMismatch("SSP: F is not a subgroup of M");
  return !ssp_violation(F, fully_invariant_only, cap);
}

// ---------------------------------------------------------------------------
// Re-verification

/// Recomputes what a verdict claims from its own data, categorically.
inline bool recheck(const SplitVerdict& v) {
  const Subgroup& F = v.F;
  auto dom_ok = [&](const Morphism& g) {
    return v.dual ? g.dom() == F.ambient() && g.cod() == v.M : g.dom() == v.M && g.cod() == F.ambient();
  };
  if (v.answer == Answer::No) {
    if (!v.counterexample) return false;
    const auto& cex = *v.counterexample;
    if (!dom_ok(cex.g)) return false;
    Subgroup X = detail::quantified_subgroup(cex.g, F, v.dual);
    if (!(X == cex.subgroup)) return false;
    bool summand = v.dual ? is_retraction(quotient(X).epi).has_value() : is_summand(X);
    if (cex.failure == Failure::NotSummand) return !summand;
    return v.strongly && summand && !is_fully_invariant(X);
  }
  if (v.answer == Answer::Yes && v.mode == Mode::BruteForce) {
    for (const auto& c : v.certificates) {
      if (!dom_ok(c.g)) return false;
      Subgroup X = detail::quantified_subgroup(c.g, F, v.dual);
      if (!(X == c.subgroup)) return false;
      if (v.dual) {
        if (!(compose(quotient(X).epi, c.witness) == Morphism::identity(quotient(X).object))) return false;
      } else if (!(compose(c.witness, X.inclusion()) == Morphism::identity(X.object()))) {
        return false;
      }
      if (v.strongly && !is_fully_invariant(X)) return false;
    }
    return true;
  }
  if (v.answer == Answer::Yes) return !v.trace.empty();
  return true;
}

// ---------------------------------------------------------------------------
// Theorem mode

namespace detail {

inline std::string group_phrase(const FgAbGroup& g) { return g.to_string(); }

// C infinite: Rickart conditions from the structure of finitely generated groups.
inline SplitPair structural_rickart(const FgAbGroup& C) {
  Subgroup zero = Subgroup::trivial(C);
  SplitPair p = blank_pair(C, zero, false, Mode::Theorem);
  const std::size_t r = C.free_rank(), t = C.torsion_size();
  auto no = [&](SplitVerdict& v, const Morphism& g, const std::string& why) {
    v.answer = Answer::No;
    Subgroup X = kernel_subgroup(g);
    v.counterexample = Counterexample{g, X, is_summand(X) ? Failure::NotFullyInvariant : Failure::NotSummand};
    v.reason = why;
  };
  if (t > 0) {
    // a free generator sent to an element of prime order: the kernel has index p and contains the torsion
    IntMatrix m(C.size(), C.size());
    const Int& d0 = C.factor(0);
    m(0, C.size() - 1) = d0 / prime_divisors(d0).front();
    Morphism g(C, C, m);
    const std::string why = C.to_string() + " has free rank " + std::to_string(r) +
                            " and nonzero torsion; the kernel of " + g.to_string() + " is not a summand";
    no(p.plain, g, why);
    no(p.strong, g, why);
    return p;
  }
  p.plain.answer = Answer::Yes;
  p.plain.reason = C.to_string() + " is free: endomorphism kernels are pure subgroups, hence summands";
  p.plain.trace.push_back(p.plain.reason);
  if (r <= 1) {
    p.strong.answer = Answer::Yes;
    p.strong.reason = "kernels of endomorphisms of " + C.to_string() + " are 0 or everything";
    p.strong.trace.push_back(p.plain.reason);
    p.strong.trace.push_back(p.strong.reason);
  } else {
    IntMatrix m(C.size(), C.size());
    m(0, 0) = 1;
    no(p.strong, Morphism(C, C, m), "the kernel of the first coordinate projection is a non-fully-invariant summand");
  }
  return p;
}

// F infinite: a free coordinate doubled has an image that is not a summand.
inline SplitPair structural_dual_rickart(const FgAbGroup& F) {
  Subgroup whole = Subgroup::whole(F);
  SplitPair p = blank_pair(F, whole, true, Mode::Theorem);
  IntMatrix m = IntMatrix::identity(F.size());
  m(F.size() - 1, F.size() - 1) = 2;
  Morphism h(F, F, m);
  for (SplitVerdict* v : {&p.plain, &p.strong}) {
    v->answer = Answer::No;
    v->counterexample = Counterexample{h, image(h), Failure::NotSummand};
    v->reason = F.to_string() + " is infinite; the image of " + h.to_string() + " has index 2 and is not a summand";
  }
  return p;
}

inline SplitPair rickart_pair(const FgAbGroup& C, bool dual, const SplitOptions& opts) {
  const std::string key = C.to_comma_string();
  if (opts.cache) {
    auto& table = dual ? opts.cache->dual_rickart : opts.cache->rickart;
    auto it = table.find(key);
    if (it != table.end()) return it->second;
  }
  SplitPair p;
  if (C.is_finite()) {
    SplitOptions inner = opts;
    inner.hom_budget = opts.endring_cap;
    inner.keep_certificates = false;
    p = brute_force_split(C, dual ? Subgroup::whole(C) : Subgroup::trivial(C), dual, inner);
  } else {
    p = dual ? structural_dual_rickart(C) : structural_rickart(C);
  }
  if (opts.cache && p.plain.answer != Answer::Unknown && p.strong.answer != Answer::Unknown)
    (dual ? opts.cache->dual_rickart : opts.cache->rickart)[key] = p;
  return p;
}

// One route's verdict on strongness.
struct Route {
  std::string name;
  Answer answer = Answer::Unknown;
  std::optional<Counterexample> cex;
  std::string reason;
};

inline std::string describe(const Route& r) { return r.name + ": " + to_string(r.answer) + " (" + r.reason + ")"; }

}  // namespace detail

/// M self-F-split and strongly self-F-split, decided by reduction to M/F.
inline SplitPair self_F_split_theorem(const Subgroup& F, const SplitOptions& opts = {}) {
  detail::require_fully_invariant(F);
  const FgAbGroup& M = F.ambient();
  SplitPair out = detail::blank_pair(M, F, false, Mode::Theorem);
  auto r = is_section(F.inclusion());
  if (!r) {
    for (SplitVerdict* v : {&out.plain, &out.strong}) {
      v->answer = Answer::No;
      Morphism id = Morphism::identity(M);
      v->counterexample = Counterexample{id, detail::quantified_subgroup(id, F, false), Failure::NotSummand};
      v->reason = "F is not a direct summand of M (g = identity)";
      v->trace.push_back(v->reason);
    }
    return out;
  }
  Cokernel q = quotient(F);
  const FgAbGroup& C = q.object;
  const Morphism& d = q.epi;
  const Morphism sigma = *is_retraction(d);
  const std::string split_line = "M = F + C with F = " + F.object().to_string() + ", C = M/F = " + C.to_string();
  auto lift = [&](const Morphism& c) { return compose(sigma, compose(c, d)); };
  auto lifted_cex = [&](const Morphism& c) {
    Morphism g = lift(c);
    Subgroup X = detail::quantified_subgroup(g, F, false);
    Failure f = is_summand(X) ? Failure::NotFullyInvariant : Failure::NotSummand;
    return Counterexample{g, X, f};
  };

  // plain
  SplitPair rc = detail::rickart_pair(C, false, opts);
  out.plain.trace = {split_line, "C self-Rickart: " + std::string(to_string(rc.plain.answer)) + " (" + rc.plain.reason + ")"};
  out.plain.answer = rc.plain.answer;
  out.plain.reason = rc.plain.reason;
  if (rc.plain.answer == Answer::No) {
    out.plain.counterexample = lifted_cex(rc.plain.counterexample->g);
    out.plain.reason = "C = " + C.to_string() + " is not self-Rickart";
  }

  // strong, three routes
  std::vector<detail::Route> routes;
  {
    detail::Route key{"C strongly self-Rickart", rc.strong.answer, std::nullopt, rc.strong.reason};
    if (rc.strong.answer == Answer::No) key.cex = lifted_cex(rc.strong.counterexample->g);
    routes.push_back(key);
  }
  {
    detail::Route ab{"End(C) abelian", Answer::Unknown, std::nullopt, ""};
    if (out.plain.answer == Answer::No) {
      ab.answer = Answer::No;
      ab.cex = out.plain.counterexample;
      ab.reason = "not self-F-split";
    } else if (out.plain.answer == Answer::Yes) {
      AbelianCheck a = end_ring_is_abelian(C, opts);
      ab.answer = a.answer;
      ab.reason = a.reason;
      if (a.answer == Answer::No) {
        Morphism e = *a.noncentral;
        for (const Morphism& c : {e, Morphism::identity(C) - e}) {
          Counterexample x = lifted_cex(c);
          if (x.failure == Failure::NotFullyInvariant || x.failure == Failure::NotSummand) {
            if (!is_fully_invariant(x.subgroup) || x.failure == Failure::NotSummand) {
              ab.cex = x;
              break;
            }
          }
        }
        if (!ab.cex) throw std::logic_error("non-central idempotent of End(" + C.to_string() + ") did not lift");
      }
    } else {
      ab.reason = "self-F-splitness unknown";
    }
    routes.push_back(ab);
  }
  {
    detail::Route rel{"summands containing F fully invariant", Answer::Unknown, std::nullopt, ""};
    if (out.plain.answer == Answer::No) {
      rel.answer = Answer::No;
      rel.cex = out.plain.counterexample;
      rel.reason = "not self-F-split";
    } else {
      std::optional<Subgroup> bad;
      bool decided = false;
      auto oc = C.order();
      if (oc && *oc <= Int(std::to_string(opts.subgroup_cap))) {
        decided = true;
        std::size_t count = 0;
        for (const auto& y : all_subgroups(C, opts.subgroup_cap)) {
          Subgroup X = preimage(d, y);
          if (!is_summand(X)) continue;
          ++count;
          if (!is_fully_invariant(X)) {
            bad = X;
            break;
          }
        }
        rel.reason = bad ? "summand " + bad->to_string() + " is not fully invariant"
                         : "all " + std::to_string(count) + " summands containing F are fully invariant";
      } else if (auto w = strongly_no_witness_search(M, F, opts.entry_bound)) {
        decided = true;
        bad = w->subgroup;
        rel.cex = w;
        rel.reason = "witness search: summand " + w->subgroup.to_string() + " is not fully invariant";
      } else {
        rel.reason = "summands containing F cannot be enumerated and the witness search found none";
      }
      if (decided && out.plain.answer == Answer::Unknown && !bad) decided = false;
      if (decided) {
        rel.answer = bad ? Answer::No : Answer::Yes;
        if (bad && !rel.cex) {
          Morphism g = detail::complement_projection(*bad, *is_section(bad->inclusion()));
          rel.cex = Counterexample{g, detail::quantified_subgroup(g, F, false), Failure::NotFullyInvariant};
        }
      }
    }
    routes.push_back(rel);
  }

  std::optional<Answer> agreed;
  for (const auto& rt : routes) {
    out.strong.trace.push_back(detail::describe(rt));
    if (rt.answer == Answer::Unknown) continue;
    if (agreed && *agreed != rt.answer)
      throw std::logic_error("strong self-F-split routes disagree on " + M.to_string() + ", F = " + F.to_string());
    agreed = rt.answer;
  }
  out.strong.trace.insert(out.strong.trace.begin(), split_line);
  if (agreed) {
    out.strong.answer = *agreed;
    if (*agreed == Answer::No) {
      // the route with a direct witness in M first
      for (const auto* rt : {&routes[2], &routes[0], &routes[1]})
        if (rt->answer == Answer::No && rt->cex) {
          out.strong.counterexample = rt->cex;
          out.strong.reason = rt->name + ": " + rt->reason;
          break;
        }
    } else {
      out.strong.reason = "C strongly self-Rickart / End(C) abelian / summands containing F fully invariant";
    }
  } else {
    out.strong.reason = "no route decided strongness";
  }
  return out;
}

/// M dual self-F-split and dual strongly self-F-split, decided by reduction to F.
inline SplitPair dual_self_F_split_theorem(const Subgroup& F, const SplitOptions& opts = {}) {
  detail::require_fully_invariant(F);
  const FgAbGroup& M = F.ambient();
  SplitPair out = detail::blank_pair(M, F, true, Mode::Theorem);
  auto rho_opt = is_section(F.inclusion());
  if (!rho_opt) {
    for (SplitVerdict* v : {&out.plain, &out.strong}) {
      v->answer = Answer::No;
      Morphism id = Morphism::identity(M);
      v->counterexample = Counterexample{id, detail::quantified_subgroup(id, F, true), Failure::NotSummand};
      v->reason = "F is not a direct summand of M (g = identity)";
      v->trace.push_back(v->reason);
    }
    return out;
  }
  const Morphism rho = *rho_opt;
  const Morphism& i = F.inclusion();
  const FgAbGroup& Fo = F.object();
  const std::string split_line = "M = F + C with F = " + Fo.to_string() + ", C = " + quotient(F).object.to_string();
  auto lifted_cex = [&](const Morphism& h) {
    Morphism g = compose(i, compose(h, rho));
    Subgroup X = detail::quantified_subgroup(g, F, true);
    bool summand = is_retraction(quotient(X).epi).has_value();
    return Counterexample{g, X, summand ? Failure::NotFullyInvariant : Failure::NotSummand};
  };

  SplitPair rd = detail::rickart_pair(Fo, true, opts);
  out.plain.trace = {split_line, "F dual self-Rickart: " + std::string(to_string(rd.plain.answer)) + " (" +
                                     rd.plain.reason + ")"};
  out.plain.answer = rd.plain.answer;
  out.plain.reason = rd.plain.reason;
  if (rd.plain.answer == Answer::No) {
    out.plain.counterexample = lifted_cex(rd.plain.counterexample->g);
    out.plain.reason = "F = " + Fo.to_string() + " is not dual self-Rickart";
  }

  std::vector<detail::Route> routes;
  {
    detail::Route key{"F dual strongly self-Rickart", rd.strong.answer, std::nullopt, rd.strong.reason};
    if (rd.strong.answer == Answer::No) key.cex = lifted_cex(rd.strong.counterexample->g);
    routes.push_back(key);
  }
  {
    detail::Route ab{"End(F) abelian", Answer::Unknown, std::nullopt, ""};
    if (out.plain.answer == Answer::No) {
      ab.answer = Answer::No;
      ab.cex = out.plain.counterexample;
      ab.reason = "not dual self-F-split";
    } else if (out.plain.answer == Answer::Yes) {
      AbelianCheck a = end_ring_is_abelian(Fo, opts);
      ab.answer = a.answer;
      ab.reason = a.reason;
      if (a.answer == Answer::No) {
        Morphism e = *a.noncentral;
        for (const Morphism& c : {e, Morphism::identity(Fo) - e}) {
          Counterexample x = lifted_cex(c);
          if (x.failure == Failure::NotSummand || !is_fully_invariant(x.subgroup)) {
            ab.cex = x;
            break;
          }
        }
        if (!ab.cex) throw std::logic_error("non-central idempotent of End(" + Fo.to_string() + ") did not lift");
      }
    } else {
      ab.reason = "dual self-F-splitness unknown";
    }
    routes.push_back(ab);
  }
  {
    detail::Route rel{"summands contained in F fully invariant", Answer::Unknown, std::nullopt, ""};
    if (out.plain.answer == Answer::No) {
      rel.answer = Answer::No;
      rel.cex = out.plain.counterexample;
      rel.reason = "not dual self-F-split";
    } else if (out.plain.answer == Answer::Yes) {
      auto of = Fo.order();
      if (of && *of <= Int(std::to_string(opts.subgroup_cap))) {
        std::optional<Subgroup> bad;
        std::size_t count = 0;
        for (const auto& y : all_subgroups(Fo, opts.subgroup_cap)) {
          Subgroup X = image_of(i, y);
          if (!is_summand(X)) continue;
          ++count;
          if (!is_fully_invariant(X)) {
            bad = X;
            break;
          }
        }
        rel.answer = bad ? Answer::No : Answer::Yes;
        if (bad) {
          Morphism g = compose(bad->inclusion(), *is_section(bad->inclusion()));
          rel.cex = Counterexample{g, detail::quantified_subgroup(g, F, true), Failure::NotFullyInvariant};
          rel.reason = "summand " + bad->to_string() + " is not fully invariant";
        } else {
          rel.reason = "all " + std::to_string(count) + " summands contained in F are fully invariant";
        }
      } else {
        rel.reason = "summands contained in F cannot be enumerated";
      }
    } else {
      rel.reason = "dual self-F-splitness unknown";
    }
    routes.push_back(rel);
  }

  std::optional<Answer> agreed;
  for (const auto& rt : routes) {
    out.strong.trace.push_back(detail::describe(rt));
    if (rt.answer == Answer::Unknown) continue;
    if (agreed && *agreed != rt.answer)
      throw std::logic_error("dual strong self-F-split routes disagree on " + M.to_string() + ", F = " + F.to_string());
    agreed = rt.answer;
  }
  out.strong.trace.insert(out.strong.trace.begin(), split_line);
  if (agreed) {
    out.strong.answer = *agreed;
    if (*agreed == Answer::No) {
      for (const auto* rt : {&routes[2], &routes[0], &routes[1]})
        if (rt->answer == Answer::No && rt->cex) {
          out.strong.counterexample = rt->cex;
          out.strong.reason = rt->name + ": " + rt->reason;
          break;
        }
    } else {
      out.strong.reason = "F dual strongly self-Rickart / End(F) abelian / summands contained in F fully invariant";
    }
  } else {
    out.strong.reason = "no route decided strongness";
  }
  return out;
}

inline SplitVerdict is_self_F_split_theorem(const FgAbGroup& M, const Subgroup& F, bool strongly,
                                            const SplitOptions& opts = {}) {
  if (!(F.ambient() == M)) throw ObjectMismatch("F is not a subgroup of " + M.to_string());
  auto p = self_F_split_theorem(F, opts);
  return strongly ? p.strong : p.plain;
}

inline SplitVerdict is_dual_self_F_split_theorem(const FgAbGroup& M, const Subgroup& F, bool strongly,
                                                 const SplitOptions& opts = {}) {
  if (!(F.ambient() == M)) throw ObjectMismatch("F is not a subgroup of " + M.to_string());
  auto p = dual_self_F_split_theorem(F, opts);
  return strongly ? p.strong : p.plain;
}

/// Self-F-splitness by the strongest available mode: brute force when Hom is
/// enumerable within budget, theorem mode otherwise.
inline SplitPair decide_self_F_split(const Subgroup& F, bool dual, const SplitOptions& opts = {}) {
  SplitPair b = brute_force_split(F.ambient(), F, dual, opts);
  if (b.plain.answer != Answer::Unknown && b.strong.answer != Answer::Unknown) return b;
  SplitPair t = dual ? dual_self_F_split_theorem(F, opts) : self_F_split_theorem(F, opts);
  if (b.plain.answer == Answer::Unknown) {
    t.plain.trace.insert(t.plain.trace.begin(), "brute force: " + b.plain.reason);
    b.plain = t.plain;
  }
  if (b.strong.answer == Answer::Unknown) {
    t.strong.trace.insert(t.strong.trace.begin(), "brute force: " + b.strong.reason);
    b.strong = t.strong;
  }
  return b;
}

}  // namespace fisplit
