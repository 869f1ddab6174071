#pragma once

// Corpus enumeration and theorem-by-theorem verification over all finite
// abelian groups up to an order bound, with JSON reports.

#include "fisplit/splitness.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <set>

namespace fisplit {

inline constexpr const char* kEngineVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Corpus

/// Partitions of n into non-increasing parts, lexicographically decreasing.
inline std::vector<std::vector<unsigned>> partitions(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned cap) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (unsigned k = std::min(left, cap); k >= 1; --k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

inline std::vector<std::pair<long, unsigned>> factorize(long n) {
  std::vector<std::pair<long, unsigned>> out;
  for (long p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Product over p^e || n of the number of partitions of e.
inline std::uint64_t expected_group_count(long n) {
  std::uint64_t c = 1;
  for (auto [p, e] : factorize(n)) c *= partitions(e).size();
  return c;
}

/// One group per isomorphism class, in canonical order.
inline std::vector<FgAbGroup> groups_of_order(long n) {
  std::vector<std::vector<Int>> acc{{}};
  for (auto [p, e] : factorize(n)) {
    std::vector<std::vector<Int>> next;
    for (const auto& a : acc)
      for (const auto& part : partitions(e)) {
        auto b = a;
        for (unsigned k : part) {
          Int q;
          mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), k);
          b.push_back(q);
        }
        next.push_back(std::move(b));
      }
    acc = std::move(next);
  }
  std::vector<FgAbGroup> out;
  for (const auto& orders : acc) out.push_back(FgAbGroup::from_cyclic_orders(orders));
  std::sort(out.begin(), out.end());
  return out;
}

struct Corpus {
  long max_order = 1;
  std::vector<FgAbGroup> groups;

  Corpus up_to(long bound) const {
    Corpus c{std::min(bound, max_order), {}};
    for (const auto& g : groups)
      if (*g.order() <= Int(c.max_order)) c.groups.push_back(g);
    return c;
  }
};

inline Corpus enumerate_groups(long max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
  Corpus c{max_order, {}};
  for (long n = 1; n <= max_order; ++n) {
    auto gs = groups_of_order(n);
    c.groups.insert(c.groups.end(), gs.begin(), gs.end());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Session: verdicts shared between checks

class Session {
 public:
  explicit Session(SplitOptions opts = {}) : opts_(std::move(opts)) {
    if (!opts_.cache) opts_.cache = std::make_shared<RickartCache>();
  }

  const SplitOptions& options() const { return opts_; }

  const std::vector<Subgroup>& subgroups(const FgAbGroup& g) {
    const std::string k = g.to_comma_string();
    auto it = subs_.find(k);
    if (it == subs_.end()) it = subs_.emplace(k, all_subgroups(g, opts_.subgroup_cap)).first;
    return it->second;
  }

  const std::vector<Subgroup>& fi_subgroups(const FgAbGroup& g) {
    const std::string k = g.to_comma_string();
    auto it = fi_.find(k);
    if (it == fi_.end()) {
      std::vector<Subgroup> out;
      for (const auto& s : subgroups(g))
        if (is_fully_invariant(s)) out.push_back(s);
      it = fi_.emplace(k, std::move(out)).first;
    }
    return it->second;
  }

  /// Brute force, M arbitrary, N = F.ambient().
  const SplitPair& split(const FgAbGroup& M, const Subgroup& F, bool dual) {
    const std::string k = M.to_comma_string() + "#" + F.key() + (dual ? "#d" : "#p");
    auto it = brute_.find(k);
    if (it == brute_.end()) it = brute_.emplace(k, brute_force_split(M, F, dual, opts_)).first;
    return it->second;
  }

  /// Theorem mode for M = F.ambient(); throws std::logic_error when strong routes disagree.
  const SplitPair& theorem(const Subgroup& F, bool dual) {
    const std::string k = F.key() + (dual ? "#d" : "#p");
    auto it = theorem_.find(k);
    if (it == theorem_.end())
      it = theorem_.emplace(k, dual ? dual_self_F_split_theorem(F, opts_) : self_F_split_theorem(F, opts_)).first;
    return it->second;
  }

  /// Brute force where it is definite, theorem mode otherwise.
  SplitPair decide(const Subgroup& F, bool dual) {
    SplitPair b = split(F.ambient(), F, dual);
    if (b.plain.answer != Answer::Unknown && b.strong.answer != Answer::Unknown) return b;
    return decide_self_F_split(F, dual, opts_);
  }

  const AbelianCheck& abelian(const FgAbGroup& g) {
    const std::string k = g.to_comma_string();
    auto it = abelian_.find(k);
    if (it == abelian_.end()) it = abelian_.emplace(k, end_ring_is_abelian(g, opts_)).first;
    return it->second;
  }

 private:
  SplitOptions opts_;
  std::map<std::string, std::vector<Subgroup>> subs_, fi_;
  std::map<std::string, SplitPair> brute_, theorem_;
  std::map<std::string, AbelianCheck> abelian_;
};

// ---------------------------------------------------------------------------
// Reports

struct Mismatch {
  std::string instance, expected, got;
};

struct Skip {
  std::string instance, reason;
};

struct TheoremReport {
  explicit TheoremReport(std::string name = {}) : id(std::move(name)) {}

  std::string id;
  std::size_t instances = 0;
  std::vector<Mismatch> failures;
  std::vector<Mismatch> expected_failures;  // counterexample patterns that failed as required
  std::vector<Skip> skipped;
  std::vector<std::string> notes;
  double elapsed_seconds = 0;

  bool passed() const { return failures.empty(); }

  void expect(const std::string& inst, const std::string& want, const std::string& got) {
    ++instances;
    if (want != got) failures.push_back({inst, want, got});
  }
  void expect(const std::string& inst, const char* want, const char* got) {
    expect(inst, std::string(want), std::string(got));
  }
  void expect(const std::string& inst, bool want, bool got) { expect(inst, yes_no(want), yes_no(got)); }
  void expect(const std::string& inst, Answer want, Answer got) { expect(inst, to_string(want), to_string(got)); }

  /// A pattern where the statement is supposed to break: `holds` must come out false.
  void expect_failure(const std::string& inst, bool holds, const std::string& detail) {
    ++instances;
    if (holds) {
      failures.push_back({inst, "equivalence fails", "equivalence holds"});
    } else {
      expected_failures.push_back({inst, "equivalence fails", detail});
    }
  }

  void skip(const std::string& inst, const std::string& reason) { skipped.push_back({inst, reason}); }

  static std::string yes_no(bool b) { return b ? "yes" : "no"; }
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::string inst(const FgAbGroup& g, const Subgroup& F, const std::string& what) {
  return g.to_string() + "; F = " + F.to_string() + "; " + what;
}

inline const char* side(bool dual) { return dual ? "dual" : "primal"; }

inline bool yes(Answer a) { return a == Answer::Yes; }

inline bool definite(const SplitPair& p) { return p.plain.answer != Answer::Unknown && p.strong.answer != Answer::Unknown; }

// fully invariant subgroups, or a recorded skip
inline const std::vector<Subgroup>* fi_or_skip(Session& s, const FgAbGroup& g, TheoremReport& r) {
  try {
    return &s.fi_subgroups(g);
  } catch (const CapExceeded& e) {
    r.skip(g.to_string(), e.what());
    return nullptr;
  }
}

inline bool all_fully_invariant(const std::vector<Subgroup>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Subgroup& x) { return is_fully_invariant(x); });
}

// F inside one summand of a biproduct: the F_k placed through the injections
inline Subgroup place(const Biproduct& b, const std::vector<Subgroup>& parts) {
  Subgroup out = Subgroup::trivial(b.object);
  for (std::size_t k = 0; k < parts.size(); ++k) out = sum(out, image_of(b.injections[k], parts[k]));
  return out;
}

// group orders from a corpus-sized pool
inline std::vector<FgAbGroup> pool(const Corpus& c, long bound) { return c.up_to(bound).groups; }

}  // namespace detail

/// Brute force and theorem mode agree on every variant.
inline TheoremReport check_tkey(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"tkey"};
  for (const auto& g : c.groups) {
    const auto* fis = detail::fi_or_skip(s, g, r);
    if (!fis) continue;
    for (const auto& F : *fis)
      for (bool dual : {false, true}) {
        const std::string base = detail::inst(g, F, detail::side(dual));
        const SplitPair& b = s.split(g, F, dual);
        if (!detail::definite(b)) {
          r.skip(base, b.plain.answer == Answer::Unknown ? b.plain.reason : b.strong.reason);
          continue;
        }
        try {
          const SplitPair& t = s.theorem(F, dual);
          if (!detail::definite(t)) {
            r.skip(base, "theorem mode: " + (t.plain.answer == Answer::Unknown ? t.plain.reason : t.strong.reason));
            continue;
          }
          r.expect(base + " plain", b.plain.answer, t.plain.answer);
          r.expect(base + " strong", b.strong.answer, t.strong.answer);
          for (const auto* v : {&b.plain, &b.strong, &t.plain, &t.strong})
            if (!recheck(*v)) r.failures.push_back({base, "certificates re-verify", to_string(v->mode)});
        } catch (const std::logic_error& e) {
          r.failures.push_back({base, "strong routes agree", e.what()});
        }
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// strong <=> plain and every summand containing F (dual: contained in F) is fully invariant.
inline TheoremReport check_trel(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"trel"};
  for (const auto& g : c.groups) {
    const auto* fis = detail::fi_or_skip(s, g, r);
    if (!fis) continue;
    for (const auto& F : *fis)
      for (bool dual : {false, true}) {
        const std::string base = detail::inst(g, F, detail::side(dual));
        const SplitPair& b = s.split(g, F, dual);
        if (!detail::definite(b)) {
          r.skip(base, b.strong.reason);
          continue;
        }
        std::vector<Subgroup> xs;
        for (const auto& x : s.subgroups(g))
          if ((dual ? F.contains(x) : x.contains(F)) && is_summand(x)) xs.push_back(x);
        bool rhs = detail::yes(b.plain.answer) && detail::all_fully_invariant(xs);
        r.expect(base + " strong", rhs, detail::yes(b.strong.answer));
        try {
          (void)s.theorem(F, dual);
        } catch (const std::logic_error& e) {
          r.failures.push_back({base, "strong routes agree", e.what()});
        }
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// strong <=> plain and End(M/F) (dual: End(F)) abelian.
inline TheoremReport check_tendab(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"tendab"};
  for (const auto& g : c.groups) {
    const auto* fis = detail::fi_or_skip(s, g, r);
    if (!fis) continue;
    for (const auto& F : *fis)
      for (bool dual : {false, true}) {
        const std::string base = detail::inst(g, F, detail::side(dual));
        const SplitPair& b = s.split(g, F, dual);
        if (!detail::definite(b)) {
          r.skip(base, b.strong.reason);
          continue;
        }
        bool rhs = false;
        if (detail::yes(b.plain.answer)) {
          const FgAbGroup part = dual ? F.object() : quotient(F).object;
          // small rings: the whole ring; larger ones: the element scan
          const HomGroup h = hom_basis(part, part);
          auto size = h.size();
          if (size && *size <= 1 << 14) {
            rhs = is_abelian_ring(std::get<EndRingView>(end_ring(part)));
          } else {
            const AbelianCheck& a = s.abelian(part);
            if (a.answer == Answer::Unknown) {
              r.skip(base, a.reason);
              continue;
            }
            rhs = a.answer == Answer::Yes;
          }
        }
        r.expect(base + " strong", rhs, detail::yes(b.strong.answer));
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// self-F-split => F meet K summand for summands K, and SIP for summands containing F;
/// dual: F + K summand and SSP for summands contained in F. Strong forms over fully invariant summands.
inline TheoremReport check_csip(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"csip"};
  for (const auto& g : c.groups) {
    const auto* fis = detail::fi_or_skip(s, g, r);
    if (!fis) continue;
    std::vector<Subgroup> summands, fi_summands;
    for (const auto& x : s.subgroups(g))
      if (is_summand(x)) {
        summands.push_back(x);
        if (is_fully_invariant(x)) fi_summands.push_back(x);
      }
    for (const auto& F : *fis)
      for (bool dual : {false, true}) {
        const SplitPair& b = s.split(g, F, dual);
        for (bool strong : {false, true}) {
          if (!detail::yes(strong ? b.strong.answer : b.plain.answer)) continue;
          const std::string base = detail::inst(g, F, std::string(detail::side(dual)) + (strong ? " strong" : " plain"));
          auto good = [&](const Subgroup& x) { return is_summand(x) && (!strong || is_fully_invariant(x)); };
          bool part_i = true;
          for (const auto& k : strong ? fi_summands : summands) part_i = part_i && good(dual ? sum(F, k) : intersect(F, k));
          r.expect(base + " (i)", true, part_i);
          bool part_ii = dual ? !ssp_violation(F, strong, s.options().subgroup_cap)
                              : !sip_violation(F, strong, s.options().subgroup_cap);
          r.expect(base + (dual ? " SSP" : " SIP"), true, part_ii);
        }
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

namespace detail {

// Ways to write g as A + B, one per isomorphism type of the pair: the primary
// cyclic factors split into two nonempty multisets.
inline std::vector<std::pair<FgAbGroup, FgAbGroup>> decompositions(const FgAbGroup& g) {
  std::vector<Int> primary;
  for (const Int& d : g.factors())
    for (const Int& p : prime_divisors(d)) {
      Int q = 1, e = d;
      while (e % p == 0) {
        e /= p;
        q *= p;
      }
      primary.push_back(q);
    }
  std::sort(primary.begin(), primary.end());
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<FgAbGroup, FgAbGroup>> out;
  const std::size_t n = primary.size();
  for (std::uint64_t mask = 1; n > 0 && mask + 1 < (std::uint64_t(1) << n); ++mask) {
    std::vector<Int> a, b;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(primary[i]);
    FgAbGroup ga = FgAbGroup::from_cyclic_orders(a), gb = FgAbGroup::from_cyclic_orders(b);
    if (gb < ga) std::swap(ga, gb);
    if (seen.emplace(ga.to_comma_string(), gb.to_comma_string()).second) out.emplace_back(ga, gb);
  }
  return out;
}

}  // namespace detail

/// N = N1 + N2: N (strongly) M-F-split <=> each N_k (strongly) M-(F meet N_k)-split; dual with
/// the image of F in N/N_l, which is the projection of F to N_k.
inline TheoremReport check_tds(const Corpus& c, Session& s, long max_order = 36) {
  detail::Stopwatch w;
  TheoremReport r{"tds"};
  const auto sources = detail::pool(c, 6);
  for (const auto& n : c.up_to(max_order).groups) {
    for (const auto& [n1, n2] : detail::decompositions(n)) {
      Biproduct b = biproduct({n1, n2});
      if (!(b.object == n)) throw std::logic_error("biproduct is not canonical");
      const auto* fis = detail::fi_or_skip(s, n, r);
      if (!fis) continue;
      std::vector<FgAbGroup> ms = sources;
      if (std::find(ms.begin(), ms.end(), n) == ms.end()) ms.push_back(n);
      for (const auto& F : *fis) {
        std::vector<Subgroup> meet, proj;
        for (std::size_t k = 0; k < 2; ++k) {
          meet.push_back(preimage(b.injections[k], F));
          proj.push_back(image_of(b.projections[k], F));
        }
        const std::string dec = "N = " + n1.to_string() + " + " + n2.to_string();
        for (std::size_t k = 0; k < 2; ++k) {
          r.expect(detail::inst(n, F, dec + " projection equals meet " + std::to_string(k + 1)), true, meet[k] == proj[k]);
          r.expect(detail::inst(n, F, dec + " meet fully invariant " + std::to_string(k + 1)), true,
                   is_fully_invariant(meet[k]));
        }
        for (const auto& m : ms)
          for (bool dual : {false, true}) {
            const SplitPair& whole = s.split(m, F, dual);
            const SplitPair& a = s.split(m, dual ? proj[0] : meet[0], dual);
            const SplitPair& bb = s.split(m, dual ? proj[1] : meet[1], dual);
            if (!detail::definite(whole) || !detail::definite(a) || !detail::definite(bb)) {
              r.skip(detail::inst(n, F, dec + "; M = " + m.to_string()), "Hom over budget");
              continue;
            }
            const std::string base = detail::inst(n, F, dec + "; M = " + m.to_string() + "; " + detail::side(dual));
            r.expect(base + " plain", detail::yes(whole.plain.answer),
                     detail::yes(a.plain.answer) && detail::yes(bb.plain.answer));
            r.expect(base + " strong", detail::yes(whole.strong.answer),
                     detail::yes(a.strong.answer) && detail::yes(bb.strong.answer));
          }
      }
    }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// Families of two with zero Homs between the members, plus patterns where the Hom
/// conditions fail and the equivalence breaks.
inline TheoremReport check_thomzero(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"thomzero"};
  const auto& gs = c.groups;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      const FgAbGroup &m1 = gs[i], &m2 = gs[j];
      if (m1.size() == 0 || m2.size() == 0) continue;
      if (gcd(*m1.order(), *m2.order()) != 1 || *m1.order() * *m2.order() > Int(c.max_order)) continue;
      Biproduct b = biproduct({m1, m2});
      const auto* f1s = detail::fi_or_skip(s, m1, r);
      const auto* f2s = detail::fi_or_skip(s, m2, r);
      if (!f1s || !f2s) continue;
      for (const auto& f1 : *f1s)
        for (const auto& f2 : *f2s) {
          Subgroup F = detail::place(b, {f1, f2});
          const std::string base = b.object.to_string() + "; M1 = " + m1.to_string() + ", F1 = " + f1.to_string() +
                                   "; M2 = " + m2.to_string() + ", F2 = " + f2.to_string();
          if (!is_fully_invariant(F)) {
            r.expect(base + " F fully invariant", true, false);
            continue;
          }
          for (bool dual : {false, true}) {
            const SplitPair &whole = s.split(b.object, F, dual), &a = s.split(m1, f1, dual), &bb = s.split(m2, f2, dual);
            // Hom(C_k, C_l), dual Hom(F_k, F_l)
            FgAbGroup x1 = dual ? f1.object() : quotient(f1).object, x2 = dual ? f2.object() : quotient(f2).object;
            bool homs_zero = hom_basis(x1, x2).is_zero() && hom_basis(x2, x1).is_zero();
            const std::string v = base + "; " + detail::side(dual);
            r.expect(v + " (i)", detail::yes(whole.plain.answer), detail::yes(a.plain.answer) && detail::yes(bb.plain.answer));
            r.expect(v + " (ii)", detail::yes(whole.strong.answer),
                     detail::yes(a.strong.answer) && detail::yes(bb.strong.answer) && homs_zero);
          }
        }
    }

  // Hom(C_1, C_2) != 0 breaks the strong form without that condition
  auto naive_strong = [&](const FgAbGroup& m1, const Subgroup& f1, const FgAbGroup& m2, const Subgroup& f2, bool dual) {
    Biproduct b = biproduct({m1, m2});
    Subgroup F = detail::place(b, {f1, f2});
    bool lhs = detail::yes(s.split(b.object, F, dual).strong.answer);
    bool rhs = detail::yes(s.split(m1, f1, dual).strong.answer) && detail::yes(s.split(m2, f2, dual).strong.answer);
    const std::string v = std::string(dual ? "dual strong" : "strong") + " without the Hom condition: " +
                          m1.to_string() + " (F1 = " + f1.to_string() + ") + " + m2.to_string() + " (F2 = " +
                          f2.to_string() + ")";
    r.expect_failure(v, lhs == rhs, std::string("sum ") + (lhs ? "yes" : "no") + ", parts " + (rhs ? "yes" : "no"));
  };
  const FgAbGroup z2 = FgAbGroup::cyclic(2);
  naive_strong(z2, Subgroup::trivial(z2), z2, Subgroup::trivial(z2), false);
  naive_strong(z2, Subgroup::whole(z2), z2, Subgroup::whole(z2), true);

  // Z/3 + Z with F1 = Z/3 and Z/2 with F2 = 0: each strongly self-F_k-split, the sum is not
  // self-split, and Hom(M_1, M_2) != 0. Infinite, so theorem mode.
  {
    const FgAbGroup m1 = FgAbGroup::of({3, 0}), m2 = z2;
    Biproduct b = biproduct({m1, m2});
    Subgroup f1 = Preradical::torsion().evaluate(m1), f2 = Subgroup::trivial(m2);
    Subgroup F = detail::place(b, {f1, f2});
    const std::string v = "without Hom(M1, M2) = 0: " + m1.to_string() + " (F1 = torsion) + " + m2.to_string() + " (F2 = 0)";
    if (!is_fully_invariant(F)) {
      r.expect(v + " F fully invariant", true, false);
    } else {
      SplitPair whole = s.decide(F, false), a = s.decide(f1, false), bb = s.decide(f2, false);
      bool rhs = detail::yes(a.strong.answer) && detail::yes(bb.strong.answer);
      r.expect_failure(v, whole.plain.answer != Answer::No || !rhs,
                       std::string("sum ") + to_string(whole.plain.answer) + " (" + to_string(whole.plain.mode) +
                           "), parts strongly " + (rhs ? "yes" : "no"));
      r.notes.push_back(v + ": " + whole.plain.reason);
    }
  }
  r.notes.push_back(
      "on finite groups the non-strong equivalences cannot break: semisimple quotients and kernels stay semisimple "
      "under direct sums");
  r.elapsed_seconds = w.seconds();
  return r;
}

/// For M with SIP over (fully invariant) summands containing r(M): N1 + N2 is M-r(N1 + N2)-split
/// <=> each N_k is M-r(N_k)-split.
inline TheoremReport check_tdsprerad(const Corpus& c, Session& s,
                                     const std::vector<Preradical>& rs = {Preradical::socle(), Preradical::ppart(2),
                                                                          Preradical::ntorsion(2)}) {
  detail::Stopwatch w;
  TheoremReport r{"tdsprerad"};
  const auto ms = detail::pool(c, 12), ns = detail::pool(c, 8);
  for (const auto& pre : rs)
    for (const auto& m : ms) {
      Subgroup rm = pre.evaluate(m);
      bool sip[2] = {has_sip_summands_containing(m, rm, false, s.options().subgroup_cap),
                     has_sip_summands_containing(m, rm, true, s.options().subgroup_cap)};
      for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = i; j < ns.size(); ++j) {
          const FgAbGroup &n1 = ns[i], &n2 = ns[j];
          if (n1.size() == 0 || n2.size() == 0 || *n1.order() * *n2.order() > Int(c.max_order)) continue;
          Biproduct b = biproduct({n1, n2});
          Subgroup rn = pre.evaluate(b.object);
          const std::string base = pre.name() + "; M = " + m.to_string() + "; N = " + n1.to_string() + " + " +
                                   n2.to_string();
          r.expect(base + " r commutes with the sum", true,
                   rn == detail::place(b, {pre.evaluate(n1), pre.evaluate(n2)}));
          const SplitPair &whole = s.split(m, rn, false), &a = s.split(m, pre.evaluate(n1), false),
                          &bb = s.split(m, pre.evaluate(n2), false);
          for (bool strong : {false, true}) {
            const std::string v = base + (strong ? " strong" : " plain");
            if (!sip[strong]) {
              r.skip(v, "M lacks SIP for the summands containing r(M)");
              continue;
            }
            auto ans = [&](const SplitPair& p) { return detail::yes(strong ? p.strong.answer : p.plain.answer); };
            r.expect(v, ans(whole), ans(a) && ans(bb));
          }
        }
    }
  r.elapsed_seconds = w.seconds();
  return r;
}

namespace detail {

inline bool squarefree_exponent(const FgAbGroup& g) { return is_squarefree(g.exponent()); }

}  // namespace detail

/// n squarefree <=> every group of exponent dividing n is (dual)(strongly) self-F-split for all
/// fully invariant F. Checked for n <= min(max_n, corpus bound) over the corpus.
inline TheoremReport check_semisimple_instantiation(const Corpus& c, Session& s, long max_n = 30) {
  detail::Stopwatch w;
  TheoremReport r{"semis"};
  const char* names[4] = {"plain", "strong", "dual plain", "dual strong"};
  for (long n = 1; n <= std::min(max_n, c.max_order); ++n) {
    const bool sqf = is_squarefree(Int(n));
    bool have_nonsemisimple = false;
    std::optional<std::string> witness;
    for (const auto& g : c.groups) {
      if (Int(n) % g.exponent() != 0) continue;
      // counterexamples for non-squarefree n come from groups that are not semisimple
      if (!sqf && detail::squarefree_exponent(g)) continue;
      if (!sqf) have_nonsemisimple = true;
      if (!sqf && witness) break;
      const auto* fis = detail::fi_or_skip(s, g, r);
      if (!fis) continue;
      for (const auto& F : *fis) {
        const SplitPair &p = s.split(g, F, false), &d = s.split(g, F, true);
        const Answer got[4] = {p.plain.answer, p.strong.answer, d.plain.answer, d.strong.answer};
        for (int k = 0; k < 4; ++k) {
          const std::string v = "n = " + std::to_string(n) + "; " + detail::inst(g, F, names[k]);
          if (got[k] == Answer::Unknown) {
            r.skip(v, "over budget");
            continue;
          }
          if (sqf) {
            r.expect(v, Answer::Yes, got[k]);
          } else if (!witness && got[k] == Answer::No) {
            witness = v;
          }
        }
        if (!sqf && witness) break;
      }
    }
    if (!sqf) {
      const std::string v = "n = " + std::to_string(n) + " counterexample";
      if (!have_nonsemisimple) {
        r.skip(v, "no group of non-squarefree exponent dividing n in the corpus");
      } else {
        r.expect(v, "found", witness ? "found" : "none");
        if (witness) r.notes.push_back(*witness + " is no");
      }
    }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// Self-Rad(M)-split <=> Rad(M) = 0 and (strongly) self-Rickart; dual self-Soc(M)-split <=> semisimple.
inline TheoremReport check_soc_rad_props(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"socrad"};
  for (const auto& g : c.groups) {
    Subgroup rad = Preradical::radical().evaluate(g), soc = Preradical::socle().evaluate(g);
    const SplitPair &on_rad = s.split(g, rad, false), &rickart = s.split(g, Subgroup::trivial(g), false),
                    &on_soc = s.split(g, soc, true);
    if (!detail::definite(on_rad) || !detail::definite(rickart) || !detail::definite(on_soc)) {
      r.skip(g.to_string(), "over budget");
      continue;
    }
    r.expect(g.to_string() + "; self-Rad-split", rad.is_trivial() && detail::yes(rickart.plain.answer),
             detail::yes(on_rad.plain.answer));
    r.expect(g.to_string() + "; strongly self-Rad-split", rad.is_trivial() && detail::yes(rickart.strong.answer),
             detail::yes(on_rad.strong.answer));
    r.expect(g.to_string() + "; dual self-Soc-split", soc.is_whole(), detail::yes(on_soc.plain.answer));
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// The strong form of the socle statement, checked as stated: dual strongly self-Soc(M)-split <=> semisimple.
inline TheoremReport check_soc_strong(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"socstrong"};
  for (const auto& g : c.groups) {
    Subgroup soc = Preradical::socle().evaluate(g);
    const SplitPair& on_soc = s.split(g, soc, true);
    if (!detail::definite(on_soc)) {
      r.skip(g.to_string(), "over budget");
      continue;
    }
    r.expect(g.to_string() + "; dual strongly self-Soc-split", soc.is_whole(), detail::yes(on_soc.strong.answer));
  }
  r.notes.push_back("semisimple groups with a repeated prime have a non-abelian endomorphism ring");
  r.elapsed_seconds = w.seconds();
  return r;
}

/// N M-F-split => N' M'-(F meet N')-split for epis M -> M' and monos N' -> N with F meet N'
/// fully invariant in N'.
inline TheoremReport check_epimono(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"epimono"};
  const auto small = detail::pool(c, 8);
  for (const auto& n : small) {
    const auto* fis = detail::fi_or_skip(s, n, r);
    if (!fis) continue;
    for (const auto& F : *fis)
      for (const auto& m : small) {
        const SplitPair& top = s.split(m, F, false);
        if (!detail::yes(top.plain.answer)) continue;
        for (const auto& k : s.subgroups(m)) {
          const FgAbGroup mq = quotient(k).object;
          for (const auto& np : s.subgroups(n)) {
            Subgroup fp = preimage(np.inclusion(), intersect(F, np));
            if (!is_fully_invariant(fp)) continue;
            const SplitPair& low = s.split(mq, fp, false);
            const std::string v = detail::inst(n, F, "M = " + m.to_string() + "; M' = M/" + k.to_string() + "; N' = " +
                                                         np.to_string());
            r.expect(v + " plain", true, detail::yes(low.plain.answer));
            if (detail::yes(top.strong.answer)) r.expect(v + " strong", true, detail::yes(low.strong.answer));
          }
        }
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

/// N (strongly) M-F-split <=> for all summands M1, N1: N1 M1-(F meet N1)-split; dual with
/// N/N1, M/M1 and (F + N1)/N1.
inline TheoremReport check_strel(const Corpus& c, Session& s) {
  detail::Stopwatch w;
  TheoremReport r{"strel"};
  const auto small = detail::pool(c, 8);
  for (const auto& n : small) {
    const auto* fis = detail::fi_or_skip(s, n, r);
    if (!fis) continue;
    std::vector<Subgroup> ns;
    for (const auto& x : s.subgroups(n))
      if (is_summand(x)) ns.push_back(x);
    for (const auto& F : *fis)
      for (const auto& m : small) {
        std::vector<Subgroup> ms;
        for (const auto& x : s.subgroups(m))
          if (is_summand(x)) ms.push_back(x);
        for (bool dual : {false, true}) {
          const SplitPair& top = s.split(m, F, dual);
          bool all_plain = true, all_strong = true;
          for (const auto& m1 : ms)
            for (const auto& n1 : ns) {
              const SplitPair* p;
              if (dual) {
                Cokernel qn = quotient(n1);
                p = &s.split(quotient(m1).object, image_of(qn.epi, F), true);
              } else {
                p = &s.split(m1.object(), preimage(n1.inclusion(), intersect(F, n1)), false);
              }
              all_plain = all_plain && detail::yes(p->plain.answer);
              all_strong = all_strong && detail::yes(p->strong.answer);
            }
          const std::string v = detail::inst(n, F, "M = " + m.to_string() + "; " + detail::side(dual));
          r.expect(v + " plain", detail::yes(top.plain.answer), all_plain);
          r.expect(v + " strong", detail::yes(top.strong.answer), all_strong);
        }
      }
  }
  r.elapsed_seconds = w.seconds();
  return r;
}

// ---------------------------------------------------------------------------
// Worked examples

struct ExampleRow {
  std::string label;
  Subgroup F;
  bool fully_invariant = false, summand = false;
  Answer got[4] = {Answer::Unknown, Answer::Unknown, Answer::Unknown, Answer::Unknown};  // plain, strong, dual, dual strong
  Answer expected[4] = {Answer::Unknown, Answer::Unknown, Answer::Unknown, Answer::Unknown};
  Mode mode = Mode::BruteForce;

  bool matches() const { return std::equal(std::begin(got), std::end(got), std::begin(expected)); }
};

struct ExampleTable {
  long p = 0, q = 0;
  FgAbGroup group;
  std::size_t subgroup_count = 0;
  std::vector<ExampleRow> rows;

  bool all_fully_invariant() const {
    return std::all_of(rows.begin(), rows.end(), [](const ExampleRow& r) { return r.fully_invariant; });
  }
  bool matches() const {
    return subgroup_count == 6 && all_fully_invariant() &&
           std::all_of(rows.begin(), rows.end(), [](const ExampleRow& r) { return r.matches(); });
  }
};

struct TorsionSample {
  FgAbGroup group;
  std::size_t free_rank = 0;
  Answer plain = Answer::Unknown, strong = Answer::Unknown;
  Answer expected_strong = Answer::Unknown;
  Mode mode = Mode::Theorem;
  std::string witness;

  bool matches() const { return plain == Answer::Yes && strong == expected_strong; }
};

struct ExamplesReport {
  std::vector<ExampleTable> tables;
  std::vector<TorsionSample> torsion;

  bool matches() const {
    return std::all_of(tables.begin(), tables.end(), [](const ExampleTable& t) { return t.matches(); }) &&
           std::all_of(torsion.begin(), torsion.end(), [](const TorsionSample& t) { return t.matches(); });
  }

  std::vector<std::string> mismatches() const;
};

inline const char* kFlagNames[4] = {"self_F_split", "strongly", "dual_self_F_split", "dual_strongly"};

inline std::vector<std::string> ExamplesReport::mismatches() const {
  std::vector<std::string> out;
  for (const auto& t : tables) {
    const std::string head = "(p, q) = (" + std::to_string(t.p) + ", " + std::to_string(t.q) + ") ";
    if (t.subgroup_count != 6) out.push_back(head + "subgroup count " + std::to_string(t.subgroup_count));
    for (const auto& row : t.rows)
      for (int k = 0; k < 4; ++k)
        if (row.got[k] != row.expected[k])
          out.push_back(head + row.label + " " + kFlagNames[k] + ": expected " + to_string(row.expected[k]) + ", got " +
                        to_string(row.got[k]));
  }
  for (const auto& s : torsion)
    if (!s.matches())
      out.push_back("torsion " + s.group.to_string() + ": expected yes/" + to_string(s.expected_strong) + ", got " +
                    to_string(s.plain) + "/" + to_string(s.strong));
  return out;
}

inline void require_distinct_primes(long p, long q) {
  if (!is_prime(Int(p)) || !is_prime(Int(q)) || p == q)
    throw std::invalid_argument("p and q must be distinct primes, got " + std::to_string(p) + ", " + std::to_string(q));
}

/// Z/p^2 + Z/q: subgroups 0, H1 (order q), H2 (order p), H3 (order pq), H4 (order p^2), G, with
/// the classification stated for it: self-split exactly for {H4, G}, dual exactly for {H1, G}.
inline ExampleTable cyclic_example_table(long p, long q, Session& s) {
  require_distinct_primes(p, q);
  ExampleTable t;
  t.p = p;
  t.q = q;
  t.group = FgAbGroup::from_cyclic_orders({Int(p * p), Int(q)});
  const auto& subs = s.subgroups(t.group);
  t.subgroup_count = subs.size();
  const std::vector<std::pair<std::string, long>> labels{{"0", 1},     {"H1", q},     {"H2", p},
                                                         {"H3", p * q}, {"H4", p * p}, {"G", p * p * q}};
  for (const auto& [label, order] : labels) {
    auto it = std::find_if(subs.begin(), subs.end(), [&](const Subgroup& x) { return *x.order() == Int(order); });
    if (it == subs.end()) continue;
    ExampleRow row;
    row.label = label;
    row.F = *it;
    row.fully_invariant = is_fully_invariant(row.F);
    row.summand = is_summand(row.F);
    const bool primal_yes = label == "H4" || label == "G", dual_yes = label == "H1" || label == "G";
    for (int k = 0; k < 4; ++k) row.expected[k] = (k < 2 ? primal_yes : dual_yes) ? Answer::Yes : Answer::No;
    if (row.fully_invariant) {
      SplitPair pr = s.decide(row.F, false), du = s.decide(row.F, true);
      row.got[0] = pr.plain.answer;
      row.got[1] = pr.strong.answer;
      row.got[2] = du.plain.answer;
      row.got[3] = du.strong.answer;
      row.mode = pr.plain.mode;
    }
    t.rows.push_back(row);
  }
  return t;
}

/// G self-t(G)-split for finitely generated G; strongly iff the free rank is at most one.
inline TorsionSample torsion_sample(const FgAbGroup& torsion, std::size_t free_rank, Session& s) {
  std::vector<FgAbGroup> parts{torsion};
  if (free_rank > 0) parts.push_back(FgAbGroup::free(free_rank));
  TorsionSample t;
  t.group = biproduct(parts).object;
  t.free_rank = free_rank;
  SplitPair v = s.decide(Preradical::torsion().evaluate(t.group), false);
  t.plain = v.plain.answer;
  t.strong = v.strong.answer;
  t.mode = v.strong.mode;
  t.expected_strong = free_rank <= 1 ? Answer::Yes : Answer::No;
  if (v.strong.counterexample) t.witness = v.strong.counterexample->subgroup.to_string();
  return t;
}

inline ExamplesReport paper_examples_report(Session& s,
                                            const std::vector<std::pair<long, long>>& pqs = {{2, 3}, {3, 2}, {2, 5}},
                                            long torsion_bound = 16, std::size_t max_free_rank = 2) {
  ExamplesReport r;
  for (auto [p, q] : pqs) r.tables.push_back(cyclic_example_table(p, q, s));
  if (torsion_bound < 1) return r;
  for (const auto& t : enumerate_groups(torsion_bound).groups)
    for (std::size_t k = 0; k <= max_free_rank; ++k) r.torsion.push_back(torsion_sample(t, k, s));
  return r;
}

// ---------------------------------------------------------------------------
// Classification of the fully invariant subgroups of one group

struct ClassifyRow {
  Subgroup F;
  bool summand = false;
  SplitPair primal, dual;
};

struct Classification {
  FgAbGroup group;
  std::vector<ClassifyRow> rows;
  bool partial = false;
  std::string note;
};

inline Classification classify(const FgAbGroup& g, Session& s) {
  Classification c;
  c.group = g;
  std::vector<Subgroup> fs;
  try {
    fs = s.fi_subgroups(g);
  } catch (const CapExceeded& e) {
    c.partial = true;
    c.note = std::string(e.what()) + "; listing preradical values only";
    std::set<std::string> seen;
    std::vector<Preradical> rs{Preradical::torsion(), Preradical::socle(), Preradical::radical(), Preradical::divisible()};
    if (g.torsion_size() > 0)
      for (const Int& p : prime_divisors(g.exponent())) rs.push_back(Preradical::ppart(p.get_ui()));
    for (long k = 2; k <= 4; ++k) {
      rs.push_back(Preradical::mul(k));
      rs.push_back(Preradical::ntorsion(k));
    }
    std::vector<Subgroup> cand{Subgroup::trivial(g)};
    for (const auto& r : rs) cand.push_back(r.evaluate(g));
    cand.push_back(Subgroup::whole(g));
    for (auto& x : cand)
      if (seen.insert(x.key()).second) fs.push_back(x);
    std::sort(fs.begin(), fs.end(), subgroup_less);
  }
  for (const auto& F : fs) c.rows.push_back({F, is_summand(F), s.decide(F, false), s.decide(F, true)});
  return c;
}

// ---------------------------------------------------------------------------
// Running and serializing

inline const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"tkey",     "trel",  "tendab",  "csip",   "tds",     "thomzero",
                                            "tdsprerad", "semis", "socrad", "socstrong", "epimono", "strel"};
  return ids;
}

inline void validate_theorem_ids(const std::vector<std::string>& ids) {
  for (const auto& id : ids)
    if (std::find(theorem_ids().begin(), theorem_ids().end(), id) == theorem_ids().end()) {
      std::string valid;
      for (const auto& v : theorem_ids()) valid += (valid.empty() ? "" : ", ") + v;
      throw std::invalid_argument("unknown theorem id '" + id + "'; valid ids: " + valid);
    }
}

inline TheoremReport run_theorem(const std::string& id, const Corpus& c, Session& s) {
  validate_theorem_ids({id});
  if (id == "tkey") return check_tkey(c, s);
  if (id == "trel") return check_trel(c, s);
  if (id == "tendab") return check_tendab(c, s);
  if (id == "csip") return check_csip(c, s);
  if (id == "tds") return check_tds(c, s);
  if (id == "thomzero") return check_thomzero(c, s);
  if (id == "tdsprerad") return check_tdsprerad(c, s);
  if (id == "semis") return check_semisimple_instantiation(c, s);
  if (id == "socrad") return check_soc_rad_props(c, s);
  if (id == "socstrong") return check_soc_strong(c, s);
  if (id == "epimono") return check_epimono(c, s);
  return check_strel(c, s);
}

using nlohmann::ordered_json;

inline ordered_json to_json(const SplitOptions& o) {
  return {{"hom_budget", o.hom_budget},
          {"endring_cap", o.endring_cap},
          {"subgroup_cap", o.subgroup_cap},
          {"entry_bound", o.entry_bound}};
}

inline ordered_json to_json(const TheoremReport& r) {
  auto list = [](const std::vector<Mismatch>& xs) {
    ordered_json a = ordered_json::array();
    for (const auto& x : xs) a.push_back({{"instance", x.instance}, {"expected", x.expected}, {"got", x.got}});
    return a;
  };
  ordered_json skipped = ordered_json::array();
  for (const auto& x : r.skipped) skipped.push_back({{"instance", x.instance}, {"reason", x.reason}});
  return {{"id", r.id},
          {"passed", r.passed()},
          {"instances", r.instances},
          {"failures", list(r.failures)},
          {"expected_failures", list(r.expected_failures)},
          {"skipped", skipped},
          {"notes", r.notes},
          {"elapsed_seconds", r.elapsed_seconds}};
}

inline ordered_json to_json(const SplitVerdict& v) {
  ordered_json j{{"answer", to_string(v.answer)}, {"mode", to_string(v.mode)}, {"reason", v.reason}};
  if (v.counterexample) {
    j["counterexample"] = {{"g", v.counterexample->g.to_string()},
                           {"subgroup", v.counterexample->subgroup.to_string()},
                           {"failure", to_string(v.counterexample->failure)}};
  }
  if (!v.certificates.empty()) j["certificates"] = v.certificates.size();
  if (!v.trace.empty()) j["trace"] = v.trace;
  return j;
}

inline ordered_json to_json(const ExamplesReport& r) {
  ordered_json tables = ordered_json::array();
  for (const auto& t : r.tables) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json got, want;
      for (int k = 0; k < 4; ++k) {
        got[kFlagNames[k]] = to_string(row.got[k]);
        want[kFlagNames[k]] = to_string(row.expected[k]);
      }
      rows.push_back({{"label", row.label},
                      {"subgroup", row.F.to_string()},
                      {"order", row.F.order()->get_str()},
                      {"fully_invariant", row.fully_invariant},
                      {"summand", row.summand},
                      {"computed", got},
                      {"expected", want},
                      {"matches", row.matches()},
                      {"mode", to_string(row.mode)}});
    }
    tables.push_back({{"p", t.p},
                      {"q", t.q},
                      {"group", t.group.to_string()},
                      {"subgroups", t.subgroup_count},
                      {"all_fully_invariant", t.all_fully_invariant()},
                      {"matches", t.matches()},
                      {"rows", rows}});
  }
  ordered_json torsion = ordered_json::array();
  for (const auto& s : r.torsion)
    torsion.push_back({{"group", s.group.to_string()},
                       {"free_rank", s.free_rank},
                       {"self_F_split", to_string(s.plain)},
                       {"strongly", to_string(s.strong)},
                       {"expected_strongly", to_string(s.expected_strong)},
                       {"mode", to_string(s.mode)},
                       {"witness", s.witness},
                       {"matches", s.matches()}});
  return {{"cyclic_tables", tables}, {"torsion_splitting", torsion}, {"matches", r.matches()}, {"mismatches", r.mismatches()}};
}

inline ordered_json to_json(const Classification& c) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : c.rows)
    rows.push_back({{"subgroup", r.F.to_string()},
                    {"order", r.F.order() ? r.F.order()->get_str() : "infinite"},
                    {"summand", r.summand},
                    {"self_F_split", to_json(r.primal.plain)},
                    {"strongly", to_json(r.primal.strong)},
                    {"dual_self_F_split", to_json(r.dual.plain)},
                    {"dual_strongly", to_json(r.dual.strong)}});
  return {{"group", c.group.to_string()}, {"partial", c.partial}, {"note", c.note}, {"rows", rows}};
}

struct VerifyResult {
  SplitOptions caps;
  Corpus corpus;
  std::vector<TheoremReport> theorems;
  std::optional<ExamplesReport> examples;

  bool passed() const {
    return std::all_of(theorems.begin(), theorems.end(), [](const TheoremReport& t) { return t.passed(); });
  }
};

inline VerifyResult verify(long max_order, const std::vector<std::string>& ids, Session& s, bool with_examples = true) {
  validate_theorem_ids(ids);
  VerifyResult v{s.options(), enumerate_groups(max_order), {}, std::nullopt};
  for (const auto& id : ids) v.theorems.push_back(run_theorem(id, v.corpus, s));
  if (with_examples) v.examples = paper_examples_report(s);
  return v;
}

inline ordered_json to_json(const VerifyResult& v) {
  ordered_json theorems = ordered_json::array();
  for (const auto& t : v.theorems) theorems.push_back(to_json(t));
  ordered_json j{{"engine_version", kEngineVersion},
                 {"caps", to_json(v.caps)},
                 {"corpus_spec", {{"max_order", v.corpus.max_order}, {"groups", v.corpus.groups.size()}}},
                 {"theorems", theorems},
                 {"examples", ordered_json::array()},
                 {"passed", v.passed()}};
  if (v.examples) j["examples"].push_back(to_json(*v.examples));
  return j;
}

/// Removes every timing field, for byte comparisons between runs.
inline ordered_json without_timing(ordered_json j) {
  if (j.is_object()) {
    j.erase("elapsed_seconds");
    for (auto& [k, v] : j.items()) v = without_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timing(v);
  }
  return j;
}

}  // namespace fisplit
