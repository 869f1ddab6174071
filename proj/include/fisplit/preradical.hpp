#pragma once

// Concrete preradicals of finitely generated abelian groups, evaluated by
// closed forms on the invariant factors. Every preradical commutes with finite
// direct sums, so r(Z/d_1 x ... x Z/d_k) is computed factor by factor.

#include "fisplit/subobj.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fisplit {

/// Distinct prime divisors of n > 0, ascending.
inline std::vector<Int> prime_divisors(Int n) {
  std::vector<Int> ps;
  if (n < 0) n = -n;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  auto ps = prime_divisors(n);
  return ps.size() == 1 && ps[0] == n;
}

/// Product of the distinct primes dividing n.
inline Int radical_of(const Int& n) {
  Int r = 1;
  for (const Int& p : prime_divisors(n)) r *= p;
  return r;
}

inline bool is_squarefree(const Int& n) { return n > 0 && radical_of(n) == n; }

class Preradical {
 public:
  enum class Kind { Torsion, Socle, Radical, PPart, MulImage, NTorsion, Divisible };

  static Preradical torsion() { return Preradical(Kind::Torsion, 0); }
  static Preradical socle() { return Preradical(Kind::Socle, 0); }
  static Preradical radical() { return Preradical(Kind::Radical, 0); }
  static Preradical ppart(const Int& p) {
    if (!is_prime(p)) throw std::invalid_argument("ppart needs a prime, got " + p.get_str());
    return Preradical(Kind::PPart, p);
  }
  static Preradical mul(const Int& n) {
    if (n < 1) throw std::invalid_argument("mul needs a positive integer");
    return Preradical(Kind::MulImage, n);
  }
  static Preradical ntorsion(const Int& n) {
    if (n < 1) throw std::invalid_argument("ntorsion needs a positive integer");
    return Preradical(Kind::NTorsion, n);
  }
  static Preradical divisible() { return Preradical(Kind::Divisible, 0); }

  Kind kind() const { return kind_; }
  const Int& parameter() const { return param_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Torsion: return "torsion";
      case Kind::Socle: return "socle";
      case Kind::Radical: return "radical";
      case Kind::PPart: return "ppart:" + param_.get_str();
      case Kind::MulImage: return "mul:" + param_.get_str();
      case Kind::NTorsion: return "ntorsion:" + param_.get_str();
      case Kind::Divisible: return "divisible";
    }
    return "";
  }

  /// Generator of r(Z/d) inside Z/d (d = 0 meaning Z), as a multiple of 1.
  Int factor_generator(const Int& d) const {
    switch (kind_) {
      case Kind::Torsion: return d == 0 ? Int(0) : Int(1);
      case Kind::Socle: return d == 0 ? Int(0) : Int(d / radical_of(d));
      case Kind::Radical: return d == 0 ? Int(0) : radical_of(d);
      case Kind::PPart: {
        if (d == 0) return 0;
        Int q = d;
        while (q % param_ == 0) q /= param_;
        return q;
      }
      case Kind::MulImage: return param_;
      case Kind::NTorsion: return d == 0 ? Int(0) : Int(d / gcd(param_, d));
      case Kind::Divisible: return 0;
    }
    return 0;
  }

  Subgroup evaluate(const FgAbGroup& m) const {
    IntMatrix g(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) g(i, i) = factor_generator(m.factor(i));
    return Subgroup(m, g);
  }

  // Per-instance properties on the category of finitely generated groups.
  // Radical is cohereditary on finite groups but not here: Rad(Z) = 0, Rad(Z/4) != 0.
  bool hereditary() const {
    return kind_ == Kind::Torsion || kind_ == Kind::Socle || kind_ == Kind::PPart || kind_ == Kind::NTorsion ||
           kind_ == Kind::Divisible;
  }
  bool cohereditary() const {
    return kind_ == Kind::MulImage || kind_ == Kind::Divisible;
  }
  bool cohereditary_on_finite() const { return cohereditary() || kind_ == Kind::Radical || kind_ == Kind::Torsion || kind_ == Kind::PPart; }
  bool idempotent() const { return kind_ != Kind::Radical && kind_ != Kind::MulImage; }
  /// r(M / r(M)) = 0
  bool is_radical() const { return kind_ != Kind::Socle && kind_ != Kind::NTorsion; }

  friend bool operator==(const Preradical& a, const Preradical& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_;
  }

 private:
  Preradical(Kind k, Int p) : kind_(k), param_(std::move(p)) {}
  Kind kind_;
  Int param_;
};

/// `torsion`, `socle`, `radical`, `ppart:<p>`, `mul:<n>`, `ntorsion:<n>`, `divisible`.
inline Preradical parse_preradical(std::string_view s) {
  auto colon = s.find(':');
  std::string_view head = s.substr(0, colon);
  auto arg = [&]() -> Int {
    if (colon == std::string_view::npos || colon + 1 == s.size())
      throw std::invalid_argument("preradical '" + std::string(head) + "' needs a parameter");
    std::string a(s.substr(colon + 1));
    for (char c : a)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad parameter '" + a + "'");
    return Int(a);
  };
  auto no_arg = [&](Preradical r) {
    if (colon != std::string_view::npos) throw std::invalid_argument(std::string(head) + " takes no parameter");
    return r;
  };
  if (head == "torsion") return no_arg(Preradical::torsion());
  if (head == "socle") return no_arg(Preradical::socle());
  if (head == "radical") return no_arg(Preradical::radical());
  if (head == "divisible") return no_arg(Preradical::divisible());
  if (head == "ppart") return Preradical::ppart(arg());
  if (head == "mul") return Preradical::mul(arg());
  if (head == "ntorsion") return Preradical::ntorsion(arg());
  throw std::invalid_argument("unknown preradical '" + std::string(s) + "'");
}

/// f(r(dom f)) <= r(cod f)
inline bool naturality_check(const Preradical& r, const Morphism& f) {
  Subgroup src = r.evaluate(f.dom());
  Subgroup dst = r.evaluate(f.cod());
  for (const auto& x : src.generators())
    if (!dst.contains(f.apply(x))) return false;
  return true;
}

}  // namespace fisplit
