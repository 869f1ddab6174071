#pragma once

// Kernels, cokernels, images, biproducts, pullbacks, pushouts and the
// section/retraction solvers. Every object produced here is canonical and
// travels together with its connecting morphism.

#include "fisplit/subgroup.hpp"

#include <optional>
#include <vector>

namespace fisplit {

struct Kernel {
  FgAbGroup object;
  Morphism mono;  // object -> dom(f)
};

struct Cokernel {
  FgAbGroup object;
  Morphism epi;  // cod(f) -> object
};

/// The subgroup ker f of dom(f).
inline Subgroup kernel_subgroup(const Morphism& f) {
  return Subgroup(f.dom(), solution_lattice(f.matrix(), f.cod().factors()));
}

inline Kernel kernel(const Morphism& f) {
  Subgroup k = kernel_subgroup(f);
  return Kernel{k.object(), k.inclusion()};
}

inline Subgroup image(const Morphism& f) { return Subgroup(f.cod(), f.matrix()); }

/// Quotient of `m` by the subgroup generated by the columns of `gens`.
inline Cokernel quotient_by_columns(const FgAbGroup& m, const IntMatrix& gens) {
  IntMatrix rel = IntMatrix::hcat(gens, IntMatrix::diagonal(m.factors()));
  CanonicalPresentation p = canonical_group(rel, m.size());
  return Cokernel{p.group, Morphism(m, p.group, p.to_canonical)};
}

inline Cokernel cokernel(const Morphism& f) { return quotient_by_columns(f.cod(), f.matrix()); }

inline Cokernel quotient(const Subgroup& s) { return quotient_by_columns(s.ambient(), s.lattice_basis().transpose()); }

/// Coim(f) = dom(f)/ker(f) with its epi.
inline Cokernel coimage(const Morphism& f) { return quotient(kernel_subgroup(f)); }

/// The induced isomorphism Coim(f) -> Im(f), Im(f) taken as image(f).object().
inline Morphism coimage_to_image(const Morphism& f) {
  Cokernel c = coimage(f);
  Subgroup im = image(f);
  // each canonical generator of Coim lifts to some x in dom(f); send it to f(x)
  CanonicalPresentation lift = canonical_group(
      IntMatrix::hcat(kernel_subgroup(f).lattice_basis().transpose(), IntMatrix::diagonal(f.dom().factors())),
      f.dom().size());
  IntMatrix m(im.object().size(), c.object.size());
  for (std::size_t t = 0; t < c.object.size(); ++t) {
    IntVector x = lift.from_canonical.col(t);
    m.set_col(t, im.object_coordinates(f.apply(x)));
  }
  return Morphism(c.object, im.object(), std::move(m));
}

struct Biproduct {
  FgAbGroup object;
  std::vector<Morphism> injections;
  std::vector<Morphism> projections;
};

inline Biproduct biproduct(const std::vector<FgAbGroup>& groups) {
  std::vector<Int> all;
  for (const auto& g : groups) all.insert(all.end(), g.factors().begin(), g.factors().end());
  CanonicalPresentation p = canonical_group(IntMatrix::diagonal(all), all.size());
  Biproduct b{p.group, {}, {}};
  std::size_t offset = 0;
  for (const auto& g : groups) {
    b.injections.emplace_back(g, p.group, p.to_canonical.block(0, offset, p.group.size(), g.size()));
    b.projections.emplace_back(p.group, g, p.from_canonical.block(offset, 0, g.size(), p.group.size()));
    offset += g.size();
  }
  return b;
}

/// [f_1 ... f_k] : A_1 + ... + A_k -> C, given the biproduct of the domains.
inline Morphism copair(const Biproduct& b, const std::vector<Morphism>& fs) {
  Morphism out = compose(fs.at(0), b.projections.at(0));
  for (std::size_t l = 1; l < fs.size(); ++l) out = out + compose(fs[l], b.projections[l]);
  return out;
}

/// [f_1; ...; f_k] : C -> A_1 + ... + A_k.
inline Morphism pair(const Biproduct& b, const std::vector<Morphism>& fs) {
  Morphism out = compose(b.injections.at(0), fs.at(0));
  for (std::size_t l = 1; l < fs.size(); ++l) out = out + compose(b.injections[l], fs[l]);
  return out;
}

/// f_1 + ... + f_k as a block-diagonal morphism between biproducts.
inline Morphism direct_sum(const Biproduct& dom, const Biproduct& cod, const std::vector<Morphism>& fs) {
  Morphism out = Morphism::zero(dom.object, cod.object);
  for (std::size_t l = 0; l < fs.size(); ++l)
    out = out + compose(cod.injections.at(l), compose(fs[l], dom.projections.at(l)));
  return out;
}

struct Pullback {
  FgAbGroup object;
  Morphism pA, pB;
};

struct Pushout {
  FgAbGroup object;
  Morphism qA, qB;
};

/// Pullback of f: A -> C and g: B -> C as the kernel of f pA - g pB on A + B.
inline Pullback pullback(const Morphism& f, const Morphism& g) {
  if (!(f.cod() == g.cod())) throw ObjectMismatch("pullback: codomains differ");
  Biproduct ab = biproduct({f.dom(), g.dom()});
  Morphism diff = compose(f, ab.projections[0]) - compose(g, ab.projections[1]);
  Kernel k = kernel(diff);
  return Pullback{k.object, compose(ab.projections[0], k.mono), compose(ab.projections[1], k.mono)};
}

/// Pushout of f: C -> A and g: C -> B as the cokernel of uA f - uB g into A + B.
inline Pushout pushout(const Morphism& f, const Morphism& g) {
  if (!(f.dom() == g.dom())) throw ObjectMismatch("pushout: domains differ");
  Biproduct ab = biproduct({f.cod(), g.cod()});
  Morphism diff = compose(ab.injections[0], f) - compose(ab.injections[1], g);
  Cokernel c = cokernel(diff);
  return Pushout{c.object, compose(c.epi, ab.injections[0]), compose(c.epi, ab.injections[1])};
}

/// Some r: cod(f) -> cod(h) with r o f = h, if one exists. Rows of r decouple:
/// row i must satisfy r_i f = h_i modulo z_i, plus y_j r_ij = 0 modulo z_i.
inline std::optional<Morphism> solve_left(const Morphism& f, const Morphism& h) {
  if (!(f.dom() == h.dom())) throw ObjectMismatch("solve_left: domains differ");
  const FgAbGroup& Y = f.cod();
  const FgAbGroup& Z = h.cod();
  const std::size_t nx = f.dom().size(), ny = Y.size();
  IntMatrix r(Z.size(), ny);
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const Int& z = Z.factor(i);
    IntMatrix A(nx + ny, ny);
    IntVector b(nx + ny), mod(nx + ny, z);
    for (std::size_t l = 0; l < nx; ++l) {
      for (std::size_t j = 0; j < ny; ++j) A(l, j) = f.matrix()(j, l);
      b[l] = h.matrix()(i, l);
    }
    for (std::size_t j = 0; j < ny; ++j) A(nx + j, j) = Y.factor(j);
    auto x = solve_congruences(A, b, mod);
    if (!x) return std::nullopt;
    for (std::size_t j = 0; j < ny; ++j) r(i, j) = (*x)[j];
  }
  return Morphism(Y, Z, std::move(r));
}

/// Some s: dom(h) -> dom(f) with f o s = h, if one exists. Columns of s decouple.
inline std::optional<Morphism> solve_right(const Morphism& f, const Morphism& h) {
  if (!(f.cod() == h.cod())) throw ObjectMismatch("solve_right: codomains differ");
  const FgAbGroup& X = h.dom();
  const FgAbGroup& Y = f.dom();
  const FgAbGroup& Z = f.cod();
  const std::size_t ny = Y.size(), nz = Z.size();
  IntMatrix s(ny, X.size());
  for (std::size_t l = 0; l < X.size(); ++l) {
    IntMatrix A(nz + ny, ny);
    IntVector b(nz + ny), mod(nz + ny);
    for (std::size_t i = 0; i < nz; ++i) {
      for (std::size_t j = 0; j < ny; ++j) A(i, j) = f.matrix()(i, j);
      b[i] = h.matrix()(i, l);
      mod[i] = Z.factor(i);
    }
    for (std::size_t j = 0; j < ny; ++j) {
      A(nz + j, j) = X.factor(l);
      mod[nz + j] = Y.factor(j);
    }
    auto x = solve_congruences(A, b, mod);
    if (!x) return std::nullopt;
    for (std::size_t j = 0; j < ny; ++j) s(j, l) = (*x)[j];
  }
  return Morphism(X, Y, std::move(s));
}

/// A retraction r with r o f = id, if f is a section.
inline std::optional<Morphism> is_section(const Morphism& f) { return solve_left(f, Morphism::identity(f.dom())); }

/// A section s with f o s = id, if f is a retraction.
inline std::optional<Morphism> is_retraction(const Morphism& f) {
  return solve_right(f, Morphism::identity(f.cod()));
}

inline bool is_mono(const Morphism& f) { return kernel_subgroup(f).is_trivial(); }
inline bool is_epi(const Morphism& f) { return cokernel(f).object.is_trivial(); }
inline bool is_iso(const Morphism& f) { return is_mono(f) && is_epi(f); }

/// 0 -> A --i--> B --d--> C -> 0, validated on construction.
class ShortExactSequence {
 public:
  ShortExactSequence(Morphism i, Morphism d) : i_(std::move(i)), d_(std::move(d)) {
    if (!(i_.cod() == d_.dom())) throw ObjectMismatch("short exact sequence: middle objects differ");
    if (!is_mono(i_)) throw AlgebraError("short exact sequence: left map is not mono");
    if (!is_epi(d_)) throw AlgebraError("short exact sequence: right map is not epi");
    if (!(image(i_) == kernel_subgroup(d_))) throw AlgebraError("short exact sequence: not exact in the middle");
  }

  const Morphism& i() const { return i_; }
  const Morphism& d() const { return d_; }
  const FgAbGroup& left() const { return i_.dom(); }
  const FgAbGroup& middle() const { return i_.cod(); }
  const FgAbGroup& right() const { return d_.cod(); }

 private:
  Morphism i_, d_;
};

}  // namespace fisplit
