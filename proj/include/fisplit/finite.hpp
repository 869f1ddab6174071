#pragma once

// Element-level view of a small finite group: elements are integers in mixed
// radix (first coordinate fastest), subsets are bitmasks. Used by the
// brute-force engines, where building a Morphism per quantified g would
// dominate the running time.

#include "fisplit/subobj.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fisplit {

using Element = std::uint32_t;

class ElementMask {
 public:
  ElementMask() = default;
  explicit ElementMask(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  void set(Element x) { w_[x >> 6] |= std::uint64_t(1) << (x & 63); }
  bool test(Element x) const { return (w_[x >> 6] >> (x & 63)) & 1; }
  std::size_t universe() const { return n_; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }
  bool subset_of(const ElementMask& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  const std::vector<std::uint64_t>& words() const { return w_; }

  friend bool operator==(const ElementMask& a, const ElementMask& b) { return a.w_ == b.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct ElementMaskHash {
  std::size_t operator()(const ElementMask& m) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : m.words()) {
      h ^= w;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

inline constexpr std::uint64_t kMaxElementView = 1u << 16;

class FiniteView {
 public:
  explicit FiniteView(FgAbGroup g) : group_(std::move(g)) {
    auto ord = group_.order();
    if (!ord) throw CapExceeded("element view of infinite " + group_.to_string());
    if (*ord > static_cast<unsigned long>(kMaxElementView))
      throw CapExceeded("element view of " + group_.to_string() + " is too large");
    size_ = static_cast<Element>(ord->get_ui());
    Element s = 1;
    for (const Int& d : group_.factors()) {
      radix_.push_back(static_cast<Element>(d.get_ui()));
      stride_.push_back(s);
      s *= radix_.back();
    }
    low_.assign(size_, 0);
    prev_.assign(size_, 0);
    for (Element x = 1; x < size_; ++x) {
      std::size_t j = 0;
      while (digit(x, j) == 0) ++j;
      low_[x] = static_cast<std::uint32_t>(j);
      prev_[x] = x - stride_[j];
    }
    if (size_ <= 1024) {
      table_.resize(std::size_t(size_) * size_);
      for (Element a = 0; a < size_; ++a)
        for (Element b = 0; b < size_; ++b) table_[std::size_t(a) * size_ + b] = add_digits(a, b);
    }
  }

  const FgAbGroup& group() const { return group_; }
  Element size() const { return size_; }
  std::size_t rank() const { return radix_.size(); }
  Element radix(std::size_t j) const { return radix_[j]; }
  Element stride(std::size_t j) const { return stride_[j]; }
  Element digit(Element x, std::size_t j) const { return (x / stride_[j]) % radix_[j]; }

  /// For x > 0: the lowest nonzero coordinate j and x - e_j.
  std::uint32_t low(Element x) const { return low_[x]; }
  Element prev(Element x) const { return prev_[x]; }

  Element add(Element a, Element b) const {
    return table_.empty() ? add_digits(a, b) : table_[std::size_t(a) * size_ + b];
  }

  Element encode(std::span<const Int> v) const {
    Element x = 0;
    for (std::size_t j = 0; j < radix_.size(); ++j) x += static_cast<Element>(reduce_mod(v[j], Int(radix_[j])).get_ui()) * stride_[j];
    return x;
  }

  IntVector decode(Element x) const {
    IntVector v(radix_.size());
    for (std::size_t j = 0; j < radix_.size(); ++j) v[j] = static_cast<unsigned long>(digit(x, j));
    return v;
  }

  /// Element x = v e_j.
  Element basis_multiple(std::size_t j, const Int& v) const {
    return static_cast<Element>(reduce_mod(v, Int(radix_[j])).get_ui()) * stride_[j];
  }

  /// Subgroup generated by `gens`, as a mask.
  ElementMask span(const std::vector<Element>& gens) const {
    ElementMask m(size_);
    std::vector<Element> members{0};
    m.set(0);
    for (Element g : gens) extend(m, members, g);
    return m;
  }

  ElementMask mask_of(const Subgroup& s) const {
    std::vector<Element> gens;
    for (const auto& x : s.generators()) gens.push_back(encode(x));
    return span(gens);
  }

  /// The subgroup with the given element set (which must be a subgroup).
  Subgroup subgroup_of(const ElementMask& mask) const {
    ElementMask m(size_);
    std::vector<Element> members{0};
    m.set(0);
    std::vector<IntVector> gens;
    for (Element x = 1; x < size_; ++x) {
      if (!mask.test(x) || m.test(x)) continue;
      gens.push_back(decode(x));
      extend(m, members, x);
    }
    return Subgroup::generated_by(group_, gens);
  }

  /// Fills img[x] = f(x) from the images of the generators.
  void images(const std::vector<Element>& gen_img, const FiniteView& cod, std::vector<Element>& img) const {
    img.resize(size_);
    img[0] = 0;
    for (Element x = 1; x < size_; ++x) img[x] = cod.add(img[prev_[x]], gen_img[low_[x]]);
  }

 private:
  Element add_digits(Element a, Element b) const {
    Element x = 0;
    for (std::size_t j = 0; j < radix_.size(); ++j) x += ((digit(a, j) + digit(b, j)) % radix_[j]) * stride_[j];
    return x;
  }

  void extend(ElementMask& m, std::vector<Element>& members, Element g) const {
    if (m.test(g)) return;
    // members + k g for k = 1, 2, ... until the coset returns into the span
    std::vector<Element> base = members;
    Element shift = g;
    while (!m.test(shift)) {
      for (Element b : base) {
        Element y = add(b, shift);
        if (!m.test(y)) {
          m.set(y);
          members.push_back(y);
        }
      }
      shift = add(shift, g);
    }
  }

  FgAbGroup group_;
  Element size_ = 1;
  std::vector<Element> radix_, stride_;
  std::vector<std::uint32_t> low_;
  std::vector<Element> prev_;
  std::vector<Element> table_;
};

}  // namespace fisplit
