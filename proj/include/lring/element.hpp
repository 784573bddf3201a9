#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lring/error.hpp"
#include "lring/rational.hpp"

namespace lring {

/// Element of Q^n under the coordinatewise order.
class FinVec {
 public:
  FinVec() = default;
  explicit FinVec(std::vector<Rational> entries) : entries_(std::move(entries)) {}
  FinVec(std::initializer_list<Rational> entries) : entries_(entries) {}

  static FinVec zero(std::size_t dim) { return FinVec(std::vector<Rational>(dim)); }
  static FinVec constant(std::size_t dim, const Rational& v) { return FinVec(std::vector<Rational>(dim, v)); }
  static FinVec unit(std::size_t dim, std::size_t i) {
    auto v = zero(dim);
    v.entries_[i] = 1;
    return v;
  }

  std::size_t dim() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }

  friend bool operator==(const FinVec&, const FinVec&) = default;

 private:
  std::vector<Rational> entries_;
};

/// Eventually-constant rational sequence: prefix[i] for i < prefix.size(), tail afterwards.
/// Kept in canonical form, so trailing prefix entries never equal the tail.
class EvSeq {
 public:
  EvSeq() = default;
  EvSeq(std::vector<Rational> prefix, Rational tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {
    canonicalize();
  }

  static EvSeq constant(const Rational& v) { return EvSeq({}, v); }
  static EvSeq unit(std::size_t i) {
    std::vector<Rational> p(i + 1);
    p[i] = 1;
    return EvSeq(std::move(p), 0);
  }

  const Rational& at(std::size_t i) const { return i < prefix_.size() ? prefix_[i] : tail_; }
  const std::vector<Rational>& prefix() const { return prefix_; }
  const Rational& tail() const { return tail_; }
  /// Index from which the sequence is constant.
  std::size_t span() const { return prefix_.size(); }

  friend bool operator==(const EvSeq&, const EvSeq&) = default;

 private:
  void canonicalize() {
    while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
  }

  std::vector<Rational> prefix_;
  Rational tail_{0};
};

using Element = std::variant<FinVec, EvSeq>;

inline bool is_finvec(const Element& x) { return std::holds_alternative<FinVec>(x); }
inline bool is_evseq(const Element& x) { return std::holds_alternative<EvSeq>(x); }

/// Value at coordinate i (for EvSeq every index is valid).
inline const Rational& coord(const Element& x, std::size_t i) {
  if (auto* v = std::get_if<FinVec>(&x)) return (*v)[i];
  return std::get<EvSeq>(x).at(i);
}

/// Number of coordinates that must be inspected individually; for EvSeq the
/// remaining ones all equal the tail.
inline std::size_t extent(const Element& x) {
  if (auto* v = std::get_if<FinVec>(&x)) return v->dim();
  return std::get<EvSeq>(x).span();
}

/// Coordinatewise map.
template <typename F>
Element map(const Element& x, F&& f) {
  if (auto* v = std::get_if<FinVec>(&x)) {
    std::vector<Rational> out;
    out.reserve(v->dim());
    for (const auto& e : v->entries()) out.push_back(f(e));
    return FinVec(std::move(out));
  }
  const auto& s = std::get<EvSeq>(x);
  std::vector<Rational> out;
  out.reserve(s.span());
  for (const auto& e : s.prefix()) out.push_back(f(e));
  return EvSeq(std::move(out), f(s.tail()));
}

/// Coordinatewise binary combination; mismatched shapes are InvalidElement.
template <typename F>
Element zip(const Element& x, const Element& y, F&& f) {
  if (x.index() != y.index()) throw Error(ErrorCode::InvalidElement, "element kinds differ");
  if (auto* v = std::get_if<FinVec>(&x)) {
    const auto& w = std::get<FinVec>(y);
    if (v->dim() != w.dim())
      throw Error(ErrorCode::InvalidElement,
                  "dimension mismatch " + std::to_string(v->dim()) + " vs " + std::to_string(w.dim()));
    std::vector<Rational> out;
    out.reserve(v->dim());
    for (std::size_t i = 0; i < v->dim(); ++i) out.push_back(f((*v)[i], w[i]));
    return FinVec(std::move(out));
  }
  const auto& s = std::get<EvSeq>(x);
  const auto& t = std::get<EvSeq>(y);
  std::size_t n = std::max(s.span(), t.span());
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(s.at(i), t.at(i)));
  return EvSeq(std::move(out), f(s.tail(), t.tail()));
}

/// True iff pred holds at every coordinate pair.
template <typename P>
bool all_coords(const Element& x, const Element& y, P&& pred) {
  if (x.index() != y.index()) throw Error(ErrorCode::InvalidElement, "element kinds differ");
  if (auto* v = std::get_if<FinVec>(&x)) {
    const auto& w = std::get<FinVec>(y);
    if (v->dim() != w.dim()) throw Error(ErrorCode::InvalidElement, "dimension mismatch");
    for (std::size_t i = 0; i < v->dim(); ++i)
      if (!pred((*v)[i], w[i])) return false;
    return true;
  }
  const auto& s = std::get<EvSeq>(x);
  const auto& t = std::get<EvSeq>(y);
  std::size_t n = std::max(s.span(), t.span());
  for (std::size_t i = 0; i < n; ++i)
    if (!pred(s.at(i), t.at(i))) return false;
  return pred(s.tail(), t.tail());
}

inline Element operator+(const Element& x, const Element& y) {
  return zip(x, y, [](const Rational& a, const Rational& b) { return a + b; });
}
inline Element operator-(const Element& x, const Element& y) {
  return zip(x, y, [](const Rational& a, const Rational& b) { return a - b; });
}
inline Element operator-(const Element& x) {
  return map(x, [](const Rational& a) { return Rational(-a); });
}
inline Element operator*(const Rational& c, const Element& x) {
  return map(x, [&](const Rational& a) { return Rational(c * a); });
}

/// Coordinatewise order.
inline bool leq(const Element& x, const Element& y) {
  return all_coords(x, y, [](const Rational& a, const Rational& b) { return a <= b; });
}

inline Element zero_like(const Element& x) {
  if (auto* v = std::get_if<FinVec>(&x)) return FinVec::zero(v->dim());
  return EvSeq::constant(0);
}

inline bool is_zero(const Element& x) { return x == zero_like(x); }
inline bool is_positive(const Element& x) { return leq(zero_like(x), x); }

inline std::string to_string(const Element& x) {
  std::string out;
  if (auto* v = std::get_if<FinVec>(&x)) {
    out = "(";
    for (std::size_t i = 0; i < v->dim(); ++i) out += (i ? "," : "") + to_string((*v)[i]);
    return out + ")";
  }
  const auto& s = std::get<EvSeq>(x);
  out = "prefix(";
  for (std::size_t i = 0; i < s.span(); ++i) out += (i ? "," : "") + to_string(s.prefix()[i]);
  return out + ") tail " + to_string(s.tail());
}

inline std::ostream& operator<<(std::ostream& os, const Element& x) { return os << to_string(x); }

// --- spaces ---------------------------------------------------------------

enum class SpaceKind { QN, EVSEQ, Z_DISCRETE };
enum class Multiplication { POINTWISE, ZERO };

/// Zero-neighborhood base families shipped with the library.
enum class TopologyId {
  QN_BOX,         // closed boxes with a per-coordinate radius vector
  EVSEQ_PRODUCT,  // closed boxes constraining a finite coordinate set
  EVSEQ_SUPNORM,  // closed sup-norm balls
  Z_DISCRETE_TOP, // the singleton {0}
};

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::QN: return "qn";
    case SpaceKind::EVSEQ: return "evseq";
    case SpaceKind::Z_DISCRETE: return "z";
  }
  return "?";
}
inline const char* to_string(Multiplication m) { return m == Multiplication::POINTWISE ? "pointwise" : "zero"; }
inline const char* to_string(TopologyId t) {
  switch (t) {
    case TopologyId::QN_BOX: return "qn_box";
    case TopologyId::EVSEQ_PRODUCT: return "evseq_product";
    case TopologyId::EVSEQ_SUPNORM: return "evseq_supnorm";
    case TopologyId::Z_DISCRETE_TOP: return "z_discrete";
  }
  return "?";
}

/// A concrete locally solid l-ring instance.
struct SpaceDesc {
  SpaceKind kind = SpaceKind::QN;
  std::size_t dim = 1;  // only meaningful for QN
  Multiplication mul = Multiplication::POINTWISE;
  TopologyId topology = TopologyId::QN_BOX;

  static SpaceDesc qn(std::size_t dim, Multiplication mul = Multiplication::POINTWISE) {
    return validated({SpaceKind::QN, dim, mul, TopologyId::QN_BOX});
  }
  static SpaceDesc evseq(TopologyId top, Multiplication mul = Multiplication::POINTWISE) {
    return validated({SpaceKind::EVSEQ, 0, mul, top});
  }
  static SpaceDesc z_discrete() {
    return validated({SpaceKind::Z_DISCRETE, 1, Multiplication::POINTWISE, TopologyId::Z_DISCRETE_TOP});
  }

  static SpaceDesc validated(SpaceDesc s) {
    bool ok = false;
    switch (s.kind) {
      case SpaceKind::QN: ok = s.dim > 0 && s.topology == TopologyId::QN_BOX; break;
      case SpaceKind::EVSEQ:
        ok = s.topology == TopologyId::EVSEQ_PRODUCT || s.topology == TopologyId::EVSEQ_SUPNORM;
        break;
      case SpaceKind::Z_DISCRETE:
        ok = s.dim == 1 && s.mul == Multiplication::POINTWISE && s.topology == TopologyId::Z_DISCRETE_TOP;
        break;
    }
    if (!ok) throw Error(ErrorCode::InvalidSpace, "inconsistent space description");
    return s;
  }

  bool sequence() const { return kind == SpaceKind::EVSEQ; }

  Element zero() const {
    if (sequence()) return EvSeq::constant(0);
    return FinVec::zero(dim);
  }
  Element constant(const Rational& v) const {
    if (sequence()) return EvSeq::constant(v);
    return FinVec::constant(dim, v);
  }

  friend bool operator==(const SpaceDesc&, const SpaceDesc&) = default;
};

inline std::string to_string(const SpaceDesc& s) {
  std::string out = to_string(s.kind);
  if (s.kind == SpaceKind::QN) out += "(" + std::to_string(s.dim) + ")";
  return out + "/" + to_string(s.mul) + "/" + to_string(s.topology);
}

/// Throws InvalidElement unless x lives in the space.
inline void check_element(const SpaceDesc& space, const Element& x) {
  bool ok = false;
  switch (space.kind) {
    case SpaceKind::QN: ok = is_finvec(x) && std::get<FinVec>(x).dim() == space.dim; break;
    case SpaceKind::EVSEQ: ok = is_evseq(x); break;
    case SpaceKind::Z_DISCRETE:
      ok = is_finvec(x) && std::get<FinVec>(x).dim() == 1 && is_integer(std::get<FinVec>(x)[0]);
      break;
  }
  if (!ok) throw Error(ErrorCode::InvalidElement, to_string(x) + " is not an element of " + to_string(space));
}

}  // namespace lring
