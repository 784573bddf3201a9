#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "lring/lattice.hpp"
#include "lring/sampling.hpp"

namespace lring {

// ---------------------------------------------------------------------------
// Cone maps and their extension
// ---------------------------------------------------------------------------

/// A map on the positive cone: base_hom everywhere except at the table's
/// points, where the table value wins.
struct ConeMapDesc {
  HomDesc base_hom;
  std::vector<std::pair<Element, Element>> table;

  Element operator()(const Element& x) const {
    if (!is_positive(x)) throw Error(ErrorCode::InvalidElement, "cone map queried off the cone: " + to_string(x));
    for (const auto& [k, v] : table)
      if (k == x) return v;
    return base_hom.apply(x);
  }
};

/// Unique positive-part extension E(x) = f(x+) - f(x-) of an audited cone map.
class ConeExtension {
 public:
  ConeExtension(ConeMapDesc f, SpaceDesc space) : f_(std::move(f)), space_(space) {}

  Element operator()(const Element& x) const {
    check_element(space_, x);
    return f_(pos_part(x)) - f_(neg_part(x));
  }

  const ConeMapDesc& cone_map() const { return f_; }

  /// The descriptor of E, read off from its values on unit vectors (and, for
  /// sequences, on the indicator of a tail).
  HomDesc to_hom() const {
    if (!space_.sequence()) {
      std::size_t n = space_.dim;
      Matrix m(n, std::vector<Rational>(n));
      for (std::size_t j = 0; j < n; ++j) {
        Element col = (*this)(FinVec::unit(n, j));
        for (std::size_t i = 0; i < n; ++i) m[i][j] = coord(col, i);
      }
      return HomDesc::matrix(std::move(m));
    }
    std::size_t k = f_.base_hom.extent();
    for (const auto& [key, val] : f_.table) k = std::max({k, extent(key), extent(val)});
    ++k;
    Matrix m(k, std::vector<Rational>(k));
    for (std::size_t j = 0; j < k; ++j) {
      Element col = (*this)(EvSeq::unit(j));
      for (std::size_t i = 0; i < k; ++i) m[i][j] = coord(col, i);
      if (extent(col) > k || std::get<EvSeq>(col).tail() != 0)
        throw Error(ErrorCode::Unsupported, "extension is not of a shipped form");
    }
    Element tail_ind = EvSeq(std::vector<Rational>(k), 1);
    Element img = (*this)(tail_ind);
    for (std::size_t i = 0; i < k; ++i)
      if (coord(img, i) != 0) throw Error(ErrorCode::Unsupported, "extension is not of a shipped form");
    const auto& s = std::get<EvSeq>(img);
    if (s.span() > k) throw Error(ErrorCode::Unsupported, "extension is not of a shipped form");
    return HomDesc::diag_plus_finite(EvSeq(std::vector<Rational>(k), s.tail()), k, m);
  }

 private:
  ConeMapDesc f_;
  SpaceDesc space_;
};

struct AdditivityAudit {
  std::size_t checked = 0;
  std::optional<std::pair<Element, Element>> witness;
};

/// Checks f(x + y) = f(x) + f(y) on table pairs, on table points against
/// random positives, and on random positive pairs.
inline AdditivityAudit audit_additivity(const SpaceDesc& space, const ConeMapDesc& f, std::uint64_t seed = 0,
                                        std::size_t random_pairs = 200) {
  check_hom(space, f.base_hom);
  for (const auto& [k, v] : f.table) {
    check_element(space, k);
    if (!is_positive(k) || !is_positive(v))
      throw Error(ErrorCode::InvalidElement, "cone map tables hold positive elements");
  }
  AdditivityAudit audit;
  auto check = [&](const Element& x, const Element& y) {
    ++audit.checked;
    if (f(x + y) != f(x) + f(y)) audit.witness = std::make_pair(x, y);
    return !audit.witness;
  };
  for (std::size_t i = 0; i < f.table.size(); ++i)
    for (std::size_t j = i; j < f.table.size(); ++j)
      if (!check(f.table[i].first, f.table[j].first)) return audit;
  Sampler rng(seed);
  for (const auto& [k, v] : f.table)
    if (!check(k, rng.nonnegative_element(space))) return audit;
  for (std::size_t t = 0; t < random_pairs; ++t)
    if (!check(rng.nonnegative_element(space), rng.nonnegative_element(space))) return audit;
  return audit;
}

inline ConeExtension extend_from_cone(const SpaceDesc& space, const ConeMapDesc& f, std::uint64_t seed = 0) {
  auto audit = audit_additivity(space, f, seed);
  if (audit.witness)
    throw Error(ErrorCode::NotAdditiveOnCone, "f(x+y) != f(x)+f(y) for x = " + to_string(audit.witness->first) +
                                                  ", y = " + to_string(audit.witness->second));
  return ConeExtension(f, space);
}

// ---------------------------------------------------------------------------
// Riesz decomposition
// ---------------------------------------------------------------------------

struct Decomposition {
  Element x1, x2;
};

/// x = x1 + x2 with |x1| <= |y1| and |x2| <= |y2|, positive parts when x is.
inline Decomposition riesz_decompose(const SpaceDesc& space, const Element& x, const Element& y1, const Element& y2) {
  check_element(space, x);
  check_element(space, y1);
  check_element(space, y2);
  Element a1 = abs_val(y1), a2 = abs_val(y2);
  if (!leq(abs_val(x), a1 + a2))
    throw Error(ErrorCode::DecompositionPrereqViolated,
                "|x| <= |y1| + |y2| fails for x = " + to_string(x));
  Element x1 = meet(join(x, -a1), a1);
  Element x2 = x - x1;
  bool ok = x1 + x2 == x && leq(abs_val(x1), a1) && leq(abs_val(x2), a2);
  if (ok && is_positive(x)) ok = is_positive(x1) && is_positive(x2);
  if (!ok) throw Error(ErrorCode::SoundnessBug, "decomposition postcondition failed for x = " + to_string(x));
  return {x1, x2};
}

// ---------------------------------------------------------------------------
// Positive part and the lattice operations on homomorphisms
// ---------------------------------------------------------------------------

inline constexpr std::size_t oracle_dimension_cap = 16;

/// Coordinatewise maximum of T y over the vertices of [0, x], by enumeration.
/// On sequences the coordinates from max(extent(T), span(x)) on act
/// diagonally, so they are switched together as one group.
inline Element sup_over_interval_oracle(const HomDesc& t, const Element& x) {
  if (!t.accepts(x)) throw Error(ErrorCode::InvalidElement, "homomorphism cannot act on " + to_string(x));
  if (!is_positive(x)) throw Error(ErrorCode::InvalidElement, "oracle needs x >= 0");
  std::size_t groups = is_finvec(x) ? std::get<FinVec>(x).dim() : std::max(t.extent(), extent(x)) + 1;
  if (groups > oracle_dimension_cap)
    throw Error(ErrorCode::OracleTooLarge, std::to_string(groups) + " coordinates exceed the oracle cap");
  auto vertex = [&](std::uint32_t mask) -> Element {
    auto on = [&](std::size_t j) { return (mask >> std::min(j, groups - 1)) & 1u; };
    if (auto* v = std::get_if<FinVec>(&x)) {
      std::vector<Rational> y(v->dim());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = on(j) ? (*v)[j] : Rational(0);
      return FinVec(std::move(y));
    }
    const auto& s = std::get<EvSeq>(x);
    std::vector<Rational> y(groups - 1);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = on(j) ? s.at(j) : Rational(0);
    return EvSeq(std::move(y), on(groups - 1) ? s.tail() : Rational(0));
  };
  Element best = t.apply(vertex(0));
  for (std::uint32_t mask = 1; mask < (1u << groups); ++mask) best = join(best, t.apply(vertex(mask)));
  return best;
}

/// T+ = T v 0: the entrywise positive part in the coordinatewise order.
inline HomDesc positive_part(const HomDesc& t) { return t.map_entries([](const Rational& v) { return pos(v); }); }
inline HomDesc negative_part(const HomDesc& t) { return positive_part(-t); }
inline HomDesc modulus(const HomDesc& t) { return positive_part(t) + negative_part(t); }
inline HomDesc hom_join(const HomDesc& t, const HomDesc& s) { return positive_part(t - s) + s; }
inline HomDesc hom_meet(const HomDesc& t, const HomDesc& s) { return -hom_join(-t, -s); }

struct OracleAgreement {
  std::size_t agreed = 0;
  std::size_t total = 0;
  std::optional<Element> witness;  // an x where the closed form and the oracle differ

  bool all() const { return agreed == total; }
};

/// Compares positive_part(T) with the vertex oracle on every unit vector and
/// on `samples` random x >= 0 (units are only enumerated in finite dimension).
inline OracleAgreement positive_part_audit(const HomDesc& t, std::size_t samples, std::uint64_t seed = 0) {
  HomDesc tp = positive_part(t);
  OracleAgreement out;
  auto probe = [&](const Element& x) {
    ++out.total;
    if (tp.apply(x) == sup_over_interval_oracle(t, x)) ++out.agreed;
    else if (!out.witness) out.witness = x;
  };
  Sampler rng(seed);
  if (!t.sequence()) {
    std::size_t n = t.block_size();
    for (std::size_t j = 0; j < n; ++j) probe(FinVec::unit(n, j));
    for (std::size_t s = 0; s < samples; ++s) probe(rng.nonnegative_finvec(n));
  } else {
    for (std::size_t s = 0; s < samples; ++s) probe(rng.nonnegative_evseq());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite directed suprema
// ---------------------------------------------------------------------------

/// Closure of a finite family under pairwise joins.
inline std::vector<HomDesc> join_closure(std::vector<HomDesc> family) {
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      HomDesc h = hom_join(family[i], family[j]);
      if (std::find(family.begin(), family.end(), h) == family.end()) family.push_back(h);
    }
  return family;
}

/// Supremum of a finite family dominated by bound. The join closure of the
/// family is upward directed and its largest member is the supremum.
inline HomDesc directed_sup(const std::vector<HomDesc>& homs, const HomDesc& bound) {
  if (homs.empty()) throw Error(ErrorCode::EmptyInput, "directed_sup needs a non-empty family");
  for (std::size_t i = 0; i < homs.size(); ++i)
    if (!is_zero(positive_part(homs[i] - bound)))
      throw Error(ErrorCode::NotBoundedAbove,
                  "member " + std::to_string(i) + " = " + to_string(homs[i]) + " is not below " + to_string(bound));
  auto closure = join_closure(homs);
  HomDesc s = closure.front();
  for (const auto& h : closure) s = hom_join(s, h);
  if (std::find(closure.begin(), closure.end(), s) == closure.end())
    throw Error(ErrorCode::SoundnessBug, "join closure misses its own supremum");
  return s;
}

// ---------------------------------------------------------------------------
// Order boundedness
// ---------------------------------------------------------------------------

struct OrderBoundedVerdict {
  bool order_bounded = true;
  Element lo, hi;  // T[-probe, probe] lies in [lo, hi]
  std::size_t spot_checks = 0;
};

inline OrderBoundedVerdict is_order_bounded(const HomDesc& t, const Element& probe, std::size_t spot_checks = 50,
                                            std::uint64_t seed = 0) {
  if (!is_positive(probe)) throw Error(ErrorCode::InvalidElement, "probe must be positive");
  Element hi = modulus(t).apply(probe);
  OrderBoundedVerdict v{true, -hi, hi, spot_checks};
  Sampler rng(seed);
  for (std::size_t s = 0; s < spot_checks; ++s) {
    Element y = map(probe, [&](const Rational& p) { return rng.between(-p, p, 8); });
    Element ty = t.apply(y);
    if (!leq(v.lo, ty) || !leq(ty, v.hi))
      throw Error(ErrorCode::SoundnessBug, "T(" + to_string(y) + ") escapes the order interval");
  }
  return v;
}

struct HomVerdict {
  bool order_bounded = true;
  bool positive = false;
  OrderBoundedVerdict interval;
  /// For a non-positive T, an x >= 0 with T x not >= 0.
  std::optional<Element> negativity_witness;
};

inline HomVerdict hom_verdict(const SpaceDesc& space, const HomDesc& t) {
  check_hom(space, t);
  HomVerdict v;
  Element probe = space.constant(1);
  v.interval = is_order_bounded(t, probe);
  v.order_bounded = v.interval.order_bounded;
  v.positive = is_positive(t);
  if (!v.positive) {
    // A negative entry (i, j) shows up on the unit vector e_j.
    std::size_t n = t.sequence() ? t.extent() + 1 : t.block_size();
    for (std::size_t j = 0; j < n && !v.negativity_witness; ++j) {
      Element e = t.sequence() ? Element(EvSeq::unit(j)) : Element(FinVec::unit(n, j));
      if (!is_positive(t.apply(e))) v.negativity_witness = e;
    }
  }
  return v;
}

}  // namespace lring
