#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lring/topology.hpp"

namespace lring {

// ---------------------------------------------------------------------------
// Ring- and group-boundedness
//
// Both quantifiers range over the base families only. For box bases the
// containments V.S in W and S in nU reduce to per-coordinate inequalities
// between radii and the bound function beta, so every decision below is
// exact and made from beta alone.
// ---------------------------------------------------------------------------

struct BoundednessVerdict {
  bool bounded = true;
  std::optional<NbhdDesc> witness;  // a base neighborhood with no admissible V (or n)
  CoordBounds beta;

  explicit operator bool() const { return bounded; }
};

/// A base neighborhood of a box topology that constrains a coordinate where
/// beta is infinite (or, for the sup norm, where beta is unbounded).
inline std::optional<NbhdDesc> box_refutation(const CoordBounds& beta, const SpaceDesc& space) {
  switch (space.topology) {
    case TopologyId::QN_BOX:
      if (beta.first_infinite()) return unit_nbhd(space);
      return std::nullopt;
    case TopologyId::EVSEQ_PRODUCT:
      if (auto i = beta.first_infinite()) return NbhdDesc::product({*i}, 1);
      return std::nullopt;
    case TopologyId::EVSEQ_SUPNORM:
      if (beta.sup().infinite) return NbhdDesc::supnorm(1);
      return std::nullopt;
    case TopologyId::Z_DISCRETE_TOP: return std::nullopt;
  }
  return std::nullopt;
}

/// Ring-boundedness of a set with bound function beta in the given space.
inline BoundednessVerdict ring_bounded(const CoordBounds& beta, const SpaceDesc& space) {
  BoundednessVerdict v;
  v.beta = beta;
  // With zero products V.S = {0}; on discrete Z, V = {0} absorbs everything.
  if (space.mul == Multiplication::ZERO || space.topology == TopologyId::Z_DISCRETE_TOP) return v;
  v.witness = box_refutation(beta, space);
  v.bounded = !v.witness;
  return v;
}

/// Group-boundedness: S in nU for some n, for every base U.
inline BoundednessVerdict group_bounded(const CoordBounds& beta, const SpaceDesc& space) {
  BoundednessVerdict v;
  v.beta = beta;
  if (space.topology == TopologyId::Z_DISCRETE_TOP) {
    // nU = {0} for every n.
    if (!beta.all_zero()) v.witness = NbhdDesc::discrete();
  } else {
    v.witness = box_refutation(beta, space);
  }
  v.bounded = !v.witness;
  return v;
}

inline BoundednessVerdict set_ring_bounded(const SetDesc& s) { return ring_bounded(coordinate_bounds(s), s.space()); }

inline BoundednessVerdict set_ring_bounded(const SetDesc& s, TopologyId top, Multiplication mul) {
  SpaceDesc space = s.space();
  space.topology = top;
  space.mul = mul;
  return set_ring_bounded(s.in_space(SpaceDesc::validated(space)));
}

inline BoundednessVerdict set_group_bounded(const SetDesc& s) { return group_bounded(coordinate_bounds(s), s.space()); }

inline BoundednessVerdict set_group_bounded(const SetDesc& s, TopologyId top) {
  SpaceDesc space = s.space();
  space.topology = top;
  return set_group_bounded(s.in_space(SpaceDesc::validated(space)));
}

/// For a ring-bounded beta and a base W: a base V with V.S in W and S.V in W.
inline NbhdDesc ring_absorber(const CoordBounds& beta, const SpaceDesc& space, const NbhdDesc& w) {
  check_nbhd(space, w);
  if (space.topology == TopologyId::Z_DISCRETE_TOP) return NbhdDesc::discrete();
  if (space.mul == Multiplication::ZERO) return w;
  if (!ring_bounded(beta, space)) throw Error(ErrorCode::NotBounded, "set is not ring-bounded");
  auto delta_for = [](const Rational& eps, const Bound& b) { return b.value == 0 ? eps : Rational(eps / b.value); };
  switch (space.topology) {
    case TopologyId::QN_BOX: {
      std::vector<Rational> r;
      for (std::size_t i = 0; i < w.radii.size(); ++i) r.push_back(delta_for(w.radii[i], beta.at(i)));
      return NbhdDesc::box(std::move(r));
    }
    case TopologyId::EVSEQ_PRODUCT: {
      Bound m = Bound::of(0);
      for (auto i : w.coords) m = max(m, beta.at(i));
      return NbhdDesc::product(w.coords, delta_for(w.radius, m));
    }
    case TopologyId::EVSEQ_SUPNORM: return NbhdDesc::supnorm(delta_for(w.radius, beta.sup()));
    default: break;
  }
  return w;
}

/// For a group-bounded beta and a base U: the least n >= 1 with S in nU.
inline Integer group_multiple(const CoordBounds& beta, const SpaceDesc& space, const NbhdDesc& u) {
  check_nbhd(space, u);
  if (!group_bounded(beta, space)) throw Error(ErrorCode::NotBounded, "set is not group-bounded");
  Integer n = 1;
  auto need = [&](const Bound& b, const Rational& eps) { n = std::max(n, ceil(b.value / eps)); };
  switch (space.topology) {
    case TopologyId::QN_BOX:
      for (std::size_t i = 0; i < u.radii.size(); ++i) need(beta.at(i), u.radii[i]);
      break;
    case TopologyId::EVSEQ_PRODUCT:
      for (auto i : u.coords) need(beta.at(i), u.radius);
      break;
    case TopologyId::EVSEQ_SUPNORM: need(beta.sup(), u.radius); break;
    case TopologyId::Z_DISCRETE_TOP: break;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Solidity and order closedness
// ---------------------------------------------------------------------------

struct SolidVerdict {
  bool solid = true;
  /// (x, y) with y in S, |x| <= |y| and x not in S.
  std::optional<std::pair<Element, Element>> witness;
};

namespace detail {

inline SolidVerdict not_solid(Element x, Element y) { return {false, std::make_pair(std::move(x), std::move(y))}; }

/// y with coordinate i negated.
inline Element reflect(const Element& y, std::size_t i) {
  if (auto* v = std::get_if<FinVec>(&y)) {
    auto e = v->entries();
    e[i] = -e[i];
    return FinVec(std::move(e));
  }
  const auto& s = std::get<EvSeq>(y);
  std::vector<Rational> p = s.prefix();
  if (p.size() <= i) p.resize(i + 1, s.tail());
  p[i] = -p[i];
  return EvSeq(std::move(p), s.tail());
}

template <typename Member>
SolidVerdict finite_points_solid(const SpaceDesc& space, const std::vector<Element>& pts, Member&& member) {
  if (space.kind == SpaceKind::Z_DISCRETE) {
    for (const auto& y : pts) {
      Integer m = numerator(abs(coord(y, 0)));
      for (Integer v = -m; v <= m; ++v) {
        Element x = FinVec{Rational(v)};
        if (!member(x)) return not_solid(x, y);
      }
    }
    return {};
  }
  for (const auto& y : pts) {
    if (is_zero(y)) continue;
    // Finitely many points, so some dyadic shrink of y is missing.
    for (int m = 1; m < 4096; ++m) {
      Element x = Rational(1, Integer(1) << m) * y;
      if (!member(x)) return not_solid(x, y);
    }
  }
  return {};
}

inline SolidVerdict interval_solid(const SetDesc::Interval& iv) {
  std::size_t n = std::max(extent(iv.lo), extent(iv.hi));
  auto check = [&](std::size_t i, const Rational& a, const Rational& b) -> std::optional<SolidVerdict> {
    if (a == -b) return std::nullopt;
    const Element& y = abs(b) >= abs(a) ? iv.hi : iv.lo;
    return not_solid(reflect(y, i), y);
  };
  for (std::size_t i = 0; i < n; ++i)
    if (auto r = check(i, coord(iv.lo, i), coord(iv.hi, i))) return *r;
  if (is_evseq(iv.lo))
    if (auto r = check(n, std::get<EvSeq>(iv.lo).tail(), std::get<EvSeq>(iv.hi).tail())) return *r;
  return {};
}

/// Each block row and each block column holds at most one nonzero entry, so
/// the homomorphism maps product-shaped sets onto product-shaped sets.
inline bool axis_preserving(const HomDesc& t) {
  std::size_t k = t.block_size();
  std::vector<int> col_use(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    int row_use = 0;
    for (std::size_t j = 0; j < k; ++j)
      if (t.block()[i][j] != 0) {
        ++row_use;
        ++col_use[j];
      }
    if (row_use > 1) return false;
  }
  return std::all_of(col_use.begin(), col_use.end(), [](int c) { return c <= 1; });
}

/// Zonotope sum_j [-1,1] g_j, reduced to merged generator directions.
using ZonotopeKey = std::map<std::vector<Rational>, Rational>;

inline ZonotopeKey zonotope_key(const std::vector<std::vector<Rational>>& gens) {
  ZonotopeKey key;
  for (const auto& g : gens) {
    auto p = std::find_if(g.begin(), g.end(), [](const Rational& v) { return v != 0; });
    if (p == g.end()) continue;
    Rational lead = *p;
    std::vector<Rational> dir;
    for (const auto& v : g) dir.push_back(v / lead);
    key[dir] += abs(lead);
  }
  return key;
}

/// A symmetric convex set is solid iff it is invariant under every
/// coordinate reflection.
inline bool zonotope_solid(const std::vector<std::vector<Rational>>& gens, std::size_t dim) {
  auto key = zonotope_key(gens);
  for (std::size_t i = 0; i < dim; ++i) {
    auto reflected = gens;
    for (auto& g : reflected) g[i] = -g[i];
    if (zonotope_key(reflected) != key) return false;
  }
  return true;
}

}  // namespace detail

SolidVerdict is_solid(const SetDesc& s);

namespace detail {

/// Searches reflections of candidate points for a solidity witness.
inline std::optional<std::pair<Element, Element>> reflection_witness(const SetDesc& s, const std::vector<Element>& ys,
                                                                     std::size_t coords) {
  for (const auto& y : ys) {
    for (std::size_t i = 0; i < coords; ++i) {
      Element x = reflect(y, i);
      try {
        if (!set_member(s, x)) return std::make_pair(x, y);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unsupported) throw;
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

inline SolidVerdict image_solid(const SetDesc& s, const SetDesc::Image& im) {
  auto [t, inner] = flatten_image(im);
  const auto& body = inner->body();
  const SpaceDesc& space = s.space();
  auto member = [&](const Element& x) { return set_member(s, x); };

  if (auto* f = std::get_if<SetDesc::Finite>(&body)) {
    std::vector<Element> pts;
    for (const auto& p : f->points) pts.push_back(t.apply(p));
    return finite_points_solid(space, pts, member);
  }
  if (std::holds_alternative<SetDesc::Staircase>(body)) {
    if (is_zero(t)) return {};
    for (std::size_t n = 0;; ++n) {
      Element y = t.apply(Rational(n + 1) * Element(EvSeq::unit(n)));
      if (is_zero(y)) continue;
      return finite_points_solid(space, {y}, member);
    }
  }
  std::size_t k = t.block_size();
  if (std::holds_alternative<SetDesc::Whole>(body)) {
    // The range is solid iff it is a coordinate subspace.
    std::size_t nonzero_rows = 0;
    for (const auto& row : t.block())
      if (std::any_of(row.begin(), row.end(), [](const Rational& v) { return v != 0; })) ++nonzero_rows;
    if (linalg::rank(t.block()) == nonzero_rows) return {};
    std::vector<Element> cols;
    for (std::size_t j = 0; j < k; ++j) {
      Element e = t.sequence() ? Element(EvSeq::unit(j)) : Element(FinVec::unit(k, j));
      Element y = t.apply(e);
      for (std::size_t i = 0; i < k; ++i) {
        if (coord(y, i) == 0) continue;
        std::vector<Rational> p;
        for (std::size_t l = 0; l < extent(y); ++l) p.push_back(l == i ? Rational(0) : coord(y, l));
        Element x = t.sequence() ? Element(EvSeq(p, 0)) : Element(FinVec(p));
        if (!member(x)) return not_solid(x, y);
      }
    }
    return {false, std::nullopt};
  }
  auto box = box_shape(*inner);
  bool multi_hull = false;
  if (auto* sh = std::get_if<SetDesc::SolidHull>(&body)) multi_hull = sh->points.size() > 1;

  if (axis_preserving(t)) {
    // Image of a product of ranges is again a product of ranges.
    if (multi_hull || !std::holds_alternative<SetDesc::Interval>(body)) return {};
    const auto& iv = std::get<SetDesc::Interval>(body);
    Element a = t.apply(iv.lo), b = t.apply(iv.hi);
    Element lo = meet(a, b), hi = join(a, b);
    std::size_t n = std::max(extent(lo), extent(hi));
    for (std::size_t c = 0; c < n + (is_evseq(lo) ? 1 : 0); ++c) {
      if (coord(lo, c) == -coord(hi, c)) continue;
      // Coordinate c ranges over [lo_c, hi_c]; the reflection of the endpoint
      // with larger modulus falls outside.
      const Element& y = abs(coord(a, c)) >= abs(coord(b, c)) ? a : b;
      return not_solid(reflect(y, c), y);
    }
    return {};
  }
  if (multi_hull) throw Error(ErrorCode::Unsupported, "solidity of a mixed image of a multi-point solid hull");

  // Zonotope on the block: generators are the block columns scaled by the
  // half-widths of the underlying box; the rest is index-wise scaling.
  std::vector<std::vector<Rational>> gens;
  std::vector<Rational> center(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto r = box->at(j);
    if (!r.lo || !r.hi) {
      bool used = false;
      for (std::size_t i = 0; i < k; ++i) used = used || t.block()[i][j] != 0;
      if (used) throw Error(ErrorCode::Unsupported, "solidity of a mixed image of an unbounded box");
      continue;
    }
    Rational half = (*r.hi - *r.lo) / 2, mid = (*r.hi + *r.lo) / 2;
    std::vector<Rational> g(k);
    for (std::size_t i = 0; i < k; ++i) {
      g[i] = t.block()[i][j] * half;
      center[i] += t.block()[i][j] * mid;
    }
    gens.push_back(std::move(g));
  }
  bool centered = std::all_of(center.begin(), center.end(), [](const Rational& v) { return v == 0; });
  if (t.sequence()) {
    // Beyond the block the image is index-wise scaling of the box.
    std::size_t n = std::max(t.extent(), box->head.size()) + 1;
    for (std::size_t i = k; i < n; ++i) {
      auto r = box->at(i);
      Rational d = i < n - 1 ? t.diag().at(i) : t.diag().tail();
      if (d == 0) continue;
      if ((r.lo.has_value() != r.hi.has_value()) || (r.lo && *r.lo != -*r.hi)) centered = false;
    }
  }
  if (centered && zonotope_solid(gens, k)) return {};
  // Candidates: images of the box corners on the block.
  std::vector<Element> ys;
  if (k <= 12) {
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
      std::vector<Rational> z(k);
      for (std::size_t j = 0; j < k; ++j) {
        auto r = box->at(j);
        z[j] = (mask >> j & 1) ? r.hi.value_or(0) : r.lo.value_or(0);
      }
      Element e = t.sequence() ? Element(EvSeq(z, 0)) : Element(FinVec(z));
      ys.push_back(t.apply(e));
    }
  }
  auto w = reflection_witness(s, ys, std::max<std::size_t>(k, 1));
  return {false, w};
}

}  // namespace detail

/// Exact solidity decision with a witness for negative verdicts where one can
/// be constructed.
inline SolidVerdict is_solid(const SetDesc& s) {
  const auto& body = s.body();
  if (std::holds_alternative<SetDesc::Nbhd>(body) || std::holds_alternative<SetDesc::SolidHull>(body) ||
      std::holds_alternative<SetDesc::Whole>(body))
    return {};
  if (auto* iv = std::get_if<SetDesc::Interval>(&body)) return detail::interval_solid(*iv);
  if (auto* f = std::get_if<SetDesc::Finite>(&body))
    return detail::finite_points_solid(s.space(), f->points, [&](const Element& x) { return set_member(s, x); });
  if (std::holds_alternative<SetDesc::Staircase>(body))
    return detail::not_solid(Rational(1, 2) * Element(EvSeq::unit(0)), EvSeq::unit(0));
  return detail::image_solid(s, std::get<SetDesc::Image>(body));
}

struct OrderClosedVerdict {
  bool order_closed = true;
  std::string note;
};

/// Order limits are taken in the ambient R^n / R^N. Closed boxes, intervals,
/// finite sets, finite unions of boxes, linear images of boxes and linear
/// subspaces are all closed there; the staircase accumulates at 0.
inline OrderClosedVerdict is_order_closed(const SetDesc& s) {
  const auto& body = s.body();
  if (std::holds_alternative<SetDesc::Staircase>(body))
    return {false, "(n+1)e_n is dominated by (i+1)_i and order-converges to 0, which is not a member"};
  if (auto* im = std::get_if<SetDesc::Image>(&body)) {
    auto [t, inner] = detail::flatten_image(*im);
    if (std::holds_alternative<SetDesc::Staircase>(inner->body()) && t.diag().tail() != 0 &&
        !set_member(s, s.space().zero()))
      return {false, "image spikes order-converge to 0, which is not a member"};
  }
  return {};
}

/// Every base neighborhood of the family is solid and order closed.
inline bool fatou_check(TopologyId top) {
  std::vector<SetDesc> bases;
  switch (top) {
    case TopologyId::QN_BOX:
      for (std::size_t n = 1; n <= 3; ++n) {
        auto space = SpaceDesc::qn(n);
        std::vector<Rational> r;
        for (std::size_t i = 0; i < n; ++i) r.push_back(Rational(1, Integer(i + 1)));
        bases.push_back(SetDesc::nbhd(space, NbhdDesc::box(r)));
      }
      break;
    case TopologyId::EVSEQ_PRODUCT: {
      auto space = SpaceDesc::evseq(top);
      bases.push_back(SetDesc::nbhd(space, NbhdDesc::product({}, 1)));
      bases.push_back(SetDesc::nbhd(space, NbhdDesc::product({0}, 1)));
      bases.push_back(SetDesc::nbhd(space, NbhdDesc::product({0, 2}, Rational(1, 2))));
      break;
    }
    case TopologyId::EVSEQ_SUPNORM: {
      auto space = SpaceDesc::evseq(top);
      bases.push_back(SetDesc::nbhd(space, NbhdDesc::supnorm(1)));
      bases.push_back(SetDesc::nbhd(space, NbhdDesc::supnorm(Rational(1, 3))));
      break;
    }
    case TopologyId::Z_DISCRETE_TOP:
      bases.push_back(SetDesc::nbhd(SpaceDesc::z_discrete(), NbhdDesc::discrete()));
      break;
  }
  return std::all_of(bases.begin(), bases.end(),
                     [](const SetDesc& b) { return is_solid(b).solid && is_order_closed(b).order_closed; });
}

struct HullPreservation {
  BoundednessVerdict set;
  BoundednessVerdict hull;
};

/// For a ring-bounded finite S: the verdict for Sol(S) next to the one for S.
inline HullPreservation hull_bounded_preservation(const SetDesc& s) {
  auto* f = std::get_if<SetDesc::Finite>(&s.body());
  if (!f) throw Error(ErrorCode::InvalidArgument, "hull preservation takes a FINITE set");
  HullPreservation r;
  r.set = set_ring_bounded(s);
  if (!r.set) throw Error(ErrorCode::NotBounded, to_string(s) + " is not ring-bounded");
  r.hull = set_ring_bounded(solid_hull(s.space(), f->points));
  return r;
}

}  // namespace lring
