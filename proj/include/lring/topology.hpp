#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lring/hom.hpp"
#include "lring/lattice.hpp"
#include "lring/linalg.hpp"

namespace lring {

// ---------------------------------------------------------------------------
// Bounds in Q+ u {inf}
// ---------------------------------------------------------------------------

struct Bound {
  bool infinite = false;
  Rational value{0};

  static Bound inf() { return {true, 0}; }
  static Bound of(const Rational& v) { return {false, v}; }

  friend bool operator==(const Bound&, const Bound&) = default;
};

inline Bound max(const Bound& a, const Bound& b) {
  if (a.infinite || b.infinite) return Bound::inf();
  return Bound::of(std::max(a.value, b.value));
}

inline Bound operator+(const Bound& a, const Bound& b) {
  if (a.infinite || b.infinite) return Bound::inf();
  return Bound::of(a.value + b.value);
}

/// Bound of c * s over s bounded by b, for a fixed coefficient c. A zero
/// coefficient annihilates the coordinate, so the result is exactly 0.
inline Bound scale(const Rational& c, const Bound& b) {
  if (c == 0) return Bound::of(0);
  if (b.infinite) return Bound::inf();
  return Bound::of(abs(c) * b.value);
}

/// b <= limit, with inf <= x false for every finite x.
inline bool within(const Bound& b, const Rational& limit) { return !b.infinite && b.value <= limit; }

inline std::string to_string(const Bound& b) { return b.infinite ? "inf" : to_string(b.value); }

/// Shape of a bound function beyond its explicit head.
enum class TailKind {
  CONSTANT,  // beta(i) = value
  RAMP,      // beta(i) = value * (i + 1): finite everywhere, unbounded
  INFINITE,  // beta(i) = inf
};

struct TailBound {
  TailKind kind = TailKind::CONSTANT;
  Rational value{0};

  friend bool operator==(const TailBound&, const TailBound&) = default;
};

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::CONSTANT: return "constant";
    case TailKind::RAMP: return "ramp";
    case TailKind::INFINITE: return "infinite";
  }
  return "?";
}

/// Per-coordinate supremum of |x_i| over a set (the beta function).
struct CoordBounds {
  std::vector<Bound> head;
  std::optional<TailBound> tail;  // present exactly for sequence spaces

  Bound at(std::size_t i) const {
    if (i < head.size()) return head[i];
    if (!tail) throw Error(ErrorCode::InvalidArgument, "coordinate out of range");
    switch (tail->kind) {
      case TailKind::CONSTANT: return Bound::of(tail->value);
      case TailKind::RAMP: return Bound::of(tail->value * Rational(i + 1));
      case TailKind::INFINITE: return Bound::inf();
    }
    return Bound::inf();
  }

  std::optional<std::size_t> first_infinite() const {
    for (std::size_t i = 0; i < head.size(); ++i)
      if (head[i].infinite) return i;
    if (tail && tail->kind == TailKind::INFINITE) return head.size();
    return std::nullopt;
  }

  bool finite_everywhere() const { return !first_infinite(); }

  /// Supremum over all coordinates.
  Bound sup() const {
    Bound s = Bound::of(0);
    for (const auto& b : head) s = max(s, b);
    if (tail) {
      if (tail->kind == TailKind::CONSTANT) s = max(s, Bound::of(tail->value));
      else if (tail->kind == TailKind::RAMP && tail->value != 0) s = Bound::inf();
      else if (tail->kind == TailKind::INFINITE) s = Bound::inf();
    }
    return s;
  }

  bool all_zero() const {
    for (const auto& b : head)
      if (b.infinite || b.value != 0) return false;
    return !tail || (tail->kind != TailKind::INFINITE && tail->value == 0);
  }

  friend bool operator==(const CoordBounds&, const CoordBounds&) = default;
};

inline std::string to_string(const CoordBounds& b) {
  std::string out = "(";
  for (std::size_t i = 0; i < b.head.size(); ++i) out += (i ? "," : "") + to_string(b.head[i]);
  out += ")";
  if (b.tail) {
    switch (b.tail->kind) {
      case TailKind::CONSTANT: out += " tail " + to_string(b.tail->value); break;
      case TailKind::RAMP: out += " tail ramp " + to_string(b.tail->value) + "*(i+1)"; break;
      case TailKind::INFINITE: out += " tail inf"; break;
    }
  }
  return out;
}

inline CoordBounds bounds_of(const Element& x) {
  CoordBounds b;
  for (std::size_t i = 0; i < extent(x); ++i) b.head.push_back(Bound::of(abs(coord(x, i))));
  if (is_evseq(x)) b.tail = TailBound{TailKind::CONSTANT, abs(std::get<EvSeq>(x).tail())};
  return b;
}

/// Coordinatewise maximum of two bound functions of the same kind.
inline CoordBounds max(const CoordBounds& a, const CoordBounds& b) {
  CoordBounds out;
  std::size_t n = std::max(a.head.size(), b.head.size());
  for (std::size_t i = 0; i < n; ++i) out.head.push_back(max(a.at(i), b.at(i)));
  if (a.tail) {
    const auto& s = *a.tail;
    const auto& t = *b.tail;
    if (s.kind == TailKind::INFINITE || t.kind == TailKind::INFINITE) {
      out.tail = TailBound{TailKind::INFINITE, 0};
    } else if (s.kind == t.kind) {
      out.tail = TailBound{s.kind, std::max(s.value, t.value)};
    } else {
      // A constant against a ramp: the ramp wins from some index on; spell
      // out the indices where the constant is larger.
      const auto& ramp = s.kind == TailKind::RAMP ? s : t;
      const auto& cst = s.kind == TailKind::RAMP ? t : s;
      if (ramp.value == 0) {
        out.tail = cst;
      } else {
        std::size_t cut = static_cast<std::size_t>(ceil(cst.value / ramp.value));
        for (std::size_t i = n; i < cut; ++i) out.head.push_back(max(a.at(i), b.at(i)));
        out.tail = ramp;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base neighborhoods
// ---------------------------------------------------------------------------

/// Closed box zero-neighborhood from one of the shipped base families.
struct NbhdDesc {
  TopologyId topology = TopologyId::QN_BOX;
  std::vector<Rational> radii;      // QN_BOX
  std::vector<std::size_t> coords;  // EVSEQ_PRODUCT, sorted and unique
  Rational radius{1};               // EVSEQ_PRODUCT and EVSEQ_SUPNORM

  static NbhdDesc box(std::vector<Rational> radii) {
    NbhdDesc u;
    u.topology = TopologyId::QN_BOX;
    u.radii = std::move(radii);
    u.validate();
    return u;
  }
  static NbhdDesc product(std::vector<std::size_t> coords, const Rational& eps) {
    NbhdDesc u;
    u.topology = TopologyId::EVSEQ_PRODUCT;
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    u.coords = std::move(coords);
    u.radius = eps;
    u.validate();
    return u;
  }
  static NbhdDesc supnorm(const Rational& eps) {
    NbhdDesc u;
    u.topology = TopologyId::EVSEQ_SUPNORM;
    u.radius = eps;
    u.validate();
    return u;
  }
  static NbhdDesc discrete() {
    NbhdDesc u;
    u.topology = TopologyId::Z_DISCRETE_TOP;
    u.radius = 0;
    return u;
  }

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidNeighborhood, m); };
    switch (topology) {
      case TopologyId::QN_BOX:
        if (radii.empty()) bad("box needs at least one radius");
        for (const auto& r : radii)
          if (r <= 0) bad("radii must be strictly positive");
        break;
      case TopologyId::EVSEQ_PRODUCT:
      case TopologyId::EVSEQ_SUPNORM:
        if (radius <= 0) bad("radius must be strictly positive");
        break;
      case TopologyId::Z_DISCRETE_TOP: break;
    }
  }

  bool constrains(std::size_t i) const {
    switch (topology) {
      case TopologyId::EVSEQ_PRODUCT: return std::binary_search(coords.begin(), coords.end(), i);
      default: return true;
    }
  }

  /// Radius at coordinate i (infinite where unconstrained).
  Bound radius_at(std::size_t i) const {
    switch (topology) {
      case TopologyId::QN_BOX: return Bound::of(radii.at(i));
      case TopologyId::EVSEQ_PRODUCT: return constrains(i) ? Bound::of(radius) : Bound::inf();
      case TopologyId::EVSEQ_SUPNORM: return Bound::of(radius);
      case TopologyId::Z_DISCRETE_TOP: return Bound::of(0);
    }
    return Bound::inf();
  }

  /// The neighborhood's own bound function.
  CoordBounds bounds() const {
    CoordBounds b;
    switch (topology) {
      case TopologyId::QN_BOX:
        for (const auto& r : radii) b.head.push_back(Bound::of(r));
        break;
      case TopologyId::EVSEQ_PRODUCT: {
        std::size_t n = coords.empty() ? 0 : coords.back() + 1;
        for (std::size_t i = 0; i < n; ++i) b.head.push_back(radius_at(i));
        b.tail = TailBound{TailKind::INFINITE, 0};
        break;
      }
      case TopologyId::EVSEQ_SUPNORM: b.tail = TailBound{TailKind::CONSTANT, radius}; break;
      case TopologyId::Z_DISCRETE_TOP: b.head.push_back(Bound::of(0)); break;
    }
    return b;
  }

  friend bool operator==(const NbhdDesc&, const NbhdDesc&) = default;
};

inline std::string to_string(const NbhdDesc& u) {
  switch (u.topology) {
    case TopologyId::QN_BOX: {
      std::string s = "box(";
      for (std::size_t i = 0; i < u.radii.size(); ++i) s += (i ? "," : "") + to_string(u.radii[i]);
      return s + ")";
    }
    case TopologyId::EVSEQ_PRODUCT: {
      std::string s = "U({";
      for (std::size_t i = 0; i < u.coords.size(); ++i) s += (i ? "," : "") + std::to_string(u.coords[i]);
      return s + "}, " + to_string(u.radius) + ")";
    }
    case TopologyId::EVSEQ_SUPNORM: return "B(" + to_string(u.radius) + ")";
    case TopologyId::Z_DISCRETE_TOP: return "{0}";
  }
  return "?";
}

inline void check_nbhd(const SpaceDesc& space, const NbhdDesc& u) {
  u.validate();
  bool ok = u.topology == space.topology && (u.topology != TopologyId::QN_BOX || u.radii.size() == space.dim);
  if (!ok) throw Error(ErrorCode::InvalidNeighborhood, to_string(u) + " is not a base neighborhood of " + to_string(space));
}

/// The unit neighborhood of the space's base (radius 1, constraining coordinate 0
/// in the product topology).
inline NbhdDesc unit_nbhd(const SpaceDesc& space) {
  switch (space.topology) {
    case TopologyId::QN_BOX: return NbhdDesc::box(std::vector<Rational>(space.dim, Rational(1)));
    case TopologyId::EVSEQ_PRODUCT: return NbhdDesc::product({0}, 1);
    case TopologyId::EVSEQ_SUPNORM: return NbhdDesc::supnorm(1);
    case TopologyId::Z_DISCRETE_TOP: return NbhdDesc::discrete();
  }
  return NbhdDesc::discrete();
}

/// Base neighborhood constraining exactly coordinate i with radius eps
/// (or the closest thing the family offers).
inline NbhdDesc coordinate_nbhd(const SpaceDesc& space, std::size_t i, const Rational& eps) {
  switch (space.topology) {
    case TopologyId::QN_BOX: return NbhdDesc::box(std::vector<Rational>(space.dim, eps));
    case TopologyId::EVSEQ_PRODUCT: return NbhdDesc::product({i}, eps);
    case TopologyId::EVSEQ_SUPNORM: return NbhdDesc::supnorm(eps);
    case TopologyId::Z_DISCRETE_TOP: return NbhdDesc::discrete();
  }
  return NbhdDesc::discrete();
}

/// Exact membership in the closed box.
inline bool nbhd_member(const NbhdDesc& u, const Element& x) {
  switch (u.topology) {
    case TopologyId::QN_BOX: {
      if (!is_finvec(x) || std::get<FinVec>(x).dim() != u.radii.size())
        throw Error(ErrorCode::InvalidElement, "element does not match the box dimension");
      for (std::size_t i = 0; i < u.radii.size(); ++i)
        if (abs(coord(x, i)) > u.radii[i]) return false;
      return true;
    }
    case TopologyId::EVSEQ_PRODUCT:
      if (!is_evseq(x)) throw Error(ErrorCode::InvalidElement, "product neighborhoods hold sequences");
      for (auto i : u.coords)
        if (abs(coord(x, i)) > u.radius) return false;
      return true;
    case TopologyId::EVSEQ_SUPNORM: {
      if (!is_evseq(x)) throw Error(ErrorCode::InvalidElement, "sup-norm balls hold sequences");
      const auto& s = std::get<EvSeq>(x);
      for (const auto& e : s.prefix())
        if (abs(e) > u.radius) return false;
      return abs(s.tail()) <= u.radius;
    }
    case TopologyId::Z_DISCRETE_TOP:
      if (!is_finvec(x) || std::get<FinVec>(x).dim() != 1) throw Error(ErrorCode::InvalidElement, "not an integer");
      return coord(x, 0) == 0;
  }
  return false;
}

/// Whether every set bounded by beta lies in u. Exact for the symmetric box
/// [-beta, beta]; a sufficient condition for any other set bounded by beta.
inline bool bounds_within(const CoordBounds& beta, const NbhdDesc& u) {
  switch (u.topology) {
    case TopologyId::QN_BOX:
      for (std::size_t i = 0; i < u.radii.size(); ++i)
        if (!within(beta.at(i), u.radii[i])) return false;
      return true;
    case TopologyId::EVSEQ_PRODUCT:
      for (auto i : u.coords)
        if (!within(beta.at(i), u.radius)) return false;
      return true;
    case TopologyId::EVSEQ_SUPNORM: return within(beta.sup(), u.radius);
    case TopologyId::Z_DISCRETE_TOP: return beta.all_zero();
  }
  return false;
}

/// The product set V.W of two base boxes under pointwise multiplication.
inline NbhdDesc nbhd_product(const NbhdDesc& v, const NbhdDesc& w) {
  if (v.topology != w.topology) throw Error(ErrorCode::InvalidNeighborhood, "neighborhoods from different bases");
  switch (v.topology) {
    case TopologyId::QN_BOX: {
      std::vector<Rational> r;
      for (std::size_t i = 0; i < v.radii.size(); ++i) r.push_back(v.radii[i] * w.radii.at(i));
      return NbhdDesc::box(std::move(r));
    }
    case TopologyId::EVSEQ_PRODUCT: {
      // Off the common coordinates one factor is unconstrained and the other
      // ranges over a nontrivial interval, so products are unconstrained.
      std::vector<std::size_t> common;
      std::set_intersection(v.coords.begin(), v.coords.end(), w.coords.begin(), w.coords.end(),
                            std::back_inserter(common));
      return NbhdDesc::product(std::move(common), v.radius * w.radius);
    }
    case TopologyId::EVSEQ_SUPNORM: return NbhdDesc::supnorm(v.radius * w.radius);
    case TopologyId::Z_DISCRETE_TOP: return NbhdDesc::discrete();
  }
  return NbhdDesc::discrete();
}

// ---------------------------------------------------------------------------
// Symbolic sets
// ---------------------------------------------------------------------------

class SetDesc {
 public:
  struct Interval {
    Element lo, hi;
    friend bool operator==(const Interval&, const Interval&) = default;
  };
  struct Finite {
    std::vector<Element> points;
    friend bool operator==(const Finite&, const Finite&) = default;
  };
  struct SolidHull {
    std::vector<Element> points;
    friend bool operator==(const SolidHull&, const SolidHull&) = default;
  };
  struct Nbhd {
    NbhdDesc nbhd;
    friend bool operator==(const Nbhd&, const Nbhd&) = default;
  };
  struct Image {
    std::shared_ptr<const HomDesc> hom;
    std::shared_ptr<const SetDesc> set;
    friend bool operator==(const Image& a, const Image& b) { return *a.hom == *b.hom && *a.set == *b.set; }
  };
  /// The entire space.
  struct Whole {
    friend bool operator==(const Whole&, const Whole&) = default;
  };
  /// {(n+1) e_n : n >= 0} in a sequence space: bounded at every coordinate,
  /// unbounded in sup norm.
  struct Staircase {
    friend bool operator==(const Staircase&, const Staircase&) = default;
  };

  using Body = std::variant<Interval, Finite, SolidHull, Nbhd, Image, Whole, Staircase>;

  static SetDesc interval(const SpaceDesc& space, const Element& lo, const Element& hi) {
    check_element(space, lo);
    check_element(space, hi);
    if (!leq(lo, hi)) throw Error(ErrorCode::InvalidArgument, "interval needs lo <= hi");
    return {space, Interval{lo, hi}};
  }
  static SetDesc finite(const SpaceDesc& space, std::vector<Element> points) {
    if (points.empty()) throw Error(ErrorCode::EmptyInput, "finite set needs at least one point");
    for (const auto& p : points) check_element(space, p);
    return {space, Finite{std::move(points)}};
  }
  static SetDesc nbhd(const SpaceDesc& space, const NbhdDesc& u) {
    check_nbhd(space, u);
    return {space, Nbhd{u}};
  }
  /// T(S), living in `target` (same element kind as S's space).
  static SetDesc image(const HomDesc& t, const SetDesc& s, std::optional<SpaceDesc> target = std::nullopt) {
    check_hom(s.space(), t);
    SpaceDesc out = target.value_or(s.space());
    if (out.kind != s.space().kind || out.dim != s.space().dim)
      throw Error(ErrorCode::InvalidSpace, "image space must carry the same elements");
    return {out, Image{std::make_shared<const HomDesc>(t), std::make_shared<const SetDesc>(s)}};
  }
  static SetDesc whole(const SpaceDesc& space) { return {space, Whole{}}; }
  static SetDesc staircase(const SpaceDesc& space) {
    if (!space.sequence()) throw Error(ErrorCode::InvalidSpace, "staircase lives in a sequence space");
    return {space, Staircase{}};
  }
  static SetDesc solid_hull_of(const SpaceDesc& space, std::vector<Element> points) {
    if (points.empty()) throw Error(ErrorCode::EmptyInput, "solid hull of an empty list");
    for (const auto& p : points) check_element(space, p);
    return {space, SolidHull{std::move(points)}};
  }

  const SpaceDesc& space() const { return space_; }
  const Body& body() const { return body_; }
  /// Same set, regarded inside another space carrying the same elements.
  SetDesc in_space(const SpaceDesc& space) const {
    if (space.kind != space_.kind || space.dim != space_.dim)
      throw Error(ErrorCode::InvalidSpace, "spaces carry different elements");
    SetDesc s = *this;
    s.space_ = space;
    return s;
  }

  friend bool operator==(const SetDesc&, const SetDesc&) = default;

 private:
  SetDesc(SpaceDesc space, Body body) : space_(space), body_(std::move(body)) {}

  SpaceDesc space_;
  Body body_;
};

/// Sol(B) for a finite generating list: the union of [-|y|, |y|] over y.
inline SetDesc solid_hull(const SpaceDesc& space, std::vector<Element> points) {
  return SetDesc::solid_hull_of(space, std::move(points));
}

inline std::string to_string(const SetDesc& s) {
  struct V {
    std::string operator()(const SetDesc::Interval& i) const {
      return "INTERVAL[" + to_string(i.lo) + ", " + to_string(i.hi) + "]";
    }
    std::string operator()(const SetDesc::Finite& f) const {
      std::string out = "FINITE{";
      for (std::size_t i = 0; i < f.points.size(); ++i) out += (i ? "; " : "") + to_string(f.points[i]);
      return out + "}";
    }
    std::string operator()(const SetDesc::SolidHull& f) const {
      std::string out = "SOLID_HULL{";
      for (std::size_t i = 0; i < f.points.size(); ++i) out += (i ? "; " : "") + to_string(f.points[i]);
      return out + "}";
    }
    std::string operator()(const SetDesc::Nbhd& n) const { return "NBHD " + to_string(n.nbhd); }
    std::string operator()(const SetDesc::Image& im) const {
      return "IMAGE(" + to_string(*im.hom) + ", " + to_string(*im.set) + ")";
    }
    std::string operator()(const SetDesc::Whole&) const { return "WHOLE"; }
    std::string operator()(const SetDesc::Staircase&) const { return "STAIRCASE"; }
  };
  return std::visit(V{}, s.body());
}

// ---------------------------------------------------------------------------
// Bound functions
// ---------------------------------------------------------------------------

/// Bound function of T(S) from the bound function of S: row-wise |T| beta.
inline CoordBounds propagate(const HomDesc& t, const CoordBounds& beta) {
  CoordBounds out;
  std::size_t k = t.block_size();
  auto block_row = [&](std::size_t i) {
    Bound acc = Bound::of(0);
    for (std::size_t j = 0; j < k; ++j) acc = acc + scale(t.block()[i][j], beta.at(j));
    return acc;
  };
  if (!t.sequence()) {
    for (std::size_t i = 0; i < k; ++i) out.head.push_back(block_row(i));
    return out;
  }
  std::size_t n = std::max(t.extent(), beta.head.size());
  for (std::size_t i = 0; i < n; ++i) out.head.push_back(i < k ? block_row(i) : scale(t.diag().at(i), beta.at(i)));
  const Rational& d = t.diag().tail();
  const TailBound& bt = *beta.tail;
  if (d == 0) out.tail = TailBound{TailKind::CONSTANT, 0};
  else if (bt.kind == TailKind::INFINITE) out.tail = bt;
  else out.tail = TailBound{bt.kind, abs(d) * bt.value};
  return out;
}

/// Exact per-coordinate supremum of |x_i| over S (an upper bound for images
/// of non-box sets).
inline CoordBounds coordinate_bounds(const SetDesc& s) {
  struct V {
    const SpaceDesc& space;
    CoordBounds operator()(const SetDesc::Interval& i) const { return max(bounds_of(i.lo), bounds_of(i.hi)); }
    CoordBounds operator()(const SetDesc::Finite& f) const { return of_points(f.points); }
    CoordBounds operator()(const SetDesc::SolidHull& f) const { return of_points(f.points); }
    CoordBounds operator()(const SetDesc::Nbhd& n) const { return n.nbhd.bounds(); }
    CoordBounds operator()(const SetDesc::Image& im) const { return propagate(*im.hom, coordinate_bounds(*im.set)); }
    CoordBounds operator()(const SetDesc::Whole&) const {
      CoordBounds b;
      if (space.sequence()) b.tail = TailBound{TailKind::INFINITE, 0};
      else b.head.assign(space.dim, Bound::inf());
      return b;
    }
    CoordBounds operator()(const SetDesc::Staircase&) const {
      CoordBounds b;
      b.tail = TailBound{TailKind::RAMP, 1};
      return b;
    }
    CoordBounds of_points(const std::vector<Element>& pts) const {
      CoordBounds b = bounds_of(pts.front());
      for (std::size_t i = 1; i < pts.size(); ++i) b = max(b, bounds_of(pts[i]));
      return b;
    }
  };
  return std::visit(V{s.space()}, s.body());
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace detail {

struct Range {
  std::optional<Rational> lo, hi;
  bool contains(const Rational& v) const { return (!lo || *lo <= v) && (!hi || v <= *hi); }
};

/// Product-shaped sets as per-coordinate ranges.
struct BoxShape {
  std::vector<Range> head;
  Range tail;
  Range at(std::size_t i) const { return i < head.size() ? head[i] : tail; }
};

inline std::optional<BoxShape> box_shape(const SetDesc& s) {
  BoxShape b;
  if (auto* iv = std::get_if<SetDesc::Interval>(&s.body())) {
    for (std::size_t i = 0; i < std::max(extent(iv->lo), extent(iv->hi)); ++i)
      b.head.push_back({coord(iv->lo, i), coord(iv->hi, i)});
    if (is_evseq(iv->lo)) b.tail = {std::get<EvSeq>(iv->lo).tail(), std::get<EvSeq>(iv->hi).tail()};
    return b;
  }
  if (auto* sh = std::get_if<SetDesc::SolidHull>(&s.body()); sh && sh->points.size() == 1) {
    const auto& y = sh->points.front();
    for (std::size_t i = 0; i < extent(y); ++i) b.head.push_back({-abs(coord(y, i)), abs(coord(y, i))});
    if (is_evseq(y)) b.tail = {-abs(std::get<EvSeq>(y).tail()), abs(std::get<EvSeq>(y).tail())};
    return b;
  }
  if (auto* nb = std::get_if<SetDesc::Nbhd>(&s.body())) {
    auto beta = nb->nbhd.bounds();
    auto range = [](const Bound& r) {
      return r.infinite ? Range{} : Range{Rational(-r.value), r.value};
    };
    for (const auto& r : beta.head) b.head.push_back(range(r));
    if (beta.tail) b.tail = range(beta.at(beta.head.size()));
    return b;
  }
  if (std::holds_alternative<SetDesc::Whole>(s.body())) {
    if (!s.space().sequence()) b.head.assign(s.space().dim, Range{});
    return b;
  }
  return std::nullopt;
}

/// Folds nested images into a single homomorphism over a non-image set.
inline std::pair<HomDesc, const SetDesc*> flatten_image(const SetDesc::Image& im) {
  HomDesc t = *im.hom;
  const SetDesc* inner = im.set.get();
  while (auto* nested = std::get_if<SetDesc::Image>(&inner->body())) {
    t = compose(t, *nested->hom);
    inner = nested->set.get();
  }
  return {t, inner};
}

}  // namespace detail

bool set_member(const SetDesc& s, const Element& x);

namespace detail {

/// x in T(box), by solving T z = x and checking the ranges of z.
inline bool image_of_box_member(const HomDesc& t, const BoxShape& box, const Element& x, bool whole) {
  std::size_t k = t.block_size();
  if (k > 0) {
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < k; ++i) rhs.push_back(coord(x, i));
    auto z = linalg::solve(t.block(), rhs);
    if (z) {
      for (std::size_t j = 0; j < k; ++j)
        if (!box.at(j).contains((*z)[j])) return false;
    } else if (whole) {
      Matrix aug = t.block();
      for (std::size_t i = 0; i < k; ++i) aug[i].push_back(rhs[i]);
      if (linalg::rank(aug) != linalg::rank(t.block())) return false;
    } else {
      throw Error(ErrorCode::Unsupported, "membership in the image of a box under a singular block");
    }
  }
  if (!t.sequence()) return true;
  const auto& s = std::get<EvSeq>(x);
  std::size_t n = std::max({t.extent(), s.span(), box.head.size()});
  for (std::size_t i = k; i < n; ++i) {
    const Rational& d = t.diag().at(i);
    if (d == 0) {
      if (s.at(i) != 0) return false;
    } else if (!box.at(i).contains(s.at(i) / d)) {
      return false;
    }
  }
  const Rational& d = t.diag().tail();
  if (d == 0) return s.tail() == 0;
  return box.tail.contains(s.tail() / d);
}

inline bool image_member(const SetDesc::Image& im, const Element& x) {
  auto [t, inner] = flatten_image(im);
  if (!t.accepts(x)) throw Error(ErrorCode::InvalidElement, "element does not match the image space");
  const auto& body = inner->body();
  if (auto* f = std::get_if<SetDesc::Finite>(&body)) {
    for (const auto& p : f->points)
      if (t.apply(p) == x) return true;
    return false;
  }
  if (auto* sh = std::get_if<SetDesc::SolidHull>(&body); sh && sh->points.size() > 1) {
    for (const auto& p : sh->points)
      if (image_of_box_member(t, *box_shape(SetDesc::solid_hull_of(inner->space(), {p})), x, false)) return true;
    return false;
  }
  if (std::holds_alternative<SetDesc::Staircase>(body)) {
    std::size_t n = std::max(t.extent(), extent(x)) + 1;
    for (std::size_t i = 0; i <= n; ++i)
      if (t.apply(Rational(i + 1) * Element(EvSeq::unit(i))) == x) return true;
    return false;
  }
  auto box = box_shape(*inner);
  return image_of_box_member(t, *box, x, std::holds_alternative<SetDesc::Whole>(body));
}

}  // namespace detail

/// Exact membership. Images under singular homomorphisms of infinite sets are
/// only supported for the whole space (Unsupported otherwise).
inline bool set_member(const SetDesc& s, const Element& x) {
  check_element(s.space(), x);
  struct V {
    const Element& x;
    bool operator()(const SetDesc::Interval& i) const { return leq(i.lo, x) && leq(x, i.hi); }
    bool operator()(const SetDesc::Finite& f) const {
      return std::find(f.points.begin(), f.points.end(), x) != f.points.end();
    }
    bool operator()(const SetDesc::SolidHull& f) const {
      auto ax = abs_val(x);
      return std::any_of(f.points.begin(), f.points.end(), [&](const Element& y) { return leq(ax, abs_val(y)); });
    }
    bool operator()(const SetDesc::Nbhd& n) const { return nbhd_member(n.nbhd, x); }
    bool operator()(const SetDesc::Image& im) const { return detail::image_member(im, x); }
    bool operator()(const SetDesc::Whole&) const { return true; }
    bool operator()(const SetDesc::Staircase&) const {
      const auto& s = std::get<EvSeq>(x);
      if (s.tail() != 0 || s.span() == 0) return false;
      std::size_t n = s.span() - 1;
      return x == Rational(n + 1) * Element(EvSeq::unit(n));
    }
  };
  return std::visit(V{x}, s.body());
}

}  // namespace lring
