#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lring/hom_calculus.hpp"

namespace lring {

// ---------------------------------------------------------------------------
// Exact suprema of |(M x)_i| over symbolic sets
// ---------------------------------------------------------------------------

namespace detail {

inline CoordBounds interval_image_bounds(const HomDesc& m, const SetDesc::Interval& iv) {
  std::size_t k = m.block_size();
  auto spread = [](const Rational& c, const Rational& lo, const Rational& hi) {
    Rational a = c * lo, b = c * hi;
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  auto block_row = [&](std::size_t i) {
    Rational lo_sum = 0, hi_sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      auto [a, b] = spread(m.block()[i][j], coord(iv.lo, j), coord(iv.hi, j));
      lo_sum += a;
      hi_sum += b;
    }
    return Bound::of(std::max(abs(lo_sum), abs(hi_sum)));
  };
  CoordBounds out;
  if (!m.sequence()) {
    for (std::size_t i = 0; i < k; ++i) out.head.push_back(block_row(i));
    return out;
  }
  auto diag_row = [&](const Rational& d, const Rational& lo, const Rational& hi) {
    auto [a, b] = spread(d, lo, hi);
    return std::max(abs(a), abs(b));
  };
  std::size_t n = std::max({m.extent(), extent(iv.lo), extent(iv.hi)});
  for (std::size_t i = 0; i < n; ++i)
    out.head.push_back(i < k ? block_row(i) : Bound::of(diag_row(m.diag().at(i), coord(iv.lo, i), coord(iv.hi, i))));
  out.tail = TailBound{TailKind::CONSTANT, diag_row(m.diag().tail(), std::get<EvSeq>(iv.lo).tail(),
                                                    std::get<EvSeq>(iv.hi).tail())};
  return out;
}

inline CoordBounds staircase_image_bounds(const HomDesc& m) {
  std::size_t k = m.block_size();
  CoordBounds out;
  for (std::size_t i = 0; i < m.extent(); ++i) {
    Rational best = 0;
    if (i < k) {
      for (std::size_t j = 0; j < k; ++j) best = std::max(best, abs(m.block()[i][j]) * Rational(j + 1));
    } else {
      best = abs(m.diag().at(i)) * Rational(i + 1);
    }
    out.head.push_back(Bound::of(best));
  }
  out.tail = TailBound{TailKind::RAMP, abs(m.diag().tail())};
  return out;
}

}  // namespace detail

/// Exact per-coordinate supremum of |(m x)_i| over x in s.
inline CoordBounds exact_sup(const HomDesc& m, const SetDesc& s) {
  check_hom(s.space(), m);
  const auto& body = s.body();
  if (auto* im = std::get_if<SetDesc::Image>(&body)) {
    auto [h, inner] = detail::flatten_image(*im);
    return exact_sup(compose(m, h), *inner);
  }
  if (auto* f = std::get_if<SetDesc::Finite>(&body)) {
    CoordBounds b = bounds_of(m.apply(f->points.front()));
    for (const auto& p : f->points) b = max(b, bounds_of(m.apply(p)));
    return b;
  }
  if (auto* sh = std::get_if<SetDesc::SolidHull>(&body)) {
    CoordBounds b = propagate(m, bounds_of(sh->points.front()));
    for (const auto& p : sh->points) b = max(b, propagate(m, bounds_of(p)));
    return b;
  }
  if (auto* iv = std::get_if<SetDesc::Interval>(&body)) return detail::interval_image_bounds(m, *iv);
  if (std::holds_alternative<SetDesc::Staircase>(body)) return detail::staircase_image_bounds(m);
  return propagate(m, coordinate_bounds(s));
}

// ---------------------------------------------------------------------------
// Row structure of homomorphisms
// ---------------------------------------------------------------------------

/// Columns j with a nonzero entry in row i.
inline std::vector<std::size_t> row_support(const HomDesc& t, std::size_t i) {
  std::vector<std::size_t> out;
  std::size_t k = t.block_size();
  if (i < k) {
    for (std::size_t j = 0; j < k; ++j)
      if (t.block()[i][j] != 0) out.push_back(j);
  } else if (t.sequence() && t.diag().at(i) != 0) {
    out.push_back(i);
  }
  return out;
}

inline Rational row_sum(const HomDesc& t, std::size_t i) {
  Rational s = 0;
  for (auto j : row_support(t, i)) s += abs(t.entry(i, j));
  return s;
}

/// The rows a base neighborhood constrains, listed up to `limit` for the
/// sequence families (beyond it every row behaves like the diagonal tail).
inline std::vector<std::size_t> constrained_rows(const NbhdDesc& w, std::size_t dim, std::size_t limit) {
  std::vector<std::size_t> rows;
  switch (w.topology) {
    case TopologyId::QN_BOX:
    case TopologyId::Z_DISCRETE_TOP:
      for (std::size_t i = 0; i < dim; ++i) rows.push_back(i);
      break;
    case TopologyId::EVSEQ_PRODUCT: rows = w.coords; break;
    case TopologyId::EVSEQ_SUPNORM:
      for (std::size_t i = 0; i < limit; ++i) rows.push_back(i);
      break;
  }
  return rows;
}

/// A base neighborhood standing for every generator of the family: radius 1,
/// and in the product family constraining every row up to `extent`.
inline NbhdDesc representative_nbhd(const SpaceDesc& space, std::size_t extent) {
  if (space.topology != TopologyId::EVSEQ_PRODUCT) return unit_nbhd(space);
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i <= extent; ++i) coords.push_back(i);
  return NbhdDesc::product(std::move(coords), 1);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// Which boundedness notion judges images in the codomain. The sets
/// quantified over in the domain are ring-bounded under both readings.
enum class Reading { RING, GROUP };

inline const char* to_string(Reading r) { return r == Reading::RING ? "ring" : "group"; }

inline BoundednessVerdict bounded_in(const SpaceDesc& space, Reading r, const CoordBounds& beta) {
  return r == Reading::RING ? ring_bounded(beta, space) : group_bounded(beta, space);
}

/// The ring-bounded set of the domain whose image is hardest to bound: every
/// ring-bounded set has a bound function dominated, coordinate by coordinate
/// and up to scaling, by this one (in the product topology only finiteness
/// matters, which the staircase captures).
inline SetDesc worst_bounded_set(const SpaceDesc& space) {
  if (space.mul == Multiplication::ZERO || space.topology == TopologyId::Z_DISCRETE_TOP) return SetDesc::whole(space);
  if (space.topology == TopologyId::EVSEQ_PRODUCT) return SetDesc::staircase(space);
  return SetDesc::nbhd(space, unit_nbhd(space));
}

/// The base neighborhood of the domain whose image is smallest in the sense
/// relevant to boundedness: radius 1, and in the product family constraining
/// every column a row within the extent of t uses.
inline NbhdDesc tightest_nbhd(const SpaceDesc& space, const HomDesc& t) {
  if (space.topology != TopologyId::EVSEQ_PRODUCT) return unit_nbhd(space);
  std::set<std::size_t> f{0};
  for (std::size_t i = 0; i < t.extent(); ++i)
    for (auto j : row_support(t, i)) f.insert(j);
  return NbhdDesc::product({f.begin(), f.end()}, 1);
}

/// A base U of the domain with T(U) in W, if one exists.
inline std::optional<NbhdDesc> continuity_certificate(const HomDesc& t, const SpaceDesc& domain,
                                                      const SpaceDesc& codomain, const NbhdDesc& w) {
  check_nbhd(codomain, w);
  if (domain.topology == TopologyId::Z_DISCRETE_TOP) return NbhdDesc::discrete();
  std::size_t dim = t.sequence() ? 0 : t.block_size();
  Rational eps = w.topology == TopologyId::QN_BOX ? *std::min_element(w.radii.begin(), w.radii.end()) : w.radius;
  std::optional<NbhdDesc> u;
  if (domain.topology == TopologyId::QN_BOX) {
    Rational delta = 1;
    bool first = true;
    for (std::size_t i = 0; i < dim; ++i) {
      Rational s = row_sum(t, i);
      if (s == 0) continue;
      Rational d = w.radii.at(i) / s;
      if (first || d < delta) delta = d;
      first = false;
    }
    u = NbhdDesc::box(std::vector<Rational>(dim, delta));
  } else {
    bool all_rows = w.topology == TopologyId::EVSEQ_SUPNORM;
    if (all_rows && domain.topology == TopologyId::EVSEQ_PRODUCT && t.diag().tail() != 0) return std::nullopt;
    auto rows = constrained_rows(w, dim, t.extent());
    Rational widest = 0;
    std::set<std::size_t> f;
    for (auto i : rows) {
      widest = std::max(widest, row_sum(t, i));
      for (auto j : row_support(t, i)) f.insert(j);
    }
    if (all_rows) widest = std::max(widest, abs(t.diag().tail()));
    Rational delta = widest == 0 ? Rational(1) : Rational(eps / widest);
    if (domain.topology == TopologyId::EVSEQ_SUPNORM) {
      u = NbhdDesc::supnorm(delta);
    } else {
      if (f.empty()) f.insert(0);
      u = NbhdDesc::product({f.begin(), f.end()}, delta);
    }
  }
  if (!bounds_within(propagate(t, u->bounds()), w))
    throw Error(ErrorCode::SoundnessBug, "continuity certificate " + to_string(*u) + " misses " + to_string(w));
  return u;
}

/// One flag of a ClassLabel together with the data it was decided on.
struct FlagVerdict {
  bool holds = false;
  std::optional<NbhdDesc> domain_nbhd;    // nr: the U; continuity: the U answering codomain_nbhd
  std::optional<SetDesc> domain_set;      // br: the ring-bounded domain set whose image was judged
  std::optional<NbhdDesc> codomain_nbhd;  // refuting W, or the representative W for continuity
  CoordBounds image_bounds;

  friend bool operator==(const FlagVerdict&, const FlagVerdict&) = default;
};

struct ReadingFlags {
  FlagVerdict nr, br;
};

struct ClassLabel {
  HomVerdict order;
  ReadingFlags ring, group;
  FlagVerdict continuous;

  bool order_bounded() const { return order.order_bounded; }
  const ReadingFlags& reading(Reading r) const { return r == Reading::RING ? ring : group; }
  bool readings_differ() const { return ring.nr.holds != group.nr.holds || ring.br.holds != group.br.holds; }
};

namespace detail {

inline FlagVerdict image_flag(const HomDesc& t, const SetDesc& source, const SpaceDesc& codomain, Reading r) {
  FlagVerdict f;
  f.image_bounds = exact_sup(t, source);
  auto v = bounded_in(codomain, r, f.image_bounds);
  f.holds = v.bounded;
  f.codomain_nbhd = v.witness;
  return f;
}

inline void check_pair(const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain) {
  SpaceDesc::validated(domain);
  SpaceDesc::validated(codomain);
  if (domain.kind != codomain.kind || domain.dim != codomain.dim)
    throw Error(ErrorCode::InvalidSpace, "domain and codomain must hold the same kind of element");
  check_hom(domain, t);
}

}  // namespace detail

inline FlagVerdict nr_flag(const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain, Reading r) {
  NbhdDesc u = tightest_nbhd(domain, t);
  FlagVerdict f = detail::image_flag(t, SetDesc::nbhd(domain, u), codomain, r);
  f.domain_nbhd = u;
  return f;
}

inline FlagVerdict br_flag(const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain, Reading r) {
  SetDesc b = worst_bounded_set(domain);
  FlagVerdict f = detail::image_flag(t, b, codomain, r);
  f.domain_set = b;
  return f;
}

inline FlagVerdict continuity_flag(const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain) {
  FlagVerdict f;
  NbhdDesc w = representative_nbhd(codomain, t.extent());
  f.codomain_nbhd = w;
  f.domain_nbhd = continuity_certificate(t, domain, codomain, w);
  f.holds = f.domain_nbhd.has_value();
  if (f.holds) f.image_bounds = propagate(t, f.domain_nbhd->bounds());
  return f;
}

/// Order boundedness, nr- and br-boundedness under both readings, and
/// continuity of t from domain to codomain.
inline ClassLabel classify(const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain) {
  detail::check_pair(t, domain, codomain);
  ClassLabel c;
  c.order = hom_verdict(domain, t);
  for (Reading r : {Reading::RING, Reading::GROUP}) {
    ReadingFlags& flags = r == Reading::RING ? c.ring : c.group;
    flags.nr = nr_flag(t, domain, codomain, r);
    flags.br = br_flag(t, domain, codomain, r);
  }
  c.continuous = continuity_flag(t, domain, codomain);
  return c;
}

inline ClassLabel classify(const HomDesc& t, const SpaceDesc& space) { return classify(t, space, space); }

/// Re-derives every flag from its recorded witness alone.
inline bool recheck(const ClassLabel& c, const HomDesc& t, const SpaceDesc& domain, const SpaceDesc& codomain) {
  for (Reading r : {Reading::RING, Reading::GROUP}) {
    const auto& flags = c.reading(r);
    if (!flags.nr.domain_nbhd) return false;
    auto nr_image = exact_sup(t, SetDesc::nbhd(domain, *flags.nr.domain_nbhd));
    if (bounded_in(codomain, r, nr_image).bounded != flags.nr.holds) return false;
    if (!flags.nr.holds && bounds_within(nr_image, *flags.nr.codomain_nbhd)) return false;
    if (!flags.br.domain_set || !set_ring_bounded(*flags.br.domain_set)) return false;
    auto br_image = exact_sup(t, *flags.br.domain_set);
    if (bounded_in(codomain, r, br_image).bounded != flags.br.holds) return false;
  }
  const auto& ct = c.continuous;
  if (!ct.codomain_nbhd) return false;
  if (ct.holds) return ct.domain_nbhd && bounds_within(propagate(t, ct.domain_nbhd->bounds()), *ct.codomain_nbhd);
  return !continuity_certificate(t, domain, codomain, *ct.codomain_nbhd);
}

// ---------------------------------------------------------------------------
// Nets of homomorphisms
// ---------------------------------------------------------------------------

/// A sequence alpha = 1, 2, ... of homomorphisms with a finite description:
/// constant T, affine T + M/alpha, or an explicit table that stays at its
/// last entry.
class HomNet {
 public:
  enum class Family { CONSTANT, AFFINE, TABLE };

  static HomNet constant(SpaceDesc domain, SpaceDesc codomain, HomDesc t) {
    return HomNet(Family::CONSTANT, domain, codomain, {std::move(t)});
  }
  static HomNet affine(SpaceDesc domain, SpaceDesc codomain, HomDesc t, HomDesc m) {
    return HomNet(Family::AFFINE, domain, codomain, {std::move(t), std::move(m)});
  }
  static HomNet table(SpaceDesc domain, SpaceDesc codomain, std::vector<HomDesc> terms) {
    if (terms.empty()) throw Error(ErrorCode::EmptyInput, "a table net needs at least one term");
    return HomNet(Family::TABLE, domain, codomain, std::move(terms));
  }

  Family family() const { return family_; }
  const SpaceDesc& domain() const { return domain_; }
  const SpaceDesc& codomain() const { return codomain_; }
  /// CONSTANT: {T}; AFFINE: {T, M}; TABLE: the terms.
  const std::vector<HomDesc>& params() const { return params_; }
  bool closed_form() const { return family_ != Family::TABLE; }

  HomDesc term(const Integer& alpha) const {
    if (alpha < 1) throw Error(ErrorCode::InvalidArgument, "net indices start at 1");
    switch (family_) {
      case Family::CONSTANT: return params_[0];
      case Family::AFFINE: return params_[0] + Rational(Integer(1), alpha) * params_[1];
      case Family::TABLE: {
        std::size_t n = params_.size();
        return alpha >= n ? params_.back() : params_[static_cast<std::size_t>(alpha) - 1];
      }
    }
    return params_[0];
  }

  /// The net alpha -> term(alpha) - s.
  HomNet shifted(const HomDesc& s) const {
    HomNet out = *this;
    if (family_ == Family::TABLE)
      for (auto& p : out.params_) p = p - s;
    else
      out.params_[0] = out.params_[0] - s;
    return out;
  }

  friend bool operator==(const HomNet&, const HomNet&) = default;

 private:
  HomNet(Family f, SpaceDesc domain, SpaceDesc codomain, std::vector<HomDesc> params)
      : family_(f), domain_(domain), codomain_(codomain), params_(std::move(params)) {
    detail::check_pair(params_.front(), domain_, codomain_);
    for (const auto& p : params_) HomDesc::check_compatible(params_.front(), p);
  }

  Family family_;
  SpaceDesc domain_, codomain_;
  std::vector<HomDesc> params_;
};

inline const char* to_string(HomNet::Family f) {
  switch (f) {
    case HomNet::Family::CONSTANT: return "constant";
    case HomNet::Family::AFFINE: return "affine";
    case HomNet::Family::TABLE: return "table";
  }
  return "?";
}

/// The net alpha -> a(alpha) - b(alpha).
inline HomNet difference(const HomNet& a, const HomNet& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw Error(ErrorCode::InvalidSpace, "nets act between different spaces");
  if (a.closed_form() && b.closed_form()) {
    auto slope = [](const HomNet& n) {
      return n.family() == HomNet::Family::AFFINE ? n.params()[1] : HomDesc(n.params()[0] - n.params()[0]);
    };
    HomDesc c = a.params()[0] - b.params()[0];
    if (a.family() == HomNet::Family::CONSTANT && b.family() == HomNet::Family::CONSTANT)
      return HomNet::constant(a.domain(), a.codomain(), c);
    return HomNet::affine(a.domain(), a.codomain(), c, slope(a) - slope(b));
  }
  std::size_t n = std::max(a.closed_form() ? 1 : a.params().size(), b.closed_form() ? 1 : b.params().size());
  std::vector<HomDesc> terms;
  for (std::size_t i = 1; i <= n; ++i) terms.push_back(a.term(Integer(i)) - b.term(Integer(i)));
  if (!a.closed_form() && !b.closed_form()) return HomNet::table(a.domain(), a.codomain(), terms);
  throw Error(ErrorCode::Unsupported, "difference of a closed-form net and a table net");
}

// ---------------------------------------------------------------------------
// Uniform convergence
// ---------------------------------------------------------------------------

enum class ConvergenceMode { NR, BR, CR };

inline const char* to_string(ConvergenceMode m) {
  switch (m) {
    case ConvergenceMode::NR: return "nr";
    case ConvergenceMode::BR: return "br";
    case ConvergenceMode::CR: return "cr";
  }
  return "?";
}

/// Outcome of a convergence check. When convergent, alpha0(V) is the least
/// index from which every (term(alpha) - limit)(source) lies in the target
/// of V (V itself, or V.W for cr); otherwise witness_v is a base V for which
/// no such index exists.
class ConvergenceCertificate {
 public:
  ConvergenceMode mode = ConvergenceMode::NR;
  bool convergent = false;
  std::optional<NbhdDesc> witness_v;
  std::string reason;
  std::optional<NbhdDesc> domain_nbhd;  // nr: the given U; cr: the U answering cr_w
  std::optional<NbhdDesc> cr_w;
  CoordBounds rate;  // closed-form nets: exact sup of |M x| over the source

  const SetDesc& source() const { return *source_; }
  const HomNet& difference_net() const { return *diff_; }

  NbhdDesc target(const NbhdDesc& v) const {
    check_nbhd(diff_->codomain(), v);
    return cr_w ? nbhd_product(v, *cr_w) : v;
  }

  /// (term(alpha) - limit)(source) lies in the target of v, checked directly.
  bool contained_at(const Integer& alpha, const NbhdDesc& v) const {
    return bounds_within(exact_sup(diff_->term(alpha), *source_), target(v));
  }

  Integer alpha0(const NbhdDesc& v) const {
    if (!convergent) throw Error(ErrorCode::InvalidArgument, "no alpha0 for a non-convergent net");
    NbhdDesc t = target(v);
    if (!diff_->closed_form()) {
      std::size_t n = diff_->params().size();
      for (std::size_t a = n; a-- > 1;)
        if (!contained_at(Integer(a), v)) return Integer(a + 1);
      return 1;
    }
    Integer best = 1;
    auto need = [&](const Bound& m, const Rational& eps) {
      if (m.infinite) throw Error(ErrorCode::SoundnessBug, "infinite rate on a constrained coordinate");
      best = std::max(best, ceil(m.value / eps));
    };
    switch (t.topology) {
      case TopologyId::QN_BOX:
        for (std::size_t i = 0; i < t.radii.size(); ++i) need(rate.at(i), t.radii[i]);
        break;
      case TopologyId::EVSEQ_PRODUCT:
        for (auto i : t.coords) need(rate.at(i), t.radius);
        break;
      case TopologyId::EVSEQ_SUPNORM: need(rate.sup(), t.radius); break;
      case TopologyId::Z_DISCRETE_TOP: break;
    }
    return best;
  }

  /// Symbolic form of alpha0 as a function of the target's radii.
  std::string alpha0_formula() const {
    if (!convergent) return "none";
    if (!diff_->closed_form()) return "scan of " + std::to_string(diff_->params().size()) + " table terms";
    if (rate.all_zero()) return "1";
    if (diff_->codomain().topology == TopologyId::EVSEQ_SUPNORM)
      return "max(1, ceil(" + to_string(rate.sup()) + " / r))";
    return "max(1, max_i ceil(m_i / r_i)) with m = " + to_string(rate);
  }

 private:
  friend ConvergenceCertificate make_certificate(ConvergenceMode, const HomNet&, const SetDesc&,
                                                 std::optional<NbhdDesc>);
  std::optional<SetDesc> source_;
  std::optional<HomNet> diff_;
};

namespace detail {

/// First row (among those `filter` constrains, or all rows) where beta is
/// nonzero; infinite rows are preferred since they refute every radius.
inline std::optional<std::pair<std::size_t, Bound>> offending_row(const CoordBounds& beta,
                                                                  const std::optional<NbhdDesc>& filter) {
  std::size_t n = beta.head.size() + (beta.tail ? 1 : 0);
  auto allowed = [&](std::size_t i) { return !filter || filter->constrains(i); };
  std::vector<std::size_t> rows;
  if (filter && filter->topology == TopologyId::EVSEQ_PRODUCT) rows = filter->coords;
  else
    for (std::size_t i = 0; i < n; ++i) rows.push_back(i);
  std::optional<std::pair<std::size_t, Bound>> finite;
  for (auto i : rows) {
    if (!allowed(i)) continue;
    Bound b = beta.at(i);
    if (b.infinite) return std::make_pair(i, b);
    if (b.value != 0 && !finite) finite = std::make_pair(i, b);
  }
  return finite;
}

}  // namespace detail

inline ConvergenceCertificate make_certificate(ConvergenceMode mode, const HomNet& diff, const SetDesc& source,
                                               std::optional<NbhdDesc> cr_w) {
  ConvergenceCertificate c;
  c.mode = mode;
  c.source_ = source;
  c.diff_ = diff;
  c.cr_w = cr_w;
  const SpaceDesc& cod = diff.codomain();
  // Rows that some target constrains: all of them, except that V.W only
  // reaches the rows W constrains.
  std::optional<NbhdDesc> filter = cr_w && cr_w->topology == TopologyId::EVSEQ_PRODUCT ? cr_w : std::nullopt;
  auto refute = [&](std::size_t i, const Bound& b, const std::string& why) {
    c.convergent = false;
    Rational r = b.infinite ? Rational(1) : Rational(b.value / 2);
    c.witness_v = coordinate_nbhd(cod, i, r);
    c.reason = why + " at coordinate " + std::to_string(i);
  };
  const HomDesc& limit_part = diff.closed_form() ? diff.params()[0] : diff.params().back();
  CoordBounds persistent = exact_sup(limit_part, source);
  if (auto bad = detail::offending_row(persistent, filter)) {
    refute(bad->first, bad->second, "difference does not vanish on the source");
    return c;
  }
  c.convergent = true;
  if (!diff.closed_form()) return c;
  c.rate = diff.family() == HomNet::Family::AFFINE ? exact_sup(diff.params()[1], source) : persistent;
  switch (cod.topology) {
    case TopologyId::EVSEQ_SUPNORM:
      if (c.rate.sup().infinite) {
        c.convergent = false;
        c.witness_v = NbhdDesc::supnorm(1);
        c.reason = "the 1/alpha part is unbounded on the source";
      }
      break;
    case TopologyId::Z_DISCRETE_TOP:
      if (!c.rate.all_zero()) {
        c.convergent = false;
        c.witness_v = NbhdDesc::discrete();
        c.reason = "the 1/alpha part never vanishes on the source";
      }
      break;
    default: {
      std::optional<std::size_t> inf;
      if (filter) {
        for (auto i : filter->coords)
          if (c.rate.at(i).infinite) {
            inf = i;
            break;
          }
      } else {
        inf = c.rate.first_infinite();
      }
      if (inf) refute(*inf, Bound::inf(), "the 1/alpha part is unbounded on the source");
    }
  }
  return c;
}

namespace detail {

inline void check_limit(const HomNet& net, const HomDesc& limit) {
  check_hom(net.domain(), limit);
  HomDesc::check_compatible(net.params().front(), limit);
}

inline void check_horizon(const HomNet& net, std::size_t horizon) {
  if (!net.closed_form() && net.params().size() > horizon)
    throw Error(ErrorCode::InvalidArgument, "table net is longer than the search horizon");
}

}  // namespace detail

inline constexpr std::size_t default_horizon = 1000;

inline ConvergenceCertificate nr_converges(const HomNet& net, const HomDesc& limit, const NbhdDesc& u,
                                           std::size_t horizon = default_horizon) {
  detail::check_limit(net, limit);
  detail::check_horizon(net, horizon);
  check_nbhd(net.domain(), u);
  auto c = make_certificate(ConvergenceMode::NR, net.shifted(limit), SetDesc::nbhd(net.domain(), u), std::nullopt);
  c.domain_nbhd = u;
  return c;
}

inline ConvergenceCertificate br_converges(const HomNet& net, const HomDesc& limit, const SetDesc& b,
                                           std::size_t horizon = default_horizon) {
  detail::check_limit(net, limit);
  detail::check_horizon(net, horizon);
  if (b.space() != net.domain()) throw Error(ErrorCode::InvalidSpace, "bounded set lives in another space");
  if (!set_ring_bounded(b)) throw Error(ErrorCode::NotBounded, to_string(b) + " is not ring-bounded");
  return make_certificate(ConvergenceMode::BR, net.shifted(limit), b, std::nullopt);
}

namespace detail {

/// The base U of the domain a cr certificate uses against w: in the product
/// family it constrains every column that a row reached by w uses.
inline NbhdDesc cr_domain_nbhd(const HomNet& diff, const NbhdDesc& w) {
  const SpaceDesc& dom = diff.domain();
  if (dom.topology != TopologyId::EVSEQ_PRODUCT) return unit_nbhd(dom);
  std::size_t ext = 0;
  for (const auto& h : diff.params()) ext = std::max(ext, h.extent());
  auto rows = constrained_rows(w, 0, ext);
  std::set<std::size_t> f{0};
  for (const auto& h : diff.params())
    for (auto i : rows)
      for (auto j : row_support(h, i)) f.insert(j);
  return NbhdDesc::product({f.begin(), f.end()}, 1);
}

}  // namespace detail

/// cr convergence against one W: the U found for W and alpha0 as a function
/// of V, with targets V.W.
inline ConvergenceCertificate cr_certificate(const HomNet& net, const HomDesc& limit, const NbhdDesc& w,
                                             std::size_t horizon = default_horizon) {
  detail::check_limit(net, limit);
  detail::check_horizon(net, horizon);
  if (net.domain().mul == Multiplication::ZERO || net.codomain().mul == Multiplication::ZERO)
    throw Error(ErrorCode::VacuousProduct, "V.W = {0} under zero multiplication");
  check_nbhd(net.codomain(), w);
  HomNet diff = net.shifted(limit);
  NbhdDesc u = detail::cr_domain_nbhd(diff, w);
  auto c = make_certificate(ConvergenceMode::CR, diff, SetDesc::nbhd(net.domain(), u), w);
  c.domain_nbhd = u;
  return c;
}

/// cr convergence, decided on the representative W of the codomain family
/// (every other W is answered by cr_certificate).
inline ConvergenceCertificate cr_converges(const HomNet& net, const HomDesc& limit,
                                           std::size_t horizon = default_horizon) {
  std::size_t ext = limit.extent();
  for (const auto& h : net.params()) ext = std::max(ext, h.extent());
  auto c = cr_certificate(net, limit, representative_nbhd(net.codomain(), ext), horizon);
  if (!c.convergent) {
    c.reason += " (against W = " + to_string(*c.cr_w) + ")";
  }
  return c;
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

struct UniquenessAudit {
  bool reached = false;  // both limits passed their convergence check
  bool equal = false;
  std::string note;
};

struct ModeParams {
  std::optional<NbhdDesc> u;  // nr
  std::optional<SetDesc> b;   // br
  std::size_t horizon = default_horizon;
};

inline ConvergenceCertificate converges(ConvergenceMode mode, const HomNet& net, const HomDesc& limit,
                                        const ModeParams& p) {
  switch (mode) {
    case ConvergenceMode::NR:
      if (!p.u) throw Error(ErrorCode::InvalidArgument, "nr mode needs a neighborhood U");
      return nr_converges(net, limit, *p.u, p.horizon);
    case ConvergenceMode::BR:
      return br_converges(net, limit, p.b ? *p.b : worst_bounded_set(net.domain()), p.horizon);
    case ConvergenceMode::CR: return cr_converges(net, limit, p.horizon);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode");
}

/// A net converging to two limits forces them to coincide. In br mode
/// convergence is required on the domain's worst bounded set as well as on
/// any given B, since uniform convergence on bounded sets means all of them.
inline UniquenessAudit limit_uniqueness_audit(const HomNet& net, const HomDesc& a, const HomDesc& b,
                                              ConvergenceMode mode, const ModeParams& p) {
  if (net.domain().topology == TopologyId::Z_DISCRETE_TOP)
    throw Error(ErrorCode::Unsupported, "singletons of discrete Z are not group-bounded");
  auto converges_to = [&](const HomDesc& l) {
    if (!converges(mode, net, l, p).convergent) return false;
    if (mode == ConvergenceMode::BR && p.b) {
      ModeParams worst = p;
      worst.b.reset();
      return converges(mode, net, l, worst).convergent;
    }
    return true;
  };
  UniquenessAudit audit;
  if (!converges_to(a) || !converges_to(b)) {
    audit.note = "a limit fails its convergence check; the audit is not reached";
    return audit;
  }
  audit.reached = true;
  audit.equal = a == b;
  if (!audit.equal)
    throw Error(ErrorCode::SoundnessBug, "net converges to distinct limits " + to_string(a) + " and " + to_string(b));
  audit.note = "limits coincide";
  return audit;
}

/// Solid set whose positive part the continuity audit samples from.
inline SetDesc solidified(const SetDesc& b) {
  const auto& body = b.body();
  if (auto* f = std::get_if<SetDesc::Finite>(&body)) return solid_hull(b.space(), f->points);
  if (auto* iv = std::get_if<SetDesc::Interval>(&body)) return solid_hull(b.space(), {join(abs_val(iv->lo), abs_val(iv->hi))});
  if (std::holds_alternative<SetDesc::Staircase>(body)) return b;
  if (is_solid(b).solid) return b;
  throw Error(ErrorCode::Unsupported, "the continuity audit needs a solid bounded set");
}

struct ContinuityAudit {
  std::size_t inequality_checks = 0;
  std::size_t membership_checks = 0;
  std::vector<Integer> alphas;
  std::vector<NbhdDesc> targets;
};

struct ContinuityParams {
  ModeParams mode;
  std::size_t samples = 12;
  std::uint64_t seed = 0;
  std::vector<Integer> extra_alphas;
};

/// T_a+(x) - S_a+(x) <= (T_a - S_a)+(x) on sampled positive x of the source,
/// and (T_a - S_a)+(x) in the certified target once a >= alpha0(V).
inline ContinuityAudit lattice_continuity_audit(const HomNet& net_t, const HomNet& net_s, ConvergenceMode mode,
                                                const ContinuityParams& params) {
  HomNet diff = difference(net_t, net_s);
  HomDesc zero = HomDesc::zero(diff.domain());
  ModeParams mp = params.mode;
  if (mode == ConvergenceMode::BR) mp.b = solidified(mp.b ? *mp.b : worst_bounded_set(diff.domain()));
  auto cert = converges(mode, diff, zero, mp);
  if (!cert.convergent)
    throw Error(ErrorCode::InvalidArgument, "T_a - S_a does not converge to 0 in " + std::string(to_string(mode)) +
                                                " mode: " + cert.reason);
  std::size_t ext = 0;
  for (const auto& h : diff.params()) ext = std::max(ext, h.extent());
  NbhdDesc rep = representative_nbhd(diff.codomain(), ext);
  auto scaled = [&](const Rational& c) {
    NbhdDesc v = rep;
    for (auto& r : v.radii) r *= c;
    if (v.topology != TopologyId::Z_DISCRETE_TOP) v.radius *= c;
    return v;
  };
  ContinuityAudit audit;
  audit.targets = {scaled(1), scaled(Rational(1, 7))};
  Sampler rng(params.seed);
  std::vector<Element> xs{diff.domain().zero()};
  for (std::size_t s = 0; s < params.samples; ++s) xs.push_back(abs_val(rng.member(cert.source())));
  for (const auto& v : audit.targets) {
    Integer a0 = cert.alpha0(v);
    std::vector<Integer> alphas{1, 2, 3, a0, a0 + 1, a0 + 7};
    alphas.insert(alphas.end(), params.extra_alphas.begin(), params.extra_alphas.end());
    NbhdDesc target = cert.target(v);
    for (const auto& a : alphas) {
      audit.alphas.push_back(a);
      HomDesc ta = net_t.term(a), sa = net_s.term(a);
      HomDesc tp = positive_part(ta), sp = positive_part(sa), dp = positive_part(ta - sa);
      for (const auto& x : xs) {
        Element lhs = tp.apply(x) - sp.apply(x);
        Element rhs = dp.apply(x);
        ++audit.inequality_checks;
        if (!leq(lhs, rhs))
          throw Error(ErrorCode::SoundnessBug, "T+(x) - S+(x) <= (T - S)+(x) fails at alpha = " + a.str() +
                                                   ", x = " + to_string(x));
        if (a >= a0) {
          ++audit.membership_checks;
          if (!nbhd_member(target, rhs))
            throw Error(ErrorCode::SoundnessBug, "(T - S)+(x) leaves " + to_string(target) + " at alpha = " +
                                                     a.str() + ", x = " + to_string(x));
        }
      }
    }
  }
  return audit;
}

}  // namespace lring
