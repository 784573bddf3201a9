#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lring/boundedness.hpp"

namespace lring {

/// Reproducible sampler. Draws are mapped from the raw mt19937_64 stream
/// (whose output is fixed by the standard), so a seed yields the same
/// samples on every platform.
class Sampler {
 public:
  static constexpr std::uint64_t default_seed = 0;

  explicit Sampler(std::uint64_t seed = default_seed) : gen_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  bool coin() { return gen_() & 1; }

  /// Small rational num/den with |num| <= max_num, 1 <= den <= max_den.
  Rational rational(std::int64_t max_num = 9, std::int64_t max_den = 6) {
    return Rational(Integer(integer(-max_num, max_num)), Integer(integer(1, max_den)));
  }

  Rational nonnegative(std::int64_t max_num = 9, std::int64_t max_den = 6) {
    return Rational(Integer(integer(0, max_num)), Integer(integer(1, max_den)));
  }

  Rational positive(std::int64_t max_num = 9, std::int64_t max_den = 6) {
    return Rational(Integer(integer(1, max_num)), Integer(integer(1, max_den)));
  }

  FinVec finvec(std::size_t dim) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < dim; ++i) v.push_back(rational());
    return FinVec(std::move(v));
  }

  FinVec nonnegative_finvec(std::size_t dim) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < dim; ++i) v.push_back(nonnegative());
    return FinVec(std::move(v));
  }

  EvSeq evseq(std::size_t max_prefix = 5) {
    std::vector<Rational> p;
    auto n = static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(max_prefix)));
    for (std::size_t i = 0; i < n; ++i) p.push_back(rational());
    return EvSeq(std::move(p), rational());
  }

  EvSeq nonnegative_evseq(std::size_t max_prefix = 5) {
    std::vector<Rational> p;
    auto n = static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(max_prefix)));
    for (std::size_t i = 0; i < n; ++i) p.push_back(nonnegative());
    return EvSeq(std::move(p), nonnegative());
  }

  /// Random element of the space.
  Element element(const SpaceDesc& space) {
    switch (space.kind) {
      case SpaceKind::QN: return finvec(space.dim);
      case SpaceKind::EVSEQ: return evseq();
      case SpaceKind::Z_DISCRETE: return FinVec{Rational(integer(-9, 9))};
    }
    return space.zero();
  }

  Element nonnegative_element(const SpaceDesc& space) {
    switch (space.kind) {
      case SpaceKind::QN: return nonnegative_finvec(space.dim);
      case SpaceKind::EVSEQ: return nonnegative_evseq();
      case SpaceKind::Z_DISCRETE: return FinVec{Rational(integer(0, 9))};
    }
    return space.zero();
  }

  Matrix matrix(std::size_t n) {
    Matrix m(n, std::vector<Rational>(n));
    for (auto& row : m)
      for (auto& e : row) e = rational();
    return m;
  }

  /// Random homomorphism acting on the space.
  HomDesc hom(const SpaceDesc& space) {
    if (space.kind == SpaceKind::Z_DISCRETE) return HomDesc::scalar_matrix(1, Rational(integer(-5, 5)));
    if (!space.sequence()) return HomDesc::matrix(matrix(space.dim));
    auto k = static_cast<std::size_t>(integer(0, 3));
    return HomDesc::diag_plus_finite(evseq(), k, matrix(k));
  }

  /// Uniform-ish rational in [lo, hi] (grid of the given resolution).
  Rational between(const Rational& lo, const Rational& hi, std::int64_t steps = 12) {
    return lo + (hi - lo) * Rational(Integer(integer(0, steps)), Integer(steps));
  }

  /// A member of S. Unconstrained coordinates are drawn from [-spread, spread].
  Element member(const SetDesc& s, const Rational& spread = 50) {
    const SpaceDesc& space = s.space();
    auto from_ranges = [&](auto&& lo_at, auto&& hi_at, std::size_t head, bool seq) -> Element {
      std::vector<Rational> p;
      std::size_t n = head + (seq ? static_cast<std::size_t>(integer(0, 3)) : 0);
      for (std::size_t i = 0; i < n; ++i) p.push_back(between(lo_at(i), hi_at(i)));
      if (!seq) return FinVec(std::move(p));
      return EvSeq(std::move(p), between(lo_at(n), hi_at(n)));
    };
    auto box_member = [&](const detail::BoxShape& b) {
      auto lo_at = [&](std::size_t i) { return b.at(i).lo.value_or(Rational(-spread)); };
      auto hi_at = [&](std::size_t i) { return b.at(i).hi.value_or(Rational(spread)); };
      std::size_t head = space.sequence() ? b.head.size() : space.dim;
      return from_ranges(lo_at, hi_at, head, space.sequence());
    };
    const auto& body = s.body();
    if (auto* f = std::get_if<SetDesc::Finite>(&body))
      return f->points[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(f->points.size()) - 1))];
    if (auto* sh = std::get_if<SetDesc::SolidHull>(&body)) {
      const auto& y = sh->points[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(sh->points.size()) - 1))];
      Element x = box_member(*detail::box_shape(SetDesc::solid_hull_of(space, {y})));
      if (space.kind == SpaceKind::Z_DISCRETE) {
        Integer m = numerator(abs(coord(y, 0)));
        x = FinVec{Rational(Integer(integer(-static_cast<std::int64_t>(m), static_cast<std::int64_t>(m))))};
      }
      return x;
    }
    if (auto* im = std::get_if<SetDesc::Image>(&body)) return im->hom->apply(member(*im->set, spread));
    if (std::holds_alternative<SetDesc::Staircase>(body)) {
      auto n = static_cast<std::size_t>(integer(0, 12));
      return Rational(n + 1) * Element(EvSeq::unit(n));
    }
    if (std::holds_alternative<SetDesc::Nbhd>(body) && space.kind == SpaceKind::Z_DISCRETE) return space.zero();
    if (std::holds_alternative<SetDesc::Whole>(body) && space.kind == SpaceKind::Z_DISCRETE)
      return FinVec{Rational(integer(-50, 50))};
    return box_member(*detail::box_shape(s));
  }

 private:
  std::mt19937_64 gen_;
};

/// Samples y in S and x with |x| <= |y|; returns a pair violating solidity
/// if one is found.
inline std::optional<std::pair<Element, Element>> spot_check_solid(const SetDesc& s, Sampler& rng, int trials) {
  for (int t = 0; t < trials; ++t) {
    Element y = rng.member(s);
    Element ay = abs_val(y);
    Element x = map(ay, [&](const Rational& v) {
      Rational c = rng.between(-v, v, 6);
      return c;
    });
    if (s.space().kind == SpaceKind::Z_DISCRETE) x = FinVec{Rational(floor(coord(x, 0)))};
    if (!set_member(s, x)) return std::make_pair(x, y);
  }
  return std::nullopt;
}

}  // namespace lring
