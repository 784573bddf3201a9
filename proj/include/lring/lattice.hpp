#pragma once

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "lring/element.hpp"

namespace lring {

// Lattice and ring operations of the shipped l-ring instances. Every
// operation validates its arguments against the space and is exact.

inline Element join(const SpaceDesc& space, const Element& x, const Element& y) {
  check_element(space, x);
  check_element(space, y);
  return zip(x, y, [](const Rational& a, const Rational& b) { return std::max(a, b); });
}

inline Element meet(const SpaceDesc& space, const Element& x, const Element& y) {
  check_element(space, x);
  check_element(space, y);
  return zip(x, y, [](const Rational& a, const Rational& b) { return std::min(a, b); });
}

/// x+ = x v 0
inline Element pos_part(const SpaceDesc& space, const Element& x) {
  check_element(space, x);
  return map(x, [](const Rational& a) { return pos(a); });
}

/// x- = (-x) v 0
inline Element neg_part(const SpaceDesc& space, const Element& x) {
  check_element(space, x);
  return map(x, [](const Rational& a) { return pos(Rational(-a)); });
}

/// |x| = x v (-x)
inline Element abs_val(const SpaceDesc& space, const Element& x) {
  check_element(space, x);
  return map(x, [](const Rational& a) { return abs(a); });
}

// Unchecked variants for code that already knows its inputs are well formed.
inline Element pos_part(const Element& x) {
  return map(x, [](const Rational& a) { return pos(a); });
}
inline Element neg_part(const Element& x) {
  return map(x, [](const Rational& a) { return pos(Rational(-a)); });
}
inline Element abs_val(const Element& x) {
  return map(x, [](const Rational& a) { return abs(a); });
}
inline Element join(const Element& x, const Element& y) {
  return zip(x, y, [](const Rational& a, const Rational& b) { return std::max(a, b); });
}
inline Element meet(const Element& x, const Element& y) {
  return zip(x, y, [](const Rational& a, const Rational& b) { return std::min(a, b); });
}

inline Element ring_mul(const SpaceDesc& space, const Element& x, const Element& y) {
  check_element(space, x);
  check_element(space, y);
  if (space.mul == Multiplication::ZERO) return space.zero();
  return zip(x, y, [](const Rational& a, const Rational& b) { return a * b; });
}

/// Product of 2x2 matrices stored row-major in Q^4. Used only by the
/// f-ring counterexample suite; the matrix ring is not a shipped space.
inline Element matrix2_mul(const Element& x, const Element& y) {
  const auto& a = std::get<FinVec>(x);
  const auto& b = std::get<FinVec>(y);
  if (a.dim() != 4 || b.dim() != 4) throw Error(ErrorCode::InvalidElement, "matrix2 elements have 4 entries");
  return FinVec{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

struct FRingSample {
  Element a, b, c;
};

struct FRingVerdict {
  bool holds = true;
  std::optional<FRingSample> witness;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // samples violating a ^ b = 0 or c >= 0
};

/// Checks a ^ b = 0, c >= 0  =>  ca ^ b = ac ^ b = 0 on each admissible sample.
template <typename Mul>
FRingVerdict check_f_ring(const std::vector<FRingSample>& samples, Mul&& mul) {
  FRingVerdict v;
  for (const auto& s : samples) {
    if (!is_zero(meet(s.a, s.b)) || !is_positive(s.c)) {
      ++v.skipped;
      continue;
    }
    ++v.checked;
    if (!is_zero(meet(mul(s.c, s.a), s.b)) || !is_zero(meet(mul(s.a, s.c), s.b))) {
      v.holds = false;
      v.witness = s;
      return v;
    }
  }
  return v;
}

inline FRingVerdict check_f_ring(const SpaceDesc& space, const std::vector<FRingSample>& samples) {
  for (const auto& s : samples) {
    check_element(space, s.a);
    check_element(space, s.b);
    check_element(space, s.c);
  }
  return check_f_ring(samples, [&](const Element& x, const Element& y) { return ring_mul(space, x, y); });
}

/// Least n >= 1 with n x not <= y, or nullopt when x <= 0 (no witness exists).
inline std::optional<Integer> archimedean_witness(const SpaceDesc& space, const Element& x, const Element& y) {
  check_element(space, x);
  check_element(space, y);
  if (leq(x, space.zero())) return std::nullopt;
  std::optional<Integer> best;
  auto consider = [&](const Rational& xi, const Rational& yi) {
    std::optional<Integer> n;
    if (xi > 0) {
      // n xi > yi  <=>  n > yi / xi
      n = std::max(Integer(1), Integer(floor(yi / xi) + 1));
    } else if (xi > yi) {
      n = Integer(1);  // fails already at n = 1 and the set of failing n is downward closed
    }
    if (n && (!best || *n < *best)) best = n;
  };
  std::size_t n = std::max(extent(x), extent(y));
  for (std::size_t i = 0; i < n; ++i) consider(coord(x, i), coord(y, i));
  if (is_evseq(x)) consider(std::get<EvSeq>(x).tail(), std::get<EvSeq>(y).tail());
  return best;
}

}  // namespace lring
