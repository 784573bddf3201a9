#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lring/element.hpp"

namespace lring {

using Matrix = std::vector<std::vector<Rational>>;

enum class HomForm { MATRIX, DIAGONAL, DIAG_PLUS_FINITE, IDENTITY };

inline const char* to_string(HomForm f) {
  switch (f) {
    case HomForm::MATRIX: return "matrix";
    case HomForm::DIAGONAL: return "diagonal";
    case HomForm::DIAG_PLUS_FINITE: return "diag_plus_finite";
    case HomForm::IDENTITY: return "identity";
  }
  return "?";
}

/// Group homomorphism between two copies of the same element kind.
///
/// Finite case: an n x n matrix on Q^n. Sequence case: a k x k block acting
/// on the first k coordinates plus an index-wise multiplier for every index
/// >= k. The sequence representation is canonical (the block is as small as
/// possible and the multiplier is zero below k), so equality of descriptors
/// is equality of homomorphisms.
class HomDesc {
 public:
  static HomDesc matrix(Matrix rows) {
    std::size_t n = rows.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "matrix must be non-empty");
    for (const auto& r : rows)
      if (r.size() != n) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
    HomDesc h;
    h.sequence_ = false;
    h.block_ = std::move(rows);
    return h;
  }

  static HomDesc diagonal(const EvSeq& a) { return diag_plus_finite(a, 0, {}); }

  /// Acts as index-wise multiplication by a, plus m on the first k coordinates.
  static HomDesc diag_plus_finite(const EvSeq& a, std::size_t k, const Matrix& m) {
    if (m.size() != k) throw Error(ErrorCode::InvalidArgument, "finite block must be k x k");
    for (const auto& r : m)
      if (r.size() != k) throw Error(ErrorCode::InvalidArgument, "finite block must be k x k");
    HomDesc h;
    h.sequence_ = true;
    h.block_ = m;
    for (std::size_t i = 0; i < k; ++i) h.block_[i][i] += a.at(i);
    h.diag_ = a;
    h.canonicalize();
    return h;
  }

  static HomDesc identity(const SpaceDesc& space) {
    if (space.sequence()) return diagonal(EvSeq::constant(1));
    return scalar_matrix(space.dim, 1);
  }

  static HomDesc zero(const SpaceDesc& space) {
    if (space.sequence()) return diagonal(EvSeq::constant(0));
    return scalar_matrix(space.dim, 0);
  }

  static HomDesc scalar_matrix(std::size_t n, const Rational& c) {
    Matrix m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = c;
    return matrix(std::move(m));
  }

  bool sequence() const { return sequence_; }
  /// Matrix dimension in the finite case, block size in the sequence case.
  std::size_t block_size() const { return block_.size(); }
  const Matrix& block() const { return block_; }
  /// Index-wise multiplier, relevant from block_size() on.
  const EvSeq& diag() const { return diag_; }

  HomForm form() const {
    if (!sequence_) return HomForm::MATRIX;
    if (!block_.empty()) return HomForm::DIAG_PLUS_FINITE;
    return diag_ == EvSeq::constant(1) ? HomForm::IDENTITY : HomForm::DIAGONAL;
  }

  /// Matrix entry (i, j); indices beyond the block fall on the multiplier.
  Rational entry(std::size_t i, std::size_t j) const {
    std::size_t k = block_.size();
    if (i < k && j < k) return block_[i][j];
    if (!sequence_) throw Error(ErrorCode::InvalidArgument, "matrix index out of range");
    if (i == j && i >= k) return diag_.at(i);
    return 0;
  }

  /// Number of indices that must be inspected individually: beyond it every
  /// row is the diagonal tail.
  std::size_t extent() const { return sequence_ ? std::max(block_.size(), diag_.span()) : block_.size(); }

  /// Whether this descriptor can act on x.
  bool accepts(const Element& x) const {
    if (sequence_) return is_evseq(x);
    return is_finvec(x) && std::get<FinVec>(x).dim() == block_.size();
  }

  Element apply(const Element& x) const {
    if (!accepts(x)) throw Error(ErrorCode::InvalidElement, "homomorphism cannot act on " + to_string(x));
    std::size_t k = block_.size();
    if (!sequence_) {
      const auto& v = std::get<FinVec>(x);
      std::vector<Rational> out(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (block_[i][j] != 0) out[i] += block_[i][j] * v[j];
      return FinVec(std::move(out));
    }
    const auto& s = std::get<EvSeq>(x);
    std::size_t n = std::max(extent(), s.span());
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < k) {
        for (std::size_t j = 0; j < k; ++j)
          if (block_[i][j] != 0) out[i] += block_[i][j] * s.at(j);
      } else {
        out[i] = diag_.at(i) * s.at(i);
      }
    }
    return EvSeq(std::move(out), diag_.tail() * s.tail());
  }

  /// Entrywise map; f must send 0 to 0.
  template <typename F>
  HomDesc map_entries(F&& f) const {
    HomDesc h = *this;
    for (auto& row : h.block_)
      for (auto& e : row) e = f(e);
    if (sequence_) h.diag_ = std::get<EvSeq>(map(Element(diag_), f));
    h.canonicalize();
    return h;
  }

  /// Entrywise combination of two descriptors of the same kind.
  template <typename F>
  static HomDesc zip_entries(const HomDesc& a, const HomDesc& b, F&& f) {
    check_compatible(a, b);
    std::size_t k = std::max(a.block_size(), b.block_size());
    HomDesc h;
    h.sequence_ = a.sequence_;
    h.block_.assign(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) h.block_[i][j] = f(a.entry(i, j), b.entry(i, j));
    if (a.sequence_) h.diag_ = std::get<EvSeq>(zip(Element(a.diag_), Element(b.diag_), f));
    h.canonicalize();
    return h;
  }

  /// True iff pred holds for every corresponding entry pair (including the
  /// zero entries off the block).
  template <typename P>
  static bool all_entries(const HomDesc& a, const HomDesc& b, P&& pred) {
    check_compatible(a, b);
    std::size_t k = std::max(a.block_size(), b.block_size());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (!pred(a.entry(i, j), b.entry(i, j))) return false;
    if (!a.sequence_) return true;
    Rational zero{0};
    if (!pred(zero, zero)) return false;
    std::size_t n = std::max({k, a.diag_.span(), b.diag_.span()});
    for (std::size_t i = k; i < n; ++i)
      if (!pred(a.diag_.at(i), b.diag_.at(i))) return false;
    return pred(a.diag_.tail(), b.diag_.tail());
  }

  static void check_compatible(const HomDesc& a, const HomDesc& b) {
    if (a.sequence_ != b.sequence_ || (!a.sequence_ && a.block_size() != b.block_size()))
      throw Error(ErrorCode::InvalidElement, "homomorphisms act on different spaces");
  }

  friend bool operator==(const HomDesc&, const HomDesc&) = default;

 private:
  HomDesc() = default;

  void canonicalize() {
    if (!sequence_) return;
    // Absorb trailing block rows/columns that only carry a diagonal entry.
    while (!block_.empty()) {
      std::size_t last = block_.size() - 1;
      bool diagonal_only = true;
      for (std::size_t j = 0; j < last && diagonal_only; ++j)
        diagonal_only = block_[last][j] == 0 && block_[j][last] == 0;
      if (!diagonal_only) break;
      Rational d = block_[last][last];
      block_.pop_back();
      for (auto& r : block_) r.pop_back();
      std::vector<Rational> p = diag_.prefix();
      if (p.size() <= last) p.resize(last + 1, diag_.tail());
      p[last] = d;
      diag_ = EvSeq(std::move(p), diag_.tail());
    }
    std::size_t k = block_.size();
    if (k > 0) {
      std::vector<Rational> p = diag_.prefix();
      if (p.size() < k) p.resize(k, diag_.tail());
      for (std::size_t i = 0; i < k; ++i) p[i] = 0;
      diag_ = EvSeq(std::move(p), diag_.tail());
    }
  }

  bool sequence_ = false;
  Matrix block_;
  EvSeq diag_;
};

inline HomDesc operator+(const HomDesc& a, const HomDesc& b) {
  return HomDesc::zip_entries(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}
inline HomDesc operator-(const HomDesc& a, const HomDesc& b) {
  return HomDesc::zip_entries(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}
inline HomDesc operator-(const HomDesc& a) {
  return a.map_entries([](const Rational& x) { return Rational(-x); });
}
inline HomDesc operator*(const Rational& c, const HomDesc& a) {
  return a.map_entries([&](const Rational& x) { return Rational(c * x); });
}

/// s after t.
inline HomDesc compose(const HomDesc& s, const HomDesc& t) {
  HomDesc::check_compatible(s, t);
  std::size_t k = std::max(s.block_size(), t.block_size());
  Matrix m(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      Rational sil = s.entry(i, l);
      if (sil == 0) continue;
      for (std::size_t j = 0; j < k; ++j) m[i][j] += sil * t.entry(l, j);
    }
  if (!s.sequence()) return HomDesc::matrix(std::move(m));
  auto d = std::get<EvSeq>(zip(Element(s.diag()), Element(t.diag()),
                               [](const Rational& x, const Rational& y) { return Rational(x * y); }));
  // diag_plus_finite adds a on the block diagonal; compensate.
  for (std::size_t i = 0; i < k; ++i) m[i][i] -= d.at(i);
  return HomDesc::diag_plus_finite(d, k, m);
}

/// Positivity in the coordinatewise order: every matrix entry is >= 0.
inline bool is_positive(const HomDesc& t) {
  return HomDesc::all_entries(t, t, [](const Rational& x, const Rational&) { return x >= 0; });
}

/// t <= s as homomorphisms, i.e. s - t is positive.
inline bool hom_leq(const HomDesc& t, const HomDesc& s) {
  return HomDesc::all_entries(t, s, [](const Rational& x, const Rational& y) { return x <= y; });
}

inline bool is_zero(const HomDesc& t) {
  return HomDesc::all_entries(t, t, [](const Rational& x, const Rational&) { return x == 0; });
}

/// Throws InvalidElement unless t acts on the space.
inline void check_hom(const SpaceDesc& space, const HomDesc& t) {
  bool ok = space.sequence() ? t.sequence() : (!t.sequence() && t.block_size() == space.dim);
  if (ok && space.kind == SpaceKind::Z_DISCRETE) ok = is_integer(t.entry(0, 0));
  if (!ok) throw Error(ErrorCode::InvalidElement, "homomorphism does not act on " + to_string(space));
}

inline std::string to_string(const HomDesc& t) {
  auto row_str = [](const std::vector<Rational>& r) {
    std::string s = "[";
    for (std::size_t j = 0; j < r.size(); ++j) s += (j ? "," : "") + to_string(r[j]);
    return s + "]";
  };
  std::string block = "[";
  for (std::size_t i = 0; i < t.block_size(); ++i) block += (i ? "," : "") + row_str(t.block()[i]);
  block += "]";
  switch (t.form()) {
    case HomForm::MATRIX: return "MATRIX" + block;
    case HomForm::IDENTITY: return "IDENTITY";
    case HomForm::DIAGONAL: return "DIAGONAL(" + to_string(Element(t.diag())) + ")";
    case HomForm::DIAG_PLUS_FINITE:
      return "DIAG_PLUS_FINITE(" + to_string(Element(t.diag())) + "; block " + block + ")";
  }
  return "?";
}

}  // namespace lring
