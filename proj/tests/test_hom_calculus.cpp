#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace lring;

namespace {

const SpaceDesc Q1 = SpaceDesc::qn(1);
const SpaceDesc Q2 = SpaceDesc::qn(2);
const SpaceDesc SEQ = SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT);

Element v(std::initializer_list<Rational> xs) { return FinVec(std::vector<Rational>(xs)); }
Element seq(std::vector<Rational> p, Rational t) { return EvSeq(std::move(p), std::move(t)); }

const HomDesc T = HomDesc::matrix({{1, -2}, {-3, 4}});

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::SoundnessBug;
}

}  // namespace

TEST(Apply, Examples) {
  EXPECT_EQ(T.apply(v({1, 1})), v({-1, 1}));
  Element x = seq({4, Rational(-1, 2)}, 7);
  EXPECT_EQ(HomDesc::identity(SEQ).apply(x), x);
  Element y = HomDesc::diagonal(EvSeq({2}, 1)).apply(seq({1, 1}, 3));
  EXPECT_EQ(y, seq({2, 1}, 3));
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(coord(y, i), Rational(i == 0 ? 2 : 1) * Rational(i < 2 ? 1 : 3)) << i;
  EXPECT_EQ(code_of([] { T.apply(v({1, 2, 3})); }), ErrorCode::InvalidElement);
}

TEST(Apply, DiagPlusFiniteMatchesIndexwiseDefinition) {
  Sampler rng(12);
  for (int t = 0; t < 200; ++t) {
    EvSeq a = rng.evseq();
    std::size_t k = static_cast<std::size_t>(rng.integer(0, 3));
    Matrix m = rng.matrix(k);
    HomDesc h = HomDesc::diag_plus_finite(a, k, m);
    EvSeq x = rng.evseq();
    Element y = h.apply(x);
    for (std::size_t i = 0; i < oracle::horizon(a, x) + k; ++i) {
      Rational expect = oracle::at(a, i) * oracle::at(x, i);
      if (i < k)
        for (std::size_t j = 0; j < k; ++j) expect += m[i][j] * oracle::at(x, j);
      ASSERT_EQ(coord(y, i), expect) << to_string(h) << " at " << i;
    }
  }
}

TEST(ConeExtension, DoublingOnRationals) {
  auto e = extend_from_cone(Q1, ConeMapDesc{HomDesc::scalar_matrix(1, 2), {}});
  EXPECT_EQ(e(v({-3})), v({-6}));
  EXPECT_EQ(e.to_hom(), HomDesc::scalar_matrix(1, 2));
}

TEST(ConeExtension, MatrixRestriction) {
  HomDesc m = HomDesc::matrix({{1, 1}, {0, 1}});
  ConeMapDesc f{m, {}};
  auto e = extend_from_cone(Q2, f);
  EXPECT_EQ(e.to_hom(), m);
  EXPECT_EQ(e(v({-1, 2})), f(v({0, 2})) - f(v({1, 0})));
  EXPECT_EQ(e(v({-1, 2})), v({1, 2}));
  EXPECT_EQ(e(v({-1, 2})), m.apply(v({-1, 2})));
  Sampler rng(0);
  for (int i = 0; i < 100; ++i) {
    Element x = rng.finvec(2);
    ASSERT_EQ(e(-x), -e(x));
  }
}

TEST(ConeExtension, NonAdditiveTableIsRejectedWithWitness) {
  ConeMapDesc f{HomDesc::identity(Q2), {{v({1, 0}), v({1, 0})}, {v({0, 1}), v({0, 0})}, {v({1, 1}), v({5, 5})}}};
  auto audit = audit_additivity(Q2, f);
  ASSERT_TRUE(audit.witness.has_value());
  EXPECT_EQ(audit.witness->first, v({1, 0}));
  EXPECT_EQ(audit.witness->second, v({0, 1}));
  EXPECT_EQ(code_of([&] { extend_from_cone(Q2, f); }), ErrorCode::NotAdditiveOnCone);
}

TEST(ConeExtension, SequenceSpaces) {
  HomDesc h = HomDesc::diag_plus_finite(EvSeq({1, -2}, 3), 2, {{0, 1}, {Rational(1, 2), 0}});
  auto e = extend_from_cone(SEQ, ConeMapDesc{h, {}});
  EXPECT_EQ(e.to_hom(), h);
  Sampler rng(3);
  for (int i = 0; i < 100; ++i) {
    Element x = rng.evseq();
    ASSERT_EQ(e(x), h.apply(x));
  }
}

TEST(Extension, FiveHundredMixedSignInputs) {
  auto r = extension_suite(0, 100, 5);
  EXPECT_TRUE(r.pass) << r.witness;
  EXPECT_EQ(r.checked, 100u);
}

TEST(Decompose, Examples) {
  auto d = riesz_decompose(Q2, v({1, 1}), v({2, 0}), v({0, 2}));
  EXPECT_EQ(d.x1, v({1, 0}));
  EXPECT_EQ(d.x2, v({0, 1}));

  auto z = riesz_decompose(Q2, v({0, 0}), v({3, -1}), v({1, 1}));
  EXPECT_EQ(z.x1, v({0, 0}));
  EXPECT_EQ(z.x2, v({0, 0}));

  auto q = riesz_decompose(Q1, v({3}), v({-2}), v({2}));
  EXPECT_EQ(q.x1, v({2}));
  EXPECT_EQ(q.x2, v({1}));
  EXPECT_TRUE(is_positive(q.x1) && is_positive(q.x2));

  EXPECT_EQ(code_of([] { riesz_decompose(Q1, v({5}), v({1}), v({2})); }), ErrorCode::DecompositionPrereqViolated);
}

TEST(Decompose, PostconditionsOnThousandTriples) {
  Sampler rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto [x, y1, y2] = admissible_triple(rng, 5);
    auto d = riesz_decompose(SpaceDesc::qn(5), x, y1, y2);
    // Coordinate-level audit on plain vectors.
    auto vx = oracle::entries(x), a = oracle::entries(d.x1), b = oracle::entries(d.x2);
    auto w1 = oracle::entries(y1), w2 = oracle::entries(y2);
    for (std::size_t k = 0; k < 5; ++k) {
      ASSERT_EQ(a[k] + b[k], vx[k]);
      ASSERT_LE(abs(a[k]), abs(w1[k]));
      ASSERT_LE(abs(b[k]), abs(w2[k]));
      if (is_positive(x)) {
        ASSERT_TRUE(a[k] >= 0 && b[k] >= 0);
      }
    }
  }
}

TEST(Oracle, Examples) {
  EXPECT_EQ(sup_over_interval_oracle(T, v({1, 1})), v({1, 4}));
  EXPECT_EQ(oracle::vertex_sup(oracle::rows(T), {1, 1}), (oracle::Vec{1, 4}));
  Element x = v({3, Rational(1, 2)});
  EXPECT_EQ(sup_over_interval_oracle(HomDesc::identity(Q2), x), x);
  EXPECT_EQ(sup_over_interval_oracle(HomDesc::matrix({{-1, 0}, {-2, -3}}), x), v({0, 0}));
  Matrix big(17, std::vector<Rational>(17));
  EXPECT_EQ(code_of([&] { sup_over_interval_oracle(HomDesc::matrix(big), FinVec::zero(17)); }), ErrorCode::OracleTooLarge);
}

TEST(PositivePart, Examples) {
  EXPECT_EQ(positive_part(T), HomDesc::matrix({{1, 0}, {0, 4}}));
  auto audit = positive_part_audit(T, 198);
  EXPECT_EQ(audit.total, 200u);
  EXPECT_TRUE(audit.all());
  HomDesc p = HomDesc::matrix({{1, 2}, {0, Rational(1, 3)}});
  EXPECT_EQ(positive_part(p), p);
  EXPECT_EQ(positive_part(HomDesc::diagonal(EvSeq({-1, 2}, -3))), HomDesc::diagonal(EvSeq({0, 2}, 0)));
}

TEST(PositivePart, DiagonalMatchesPerCoordinateOracle) {
  HomDesc d = HomDesc::diagonal(EvSeq({-1, 2}, -3));
  HomDesc dp = positive_part(d);
  Sampler rng(5);
  for (int i = 0; i < 100; ++i) {
    EvSeq x = rng.nonnegative_evseq();
    Element y = dp.apply(x);
    for (std::size_t k = 0; k < oracle::horizon(x, EvSeq({-1, 2}, -3)); ++k) {
      // One-dimensional oracle: sup of a * t over t in [0, x_k].
      Rational a = oracle::at(EvSeq({-1, 2}, -3), k);
      auto s = oracle::vertex_sup({{a}}, {oracle::at(x, k)});
      ASSERT_EQ(coord(y, k), s[0]);
    }
  }
}

TEST(PositivePart, SequenceFormsAgreeWithOracle) {
  Sampler rng(23);
  for (int i = 0; i < 100; ++i) {
    HomDesc h = rng.hom(SEQ);
    auto a = positive_part_audit(h, 20, static_cast<std::uint64_t>(i));
    ASSERT_TRUE(a.all()) << to_string(h);
  }
}

TEST(PositivePart, RieszKantorovichAgainstBruteForce) {
  Sampler rng(31);
  for (int i = 0; i < 500; ++i) {
    auto n = static_cast<std::size_t>(rng.integer(1, 6));
    HomDesc t = HomDesc::matrix(rng.matrix(n));
    Element x = rng.nonnegative_finvec(n);
    ASSERT_EQ(oracle::entries(positive_part(t).apply(x)), oracle::vertex_sup(oracle::rows(t), oracle::entries(x)))
        << to_string(t) << " at " << to_string(x);
  }
}

TEST(HomLattice, Examples) {
  EXPECT_EQ(negative_part(T), HomDesc::matrix({{0, 2}, {3, 0}}));
  EXPECT_EQ(modulus(T), HomDesc::matrix({{1, 2}, {3, 4}}));
  EXPECT_EQ(positive_part(T) - negative_part(T), T);
  EXPECT_EQ(hom_join(T, T), T);
  EXPECT_EQ(hom_meet(T, HomDesc::zero(Q2)), -negative_part(T));
  EXPECT_EQ(code_of([] { hom_join(T, HomDesc::identity(SEQ)); }), ErrorCode::InvalidElement);
}

TEST(HomLattice, IdentitiesOnRandomPairs) {
  auto r = hom_lattice_suite(0, 500);
  EXPECT_TRUE(r.pass) << r.witness;
  Sampler rng(41);
  for (int i = 0; i < 200; ++i) {
    HomDesc t = HomDesc::matrix(rng.matrix(3));
    ASSERT_EQ(hom_meet(t, HomDesc::zero(SpaceDesc::qn(3))), -negative_part(t));
  }
}

TEST(DirectedSup, Examples) {
  HomDesc a = HomDesc::matrix({{1, 0}, {0, 0}}), b = HomDesc::matrix({{0, 0}, {0, 1}});
  HomDesc s = directed_sup({a, b}, HomDesc::identity(Q2));
  EXPECT_EQ(s, HomDesc::identity(Q2));
  Sampler rng(2);
  for (int i = 0; i < 50; ++i) {
    Element x = rng.nonnegative_finvec(2);
    EXPECT_EQ(s.apply(x), join(a.apply(x), b.apply(x)));
  }
  EXPECT_EQ(directed_sup({T}, modulus(T)), T);
  EXPECT_EQ(directed_sup({T, positive_part(T)}, modulus(T)), positive_part(T));
  EXPECT_EQ(positive_part(positive_part(T) - T), positive_part(T) - T);
  EXPECT_EQ(code_of([] { directed_sup({T}, HomDesc::zero(Q2)); }), ErrorCode::NotBoundedAbove);
  EXPECT_EQ(code_of([] { directed_sup({}, HomDesc::zero(Q2)); }), ErrorCode::EmptyInput);
}

TEST(DirectedSup, HundredRandomFamilies) {
  auto r = directed_sup_suite(0, 100);
  EXPECT_TRUE(r.pass) << r.witness;
}

TEST(OrderBounded, Examples) {
  auto m = is_order_bounded(T, v({1, 1}));
  EXPECT_TRUE(m.order_bounded);
  EXPECT_EQ(m.hi, modulus(T).apply(v({1, 1})));
  EXPECT_EQ(m.lo, -m.hi);

  Element p = seq({2, 0}, 5);
  auto id = is_order_bounded(HomDesc::identity(SEQ), p);
  EXPECT_EQ(id.hi, p);
  EXPECT_EQ(id.lo, -p);

  EvSeq a({-3, 1}, Rational(-1, 2));
  auto d = is_order_bounded(HomDesc::diagonal(a), p);
  EXPECT_EQ(d.hi, ring_mul(SEQ, abs_val(Element(a)), p));
  EXPECT_EQ(code_of([] { is_order_bounded(T, v({-1, 1})); }), ErrorCode::InvalidElement);
}

TEST(OrderBounded, VerdictFlags) {
  auto h = hom_verdict(Q2, T);
  EXPECT_TRUE(h.order_bounded);
  EXPECT_FALSE(h.positive);
  ASSERT_TRUE(h.negativity_witness.has_value());
  EXPECT_FALSE(is_positive(T.apply(*h.negativity_witness)));
  EXPECT_TRUE(hom_verdict(SEQ, HomDesc::identity(SEQ)).positive);
}
