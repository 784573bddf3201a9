#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace lring;

namespace {

const SpaceDesc Q2 = SpaceDesc::qn(2);
const SpaceDesc PROD = SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT);
const SpaceDesc SUP = SpaceDesc::evseq(TopologyId::EVSEQ_SUPNORM);
const SpaceDesc PROD_ZERO = SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT, Multiplication::ZERO);

Element v(std::initializer_list<Rational> xs) { return FinVec(std::vector<Rational>(xs)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::SoundnessBug;
}

/// T_a = base + diag(tail 1)/a, the net with closed-form 1/a tail.
HomNet tail_net(const SpaceDesc& sp) {
  return HomNet::affine(sp, sp, HomDesc::zero(sp), HomDesc::diagonal(EvSeq::constant(1)));
}

}  // namespace

TEST(Classify, ProductIdentity) {
  ClassLabel c = classify(HomDesc::identity(PROD), PROD);
  EXPECT_TRUE(c.order_bounded());
  EXPECT_FALSE(c.ring.nr.holds);
  EXPECT_FALSE(c.group.nr.holds);
  EXPECT_TRUE(c.ring.br.holds);
  EXPECT_TRUE(c.group.br.holds);
  EXPECT_TRUE(c.continuous.holds);
  // The refuting W sits on a coordinate the tightest U leaves free.
  ASSERT_TRUE(c.ring.nr.codomain_nbhd.has_value());
  auto w = *c.ring.nr.codomain_nbhd;
  ASSERT_EQ(w.coords.size(), 1u);
  EXPECT_FALSE(c.ring.nr.domain_nbhd->constrains(w.coords[0]));
  EXPECT_TRUE(c.ring.nr.image_bounds.at(w.coords[0]).infinite);
  EXPECT_TRUE(recheck(c, HomDesc::identity(PROD), PROD, PROD));
}

TEST(Classify, ZeroMultiplicationReadingsDiffer) {
  ClassLabel c = classify(HomDesc::identity(PROD_ZERO), PROD_ZERO);
  EXPECT_TRUE(c.order_bounded());
  EXPECT_FALSE(c.group.nr.holds);
  EXPECT_FALSE(c.group.br.holds);
  EXPECT_TRUE(c.ring.nr.holds);
  EXPECT_TRUE(c.ring.br.holds);
  EXPECT_TRUE(c.readings_differ());
}

TEST(Classify, ProductToSupNorm) {
  ClassLabel c = classify(HomDesc::identity(PROD), PROD, SUP);
  EXPECT_TRUE(c.order_bounded());
  EXPECT_FALSE(c.continuous.holds);
  EXPECT_FALSE(c.ring.nr.holds);
  EXPECT_FALSE(c.ring.br.holds);
  // No product neighborhood fits into the unit ball: each leaves a free coordinate.
  for (std::vector<std::size_t> f : {std::vector<std::size_t>{0}, {0, 1, 2, 3}, {5, 9}}) {
    NbhdDesc u = NbhdDesc::product(f, Rational(1, 100));
    EXPECT_FALSE(bounds_within(coordinate_bounds(SetDesc::nbhd(PROD, u)), NbhdDesc::supnorm(1)));
  }
  EXPECT_TRUE(recheck(c, HomDesc::identity(PROD), PROD, SUP));
}

TEST(Classify, BoundedDiagonalOnSupNorm) {
  HomDesc d = HomDesc::diagonal(EvSeq({3, Rational(-1, 2)}, 2));
  ClassLabel c = classify(d, SUP);
  EXPECT_TRUE(c.order_bounded());
  EXPECT_TRUE(c.ring.nr.holds);
  EXPECT_TRUE(c.ring.br.holds);
  EXPECT_TRUE(c.continuous.holds);
  EXPECT_TRUE(c.group.nr.holds && c.group.br.holds);
  // The continuity witness U answers the recorded W.
  EXPECT_TRUE(bounds_within(propagate(d, c.continuous.domain_nbhd->bounds()), *c.continuous.codomain_nbhd));
}

TEST(Classify, IdentityIsAlwaysContinuous) {
  auto r = identity_continuity_suite();
  EXPECT_TRUE(r.pass) << r.witness;
}

TEST(Classify, RandomLabelsRecheck) {
  Sampler rng(4);
  for (const auto& sp : sample_spaces()) {
    for (int i = 0; i < 40; ++i) {
      HomDesc t = rng.hom(sp);
      ClassLabel c = classify(t, sp);
      ASSERT_TRUE(recheck(c, t, sp, sp)) << to_string(t) << " on " << to_string(sp);
    }
  }
}

TEST(Classify, SpaceMismatch) {
  EXPECT_EQ(code_of([] { classify(HomDesc::identity(Q2), Q2, PROD); }), ErrorCode::InvalidSpace);
}

TEST(Classify, PositivePartKeepsNrWitness) {
  auto r = positive_part_nr_suite(0, 400);
  EXPECT_TRUE(r.pass) << r.witness;
}

TEST(NrConvergence, SupNormTail) {
  auto c = nr_converges(tail_net(SUP), HomDesc::zero(SUP), NbhdDesc::supnorm(1));
  ASSERT_TRUE(c.convergent);
  for (Rational eps : {Rational(1), Rational(1, 3), Rational(2, 7), Rational(5, 2)}) {
    Integer a0 = c.alpha0(NbhdDesc::supnorm(eps));
    EXPECT_EQ(a0, std::max(Integer(1), ceil(1 / eps))) << to_string(eps);
    EXPECT_TRUE(c.contained_at(a0, NbhdDesc::supnorm(eps)));
    EXPECT_TRUE(c.contained_at(a0 + 7, NbhdDesc::supnorm(eps)));
    if (a0 > 1) {
      EXPECT_FALSE(c.contained_at(a0 - 1, NbhdDesc::supnorm(eps)));
    }
  }
}

TEST(NrConvergence, ConstantNetAtItsLimit) {
  HomDesc t = HomDesc::matrix({{1, -2}, {3, 4}});
  auto c = nr_converges(HomNet::constant(Q2, Q2, t), t, NbhdDesc::box({1, 1}));
  ASSERT_TRUE(c.convergent);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({Rational(1, 1000), 5})), 1);
  EXPECT_EQ(c.alpha0_formula(), "1");
}

TEST(NrConvergence, ProductIdentityToZeroFails) {
  auto c = nr_converges(HomNet::constant(PROD, PROD, HomDesc::identity(PROD)), HomDesc::zero(PROD),
                        NbhdDesc::product({0}, 1));
  EXPECT_FALSE(c.convergent);
  ASSERT_TRUE(c.witness_v.has_value());
  EXPECT_EQ(*c.witness_v, NbhdDesc::product({1}, 1));
  for (long a : {1L, 10L, 100000L}) EXPECT_FALSE(c.contained_at(Integer(a), *c.witness_v));
}

TEST(NrConvergence, RejectsForeignNeighborhood) {
  EXPECT_EQ(code_of([] { nr_converges(tail_net(SUP), HomDesc::zero(SUP), NbhdDesc::product({0}, 1)); }),
            ErrorCode::InvalidNeighborhood);
}

TEST(BrConvergence, MatrixOverAlphaOnInterval) {
  HomDesc t = HomDesc::matrix({{1, -2}, {3, Rational(1, 2)}});
  HomNet net = HomNet::affine(Q2, Q2, HomDesc::zero(Q2), t);
  SetDesc b = SetDesc::interval(Q2, v({-1, -3}), v({2, 3}));
  auto c = br_converges(net, HomDesc::zero(Q2), b);
  ASSERT_TRUE(c.convergent);
  // Row sums of |T| against the interval's coordinate bounds (2, 3).
  oracle::Vec m{Rational(1) * 2 + 2 * 3, Rational(3) * 2 + Rational(1, 2) * 3};
  for (Rational eps : {Rational(1), Rational(1, 4)}) {
    NbhdDesc vv = NbhdDesc::box({eps, eps});
    Integer expect = std::max({Integer(1), ceil(m[0] / eps), ceil(m[1] / eps)});
    EXPECT_EQ(c.alpha0(vv), expect);
    EXPECT_TRUE(c.contained_at(expect, vv));
    EXPECT_FALSE(c.contained_at(expect - 1, vv));
  }
}

TEST(BrConvergence, ConstantAndPersistentDifference) {
  HomDesc t = HomDesc::matrix({{2, 0}, {1, 1}});
  SetDesc b = SetDesc::finite(Q2, {v({1, 1}), v({-2, 0})});
  auto c = br_converges(HomNet::constant(Q2, Q2, t), t, b);
  ASSERT_TRUE(c.convergent);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({Rational(1, 9), 1})), 1);

  HomDesc off = t + HomDesc::matrix({{0, 0}, {0, 1}});
  auto bad = br_converges(HomNet::constant(Q2, Q2, t), off, b);
  EXPECT_FALSE(bad.convergent);
  ASSERT_TRUE(bad.witness_v.has_value());
  for (long a : {1L, 50L, 100000L}) EXPECT_FALSE(bad.contained_at(Integer(a), *bad.witness_v));
}

TEST(BrConvergence, UnboundedSetRejected) {
  EXPECT_EQ(code_of([] {
              br_converges(tail_net(PROD), HomDesc::zero(PROD), SetDesc::nbhd(PROD, NbhdDesc::product({0}, 1)));
            }),
            ErrorCode::NotBounded);
}

TEST(CrConvergence, SupNormTail) {
  HomNet net = tail_net(SUP);
  for (Rational eps : {Rational(1), Rational(1, 2), Rational(3, 5)}) {
    auto c = cr_certificate(net, HomDesc::zero(SUP), NbhdDesc::supnorm(eps));
    ASSERT_TRUE(c.convergent);
    EXPECT_EQ(*c.domain_nbhd, NbhdDesc::supnorm(1));
    for (Rational delta : {Rational(1), Rational(1, 3), Rational(1, 10)}) {
      Integer a0 = c.alpha0(NbhdDesc::supnorm(delta));
      EXPECT_EQ(a0, std::max(Integer(1), ceil(1 / (delta * eps))));
      EXPECT_TRUE(c.contained_at(a0, NbhdDesc::supnorm(delta)));
      EXPECT_TRUE(c.contained_at(a0 + 7, NbhdDesc::supnorm(delta)));
    }
  }
}

TEST(CrConvergence, ConstantAndIdentityExamples) {
  HomDesc t = HomDesc::matrix({{1, 1}, {0, 1}});
  auto c = cr_converges(HomNet::constant(Q2, Q2, t), t);
  ASSERT_TRUE(c.convergent);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({1, 1})), 1);

  auto bad = cr_converges(HomNet::constant(PROD, PROD, HomDesc::identity(PROD)), HomDesc::zero(PROD));
  EXPECT_FALSE(bad.convergent);
  ASSERT_TRUE(bad.witness_v.has_value());
  EXPECT_FALSE(bad.contained_at(1000, *bad.witness_v));

  EXPECT_EQ(code_of([] { cr_converges(tail_net(PROD_ZERO), HomDesc::zero(PROD_ZERO)); }), ErrorCode::VacuousProduct);
}

TEST(Certificates, RecheckAtAlpha0AndAlpha0PlusSeven) {
  auto r = certificate_recheck_suite(0, 300);
  EXPECT_TRUE(r.pass) << r.witness;
}

TEST(Certificates, TableNetsAndHorizon) {
  HomDesc a = HomDesc::matrix({{3, 0}, {0, 0}}), b = HomDesc::matrix({{1, 0}, {0, 0}}), z = HomDesc::zero(Q2);
  HomNet net = HomNet::table(Q2, Q2, {a, b, z});
  auto c = nr_converges(net, z, NbhdDesc::box({1, 1}));
  ASSERT_TRUE(c.convergent);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({1, 1})), 2);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({Rational(1, 2), 1})), 3);
  EXPECT_EQ(c.alpha0(NbhdDesc::box({3, 1})), 1);
  EXPECT_EQ(code_of([&] { nr_converges(net, z, NbhdDesc::box({1, 1}), 2); }), ErrorCode::InvalidArgument);
}

TEST(Uniqueness, Examples) {
  HomNet net = tail_net(SUP);
  ModeParams p;
  p.u = NbhdDesc::supnorm(1);
  auto same = limit_uniqueness_audit(net, HomDesc::zero(SUP), HomDesc::diagonal(EvSeq({0, 0}, 0)), ConvergenceMode::NR, p);
  EXPECT_TRUE(same.reached);
  EXPECT_TRUE(same.equal);
  auto corrupted =
      limit_uniqueness_audit(net, HomDesc::zero(SUP), HomDesc::diagonal(EvSeq({Rational(1, 100)}, 0)), ConvergenceMode::NR, p);
  EXPECT_FALSE(corrupted.reached);
  for (auto mode : {ConvergenceMode::BR, ConvergenceMode::CR}) {
    auto r = limit_uniqueness_audit(net, HomDesc::zero(SUP), HomDesc::zero(SUP), mode, p);
    EXPECT_TRUE(r.reached && r.equal);
  }
}

TEST(Uniqueness, DiscreteZIsExcluded) {
  SpaceDesc z = SpaceDesc::z_discrete();
  HomDesc id = HomDesc::identity(z);
  ModeParams p;
  p.u = NbhdDesc::discrete();
  EXPECT_EQ(code_of([&] { limit_uniqueness_audit(HomNet::constant(z, z, id), id, id, ConvergenceMode::NR, p); }),
            ErrorCode::Unsupported);
}

TEST(Uniqueness, BoundedModeChecksEveryBoundedSet) {
  // On B = {0} any limit would pass; the audit also demands the worst bounded set.
  HomDesc id = HomDesc::identity(Q2);
  ModeParams p;
  p.b = SetDesc::finite(Q2, {v({0, 0})});
  auto r = limit_uniqueness_audit(HomNet::constant(Q2, Q2, id), id, HomDesc::zero(Q2), ConvergenceMode::BR, p);
  EXPECT_FALSE(r.reached);
}

TEST(Uniqueness, FiftyPairedAudits) {
  auto r = uniqueness_suite(0, 50);
  EXPECT_TRUE(r.pass) << r.witness;
  EXPECT_EQ(r.checked, 50u);
}

TEST(LatticeContinuity, AffineAgainstConstant) {
  HomDesc t = HomDesc::matrix({{1, -2}, {-3, 4}});
  HomDesc d = HomDesc::matrix({{1, 0}, {0, -1}});
  HomNet net_t = HomNet::affine(Q2, Q2, t, d), net_s = HomNet::constant(Q2, Q2, t);
  for (auto mode : {ConvergenceMode::NR, ConvergenceMode::BR, ConvergenceMode::CR}) {
    ContinuityParams p;
    p.mode.u = NbhdDesc::box({1, 1});
    p.extra_alphas = {10, 100};
    auto a = lattice_continuity_audit(net_t, net_s, mode, p);
    EXPECT_GT(a.inequality_checks, 0u);
    EXPECT_GT(a.membership_checks, 0u);
  }
  // Right side equals D(1/a)+(x) exactly.
  for (long a : {1L, 4L, 9L}) {
    HomDesc diff = net_t.term(Integer(a)) - net_s.term(Integer(a));
    EXPECT_EQ(positive_part(diff), positive_part(Rational(1, a) * d));
  }
}

TEST(LatticeContinuity, EqualNetsGiveZeroSides) {
  HomDesc t = HomDesc::diagonal(EvSeq({2, -1}, 3));
  HomNet n = HomNet::constant(SUP, SUP, t);
  ContinuityParams p;
  p.mode.u = NbhdDesc::supnorm(1);
  auto a = lattice_continuity_audit(n, n, ConvergenceMode::NR, p);
  EXPECT_GT(a.membership_checks, 0u);
}

TEST(LatticeContinuity, CrModeDiagonalNets) {
  HomNet net_t = HomNet::affine(SUP, SUP, HomDesc::diagonal(EvSeq({1}, -2)), HomDesc::diagonal(EvSeq({-1, 2}, 1)));
  HomNet net_s = HomNet::constant(SUP, SUP, HomDesc::diagonal(EvSeq({1}, -2)));
  ContinuityParams p;
  p.samples = 20;
  auto a = lattice_continuity_audit(net_t, net_s, ConvergenceMode::CR, p);
  EXPECT_GT(a.membership_checks, 0u);
  for (const auto& tgt : a.targets) EXPECT_EQ(tgt.topology, TopologyId::EVSEQ_SUPNORM);
}

TEST(LatticeContinuity, RandomNetsAllModes) {
  auto r = lattice_continuity_suite(0, 150);
  EXPECT_TRUE(r.pass) << r.witness;
}

TEST(Nets, DifferenceAndShift) {
  HomDesc t = HomDesc::matrix({{1, 2}, {3, 4}}), m = HomDesc::matrix({{1, 0}, {0, 1}});
  HomNet a = HomNet::affine(Q2, Q2, t, m), b = HomNet::constant(Q2, Q2, t);
  HomNet d = difference(a, b);
  for (long k : {1L, 2L, 5L}) EXPECT_EQ(d.term(Integer(k)), a.term(Integer(k)) - b.term(Integer(k)));
  EXPECT_EQ(a.term(4), t + Rational(1, 4) * m);
  HomNet tab = HomNet::table(Q2, Q2, {t, m});
  EXPECT_EQ(tab.term(1), t);
  EXPECT_EQ(tab.term(100), m);
  EXPECT_EQ(code_of([&] { difference(a, tab); }), ErrorCode::Unsupported);
}
