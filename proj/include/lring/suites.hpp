#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lring/hom_spaces.hpp"

namespace lring {

/// Outcome of one randomized law or property suite.
struct SuiteResult {
  explicit SuiteResult(std::string n = {}, std::size_t c = 0, bool p = true) : name(std::move(n)), checked(c), pass(p) {}

  std::string name;
  std::size_t checked = 0;
  bool pass = true;
  std::string witness;  // first counterexample, if any
};

namespace detail {

/// Runs body for each case; the first false return (or thrown Error) stops
/// the suite and records the witness message.
inline SuiteResult run_suite(const std::string& name, std::size_t cases,
                             const std::function<bool(std::size_t, std::string&)>& body) {
  SuiteResult r{name};
  for (std::size_t i = 0; i < cases; ++i) {
    std::string witness;
    bool ok = false;
    try {
      ok = body(i, witness);
    } catch (const Error& e) {
      witness = e.what();
    }
    ++r.checked;
    if (!ok) {
      r.pass = false;
      r.witness = witness.empty() ? "case " + std::to_string(i) : witness;
      break;
    }
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lattice-core laws per shipped instance
// ---------------------------------------------------------------------------

struct LawInstance {
  std::string name;
  SpaceDesc space;
  bool matrix_ring = false;  // Q^4 read as 2x2 matrices under matrix multiplication
};

inline const std::vector<LawInstance>& law_instances() {
  static const std::vector<LawInstance> list{
      {"q1_pointwise", SpaceDesc::qn(1)},
      {"q2_pointwise", SpaceDesc::qn(2)},
      {"q3_pointwise", SpaceDesc::qn(3)},
      {"q3_zero", SpaceDesc::qn(3, Multiplication::ZERO)},
      {"evseq_pointwise", SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT)},
      {"evseq_zero", SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT, Multiplication::ZERO)},
      {"z_discrete", SpaceDesc::z_discrete()},
      {"matrix2_entrywise", SpaceDesc::qn(4), true},
  };
  return list;
}

inline const LawInstance& law_instance(const std::string& name) {
  for (const auto& i : law_instances())
    if (i.name == name) return i;
  throw Error(ErrorCode::UnknownInstance, "no shipped instance named '" + name + "'");
}

/// The f-ring witness in the 2x2 matrix ring: a = E11, b = E21, c = E21.
inline FRingSample matrix_ring_witness() {
  return {FinVec{1, 0, 0, 0}, FinVec{0, 0, 1, 0}, FinVec{0, 0, 1, 0}};
}

inline std::vector<SuiteResult> lattice_laws(const LawInstance& inst, std::uint64_t seed, std::size_t cases) {
  if (cases == 0) throw Error(ErrorCode::InvalidArgument, "cases must be positive");
  const SpaceDesc& sp = inst.space;
  auto mul = [&](const Element& x, const Element& y) {
    return inst.matrix_ring ? matrix2_mul(x, y) : ring_mul(sp, x, y);
  };
  Sampler rng(seed);
  std::vector<SuiteResult> out;
  auto pair_law = [&](const std::string& name, auto&& law) {
    out.push_back(detail::run_suite(name, cases, [&](std::size_t, std::string& w) {
      Element x = rng.element(sp), y = rng.element(sp);
      if (law(x, y)) return true;
      w = "x = " + to_string(x) + ", y = " + to_string(y);
      return false;
    }));
  };
  pair_law("join_meet_sum", [&](const Element& x, const Element& y) {
    return join(sp, x, y) + meet(sp, x, y) == x + y;
  });
  pair_law("meet_duality", [&](const Element& x, const Element& y) {
    return meet(sp, x, y) == -join(sp, -x, -y);
  });
  pair_law("join_upper_bound", [&](const Element& x, const Element& y) {
    Element j = join(sp, x, y);
    return leq(x, j) && leq(y, j) && meet(sp, x, y) == meet(sp, y, x) && join(sp, x, x) == x;
  });
  pair_law("positive_negative_parts", [&](const Element& x, const Element&) {
    Element p = pos_part(sp, x), n = neg_part(sp, x);
    return p - n == x && p + n == abs_val(sp, x) && is_zero(meet(sp, p, n));
  });
  pair_law("triangle_inequality", [&](const Element& x, const Element& y) {
    return leq(abs_val(sp, x + y), abs_val(sp, x) + abs_val(sp, y));
  });
  pair_law("l_ring_compatibility", [&](const Element& x, const Element& y) {
    return leq(abs_val(mul(x, y)), mul(abs_val(x), abs_val(y)));
  });
  if (sp.sequence()) {
    pair_law("canonical_form_idempotence", [&](const Element& x, const Element&) {
      const auto& s = std::get<EvSeq>(x);
      EvSeq again(s.prefix(), s.tail());
      std::vector<Rational> padded = s.prefix();
      padded.resize(padded.size() + 3, s.tail());
      return again == s && EvSeq(padded, s.tail()) == s;
    });
  }
  // f-ring: disjoint a, b from the parts of a random u, and c >= 0.
  std::vector<FRingSample> samples;
  if (inst.matrix_ring) samples.push_back(matrix_ring_witness());
  for (std::size_t i = 0; i < cases; ++i) {
    Element u = rng.element(sp);
    samples.push_back({pos_part(u), neg_part(u), abs_val(rng.element(sp))});
  }
  FRingVerdict fr = inst.matrix_ring ? check_f_ring(samples, matrix2_mul) : check_f_ring(sp, samples);
  SuiteResult f{"f_ring", fr.checked, fr.holds};
  if (fr.witness)
    f.witness = "a = " + to_string(fr.witness->a) + ", b = " + to_string(fr.witness->b) +
                ", c = " + to_string(fr.witness->c) + ", ca meet b = " +
                to_string(meet(mul(fr.witness->c, fr.witness->a), fr.witness->b));
  out.push_back(f);
  out.push_back(detail::run_suite("archimedean_witness", cases, [&](std::size_t, std::string& w) {
    Element x = rng.element(sp), y = rng.element(sp);
    w = "x = " + to_string(x) + ", y = " + to_string(y);
    auto n = archimedean_witness(sp, x, y);
    bool nonpositive = leq(x, zero_like(x));
    if (!n) return nonpositive;
    if (nonpositive || *n < 1) return false;
    // Least n with n x not <= y: every smaller multiple stays below y.
    for (Integer m = 1; m < *n; ++m)
      if (!leq(Rational(m) * x, y)) return false;
    return !leq(Rational(*n) * x, y);
  }));
  if (sp.mul == Multiplication::ZERO) {
    pair_law("zero_products", [&](const Element& x, const Element& y) { return is_zero(mul(x, y)); });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Topology properties
// ---------------------------------------------------------------------------

inline std::vector<SpaceDesc> sample_spaces() {
  return {SpaceDesc::qn(1),
          SpaceDesc::qn(3),
          SpaceDesc::qn(2, Multiplication::ZERO),
          SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT),
          SpaceDesc::evseq(TopologyId::EVSEQ_SUPNORM),
          SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT, Multiplication::ZERO),
          SpaceDesc::z_discrete()};
}

/// Random finite set of 1 to 4 points.
inline SetDesc random_finite_set(Sampler& rng, const SpaceDesc& space) {
  std::vector<Element> pts;
  auto n = rng.integer(1, 4);
  for (std::int64_t i = 0; i < n; ++i) pts.push_back(rng.element(space));
  return SetDesc::finite(space, pts);
}

/// Solid hulls of bounded finite sets stay bounded, with the same bound
/// function as their generators.
inline SuiteResult hull_bounds_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = sample_spaces();
  return detail::run_suite("solid_hull_bounds", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    SetDesc s = random_finite_set(rng, sp);
    w = to_string(s) + " in " + to_string(sp);
    auto r = hull_bounded_preservation(s);
    return r.hull.bounded && r.hull.beta == r.set.beta && r.set.beta == coordinate_bounds(s);
  });
}

/// A random symbolic set of one of the box-like shapes.
inline SetDesc random_set(Sampler& rng, const SpaceDesc& space) {
  switch (rng.integer(0, 5)) {
    case 0: return random_finite_set(rng, space);
    case 1: {
      Element a = rng.element(space), b = rng.element(space);
      return SetDesc::interval(space, meet(a, b), join(a, b));
    }
    case 2: return solid_hull(space, {rng.element(space), rng.element(space)});
    case 3: {
      if (space.topology == TopologyId::EVSEQ_PRODUCT) {
        std::vector<std::size_t> f;
        for (std::int64_t i = rng.integer(0, 2); i >= 0; --i) f.push_back(static_cast<std::size_t>(rng.integer(0, 4)));
        return SetDesc::nbhd(space, NbhdDesc::product(f, rng.positive()));
      }
      if (space.topology == TopologyId::EVSEQ_SUPNORM) return SetDesc::nbhd(space, NbhdDesc::supnorm(rng.positive()));
      if (space.kind == SpaceKind::Z_DISCRETE) return SetDesc::nbhd(space, NbhdDesc::discrete());
      std::vector<Rational> r;
      for (std::size_t i = 0; i < space.dim; ++i) r.push_back(rng.positive());
      return SetDesc::nbhd(space, NbhdDesc::box(r));
    }
    case 4: return SetDesc::image(rng.hom(space), random_finite_set(rng, space));
    default:
      if (space.sequence() && rng.coin()) return SetDesc::staircase(space);
      return SetDesc::image(rng.hom(space), SetDesc::nbhd(space, unit_nbhd(space)));
  }
}

/// On pointwise box topologies the two boundedness notions agree.
inline SuiteResult group_ring_agreement_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  std::vector<SpaceDesc> spaces{SpaceDesc::qn(2), SpaceDesc::qn(3), SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT),
                                SpaceDesc::evseq(TopologyId::EVSEQ_SUPNORM)};
  return detail::run_suite("group_ring_agreement", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    SetDesc s = random_set(rng, sp);
    w = to_string(s);
    return set_ring_bounded(s).bounded == set_group_bounded(s).bounded;
  });
}

/// Sampled members of a set respect its bound function.
inline SuiteResult bound_soundness_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = sample_spaces();
  return detail::run_suite("bound_function_soundness", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    SetDesc s = random_set(rng, sp);
    CoordBounds beta = coordinate_bounds(s);
    for (int k = 0; k < 5; ++k) {
      Element x = rng.member(s);
      for (std::size_t c = 0; c <= extent(x); ++c) {
        if (!sp.sequence() && c >= extent(x)) break;
        Bound b = beta.at(c);
        if (!b.infinite && abs(coord(x, c)) > b.value) {
          w = "x = " + to_string(x) + " exceeds " + to_string(beta) + " in " + to_string(s);
          return false;
        }
      }
    }
    return true;
  });
}

inline SuiteResult fatou_suite() {
  SuiteResult r{"fatou_topologies"};
  for (TopologyId t : {TopologyId::QN_BOX, TopologyId::EVSEQ_PRODUCT, TopologyId::EVSEQ_SUPNORM,
                       TopologyId::Z_DISCRETE_TOP}) {
    ++r.checked;
    if (!fatou_check(t)) {
      r.pass = false;
      r.witness = to_string(t);
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphism calculus properties
// ---------------------------------------------------------------------------

/// positive_part(T)(x) equals the vertex-enumeration supremum, n in 1..6.
inline SuiteResult riesz_kantorovich_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  return detail::run_suite("riesz_kantorovich_agreement", cases, [&](std::size_t, std::string& w) {
    auto n = static_cast<std::size_t>(rng.integer(1, 6));
    HomDesc t = HomDesc::matrix(rng.matrix(n));
    Element x = rng.nonnegative_finvec(n);
    w = "T = " + to_string(t) + ", x = " + to_string(x);
    return positive_part(t).apply(x) == sup_over_interval_oracle(t, x);
  });
}

/// Admissible (x, y1, y2) in Q^dim: |x| <= |y1| + |y2|, half of them with x >= 0.
inline std::array<Element, 3> admissible_triple(Sampler& rng, std::size_t dim) {
  Element y1 = rng.finvec(dim), y2 = rng.finvec(dim);
  Element cap = abs_val(y1) + abs_val(y2);
  bool positive = rng.coin();
  Element x = map(cap, [&](const Rational& c) { return rng.between(positive ? Rational(0) : Rational(-c), c); });
  return {x, y1, y2};
}

inline SuiteResult decomposition_suite(std::uint64_t seed, std::size_t cases, std::size_t dim = 5) {
  Sampler rng(seed);
  auto space = SpaceDesc::qn(dim);
  return detail::run_suite("riesz_decomposition", cases, [&](std::size_t, std::string& w) {
    auto [x, y1, y2] = admissible_triple(rng, dim);
    w = "x = " + to_string(x) + ", y1 = " + to_string(y1) + ", y2 = " + to_string(y2);
    auto d = riesz_decompose(space, x, y1, y2);
    bool ok = d.x1 + d.x2 == x && leq(abs_val(d.x1), abs_val(y1)) && leq(abs_val(d.x2), abs_val(y2));
    if (is_positive(x)) ok = ok && is_positive(d.x1) && is_positive(d.x2);
    return ok;
  });
}

/// Matrix-derived cone maps extend back to their matrix; a planted
/// non-additive table is rejected.
inline SuiteResult extension_suite(std::uint64_t seed, std::size_t cases, std::size_t inputs = 5) {
  Sampler rng(seed);
  return detail::run_suite("cone_extension", cases, [&](std::size_t i, std::string& w) {
    auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto space = SpaceDesc::qn(n);
    HomDesc t = HomDesc::matrix(rng.matrix(n));
    w = "T = " + to_string(t);
    auto ext = extend_from_cone(space, ConeMapDesc{t, {}}, seed + i);
    if (ext.to_hom() != t) return false;
    for (std::size_t k = 0; k < inputs; ++k) {
      Element x = rng.finvec(n);
      if (ext(x) != t.apply(x)) return false;
    }
    // Planted: double the value at one positive point.
    Element p = rng.nonnegative_finvec(n);
    if (is_zero(p)) p = FinVec::unit(n, 0);
    Element tp = t.apply(p);
    Element planted = map(tp, [](const Rational& v) { return Rational(2 * v + 1); });
    if (!is_positive(planted)) planted = abs_val(planted) + FinVec::constant(n, 1);
    try {
      extend_from_cone(space, ConeMapDesc{t, {{p, planted}}}, seed + i);
      w += " (planted table accepted)";
      return false;
    } catch (const Error& e) {
      return e.code() == ErrorCode::NotAdditiveOnCone;
    }
  });
}

/// T = T+ - T-, |T| = T+ + T-, T+ meet T- = 0, (T v S) + (T ^ S) = T + S.
inline SuiteResult hom_lattice_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  return detail::run_suite("hom_lattice_laws", cases, [&](std::size_t, std::string& w) {
    auto n = static_cast<std::size_t>(rng.integer(1, 5));
    HomDesc t = HomDesc::matrix(rng.matrix(n)), s = HomDesc::matrix(rng.matrix(n));
    w = "T = " + to_string(t) + ", S = " + to_string(s);
    HomDesc tp = positive_part(t), tn = negative_part(t);
    return tp - tn == t && tp + tn == modulus(t) && is_zero(hom_meet(tp, tn)) &&
           hom_join(t, s) + hom_meet(t, s) == t + s;
  });
}

/// directed_sup dominates the family and is below every sampled upper bound.
inline SuiteResult directed_sup_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  return detail::run_suite("directed_sup", cases, [&](std::size_t, std::string& w) {
    auto n = static_cast<std::size_t>(rng.integer(1, 4));
    std::vector<HomDesc> family;
    for (std::int64_t k = rng.integer(1, 4); k > 0; --k) family.push_back(HomDesc::matrix(rng.matrix(n)));
    HomDesc top = family.front();
    for (const auto& h : family) top = hom_join(top, h);
    auto nonneg = [&] { return modulus(HomDesc::matrix(rng.matrix(n))); };
    HomDesc bound = top + nonneg();
    w = "family of " + std::to_string(family.size()) + " starting " + to_string(family.front());
    HomDesc s = directed_sup(family, bound);
    for (const auto& h : family)
      if (!hom_leq(h, s)) return false;
    for (int k = 0; k < 3; ++k) {
      HomDesc r = top + nonneg();
      if (!hom_leq(s, r)) return false;
    }
    return hom_leq(s, bound);
  });
}

// ---------------------------------------------------------------------------
// Homomorphism spaces
// ---------------------------------------------------------------------------

inline std::vector<SpaceDesc> net_spaces() {
  return {SpaceDesc::qn(2), SpaceDesc::qn(3), SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT),
          SpaceDesc::evseq(TopologyId::EVSEQ_SUPNORM)};
}

/// A random net converging to base in every mode: constant, affine or a
/// short table. On sequences the 1/alpha part has a zero diagonal tail.
inline HomNet random_convergent_net(Sampler& rng, const SpaceDesc& sp, const HomDesc& base) {
  switch (rng.integer(0, 2)) {
    case 0: return HomNet::constant(sp, sp, base);
    case 1: {
      HomDesc m = rng.hom(sp);
      if (sp.sequence()) m = HomDesc::diag_plus_finite(EvSeq(m.diag().prefix(), 0), m.block_size(), m.block());
      return HomNet::affine(sp, sp, base, m);
    }
    default: {
      std::vector<HomDesc> terms;
      for (std::int64_t k = rng.integer(1, 4); k > 0; --k) terms.push_back(rng.hom(sp));
      terms.push_back(base);
      return HomNet::table(sp, sp, terms);
    }
  }
}

/// The tightest U whose constrained coordinates cover every row of the
/// given homomorphisms.
inline NbhdDesc covering_nbhd(const SpaceDesc& sp, const std::vector<HomDesc>& homs) {
  HomDesc sum = HomDesc::zero(sp);
  for (const auto& h : homs) sum = sum + modulus(h);
  return tightest_nbhd(sp, sum);
}

inline std::vector<HomDesc> net_homs(const HomNet& net, const HomDesc& limit) {
  std::vector<HomDesc> all = net.params();
  all.push_back(limit);
  return all;
}

/// Every issued certificate re-verifies at alpha0 and alpha0 + 7, and alpha0
/// is least.
inline SuiteResult certificate_recheck_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = net_spaces();
  return detail::run_suite("certificate_recheck", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    HomDesc limit = rng.hom(sp);
    HomNet net = random_convergent_net(rng, sp, limit);
    auto mode = static_cast<ConvergenceMode>(i % 3);
    ModeParams p;
    p.u = covering_nbhd(sp, net_homs(net, limit));
    auto cert = converges(mode, net, limit, p);
    w = std::string(to_string(mode)) + " net " + to_string(net.family()) + " on " + to_string(sp) + ": " + cert.reason;
    if (!cert.convergent) return false;
    std::size_t ext = 0;
    for (const auto& h : net_homs(net, limit)) ext = std::max(ext, h.extent());
    for (const Rational& r : {Rational(1), Rational(1, 3), Rational(2, 9)}) {
      NbhdDesc v = representative_nbhd(sp, ext);
      for (auto& q : v.radii) q = r;
      v.radius = r;
      Integer a0 = cert.alpha0(v);
      if (!cert.contained_at(a0, v) || !cert.contained_at(a0 + 7, v)) return false;
      if (a0 > 1 && cert.contained_at(a0 - 1, v)) return false;
    }
    return true;
  });
}

/// Paired-limit audits: a convergent net has one limit.
inline SuiteResult uniqueness_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = net_spaces();
  return detail::run_suite("limit_uniqueness", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    HomDesc limit = rng.hom(sp);
    HomNet net = random_convergent_net(rng, sp, limit);
    auto mode = static_cast<ConvergenceMode>(i % 3);
    // Same limit in a different syntactic form, then a perturbed one.
    HomDesc same = limit + HomDesc::zero(sp);
    HomDesc other = limit + rng.hom(sp);
    ModeParams p;
    w = std::string(to_string(mode)) + " on " + to_string(sp) + ", limit " + to_string(limit);
    p.u = covering_nbhd(sp, net_homs(net, other));
    auto a = limit_uniqueness_audit(net, limit, same, mode, p);
    auto b = limit_uniqueness_audit(net, limit, other, mode, p);
    return a.reached && a.equal && b.reached == (other == limit);
  });
}

/// The continuity inequality on difference-convergent net pairs in all modes.
inline SuiteResult lattice_continuity_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = net_spaces();
  return detail::run_suite("lattice_continuity", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    auto mode = static_cast<ConvergenceMode>(i % 3);
    HomDesc t = rng.hom(sp), m = rng.hom(sp);
    if (sp.sequence()) m = HomDesc::diag_plus_finite(EvSeq({}, 0), m.block_size(), m.block());
    HomNet net_t = HomNet::affine(sp, sp, t, m);
    HomNet net_s = HomNet::constant(sp, sp, t);
    ContinuityParams p;
    p.seed = seed + i;
    p.samples = 6;
    p.mode.u = tightest_nbhd(sp, m);
    w = std::string(to_string(mode)) + " on " + to_string(sp) + ", T = " + to_string(t) + ", M = " + to_string(m);
    auto audit = lattice_continuity_audit(net_t, net_s, mode, p);
    return audit.inequality_checks > 0 && audit.membership_checks > 0;
  });
}

/// classify(identity, top, top) is always continuous.
inline SuiteResult identity_continuity_suite() {
  SuiteResult r{"identity_continuity"};
  for (const auto& sp : sample_spaces()) {
    ++r.checked;
    if (!classify(HomDesc::identity(sp), sp).continuous.holds) {
      r.pass = false;
      r.witness = to_string(sp);
      break;
    }
  }
  return r;
}

/// If T is nr-bounded with witness U then so is T+, with the same U.
inline SuiteResult positive_part_nr_suite(std::uint64_t seed, std::size_t cases) {
  Sampler rng(seed);
  auto spaces = net_spaces();
  return detail::run_suite("positive_part_keeps_nr", cases, [&](std::size_t i, std::string& w) {
    const SpaceDesc& sp = spaces[i % spaces.size()];
    HomDesc t = rng.hom(sp);
    auto f = nr_flag(t, sp, sp, Reading::RING);
    w = to_string(t) + " on " + to_string(sp);
    if (!f.holds) return true;
    auto image = exact_sup(positive_part(t), SetDesc::nbhd(sp, *f.domain_nbhd));
    return ring_bounded(image, sp).bounded;
  });
}

}  // namespace lring
