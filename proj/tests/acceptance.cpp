#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include "oracles.hpp"

using namespace lring;

namespace {

struct Criterion {
  int id;
  std::string what;
  double limit_s;  // 0: no time limit
  std::function<bool(std::string&)> run;
};

using oracle::Vec;

bool leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

oracle::Mat entrywise(const oracle::Mat& a, const oracle::Mat& b, const std::function<Rational(Rational, Rational)>& f) {
  oracle::Mat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = f(a[i][j], b[i][j]);
  return out;
}

bool riesz_kantorovich(std::string& w) {
  Sampler rng(101);
  for (int k = 0; k < 500; ++k) {
    auto n = static_cast<std::size_t>(rng.integer(1, 6));
    HomDesc t = HomDesc::matrix(rng.matrix(n));
    Element x = rng.nonnegative_finvec(n);
    if (oracle::entries(positive_part(t).apply(x)) != oracle::vertex_sup(oracle::rows(t), oracle::entries(x))) {
      w = "T = " + to_string(t) + ", x = " + to_string(x);
      return false;
    }
  }
  w = "500 matrices, n in 1..6, zero tolerance";
  return true;
}

bool decomposition(std::string& w) {
  Sampler rng(102);
  SpaceDesc q5 = SpaceDesc::qn(5);
  for (int k = 0; k < 1000; ++k) {
    auto [x, y1, y2] = admissible_triple(rng, 5);
    auto d = riesz_decompose(q5, x, y1, y2);
    Vec vx = oracle::entries(x), a = oracle::entries(d.x1), b = oracle::entries(d.x2);
    Vec w1 = oracle::entries(y1), w2 = oracle::entries(y2);
    bool positive = true;
    for (const auto& c : vx) positive = positive && c >= 0;
    for (std::size_t i = 0; i < 5; ++i) {
      bool ok = a[i] + b[i] == vx[i] && abs(a[i]) <= abs(w1[i]) && abs(b[i]) <= abs(w2[i]) &&
                (!positive || (a[i] >= 0 && b[i] >= 0));
      if (!ok) {
        w = "x = " + to_string(x) + ", y1 = " + to_string(y1) + ", y2 = " + to_string(y2);
        return false;
      }
    }
  }
  w = "1000 triples in Q^5";
  return true;
}

bool cone_extension(std::string& w) {
  Sampler rng(103);
  for (int k = 0; k < 200; ++k) {
    auto n = static_cast<std::size_t>(rng.integer(1, 4));
    SpaceDesc sp = SpaceDesc::qn(n);
    HomDesc t = HomDesc::matrix(rng.matrix(n));
    auto ext = extend_from_cone(sp, ConeMapDesc{t, {}}, static_cast<std::uint64_t>(k));
    for (int s = 0; s < 5; ++s) {
      Element x = rng.finvec(n);
      if (oracle::entries(ext(x)) != oracle::mat_vec(oracle::rows(t), oracle::entries(x))) {
        w = "T = " + to_string(t) + " at " + to_string(x);
        return false;
      }
    }
    // Planted: f(e1) doubled breaks f(e1) + f(e2) = f(e1 + e2) once n >= 2.
    Element e = FinVec::unit(n, 0);
    Element planted = abs_val(t.apply(e)) + abs_val(t.apply(e)) + FinVec::constant(n, 1);
    ConeMapDesc bad{t, {{e, planted}}};
    auto audit = audit_additivity(sp, bad);
    if (!audit.witness) {
      w = "planted table on " + to_string(t) + " not flagged";
      return false;
    }
    try {
      extend_from_cone(sp, bad);
      w = "planted table on " + to_string(t) + " accepted";
      return false;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NotAdditiveOnCone) {
        w = err.what();
        return false;
      }
    }
  }
  w = "200 cone maps, 1000 mixed-sign inputs, 200 planted tables rejected";
  return true;
}

bool hom_lattice(std::string& w) {
  Sampler rng(104);
  for (int k = 0; k < 500; ++k) {
    auto n = static_cast<std::size_t>(rng.integer(1, 5));
    HomDesc t = HomDesc::matrix(rng.matrix(n)), s = HomDesc::matrix(rng.matrix(n));
    oracle::Mat mt = oracle::rows(t), ms = oracle::rows(s);
    auto mx = [](Rational a, Rational b) { return a > b ? a : b; };
    auto mn = [](Rational a, Rational b) { return a < b ? a : b; };
    oracle::Mat zero = entrywise(mt, mt, [](Rational, Rational) { return Rational(0); });
    HomDesc tp = positive_part(t), tn = negative_part(t);
    bool ok = oracle::rows(tp) == entrywise(mt, zero, mx) && oracle::rows(tn) == entrywise(zero, mt, [&](Rational z, Rational a) { return mx(z, -a); }) &&
              tp - tn == t && tp + tn == modulus(t) && is_zero(hom_meet(tp, tn)) &&
              oracle::rows(hom_join(t, s)) == entrywise(mt, ms, mx) && oracle::rows(hom_meet(t, s)) == entrywise(mt, ms, mn) &&
              hom_join(t, s) + hom_meet(t, s) == t + s;
    if (!ok) {
      w = "T = " + to_string(t) + ", S = " + to_string(s);
      return false;
    }
  }
  w = "500 matrix pairs";
  return true;
}

bool directed_sup_audit(std::string& w) {
  Sampler rng(105);
  for (int k = 0; k < 100; ++k) {
    auto n = static_cast<std::size_t>(rng.integer(1, 4));
    std::vector<HomDesc> family;
    for (std::int64_t m = rng.integer(1, 5); m > 0; --m) family.push_back(HomDesc::matrix(rng.matrix(n)));
    oracle::Mat top = oracle::rows(family.front());
    for (const auto& h : family)
      top = entrywise(top, oracle::rows(h), [](Rational a, Rational b) { return a > b ? a : b; });
    auto bound = [&] {
      return HomDesc::matrix(entrywise(top, oracle::rows(modulus(HomDesc::matrix(rng.matrix(n)))),
                                       [](Rational a, Rational b) { return a + b; }));
    };
    HomDesc s = directed_sup(family, bound());
    bool ok = true;
    for (const auto& h : family) ok = ok && hom_leq(h, s);
    for (int r = 0; r < 5; ++r) ok = ok && hom_leq(s, bound());
    // A positive x probes the order too.
    Element x = rng.nonnegative_finvec(n);
    for (const auto& h : family) ok = ok && leq(oracle::entries(h.apply(x)), oracle::entries(s.apply(x)));
    if (!ok) {
      w = "family of " + std::to_string(family.size()) + " starting " + to_string(family.front());
      return false;
    }
  }
  w = "100 families, 5 sampled upper bounds each";
  return true;
}

bool gallery(std::string& w) {
  Gallery g = Gallery::builtin();
  std::vector<std::string> ids;
  for (const auto& c : g.cases()) {
    auto r = g.run_case(c.id);
    auto again = g.run_case(c.id);
    if (!r.pass || r.observed != again.observed) {
      w = c.id + (r.diffs.empty() ? " not deterministic" : ": " + r.diffs.front());
      return false;
    }
    ids.push_back(c.id);
  }
  auto a = g.run_case("A_product_identity").observed;
  auto b = g.run_case("B_zero_mult_identity").observed;
  auto c = g.run_case("C_linfty_product_vs_norm").observed;
  auto d = g.run_case("D_fring_failure_matrix").observed;
  bool labels = a["order_bounded"] == true && a["nr"]["ring"] == false && a["nr"]["group"] == false &&
                b["nr"]["group"] == false && b["br"]["group"] == false && b["nr"]["ring"] == true &&
                c["order_bounded"] == true && c["continuous"] == false && d["f_ring"] == false &&
                d["ca_meet_b"] != d["a_meet_b"];
  w = "cases";
  for (const auto& id : ids) w += " " + id;
  return labels && ids.size() == 4;
}

bool lattice_continuity(std::string& w) {
  auto suite = lattice_continuity_suite(107, 150);
  if (!suite.pass) {
    w = suite.witness;
    return false;
  }
  // Independent recheck on Q^n with the vertex oracle for every positive part.
  Sampler rng(207);
  std::size_t checks = 0;
  for (int k = 0; k < 60; ++k) {
    auto n = static_cast<std::size_t>(rng.integer(1, 4));
    SpaceDesc sp = SpaceDesc::qn(n);
    HomDesc t = HomDesc::matrix(rng.matrix(n)), m = HomDesc::matrix(rng.matrix(n));
    HomNet net_t = HomNet::affine(sp, sp, t, m), net_s = HomNet::constant(sp, sp, t);
    auto mode = static_cast<ConvergenceMode>(k % 3);
    ModeParams p;
    p.u = NbhdDesc::box(std::vector<Rational>(n, 1));
    p.b = SetDesc::interval(sp, FinVec::zero(n), FinVec::constant(n, 1));
    HomNet diff = difference(net_t, net_s);
    auto cert = converges(mode, diff, HomDesc::zero(sp), p);
    if (!cert.convergent) {
      w = "difference net does not converge: " + cert.reason;
      return false;
    }
    NbhdDesc v = NbhdDesc::box(std::vector<Rational>(n, Rational(1, 4)));
    NbhdDesc target = cert.target(v);
    Integer a0 = cert.alpha0(v);
    for (Integer alpha : {Integer(1), Integer(3), a0, a0 + 7}) {
      oracle::Mat ta = oracle::rows(net_t.term(alpha)), sa = oracle::rows(net_s.term(alpha));
      oracle::Mat da = oracle::rows(net_t.term(alpha) - net_s.term(alpha));
      for (int s = 0; s < 4; ++s) {
        // Positive x inside the source: the unit box, or the U answering W for cr.
        Vec x;
        for (std::size_t i = 0; i < n; ++i)
          x.push_back(Rational(Integer(rng.integer(0, 6)), Integer(6)) * (cert.cr_w ? cert.domain_nbhd->radii[i] : Rational(1)));
        Vec lhs = oracle::vertex_sup(ta, x), rs = oracle::vertex_sup(sa, x), rhs = oracle::vertex_sup(da, x);
        for (std::size_t i = 0; i < n; ++i) lhs[i] -= rs[i];
        ++checks;
        if (!leq(lhs, rhs)) {
          w = "inequality fails at alpha " + alpha.str();
          return false;
        }
        if (alpha >= a0 && !nbhd_member(target, FinVec(rhs))) {
          w = "difference leaves the target at alpha " + alpha.str();
          return false;
        }
      }
    }
  }
  w = "150-net audit in nr/br/cr plus " + std::to_string(checks) + " oracle checks";
  return true;
}

bool solid_hull_bounds(std::string& w) {
  Sampler rng(108);
  auto spaces = sample_spaces();
  for (int k = 0; k < 500; ++k) {
    const SpaceDesc& sp = spaces[static_cast<std::size_t>(k) % spaces.size()];
    SetDesc s = random_finite_set(rng, sp);
    auto r = hull_bounded_preservation(s);
    const auto& pts = std::get<SetDesc::Finite>(s.body()).points;
    // Coordinatewise max |g_i| over the generators, read straight off the points.
    std::size_t span = 1;
    for (const auto& g : pts)
      span = std::max(span, std::holds_alternative<EvSeq>(g) ? std::get<EvSeq>(g).prefix().size() + 2
                                                             : std::get<FinVec>(g).entries().size());
    bool ok = r.hull.bounded && r.hull.beta == r.set.beta;
    for (std::size_t i = 0; ok && i < span; ++i) {
      Rational m = 0;
      for (const auto& g : pts) {
        Rational gi = std::holds_alternative<EvSeq>(g) ? oracle::at(std::get<EvSeq>(g), i) : std::get<FinVec>(g).entries()[i];
        m = std::max(m, abs(gi));
      }
      Bound b = r.hull.beta.at(i);
      ok = !b.infinite && b.value == m;
    }
    if (!ok) {
      w = to_string(s) + " in " + to_string(sp);
      return false;
    }
  }
  w = "500 finite sets over " + std::to_string(spaces.size()) + " instances";
  return true;
}

bool hausdorff(std::string& w) {
  auto rc = certificate_recheck_suite(109, 300);
  if (!rc.pass) {
    w = rc.witness;
    return false;
  }
  auto un = uniqueness_suite(109, 50);
  if (!un.pass || un.checked != 50) {
    w = un.witness;
    return false;
  }
  w = std::to_string(rc.checked) + " certificates rechecked at alpha0 and alpha0+7, " + std::to_string(un.checked) +
      " paired-limit audits";
  return true;
}

bool determinism(std::string& w) {
  Gallery g = Gallery::builtin();
  bool same = cmd_gallery(g, 7).machine() == cmd_gallery(g, 7).machine() &&
              cmd_laws("q3_pointwise", 7, 1000).machine() == cmd_laws("q3_pointwise", 7, 1000).machine() &&
              cmd_laws("evseq_pointwise", 7, 1000).machine() == cmd_laws("evseq_pointwise", 7, 1000).machine();
  w = "in-process reports";
#ifdef LRING_CLI_PATH
  auto capture = [](const std::string& args) {
    std::string out;
    FILE* p = popen((std::string(LRING_CLI_PATH) + " " + args).c_str(), "r");
    if (!p) return out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    pclose(p);
    return out;
  };
  std::string g1 = capture("gallery --seed 7 --format machine"), g2 = capture("gallery --seed 7 --format machine");
  std::string l1 = capture("laws --instance q3_pointwise --seed 7 --format machine");
  std::string l2 = capture("laws --instance q3_pointwise --seed 7 --format machine");
  same = same && !g1.empty() && g1 == g2 && !l1.empty() && l1 == l2;
  w += " and CLI runs";
#endif
  w += " byte-identical";
  return same;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "positive part agrees with the vertex supremum", 10, riesz_kantorovich},
      {2, "decomposition postconditions", 5, decomposition},
      {3, "cone extension and planted-table rejection", 5, cone_extension},
      {4, "lattice laws of homomorphisms", 5, hom_lattice},
      {5, "finite directed supremum", 0, directed_sup_audit},
      {6, "gallery cases A-D", 2, gallery},
      {7, "lattice-continuity inequality in nr, br, cr", 10, lattice_continuity},
      {8, "solid hull keeps bounds", 0, solid_hull_bounds},
      {9, "certificate recheck and limit uniqueness", 0, hausdorff},
      {10, "byte-identical machine reports", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const Error& e) {
      detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    char timing[64];
    if (c.limit_s == 0) std::snprintf(timing, sizeof timing, "%.2fs", secs);
    else std::snprintf(timing, sizeof timing, "%.2fs, limit %.0fs", secs, c.limit_s);
    bool pass = ok && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.what << " (" << timing << ") " << detail
              << "\n";
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << "\n";
  return failed == 0 ? 0 : 1;
}
