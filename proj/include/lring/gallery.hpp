#pragma once

#include <string>
#include <vector>

#include "lring/io.hpp"
#include "lring/suites.hpp"

namespace lring {

namespace detail {

// Same content as data/gallery_expectations.json.
inline constexpr const char* builtin_gallery_json = R"json({
  "cases": [
    {
      "id": "A_product_identity",
      "narrative": "Identity on eventually constant sequences with the product topology and pointwise product. Continuous and bounded on bounded sets, yet no neighborhood has a bounded image.",
      "setup": {
        "kind": "classify",
        "domain": {"kind": "evseq", "mul": "pointwise", "topology": "evseq_product"},
        "codomain": {"kind": "evseq", "mul": "pointwise", "topology": "evseq_product"},
        "hom": "identity"
      },
      "expect": {
        "order_bounded": true,
        "nr": {"ring": false, "group": false},
        "br": {"ring": true, "group": true},
        "continuous": true
      }
    },
    {
      "id": "B_zero_mult_identity",
      "narrative": "The same identity under the zero product. Every set is ring-bounded, so the ring reading accepts what the group reading rejects.",
      "setup": {
        "kind": "classify",
        "domain": {"kind": "evseq", "mul": "zero", "topology": "evseq_product"},
        "codomain": {"kind": "evseq", "mul": "zero", "topology": "evseq_product"},
        "hom": "identity"
      },
      "expect": {
        "order_bounded": true,
        "nr": {"ring": true, "group": false},
        "br": {"ring": true, "group": false},
        "continuous": true
      }
    },
    {
      "id": "C_linfty_product_vs_norm",
      "narrative": "Identity from the product topology to the sup-norm topology. Order bounded but neither bounded nor continuous.",
      "setup": {
        "kind": "classify",
        "domain": {"kind": "evseq", "mul": "pointwise", "topology": "evseq_product"},
        "codomain": {"kind": "evseq", "mul": "pointwise", "topology": "evseq_supnorm"},
        "hom": "identity"
      },
      "expect": {
        "order_bounded": true,
        "nr": {"ring": false, "group": false},
        "br": {"ring": false, "group": false},
        "continuous": false
      }
    },
    {
      "id": "D_fring_failure_matrix",
      "narrative": "2x2 rational matrices with the entrywise order form a lattice-ordered ring that is not an f-ring.",
      "setup": {
        "kind": "f_ring",
        "instance": "matrix2_entrywise",
        "a": ["1", "0", "0", "0"],
        "b": ["0", "0", "1", "0"],
        "c": ["0", "0", "1", "0"]
      },
      "expect": {
        "a_meet_b": ["0", "0", "0", "0"],
        "ca_meet_b": ["0", "0", "1", "0"],
        "f_ring": false
      }
    }
  ]
}
)json";

}  // namespace detail

/// One registered gallery case: a setup to evaluate and the labels it must
/// produce. Both live in data, not code.
struct GalleryCase {
  std::string id;
  std::string narrative;
  io::json setup;
  io::json expect;
};

struct CaseReport {
  std::string id;
  std::string narrative;
  bool pass = false;
  std::vector<std::string> diffs;  // "path: expected X, observed Y"
  io::json observed;
  io::json details;  // witnesses behind the observed labels
};

namespace detail {

inline io::json flag_json(const FlagVerdict& f) {
  io::json j;
  j["holds"] = f.holds;
  if (f.domain_nbhd) j["domain_nbhd"] = io::to_json(*f.domain_nbhd);
  if (f.domain_set) j["domain_set"] = io::to_json(*f.domain_set);
  if (f.codomain_nbhd) j["codomain_nbhd"] = io::to_json(*f.codomain_nbhd);
  j["image_bounds"] = io::to_json(f.image_bounds);
  return j;
}

/// Witnesses behind every flag of a label.
inline io::json label_details(const ClassLabel& c) {
  io::json d;
  d["order"] = {{"order_bounded", c.order.order_bounded},
                {"positive", c.order.positive},
                {"interval", {{"lo", io::to_json(c.order.interval.lo)}, {"hi", io::to_json(c.order.interval.hi)}}}};
  if (c.order.negativity_witness) d["order"]["negativity_witness"] = io::to_json(*c.order.negativity_witness);
  for (Reading r : {Reading::RING, Reading::GROUP}) {
    d[to_string(r)]["nr"] = flag_json(c.reading(r).nr);
    d[to_string(r)]["br"] = flag_json(c.reading(r).br);
  }
  d["continuous"] = flag_json(c.continuous);
  return d;
}

inline io::json observe_classify(const io::json& setup, io::json& details) {
  io::expect_keys(setup, {"kind", "domain", "codomain", "hom"}, "classify setup");
  SpaceDesc dom = io::space_from(io::require(setup, "domain", "classify setup"));
  SpaceDesc cod = setup.contains("codomain") ? io::space_from(setup.at("codomain")) : dom;
  HomDesc t = io::hom_from(io::require(setup, "hom", "classify setup"), dom);
  ClassLabel c = classify(t, dom, cod);
  if (!recheck(c, t, dom, cod)) throw Error(ErrorCode::SoundnessBug, "label failed its own recheck");
  io::json obs;
  obs["order_bounded"] = c.order_bounded();
  obs["nr"] = {{"ring", c.ring.nr.holds}, {"group", c.group.nr.holds}};
  obs["br"] = {{"ring", c.ring.br.holds}, {"group", c.group.br.holds}};
  obs["continuous"] = c.continuous.holds;
  details = label_details(c);
  return obs;
}

inline io::json observe_f_ring(const io::json& setup) {
  io::expect_keys(setup, {"kind", "instance", "a", "b", "c"}, "f_ring setup");
  const LawInstance& inst = law_instance(io::text(io::require(setup, "instance", "f_ring setup"), "instance"));
  auto el = [&](const char* k) { return io::element_from(io::require(setup, k, "f_ring setup"), inst.space); };
  Element a = el("a"), b = el("b"), c = el("c");
  auto mul = [&](const Element& x, const Element& y) {
    return inst.matrix_ring ? matrix2_mul(x, y) : ring_mul(inst.space, x, y);
  };
  io::json obs;
  obs["a_meet_b"] = io::to_json(meet(a, b));
  obs["ca_meet_b"] = io::to_json(meet(mul(c, a), b));
  FRingVerdict v = inst.matrix_ring ? check_f_ring({{a, b, c}}, matrix2_mul) : check_f_ring(inst.space, {{a, b, c}});
  obs["f_ring"] = v.holds;
  return obs;
}

inline void diff_json(const io::json& expect, const io::json& observed, const std::string& path,
                      std::vector<std::string>& out) {
  if (expect.is_object()) {
    for (const auto& [k, v] : expect.items()) {
      std::string p = path.empty() ? k : path + "." + k;
      if (!observed.is_object() || !observed.contains(k)) out.push_back(p + ": expected " + v.dump() + ", observed nothing");
      else diff_json(v, observed.at(k), p, out);
    }
    return;
  }
  if (expect != observed) out.push_back(path + ": expected " + expect.dump() + ", observed " + observed.dump());
}

}  // namespace detail

class Gallery {
 public:
  Gallery() = default;
  explicit Gallery(std::vector<GalleryCase> cases) : cases_(std::move(cases)) {}

  static Gallery from_json(const io::json& doc) {
    io::expect_keys(doc, {"cases"}, "gallery");
    const auto& list = io::require(doc, "cases", "gallery");
    if (!list.is_array()) io::bad("gallery cases must be an array");
    std::vector<GalleryCase> cases;
    for (const auto& c : list) {
      io::expect_keys(c, {"id", "narrative", "setup", "expect"}, "gallery case");
      GalleryCase g{io::text(io::require(c, "id", "gallery case"), "id"),
                    c.contains("narrative") ? io::text(c.at("narrative"), "narrative") : "",
                    io::require(c, "setup", "gallery case"), io::require(c, "expect", "gallery case")};
      for (const auto& other : cases)
        if (other.id == g.id) io::bad("duplicate gallery case '" + g.id + "'");
      cases.push_back(std::move(g));
    }
    return Gallery(std::move(cases));
  }

  static Gallery parse(const std::string& text) {
    try {
      return from_json(io::json::parse(text));
    } catch (const io::json::exception& e) {
      io::bad(std::string("gallery file: ") + e.what());
    }
  }

  static Gallery builtin() { return parse(detail::builtin_gallery_json); }
  static Gallery load(const std::string& path) { return parse(io::read_file(path)); }

  const std::vector<GalleryCase>& cases() const { return cases_; }

  const GalleryCase& find(const std::string& id) const {
    for (const auto& c : cases_)
      if (c.id == id) return c;
    throw Error(ErrorCode::UnknownCase, "no gallery case named '" + id + "'");
  }

  CaseReport run_case(const std::string& id) const {
    const GalleryCase& c = find(id);
    CaseReport r;
    r.id = c.id;
    r.narrative = c.narrative;
    std::string kind = io::text(io::require(c.setup, "kind", "gallery setup"), "setup kind");
    if (kind == "classify") r.observed = detail::observe_classify(c.setup, r.details);
    else if (kind == "f_ring") r.observed = detail::observe_f_ring(c.setup);
    else io::bad("unknown gallery setup kind '" + kind + "'");
    detail::diff_json(c.expect, r.observed, "", r.diffs);
    r.pass = r.diffs.empty();
    return r;
  }

 private:
  std::vector<GalleryCase> cases_;
};

struct GalleryRun {
  std::vector<CaseReport> cases;
  std::vector<SuiteResult> suites;

  bool pass() const {
    for (const auto& c : cases)
      if (!c.pass) return false;
    for (const auto& s : suites)
      if (!s.pass) return false;
    return true;
  }
};

inline constexpr std::size_t default_suite_cases = 30;

/// Every invariant suite of every module, at a reduced case count. The
/// matrix ring is left out: its f-ring failure is a gallery case.
inline std::vector<SuiteResult> invariant_suites(std::uint64_t seed, std::size_t cases = default_suite_cases) {
  std::vector<SuiteResult> out;
  for (const auto& inst : law_instances()) {
    if (inst.matrix_ring) continue;
    for (auto& s : lattice_laws(inst, seed, cases)) {
      s.name = inst.name + "/" + s.name;
      out.push_back(std::move(s));
    }
  }
  out.push_back(hull_bounds_suite(seed, cases));
  out.push_back(group_ring_agreement_suite(seed, cases));
  out.push_back(bound_soundness_suite(seed, cases));
  out.push_back(fatou_suite());
  out.push_back(riesz_kantorovich_suite(seed, cases));
  out.push_back(decomposition_suite(seed, cases));
  out.push_back(extension_suite(seed, cases));
  out.push_back(hom_lattice_suite(seed, cases));
  out.push_back(directed_sup_suite(seed, cases));
  out.push_back(identity_continuity_suite());
  out.push_back(positive_part_nr_suite(seed, cases));
  out.push_back(certificate_recheck_suite(seed, cases));
  out.push_back(uniqueness_suite(seed, cases));
  out.push_back(lattice_continuity_suite(seed, cases));
  return out;
}

/// Runs all gallery cases in registry order, then the invariant suites.
inline GalleryRun run_all(const Gallery& g, std::uint64_t seed = 0, std::size_t suite_cases = default_suite_cases) {
  if (g.cases().empty()) throw Error(ErrorCode::EmptyRegistry, "the gallery has no cases");
  GalleryRun run;
  for (const auto& c : g.cases()) run.cases.push_back(g.run_case(c.id));
  if (suite_cases > 0) run.suites = invariant_suites(seed, suite_cases);
  return run;
}

}  // namespace lring
