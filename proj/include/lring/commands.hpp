#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lring/gallery.hpp"

namespace lring {

enum class Status { PASS, FAIL, ERROR };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::PASS: return "PASS";
    case Status::FAIL: return "FAIL";
    case Status::ERROR: return "ERROR";
  }
  return "?";
}

/// Result of one command: prose lines for the text format and a JSON body
/// for the machine format. Both are deterministic for fixed inputs.
struct Report {
  explicit Report(std::string cmd, Status s = Status::PASS) : command(std::move(cmd)), status(s) {}

  std::string command;
  Status status = Status::PASS;
  std::vector<std::string> lines;
  io::json data = io::json::object();

  void fail() {
    if (status == Status::PASS) status = Status::FAIL;
  }
  void check(bool ok) {
    if (!ok) fail();
  }

  std::string text() const {
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    out += std::string("RESULT: ") + to_string(status) + "\n";
    return out;
  }

  std::string machine() const {
    io::json j;
    j["command"] = command;
    j["status"] = to_string(status);
    j["results"] = data;
    return j.dump(2) + "\n";
  }

  int exit_code() const { return status == Status::PASS ? 0 : status == Status::FAIL ? 1 : 2; }
};

inline Report error_report(const std::string& command, const Error& e) {
  Report r{command, Status::ERROR};
  r.lines.push_back(std::string("error: ") + e.what());
  r.data["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  return r;
}

inline constexpr std::size_t default_cases = 1000;

// ---------------------------------------------------------------------------
// laws
// ---------------------------------------------------------------------------

inline Report cmd_laws(const std::string& instance, std::uint64_t seed, std::size_t cases = default_cases) {
  const LawInstance& inst = law_instance(instance);
  Report r{"laws"};
  r.data["instance"] = inst.name;
  r.data["space"] = io::to_json(inst.space);
  if (inst.matrix_ring) r.data["ring"] = "2x2 matrices, entrywise order";
  r.data["seed"] = seed;
  r.data["cases"] = cases;
  r.lines.push_back("laws on " + inst.name + " (" + to_string(inst.space) + "), seed " + std::to_string(seed) + ", " +
                    std::to_string(cases) + " cases");
  io::json laws = io::json::array();
  for (const auto& s : lattice_laws(inst, seed, cases)) {
    r.check(s.pass);
    io::json j{{"law", s.name}, {"status", s.pass ? "PASS" : "FAIL"}, {"checked", s.checked}};
    if (!s.pass) j["witness"] = s.witness;
    laws.push_back(j);
    std::string line = std::string(s.pass ? "PASS " : "FAIL ") + s.name + " (" + std::to_string(s.checked) + " checked)";
    if (!s.pass) line += ": " + s.witness;
    r.lines.push_back(line);
  }
  r.data["laws"] = laws;
  return r;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

inline Report cmd_classify(const io::SpecFile& spec, const std::string& hom) {
  const HomDesc& t = spec.hom(hom);
  ClassLabel c = classify(t, spec.space, spec.codomain);
  bool ok = recheck(c, t, spec.space, spec.codomain);
  Report r{"classify"};
  r.check(ok);
  auto yes = [](bool b) { return b ? "true" : "false"; };
  r.data["hom"] = hom;
  r.data["label"] = {{"order_bounded", c.order_bounded()},
                     {"nr", {{"ring", c.ring.nr.holds}, {"group", c.group.nr.holds}}},
                     {"br", {{"ring", c.ring.br.holds}, {"group", c.group.br.holds}}},
                     {"continuous", c.continuous.holds}};
  r.data["readings_differ"] = c.readings_differ();
  r.data["witnesses"] = detail::label_details(c);
  r.data["recheck"] = ok ? "PASS" : "FAIL";
  r.lines.push_back("classify " + hom + " = " + to_string(t) + " from " + to_string(spec.space) + " to " +
                    to_string(spec.codomain));
  r.lines.push_back(std::string("order bounded: ") + yes(c.order_bounded()) + " (positive: " + yes(c.order.positive) +
                    ")");
  for (Reading rd : {Reading::RING, Reading::GROUP}) {
    const auto& f = c.reading(rd);
    std::string line = std::string(to_string(rd)) + " reading: nr " + yes(f.nr.holds) + " with U = " +
                       to_string(*f.nr.domain_nbhd);
    if (!f.nr.holds && f.nr.codomain_nbhd) line += " (image escapes every multiple of " + to_string(*f.nr.codomain_nbhd) + ")";
    line += "; br " + std::string(yes(f.br.holds)) + " on " + to_string(*f.br.domain_set);
    if (!f.br.holds && f.br.codomain_nbhd) line += " (image escapes every multiple of " + to_string(*f.br.codomain_nbhd) + ")";
    r.lines.push_back(line);
  }
  if (c.readings_differ()) r.lines.push_back("the ring and group readings disagree");
  std::string cont = std::string("continuous: ") + yes(c.continuous.holds) + " for W = " +
                     to_string(*c.continuous.codomain_nbhd);
  if (c.continuous.holds) cont += " with U = " + to_string(*c.continuous.domain_nbhd);
  r.lines.push_back(cont);
  r.lines.push_back(std::string("recheck from witnesses: ") + (ok ? "PASS" : "FAIL"));
  return r;
}

// ---------------------------------------------------------------------------
// positive part
// ---------------------------------------------------------------------------

inline constexpr std::size_t posp_probes = 200;

inline Report cmd_posp(const io::SpecFile& spec, const std::string& hom, std::uint64_t seed = 0) {
  const HomDesc& t = spec.hom(hom);
  HomDesc tp = positive_part(t), tn = negative_part(t), tm = modulus(t);
  // Unit vectors are probed first, so the random probes make up the rest.
  std::size_t units = t.sequence() ? 0 : t.block_size();
  OracleAgreement a = positive_part_audit(t, posp_probes > units ? posp_probes - units : 0, seed);
  bool laws = tp - tn == t && tp + tn == tm && is_zero(hom_meet(tp, tn));
  Report r{"posp"};
  r.check(a.all() && laws);
  std::string agreement = std::to_string(a.agreed) + "/" + std::to_string(a.total);
  r.data["hom"] = hom;
  r.data["T"] = io::to_json(t);
  r.data["positive_part"] = io::to_json(tp);
  r.data["negative_part"] = io::to_json(tn);
  r.data["modulus"] = io::to_json(tm);
  r.data["oracle_agreement"] = agreement;
  if (a.witness) r.data["oracle_witness"] = io::to_json(*a.witness);
  r.data["lattice_identities"] = laws ? "PASS" : "FAIL";
  r.lines.push_back("T = " + to_string(t));
  r.lines.push_back("T+ = " + to_string(tp));
  r.lines.push_back("T- = " + to_string(tn));
  r.lines.push_back("|T| = " + to_string(tm));
  r.lines.push_back("oracle agreement: " + agreement);
  if (a.witness) r.lines.push_back("oracle disagrees at x = " + to_string(*a.witness));
  r.lines.push_back(std::string("T = T+ - T-, |T| = T+ + T-, T+ meet T- = 0: ") + (laws ? "PASS" : "FAIL"));
  return r;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

inline Report cmd_decompose(const io::SpecFile& spec, const std::string& x, const std::string& y1,
                            const std::string& y2) {
  const Element &ex = spec.element(x), &e1 = spec.element(y1), &e2 = spec.element(y2);
  Decomposition d = riesz_decompose(spec.space, ex, e1, e2);
  bool sum = d.x1 + d.x2 == ex;
  bool b1 = leq(abs_val(d.x1), abs_val(e1)), b2 = leq(abs_val(d.x2), abs_val(e2));
  bool pos = !is_positive(ex) || (is_positive(d.x1) && is_positive(d.x2));
  bool ok = sum && b1 && b2 && pos;
  Report r{"decompose"};
  r.check(ok);
  r.data["x"] = io::to_json(ex);
  r.data["y1"] = io::to_json(e1);
  r.data["y2"] = io::to_json(e2);
  r.data["x1"] = io::to_json(d.x1);
  r.data["x2"] = io::to_json(d.x2);
  r.data["postconditions"] = {{"sum", sum}, {"x1_dominated", b1}, {"x2_dominated", b2}, {"positivity", pos}};
  r.data["audit"] = ok ? "PASS" : "FAIL";
  r.lines.push_back("x = " + to_string(ex) + ", y1 = " + to_string(e1) + ", y2 = " + to_string(e2));
  r.lines.push_back("x1 = " + to_string(d.x1));
  r.lines.push_back("x2 = " + to_string(d.x2));
  r.lines.push_back(std::string("postcondition audit: ") + (ok ? "PASS" : "FAIL"));
  return r;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

inline ConvergenceMode mode_from(const std::string& m) {
  if (m == "nr") return ConvergenceMode::NR;
  if (m == "br") return ConvergenceMode::BR;
  if (m == "cr") return ConvergenceMode::CR;
  throw Error(ErrorCode::InvalidArgument, "mode must be nr, br or cr");
}

/// The limit a net is checked against: its recorded target, else the
/// constant part of a closed form or the last table term.
inline HomDesc default_limit(const io::NetEntry& e) {
  if (e.target) return *e.target;
  return e.net.closed_form() ? e.net.params().front() : e.net.params().back();
}

inline Report cmd_converge(const io::SpecFile& spec, const std::string& net, ConvergenceMode mode,
                           const std::optional<NbhdDesc>& u = std::nullopt, const std::optional<SetDesc>& b = std::nullopt) {
  const io::NetEntry& e = spec.net(net);
  HomDesc limit = default_limit(e);
  ModeParams p;
  p.u = u ? *u : covering_nbhd(e.net.domain(), net_homs(e.net, limit));
  p.b = b;
  ConvergenceCertificate cert = converges(mode, e.net, limit, p);
  Report r{"converge"};
  r.data["net"] = net;
  r.data["family"] = to_string(e.net.family());
  r.data["mode"] = to_string(mode);
  r.data["limit"] = io::to_json(limit);
  r.data["convergent"] = cert.convergent;
  r.lines.push_back(std::string(to_string(mode)) + " convergence of " + net + " (" + to_string(e.net.family()) +
                    ") to " + to_string(limit));
  if (mode == ConvergenceMode::NR) {
    r.data["u"] = io::to_json(*p.u);
    r.lines.push_back("U = " + to_string(*p.u));
  }
  if (mode == ConvergenceMode::BR) {
    SetDesc used = b ? *b : worst_bounded_set(e.net.domain());
    r.data["b"] = io::to_json(used);
    r.lines.push_back("B = " + to_string(used));
  }
  if (cert.cr_w) {
    r.data["w"] = io::to_json(*cert.cr_w);
    r.data["u"] = io::to_json(*cert.domain_nbhd);
    r.lines.push_back("W = " + to_string(*cert.cr_w) + ", answered by U = " + to_string(*cert.domain_nbhd));
  }
  std::size_t ext = 0;
  for (const auto& h : net_homs(e.net, limit)) ext = std::max(ext, h.extent());
  NbhdDesc rep = representative_nbhd(e.net.codomain(), ext);
  io::json checks = io::json::array();
  if (cert.convergent) {
    r.data["alpha0_formula"] = cert.alpha0_formula();
    r.lines.push_back("convergent; alpha0 = " + cert.alpha0_formula());
    for (const Rational& rad : {Rational(1), Rational(1, 10)}) {
      NbhdDesc v = rep;
      for (auto& q : v.radii) q = rad;
      v.radius = rad;
      Integer a0 = cert.alpha0(v);
      bool ok = cert.contained_at(a0, v) && cert.contained_at(a0 + 7, v);
      r.check(ok);
      checks.push_back({{"v", io::to_json(v)}, {"alpha0", a0.str()}, {"recheck", ok ? "PASS" : "FAIL"}});
      r.lines.push_back("V = " + to_string(v) + ": alpha0 = " + a0.str() + ", recheck at alpha0 and alpha0+7: " +
                        (ok ? "PASS" : "FAIL"));
    }
  } else {
    r.data["reason"] = cert.reason;
    r.data["witness_v"] = io::to_json(*cert.witness_v);
    r.lines.push_back("not convergent: " + cert.reason);
    r.lines.push_back("witness V = " + to_string(*cert.witness_v));
    for (long a : {1L, 10L, 1000L}) {
      bool escapes = !cert.contained_at(Integer(a), *cert.witness_v);
      r.check(escapes);
      checks.push_back({{"alpha", std::to_string(a)}, {"escapes", escapes}});
    }
    r.lines.push_back(std::string("witness recheck at alpha = 1, 10, 1000: ") +
                      (r.status == Status::PASS ? "PASS" : "FAIL"));
  }
  r.data["checks"] = checks;
  return r;
}

// ---------------------------------------------------------------------------
// gallery
// ---------------------------------------------------------------------------

inline Report cmd_gallery(const Gallery& g, std::uint64_t seed = 0, std::size_t suite_cases = default_suite_cases) {
  GalleryRun run = run_all(g, seed, suite_cases);
  Report r{"gallery"};
  r.check(run.pass());
  io::json cases = io::json::array();
  for (const auto& c : run.cases) {
    io::json j{{"id", c.id}, {"status", c.pass ? "PASS" : "FAIL"}, {"observed", c.observed}};
    if (!c.details.is_null()) j["witnesses"] = c.details;
    if (!c.pass) j["diffs"] = c.diffs;
    cases.push_back(j);
    std::string line = std::string(c.pass ? "PASS " : "FAIL ") + c.id + " " + c.observed.dump();
    r.lines.push_back(line);
    for (const auto& d : c.diffs) r.lines.push_back("  mismatch " + d);
  }
  io::json suites = io::json::array();
  for (const auto& s : run.suites) {
    io::json j{{"suite", s.name}, {"status", s.pass ? "PASS" : "FAIL"}, {"checked", s.checked}};
    if (!s.pass) j["witness"] = s.witness;
    suites.push_back(j);
    std::string line = "  suite " + s.name + ": " + (s.pass ? "pass" : "FAIL") + " (" + std::to_string(s.checked) + " checked)";
    if (!s.pass) line += ": " + s.witness;
    r.lines.push_back(line);
  }
  r.data["seed"] = seed;
  r.data["cases"] = cases;
  r.data["suites"] = suites;
  return r;
}

// ---------------------------------------------------------------------------
// spec-file tasks
// ---------------------------------------------------------------------------

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t cases = default_cases;
};

/// Runs one task; library errors become an ERROR report for that task.
inline Report run_task(const io::SpecFile& spec, const io::Task& t, const RunOptions& o) {
  const io::json& a = t.args;
  auto arg = [&](const char* k) { return a.at(k).get<std::string>(); };
  try {
    if (t.op == "classify") return cmd_classify(spec, arg("hom"));
    if (t.op == "posp") return cmd_posp(spec, arg("hom"), o.seed);
    if (t.op == "decompose") return cmd_decompose(spec, arg("x"), arg("y1"), arg("y2"));
    if (t.op == "converge") {
      std::optional<NbhdDesc> u;
      std::optional<SetDesc> b;
      if (a.contains("u")) u = io::nbhd_from(a.at("u"), spec.space);
      if (a.contains("b")) b = spec.set(arg("b"));
      return cmd_converge(spec, arg("net"), mode_from(arg("mode")), u, b);
    }
    if (t.op == "laws") return cmd_laws(arg("instance"), o.seed, a.contains("cases") ? a.at("cases").get<std::size_t>() : o.cases);
    if (t.op == "gallery") return cmd_gallery(Gallery::builtin(), o.seed);
    throw Error(ErrorCode::InvalidArgument, "unknown op '" + t.op + "'");
  } catch (const Error& e) {
    return error_report(t.op, e);
  }
}

/// Every task of the spec file in order, keyed by task name.
inline Report cmd_run(const io::SpecFile& spec, const RunOptions& o = {}) {
  Report r{"run"};
  io::json tasks = io::json::object();
  for (const auto& t : spec.tasks) {
    Report sub = run_task(spec, t, o);
    if (sub.status == Status::ERROR) r.status = Status::ERROR;
    else if (sub.status == Status::FAIL) r.fail();
    tasks[t.name] = {{"op", t.op}, {"status", to_string(sub.status)}, {"results", sub.data}};
    r.lines.push_back("[" + t.name + "] " + to_string(sub.status));
    for (const auto& l : sub.lines) r.lines.push_back("  " + l);
  }
  r.data["tasks"] = tasks;
  return r;
}

}  // namespace lring
