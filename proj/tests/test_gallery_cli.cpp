#include <sys/wait.h>

#include <cstdio>
#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace lring;

namespace {

const std::string DATA = LRING_DATA_DIR;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::SoundnessBug;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error raised";
  return "";
}

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  Run r;
  std::string cmd = std::string(LRING_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

const char* MINIMAL = R"({
  "space": {"kind": "qn", "dim": 2},
  "homs": {"T": {"form": "matrix", "rows": [["1", "-2"], ["-3", "4"]]}},
  "elements": {"x": ["1", "1"], "y1": ["2", "0"], "y2": ["0", "2"]}
})";

}  // namespace

TEST(Gallery, EveryCasePasses) {
  Gallery g = Gallery::builtin();
  ASSERT_EQ(g.cases().size(), 4u);
  for (const auto& c : g.cases()) {
    auto r = g.run_case(c.id);
    EXPECT_TRUE(r.pass) << c.id << ": " << (r.diffs.empty() ? "" : r.diffs.front());
    EXPECT_FALSE(r.narrative.empty());
  }
}

TEST(Gallery, EmbeddedCopyMatchesDataFile) {
  auto file = io::json::parse(io::read_file(DATA + "/gallery_expectations.json"));
  auto embedded = io::json::parse(detail::builtin_gallery_json);
  EXPECT_EQ(file, embedded);
}

TEST(Gallery, CaseAAgreesWithDirectClassification) {
  auto r = Gallery::builtin().run_case("A_product_identity");
  SpaceDesc prod = SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT);
  ClassLabel c = classify(HomDesc::identity(prod), prod);
  EXPECT_EQ(r.observed["nr"]["ring"], c.ring.nr.holds);
  EXPECT_EQ(r.observed["br"]["group"], c.group.br.holds);
  EXPECT_EQ(r.observed["continuous"], c.continuous.holds);
}

TEST(Gallery, CaseDMatchesHandMultiplication) {
  auto r = Gallery::builtin().run_case("D_fring_failure_matrix");
  // E21 * E11 = E21 with the row-major layout (a b / c d).
  oracle::Vec e11{1, 0, 0, 0}, e21{0, 0, 1, 0};
  oracle::Vec ca{e21[0] * e11[0] + e21[1] * e11[2], e21[0] * e11[1] + e21[1] * e11[3],
                 e21[2] * e11[0] + e21[3] * e11[2], e21[2] * e11[1] + e21[3] * e11[3]};
  io::json expect = io::json::array();
  for (std::size_t i = 0; i < 4; ++i) expect.push_back(to_string(std::min(ca[i], e21[i])));
  EXPECT_EQ(r.observed["ca_meet_b"], expect);
  EXPECT_EQ(r.observed["f_ring"], false);
}

TEST(Gallery, RegistryErrors) {
  Gallery g = Gallery::builtin();
  EXPECT_EQ(code_of([&] { g.run_case("Z_missing"); }), ErrorCode::UnknownCase);
  EXPECT_EQ(code_of([] { run_all(Gallery{}); }), ErrorCode::EmptyRegistry);
  EXPECT_EQ(code_of([] { Gallery::parse(R"({"cases": [{"id": "a", "setup": {}, "expect": {}},
                                                       {"id": "a", "setup": {}, "expect": {}}]})"); }),
            ErrorCode::ParseError);
}

TEST(Gallery, CorruptedExpectationIsNamed) {
  auto doc = io::json::parse(detail::builtin_gallery_json);
  doc["cases"][0]["expect"]["br"]["group"] = false;
  Gallery g = Gallery::from_json(doc);
  auto r = g.run_case("A_product_identity");
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.diffs.size(), 1u);
  EXPECT_NE(r.diffs[0].find("br.group"), std::string::npos) << r.diffs[0];
  Report rep = cmd_gallery(g, 0, 0);
  EXPECT_EQ(rep.status, Status::FAIL);
  EXPECT_EQ(rep.exit_code(), 1);
}

TEST(Io, RoundTrips) {
  SpaceDesc q2 = SpaceDesc::qn(2), prod = SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT);
  Sampler rng(9);
  for (int i = 0; i < 100; ++i) {
    HomDesc a = rng.hom(q2), b = rng.hom(prod);
    ASSERT_EQ(io::hom_from(io::to_json(a), q2), a);
    ASSERT_EQ(io::hom_from(io::to_json(b), prod), b);
    Element x = rng.element(prod);
    ASSERT_EQ(io::element_from(io::to_json(x), prod), x);
  }
  for (const auto& u : {NbhdDesc::product({0, 3}, Rational(2, 3)), NbhdDesc::supnorm(5)}) {
    SpaceDesc sp = u.topology == TopologyId::EVSEQ_SUPNORM ? SpaceDesc::evseq(TopologyId::EVSEQ_SUPNORM) : prod;
    EXPECT_EQ(io::nbhd_from(io::to_json(u), sp), u);
  }
  SetDesc s = SetDesc::interval(q2, FinVec({-1, 0}), FinVec({2, Rational(1, 3)}));
  EXPECT_EQ(io::set_from(io::to_json(s), q2), s);
  SetDesc h = solid_hull(prod, {EvSeq({1}, -2)});
  EXPECT_EQ(io::set_from(io::to_json(h), prod), h);
  HomNet n = HomNet::table(q2, q2, {HomDesc::identity(q2), HomDesc::zero(q2)});
  EXPECT_EQ(io::net_from(io::to_json(n), q2, q2).net, n);
  EXPECT_EQ(io::to_json(Rational(-6, 4)), "-3/2");
}

TEST(Io, ExampleSpecsLoad) {
  auto q = io::load_spec(DATA + "/example_q2.json");
  EXPECT_EQ(q.tasks.size(), 7u);
  EXPECT_EQ(q.hom("T"), HomDesc::matrix({{1, -2}, {-3, 4}}));
  auto s = io::load_spec(DATA + "/example_evseq.json");
  EXPECT_EQ(s.hom("identity"), HomDesc::identity(s.space));
  EXPECT_EQ(s.net("to_zero").target, HomDesc::zero(s.space));
}

TEST(Io, ParseErrorsCarryLineAndSection) {
  std::string bad_rows = "{\n  \"space\": {\"kind\": \"qn\", \"dim\": 2},\n  \"homs\": {\n    \"T\": {\"form\": \"matrix\", "
                         "\"rows\": [[1, 2], [3, 4]]}\n  }\n}";
  std::string m = message_of([&] { io::parse_spec(bad_rows); });
  EXPECT_NE(m.find("line 4"), std::string::npos) << m;
  EXPECT_NE(m.find("section homs.T"), std::string::npos) << m;
  EXPECT_EQ(code_of([&] { io::parse_spec(bad_rows); }), ErrorCode::ParseError);

  std::string broken = "{\n  \"space\": {\"kind\": \"qn\",\n  \"dim\": 2\n";
  std::string mb = message_of([&] { io::parse_spec(broken); });
  EXPECT_NE(mb.find("section <document>"), std::string::npos) << mb;
}

TEST(Io, UnknownKeysAndNames) {
  EXPECT_EQ(code_of([] { io::parse_spec(R"({"space": {"kind": "qn", "dim": 2}, "extra": 1})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_spec(R"({"space": {"kind": "qn", "dim": 2, "colour": "red"}})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              io::parse_spec(R"({"space": {"kind": "qn", "dim": 2}, "tasks": [{"op": "posp", "hom": "nope"}]})");
            }),
            ErrorCode::UnknownName);
  EXPECT_EQ(code_of([] {
              io::parse_spec(R"({"space": {"kind": "qn", "dim": 2}, "tasks": [{"op": "posp", "hom": "zero", "seed": 3}]})");
            }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_spec(R"({"space": {"kind": "qn", "dim": 2}, "tasks": [{"op": "fly"}]})"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_spec(R"({"space": {"kind": "qn", "dim": 2}, "homs": {"T": "S"}})"); }),
            ErrorCode::UnknownName);
}

TEST(Commands, PositivePartReport) {
  auto spec = io::parse_spec(MINIMAL);
  Report r = cmd_posp(spec, "T");
  EXPECT_EQ(r.status, Status::PASS);
  EXPECT_EQ(r.data["oracle_agreement"], "200/200");
  EXPECT_EQ(io::hom_from(r.data["positive_part"], spec.space), HomDesc::matrix({{1, 0}, {0, 4}}));
  EXPECT_NE(r.text().find("oracle agreement: 200/200"), std::string::npos);
}

TEST(Commands, DecomposeReport) {
  auto spec = io::parse_spec(MINIMAL);
  Report r = cmd_decompose(spec, "x", "y1", "y2");
  EXPECT_EQ(r.status, Status::PASS);
  EXPECT_EQ(r.data["x1"], io::json::parse(R"(["1", "0"])"));
  EXPECT_EQ(r.data["x2"], io::json::parse(R"(["0", "1"])"));
  EXPECT_NE(r.text().find("postcondition audit: PASS"), std::string::npos);
  Report bad = run_task(spec, {"d", "decompose", {{"op", "decompose"}, {"x", "y1"}, {"y1", "y2"}, {"y2", "y2"}}}, {});
  EXPECT_EQ(bad.status, Status::ERROR);
  EXPECT_EQ(bad.data["error"]["code"], "DecompositionPrereqViolated");
}

TEST(Commands, LawsReportOnMatrixRing) {
  Report r = cmd_laws("matrix2_entrywise", 0, 50);
  EXPECT_EQ(r.status, Status::FAIL);
  EXPECT_EQ(r.exit_code(), 1);
  bool saw = false;
  for (const auto& l : r.data["laws"])
    if (l["law"] == "f_ring") {
      saw = true;
      EXPECT_EQ(l["status"], "FAIL");
    } else {
      EXPECT_EQ(l["status"], "PASS") << l.dump();
    }
  EXPECT_TRUE(saw);
  EXPECT_EQ(cmd_laws("q3_pointwise", 0, 50).status, Status::PASS);
}

TEST(Commands, ClassifyMatchesGalleryCaseA) {
  auto spec = io::parse_spec(R"({"space": {"kind": "evseq", "topology": "evseq_product"}})");
  Report r = cmd_classify(spec, "identity");
  EXPECT_EQ(r.status, Status::PASS);
  auto a = Gallery::builtin().run_case("A_product_identity");
  EXPECT_EQ(r.data["label"], a.observed);
}

TEST(Commands, ConvergeReports) {
  auto spec = io::load_spec(DATA + "/example_evseq.json");
  Report ok = cmd_converge(spec, "to_zero", ConvergenceMode::BR);
  EXPECT_EQ(ok.status, Status::PASS);
  EXPECT_TRUE(ok.data["convergent"].get<bool>());
  Report stuck = cmd_converge(spec, "stuck", ConvergenceMode::NR, NbhdDesc::product({0}, 1));
  EXPECT_EQ(stuck.status, Status::PASS);
  EXPECT_FALSE(stuck.data["convergent"].get<bool>());
  EXPECT_EQ(io::nbhd_from(stuck.data["witness_v"], spec.space), NbhdDesc::product({1}, 1));
}

TEST(Commands, RunKeysTasksByName) {
  auto spec = io::load_spec(DATA + "/example_q2.json");
  Report r = cmd_run(spec, {0, 100});
  EXPECT_EQ(r.status, Status::PASS) << r.text();
  EXPECT_EQ(r.data["tasks"].size(), 7u);
  EXPECT_EQ(r.data["tasks"]["posp_T"]["status"], "PASS");
  EXPECT_EQ(r.data["tasks"]["br_affine"]["results"]["checks"][0]["alpha0"], "5");
}

TEST(Commands, Determinism) {
  EXPECT_EQ(cmd_laws("evseq_pointwise", 5, 100).machine(), cmd_laws("evseq_pointwise", 5, 100).machine());
  EXPECT_EQ(cmd_gallery(Gallery::builtin(), 3, 10).machine(), cmd_gallery(Gallery::builtin(), 3, 10).machine());
  auto spec = io::load_spec(DATA + "/example_q2.json");
  EXPECT_EQ(cmd_run(spec, {2, 50}).text(), cmd_run(spec, {2, 50}).text());
}

TEST(Cli, ExitCodesAndFormats) {
  auto laws = cli("laws --instance q2_pointwise --cases 50");
  EXPECT_EQ(laws.status, 0);
  EXPECT_NE(laws.out.find("RESULT: PASS"), std::string::npos);

  auto fail = cli("laws --instance matrix2_entrywise --cases 50 --format machine");
  EXPECT_EQ(fail.status, 1);
  EXPECT_EQ(io::json::parse(fail.out)["status"], "FAIL");

  auto err = cli("laws --instance nowhere");
  EXPECT_EQ(err.status, 2);
  EXPECT_NE(err.out.find("UnknownInstance"), std::string::npos);

  EXPECT_EQ(cli("classify --hom T").status, 2);
  EXPECT_EQ(cli("bogus").status, 2);

  auto posp = cli("posp --spec " + DATA + "/example_q2.json --hom T");
  EXPECT_EQ(posp.status, 0);
  EXPECT_NE(posp.out.find("oracle agreement: 200/200"), std::string::npos);

  auto conv = cli("converge --spec " + DATA + "/example_evseq.json --net stuck --mode cr --format machine");
  EXPECT_EQ(conv.status, 0);
  EXPECT_FALSE(io::json::parse(conv.out)["results"]["convergent"].get<bool>());
}

TEST(Cli, GalleryIsByteStable) {
  auto a = cli("gallery --format machine --seed 11");
  auto b = cli("gallery --format machine --seed 11");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto file = cli("gallery --expectations " + DATA + "/gallery_expectations.json --format machine --seed 11");
  EXPECT_EQ(file.out, a.out);
}
