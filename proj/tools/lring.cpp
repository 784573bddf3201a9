#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lring/lring.hpp"

namespace {

struct Options {
  std::string spec;
  std::uint64_t seed = 0;
  std::size_t cases = lring::default_cases;
  std::string mode = "nr";
  std::string format = "text";
  std::string instance;
  std::string hom;
  std::string net;
  std::string x, y1, y2;
  std::string expectations;
};

lring::io::SpecFile need_spec(const Options& o) {
  if (o.spec.empty()) throw lring::Error(lring::ErrorCode::InvalidArgument, "this command needs --spec");
  return lring::io::load_spec(o.spec);
}

int emit(const lring::Report& r, const Options& o) {
  std::cout << (o.format == "machine" ? r.machine() : r.text());
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact lattice-ordered ring and homomorphism toolkit"};
  app.require_subcommand(1);
  app.add_option("--spec", o.spec, "spec file (JSON)");
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--cases", o.cases, "random cases per law")->capture_default_str();
  app.add_option("--mode", o.mode, "convergence mode")->check(CLI::IsMember({"nr", "br", "cr"}))->capture_default_str();
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "machine"}))->capture_default_str();
  app.fallthrough();

  auto* laws = app.add_subcommand("laws", "lattice and ring laws on a shipped instance");
  laws->add_option("--instance", o.instance, "instance name")->required();
  auto* classify = app.add_subcommand("classify", "boundedness and continuity label of a homomorphism");
  classify->add_option("--hom", o.hom, "homomorphism name")->required();
  auto* posp = app.add_subcommand("posp", "positive part with oracle cross-check");
  posp->add_option("--hom", o.hom, "homomorphism name")->required();
  auto* decompose = app.add_subcommand("decompose", "decompose x under |x| <= |y1| + |y2|");
  decompose->add_option("--x", o.x, "element name")->required();
  decompose->add_option("--y1", o.y1, "element name")->required();
  decompose->add_option("--y2", o.y2, "element name")->required();
  auto* converge = app.add_subcommand("converge", "convergence certificate for a net");
  converge->add_option("--net", o.net, "net name")->required();
  auto* gallery = app.add_subcommand("gallery", "run the gallery cases and invariant suites");
  gallery->add_option("--expectations", o.expectations, "gallery expectations file");
  auto* run = app.add_subcommand("run", "run every task of a spec file");
  for (auto* sub : {laws, classify, posp, decompose, converge, gallery, run}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*laws) return emit(lring::cmd_laws(o.instance, o.seed, o.cases), o);
    if (*classify) return emit(lring::cmd_classify(need_spec(o), o.hom), o);
    if (*posp) return emit(lring::cmd_posp(need_spec(o), o.hom, o.seed), o);
    if (*decompose) return emit(lring::cmd_decompose(need_spec(o), o.x, o.y1, o.y2), o);
    if (*converge) return emit(lring::cmd_converge(need_spec(o), o.net, lring::mode_from(o.mode)), o);
    if (*gallery) {
      auto g = o.expectations.empty() ? lring::Gallery::builtin() : lring::Gallery::load(o.expectations);
      return emit(lring::cmd_gallery(g, o.seed), o);
    }
    if (*run) return emit(lring::cmd_run(need_spec(o), {o.seed, o.cases}), o);
  } catch (const lring::Error& e) {
    return emit(lring::error_report(app.get_subcommands().front()->get_name(), e), o);
  }
  return 2;
}
