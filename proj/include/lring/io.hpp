#pragma once

#include <fstream>
#include <functional>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lring/hom_spaces.hpp"

namespace lring::io {

using json = nlohmann::ordered_json;

// Descriptors travel as JSON. Rationals are always "p/q" (or "p") strings.

[[noreturn]] inline void bad(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

inline void expect_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) bad(what + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) bad("unknown key '" + k + "' in " + what);
  }
}

inline const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) bad(what + " needs '" + key + "'");
  return j.at(key);
}

inline std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

inline std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_unsigned()) bad(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

// -- rationals and elements --------------------------------------------------

inline json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from(const json& j) {
  if (!j.is_string()) bad("rational literals are strings like \"3/4\", got " + j.dump());
  return parse_rational(j.get<std::string>());
}

inline json vector_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

inline std::vector<Rational> vector_from(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array of rationals");
  std::vector<Rational> v;
  for (const auto& e : j) v.push_back(rational_from(e));
  return v;
}

inline json to_json(const Element& x) {
  if (auto* v = std::get_if<FinVec>(&x)) return vector_json(v->entries());
  const auto& s = std::get<EvSeq>(x);
  return json{{"prefix", vector_json(s.prefix())}, {"tail", to_json(s.tail())}};
}

inline Element element_from(const json& j, const SpaceDesc& space) {
  Element x = space.zero();
  if (space.sequence()) {
    expect_keys(j, {"prefix", "tail"}, "sequence element");
    std::vector<Rational> p = j.contains("prefix") ? vector_from(j.at("prefix"), "prefix") : std::vector<Rational>{};
    x = EvSeq(std::move(p), rational_from(require(j, "tail", "sequence element")));
  } else {
    x = FinVec(vector_from(j, "element"));
  }
  check_element(space, x);
  return x;
}

inline EvSeq evseq_from(const json& j) {
  return std::get<EvSeq>(element_from(j, SpaceDesc::evseq(TopologyId::EVSEQ_PRODUCT)));
}

// -- spaces --------------------------------------------------------------------

inline const char* topology_name(TopologyId t) {
  switch (t) {
    case TopologyId::QN_BOX: return "qn_box";
    case TopologyId::EVSEQ_PRODUCT: return "evseq_product";
    case TopologyId::EVSEQ_SUPNORM: return "evseq_supnorm";
    case TopologyId::Z_DISCRETE_TOP: return "z_discrete";
  }
  return "?";
}

inline json to_json(const SpaceDesc& s) {
  json j;
  switch (s.kind) {
    case SpaceKind::QN: j["kind"] = "qn"; j["dim"] = s.dim; break;
    case SpaceKind::EVSEQ: j["kind"] = "evseq"; break;
    case SpaceKind::Z_DISCRETE: j["kind"] = "z"; break;
  }
  j["mul"] = to_string(s.mul);
  j["topology"] = topology_name(s.topology);
  return j;
}

inline SpaceDesc space_from(const json& j) {
  expect_keys(j, {"kind", "dim", "mul", "topology"}, "space");
  std::string kind = text(require(j, "kind", "space"), "space kind");
  Multiplication mul = Multiplication::POINTWISE;
  if (j.contains("mul")) {
    std::string m = text(j.at("mul"), "mul");
    if (m == "zero") mul = Multiplication::ZERO;
    else if (m != "pointwise") bad("mul must be pointwise or zero");
  }
  std::optional<TopologyId> top;
  if (j.contains("topology")) {
    std::string t = text(j.at("topology"), "topology");
    for (TopologyId id : {TopologyId::QN_BOX, TopologyId::EVSEQ_PRODUCT, TopologyId::EVSEQ_SUPNORM,
                          TopologyId::Z_DISCRETE_TOP})
      if (t == topology_name(id)) top = id;
    if (!top) bad("unknown topology '" + t + "'");
  }
  SpaceDesc s;
  if (kind == "qn") {
    s = SpaceDesc::qn(count(require(j, "dim", "qn space"), "dim"), mul);
  } else if (kind == "evseq") {
    s = SpaceDesc::evseq(top.value_or(TopologyId::EVSEQ_PRODUCT), mul);
  } else if (kind == "z") {
    s = SpaceDesc::z_discrete();
    s.mul = mul;
  } else {
    bad("space kind must be qn, evseq or z");
  }
  if (kind != "qn" && j.contains("dim")) bad("only qn spaces take a dim");
  if (top) s.topology = *top;
  try {
    return SpaceDesc::validated(s);
  } catch (const Error& e) {
    bad(std::string("invalid space: ") + e.what());
  }
}

// -- homomorphisms -----------------------------------------------------------

inline json matrix_json(const Matrix& m) {
  json a = json::array();
  for (const auto& r : m) a.push_back(vector_json(r));
  return a;
}

inline Matrix matrix_from(const json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  Matrix m;
  for (const auto& r : j) m.push_back(vector_from(r, "matrix row"));
  return m;
}

inline json to_json(const HomDesc& t) {
  switch (t.form()) {
    case HomForm::MATRIX: return json{{"form", "matrix"}, {"rows", matrix_json(t.block())}};
    case HomForm::IDENTITY: return json{{"form", "identity"}};
    case HomForm::DIAGONAL: return json{{"form", "diagonal"}, {"diag", to_json(Element(t.diag()))}};
    case HomForm::DIAG_PLUS_FINITE:
      return json{{"form", "diag_plus_finite"}, {"diag", to_json(Element(t.diag()))}, {"block", matrix_json(t.block())}};
  }
  return {};
}

using HomResolver = std::function<const HomDesc*(const std::string&)>;

/// A homomorphism given inline, or by name through resolve. The names
/// identity and zero are built in unless resolve overrides them.
inline HomDesc hom_from(const json& j, const SpaceDesc& space, const HomResolver& resolve = nullptr) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    const HomDesc* h = resolve ? resolve(name) : nullptr;
    if (!h && name == "identity") return HomDesc::identity(space);
    if (!h && name == "zero") return HomDesc::zero(space);
    if (!h) throw Error(ErrorCode::UnknownName, "no homomorphism named '" + name + "'");
    return *h;
  }
  std::string form = text(require(j, "form", "homomorphism"), "form");
  auto make = [&]() -> HomDesc {
    try {
      if (form == "matrix") {
        expect_keys(j, {"form", "rows"}, "matrix");
        return HomDesc::matrix(matrix_from(require(j, "rows", "matrix")));
      }
      if (form == "identity") {
        expect_keys(j, {"form"}, "identity");
        return HomDesc::identity(space);
      }
      if (form == "zero") {
        expect_keys(j, {"form"}, "zero");
        return HomDesc::zero(space);
      }
      if (form == "diagonal") {
        expect_keys(j, {"form", "diag"}, "diagonal");
        return HomDesc::diagonal(evseq_from(require(j, "diag", "diagonal")));
      }
      if (form == "diag_plus_finite") {
        expect_keys(j, {"form", "diag", "block"}, "diag_plus_finite");
        Matrix m = matrix_from(require(j, "block", "diag_plus_finite"));
        return HomDesc::diag_plus_finite(evseq_from(require(j, "diag", "diag_plus_finite")), m.size(), m);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      bad(std::string("invalid ") + form + ": " + e.what());
    }
    bad("unknown homomorphism form '" + form + "'");
  };
  HomDesc h = make();
  try {
    check_hom(space, h);
  } catch (const Error& e) {
    bad(e.what());
  }
  return h;
}

// -- neighborhoods and sets ----------------------------------------------------

inline json to_json(const NbhdDesc& u) {
  switch (u.topology) {
    case TopologyId::QN_BOX: return json{{"type", "box"}, {"radii", vector_json(u.radii)}};
    case TopologyId::EVSEQ_PRODUCT: return json{{"type", "product"}, {"coords", u.coords}, {"radius", to_json(u.radius)}};
    case TopologyId::EVSEQ_SUPNORM: return json{{"type", "supnorm"}, {"radius", to_json(u.radius)}};
    case TopologyId::Z_DISCRETE_TOP: return json{{"type", "discrete"}};
  }
  return {};
}

inline NbhdDesc nbhd_from(const json& j, const SpaceDesc& space) {
  std::string type = text(require(j, "type", "neighborhood"), "neighborhood type");
  NbhdDesc u;
  try {
    if (type == "box") {
      expect_keys(j, {"type", "radii"}, "box");
      u = NbhdDesc::box(vector_from(require(j, "radii", "box"), "radii"));
    } else if (type == "product") {
      expect_keys(j, {"type", "coords", "radius"}, "product neighborhood");
      std::vector<std::size_t> coords;
      for (const auto& c : require(j, "coords", "product neighborhood")) coords.push_back(count(c, "coordinate"));
      u = NbhdDesc::product(coords, rational_from(require(j, "radius", "product neighborhood")));
    } else if (type == "supnorm") {
      expect_keys(j, {"type", "radius"}, "sup-norm ball");
      u = NbhdDesc::supnorm(rational_from(require(j, "radius", "sup-norm ball")));
    } else if (type == "discrete") {
      expect_keys(j, {"type"}, "discrete neighborhood");
      u = NbhdDesc::discrete();
    } else {
      bad("unknown neighborhood type '" + type + "'");
    }
    check_nbhd(space, u);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    bad(e.what());
  }
  return u;
}

inline json to_json(const SetDesc& s) {
  struct V {
    json operator()(const SetDesc::Interval& i) const {
      return json{{"type", "interval"}, {"lo", to_json(i.lo)}, {"hi", to_json(i.hi)}};
    }
    json operator()(const SetDesc::Finite& f) const { return points("finite", f.points); }
    json operator()(const SetDesc::SolidHull& f) const { return points("solid_hull", f.points); }
    json operator()(const SetDesc::Nbhd& n) const { return json{{"type", "nbhd"}, {"nbhd", to_json(n.nbhd)}}; }
    json operator()(const SetDesc::Image& im) const {
      return json{{"type", "image"}, {"hom", to_json(*im.hom)}, {"set", to_json(*im.set)}};
    }
    json operator()(const SetDesc::Whole&) const { return json{{"type", "whole"}}; }
    json operator()(const SetDesc::Staircase&) const { return json{{"type", "staircase"}}; }
    static json points(const char* type, const std::vector<Element>& pts) {
      json a = json::array();
      for (const auto& p : pts) a.push_back(to_json(p));
      return json{{"type", type}, {"points", a}};
    }
  };
  return std::visit(V{}, s.body());
}

inline SetDesc set_from(const json& j, const SpaceDesc& space, const HomResolver& resolve = nullptr) {
  std::string type = text(require(j, "type", "set"), "set type");
  auto points = [&]() {
    std::vector<Element> pts;
    const json& a = require(j, "points", type);
    if (!a.is_array()) bad("points must be an array");
    for (const auto& p : a) pts.push_back(element_from(p, space));
    return pts;
  };
  try {
    if (type == "interval") {
      expect_keys(j, {"type", "lo", "hi"}, "interval");
      return SetDesc::interval(space, element_from(require(j, "lo", "interval"), space),
                               element_from(require(j, "hi", "interval"), space));
    }
    if (type == "finite") {
      expect_keys(j, {"type", "points"}, "finite set");
      return SetDesc::finite(space, points());
    }
    if (type == "solid_hull") {
      expect_keys(j, {"type", "points"}, "solid hull");
      return solid_hull(space, points());
    }
    if (type == "nbhd") {
      expect_keys(j, {"type", "nbhd"}, "neighborhood set");
      return SetDesc::nbhd(space, nbhd_from(require(j, "nbhd", "neighborhood set"), space));
    }
    if (type == "image") {
      expect_keys(j, {"type", "hom", "set"}, "image");
      return SetDesc::image(hom_from(require(j, "hom", "image"), space, resolve),
                            set_from(require(j, "set", "image"), space, resolve));
    }
    if (type == "whole") {
      expect_keys(j, {"type"}, "whole space");
      return SetDesc::whole(space);
    }
    if (type == "staircase") {
      expect_keys(j, {"type"}, "staircase");
      return SetDesc::staircase(space);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UnknownName) throw;
    bad(e.what());
  }
  bad("unknown set type '" + type + "'");
}

// -- nets ---------------------------------------------------------------------

inline json to_json(const HomNet& n) {
  json j{{"family", to_string(n.family())}};
  switch (n.family()) {
    case HomNet::Family::CONSTANT: j["hom"] = to_json(n.params()[0]); break;
    case HomNet::Family::AFFINE:
      j["base"] = to_json(n.params()[0]);
      j["slope"] = to_json(n.params()[1]);
      break;
    case HomNet::Family::TABLE: {
      json a = json::array();
      for (const auto& t : n.params()) a.push_back(to_json(t));
      j["terms"] = a;
      break;
    }
  }
  return j;
}

struct NetEntry {
  HomNet net;
  std::optional<HomDesc> target;
};

inline NetEntry net_from(const json& j, const SpaceDesc& domain, const SpaceDesc& codomain,
                         const HomResolver& resolve = nullptr) {
  std::string family = text(require(j, "family", "net"), "family");
  std::optional<HomDesc> target;
  auto hom = [&](const char* key) { return hom_from(require(j, key, "net"), domain, resolve); };
  if (j.contains("target")) target = hom_from(j.at("target"), domain, resolve);
  if (family == "constant") {
    expect_keys(j, {"family", "hom", "target"}, "constant net");
    return {HomNet::constant(domain, codomain, hom("hom")), target};
  }
  if (family == "affine") {
    expect_keys(j, {"family", "base", "slope", "target"}, "affine net");
    return {HomNet::affine(domain, codomain, hom("base"), hom("slope")), target};
  }
  if (family == "table") {
    expect_keys(j, {"family", "terms", "target"}, "table net");
    std::vector<HomDesc> terms;
    const json& a = require(j, "terms", "table net");
    if (!a.is_array()) bad("terms must be an array");
    for (const auto& t : a) terms.push_back(hom_from(t, domain, resolve));
    return {HomNet::table(domain, codomain, std::move(terms)), target};
  }
  bad("unknown net family '" + family + "'");
}

// -- bound functions ----------------------------------------------------------

inline json to_json(const Bound& b) { return b.infinite ? json("inf") : to_json(b.value); }

inline json to_json(const CoordBounds& b) {
  json head = json::array();
  for (const auto& x : b.head) head.push_back(to_json(x));
  json j{{"head", head}};
  if (b.tail) j["tail"] = json{{"kind", to_string(b.tail->kind)}, {"value", to_json(b.tail->value)}};
  return j;
}

// -- spec files ---------------------------------------------------------------

struct Task {
  std::string name;
  std::string op;
  json args;  // the task object itself
};

struct SpecFile {
  SpaceDesc space;
  SpaceDesc codomain;
  std::map<std::string, HomDesc> homs;
  std::map<std::string, Element> elements;
  std::map<std::string, SetDesc> sets;
  std::map<std::string, NetEntry> nets;
  std::vector<Task> tasks;

  const HomDesc& hom(const std::string& name) const {
    auto it = homs.find(name);
    if (it == homs.end()) throw Error(ErrorCode::UnknownName, "no homomorphism named '" + name + "'");
    return it->second;
  }
  const Element& element(const std::string& name) const {
    auto it = elements.find(name);
    if (it == elements.end()) throw Error(ErrorCode::UnknownName, "no element named '" + name + "'");
    return it->second;
  }
  const SetDesc& set(const std::string& name) const {
    auto it = sets.find(name);
    if (it == sets.end()) throw Error(ErrorCode::UnknownName, "no set named '" + name + "'");
    return it->second;
  }
  const NetEntry& net(const std::string& name) const {
    auto it = nets.find(name);
    if (it == nets.end()) throw Error(ErrorCode::UnknownName, "no net named '" + name + "'");
    return it->second;
  }
  HomResolver resolver() const {
    return [this](const std::string& n) -> const HomDesc* {
      auto it = homs.find(n);
      return it == homs.end() ? nullptr : &it->second;
    };
  }
};

namespace detail {

inline std::size_t line_of(const std::string& src, std::size_t offset) {
  offset = std::min(offset, src.size());
  return 1 + static_cast<std::size_t>(std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the entry reached by following the quoted keys of path in order.
inline std::size_t locate(const std::string& src, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    auto at = src.find("\"" + key + "\"", pos);
    if (at == std::string::npos) break;
    pos = at;
  }
  return line_of(src, pos);
}

}  // namespace detail

/// Task arguments: allowed keys per op, and every name must resolve.
inline void check_task(const SpecFile& spec, const Task& t) {
  const json& a = t.args;
  auto name = [&](const char* key) { return text(require(a, key, t.op + " task"), key); };
  if (t.op == "classify" || t.op == "posp") {
    expect_keys(a, {"op", "name", "hom"}, t.op + " task");
    spec.hom(name("hom"));
  } else if (t.op == "decompose") {
    expect_keys(a, {"op", "name", "x", "y1", "y2"}, "decompose task");
    for (const char* k : {"x", "y1", "y2"}) spec.element(name(k));
  } else if (t.op == "converge") {
    expect_keys(a, {"op", "name", "net", "mode", "u", "b"}, "converge task");
    spec.net(name("net"));
    std::string m = name("mode");
    if (m != "nr" && m != "br" && m != "cr") bad("mode must be nr, br or cr");
    if (a.contains("u")) nbhd_from(a.at("u"), spec.space);
    if (a.contains("b")) spec.set(text(a.at("b"), "b"));
  } else if (t.op == "laws") {
    expect_keys(a, {"op", "name", "instance", "cases"}, "laws task");
    name("instance");
    if (a.contains("cases")) count(a.at("cases"), "cases");
  } else if (t.op == "gallery") {
    expect_keys(a, {"op", "name"}, "gallery task");
  } else {
    bad("unknown op '" + t.op + "'");
  }
}

inline SpecFile parse_spec(const std::string& src) {
  json doc;
  try {
    doc = json::parse(src);
  } catch (const json::parse_error& e) {
    bad("line " + std::to_string(detail::line_of(src, e.byte == 0 ? 0 : e.byte - 1)) + ", section <document>: " +
        e.what());
  }
  auto section_error = [&](const std::vector<std::string>& path, const Error& e) -> Error {
    std::string where;
    for (const auto& p : path) where += (where.empty() ? "" : ".") + p;
    return Error(e.code() == ErrorCode::UnknownName ? ErrorCode::UnknownName : ErrorCode::ParseError,
                 "line " + std::to_string(detail::locate(src, path)) + ", section " + where + ": " + e.what());
  };
  auto guarded = [&](const std::vector<std::string>& path, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw section_error(path, e);
    } catch (const json::exception& e) {
      throw section_error(path, Error(ErrorCode::ParseError, e.what()));
    }
  };
  SpecFile spec;
  guarded({"<document>"}, [&] {
    expect_keys(doc, {"space", "codomain", "homs", "elements", "sets", "nets", "tasks"}, "spec file");
  });
  guarded({"space"}, [&] { spec.space = space_from(require(doc, "space", "spec file")); });
  spec.codomain = spec.space;
  if (doc.contains("codomain")) guarded({"codomain"}, [&] {
      spec.codomain = space_from(doc.at("codomain"));
      if (spec.codomain.kind != spec.space.kind || spec.codomain.dim != spec.space.dim)
        bad("codomain must hold the same kind of element as the space");
    });
  auto entries = [&](const char* section, auto&& fn) {
    if (!doc.contains(section)) return;
    guarded({section}, [&] {
      if (!doc.at(section).is_object()) bad(std::string(section) + " must be an object of named entries");
    });
    for (const auto& [name, value] : doc.at(section).items()) guarded({section, name}, [&] { fn(name, value); });
  };
  entries("homs", [&](const std::string& n, const json& v) { spec.homs.emplace(n, hom_from(v, spec.space, spec.resolver())); });
  spec.homs.try_emplace("identity", HomDesc::identity(spec.space));
  spec.homs.try_emplace("zero", HomDesc::zero(spec.space));
  entries("elements", [&](const std::string& n, const json& v) { spec.elements.emplace(n, element_from(v, spec.space)); });
  entries("sets", [&](const std::string& n, const json& v) { spec.sets.emplace(n, set_from(v, spec.space, spec.resolver())); });
  entries("nets", [&](const std::string& n, const json& v) {
    spec.nets.emplace(n, net_from(v, spec.space, spec.codomain, spec.resolver()));
  });
  if (doc.contains("tasks")) {
    const json& tasks = doc.at("tasks");
    guarded({"tasks"}, [&] {
      if (!tasks.is_array()) bad("tasks must be an array");
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      guarded({"tasks"}, [&] {
        const json& t = tasks.at(i);
        if (!t.is_object()) bad("task " + std::to_string(i) + " must be an object");
        Task task;
        task.op = text(require(t, "op", "task"), "op");
        task.name = t.contains("name") ? text(t.at("name"), "task name") : task.op + "_" + std::to_string(i);
        task.args = t;
        check_task(spec, task);
        spec.tasks.push_back(std::move(task));
      });
    }
  }
  return spec;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpecFile load_spec(const std::string& path) { return parse_spec(read_file(path)); }

}  // namespace lring::io
