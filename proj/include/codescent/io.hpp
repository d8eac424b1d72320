#ifndef CODESCENT_IO_HPP
#define CODESCENT_IO_HPP

// Instance files (JSON), reports and DOT export. Parse errors name the file,
// the JSON path and the offending key.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "codescent/codescent.hpp"
#include "codescent/diagram.hpp"
#include "codescent/fincat.hpp"
#include "codescent/surgery.hpp"

namespace codescent {

using Json = nlohmann::ordered_json;

struct InstanceFile {
  std::uint32_t prime = 2;
  CatPair pair;
  Diagram x;
  std::vector<ObjId> focus;
  std::optional<Strategy> strategy;
  std::optional<int> cutoff;
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw Error(ErrorKind::Parse, file_ + ": " + (path.empty() ? "/" : path) + ": " + what);
  }

  const Json& member(const Json& j, const std::string& path, const std::string& key) const {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, "missing key '" + key + "'");
    return *it;
  }
  const Json* optional_member(const Json& j, const std::string& path, const std::string& key) const {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }
  std::string str(const Json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }
  std::int64_t integer(const Json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
  }
  std::vector<std::string> strings(const Json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], path + "/" + std::to_string(i)));
    return out;
  }
  std::vector<std::int64_t> integers(const Json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], path + "/" + std::to_string(i)));
    return out;
  }

  /// Runs f, converting library errors into located parse errors.
  template <class F>
  auto located(const std::string& path, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      std::string msg = e.what();
      const std::string prefix = std::string(to_string(e.kind())) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
      throw Error(e.kind(), file_ + ": " + path + ": " + msg);
    }
  }

  RawCategory category(const Json& j, const std::string& path) const {
    RawCategory raw;
    raw.objects = strings(member(j, path, "objects"), path + "/objects");
    const Json& mors = member(j, path, "morphisms");
    if (!mors.is_array()) fail(path + "/morphisms", "expected an array");
    for (std::size_t i = 0; i < mors.size(); ++i) {
      const std::string p = path + "/morphisms/" + std::to_string(i);
      raw.morphisms.push_back({str(member(mors[i], p, "name"), p + "/name"), str(member(mors[i], p, "source"), p + "/source"),
                               str(member(mors[i], p, "target"), p + "/target")});
    }
    const Json& ids = member(j, path, "identities");
    if (!ids.is_object()) fail(path + "/identities", "expected an object");
    for (auto it = ids.begin(); it != ids.end(); ++it) raw.identities[it.key()] = str(it.value(), path + "/identities/" + it.key());
    if (const Json* comp = optional_member(j, path, "composition")) {
      if (!comp->is_array()) fail(path + "/composition", "expected an array");
      for (std::size_t i = 0; i < comp->size(); ++i) {
        const std::string p = path + "/composition/" + std::to_string(i);
        auto t = strings((*comp)[i], p);
        if (t.size() != 3) fail(p, "expected [g, f, g o f]");
        raw.composition.push_back({t[0], t[1], t[2]});
      }
    }
    return raw;
  }

  ChainComplex complex(const Json& j, const std::string& path, std::uint32_t p) const {
    const int lo = static_cast<int>(integer(member(j, path, "lo"), path + "/lo"));
    auto raw_dims = integers(member(j, path, "dims"), path + "/dims");
    std::vector<std::size_t> dims;
    for (auto d : raw_dims) {
      if (d < 0) fail(path + "/dims", "negative dimension");
      dims.push_back(static_cast<std::size_t>(d));
    }
    std::vector<Matrix> diffs;
    const Json* dj = optional_member(j, path, "differentials");
    const std::size_t expected = dims.empty() ? 0 : dims.size() - 1;
    if (dj) {
      if (!dj->is_array() || dj->size() != expected) {
        fail(path + "/differentials", "expected " + std::to_string(expected) + " matrices");
      }
      for (std::size_t k = 0; k < expected; ++k) {
        const std::string mp = path + "/differentials/" + std::to_string(k);
        auto flat = integers((*dj)[k], mp);
        if (flat.size() != dims[k] * dims[k + 1]) {
          fail(mp, "expected " + std::to_string(dims[k] * dims[k + 1]) + " entries for a " + std::to_string(dims[k]) +
                       "x" + std::to_string(dims[k + 1]) + " matrix");
        }
        diffs.push_back(Matrix::from_flat(dims[k], dims[k + 1], p, flat));
      }
    } else {
      for (std::size_t k = 0; k < expected; ++k) diffs.emplace_back(dims[k], dims[k + 1], p);
    }
    return located(path, [&] { return ChainComplex::validate(p, lo, dims, diffs); });
  }

  /// Components are listed per degree of the source as declared in the file
  /// (lo, lo + 1, ...), before zero end degrees are trimmed.
  ChainMap chain_map(const Json& j, const std::string& path, const ChainComplex& s, const ChainComplex& t,
                     std::pair<int, std::size_t> declared, std::uint32_t p) const {
    const Json& comps = member(j, path, "components");
    const auto [lo, len] = declared;
    if (!comps.is_array() || comps.size() != len) {
      fail(path + "/components", "expected " + std::to_string(len) + " matrices, one per source degree");
    }
    std::map<int, Matrix> blocks;
    for (std::size_t k = 0; k < len; ++k) {
      const int n = lo + static_cast<int>(k);
      const std::string mp = path + "/components/" + std::to_string(k);
      auto flat = integers(comps[k], mp);
      if (flat.size() != t.dim(n) * s.dim(n)) {
        fail(mp, "expected " + std::to_string(t.dim(n) * s.dim(n)) + " entries for degree " + std::to_string(n));
      }
      blocks.emplace(n, Matrix::from_flat(t.dim(n), s.dim(n), p, flat));
    }
    return located(path, [&] {
      return ChainMap::validate(s, t, [&](int n) {
        auto it = blocks.find(n);
        return it != blocks.end() ? it->second : Matrix(t.dim(n), s.dim(n), p);
      });
    });
  }

  Diagram diagram(const Json* j, const std::string& path, const CatPtr& cat, std::uint32_t p) const {
    const FinCat& c = *cat;
    std::vector<ChainComplex> values(c.object_count(), ChainComplex(p));
    std::vector<std::pair<int, std::size_t>> declared(c.object_count(), {0, 0});
    std::map<MorId, ChainMap> maps;
    if (j) {
      if (const Json* objs = optional_member(*j, path, "objects")) {
        if (!objs->is_object()) fail(path + "/objects", "expected an object");
        for (auto it = objs->begin(); it != objs->end(); ++it) {
          const std::string op = path + "/objects/" + it.key();
          auto o = c.find_object(it.key());
          if (!o) fail(op, "unknown object '" + it.key() + "'");
          values[*o] = complex(it.value(), op, p);
          declared[*o] = {static_cast<int>(it.value()["lo"].get<std::int64_t>()), it.value()["dims"].size()};
        }
      }
      if (const Json* mors = optional_member(*j, path, "morphisms")) {
        if (!mors->is_object()) fail(path + "/morphisms", "expected an object");
        for (auto it = mors->begin(); it != mors->end(); ++it) {
          const std::string mp = path + "/morphisms/" + it.key();
          auto m = c.find_morphism(it.key());
          if (!m) fail(mp, "unknown morphism '" + it.key() + "'");
          maps[*m] = chain_map(it.value(), mp, values[c.source(*m)], values[c.target(*m)], declared[c.source(*m)], p);
        }
      }
    }
    // Morphisms between zero complexes carry no data and may be omitted.
    for (MorId m = 0; m < c.morphism_count(); ++m) {
      if (maps.count(m) || c.is_identity(m)) continue;
      if (values[c.source(m)].is_zero() || values[c.target(m)].is_zero()) {
        maps[m] = ChainMap::zero(values[c.source(m)], values[c.target(m)]);
      }
    }
    return located(path.empty() ? "/" : path, [&] { return Diagram::from_generators(cat, p, values, maps); });
  }

  std::uint32_t prime(const Json& root) const {
    const Json* pj = optional_member(root, "", "prime");
    if (!pj) return 2;
    auto v = integer(*pj, "/prime");
    if (v < 2 || v >= (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(v))) fail("/prime", "not a prime below 2^31");
    return static_cast<std::uint32_t>(v);
  }

  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

inline Json read_json(const std::string& file, const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, file + ": malformed JSON: " + e.what());
  }
}

inline std::string slurp(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Parse, file + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline InstanceFile parse_instance(const Json& root, const std::string& file = "<input>") {
  detail::Reader r(file);
  if (!root.is_object()) r.fail("", "expected an object");
  InstanceFile inst;
  inst.prime = r.prime(root);
  RawCategory raw = r.category(r.member(root, "", "category"), "/category");
  CatPtr cat = r.located("/category", [&] { return make_cat(FinCat::validate(raw)); });
  std::vector<std::string> dset;
  if (const Json* dj = r.optional_member(root, "", "dset")) dset = r.strings(*dj, "/dset");
  inst.pair = r.located("/dset", [&] { return CatPair::make(cat, dset); });
  inst.x = r.diagram(r.optional_member(root, "", "diagram"), "/diagram", cat, inst.prime);
  if (const Json* fj = r.optional_member(root, "", "focus")) {
    auto names = fj->is_string() ? std::vector<std::string>{r.str(*fj, "/focus")} : r.strings(*fj, "/focus");
    for (const auto& n : names) inst.focus.push_back(r.located("/focus", [&] { return cat->lookup_object(n); }));
  }
  if (const Json* sj = r.optional_member(root, "", "strategy")) {
    std::string s = r.str(*sj, "/strategy");
    if (s == "bar") inst.strategy = Strategy::Bar;
    else if (s == "ind-base") inst.strategy = Strategy::IndBase;
    else r.fail("/strategy", "unknown strategy '" + s + "' (expected bar or ind-base)");
  }
  if (const Json* cj = r.optional_member(root, "", "cutoff")) {
    auto v = r.integer(*cj, "/cutoff");
    if (v < 0) r.fail("/cutoff", "cutoff must be non-negative");
    inst.cutoff = static_cast<int>(v);
  }
  return inst;
}

inline InstanceFile load_instance(const std::string& file) {
  return parse_instance(detail::read_json(file, detail::slurp(file)), file);
}

/// A functor into `target`; its source comes with an optional dset and diagram.
struct FunctorFile {
  CatPair source;
  std::optional<Diagram> diagram;
  FunctorData phi;
};

inline FunctorFile parse_functor(const Json& root, const CatPtr& target, std::uint32_t prime,
                                 const std::string& file = "<input>") {
  detail::Reader r(file);
  const Json& src = r.member(root, "", "source");
  RawCategory raw = r.category(r.member(src, "/source", "category"), "/source/category");
  CatPtr cat = r.located("/source/category", [&] { return make_cat(FinCat::validate(raw)); });
  std::vector<std::string> dset;
  if (const Json* dj = r.optional_member(src, "/source", "dset")) dset = r.strings(*dj, "/source/dset");
  FunctorFile out;
  out.source = r.located("/source/dset", [&] { return CatPair::make(cat, dset); });
  if (const Json* dj = r.optional_member(src, "/source", "diagram")) {
    out.diagram = r.diagram(dj, "/source/diagram", cat, prime);
  }
  std::vector<ObjId> om(cat->object_count());
  std::vector<MorId> mm(cat->morphism_count());
  std::vector<bool> seen_o(om.size(), false), seen_m(mm.size(), false);
  const Json& oj = r.member(root, "", "object_map");
  if (!oj.is_object()) r.fail("/object_map", "expected an object");
  for (auto it = oj.begin(); it != oj.end(); ++it) {
    const std::string p = "/object_map/" + it.key();
    auto a = cat->find_object(it.key());
    if (!a) r.fail(p, "unknown source object '" + it.key() + "'");
    auto b = target->find_object(r.str(it.value(), p));
    if (!b) r.fail(p, "unknown target object '" + it.value().get<std::string>() + "'");
    om[*a] = *b;
    seen_o[*a] = true;
  }
  for (ObjId a = 0; a < om.size(); ++a)
    if (!seen_o[a]) r.fail("/object_map", "missing key '" + cat->object_name(a) + "'");
  if (const Json* mj = r.optional_member(root, "", "morphism_map")) {
    if (!mj->is_object()) r.fail("/morphism_map", "expected an object");
    for (auto it = mj->begin(); it != mj->end(); ++it) {
      const std::string p = "/morphism_map/" + it.key();
      auto m = cat->find_morphism(it.key());
      if (!m) r.fail(p, "unknown source morphism '" + it.key() + "'");
      auto t = target->find_morphism(r.str(it.value(), p));
      if (!t) r.fail(p, "unknown target morphism '" + it.value().get<std::string>() + "'");
      mm[*m] = *t;
      seen_m[*m] = true;
    }
  }
  for (MorId m = 0; m < mm.size(); ++m) {
    if (seen_m[m]) continue;
    if (cat->is_identity(m)) {
      mm[m] = target->identity(om[cat->source(m)]);
    } else {
      r.fail("/morphism_map", "missing key '" + cat->morphism_name(m) + "'");
    }
  }
  out.phi = r.located("/", [&] { return FunctorData::validate(cat, target, om, mm); });
  return out;
}

inline FunctorFile load_functor(const std::string& file, const CatPtr& target, std::uint32_t prime) {
  return parse_functor(detail::read_json(file, detail::slurp(file)), target, prime, file);
}

// ---------------------------------------------------------------------------
// Serialization.

inline Json to_json(const FinCat& c) {
  RawCategory raw = c.raw();
  Json j;
  j["objects"] = raw.objects;
  j["morphisms"] = Json::array();
  for (const auto& m : raw.morphisms) j["morphisms"].push_back({{"name", m.name}, {"source", m.source}, {"target", m.target}});
  j["identities"] = Json::object();
  for (const auto& o : raw.objects) j["identities"][o] = raw.identities.at(o);
  j["composition"] = Json::array();
  for (const auto& t : raw.composition) j["composition"].push_back({t.g, t.f, t.result});
  return j;
}

inline Json flat(const Matrix& m) {
  Json a = Json::array();
  for (auto v : m.data()) a.push_back(v);
  return a;
}

inline Json to_json(const ChainComplex& c) {
  Json j;
  j["lo"] = c.is_zero() ? 0 : c.lo();
  j["dims"] = Json::array();
  j["differentials"] = Json::array();
  if (c.is_zero()) return j;
  for (int n = c.lo(); n <= c.hi(); ++n) j["dims"].push_back(c.dim(n));
  for (int n = c.lo() + 1; n <= c.hi(); ++n) j["differentials"].push_back(flat(c.d(n)));
  return j;
}

inline Json to_json(const Diagram& x) {
  const FinCat& c = x.category();
  Json j;
  j["objects"] = Json::object();
  for (ObjId o = 0; o < c.object_count(); ++o) j["objects"][c.object_name(o)] = to_json(x.at(o));
  j["morphisms"] = Json::object();
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    const ChainMap& f = x.on(m);
    Json comps = Json::array();
    if (!f.source().is_zero())
      for (int n = f.source().lo(); n <= f.source().hi(); ++n) comps.push_back(flat(f.at(n)));
    j["morphisms"][c.morphism_name(m)] = {{"components", comps}};
  }
  return j;
}

inline Json to_json(const InstanceFile& inst) {
  Json j;
  j["prime"] = inst.prime;
  j["category"] = to_json(*inst.pair.cat);
  j["dset"] = object_names(*inst.pair.cat, inst.pair.dset);
  j["diagram"] = to_json(inst.x);
  if (!inst.focus.empty()) {
    Json f = Json::array();
    for (auto o : inst.focus) f.push_back(inst.pair.cat->object_name(o));
    j["focus"] = f;
  }
  if (inst.strategy) j["strategy"] = to_string(*inst.strategy);
  if (inst.cutoff) j["cutoff"] = *inst.cutoff;
  return j;
}

inline InstanceFile make_instance_file(const Instance& in, std::uint32_t prime) {
  InstanceFile f;
  f.prime = prime;
  f.pair = in.pair;
  f.x = in.x;
  if (in.focus) f.focus.push_back(*in.focus);
  return f;
}

inline Json to_json(const Verdict& v) {
  Json j;
  switch (v.kind) {
    case Verdict::Kind::Holds: j["verdict"] = "Holds"; break;
    case Verdict::Kind::Fails:
      j["verdict"] = "Fails";
      j["degree"] = v.degree;
      j["defect"] = v.defect;
      break;
    case Verdict::Kind::HoldsUpTo:
      j["verdict"] = "HoldsUpTo";
      j["range"] = v.range;
      break;
  }
  return j;
}

inline Json to_json(const CodescentReport& r, const CatPair& pair) {
  const FinCat& c = *pair.cat;
  Json j;
  j["strategy"] = to_string(r.strategy);
  j["cutoff"] = r.cutoff;
  j["directed"] = r.directed;
  j["dset"] = object_names(c, pair.dset);
  j["verdicts"] = Json::object();
  for (ObjId o = 0; o < r.verdicts.size(); ++o) j["verdicts"][c.object_name(o)] = to_json(r.verdicts[o]);
  j["locus"] = object_names(c, r.locus);
  j["inconclusive"] = r.inconclusive;
  j["reductions"] = Json::array();
  for (const auto& n : r.reductions) j["reductions"].push_back({{"name", n.name}, {"citation", n.citation}});
  return j;
}

/// Two-space indented JSON with arrays of numbers kept on one line.
inline std::string pretty(const Json& j) {
  const std::string raw = j.dump(2);
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '[') {
      std::size_t k = i + 1;
      while (k < raw.size() && (std::isdigit(static_cast<unsigned char>(raw[k])) || std::isspace(static_cast<unsigned char>(raw[k])) ||
                                raw[k] == ',' || raw[k] == '-'))
        ++k;
      if (k < raw.size() && raw[k] == ']') {
        out += '[';
        bool space = false;
        for (std::size_t m = i + 1; m < k; ++m) {
          if (std::isspace(static_cast<unsigned char>(raw[m]))) {
            space = true;
            continue;
          }
          if (space && out.back() == ',') out += ' ';
          space = false;
          out += raw[m];
        }
        out += ']';
        i = k;
        continue;
      }
    }
    out += raw[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// DOT export.

/// True if m = g o f with f and g passing through an object other than the
/// endpoints of m. Such composites are implied by the drawing and omitted.
inline bool factors_through_third(const FinCat& c, MorId m) {
  const ObjId a = c.source(m), b = c.target(m);
  for (ObjId x = 0; x < c.object_count(); ++x) {
    if (x == a || x == b) continue;
    for (MorId f : c.hom(a, x))
      for (MorId g : c.hom(x, b))
        if (c.compose(g, f) == m) return true;
  }
  return false;
}

/// Objects as nodes (D drawn as boxes), non-identity morphisms as edges, both
/// sorted by name. Composites through a third object are left out unless
/// `all_morphisms` is set. With a report, nodes are colored by verdict.
inline std::string export_dot(const CatPair& pair, const CodescentReport* report = nullptr, bool all_morphisms = false) {
  const FinCat& c = *pair.cat;
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"' || ch == '\\') out += '\\';
      out += ch;
    }
    return out + "\"";
  };
  std::vector<ObjId> nodes(c.object_count());
  for (ObjId o = 0; o < nodes.size(); ++o) nodes[o] = o;
  std::sort(nodes.begin(), nodes.end(), [&](ObjId a, ObjId b) { return c.object_name(a) < c.object_name(b); });
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m) || (!all_morphisms && factors_through_third(c, m))) continue;
    edges.emplace_back(c.object_name(c.source(m)), c.object_name(c.target(m)), c.morphism_name(m));
  }
  std::sort(edges.begin(), edges.end());
  std::ostringstream out;
  out << "digraph C {\n  rankdir=LR;\n";
  for (auto o : nodes) {
    out << "  " << quote(c.object_name(o)) << " [shape=" << (pair.in_d(o) ? "box" : "ellipse");
    if (report) {
      const Verdict& v = report->verdicts.at(o);
      const char* color = v.kind == Verdict::Kind::Holds ? "green" : v.kind == Verdict::Kind::Fails ? "red" : "orange";
      out << ", style=filled, fillcolor=" << color << ", tooltip=" << quote(to_string(v));
    }
    out << "];\n";
  }
  for (const auto& [s, t, name] : edges) out << "  " << quote(s) << " -> " << quote(t) << " [label=" << quote(name) << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace codescent

#endif  // CODESCENT_IO_HPP
