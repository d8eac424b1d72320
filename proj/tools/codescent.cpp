// Command-line front end: reads instance files, computes verdicts, applies
// reductions and Kan extensions, exports DOT.
//
// Exit codes: 0 success or Holds, 1 Fails, 2 HoldsUpTo only, 64 usage error,
// 65 data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codescent/codescent.hpp"
#include "codescent/io.hpp"
#include "codescent/random.hpp"
#include "codescent/selftest.hpp"
#include "codescent/shapes.hpp"
#include "codescent/surgery.hpp"

using namespace codescent;

namespace {

constexpr int kExitFails = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string format = "text";
  std::optional<std::string> strategy;
  std::optional<int> cutoff;
  std::optional<std::uint32_t> prime;
  std::uint64_t seed = 1;
  std::string output;
};

bool json_out(const Globals& g) { return g.format == "json"; }

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw UsageError("cannot write '" + g.output + "'");
  out << text;
}

InstanceFile load(const Globals& g, const std::string& file) {
  Json root = detail::read_json(file, detail::slurp(file));
  if (g.prime && root.is_object()) root["prime"] = *g.prime;
  return parse_instance(root, file);
}

CodescentOptions options(const Globals& g, const InstanceFile& inst) {
  CodescentOptions o;
  if (inst.strategy) o.strategy = *inst.strategy;
  if (g.strategy) o.strategy = *g.strategy == "bar" ? Strategy::Bar : Strategy::IndBase;
  o.cutoff = inst.cutoff;
  if (g.cutoff) o.cutoff = *g.cutoff;
  return o;
}

ObjId object_arg(const InstanceFile& inst, const std::string& name) {
  auto o = inst.pair.cat->find_object(name);
  if (!o) throw UsageError("unknown object '" + name + "'");
  return *o;
}

int verdict_exit(const std::vector<Verdict>& vs) {
  bool fails = false, upto = false;
  for (const auto& v : vs) {
    fails = fails || v.kind == Verdict::Kind::Fails;
    upto = upto || v.kind == Verdict::Kind::HoldsUpTo;
  }
  return fails ? kExitFails : upto ? kExitInconclusive : 0;
}

std::string report_text(const CodescentReport& r, const CatPair& pair) {
  const FinCat& c = *pair.cat;
  std::ostringstream s;
  s << "strategy: " << to_string(r.strategy) << "\ncutoff: " << r.cutoff << "\ndirected: " << (r.directed ? "yes" : "no") << "\n";
  for (const auto& step : r.reductions) s << "reduction: " << step.name << " [" << step.citation << "]\n";
  for (ObjId o = 0; o < r.verdicts.size(); ++o) {
    s << "  " << c.object_name(o) << (pair.in_d(o) ? " (D)" : "") << ": " << to_string(r.verdicts[o]) << "\n";
  }
  s << "locus:";
  for (const auto& n : object_names(c, r.locus)) s << " " << n;
  s << "\n";
  if (r.inconclusive) s << "note: some verdicts only hold up to the truncation range\n";
  return s.str();
}

std::string instance_out(const Globals& g, const Json& j, const std::string& heading) {
  if (json_out(g)) return pretty(j) + "\n";
  return heading + pretty(j) + "\n";
}

// ---------------------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& file) {
  InstanceFile inst = load(g, file);
  const FinCat& c = *inst.pair.cat;
  const bool directed = is_directed_pair(inst.pair);
  if (json_out(g)) {
    Json j{{"valid", true},
           {"prime", inst.prime},
           {"objects", c.object_count()},
           {"morphisms", c.morphism_count()},
           {"dset", object_names(c, inst.pair.dset)},
           {"directed", directed}};
    emit(g, pretty(j) + "\n");
  } else {
    std::ostringstream s;
    s << "valid: " << c.object_count() << " objects, " << c.morphism_count() << " morphisms, |D| = " << inst.pair.dset.size()
      << ", p = " << inst.prime << ", " << (directed ? "directed" : "not directed") << "\n";
    emit(g, s.str());
  }
  return 0;
}

int cmd_locus(const Globals& g, const std::string& file) {
  InstanceFile inst = load(g, file);
  CodescentReport r = codescent_locus(inst.x, inst.pair, options(g, inst));
  emit(g, json_out(g) ? pretty(to_json(r, inst.pair)) + "\n" : report_text(r, inst.pair));
  return verdict_exit(r.verdicts);
}

int cmd_check(const Globals& g, const std::string& file, std::vector<std::string> at, bool reduce) {
  InstanceFile inst = load(g, file);
  if (at.empty())
    for (auto o : inst.focus) at.push_back(inst.pair.cat->object_name(o));
  if (at.empty()) throw UsageError("check needs --at <object> or a focus in the instance");
  const CodescentOptions opt = options(g, inst);
  Json out = Json::array();
  std::ostringstream text;
  std::vector<Verdict> all;
  for (const auto& name : at) {
    const ObjId c = object_arg(inst, name);
    std::vector<ReductionStep> steps;
    Instance cur{inst.pair, inst.x, c};
    if (reduce) {
      // Prune D to D_c, funnel to D_c u {c}, then drop morphisms out of c.
      Reduction a = reduce_prune_objects(cur.x, cur.pair, c);
      Reduction b = reduce_funnel(a.output.x, a.output.pair, *a.output.focus);
      Reduction d = reduce_prune_morphisms(b.output.x, b.output.pair, b.output.focus);
      for (const auto* r : {&a, &b, &d}) steps.push_back({r->name, r->citation});
      cur = d.output;
    }
    const Verdict v = verdict_at_focus(cur, opt);
    all.push_back(v);
    Json j{{"object", name}};
    j.update(to_json(v));
    j["strategy"] = to_string(opt.strategy);
    j["reductions"] = Json::array();
    for (const auto& s : steps) j["reductions"].push_back({{"name", s.name}, {"citation", s.citation}});
    out.push_back(j);
    for (const auto& s : steps) text << "reduction: " << s.name << " [" << s.citation << "]\n";
    text << name << ": " << to_string(v) << "\n";
    if (v.kind == Verdict::Kind::Fails) text << "witness degree " << v.degree << "\n";
  }
  emit(g, json_out(g) ? pretty(out.size() == 1 ? out[0] : out) + "\n" : text.str());
  return verdict_exit(all);
}

int cmd_kan(const Globals& g, const std::string& kind, const std::string& file, const std::string& along) {
  InstanceFile inst = load(g, file);
  FunctorFile f = load_functor(along, inst.pair.cat, inst.prime);
  InstanceFile out;
  out.prime = inst.prime;
  if (kind == "res") {
    out.pair = f.source;
    out.x = restrict_along(f.phi, inst.x);
  } else {
    Diagram y = f.diagram ? *f.diagram : restrict_along(f.phi, inst.x);
    out.pair = inst.pair;
    out.x = kind == "ind" ? left_kan(f.phi, y).value : right_kan(f.phi, y).value;
  }
  emit(g, instance_out(g, to_json(out), ""));
  return 0;
}

int cmd_prune(const Globals& g, const std::string& kind, const std::string& file, const std::optional<std::string>& at) {
  InstanceFile inst = load(g, file);
  std::optional<ObjId> c;
  if (at) c = object_arg(inst, *at);
  else if (!inst.focus.empty()) c = inst.focus.front();
  if (!c && kind != "morphisms") throw UsageError("prune " + kind + " needs --at <object> or a focus in the instance");
  Reduction r = kind == "objects"    ? reduce_prune_objects(inst.x, inst.pair, *c)
                : kind == "morphisms" ? reduce_prune_morphisms(inst.x, inst.pair, c)
                : kind == "funnel"    ? reduce_funnel(inst.x, inst.pair, *c)
                                      : reduce_strict_funnel(inst.x, inst.pair, *c);
  InstanceFile o = make_instance_file(r.output, inst.prime);
  o.strategy = inst.strategy;
  o.cutoff = inst.cutoff;
  if (json_out(g)) {
    emit(g, pretty(Json{{"reduction", r.name}, {"citation", r.citation}, {"instance", to_json(o)}}) + "\n");
  } else {
    emit(g, instance_out(g, to_json(o), "reduction: " + r.name + " [" + r.citation + "]\n"));
  }
  return 0;
}

int cmd_glossy(const Globals& g, const std::string& side_name, const std::string& file, const std::string& along) {
  InstanceFile inst = load(g, file);
  FunctorFile f = load_functor(along, inst.pair.cat, inst.prime);
  const Side side = side_name == "left" ? Side::Left : Side::Right;
  PairMorphism pm = PairMorphism::make(f.phi, f.source.dset, inst.pair.dset);
  GlossyResult res = glossy(side, pm);
  const FinCat& a = *f.phi.source;
  const FinCat& c = *f.phi.target;
  std::optional<bool> formula;
  if (res.holds) {
    Diagram y = f.diagram ? *f.diagram : restrict_along(f.phi, inst.x);
    formula = glossy_formula_check(side, pm, res.witnesses, y);
  }
  if (json_out(g)) {
    Json j{{"side", side_name}, {"glossy", res.holds}};
    if (!res.holds) j["reason"] = res.reason;
    j["witnesses"] = Json::array();
    for (const auto& w : res.witnesses) {
      Json e = Json::array();
      for (const auto& en : w.entries) e.push_back({{"object", a.object_name(en.object)}, {"morphism", c.morphism_name(en.morphism)}});
      j["witnesses"].push_back({{"base", a.object_name(w.base)}, {"entries", e}});
    }
    if (formula) j["formula_iso"] = *formula;
    emit(g, pretty(j) + "\n");
  } else {
    std::ostringstream s;
    s << side_name << " glossy: " << (res.holds ? "yes" : "no") << "\n";
    if (!res.holds) s << "reason: " << res.reason << "\n";
    for (const auto& w : res.witnesses) {
      s << "  " << a.object_name(w.base) << ":";
      for (const auto& en : w.entries) s << " (" << a.object_name(en.object) << ", " << c.morphism_name(en.morphism) << ")";
      s << "\n";
    }
    if (formula) s << (side == Side::Left ? "product" : "coproduct") << " formula: " << (*formula ? "iso" : "not an iso") << "\n";
    emit(g, s.str());
  }
  return res.holds && formula.value_or(false) ? 0 : kExitFails;
}

int cmd_export_dot(const Globals& g, const std::string& file, bool with_locus, bool all_morphisms) {
  InstanceFile inst = load(g, file);
  if (!with_locus) {
    emit(g, export_dot(inst.pair, nullptr, all_morphisms));
    return 0;
  }
  CodescentReport r = codescent_locus(inst.x, inst.pair, options(g, inst));
  emit(g, export_dot(inst.pair, &r, all_morphisms));
  return 0;
}

int cmd_selftest(const Globals& g) {
  auto results = run_selftest(g.seed - 1);
  bool all = true;
  Json j = Json::array();
  std::ostringstream s;
  for (const auto& r : results) {
    all = all && r.passed;
    j.push_back({{"criterion", r.id},
                 {"name", r.name},
                 {"passed", r.passed},
                 {"trials", r.trials},
                 {"failures", r.failures},
                 {"seconds", r.seconds},
                 {"detail", r.detail}});
    s << (r.passed ? "PASS" : "FAIL") << "  " << r.id << " " << r.name << " (" << r.trials << " checks, " << r.failures
      << " failures, " << r.seconds << " s)";
    if (!r.passed) s << ": " << r.detail;
    s << "\n";
  }
  emit(g, json_out(g) ? pretty(j) + "\n" : s.str());
  return all ? 0 : kExitFails;
}

struct ShapeArgs {
  std::string kind;
  int arrows = 2;
  int index = 0;
  int period = 2;
  bool shift = false;
  int objects = 2;
  std::string fill = "random";
};

int cmd_shape(const Globals& g, const ShapeArgs& a) {
  ShapeSpec spec;
  ComplexShape cs{0, 2, 2};
  if (a.kind == "arrow") spec.kind = ShapeKind::Arrow;
  else if (a.kind == "multi-arrow") spec.kind = ShapeKind::MultiArrow;
  else if (a.kind == "funnel") spec.kind = ShapeKind::FunnelMonoid;
  else if (a.kind == "square") spec.kind = ShapeKind::CommutativeSquare;
  else if (a.kind == "free-square") spec.kind = ShapeKind::FreeSquare;
  else if (a.kind == "discrete") spec.kind = ShapeKind::Discrete;
  else if (a.kind == "terminal") spec.kind = ShapeKind::TerminalExtension;
  else spec.kind = ShapeKind::RetractPair;
  spec.arrows = a.arrows;
  spec.monoid = CyclicMonoid{a.index, a.period};
  spec.action = a.shift ? MonoidAction::Shift : MonoidAction::Trivial;
  spec.objects = a.objects;
  CatPair pair = build_shape(spec);
  const std::uint32_t p = g.prime.value_or(2);
  Rng rng(g.seed);
  InstanceFile out;
  out.prime = p;
  out.pair = pair;
  if (a.fill == "constant") out.x = Diagram::constant(pair.cat, ChainComplex::sphere(0, p));
  else if (a.fill == "zero") out.x = Diagram::zero(pair.cat, p);
  else out.x = selftest::diagram_for(rng, spec.kind, pair, p, cs);
  if (g.strategy) out.strategy = *g.strategy == "bar" ? Strategy::Bar : Strategy::IndBase;
  out.cutoff = g.cutoff;
  emit(g, pretty(to_json(out)) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codescent verdicts for diagrams of chain complexes over F_p"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  std::string strategy, format = "text";
  int cutoff = -1;
  std::uint32_t prime = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--strategy", strategy, "Cofibrant approximation")->check(CLI::IsMember({"bar", "ind-base"}));
  app.add_option("--cutoff", cutoff, "Bar cutoff N")->check(CLI::NonNegativeNumber);
  app.add_option("--prime", prime, "Override the prime of the instance");
  app.add_option("--seed", g.seed, "Random seed (selftest, shape)");
  app.add_option("-o,--output", g.output, "Write output to a file");

  std::string file, along, kind;
  std::optional<std::string> at_one;
  std::vector<std::string> at_many;
  bool reduce = false, with_locus = false, all_morphisms = false;
  ShapeArgs shape;

  auto* validate = app.add_subcommand("validate", "Parse and validate an instance");
  validate->add_option("file", file, "Instance file")->required();

  auto* locus = app.add_subcommand("locus", "Verdicts at every object");
  locus->add_option("file", file, "Instance file")->required();

  auto* check = app.add_subcommand("check", "Verdict at the given objects");
  check->add_option("file", file, "Instance file")->required();
  check->add_option("--at", at_many, "Object name (repeatable)");
  check->add_flag("--reduce", reduce, "Prune and funnel before computing");

  auto* kan = app.add_subcommand("kan", "Induction, extension or restriction along a functor");
  kan->add_option("kind", kind, "ind, ext or res")->required()->check(CLI::IsMember({"ind", "ext", "res"}));
  kan->add_option("file", file, "Instance file")->required();
  kan->add_option("--along", along, "Functor file")->required();

  auto* prune = app.add_subcommand("prune", "Apply a reduction and print the smaller instance");
  prune->add_option("kind", kind, "objects, morphisms, funnel or strict-funnel")
      ->required()
      ->check(CLI::IsMember({"objects", "morphisms", "funnel", "strict-funnel"}));
  prune->add_option("file", file, "Instance file")->required();
  prune->add_option("--at", at_one, "Focus object");

  auto* glossy_cmd = app.add_subcommand("glossy", "Test a morphism of pairs for glossiness");
  glossy_cmd->add_option("side", kind, "left or right")->required()->check(CLI::IsMember({"left", "right"}));
  glossy_cmd->add_option("file", file, "Instance file (the target pair)")->required();
  glossy_cmd->add_option("--along", along, "Functor file")->required();

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of the category");
  dot->add_option("file", file, "Instance file")->required();
  dot->add_flag("--locus", with_locus, "Color objects by verdict");
  dot->add_flag("--all-morphisms", all_morphisms, "Also draw composites through a third object");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the oracle suite");

  auto* shape_cmd = app.add_subcommand("shape", "Emit an instance on a built-in shape");
  shape_cmd->add_option("kind", shape.kind, "Shape")
      ->required()
      ->check(CLI::IsMember({"arrow", "multi-arrow", "funnel", "square", "free-square", "discrete", "terminal", "retract"}));
  shape_cmd->add_option("--arrows", shape.arrows, "Number of arrows d -> c");
  shape_cmd->add_option("--index", shape.index, "Monoid index (funnel)");
  shape_cmd->add_option("--period", shape.period, "Monoid period (funnel)");
  shape_cmd->add_flag("--shift", shape.shift, "Monoid acts on arrows by shifting");
  shape_cmd->add_option("--objects", shape.objects, "Object count (discrete)");
  shape_cmd->add_option("--fill", shape.fill, "Diagram values")->check(CLI::IsMember({"random", "constant", "zero"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  g.format = format;
  if (!strategy.empty()) g.strategy = strategy;
  if (cutoff >= 0) g.cutoff = cutoff;
  if (prime != 0) {
    if (prime >= (1u << 31) || !is_prime(prime)) {
      std::cerr << "error: --prime must be a prime below 2^31\n";
      return kExitUsage;
    }
    g.prime = prime;
  }

  try {
    if (*validate) return cmd_validate(g, file);
    if (*locus) return cmd_locus(g, file);
    if (*check) return cmd_check(g, file, at_many, reduce);
    if (*kan) return cmd_kan(g, kind, file, along);
    if (*prune) return cmd_prune(g, kind, file, at_one);
    if (*glossy_cmd) return cmd_glossy(g, kind, file, along);
    if (*dot) return cmd_export_dot(g, file, with_locus, all_morphisms);
    if (*selftest_cmd) return cmd_selftest(g);
    if (*shape_cmd) return cmd_shape(g, shape);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
