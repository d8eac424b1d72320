#include <catch2/catch_amalgamated.hpp>

#include <regex>

#include "codescent/io.hpp"
#include "codescent/random.hpp"
#include "codescent/shapes.hpp"

using namespace codescent;

namespace {

const std::string kData = CODESCENT_DATA_DIR;

std::string parse_error(const std::string& text) {
  try {
    parse_instance(detail::read_json("inst.json", text), "inst.json");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kArrow = R"({
  "prime": 3,
  "category": {
    "objects": ["d", "c"],
    "morphisms": [{"name": "id_d", "source": "d", "target": "d"},
                  {"name": "id_c", "source": "c", "target": "c"},
                  {"name": "alpha", "source": "d", "target": "c"}],
    "identities": {"d": "id_d", "c": "id_c"},
    "composition": []
  },
  "dset": ["d"],
  "diagram": {
    "objects": {"d": {"lo": 0, "dims": [1], "differentials": []},
                "c": {"lo": 0, "dims": [1], "differentials": []}},
    "morphisms": {"alpha": {"components": [[2]]}}
  }
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::size_t count(const std::string& s, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST_CASE("instances parse", "[io]") {
  InstanceFile inst = parse_instance(nlohmann::ordered_json::parse(kArrow));
  CHECK(inst.prime == 3);
  CHECK(object_names(*inst.pair.cat, inst.pair.dset) == std::vector<std::string>{"d"});
  CHECK(inst.x.on(inst.pair.cat->lookup_morphism("alpha")).at(0) == Matrix::from_rows(3, {{2}}));
  CHECK(inst.focus.empty());
  CHECK(codescent_locus(inst.x, inst.pair).all_hold());
}

TEST_CASE("parse errors are located", "[io]") {
  CHECK_THAT(parse_error("{"), Catch::Matchers::ContainsSubstring("inst.json: malformed JSON"));
  CHECK_THAT(parse_error(with(kArrow, "\"prime\": 3", "\"prime\": 4")),
             Catch::Matchers::ContainsSubstring("inst.json: /prime"));
  CHECK_THAT(parse_error(with(kArrow, "\"category\"", "\"categ\"")),
             Catch::Matchers::ContainsSubstring("'category'"));
  CHECK_THAT(parse_error(with(kArrow, "\"c\": {\"lo\"", "\"z\": {\"lo\"")),
             Catch::Matchers::ContainsSubstring("/diagram/objects/z"));
  CHECK_THAT(parse_error(with(kArrow, "[[2]]", "[[2, 1]]")),
             Catch::Matchers::ContainsSubstring("/diagram/morphisms/alpha"));
  CHECK_THAT(parse_error(with(kArrow, "\"dset\": [\"d\"]", "\"dset\": [\"q\"]")),
             Catch::Matchers::ContainsSubstring("/dset"));
  CHECK_THAT(parse_error(with(kArrow, "\"dset\": [\"d\"]", "\"dset\": [\"d\"], \"strategy\": \"fast\"")),
             Catch::Matchers::ContainsSubstring("/strategy"));
  CHECK_THAT(parse_error(with(kArrow, "\"dset\": [\"d\"]", "\"dset\": [\"d\"], \"cutoff\": -1")),
             Catch::Matchers::ContainsSubstring("/cutoff"));
  CHECK_THAT(parse_error(with(kArrow, "\"dset\": [\"d\"]", "\"dset\": [\"d\"], \"focus\": \"e\"")),
             Catch::Matchers::ContainsSubstring("/focus"));
  CHECK_THAT(parse_error(with(kArrow, "\"target\": \"c\"}]", "\"target\": \"e\"}]")),
             Catch::Matchers::ContainsSubstring("unknown object 'e'"));
  CHECK_THAT(parse_error(with(kArrow, "\"dims\": [1], \"differentials\": []},\n                \"c\"",
                              "\"dims\": [1, 1, 1], \"differentials\": [[1], [1]]},\n                \"c\"")),
             Catch::Matchers::ContainsSubstring("/diagram/objects/d"));
  // One error prefix only.
  const std::string msg = parse_error(with(kArrow, "[[2]]", "[[2, 1]]"));
  CHECK(msg.find("inst.json") == msg.rfind("inst.json"));
}

TEST_CASE("instances round-trip through JSON", "[io]") {
  Rng rng(61);
  std::vector<CatPair> pairs{arrow_pair(), commutative_square_pair(), free_square_pair(), retract_pair(),
                             funnel_monoid_pair(CyclicMonoid::group(4), 2, MonoidAction::Shift),
                             terminal_extension_pair(*discrete_pair(2).cat)};
  for (const auto& pair : pairs) {
    for (std::uint32_t p : {2u, 5u}) {
      Diagram x = random_diagram(rng, pair.cat, p, {{-1, 1, 2}, 2, true});
      InstanceFile f = make_instance_file({pair, x, ObjId{0}}, p);
      f.strategy = Strategy::IndBase;
      f.cutoff = 7;
      const std::string text = pretty(to_json(f));
      InstanceFile g = parse_instance(detail::read_json("rt.json", text), "rt.json");
      CHECK(*g.pair.cat == *pair.cat);
      CHECK(g.pair.dset == pair.dset);
      CHECK(g.x == x);
      CHECK(g.focus == std::vector<ObjId>{0});
      CHECK(g.strategy == Strategy::IndBase);
      CHECK(g.cutoff == 7);
      CHECK(pretty(to_json(g)) == text);
    }
  }
}

TEST_CASE("sample data files", "[io]") {
  InstanceFile arrow = load_instance(kData + "/instances/arrow_identity.json");
  CHECK(codescent_locus(arrow.x, arrow.pair).all_hold());

  InstanceFile empty = load_instance(kData + "/instances/empty_d.json");
  CodescentReport r = codescent_locus(empty.x, empty.pair);
  CHECK(object_names(*empty.pair.cat, r.locus) == std::vector<std::string>{"x"});

  InstanceFile z2 = load_instance(kData + "/instances/z2_funnel.json");
  CHECK(codescent_at(z2.x, z2.pair, z2.pair.cat->lookup_object("c"), {Strategy::Bar, z2.cutoff}) ==
        Verdict::fails(1, 1));

  InstanceFile two = load_instance(kData + "/instances/two_arrows_point.json");
  CHECK(codescent_at(two.x, two.pair, two.pair.cat->lookup_object("c")) == Verdict::fails(0, 1));

  InstanceFile z4 = load_instance(kData + "/instances/z4_shift_funnel.json");
  FunctorFile stab = load_functor(kData + "/functors/stabilizer.json", z4.pair.cat, z4.prime);
  CHECK(stab.source.cat->object_count() == 2);
  CHECK_FALSE(stab.diagram);
  auto pm = PairMorphism::make(stab.phi, stab.source.dset, z4.pair.dset);
  CHECK(glossy(Side::Left, pm).holds);

  CHECK_THROWS_AS(load_instance(kData + "/instances/missing.json"), Error);
  for (const char* f : {"square.json", "free_square.json", "terminal.json"})
    CHECK_NOTHROW(load_instance(kData + "/instances/" + f));
}

TEST_CASE("functor files", "[io]") {
  InstanceFile inst = parse_instance(nlohmann::ordered_json::parse(kArrow));
  const char* text = R"({
    "source": {
      "category": {"objects": ["a"], "morphisms": [{"name": "id_a", "source": "a", "target": "a"}],
                   "identities": {"a": "id_a"}, "composition": []},
      "diagram": {"objects": {"a": {"lo": 1, "dims": [2], "differentials": []}}}
    },
    "object_map": {"a": "d"}
  })";
  FunctorFile f = parse_functor(nlohmann::ordered_json::parse(text), inst.pair.cat, inst.prime);
  REQUIRE(f.diagram);
  CHECK(f.phi(0) == inst.pair.cat->lookup_object("d"));
  CHECK(f.diagram->at(0).dim(1) == 2);

  std::string bad = with(text, "\"object_map\": {\"a\": \"d\"}", "\"object_map\": {\"a\": \"nowhere\"}");
  CHECK_THROWS_AS(parse_functor(nlohmann::ordered_json::parse(bad), inst.pair.cat, inst.prime), Error);
  std::string missing = with(text, "\"object_map\": {\"a\": \"d\"}", "\"object_map\": {}");
  CHECK_THROWS_AS(parse_functor(nlohmann::ordered_json::parse(missing), inst.pair.cat, inst.prime), Error);
}

TEST_CASE("reports serialize", "[io]") {
  InstanceFile z2 = load_instance(kData + "/instances/z2_funnel.json");
  CodescentReport r = codescent_locus(z2.x, z2.pair, {Strategy::Bar, 3});
  r.reductions.push_back({"funnel", "funneling"});
  Json j = to_json(r, z2.pair);
  CHECK(j["strategy"] == "bar");
  CHECK(j["cutoff"] == 3);
  CHECK(j["directed"] == false);
  CHECK(j["verdicts"]["c"]["verdict"] == "Fails");
  CHECK(j["verdicts"]["c"]["degree"] == 1);
  CHECK(j["verdicts"]["d"]["verdict"] == "Holds");
  CHECK(j["locus"] == Json::array({"d"}));
  CHECK(j["reductions"][0]["citation"] == "funneling");
  CHECK(to_json(Verdict::holds_up_to(4))["range"] == 4);
  CHECK(pretty(Json{{"dims", {1, 2, 3}}}) == "{\n  \"dims\": [1, 2, 3]\n}");
}

TEST_CASE("DOT export", "[io]") {
  const std::regex node(R"(^  "[^"]+" \[shape=)", std::regex::multiline);
  const std::regex edge(R"( -> )");

  CatPair arrow = arrow_pair();
  std::string a = export_dot(arrow);
  CHECK(count(a, node) == 2);
  CHECK(count(a, edge) == 1);

  CatPair sq = commutative_square_pair();
  std::string s = export_dot(sq);
  CHECK(count(s, node) == 4);
  CHECK(count(s, edge) == 4);
  CHECK(count(export_dot(sq, nullptr, true), edge) == 5);
  CHECK(export_dot(sq) == s);
  CHECK(s.find("\"c\" [shape=ellipse]") < s.find("\"d\" [shape=box]"));

  InstanceFile z2 = load_instance(kData + "/instances/z2_funnel.json");
  CodescentReport r = codescent_locus(z2.x, z2.pair, {Strategy::Bar, 3});
  std::string colored = export_dot(z2.pair, &r);
  CHECK_THAT(colored, Catch::Matchers::ContainsSubstring("fillcolor=red, tooltip=\"Fails(degree 1, defect 1)\""));
  CHECK_THAT(colored, Catch::Matchers::ContainsSubstring("fillcolor=green"));
}
