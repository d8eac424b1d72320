#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "codescent/fincat.hpp"
#include "codescent/shapes.hpp"

using namespace codescent;

namespace {

RawCategory one_object_monoid(const std::vector<std::array<std::string, 3>>& table) {
  RawCategory raw;
  raw.objects = {"x"};
  raw.morphisms = {{"id", "x", "x"}, {"a", "x", "x"}, {"b", "x", "x"}};
  raw.identities = {{"x", "id"}};
  for (const auto& t : table) raw.composition.push_back({t[0], t[1], t[2]});
  return raw;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("validation accepts the terminal and arrow categories", "[fincat]") {
  RawCategory t;
  t.objects = {"*"};
  t.morphisms = {{"id", "*", "*"}};
  t.identities = {{"*", "id"}};
  FinCat one = FinCat::validate(t);
  CHECK(one.morphism_count() == 1);

  CatPair arrow = arrow_pair();
  CHECK(arrow.cat->object_count() == 2);
  CHECK(arrow.cat->morphism_count() == 3);
  CHECK(object_names(*arrow.cat, arrow.dset) == std::vector<std::string>{"d"});
}

TEST_CASE("validation names the violated axiom", "[fincat]") {
  // compose(alpha, id_d) listed as another arrow.
  RawCategory bad_id;
  bad_id.objects = {"d", "c"};
  bad_id.morphisms = {{"id_d", "d", "d"}, {"id_c", "c", "c"}, {"alpha", "d", "c"}, {"alpha2", "d", "c"}};
  bad_id.identities = {{"d", "id_d"}, {"c", "id_c"}};
  bad_id.composition = {{"alpha", "id_d", "alpha2"}};
  CHECK(kind_of([&] { FinCat::validate(bad_id); }) == ErrorKind::BadIdentity);

  RawCategory missing = one_object_monoid({{"a", "a", "b"}});
  CHECK(kind_of([&] { FinCat::validate(missing); }) == ErrorKind::MissingComposite);

  RawCategory nonassoc = one_object_monoid({{"a", "a", "b"}, {"a", "b", "b"}, {"b", "a", "a"}, {"b", "b", "b"}});
  CHECK(kind_of([&] { FinCat::validate(nonassoc); }) == ErrorKind::NonAssociative);

  RawCategory monoid = one_object_monoid({{"a", "a", "a"}, {"a", "b", "b"}, {"b", "a", "a"}, {"b", "b", "b"}});
  CHECK_NOTHROW(FinCat::validate(monoid));

  RawCategory no_id = bad_id;
  no_id.identities.erase("c");
  no_id.composition.clear();
  CHECK(kind_of([&] { FinCat::validate(no_id); }) == ErrorKind::BadIdentity);
}

TEST_CASE("shape builders", "[fincat]") {
  CatPair sq = commutative_square_pair();
  const FinCat& c = *sq.cat;
  CHECK(c.object_count() == 4);
  CHECK(c.compose(c.lookup_morphism("beta"), c.lookup_morphism("alpha")) ==
        c.compose(c.lookup_morphism("betap"), c.lookup_morphism("alphap")));
  CHECK(sq.dset.size() == 3);

  CatPair free = free_square_pair();
  CHECK(free.cat->hom(free.cat->lookup_object("e"), free.cat->lookup_object("c")).size() == 2);

  CatPair z2 = funnel_monoid_pair(CyclicMonoid::group(2), 1, MonoidAction::Trivial);
  const ObjId d = z2.cat->lookup_object("d");
  CHECK(z2.cat->hom(d, d).size() == 2);
  CHECK(z2.cat->hom(d, z2.cat->lookup_object("c")).size() == 1);
  CHECK(z2.cat->hom(z2.cat->lookup_object("c"), z2.cat->lookup_object("c")).size() == 1);

  CHECK_THROWS_AS(multi_arrow_pair(0), Error);
  CHECK_THROWS_AS(funnel_monoid_pair(CyclicMonoid::group(3), 2, MonoidAction::Shift), Error);

  CatPair term = terminal_extension_pair(*discrete_pair(3).cat);
  const ObjId inf = term.cat->lookup_object("cinf");
  for (ObjId o = 0; o < term.cat->object_count(); ++o) CHECK(term.cat->hom(o, inf).size() == 1);
}

TEST_CASE("full subcategories", "[fincat]") {
  CatPair sq = commutative_square_pair();
  FinCat d = full_subcategory(*sq.cat, sq.dset);
  CHECK(d.object_count() == 3);
  CHECK(d.morphism_count() == 5);  // three identities, alpha, alphap
  CHECK(d.find_morphism("alpha"));
  CHECK_FALSE(d.find_morphism("beta"));
  CHECK(full_subcategory(*sq.cat, sq.cat->all_objects()) == *sq.cat);
  CHECK(full_subcategory(*sq.cat, {}).object_count() == 0);
  CHECK_THROWS_AS(full_subcategory(*sq.cat, {17}), Error);
}

TEST_CASE("comma categories", "[fincat]") {
  SECTION("arrows into c form a discrete comma category") {
    for (int k = 1; k <= 3; ++k) {
      CatPair pair = multi_arrow_pair(k);
      CatPtr dcat = make_cat(full_subcategory(*pair.cat, pair.dset));
      CommaCat comma_c = comma(CommaSide::Under, FunctorData::inclusion(dcat, pair.cat), pair.cat->lookup_object("c"));
      CHECK(comma_c.cat->object_count() == static_cast<std::size_t>(k));
      CHECK(comma_c.cat->morphism_count() == static_cast<std::size_t>(k));
    }
  }
  SECTION("(d, id_d) is final in D under d") {
    CatPair sq = commutative_square_pair();
    CatPtr dcat = make_cat(full_subcategory(*sq.cat, sq.dset));
    auto incl = FunctorData::inclusion(dcat, sq.cat);
    const ObjId d = sq.cat->lookup_object("d");
    CommaCat k = comma(CommaSide::Under, incl, d);
    std::optional<ObjId> fin;
    for (ObjId x = 0; x < k.cat->object_count(); ++x)
      if (k.label[x] == sq.cat->identity(d)) fin = x;
    REQUIRE(fin);
    for (ObjId x = 0; x < k.cat->object_count(); ++x) CHECK(k.cat->hom(x, *fin).size() == 1);
  }
  SECTION("square: D under c has three objects and two non-identity morphisms") {
    CatPair sq = commutative_square_pair();
    CatPtr dcat = make_cat(full_subcategory(*sq.cat, sq.dset));
    CommaCat k = comma(CommaSide::Under, FunctorData::inclusion(dcat, sq.cat), sq.cat->lookup_object("c"));
    CHECK(k.cat->object_count() == 3);
    CHECK(k.cat->morphism_count() == 5);
    std::set<std::string> labels;
    for (auto l : k.label) labels.insert(sq.cat->morphism_name(l));
    CHECK(labels == std::set<std::string>{"gamma", "beta", "betap"});
    CHECK_NOTHROW(k.projection(dcat));
  }
  SECTION("over side mirrors under on the opposite arrows") {
    CatPair arrow = arrow_pair();
    CommaCat k = comma(CommaSide::Over, FunctorData::identity(arrow.cat), arrow.cat->lookup_object("d"));
    CHECK(k.cat->object_count() == 2);  // (d, id_d), (c, alpha)
  }
}

TEST_CASE("subset predicates", "[fincat]") {
  CatPair sq = commutative_square_pair();
  FinCat d = full_subcategory(*sq.cat, sq.dset);
  // D_c inside D: here every object of D maps to c.
  CHECK(subset_predicate(SubsetPredicate::LeftAbsorbant, d, {"e", "d", "dp"}));
  CHECK_FALSE(subset_predicate(SubsetPredicate::LeftAbsorbant, d, {"d"}));
  CatPair arrow = arrow_pair();
  CHECK_FALSE(subset_predicate(SubsetPredicate::LeftAbsorbant, *arrow.cat, {"c"}));
  CHECK(subset_predicate(SubsetPredicate::LeftAbsorbant, *arrow.cat, {"d"}));
  CHECK(subset_predicate(SubsetPredicate::RetractEquivalent, *sq.cat, {"e", "d"}, {"e", "d"}));

  CatPair r = retract_pair();
  CHECK(subset_predicate(SubsetPredicate::Retract, *r.cat, {"d"}, {"c"}));
  CHECK_FALSE(subset_predicate(SubsetPredicate::Retract, *r.cat, {"c"}, {"d"}));
  CHECK_FALSE(subset_predicate(SubsetPredicate::EssentiallyEquivalent, *r.cat, {"d"}, {"c"}));
  CHECK_FALSE(subset_predicate(SubsetPredicate::RetractEquivalent, *r.cat, {"d"}, {"c"}));
  CHECK(subset_predicate(SubsetPredicate::RetractEquivalent, *r.cat, {"d"}, {"c", "d"}) ==
        subset_predicate(SubsetPredicate::Retract, *r.cat, {"c"}, {"d"}));
  CHECK_THROWS_AS(subset_predicate(SubsetPredicate::LeftAbsorbant, *r.cat, {"zz"}), Error);
}

TEST_CASE("glossy morphisms of pairs", "[fincat]") {
  SECTION("full inclusions are glossy on both sides with the identity witness") {
    CatPair sq = commutative_square_pair();
    CatPtr dcat = make_cat(full_subcategory(*sq.cat, sq.dset));
    auto pm = PairMorphism::make(FunctorData::inclusion(dcat, sq.cat), dcat->all_objects(), sq.dset);
    for (Side side : {Side::Left, Side::Right}) {
      GlossyResult g = glossy(side, pm);
      REQUIRE(g.holds);
      for (const auto& w : g.witnesses) {
        REQUIRE(w.entries.size() == 1);
        CHECK(w.entries[0].object == w.base);
        CHECK(sq.cat->is_identity(w.entries[0].morphism));
      }
    }
  }
  SECTION("a discrete subcategory is left glossy with every arrow out of b") {
    CatPair arrow = arrow_pair();
    CatPtr disc = make_cat(discrete_subcategory(*arrow.cat));
    auto pm = PairMorphism::make(FunctorData::inclusion(disc, arrow.cat), disc->all_objects(), arrow.cat->all_objects());
    GlossyResult g = glossy(Side::Left, pm);
    REQUIRE(g.holds);
    for (const auto& w : g.witnesses) CHECK(w.entries.size() == arrow.cat->out(w.base).size());
  }
  SECTION("group-action funnels") {
    GlossyExample s = stabilizer_funnel(4, 2);
    CHECK(glossy(Side::Left, s.morphism, s.witnesses).holds);
    CHECK(glossy(Side::Left, s.morphism).holds);
    GlossyExample c = coset_funnel(6, 3);
    CHECK(glossy(Side::Right, c.morphism, c.witnesses).holds);
    CHECK(glossy(Side::Right, c.morphism).holds);
  }
  SECTION("bad witnesses are rejected") {
    GlossyExample s = stabilizer_funnel(4, 2);
    GlossyWitness w = s.witnesses[0];
    w.entries.push_back(w.entries[0]);
    std::string why;
    CHECK_FALSE(verify_glossy_witness(Side::Left, s.morphism, w, &why));
    CHECK_FALSE(why.empty());
    CHECK_FALSE(glossy(Side::Left, s.morphism, std::vector<GlossyWitness>{}).holds);
  }
  SECTION("the image of B must lie in D") {
    CatPair arrow = arrow_pair();
    CHECK_THROWS_AS(PairMorphism::make(FunctorData::identity(arrow.cat), {arrow.cat->lookup_object("c")}, arrow.dset), Error);
  }
}

TEST_CASE("source restriction and funnels", "[fincat]") {
  CatPair arrow = arrow_pair();
  CHECK(restrict_sources(arrow) == *arrow.cat);

  // Back arrow rho: c -> d and the idempotent at c are dropped.
  CatPair r = retract_pair();
  FinCat a = restrict_sources(r);
  CHECK(a.find_morphism("alpha"));
  CHECK_FALSE(a.find_morphism("rho"));
  CHECK_FALSE(a.find_morphism("e"));
  CHECK(is_left_absorbant(a, a.lookup_objects({"d"})));

  CatPair disc = discrete_pair(3, {"x0", "x1"});
  CHECK(restrict_sources(disc) == *disc.cat);

  Funnel f = funnel_objects(arrow, arrow.cat->lookup_object("c"));
  CHECK(object_names(*arrow.cat, f.d_c) == std::vector<std::string>{"d"});
  REQUIRE(f.strict_funnel);
  CHECK(*f.strict_funnel->cat == *arrow.cat);

  CHECK(funnel_objects(disc, disc.cat->lookup_object("x2")).d_c.empty());

  CatPair sq = commutative_square_pair();
  Funnel fs = funnel_objects(sq, sq.cat->lookup_object("c"));
  REQUIRE(fs.strict_funnel);
  const FinCat& strict = *fs.strict_funnel->cat;
  CHECK(strict.object_count() == 4);
  const ObjId c = strict.lookup_object("c");
  CHECK(strict.hom(c, c).size() == 1);
  CHECK(fs.funnel.cat->object_count() == 4);

  CHECK_FALSE(funnel_objects(sq, sq.cat->lookup_object("d")).strict_funnel);
}

TEST_CASE("functors are validated", "[fincat]") {
  CatPair arrow = arrow_pair();
  CatPtr one = make_cat(full_subcategory(*arrow.cat, arrow.dset));
  CHECK_THROWS_AS(FunctorData::validate(one, arrow.cat, {1}, {arrow.cat->identity(0)}), Error);
  auto incl = FunctorData::inclusion(one, arrow.cat);
  auto id = FunctorData::identity(arrow.cat);
  CHECK(id.after(incl).obj_map == incl.obj_map);
}
