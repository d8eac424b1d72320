#include <catch2/catch_amalgamated.hpp>

#include "codescent/diagram.hpp"
#include "codescent/random.hpp"
#include "codescent/shapes.hpp"

using namespace codescent;

namespace {

ChainComplex s0(std::uint32_t p) { return ChainComplex::sphere(0, p); }

ChainMap scalar(const ChainComplex& c, std::int64_t k) { return ChainMap::identity(c).scaled(k); }

// Values S^0 everywhere, maps given per morphism name (identities filled in).
Diagram sphere_diagram(const CatPtr& cat, std::uint32_t p, const std::map<std::string, std::int64_t>& coeff) {
  std::vector<ChainComplex> values(cat->object_count(), s0(p));
  std::vector<ChainMap> maps;
  for (MorId m = 0; m < cat->morphism_count(); ++m) {
    auto it = coeff.find(cat->morphism_name(m));
    maps.push_back(scalar(s0(p), cat->is_identity(m) ? 1 : it == coeff.end() ? 1 : it->second));
  }
  return Diagram::validate(cat, p, values, maps);
}

FunctorData point_at(const CatPtr& c, ObjId d) {
  RawCategory raw;
  raw.objects = {"*"};
  raw.morphisms = {{"id", "*", "*"}};
  raw.identities = {{"*", "id"}};
  return FunctorData::validate(make_cat(FinCat::validate(raw)), c, {d}, {c->identity(d)});
}

FunctorData d_inclusion(const CatPair& pair) {
  return FunctorData::inclusion(make_cat(full_subcategory(*pair.cat, pair.dset)), pair.cat);
}

bool objectwise_iso(const NatTrans& t) {
  for (const auto& c : t.components())
    if (!is_iso(c)) return false;
  return true;
}

}  // namespace

TEST_CASE("diagram validation", "[diagram]") {
  CatPair arrow = arrow_pair();
  CHECK_NOTHROW(Diagram::constant(arrow.cat, s0(2)));
  CHECK_NOTHROW(sphere_diagram(arrow.cat, 3, {{"alpha", 2}}));
  CHECK_NOTHROW(sphere_diagram(arrow.cat, 3, {{"alpha", 0}}));

  CatPair sq = commutative_square_pair();
  try {
    sphere_diagram(sq.cat, 3, {{"betap", 0}});
    FAIL("accepted a non-commuting square");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAFunctor);
  }

  Diagram x = sphere_diagram(arrow.cat, 3, {{"alpha", 1}});
  Diagram y = sphere_diagram(arrow.cat, 3, {{"alpha", 2}});
  try {
    NatTrans::validate(x, y, {scalar(s0(3), 1), scalar(s0(3), 1)});
    FAIL("accepted a non-natural transformation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNatural);
  }
  CHECK_NOTHROW(NatTrans::validate(x, y, {scalar(s0(3), 1), scalar(s0(3), 2)}));
}

TEST_CASE("objectwise classes over D", "[diagram]") {
  Rng rng(31);
  CatPair arrow = arrow_pair();
  Diagram x = random_diagram(rng, arrow.cat, 2);
  NatTrans id = NatTrans::identity(x);
  for (DClass k : {DClass::Weq, DClass::Fib, DClass::TrivFib}) {
    CHECK(test_D_class(id, arrow.dset, k).holds);
    CHECK(test_D_class(id, arrow.cat->all_objects(), k).holds);
  }

  Diagram y = random_diagram(rng, arrow.cat, 2);
  CHECK(test_D_class(NatTrans::zero(x, y), {}, DClass::TrivFib).holds);

  // X(d) = S^0, X(c) = 0 mapping to S^0 with zero arrow: a quasi-iso only at d.
  Diagram a = sphere_diagram(arrow.cat, 2, {{"alpha", 0}});
  const ObjId d = arrow.cat->lookup_object("d"), c = arrow.cat->lookup_object("c");
  std::vector<ChainComplex> vals(2);
  vals[d] = s0(2);
  vals[c] = ChainComplex(2);
  std::vector<ChainMap> maps(3);
  for (MorId m = 0; m < 3; ++m) maps[m] = ChainMap::zero(vals[arrow.cat->source(m)], vals[arrow.cat->target(m)]);
  maps[arrow.cat->identity(d)] = ChainMap::identity(s0(2));
  Diagram partial = Diagram::validate(arrow.cat, 2, vals, maps);
  std::vector<ChainMap> comps(2);
  comps[d] = ChainMap::identity(s0(2));
  comps[c] = ChainMap::zero(ChainComplex(2), s0(2));
  NatTrans eta = NatTrans::validate(partial, a, comps);
  CHECK(test_D_class(eta, arrow.dset, DClass::Weq).holds);
  CHECK_FALSE(test_D_class(eta, arrow.cat->all_objects(), DClass::Weq).holds);
  CHECK_FALSE(test_D_class(eta, {c}, DClass::Fib).holds);
  CHECK_THROWS_AS(test_D_class(eta, {9}, DClass::Weq), Error);
}

TEST_CASE("restriction", "[diagram]") {
  Rng rng(32);
  CatPair sq = commutative_square_pair();
  Diagram x = random_square_diagram(rng, sq, 3, {0, 2, 2});
  CHECK(restrict_along(FunctorData::identity(sq.cat), x) == x);

  CatPair arrow = arrow_pair();
  Diagram ax = random_arrow_diagram(rng, arrow, 3, {0, 2, 2});
  Diagram rd = restrict_along(d_inclusion(arrow), ax);
  REQUIRE(rd.category().object_count() == 1);
  CHECK(rd.at(0) == ax.at(arrow.cat->lookup_object("d")));

  // Restriction along composed inclusions {e, d} -> D -> C.
  CatPtr dcat = make_cat(full_subcategory(*sq.cat, sq.dset));
  CatPtr ecat = make_cat(full_subcategory(*dcat, dcat->lookup_objects({"e", "d"})));
  FunctorData outer = FunctorData::inclusion(dcat, sq.cat);
  FunctorData inner = FunctorData::inclusion(ecat, dcat);
  CHECK(restrict_along(inner, restrict_along(outer, x)) == restrict_along(outer.after(inner), x));
}

TEST_CASE("left Kan extensions", "[diagram]") {
  Rng rng(33);
  SECTION("from a point: one copy per arrow out of d") {
    CatPair pair = multi_arrow_pair(3);
    const ObjId d = pair.cat->lookup_object("d"), c = pair.cat->lookup_object("c");
    FunctorData phi = point_at(pair.cat, d);
    ChainComplex s = random_complex(rng, 0, 2, 2, 3).complex;
    std::vector<ChainMap> maps{ChainMap::identity(s)};
    Diagram y = Diagram::validate(phi.source, 3, {s}, maps);
    LeftKan k = left_kan(phi, y);
    CHECK(homology_dims(k.value.at(c)).at(1) == 3 * homology_dims(s).at(1));
    CHECK(k.value.at(c).total_dim() == 3 * s.total_dim());
    CHECK(k.value.at(d).total_dim() == s.total_dim());
  }
  SECTION("full inclusion: unit is an isomorphism") {
    for (CatPair pair : {commutative_square_pair(), free_square_pair(), retract_pair(), multi_arrow_pair(2)}) {
      FunctorData incl = d_inclusion(pair);
      Diagram y = random_diagram(rng, incl.source, 2);
      LeftKan k = left_kan(incl, y);
      CHECK(objectwise_iso(k.unit));
      for (ObjId a = 0; a < incl.source->object_count(); ++a)
        CHECK(homology_dims(k.value.at(incl(a))) == homology_dims(y.at(a)));
    }
  }
  SECTION("terminal extension: value at the terminal object is the colimit over D") {
    CatPair term = terminal_extension_pair(*commutative_square_pair().cat);
    FunctorData incl = d_inclusion(term);
    Diagram y = random_diagram(rng, incl.source, 3);
    LeftKan k = left_kan(incl, y);
    ColimitResult colim = finite_colimit(*incl.source, y.values(), y.maps(), 3);
    const ObjId inf = term.cat->lookup_object("cinf");
    CHECK(homology_dims(k.value.at(inf)) == homology_dims(colim.object));
    CHECK(k.value.at(inf).total_dim() == colim.object.total_dim());
  }
  SECTION("the zero diagram extends to zero") {
    CatPair sq = commutative_square_pair();
    FunctorData incl = d_inclusion(sq);
    LeftKan k = left_kan(incl, Diagram::zero(incl.source, 2));
    CHECK(k.value == Diagram::zero(sq.cat, 2));
    RightKan r = right_kan(incl, Diagram::zero(incl.source, 2));
    CHECK(r.value == Diagram::zero(sq.cat, 2));
  }
}

TEST_CASE("right Kan extensions", "[diagram]") {
  Rng rng(34);
  SECTION("left-absorbant inclusion: zero outside, unchanged inside") {
    CatPair arrow = arrow_pair();
    FunctorData incl = d_inclusion(arrow);
    REQUIRE(is_left_absorbant(*arrow.cat, arrow.dset));
    Diagram y = random_diagram(rng, incl.source, 3);
    RightKan k = right_kan(incl, y);
    CHECK(k.value.at(arrow.cat->lookup_object("c")).is_zero());
    CHECK(k.value.at(arrow.cat->lookup_object("d")).total_dim() == y.at(0).total_dim());
    CHECK(objectwise_iso(k.counit));
  }
  SECTION("identity functor") {
    CatPair sq = commutative_square_pair();
    Diagram y = random_diagram(rng, sq.cat, 2);
    RightKan k = right_kan(FunctorData::identity(sq.cat), y);
    CHECK(objectwise_iso(k.counit));
    LeftKan l = left_kan(FunctorData::identity(sq.cat), y);
    CHECK(objectwise_iso(l.unit));
  }
  SECTION("glossy product and coproduct formulas") {
    for (auto ex : {stabilizer_funnel(4, 2), stabilizer_funnel(6, 3)}) {
      for (int t = 0; t < 5; ++t) {
        Diagram y = random_diagram(rng, ex.morphism.phi.source, t % 2 ? 3 : 2, {{0, 1, 2}, 1, true});
        CHECK(glossy_formula_check(Side::Left, ex.morphism, ex.witnesses, y));
      }
    }
    for (auto ex : {coset_funnel(4, 2), coset_funnel(6, 3)}) {
      for (int t = 0; t < 5; ++t) {
        Diagram y = random_diagram(rng, ex.morphism.phi.source, 2, {{0, 1, 2}, 1, true});
        CHECK(glossy_formula_check(Side::Right, ex.morphism, ex.witnesses, y));
      }
    }
    CatPair sq = commutative_square_pair();
    CatPtr dcat = make_cat(full_subcategory(*sq.cat, sq.dset));
    auto pm = PairMorphism::make(FunctorData::inclusion(dcat, sq.cat), dcat->all_objects(), sq.dset);
    Diagram y = random_diagram(rng, dcat, 3);
    CHECK(glossy_formula_check(Side::Left, pm, glossy(Side::Left, pm).witnesses, y));
    CHECK(glossy_formula_check(Side::Right, pm, glossy(Side::Right, pm).witnesses, y));

    GlossyExample bad = stabilizer_funnel(4, 2);
    bad.witnesses[0].entries.clear();
    CHECK_THROWS_AS(glossy_formula_check(Side::Left, bad.morphism, bad.witnesses,
                                         Diagram::zero(bad.morphism.phi.source, 2)),
                    Error);
  }
}

TEST_CASE("adjoint transposes", "[diagram]") {
  Rng rng(35);
  SECTION("identity on the extension transposes to the unit") {
    CatPair sq = commutative_square_pair();
    FunctorData incl = d_inclusion(sq);
    Diagram y = random_diagram(rng, incl.source, 2);
    LeftKan k = left_kan(incl, y);
    CHECK(adjoint_transpose(Transpose::IndToRes, incl, NatTrans::identity(k.value), y) == k.unit);
    RightKan r = right_kan(incl, y);
    CHECK(adjoint_transpose(Transpose::ExtToRes, incl, NatTrans::identity(r.value), y) == r.counit);
  }
  SECTION("the counit at c is the copairing of the arrow maps") {
    CatPair pair = multi_arrow_pair(2);
    FunctorData incl = d_inclusion(pair);
    Diagram x = random_multi_arrow_diagram(rng, pair, 3, {0, 2, 2});
    Diagram rx = restrict_along(incl, x);
    NatTrans counit = adjoint_transpose(Transpose::ResToInd, incl, NatTrans::identity(rx), x);
    LeftKan k = left_kan(incl, rx);
    const ObjId c = pair.cat->lookup_object("c");
    const ObjId d_src = incl.source->lookup_object("d");
    for (MorId a : pair.cat->hom(pair.cat->lookup_object("d"), c))
      CHECK(counit.at(c).after(k.leg(c, d_src, a)) == x.on(a));
  }
  SECTION("round trips are identities") {
    for (CatPair pair : {arrow_pair(), commutative_square_pair(), multi_arrow_pair(2), retract_pair()}) {
      FunctorData incl = d_inclusion(pair);
      for (int t = 0; t < 3; ++t) {
        Diagram y = random_diagram(rng, incl.source, 2, {{0, 1, 2}, 1, true});
        Diagram x = random_diagram(rng, pair.cat, 2, {{0, 1, 2}, 1, true});
        LeftKan k = left_kan(incl, y);
        NatTrans f = random_nat_trans(rng, nat_trans_basis(k.value, x), k.value, x);
        NatTrans g = adjoint_transpose(Transpose::IndToRes, incl, f, y);
        CHECK(adjoint_transpose(Transpose::ResToInd, incl, g, x) == f);

        Diagram rx = restrict_along(incl, x);
        NatTrans h = random_nat_trans(rng, nat_trans_basis(rx, y), rx, y);
        NatTrans hh = adjoint_transpose(Transpose::ResToExt, incl, h, x);
        CHECK(adjoint_transpose(Transpose::ExtToRes, incl, hh, y) == h);
      }
    }
  }
  SECTION("shape mismatches are reported") {
    CatPair arrow = arrow_pair();
    FunctorData incl = d_inclusion(arrow);
    Diagram y = Diagram::constant(incl.source, s0(2));
    Diagram x = Diagram::constant(arrow.cat, ChainComplex::sphere(1, 2));
    CHECK_THROWS_AS(adjoint_transpose(Transpose::IndToRes, incl, NatTrans::identity(x), y), Error);
  }
}

TEST_CASE("value functors", "[diagram]") {
  Rng rng(36);
  CatPair sq = commutative_square_pair();
  Diagram x = random_diagram(rng, sq.cat, 3);
  CHECK(apply_value_functor(x, std::nullopt) == x);
  CHECK(apply_value_functor(x, s0(3)) == x);
  ChainComplex p = ChainComplex::sphere(1, 3, 2);
  Diagram fx = apply_value_functor(x, p);
  CHECK_NOTHROW(Diagram::validate(fx.cat(), 3, fx.values(), fx.maps()));
  for (ObjId o = 0; o < sq.cat->object_count(); ++o)
    CHECK(homology_dims(fx.at(o)).at(1) == 2 * homology_dims(x.at(o)).at(0));
  CHECK_THROWS_AS(apply_value_functor(x, s0(2)), Error);
}

TEST_CASE("transformations and lifting over diagrams", "[diagram]") {
  Rng rng(37);
  CatPair sq = commutative_square_pair();
  Diagram x = random_diagram(rng, sq.cat, 2, {{0, 1, 2}, 1, true});
  Diagram y = random_diagram(rng, sq.cat, 2, {{0, 1, 2}, 1, true});
  for (const auto& t : nat_trans_basis(x, y)) CHECK_NOTHROW(NatTrans::validate(x, y, t.components()));

  NatTrans w = random_weak_equivalence(rng, x);
  CHECK(test_D_class(w, sq.cat->all_objects(), DClass::Weq).holds);

  // The projection x (+) y -> y is a trivial fibration only where x is acyclic,
  // but it always lifts maps out of free diagrams.
  Diagram sum = direct_sum(std::vector<Diagram>{x, y});
  std::vector<ChainMap> proj;
  for (ObjId o = 0; o < sq.cat->object_count(); ++o)
    proj.push_back(sum_projection({x.at(o), y.at(o)}, sum.at(o), 1));
  NatTrans pr = NatTrans::validate(sum, y, proj);
  CHECK(test_D_class(pr, sq.cat->all_objects(), DClass::Fib).holds);
  Diagram f = free_diagram(sq.cat, sq.cat->lookup_object("e"), s0(2));
  NatTrans v = random_nat_trans(rng, nat_trans_basis(f, y), f, y);
  auto lift = solve_lifting_from_zero(pr, v);
  REQUIRE(lift);
  CHECK(pr.after(*lift) == v);

  Diagram cone = mapping_cone(NatTrans::identity(x));
  for (ObjId o = 0; o < sq.cat->object_count(); ++o) CHECK(homology_dims(cone.at(o)).acyclic());
}
