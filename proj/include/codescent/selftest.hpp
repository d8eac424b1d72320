#ifndef CODESCENT_SELFTEST_HPP
#define CODESCENT_SELFTEST_HPP

// Seeded oracle checks comparing the codescent machinery with closed-form
// criteria, reduction invariance and adjunction identities. Used by the
// `selftest` command and by the acceptance suite.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "codescent/codescent.hpp"
#include "codescent/diagram.hpp"
#include "codescent/random.hpp"
#include "codescent/shapes.hpp"
#include "codescent/surgery.hpp"

namespace codescent {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = true;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string detail;  // first failure, if any
  double seconds = 0;
};

namespace selftest {

inline constexpr std::uint32_t kPrimes[] = {2, 3};

/// Random diagram suited to the shape: the dedicated generators where the
/// closed-form criterion is known, the generic one elsewhere.
inline Diagram diagram_for(Rng& rng, ShapeKind kind, const CatPair& pair, std::uint32_t p, const ComplexShape& cs) {
  switch (kind) {
    case ShapeKind::Arrow: return random_arrow_diagram(rng, pair, p, cs);
    case ShapeKind::MultiArrow: return random_multi_arrow_diagram(rng, pair, p, cs);
    case ShapeKind::CommutativeSquare: return random_square_diagram(rng, pair, p, cs);
    case ShapeKind::FreeSquare: return random_free_square_diagram(rng, pair, p, cs);
    default: return random_diagram(rng, pair.cat, p, DiagramShape{cs, 2, true});
  }
}

struct NamedShape {
  std::string name;
  ShapeKind kind;
  CatPair pair;
};

/// Directed pairs covering every builder.
inline std::vector<NamedShape> directed_shapes() {
  auto arrow_spec = std::make_shared<const ShapeSpec>(ShapeSpec{ShapeKind::Arrow});
  return {
      {"arrow", ShapeKind::Arrow, arrow_pair()},
      {"multi-arrow-1", ShapeKind::MultiArrow, multi_arrow_pair(1)},
      {"multi-arrow-2", ShapeKind::MultiArrow, multi_arrow_pair(2)},
      {"multi-arrow-3", ShapeKind::MultiArrow, multi_arrow_pair(3)},
      {"square", ShapeKind::CommutativeSquare, commutative_square_pair()},
      {"free-square", ShapeKind::FreeSquare, free_square_pair()},
      {"discrete-3", ShapeKind::Discrete, discrete_pair(3)},
      {"terminal-over-discrete", ShapeKind::TerminalExtension, terminal_extension_pair(*discrete_pair(2).cat)},
      {"terminal-over-arrow", ShapeKind::TerminalExtension, terminal_extension_pair(*arrow_pair().cat)},
      {"retract", ShapeKind::RetractPair, retract_pair()},
  };
}

/// All builders, including non-directed funnels.
inline std::vector<NamedShape> all_shapes() {
  auto v = directed_shapes();
  v.push_back({"funnel-Z2", ShapeKind::FunnelMonoid, funnel_monoid_pair(CyclicMonoid::group(2), 1, MonoidAction::Trivial)});
  v.push_back({"funnel-Z2-shift", ShapeKind::FunnelMonoid, funnel_monoid_pair(CyclicMonoid::group(2), 2, MonoidAction::Shift)});
  v.push_back({"funnel-N-1-1", ShapeKind::FunnelMonoid, funnel_monoid_pair(CyclicMonoid{1, 1}, 1, MonoidAction::Trivial)});
  return v;
}

class Tally {
 public:
  Tally(int id, std::string name) : start_(std::chrono::steady_clock::now()) {
    r_.id = id;
    r_.name = std::move(name);
  }
  void check(bool ok, const std::function<std::string()>& what) {
    ++r_.trials;
    if (ok) return;
    ++r_.failures;
    r_.passed = false;
    if (r_.detail.empty()) r_.detail = what();
  }
  void fail(const std::string& what) { check(false, [&] { return what; }); }
  CriterionResult done() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r_;
  }

 private:
  CriterionResult r_;
  std::chrono::steady_clock::time_point start_;
};

inline std::string describe(const std::string& shape, std::size_t trial, std::uint32_t p) {
  std::ostringstream s;
  s << shape << " trial " << trial << " p=" << p;
  return s.str();
}

}  // namespace selftest

/// Arrow pair: verdict at c agrees with "X(alpha) is a quasi-iso".
inline CriterionResult criterion_arrow(std::uint64_t seed = 1, std::size_t trials = 200) {
  selftest::Tally t(1, "arrow-category equivalence");
  Rng rng(seed);
  CatPair pair = arrow_pair();
  const ObjId c = pair.cat->lookup_object("c");
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint32_t p = selftest::kPrimes[i % 2];
    Diagram x = random_arrow_diagram(rng, pair, p, ComplexShape{0, 4, 8});
    const bool oracle = oracle_criterion(OracleExample::Arrow, x);
    const Verdict v = codescent_at(x, pair, c);
    t.check(v.kind != Verdict::Kind::HoldsUpTo && v.in_locus() == oracle,
            [&] { return selftest::describe("arrow", i, p) + ": verdict " + to_string(v) + ", oracle " + (oracle ? "true" : "false"); });
  }
  return t.done();
}

/// Multi-arrow funnel: verdict at c agrees with sum_A X(d) -> X(c) being a
/// quasi-iso, plus the forced failure with identities on S^0 and |A| = 2.
inline CriterionResult criterion_multi_arrow(std::uint64_t seed = 2, std::size_t trials = 100) {
  selftest::Tally t(2, "multi-arrow funnel");
  Rng rng(seed);
  for (int arrows = 1; arrows <= 3; ++arrows) {
    CatPair pair = multi_arrow_pair(arrows);
    const ObjId c = pair.cat->lookup_object("c");
    for (std::size_t i = 0; i < trials; ++i) {
      const std::uint32_t p = selftest::kPrimes[i % 2];
      Diagram x = random_multi_arrow_diagram(rng, pair, p, ComplexShape{0, 3, 2});
      const bool oracle = oracle_criterion(OracleExample::MultiArrow, x);
      const Verdict v = codescent_at(x, pair, c);
      t.check(v.kind != Verdict::Kind::HoldsUpTo && v.in_locus() == oracle, [&] {
        return selftest::describe("multi-arrow-" + std::to_string(arrows), i, p) + ": verdict " + to_string(v);
      });
    }
  }
  CatPair pair = multi_arrow_pair(2);
  Diagram x = Diagram::constant(pair.cat, ChainComplex::sphere(0, 2));
  const Verdict v = codescent_at(x, pair, pair.cat->lookup_object("c"));
  const bool oracle = oracle_criterion(OracleExample::MultiArrow, x);
  t.check(!oracle && v == Verdict::fails(0, 1), [&] { return "constant S^0 with two arrows: " + to_string(v); });
  return t.done();
}

/// Commutative square against the homotopy-pushout criterion, free square
/// against the criterion on the two composites.
inline CriterionResult criterion_square(std::uint64_t seed = 3, std::size_t trials = 100) {
  selftest::Tally t(3, "commutative and free square");
  Rng rng(seed);
  struct Case {
    std::string name;
    CatPair pair;
    OracleExample ex;
    ShapeKind kind;
  };
  std::vector<Case> cases{{"square", commutative_square_pair(), OracleExample::Square, ShapeKind::CommutativeSquare},
                          {"free-square", free_square_pair(), OracleExample::FreeSquare, ShapeKind::FreeSquare}};
  for (const auto& cs : cases) {
    const ObjId c = cs.pair.cat->lookup_object("c");
    for (std::size_t i = 0; i < trials; ++i) {
      const std::uint32_t p = selftest::kPrimes[i % 2];
      Diagram x = selftest::diagram_for(rng, cs.kind, cs.pair, p, ComplexShape{0, 2, 2});
      const bool oracle = oracle_criterion(cs.ex, x);
      CodescentReport r = codescent_locus(x, cs.pair);
      // The free square's criterion covers d and dp as well as c.
      bool got = r.verdicts[c].in_locus();
      if (cs.ex == OracleExample::FreeSquare) got = r.all_hold();
      t.check(!r.inconclusive && got == oracle,
              [&] { return selftest::describe(cs.name, i, p) + ": verdict at c " + to_string(r.verdicts[c]); });
    }
  }
  return t.done();
}

/// Verdicts are unchanged by every reduction and by cover recombination.
inline CriterionResult criterion_surgery(std::uint64_t seed = 4, std::size_t trials = 100) {
  selftest::Tally t(4, "surgery invariance");
  Rng rng(seed);
  auto shapes = selftest::all_shapes();
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& sh = shapes[i % shapes.size()];
    const std::uint32_t p = selftest::kPrimes[(i / shapes.size()) % 2];
    CodescentOptions opt;
    opt.strategy = (i / 2) % 2 == 0 ? Strategy::Bar : Strategy::IndBase;
    opt.cutoff = 5;
    const bool funnel = sh.kind == ShapeKind::FunnelMonoid;
    Diagram x = selftest::diagram_for(rng, sh.kind, sh.pair, p, funnel ? ComplexShape{0, 1, 1} : ComplexShape{0, 2, 2});
    const FinCat& cat = *sh.pair.cat;
    CodescentReport whole = codescent_locus(x, sh.pair, opt);
    auto where = [&](const std::string& what, ObjId c, const Verdict& got) {
      return selftest::describe(sh.name, i, p) + " [" + to_string(opt.strategy) + "] " + what + " at '" + cat.object_name(c) +
             "': " + to_string(got) + " vs " + to_string(whole.verdicts[c]);
    };
    for (ObjId c = 0; c < cat.object_count(); ++c) {
      const Verdict& ref = whole.verdicts[c];
      std::vector<Reduction> reds{reduce_prune_objects(x, sh.pair, c), reduce_prune_morphisms(x, sh.pair, c),
                                  reduce_funnel(x, sh.pair, c)};
      if (!sh.pair.in_d(c)) reds.push_back(reduce_strict_funnel(x, sh.pair, c));
      for (const auto& red : reds) {
        const Verdict v = verdict_at_focus(red.output, opt);
        t.check(v == ref, [&] { return where(red.name, c, v); });
      }
    }
    auto cover = funnel_cover(sh.pair);
    cover.push_back(cat.all_objects());
    auto parts = cover_split(x, sh.pair, cover);
    std::vector<CodescentReport> reports;
    for (const auto& part : parts) reports.push_back(codescent_locus(part.x, part.pair, opt));
    auto combined = combine_cover(sh.pair, parts, reports);
    for (ObjId c = 0; c < cat.object_count(); ++c) t.check(combined[c] == whole.verdicts[c], [&] { return where("cover", c, combined[c]); });
  }
  return t.done();
}

/// Unit of (ind, res) on full inclusions, product and coproduct formulas on
/// glossy funnels, and round trips of adjoint transposes.
inline CriterionResult criterion_adjunction(std::uint64_t seed = 5, std::size_t trials = 50) {
  selftest::Tally t(5, "adjunction and formula suite");
  Rng rng(seed);
  auto shapes = selftest::all_shapes();
  const DiagramShape small{{0, 1, 2}, 1, true};
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& sh = shapes[i % shapes.size()];
    const std::uint32_t p = selftest::kPrimes[i % 2];
    const FinCat& cat = *sh.pair.cat;
    ObjectSet a;
    for (ObjId o = 0; o < cat.object_count(); ++o)
      if (draw(rng, 2) == 0) a.push_back(o);
    if (a.empty()) a.push_back(draw(rng, cat.object_count()));
    CatPtr sub = make_cat(full_subcategory(cat, a));
    FunctorData incl = FunctorData::inclusion(sub, sh.pair.cat);
    Diagram y = random_diagram(rng, sub, p, small);
    LeftKan ind = left_kan(incl, y);
    RightKan ext = right_kan(incl, y);
    bool ok = true;
    for (ObjId o = 0; o < sub->object_count(); ++o) ok = ok && is_iso(ind.unit.at(o)) && is_iso(ext.counit.at(o));
    t.check(ok, [&] { return selftest::describe(sh.name, i, p) + ": unit or counit of a full inclusion is not an iso"; });

    // Transposes: a random map out of ind Y and into ext Y, sent there and back.
    Diagram x = random_diagram(rng, sh.pair.cat, p, small);
    auto pick = [&](const Diagram& s, const Diagram& tg) {
      if (nat_trans_unknowns(s, tg) > 3000) return NatTrans::zero(s, tg);
      return random_nat_trans(rng, nat_trans_basis(s, tg), s, tg);
    };
    NatTrans f = pick(ind.value, x);
    NatTrans f_back = adjoint_transpose(Transpose::ResToInd, incl, adjoint_transpose(Transpose::IndToRes, incl, f, y), x);
    NatTrans g = pick(x, ext.value);
    NatTrans g_back = adjoint_transpose(Transpose::ResToExt, incl, adjoint_transpose(Transpose::ExtToRes, incl, g, y), x);
    t.check(f_back == f && g_back == g, [&] { return selftest::describe(sh.name, i, p) + ": transpose round trip differs"; });
  }
  struct Glossy {
    std::string name;
    GlossyExample ex;
  };
  std::vector<Glossy> gl{{"stabilizer-funnel(4,2)", stabilizer_funnel(4, 2)},
                         {"stabilizer-funnel(6,3)", stabilizer_funnel(6, 3)},
                         {"coset-funnel(4,2)", coset_funnel(4, 2)},
                         {"coset-funnel(6,3)", coset_funnel(6, 3)}};
  for (const auto& g : gl) {
    for (std::size_t i = 0; i < 10; ++i) {
      const std::uint32_t p = selftest::kPrimes[i % 2];
      Diagram y = random_diagram(rng, g.ex.morphism.phi.source, p, small);
      const bool ok = glossy_formula_check(g.ex.side, g.ex.morphism, g.ex.witnesses, y);
      t.check(ok, [&] { return selftest::describe(g.name, i, p) + ": comparison map is not an iso"; });
    }
  }
  return t.done();
}

/// Bar and ind-base agree on directed pairs; loci are invariant under
/// C-weak equivalences and under tensoring with P when H(P) != 0.
inline CriterionResult criterion_strategies(std::uint64_t seed = 6, std::size_t trials = 100, std::size_t flex_trials = 50) {
  selftest::Tally t(6, "strategy independence and flexibility");
  Rng rng(seed);
  auto shapes = selftest::directed_shapes();
  CodescentOptions bar, ind;
  ind.strategy = Strategy::IndBase;
  for (const auto& sh : shapes) {
    for (std::size_t i = 0; i < trials; ++i) {
      const std::uint32_t p = selftest::kPrimes[i % 2];
      Diagram x = selftest::diagram_for(rng, sh.kind, sh.pair, p, ComplexShape{0, 2, 2});
      CodescentReport a = codescent_locus(x, sh.pair, bar);
      CodescentReport b = codescent_locus(x, sh.pair, ind);
      t.check(a.verdicts == b.verdicts, [&] {
        for (ObjId o = 0; o < a.verdicts.size(); ++o) {
          if (!(a.verdicts[o] == b.verdicts[o])) {
            return selftest::describe(sh.name, i, p) + ": at '" + sh.pair.cat->object_name(o) + "' bar " + to_string(a.verdicts[o]) +
                   ", ind-base " + to_string(b.verdicts[o]);
          }
        }
        return std::string("?");
      });
    }
  }
  const DiagramShape small{{0, 1, 2}, 1, true};
  for (std::size_t i = 0; i < flex_trials; ++i) {
    const auto& sh = shapes[i % shapes.size()];
    const std::uint32_t p = selftest::kPrimes[i % 2];
    Diagram x = selftest::diagram_for(rng, sh.kind, sh.pair, p, ComplexShape{0, 2, 2});
    CodescentReport base = codescent_locus(x, sh.pair);

    NatTrans w = random_weak_equivalence(rng, x, small);
    CodescentReport moved = codescent_locus(w.target(), sh.pair);
    t.check(moved.locus == base.locus, [&] { return selftest::describe(sh.name, i, p) + ": locus changed along a weak equivalence"; });

    ChainComplex pc;
    do {
      pc = random_complex(rng, ComplexShape{-1, 1, 2}, p).complex;
    } while (homology_dims(pc).acyclic());
    CodescentReport tens = codescent_locus(apply_value_functor(x, pc), sh.pair);
    t.check(tens.locus == base.locus, [&] { return selftest::describe(sh.name, i, p) + ": locus changed after tensoring"; });
  }
  return t.done();
}

/// Criteria 1 to 6 with their default seeds.
inline std::vector<CriterionResult> run_selftest(std::uint64_t seed = 0) {
  return {criterion_arrow(seed + 1),   criterion_multi_arrow(seed + 2), criterion_square(seed + 3),
          criterion_surgery(seed + 4), criterion_adjunction(seed + 5),  criterion_strategies(seed + 6)};
}

}  // namespace codescent

#endif  // CODESCENT_SELFTEST_HPP
