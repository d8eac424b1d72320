#ifndef CODESCENT_SHAPES_HPP
#define CODESCENT_SHAPES_HPP

// Builders for the small categories that recur throughout: arrows, funnels of
// parallel arrows with a monoid acting at the source, squares, discrete and
// terminally extended categories.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codescent/fincat.hpp"

namespace codescent {

/// Finite cyclic monoid <t | t^(index+period) = t^index>. index = 0 gives Z/period.
struct CyclicMonoid {
  int index = 0;
  int period = 1;

  static CyclicMonoid group(int k) { return {0, k}; }
  int size() const { return index + period; }
  int reduce(int e) const { return e < size() ? e : index + (e - index) % period; }
  bool is_group() const { return index == 0; }
};

enum class MonoidAction {
  Trivial,  // alpha_j o t = alpha_j
  Shift,    // alpha_j o t^m = alpha_{(j + m) mod |A|}; needs |A| to divide the period
};

enum class ShapeKind {
  Arrow,
  MultiArrow,
  FunnelMonoid,
  CommutativeSquare,
  FreeSquare,
  Discrete,
  TerminalExtension,
  RetractPair,
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Arrow;
  int arrows = 1;  // |A| for MultiArrow and FunnelMonoid
  CyclicMonoid monoid;
  MonoidAction action = MonoidAction::Trivial;
  int objects = 2;                         // Discrete
  std::shared_ptr<const ShapeSpec> base;   // TerminalExtension
  std::optional<std::vector<std::string>> dset;  // overrides the default D
};

namespace detail {

class RawBuilder {
 public:
  void object(const std::string& o) {
    raw_.objects.push_back(o);
    morphism("id_" + o, o, o);
    raw_.identities[o] = "id_" + o;
  }
  void morphism(const std::string& name, const std::string& s, const std::string& t) {
    raw_.morphisms.push_back({name, s, t});
  }
  void compose(const std::string& g, const std::string& f, const std::string& r) { raw_.composition.push_back({g, f, r}); }
  FinCat build() const { return FinCat::validate(raw_); }

 private:
  RawCategory raw_;
};

inline std::string monoid_element(int e) { return e == 0 ? "id_d" : "t" + std::to_string(e); }

}  // namespace detail

inline CatPair arrow_pair() {
  detail::RawBuilder b;
  b.object("d");
  b.object("c");
  b.morphism("alpha", "d", "c");
  return CatPair::make(make_cat(b.build()), std::vector<std::string>{"d"});
}

/// Two objects d, c with a monoid M = <t> at d, |A| arrows d -> c, and only the
/// identity at c. D = {d}.
inline CatPair funnel_monoid_pair(CyclicMonoid m, int arrows, MonoidAction action) {
  if (arrows < 1) throw Error(ErrorKind::BadShapeParams, "the arrow set A must be non-empty");
  if (m.index < 0 || m.period < 1) throw Error(ErrorKind::BadShapeParams, "monoid needs index >= 0 and period >= 1");
  if (action == MonoidAction::Shift && m.period % arrows != 0) {
    throw Error(ErrorKind::BadShapeParams, "shift action needs |A| to divide the period");
  }
  detail::RawBuilder b;
  b.object("d");
  b.object("c");
  const int size = m.size();
  for (int e = 1; e < size; ++e) b.morphism(detail::monoid_element(e), "d", "d");
  auto arrow = [](int j) { return "alpha" + std::to_string(j + 1); };
  for (int j = 0; j < arrows; ++j) b.morphism(arrow(j), "d", "c");
  for (int x = 1; x < size; ++x)
    for (int y = 1; y < size; ++y) b.compose(detail::monoid_element(x), detail::monoid_element(y), detail::monoid_element(m.reduce(x + y)));
  for (int j = 0; j < arrows; ++j)
    for (int e = 1; e < size; ++e) {
      int k = action == MonoidAction::Shift ? (j + e) % arrows : j;
      b.compose(arrow(j), detail::monoid_element(e), arrow(k));
    }
  return CatPair::make(make_cat(b.build()), std::vector<std::string>{"d"});
}

inline CatPair multi_arrow_pair(int arrows) {
  if (arrows < 1) throw Error(ErrorKind::BadShapeParams, "multi_arrow needs |A| >= 1");
  return funnel_monoid_pair(CyclicMonoid{0, 1}, arrows, MonoidAction::Trivial);
}

namespace detail {
inline FinCat square(bool commutative) {
  RawBuilder b;
  for (auto o : {"e", "d", "dp", "c"}) b.object(o);
  b.morphism("alpha", "e", "d");
  b.morphism("alphap", "e", "dp");
  b.morphism("beta", "d", "c");
  b.morphism("betap", "dp", "c");
  b.morphism("gamma", "e", "c");
  b.compose("beta", "alpha", "gamma");
  if (commutative) {
    b.compose("betap", "alphap", "gamma");
  } else {
    b.morphism("gammap", "e", "c");
    b.compose("betap", "alphap", "gammap");
  }
  return b.build();
}
}  // namespace detail

/// beta o alpha = betap o alphap = gamma, with D = {e, d, dp}.
inline CatPair commutative_square_pair() {
  return CatPair::make(make_cat(detail::square(true)), std::vector<std::string>{"e", "d", "dp"});
}

/// Square without the relation, with D = {e}.
inline CatPair free_square_pair() {
  return CatPair::make(make_cat(detail::square(false)), std::vector<std::string>{"e"});
}

inline CatPair discrete_pair(int n, std::vector<std::string> dset = {"x0"}) {
  if (n < 0) throw Error(ErrorKind::BadShapeParams, "discrete needs n >= 0");
  detail::RawBuilder b;
  for (int i = 0; i < n; ++i) b.object("x" + std::to_string(i));
  if (n == 0) dset.clear();
  return CatPair::make(make_cat(b.build()), dset);
}

/// Adjoins a terminal object "cinf" to a base category; D = the base objects.
inline CatPair terminal_extension_pair(const FinCat& base) {
  RawCategory raw = base.raw();
  if (base.find_object("cinf")) throw Error(ErrorKind::BadShapeParams, "base already has an object named cinf");
  raw.objects.push_back("cinf");
  raw.morphisms.push_back({"id_cinf", "cinf", "cinf"});
  raw.identities["cinf"] = "id_cinf";
  auto to_inf = [&](ObjId o) { return "to_cinf_" + base.object_name(o); };
  for (ObjId o = 0; o < base.object_count(); ++o) raw.morphisms.push_back({to_inf(o), base.object_name(o), "cinf"});
  for (MorId m = 0; m < base.morphism_count(); ++m) {
    if (base.is_identity(m)) continue;
    raw.composition.push_back({to_inf(base.target(m)), base.morphism_name(m), to_inf(base.source(m))});
  }
  return CatPair::make(make_cat(FinCat::validate(raw)), base.objects());
}

/// d is a retract of c: alpha: d -> c, rho: c -> d, rho o alpha = id_d and
/// e = alpha o rho idempotent. D = {d}.
inline CatPair retract_pair() {
  detail::RawBuilder b;
  b.object("d");
  b.object("c");
  b.morphism("alpha", "d", "c");
  b.morphism("rho", "c", "d");
  b.morphism("e", "c", "c");
  b.compose("rho", "alpha", "id_d");
  b.compose("alpha", "rho", "e");
  b.compose("e", "alpha", "alpha");
  b.compose("rho", "e", "rho");
  b.compose("e", "e", "e");
  return CatPair::make(make_cat(b.build()), std::vector<std::string>{"d"});
}

inline CatPair build_shape(const ShapeSpec& s) {
  CatPair p;
  switch (s.kind) {
    case ShapeKind::Arrow: p = arrow_pair(); break;
    case ShapeKind::MultiArrow: p = multi_arrow_pair(s.arrows); break;
    case ShapeKind::FunnelMonoid: p = funnel_monoid_pair(s.monoid, s.arrows, s.action); break;
    case ShapeKind::CommutativeSquare: p = commutative_square_pair(); break;
    case ShapeKind::FreeSquare: p = free_square_pair(); break;
    case ShapeKind::Discrete: p = discrete_pair(s.objects); break;
    case ShapeKind::TerminalExtension: {
      CatPair base = s.base ? build_shape(*s.base) : discrete_pair(2);
      p = terminal_extension_pair(*base.cat);
      break;
    }
    case ShapeKind::RetractPair: p = retract_pair(); break;
  }
  if (s.dset) p = CatPair::make(p.cat, *s.dset);
  return p;
}

/// A morphism of pairs together with the witness sets it is known to admit.
struct GlossyExample {
  PairMorphism morphism;
  Side side;
  std::vector<GlossyWitness> witnesses;
};

/// Z/k acting on A = Z/orbit by shift; the subcategory keeps the stabilizer
/// of alpha1 at d and the single arrow alpha1. Left glossy with witnesses
/// t^l, 0 <= l < orbit.
inline GlossyExample stabilizer_funnel(int k, int orbit) {
  if (orbit < 1 || k % orbit != 0) throw Error(ErrorKind::BadShapeParams, "orbit size must divide k");
  CatPair ambient = funnel_monoid_pair(CyclicMonoid::group(k), orbit, MonoidAction::Shift);
  const FinCat& c = *ambient.cat;
  auto keep = [&](MorId m) {
    const std::string& n = c.morphism_name(m);
    if (n == "alpha1") return true;
    if (n[0] == 't') return std::stoi(n.substr(1)) % orbit == 0;
    return false;
  };
  auto sub = make_cat(subcategory(c, c.all_objects(), keep));
  ObjectSet b{sub->lookup_object("d")};
  auto pm = PairMorphism::make(FunctorData::inclusion(sub, ambient.cat), b, ambient.dset);
  GlossyWitness w{b[0], {}};
  for (int l = 0; l < orbit; ++l) w.entries.push_back({b[0], c.lookup_morphism(detail::monoid_element(l))});
  return {std::move(pm), Side::Left, {w}};
}

/// N = Z/k acting freely on A = Z/k; the subcategory keeps the subgroup
/// N' = <t^step> and A' = {alpha_j : step | j}. Right glossy with witnesses
/// t^l, 0 <= l < step (coset representatives).
inline GlossyExample coset_funnel(int k, int step) {
  if (step < 1 || k % step != 0) throw Error(ErrorKind::BadShapeParams, "step must divide k");
  CatPair ambient = funnel_monoid_pair(CyclicMonoid::group(k), k, MonoidAction::Shift);
  const FinCat& c = *ambient.cat;
  auto keep = [&](MorId m) {
    const std::string& n = c.morphism_name(m);
    if (n[0] == 't') return std::stoi(n.substr(1)) % step == 0;
    if (n.rfind("alpha", 0) == 0) return (std::stoi(n.substr(5)) - 1) % step == 0;
    return false;
  };
  auto sub = make_cat(subcategory(c, c.all_objects(), keep));
  ObjectSet b{sub->lookup_object("d")};
  auto pm = PairMorphism::make(FunctorData::inclusion(sub, ambient.cat), b, ambient.dset);
  GlossyWitness w{b[0], {}};
  for (int l = 0; l < step; ++l) w.entries.push_back({b[0], c.lookup_morphism(detail::monoid_element(l))});
  return {std::move(pm), Side::Right, {w}};
}

}  // namespace codescent

#endif  // CODESCENT_SHAPES_HPP
