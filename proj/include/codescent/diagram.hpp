#ifndef CODESCENT_DIAGRAM_HPP
#define CODESCENT_DIAGRAM_HPP

// Diagrams C -> Ch(F_p), natural transformations, restriction and the left
// and right Kan extensions computed pointwise over comma categories.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codescent/chain.hpp"
#include "codescent/error.hpp"
#include "codescent/fincat.hpp"

namespace codescent {

class Diagram {
 public:
  Diagram() = default;

  /// maps[m] is the chain map of morphism m. Checks functoriality.
  static Diagram validate(CatPtr cat, std::uint32_t prime, std::vector<ChainComplex> values, std::vector<ChainMap> maps) {
    check_functor_values(*cat, values, maps);
    for (const auto& v : values)
      if (!v.is_zero() && v.prime() != prime) throw Error(ErrorKind::PrimeMismatch, "value over the wrong field");
    return trusted(std::move(cat), prime, std::move(values), std::move(maps));
  }

  static Diagram trusted(CatPtr cat, std::uint32_t prime, std::vector<ChainComplex> values, std::vector<ChainMap> maps) {
    Diagram x;
    x.cat_ = std::move(cat);
    x.prime_ = prime;
    x.values_ = std::move(values);
    x.maps_ = std::move(maps);
    return x;
  }

  /// Fills identity maps; `given` must cover every non-identity morphism.
  static Diagram from_generators(CatPtr cat, std::uint32_t prime, std::vector<ChainComplex> values,
                                 const std::map<MorId, ChainMap>& given) {
    std::vector<ChainMap> maps;
    for (MorId m = 0; m < cat->morphism_count(); ++m) {
      auto it = given.find(m);
      if (it != given.end()) {
        maps.push_back(it->second);
      } else if (cat->is_identity(m)) {
        maps.push_back(ChainMap::identity(values.at(cat->source(m))));
      } else {
        throw Error(ErrorKind::NotAFunctor, "no map given for '" + cat->morphism_name(m) + "'");
      }
    }
    return validate(std::move(cat), prime, std::move(values), std::move(maps));
  }

  static Diagram constant(CatPtr cat, const ChainComplex& v) {
    std::vector<ChainComplex> values(cat->object_count(), v);
    std::vector<ChainMap> maps(cat->morphism_count(), ChainMap::identity(v));
    return trusted(std::move(cat), v.prime(), std::move(values), std::move(maps));
  }

  static Diagram zero(CatPtr cat, std::uint32_t prime) { return constant(std::move(cat), ChainComplex(prime)); }

  const CatPtr& cat() const { return cat_; }
  const FinCat& category() const { return *cat_; }
  std::uint32_t prime() const { return prime_; }
  const ChainComplex& at(ObjId o) const { return values_.at(o); }
  const ChainMap& on(MorId m) const { return maps_.at(m); }
  const std::vector<ChainComplex>& values() const { return values_; }
  const std::vector<ChainMap>& maps() const { return maps_; }

  /// Lowest and highest nonzero degree over the given objects ({0, -1} if none).
  std::pair<int, int> degree_range(const ObjectSet& objs) const {
    std::vector<ChainComplex> vs;
    for (auto o : objs) vs.push_back(values_.at(o));
    return joint_range(vs);
  }
  std::pair<int, int> degree_range() const { return joint_range(values_); }

  friend bool operator==(const Diagram& a, const Diagram& b) {
    if (a.cat_ != b.cat_ && !(a.cat_ && b.cat_ && *a.cat_ == *b.cat_)) return false;
    return a.values_ == b.values_ && a.maps_ == b.maps_;
  }

 private:
  CatPtr cat_;
  std::uint32_t prime_ = 2;
  std::vector<ChainComplex> values_;
  std::vector<ChainMap> maps_;
};

class NatTrans {
 public:
  NatTrans() = default;

  static NatTrans validate(Diagram source, Diagram target, std::vector<ChainMap> components) {
    const FinCat& c = source.category();
    if (!(c == target.category())) throw Error(ErrorKind::ShapeMismatch, "diagrams over different categories");
    if (components.size() != c.object_count()) throw Error(ErrorKind::ShapeMismatch, "wrong number of components");
    for (ObjId o = 0; o < c.object_count(); ++o) {
      if (!(components[o].source() == source.at(o)) || !(components[o].target() == target.at(o))) {
        throw Error(ErrorKind::ShapeMismatch, "component at '" + c.object_name(o) + "' has wrong source or target");
      }
    }
    for (MorId m = 0; m < c.morphism_count(); ++m) {
      if (c.is_identity(m)) continue;
      if (!(target.on(m).after(components[c.source(m)]) == components[c.target(m)].after(source.on(m)))) {
        throw Error(ErrorKind::NotNatural, "naturality fails at '" + c.morphism_name(m) + "'");
      }
    }
    return trusted(std::move(source), std::move(target), std::move(components));
  }

  static NatTrans trusted(Diagram source, Diagram target, std::vector<ChainMap> components) {
    NatTrans t;
    t.source_ = std::move(source);
    t.target_ = std::move(target);
    t.comp_ = std::move(components);
    return t;
  }

  static NatTrans identity(const Diagram& x) {
    std::vector<ChainMap> comps;
    for (const auto& v : x.values()) comps.push_back(ChainMap::identity(v));
    return trusted(x, x, std::move(comps));
  }

  static NatTrans zero(const Diagram& x, const Diagram& y) {
    std::vector<ChainMap> comps;
    for (ObjId o = 0; o < x.category().object_count(); ++o) comps.push_back(ChainMap::zero(x.at(o), y.at(o)));
    return trusted(x, y, std::move(comps));
  }

  const Diagram& source() const { return source_; }
  const Diagram& target() const { return target_; }
  const ChainMap& at(ObjId o) const { return comp_.at(o); }
  const std::vector<ChainMap>& components() const { return comp_; }

  /// this o first
  NatTrans after(const NatTrans& first) const {
    if (!(first.target_ == source_)) throw Error(ErrorKind::ShapeMismatch, "composing transformations with mismatched diagrams");
    std::vector<ChainMap> comps;
    for (std::size_t o = 0; o < comp_.size(); ++o) comps.push_back(comp_[o].after(first.comp_[o]));
    return trusted(first.source_, target_, std::move(comps));
  }

  friend NatTrans operator+(const NatTrans& a, const NatTrans& b) {
    std::vector<ChainMap> comps;
    for (std::size_t o = 0; o < a.comp_.size(); ++o) comps.push_back(a.comp_[o] + b.comp_.at(o));
    return trusted(a.source_, a.target_, std::move(comps));
  }
  NatTrans scaled(std::int64_t k) const {
    std::vector<ChainMap> comps;
    for (const auto& c : comp_) comps.push_back(c.scaled(k));
    return trusted(source_, target_, std::move(comps));
  }

  friend bool operator==(const NatTrans& a, const NatTrans& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.comp_ == b.comp_;
  }

 private:
  Diagram source_;
  Diagram target_;
  std::vector<ChainMap> comp_;
};

// ---------------------------------------------------------------------------
// Objectwise constructions.

inline Diagram direct_sum(const std::vector<Diagram>& xs) {
  if (xs.empty()) throw Error(ErrorKind::ShapeMismatch, "empty diagram sum");
  const CatPtr& cat = xs.front().cat();
  const std::uint32_t p = xs.front().prime();
  std::vector<ChainComplex> values;
  std::vector<ChainMap> maps;
  for (ObjId o = 0; o < cat->object_count(); ++o) {
    std::vector<ChainComplex> vs;
    for (const auto& x : xs) vs.push_back(x.at(o));
    values.push_back(direct_sum(vs, p));
  }
  for (MorId m = 0; m < cat->morphism_count(); ++m) {
    std::vector<ChainMap> fs;
    for (const auto& x : xs) fs.push_back(x.on(m));
    maps.push_back(direct_sum(fs, p));
  }
  return Diagram::trusted(cat, p, std::move(values), std::move(maps));
}

inline NatTrans direct_sum(const std::vector<NatTrans>& ts) {
  std::vector<Diagram> ss, tt;
  for (const auto& t : ts) {
    ss.push_back(t.source());
    tt.push_back(t.target());
  }
  Diagram s = direct_sum(ss), t = direct_sum(tt);
  std::vector<ChainMap> comps;
  for (ObjId o = 0; o < s.category().object_count(); ++o) {
    std::vector<ChainMap> fs;
    for (const auto& x : ts) fs.push_back(x.at(o));
    comps.push_back(direct_sum(fs, s.prime()));
  }
  return NatTrans::trusted(std::move(s), std::move(t), std::move(comps));
}

/// Objectwise mapping cone, cone_n = Y_n (+) X_{n-1}.
inline Diagram mapping_cone(const NatTrans& t) {
  const Diagram& x = t.source();
  const Diagram& y = t.target();
  const FinCat& c = x.category();
  std::vector<ChainComplex> values;
  for (ObjId o = 0; o < c.object_count(); ++o) values.push_back(mapping_cone(t.at(o)));
  std::vector<ChainMap> maps;
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    const ChainComplex& s = values[c.source(m)];
    const ChainComplex& u = values[c.target(m)];
    maps.push_back(ChainMap::trusted(s, u, [&](int n) {
      return block_diag({y.on(m).at(n), x.on(m).at(n - 1)}, x.prime());
    }));
  }
  return Diagram::trusted(x.cat(), x.prime(), std::move(values), std::move(maps));
}

enum class DClass { Weq, Fib, TrivFib };

struct DClassResult {
  bool holds = true;
  std::vector<std::pair<ObjId, bool>> detail;  // per object of D
};

/// Objectwise test over D: quasi-isomorphism, degreewise epi, or both.
inline DClassResult test_D_class(const NatTrans& eta, const ObjectSet& dset, DClass kind) {
  DClassResult r;
  for (auto d : dset) {
    if (d >= eta.source().category().object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(d));
    bool ok = true;
    if (kind != DClass::Fib) ok = ok && is_quasi_iso(eta.at(d)).holds;
    if (kind != DClass::Weq) ok = ok && is_degreewise_epi(eta.at(d));
    r.detail.push_back({d, ok});
    r.holds = r.holds && ok;
  }
  return r;
}

/// Phi^* X = X o Phi.
inline Diagram restrict_along(const FunctorData& phi, const Diagram& x) {
  if (!(*phi.target == x.category())) throw Error(ErrorKind::ShapeMismatch, "diagram is not over the target of the functor");
  std::vector<ChainComplex> values;
  std::vector<ChainMap> maps;
  for (ObjId a = 0; a < phi.source->object_count(); ++a) values.push_back(x.at(phi(a)));
  for (MorId m = 0; m < phi.source->morphism_count(); ++m) maps.push_back(x.on(phi.on_morphism(m)));
  return Diagram::trusted(phi.source, x.prime(), std::move(values), std::move(maps));
}

inline NatTrans restrict_along(const FunctorData& phi, const NatTrans& t) {
  std::vector<ChainMap> comps;
  for (ObjId a = 0; a < phi.source->object_count(); ++a) comps.push_back(t.at(phi(a)));
  return NatTrans::trusted(restrict_along(phi, t.source()), restrict_along(phi, t.target()), std::move(comps));
}

/// The map out of a colimit determined by a cocone (one map per summand).
inline ChainMap colimit_out(const ColimitResult& c, const std::vector<ChainMap>& cocone, const ChainComplex& target) {
  ChainMap from_sum = copair(cocone, target);
  return ChainMap::trusted(c.object, target, [&](int n) { return from_sum.at(n) * c.quotient.section_at(n); });
}

/// The map into a limit determined by a cone (one map per factor).
inline ChainMap limit_in(const LimitResult& l, const std::vector<ChainMap>& cone, const ChainComplex& source) {
  ChainMap to_sum = pair_into(source, cone);
  return ChainMap::trusted(source, l.object, [&](int n) { return l.kernel.left_inverse_at(n) * to_sum.at(n); });
}

namespace detail {
inline std::map<std::pair<ObjId, MorId>, std::size_t> comma_index(const CommaCat& k) {
  std::map<std::pair<ObjId, MorId>, std::size_t> idx;
  for (std::size_t x = 0; x < k.base_object.size(); ++x) idx[{k.base_object[x], k.label[x]}] = x;
  return idx;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Left Kan extension Phi_! Y(b) = colim over Phi/b of Y.

struct LeftKan {
  FunctorData phi;
  Diagram source;                    // Y over source(Phi)
  Diagram value;                     // Phi_! Y over target(Phi)
  std::vector<CommaCat> commas;      // Phi/b per b
  std::vector<ColimitResult> colims; // per b
  NatTrans unit;                     // Y -> Phi^* Phi_! Y

  /// Colimit leg at the comma object (a, beta) of b.
  const ChainMap& leg(ObjId b, ObjId a, MorId beta) const {
    return colims[b].legs.at(detail::comma_index(commas[b]).at({a, beta}));
  }
};

inline LeftKan left_kan(const FunctorData& phi, const Diagram& y) {
  if (!(*phi.source == y.category())) throw Error(ErrorKind::ShapeMismatch, "diagram is not over the source of the functor");
  const FinCat& c = *phi.target;
  const std::uint32_t p = y.prime();
  LeftKan k{phi, y, {}, {}, {}, {}};
  std::vector<ChainComplex> values;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    CommaCat cm = comma(CommaSide::Under, phi, b);
    std::vector<ChainComplex> vs;
    std::vector<ChainMap> ms;
    for (auto a : cm.base_object) vs.push_back(y.at(a));
    for (auto g : cm.base_morphism) ms.push_back(y.on(g));
    k.colims.push_back(finite_colimit(*cm.cat, vs, ms, p, false));
    values.push_back(k.colims.back().object);
    k.commas.push_back(std::move(cm));
  }
  std::vector<std::map<std::pair<ObjId, MorId>, std::size_t>> idx;
  for (const auto& cm : k.commas) idx.push_back(detail::comma_index(cm));
  std::vector<ChainMap> maps;
  for (MorId g = 0; g < c.morphism_count(); ++g) {
    const ObjId b = c.source(g), b2 = c.target(g);
    std::vector<ChainMap> cocone;
    for (std::size_t x = 0; x < k.commas[b].base_object.size(); ++x) {
      ObjId a = k.commas[b].base_object[x];
      cocone.push_back(k.colims[b2].legs[idx[b2].at({a, c.compose(g, k.commas[b].label[x])})]);
    }
    maps.push_back(colimit_out(k.colims[b], cocone, values[b2]));
  }
  k.value = Diagram::trusted(phi.target, p, std::move(values), std::move(maps));
  std::vector<ChainMap> unit;
  for (ObjId a = 0; a < phi.source->object_count(); ++a) {
    const ObjId b = phi(a);
    unit.push_back(k.colims[b].legs[idx[b].at({a, c.identity(b)})]);
  }
  k.unit = NatTrans::trusted(y, restrict_along(phi, k.value), std::move(unit));
  return k;
}

/// Phi_! applied to t: source.source -> target.source, between two extensions along the same functor.
inline NatTrans left_kan_map(const LeftKan& from, const LeftKan& to, const NatTrans& t) {
  const FinCat& c = *from.phi.target;
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    std::vector<ChainMap> cocone;
    for (std::size_t x = 0; x < from.commas[b].base_object.size(); ++x) {
      cocone.push_back(to.colims[b].legs[x].after(t.at(from.commas[b].base_object[x])));
    }
    comps.push_back(colimit_out(from.colims[b], cocone, to.value.at(b)));
  }
  return NatTrans::trusted(from.value, to.value, std::move(comps));
}

/// Counit Phi_! Phi^* X -> X, given the extension of the restriction of X.
inline NatTrans left_kan_counit(const LeftKan& ind_res, const Diagram& x) {
  const FinCat& c = x.category();
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    std::vector<ChainMap> cocone;
    for (auto beta : ind_res.commas[b].label) cocone.push_back(x.on(beta));
    comps.push_back(colimit_out(ind_res.colims[b], cocone, x.at(b)));
  }
  return NatTrans::trusted(ind_res.value, x, std::move(comps));
}

// ---------------------------------------------------------------------------
// Right Kan extension Phi_* Y(b) = lim over b/Phi of Y.

struct RightKan {
  FunctorData phi;
  Diagram source;
  Diagram value;
  std::vector<CommaCat> commas;     // b/Phi per b
  std::vector<LimitResult> limits;  // per b
  NatTrans counit;                  // Phi^* Phi_* Y -> Y

  const ChainMap& leg(ObjId b, ObjId a, MorId beta) const {
    return limits[b].legs.at(detail::comma_index(commas[b]).at({a, beta}));
  }
};

inline RightKan right_kan(const FunctorData& phi, const Diagram& y) {
  if (!(*phi.source == y.category())) throw Error(ErrorKind::ShapeMismatch, "diagram is not over the source of the functor");
  const FinCat& c = *phi.target;
  const std::uint32_t p = y.prime();
  RightKan k{phi, y, {}, {}, {}, {}};
  std::vector<ChainComplex> values;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    CommaCat cm = comma(CommaSide::Over, phi, b);
    std::vector<ChainComplex> vs;
    std::vector<ChainMap> ms;
    for (auto a : cm.base_object) vs.push_back(y.at(a));
    for (auto g : cm.base_morphism) ms.push_back(y.on(g));
    k.limits.push_back(finite_limit(*cm.cat, vs, ms, p, false));
    values.push_back(k.limits.back().object);
    k.commas.push_back(std::move(cm));
  }
  std::vector<std::map<std::pair<ObjId, MorId>, std::size_t>> idx;
  for (const auto& cm : k.commas) idx.push_back(detail::comma_index(cm));
  std::vector<ChainMap> maps;
  for (MorId g = 0; g < c.morphism_count(); ++g) {
    const ObjId b = c.source(g), b2 = c.target(g);
    std::vector<ChainMap> cone;
    for (std::size_t x = 0; x < k.commas[b2].base_object.size(); ++x) {
      ObjId a = k.commas[b2].base_object[x];
      cone.push_back(k.limits[b].legs[idx[b].at({a, c.compose(k.commas[b2].label[x], g)})]);
    }
    maps.push_back(limit_in(k.limits[b2], cone, values[b]));
  }
  k.value = Diagram::trusted(phi.target, p, std::move(values), std::move(maps));
  std::vector<ChainMap> counit;
  for (ObjId a = 0; a < phi.source->object_count(); ++a) {
    const ObjId b = phi(a);
    counit.push_back(k.limits[b].legs[idx[b].at({a, c.identity(b)})]);
  }
  k.counit = NatTrans::trusted(restrict_along(phi, k.value), y, std::move(counit));
  return k;
}

inline NatTrans right_kan_map(const RightKan& from, const RightKan& to, const NatTrans& t) {
  const FinCat& c = *from.phi.target;
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    std::vector<ChainMap> cone;
    for (std::size_t x = 0; x < to.commas[b].base_object.size(); ++x) {
      cone.push_back(t.at(to.commas[b].base_object[x]).after(from.limits[b].legs[x]));
    }
    comps.push_back(limit_in(to.limits[b], cone, from.value.at(b)));
  }
  return NatTrans::trusted(from.value, to.value, std::move(comps));
}

/// Unit X -> Phi_* Phi^* X, given the extension of the restriction of X.
inline NatTrans right_kan_unit(const RightKan& ext_res, const Diagram& x) {
  const FinCat& c = x.category();
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    std::vector<ChainMap> cone;
    for (auto beta : ext_res.commas[b].label) cone.push_back(x.on(beta));
    comps.push_back(limit_in(ext_res.limits[b], cone, x.at(b)));
  }
  return NatTrans::trusted(x, ext_res.value, std::move(comps));
}

// ---------------------------------------------------------------------------
// Adjoint transposes for Phi_! -| Phi^* -| Phi_*.

enum class Transpose {
  IndToRes,  // Phi_! Y -> X   gives  Y -> Phi^* X      (other = Y)
  ResToInd,  // Y -> Phi^* X   gives  Phi_! Y -> X      (other = X)
  ResToExt,  // Phi^* X -> Y   gives  X -> Phi_* Y      (other = X)
  ExtToRes,  // X -> Phi_* Y   gives  Phi^* X -> Y      (other = Y)
};

inline NatTrans adjoint_transpose(Transpose dir, const FunctorData& phi, const NatTrans& t, const Diagram& other) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::ShapeMismatch, what);
  };
  switch (dir) {
    case Transpose::IndToRes: {
      LeftKan k = left_kan(phi, other);
      require(t.source() == k.value, "transformation does not start at the left Kan extension");
      return restrict_along(phi, t).after(k.unit);
    }
    case Transpose::ResToInd: {
      require(t.target() == restrict_along(phi, other), "transformation does not end at the restriction");
      LeftKan from = left_kan(phi, t.source());
      LeftKan to = left_kan(phi, t.target());
      return left_kan_counit(to, other).after(left_kan_map(from, to, t));
    }
    case Transpose::ResToExt: {
      require(t.source() == restrict_along(phi, other), "transformation does not start at the restriction");
      RightKan from = right_kan(phi, t.source());
      RightKan to = right_kan(phi, t.target());
      return right_kan_map(from, to, t).after(right_kan_unit(from, other));
    }
    case Transpose::ExtToRes: {
      RightKan k = right_kan(phi, other);
      require(t.target() == k.value, "transformation does not end at the right Kan extension");
      return k.counit.after(restrict_along(phi, t));
    }
  }
  throw Error(ErrorKind::ShapeMismatch, "unknown transpose direction");
}

// ---------------------------------------------------------------------------
// Product and coproduct formulas for glossy morphisms of pairs.

inline bool is_iso(const ChainMap& f) {
  auto [lo, hi] = joint_range(f.source(), f.target());
  for (int n = lo; n <= hi; ++n) {
    if (f.source().dim(n) != f.target().dim(n) || rank(f.at(n)) != f.source().dim(n)) return false;
  }
  return true;
}

/// Left: the comparison Phi^* Phi_* Y(b) -> prod_i Y(b_i) built from the limit
/// legs at (b_i, beta_i). Right: sum_j Y(b_j) -> Phi^* Phi_! Y(b) built from
/// the colimit legs at (b_j, beta_j). Returns whether every comparison is an iso.
inline bool glossy_formula_check(Side side, const PairMorphism& pm, const std::vector<GlossyWitness>& witnesses,
                                 const Diagram& y) {
  for (const auto& w : witnesses) {
    std::string why;
    if (!verify_glossy_witness(side, pm, w, &why)) throw Error(ErrorKind::InvalidWitness, why);
  }
  const FunctorData& phi = pm.phi;
  if (side == Side::Left) {
    RightKan k = right_kan(phi, y);
    for (const auto& w : witnesses) {
      const ObjId pb = phi(w.base);
      std::vector<ChainMap> legs;
      for (const auto& e : w.entries) legs.push_back(k.leg(pb, e.object, e.morphism));
      if (!is_iso(pair_into(k.value.at(pb), legs))) return false;
    }
  } else {
    LeftKan k = left_kan(phi, y);
    for (const auto& w : witnesses) {
      const ObjId pb = phi(w.base);
      std::vector<ChainMap> legs;
      for (const auto& e : w.entries) legs.push_back(k.leg(pb, e.object, e.morphism));
      if (!is_iso(copair(legs, k.value.at(pb)))) return false;
    }
  }
  return true;
}

/// F o X for F = (- (x) P), or F = identity when p is absent.
inline Diagram apply_value_functor(const Diagram& x, const std::optional<ChainComplex>& p) {
  if (!p) return x;
  if (!p->is_zero() && p->prime() != x.prime()) throw Error(ErrorKind::PrimeMismatch, "value functor over a different field");
  std::vector<ChainComplex> values;
  std::vector<ChainMap> maps;
  for (const auto& v : x.values()) values.push_back(tensor(v, *p));
  for (const auto& m : x.maps()) maps.push_back(tensor_with(m, *p));
  return Diagram::trusted(x.cat(), x.prime(), std::move(values), std::move(maps));
}

inline NatTrans apply_value_functor(const NatTrans& t, const std::optional<ChainComplex>& p) {
  if (!p) return t;
  std::vector<ChainMap> comps;
  for (const auto& c : t.components()) comps.push_back(tensor_with(c, *p));
  return NatTrans::trusted(apply_value_functor(t.source(), p), apply_value_functor(t.target(), p), std::move(comps));
}

// ---------------------------------------------------------------------------
// Linear systems over whole diagrams.

namespace detail {

// One unknown block h_{c,n}: target(c)_n x source(c)_n per object and degree.
struct DiagramUnknowns {
  std::vector<std::map<int, std::size_t>> id;

  static DiagramUnknowns add(BlockSystem& sys, const Diagram& s, const Diagram& t) {
    DiagramUnknowns u;
    for (ObjId c = 0; c < s.category().object_count(); ++c) {
      u.id.emplace_back();
      const ChainComplex& sc = s.at(c);
      for (int n = sc.lo(); n <= sc.hi(); ++n) u.id.back()[n] = sys.add_unknown(t.at(c).dim(n), sc.dim(n));
    }
    return u;
  }
  std::optional<std::size_t> at(ObjId c, int n) const {
    auto it = id[c].find(n);
    if (it == id[c].end()) return std::nullopt;
    return it->second;
  }
};

// Chain-map and naturality equations for h: s -> t.
inline void add_map_equations(BlockSystem& sys, const DiagramUnknowns& u, const Diagram& s, const Diagram& t) {
  const FinCat& cat = s.category();
  const std::uint32_t p = s.prime();
  for (ObjId c = 0; c < cat.object_count(); ++c) {
    const ChainComplex& sc = s.at(c);
    if (sc.is_zero()) continue;
    for (int n = sc.lo(); n <= sc.hi() + 1; ++n) {
      std::vector<BlockSystem::Term> terms;
      if (auto k = u.at(c, n)) terms.push_back({t.at(c).d(n), *k, std::nullopt});
      if (auto k = u.at(c, n - 1)) terms.push_back({std::nullopt, *k, -sc.d(n)});
      if (!terms.empty()) sys.add_equation(terms, Matrix(t.at(c).dim(n - 1), sc.dim(n), p));
    }
  }
  for (MorId m = 0; m < cat.morphism_count(); ++m) {
    if (cat.is_identity(m)) continue;
    const ObjId a = cat.source(m), b = cat.target(m);
    auto [lo, hi] = joint_range(s.at(a), s.at(b));
    for (int n = lo; n <= hi; ++n) {
      std::vector<BlockSystem::Term> terms;
      if (auto k = u.at(a, n)) terms.push_back({t.on(m).at(n), *k, std::nullopt});
      if (auto k = u.at(b, n)) terms.push_back({std::nullopt, *k, -s.on(m).at(n)});
      if (!terms.empty()) sys.add_equation(terms, Matrix(t.at(b).dim(n), s.at(a).dim(n), p));
    }
  }
}

inline NatTrans assemble(const DiagramUnknowns& u, const std::vector<Matrix>& blocks, const Diagram& s, const Diagram& t) {
  std::vector<ChainMap> comps;
  for (ObjId c = 0; c < s.category().object_count(); ++c) {
    comps.push_back(ChainMap::trusted(s.at(c), t.at(c), [&](int n) { return blocks[*u.at(c, n)]; }));
  }
  return NatTrans::trusted(s, t, std::move(comps));
}

}  // namespace detail

/// Number of scalar unknowns a transformation s -> t has.
inline std::size_t nat_trans_unknowns(const Diagram& s, const Diagram& t) {
  std::size_t total = 0;
  for (ObjId c = 0; c < s.category().object_count(); ++c) {
    for (int n = s.at(c).lo(); n <= s.at(c).hi(); ++n) total += s.at(c).dim(n) * t.at(c).dim(n);
  }
  return total;
}

inline std::vector<NatTrans> nat_trans_basis(const Diagram& s, const Diagram& t) {
  BlockSystem sys(s.prime());
  auto u = detail::DiagramUnknowns::add(sys, s, t);
  detail::add_map_equations(sys, u, s, t);
  std::vector<NatTrans> out;
  for (const auto& blocks : sys.homogeneous_basis()) out.push_back(detail::assemble(u, blocks, s, t));
  return out;
}

/// Finds h: target(i) -> source(p) with h o i = top and p o h = bottom, if any.
inline std::optional<NatTrans> solve_lifting(const NatTrans& i, const NatTrans& p, const NatTrans& top,
                                             const NatTrans& bottom) {
  if (!(p.after(top) == bottom.after(i))) throw Error(ErrorKind::NonCommutingSquare, "p o top != bottom o i");
  const Diagram& b = i.target();
  const Diagram& x = p.source();
  BlockSystem sys(b.prime());
  auto u = detail::DiagramUnknowns::add(sys, b, x);
  detail::add_map_equations(sys, u, b, x);
  for (ObjId c = 0; c < b.category().object_count(); ++c) {
    for (int n = b.at(c).lo(); n <= b.at(c).hi(); ++n) {
      const std::size_t k = *u.at(c, n);
      sys.add_equation({{std::nullopt, k, i.at(c).at(n)}}, top.at(c).at(n));
      sys.add_equation({{p.at(c).at(n), k, std::nullopt}}, bottom.at(c).at(n));
    }
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return detail::assemble(u, *sol, b, x);
}

/// Lifts v: z -> w through p: y -> w, i.e. the square with 0 -> z on the left.
inline std::optional<NatTrans> solve_lifting_from_zero(const NatTrans& p, const NatTrans& v) {
  Diagram zero = Diagram::zero(v.source().cat(), v.source().prime());
  NatTrans i = NatTrans::zero(zero, v.source());
  return solve_lifting(i, p, NatTrans::zero(zero, p.source()), v);
}

}  // namespace codescent

#endif  // CODESCENT_DIAGRAM_HPP
