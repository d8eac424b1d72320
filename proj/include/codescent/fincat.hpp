#ifndef CODESCENT_FINCAT_HPP
#define CODESCENT_FINCAT_HPP

// Finite categories given by explicit composition tables, functors between
// them, comma categories, and the combinatorial predicates on object subsets.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "codescent/error.hpp"

namespace codescent {

using ObjId = std::size_t;
using MorId = std::size_t;
using ObjectSet = std::vector<ObjId>;  // kept sorted and duplicate-free

inline ObjectSet normalized(ObjectSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const ObjectSet& s, ObjId o) { return std::binary_search(s.begin(), s.end(), o); }

/// Unvalidated description of a category, as read from a file or produced by a
/// builder. Composites are triples (g, f, g o f) naming morphisms.
struct RawCategory {
  struct Morphism {
    std::string name, source, target;
  };
  struct Composite {
    std::string g, f, result;
  };
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::map<std::string, std::string> identities;  // object -> identity morphism
  std::vector<Composite> composition;
};

class FinCat {
 public:
  struct MorphismInfo {
    std::string name;
    ObjId source;
    ObjId target;
  };

  /// Checks the category axioms exhaustively. Composites with an identity may be
  /// omitted from the table; if listed they must agree with the identity law.
  static FinCat validate(const RawCategory& raw) {
    FinCat c;
    for (const auto& o : raw.objects) {
      if (!c.object_index_.emplace(o, c.objects_.size()).second) {
        throw Error(ErrorKind::BadCategory, "duplicate object '" + o + "'");
      }
      c.objects_.push_back(o);
    }
    for (const auto& m : raw.morphisms) {
      if (!c.morphism_index_.emplace(m.name, c.morphisms_.size()).second) {
        throw Error(ErrorKind::BadCategory, "duplicate morphism '" + m.name + "'");
      }
      auto src = c.find_object(m.source), tgt = c.find_object(m.target);
      if (!src || !tgt) {
        throw Error(ErrorKind::UnknownObject,
                    "morphism '" + m.name + "' names unknown object '" + (src ? m.target : m.source) + "'");
      }
      c.morphisms_.push_back({m.name, *src, *tgt});
    }
    const std::size_t n = c.morphisms_.size();
    c.identity_.assign(c.objects_.size(), kNone);
    for (const auto& [obj, mor] : raw.identities) {
      ObjId o = c.lookup_object(obj);
      auto found = c.find_morphism(mor);
      if (!found) throw Error(ErrorKind::UnknownMorphism, "identity of '" + obj + "' names unknown morphism '" + mor + "'");
      MorId m = *found;
      if (c.morphisms_[m].source != o || c.morphisms_[m].target != o) {
        throw Error(ErrorKind::BadIdentity, "identity '" + mor + "' of '" + obj + "' is not an endomorphism of it");
      }
      c.identity_[o] = m;
    }
    for (ObjId o = 0; o < c.objects_.size(); ++o) {
      if (c.identity_[o] == kNone) {
        throw Error(ErrorKind::BadIdentity, "object '" + c.objects_[o] + "' has no identity");
      }
    }
    c.is_identity_.assign(n, false);
    for (auto m : c.identity_) c.is_identity_[m] = true;

    c.table_.assign(n * n, kNoneCompact);
    for (const auto& t : raw.composition) {
      for (const auto* name : {&t.g, &t.f, &t.result}) {
        if (!c.find_morphism(*name)) {
          throw Error(ErrorKind::UnknownMorphism,
                      "composite (" + t.g + ", " + t.f + ", " + t.result + ") names unknown morphism '" + *name + "'");
        }
      }
      MorId g = c.lookup_morphism(t.g), f = c.lookup_morphism(t.f), r = c.lookup_morphism(t.result);
      if (c.morphisms_[f].target != c.morphisms_[g].source) {
        throw Error(ErrorKind::BadCategory, "composite listed for non-composable pair (" + t.g + ", " + t.f + ")");
      }
      if (c.morphisms_[r].source != c.morphisms_[f].source || c.morphisms_[r].target != c.morphisms_[g].target) {
        throw Error(ErrorKind::BadCategory, "composite " + t.g + " o " + t.f + " = " + t.result +
                                                " has wrong source or target");
      }
      auto& slot = c.table_[g * n + f];
      if (slot != kNoneCompact && slot != r) {
        throw Error(ErrorKind::BadCategory, "conflicting composites for (" + t.g + ", " + t.f + ")");
      }
      slot = static_cast<std::uint32_t>(r);
    }
    // Identity laws.
    for (MorId f = 0; f < n; ++f) {
      const auto& info = c.morphisms_[f];
      MorId left = c.identity_[info.target], right = c.identity_[info.source];
      for (auto [g, h] : {std::pair{left, f}, std::pair{f, right}}) {
        auto& slot = c.table_[g * n + h];
        if (slot == kNoneCompact) {
          slot = static_cast<std::uint32_t>(f);
        } else if (slot != f) {
          throw Error(ErrorKind::BadIdentity, "compose(" + c.morphisms_[g].name + ", " + c.morphisms_[h].name +
                                                  ") = " + c.morphisms_[slot].name + ", expected " + info.name);
        }
      }
    }
    for (MorId g = 0; g < n; ++g)
      for (MorId f = 0; f < n; ++f)
        if (c.morphisms_[f].target == c.morphisms_[g].source && c.table_[g * n + f] == kNoneCompact) {
          throw Error(ErrorKind::MissingComposite, "no composite for (" + c.morphisms_[g].name + ", " +
                                                       c.morphisms_[f].name + ")");
        }
    c.hom_.assign(c.objects_.size() * c.objects_.size(), {});
    for (MorId m = 0; m < n; ++m) c.hom_[c.morphisms_[m].source * c.objects_.size() + c.morphisms_[m].target].push_back(m);
    // Associativity over all composable triples.
    for (MorId f = 0; f < n; ++f)
      for (MorId g : c.out(c.morphisms_[f].target))
        for (MorId h : c.out(c.morphisms_[g].target)) {
          MorId lhs = c.compose(h, c.compose(g, f));
          MorId rhs = c.compose(c.compose(h, g), f);
          if (lhs != rhs) {
            throw Error(ErrorKind::NonAssociative, "(" + c.morphisms_[h].name + ", " + c.morphisms_[g].name + ", " +
                                                       c.morphisms_[f].name + ")");
          }
        }
    return c;
  }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::string& object_name(ObjId o) const { return objects_.at(o); }
  const MorphismInfo& morphism(MorId m) const { return morphisms_.at(m); }
  const std::string& morphism_name(MorId m) const { return morphisms_.at(m).name; }
  ObjId source(MorId m) const { return morphisms_.at(m).source; }
  ObjId target(MorId m) const { return morphisms_.at(m).target; }
  MorId identity(ObjId o) const { return identity_.at(o); }
  bool is_identity(MorId m) const { return is_identity_.at(m); }

  std::optional<ObjId> find_object(std::string_view name) const {
    auto it = object_index_.find(std::string(name));
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<MorId> find_morphism(std::string_view name) const {
    auto it = morphism_index_.find(std::string(name));
    if (it == morphism_index_.end()) return std::nullopt;
    return it->second;
  }
  ObjId lookup_object(std::string_view name) const {
    auto o = find_object(name);
    if (!o) throw Error(ErrorKind::UnknownObject, "'" + std::string(name) + "'");
    return *o;
  }
  MorId lookup_morphism(std::string_view name) const {
    auto m = find_morphism(name);
    if (!m) throw Error(ErrorKind::UnknownMorphism, "'" + std::string(name) + "'");
    return *m;
  }
  ObjectSet lookup_objects(const std::vector<std::string>& names) const {
    ObjectSet s;
    for (const auto& n : names) s.push_back(lookup_object(n));
    return normalized(std::move(s));
  }

  /// g o f; requires target(f) == source(g).
  MorId compose(MorId g, MorId f) const {
    auto r = table_.at(g * morphisms_.size() + f);
    if (r == kNoneCompact) {
      throw Error(ErrorKind::MissingComposite, "(" + morphisms_[g].name + ", " + morphisms_[f].name + ") not composable");
    }
    return r;
  }

  const std::vector<MorId>& hom(ObjId a, ObjId b) const { return hom_.at(a * objects_.size() + b); }

  std::vector<MorId> out(ObjId a) const {
    std::vector<MorId> r;
    for (ObjId b = 0; b < objects_.size(); ++b) {
      const auto& h = hom(a, b);
      r.insert(r.end(), h.begin(), h.end());
    }
    return r;
  }
  std::vector<MorId> in(ObjId b) const {
    std::vector<MorId> r;
    for (ObjId a = 0; a < objects_.size(); ++a) {
      const auto& h = hom(a, b);
      r.insert(r.end(), h.begin(), h.end());
    }
    return r;
  }

  ObjectSet all_objects() const {
    ObjectSet s(objects_.size());
    for (ObjId o = 0; o < s.size(); ++o) s[o] = o;
    return s;
  }

  /// Full description, including every composite, for serialization.
  RawCategory raw() const {
    RawCategory r;
    r.objects = objects_;
    for (const auto& m : morphisms_) r.morphisms.push_back({m.name, objects_[m.source], objects_[m.target]});
    for (ObjId o = 0; o < objects_.size(); ++o) r.identities[objects_[o]] = morphisms_[identity_[o]].name;
    for (MorId g = 0; g < morphisms_.size(); ++g)
      for (MorId f = 0; f < morphisms_.size(); ++f)
        if (morphisms_[f].target == morphisms_[g].source && !is_identity(g) && !is_identity(f)) {
          r.composition.push_back({morphisms_[g].name, morphisms_[f].name, morphisms_[compose(g, f)].name});
        }
    return r;
  }

  friend bool operator==(const FinCat& a, const FinCat& b) {
    if (a.objects_ != b.objects_ || a.morphisms_.size() != b.morphisms_.size()) return false;
    for (MorId m = 0; m < a.morphisms_.size(); ++m) {
      const auto& x = a.morphisms_[m];
      const auto& y = b.morphisms_[m];
      if (x.name != y.name || x.source != y.source || x.target != y.target) return false;
    }
    return a.identity_ == b.identity_ && a.table_ == b.table_;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static constexpr std::uint32_t kNoneCompact = static_cast<std::uint32_t>(-1);

  std::vector<std::string> objects_;
  std::vector<MorphismInfo> morphisms_;
  std::unordered_map<std::string, ObjId> object_index_;
  std::unordered_map<std::string, MorId> morphism_index_;
  std::vector<MorId> identity_;
  std::vector<bool> is_identity_;
  std::vector<std::uint32_t> table_;
  std::vector<std::vector<MorId>> hom_;
};

using CatPtr = std::shared_ptr<const FinCat>;

inline CatPtr make_cat(FinCat c) { return std::make_shared<const FinCat>(std::move(c)); }

inline std::vector<std::string> object_names(const FinCat& c, const ObjectSet& s) {
  std::vector<std::string> out;
  for (auto o : s) out.push_back(c.object_name(o));
  return out;
}

/// A category with a distinguished set of objects (the full subcategory on
/// which weak equivalences and fibrations are tested).
struct CatPair {
  CatPtr cat;
  ObjectSet dset;

  static CatPair make(CatPtr cat, ObjectSet dset) {
    dset = normalized(std::move(dset));
    for (auto d : dset) {
      if (d >= cat->object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(d));
    }
    return {std::move(cat), std::move(dset)};
  }
  static CatPair make(CatPtr cat, const std::vector<std::string>& names) {
    ObjectSet s = cat->lookup_objects(names);
    return {std::move(cat), std::move(s)};
  }

  bool in_d(ObjId o) const { return contains(dset, o); }
};

/// Subcategory on the given objects keeping exactly the morphisms accepted by
/// `keep` (identities are always kept). Names are preserved.
inline FinCat subcategory(const FinCat& c, const ObjectSet& objs, const std::function<bool(MorId)>& keep) {
  for (auto o : objs) {
    if (o >= c.object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(o));
  }
  RawCategory raw;
  std::vector<MorId> kept;
  for (auto o : objs) {
    raw.objects.push_back(c.object_name(o));
    raw.identities[c.object_name(o)] = c.morphism_name(c.identity(o));
  }
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    if (!contains(objs, c.source(m)) || !contains(objs, c.target(m))) continue;
    if (c.is_identity(m) || keep(m)) {
      kept.push_back(m);
      raw.morphisms.push_back({c.morphism_name(m), c.object_name(c.source(m)), c.object_name(c.target(m))});
    }
  }
  std::vector<bool> in_sub(c.morphism_count(), false);
  for (auto m : kept) in_sub[m] = true;
  for (auto g : kept)
    for (auto f : kept) {
      if (c.target(f) != c.source(g) || c.is_identity(g) || c.is_identity(f)) continue;
      MorId r = c.compose(g, f);
      if (!in_sub[r]) {
        throw Error(ErrorKind::BadCategory, "morphism set not closed: " + c.morphism_name(g) + " o " +
                                                c.morphism_name(f) + " = " + c.morphism_name(r));
      }
      raw.composition.push_back({c.morphism_name(g), c.morphism_name(f), c.morphism_name(r)});
    }
  return FinCat::validate(raw);
}

inline FinCat full_subcategory(const FinCat& c, const ObjectSet& objs) {
  return subcategory(c, normalized(objs), [](MorId) { return true; });
}

inline FinCat discrete_subcategory(const FinCat& c) {
  return subcategory(c, c.all_objects(), [](MorId) { return false; });
}

/// Functor between finite categories, given on objects and morphisms.
struct FunctorData {
  CatPtr source;
  CatPtr target;
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  ObjId operator()(ObjId o) const { return obj_map.at(o); }
  MorId on_morphism(MorId m) const { return mor_map.at(m); }

  static FunctorData validate(CatPtr source, CatPtr target, std::vector<ObjId> obj_map, std::vector<MorId> mor_map) {
    const FinCat& s = *source;
    const FinCat& t = *target;
    if (obj_map.size() != s.object_count() || mor_map.size() != s.morphism_count()) {
      throw Error(ErrorKind::NotAFunctor, "object or morphism map has wrong size");
    }
    for (auto o : obj_map)
      if (o >= t.object_count()) throw Error(ErrorKind::NotAFunctor, "object image out of range");
    for (MorId m = 0; m < s.morphism_count(); ++m) {
      MorId fm = mor_map[m];
      if (fm >= t.morphism_count()) throw Error(ErrorKind::NotAFunctor, "morphism image out of range");
      if (t.source(fm) != obj_map[s.source(m)] || t.target(fm) != obj_map[s.target(m)]) {
        throw Error(ErrorKind::NotAFunctor, "image of '" + s.morphism_name(m) + "' has wrong source or target");
      }
    }
    for (ObjId o = 0; o < s.object_count(); ++o)
      if (mor_map[s.identity(o)] != t.identity(obj_map[o])) {
        throw Error(ErrorKind::NotAFunctor, "identity of '" + s.object_name(o) + "' not preserved");
      }
    for (MorId f = 0; f < s.morphism_count(); ++f)
      for (MorId g : s.out(s.target(f)))
        if (mor_map[s.compose(g, f)] != t.compose(mor_map[g], mor_map[f])) {
          throw Error(ErrorKind::NotAFunctor, "composite (" + s.morphism_name(g) + ", " + s.morphism_name(f) +
                                                  ") not preserved");
        }
    return {std::move(source), std::move(target), std::move(obj_map), std::move(mor_map)};
  }

  static FunctorData identity(CatPtr c) {
    std::vector<ObjId> om(c->object_count());
    std::vector<MorId> mm(c->morphism_count());
    for (ObjId o = 0; o < om.size(); ++o) om[o] = o;
    for (MorId m = 0; m < mm.size(); ++m) mm[m] = m;
    return {c, c, std::move(om), std::move(mm)};
  }

  /// Inclusion of a subcategory, matched by identifiers.
  static FunctorData inclusion(CatPtr sub, CatPtr ambient) {
    std::vector<ObjId> om;
    std::vector<MorId> mm;
    for (const auto& o : sub->objects()) om.push_back(ambient->lookup_object(o));
    for (MorId m = 0; m < sub->morphism_count(); ++m) mm.push_back(ambient->lookup_morphism(sub->morphism_name(m)));
    return validate(std::move(sub), std::move(ambient), std::move(om), std::move(mm));
  }

  /// this o first
  FunctorData after(const FunctorData& first) const {
    std::vector<ObjId> om;
    std::vector<MorId> mm;
    for (auto o : first.obj_map) om.push_back(obj_map.at(o));
    for (auto m : first.mor_map) mm.push_back(mor_map.at(m));
    return {first.source, target, std::move(om), std::move(mm)};
  }
};

enum class CommaSide {
  Under,  // Phi \searrow b : objects (a, Phi(a) -> b)
  Over,   // b \searrow Phi : objects (a, b -> Phi(a))
};

/// Comma category with its projection back to the source of Phi.
struct CommaCat {
  CatPtr cat;
  std::vector<ObjId> base_object;  // comma object -> object of source(Phi)
  std::vector<MorId> label;        // comma object -> morphism of target(Phi)
  std::vector<MorId> base_morphism;  // comma morphism -> morphism of source(Phi)

  FunctorData projection(CatPtr source) const {
    return FunctorData::validate(cat, std::move(source), base_object, base_morphism);
  }
};

inline CommaCat comma(CommaSide side, const FunctorData& phi, ObjId b) {
  const FinCat& a_cat = *phi.source;
  const FinCat& b_cat = *phi.target;
  if (b >= b_cat.object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(b));
  CommaCat out;
  RawCategory raw;
  std::map<std::pair<ObjId, MorId>, std::size_t> index;
  auto name_of = [&](ObjId a, MorId beta) { return "(" + a_cat.object_name(a) + "," + b_cat.morphism_name(beta) + ")"; };
  for (ObjId a = 0; a < a_cat.object_count(); ++a) {
    const auto& labels = side == CommaSide::Under ? b_cat.hom(phi(a), b) : b_cat.hom(b, phi(a));
    for (MorId beta : labels) {
      index[{a, beta}] = out.base_object.size();
      out.base_object.push_back(a);
      out.label.push_back(beta);
      raw.objects.push_back(name_of(a, beta));
    }
  }
  // Morphisms gamma: (a1, beta1) -> (a2, beta2). Under Phi\b the target is
  // not determined by the source and gamma, so morphisms are keyed by all three.
  struct M {
    std::size_t from, to;
    MorId gamma;
  };
  std::vector<M> mors;
  std::map<std::tuple<std::size_t, MorId, std::size_t>, std::size_t> mor_index;
  for (std::size_t x = 0; x < out.base_object.size(); ++x) {
    ObjId a1 = out.base_object[x];
    MorId beta1 = out.label[x];
    for (MorId gamma : a_cat.out(a1)) {
      ObjId a2 = a_cat.target(gamma);
      MorId pg = phi.on_morphism(gamma);
      if (side == CommaSide::Under) {
        for (MorId beta2 : b_cat.hom(phi(a2), b)) {
          if (b_cat.compose(beta2, pg) != beta1) continue;
          std::size_t y = index.at({a2, beta2});
          mor_index[{x, gamma, y}] = mors.size();
          mors.push_back({x, y, gamma});
        }
      } else {
        std::size_t y = index.at({a2, b_cat.compose(pg, beta1)});
        mor_index[{x, gamma, y}] = mors.size();
        mors.push_back({x, y, gamma});
      }
    }
  }
  auto mor_name = [&](const M& m) {
    return a_cat.morphism_name(m.gamma) + ":" + raw.objects[m.from] + "->" + raw.objects[m.to];
  };
  for (const auto& m : mors) {
    raw.morphisms.push_back({mor_name(m), raw.objects[m.from], raw.objects[m.to]});
    out.base_morphism.push_back(m.gamma);
  }
  for (std::size_t x = 0; x < out.base_object.size(); ++x) {
    raw.identities[raw.objects[x]] = mor_name(mors[mor_index.at({x, a_cat.identity(out.base_object[x]), x})]);
  }
  for (const auto& f : mors)
    for (const auto& g : mors) {
      if (g.from != f.to) continue;
      MorId gf = a_cat.compose(g.gamma, f.gamma);
      raw.composition.push_back({mor_name(g), mor_name(f), mor_name(mors[mor_index.at({f.from, gf, g.to})])});
    }
  out.cat = make_cat(FinCat::validate(raw));
  return out;
}

// ---------------------------------------------------------------------------
// Predicates on object subsets.

/// Every morphism into the subset has its source in the subset.
inline bool is_left_absorbant(const FinCat& c, const ObjectSet& subset) {
  for (MorId m = 0; m < c.morphism_count(); ++m)
    if (contains(subset, c.target(m)) && !contains(subset, c.source(m))) return false;
  return true;
}

/// x is a retract of y: there are i: x -> y and r: y -> x with r o i = id_x.
inline bool is_retract(const FinCat& c, ObjId x, ObjId y) {
  for (MorId i : c.hom(x, y))
    for (MorId r : c.hom(y, x))
      if (c.compose(r, i) == c.identity(x)) return true;
  return false;
}

inline bool is_isomorphic(const FinCat& c, ObjId x, ObjId y) {
  for (MorId i : c.hom(x, y))
    for (MorId r : c.hom(y, x))
      if (c.compose(r, i) == c.identity(x) && c.compose(i, r) == c.identity(y)) return true;
  return false;
}

namespace detail {
template <class Rel>
bool each_related(const ObjectSet& from, const ObjectSet& to, Rel rel) {
  return std::all_of(from.begin(), from.end(), [&](ObjId x) {
    return std::any_of(to.begin(), to.end(), [&](ObjId y) { return rel(x, y); });
  });
}
}  // namespace detail

inline bool are_retract_equivalent(const FinCat& c, const ObjectSet& d1, const ObjectSet& d2) {
  auto rel = [&](ObjId x, ObjId y) { return is_retract(c, x, y); };
  return detail::each_related(d1, d2, rel) && detail::each_related(d2, d1, rel);
}

inline bool are_essentially_equivalent(const FinCat& c, const ObjectSet& d1, const ObjectSet& d2) {
  auto rel = [&](ObjId x, ObjId y) { return is_isomorphic(c, x, y); };
  return detail::each_related(d1, d2, rel) && detail::each_related(d2, d1, rel);
}

enum class SubsetPredicate { LeftAbsorbant, Retract, RetractEquivalent, EssentiallyEquivalent };

/// Uniform entry point: LeftAbsorbant reads `first`; Retract asks whether the
/// single object in `first` is a retract of the single object in `second`.
inline bool subset_predicate(SubsetPredicate kind, const FinCat& c, const std::vector<std::string>& first,
                             const std::vector<std::string>& second = {}) {
  ObjectSet a = c.lookup_objects(first);
  ObjectSet b = c.lookup_objects(second);
  switch (kind) {
    case SubsetPredicate::LeftAbsorbant:
      return is_left_absorbant(c, a);
    case SubsetPredicate::Retract:
      if (a.size() != 1 || b.size() != 1) {
        throw Error(ErrorKind::BadShapeParams, "retract takes exactly one object on each side");
      }
      return is_retract(c, a[0], b[0]);
    case SubsetPredicate::RetractEquivalent:
      return are_retract_equivalent(c, a, b);
    case SubsetPredicate::EssentiallyEquivalent:
      return are_essentially_equivalent(c, a, b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Glossiness.

enum class Side { Left, Right };

/// A morphism of pairs Phi: (A, B) -> (C, D) with Phi(B) inside D.
struct PairMorphism {
  FunctorData phi;
  ObjectSet source_dset;
  ObjectSet target_dset;

  static PairMorphism make(FunctorData phi, ObjectSet source_dset, ObjectSet target_dset) {
    source_dset = normalized(std::move(source_dset));
    target_dset = normalized(std::move(target_dset));
    for (auto b : source_dset) {
      if (!contains(target_dset, phi(b))) {
        throw Error(ErrorKind::NotAFunctor, "image of '" + phi.source->object_name(b) + "' is outside the target dset");
      }
    }
    return {std::move(phi), std::move(source_dset), std::move(target_dset)};
  }
};

/// For left glossiness the entries are (b_i, beta_i: Phi(b) -> Phi(b_i));
/// for right glossiness they are (b_j, beta_j: Phi(b_j) -> Phi(b)).
struct GlossyWitness {
  struct Entry {
    ObjId object;
    MorId morphism;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  ObjId base;
  std::vector<Entry> entries;
};

struct GlossyResult {
  bool holds = false;
  std::vector<GlossyWitness> witnesses;  // one per b in B when holds
  std::string reason;
};

namespace detail {

// Test morphisms alpha that must factor uniquely, keyed by (a, alpha).
using Target = std::pair<ObjId, MorId>;

inline std::vector<Target> glossy_targets(Side side, const FunctorData& phi, ObjId b) {
  const FinCat& a_cat = *phi.source;
  const FinCat& c = *phi.target;
  std::vector<Target> ts;
  for (ObjId a = 0; a < a_cat.object_count(); ++a) {
    const auto& h = side == Side::Left ? c.hom(phi(b), phi(a)) : c.hom(phi(a), phi(b));
    for (MorId alpha : h) ts.push_back({a, alpha});
  }
  return ts;
}

// Multiset of targets produced by one witness entry: Phi(gamma) o beta for
// gamma: b_i -> a (left), or beta o Phi(gamma) for gamma: a -> b_j (right).
inline std::vector<Target> entry_coverage(Side side, const FunctorData& phi, GlossyWitness::Entry e) {
  const FinCat& a_cat = *phi.source;
  const FinCat& c = *phi.target;
  std::vector<Target> out;
  for (ObjId a = 0; a < a_cat.object_count(); ++a) {
    const auto& gammas = side == Side::Left ? a_cat.hom(e.object, a) : a_cat.hom(a, e.object);
    for (MorId gamma : gammas) {
      MorId pg = phi.on_morphism(gamma);
      out.push_back({a, side == Side::Left ? c.compose(pg, e.morphism) : c.compose(e.morphism, pg)});
    }
  }
  return out;
}

inline bool exact_cover(std::size_t next, const std::vector<Target>& targets,
                        const std::vector<std::vector<std::size_t>>& cover_sets,
                        const std::vector<std::vector<std::size_t>>& by_target, std::vector<int>& count,
                        std::vector<bool>& used, std::vector<std::size_t>& chosen) {
  while (next < targets.size() && count[next] == 1) ++next;
  if (next == targets.size()) return true;
  for (std::size_t cand : by_target[next]) {
    if (used[cand]) continue;
    bool ok = true;
    for (auto t : cover_sets[cand])
      if (count[t] != 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    used[cand] = true;
    for (auto t : cover_sets[cand]) count[t] = 1;
    chosen.push_back(cand);
    if (exact_cover(next + 1, targets, cover_sets, by_target, count, used, chosen)) return true;
    chosen.pop_back();
    for (auto t : cover_sets[cand]) count[t] = 0;
    used[cand] = false;
  }
  return false;
}

}  // namespace detail

/// Verifies the unique-factorization condition for a witness at one base object.
inline bool verify_glossy_witness(Side side, const PairMorphism& pm, const GlossyWitness& w, std::string* why = nullptr) {
  const FunctorData& phi = pm.phi;
  const FinCat& c = *phi.target;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const auto& e : w.entries) {
    if (!contains(pm.source_dset, e.object)) return fail("witness object outside B");
    ObjId want_src = side == Side::Left ? phi(w.base) : phi(e.object);
    ObjId want_tgt = side == Side::Left ? phi(e.object) : phi(w.base);
    if (c.source(e.morphism) != want_src || c.target(e.morphism) != want_tgt) {
      return fail("witness morphism '" + c.morphism_name(e.morphism) + "' has wrong endpoints");
    }
  }
  std::map<detail::Target, int> count;
  for (const auto& t : detail::glossy_targets(side, phi, w.base)) count[t] = 0;
  for (const auto& e : w.entries)
    for (const auto& t : detail::entry_coverage(side, phi, e)) ++count.at(t);
  for (const auto& [t, n] : count) {
    if (n != 1) {
      return fail("morphism '" + c.morphism_name(t.second) + "' at '" + phi.source->object_name(t.first) + "' factors " +
                  std::to_string(n) + " times");
    }
  }
  return true;
}

/// Checks supplied witnesses, or searches for them by exact cover over the
/// candidate pairs (b', beta) when none are given.
inline GlossyResult glossy(Side side, const PairMorphism& pm,
                           const std::optional<std::vector<GlossyWitness>>& witnesses = std::nullopt) {
  const FunctorData& phi = pm.phi;
  const FinCat& c = *phi.target;
  GlossyResult result;
  if (witnesses) {
    for (auto b : pm.source_dset) {
      auto it = std::find_if(witnesses->begin(), witnesses->end(), [&](const GlossyWitness& w) { return w.base == b; });
      if (it == witnesses->end()) {
        result.reason = "no witness for '" + phi.source->object_name(b) + "'";
        return result;
      }
      std::string why;
      if (!verify_glossy_witness(side, pm, *it, &why)) {
        result.reason = "at '" + phi.source->object_name(b) + "': " + why;
        return result;
      }
      result.witnesses.push_back(*it);
    }
    result.holds = true;
    return result;
  }
  for (auto b : pm.source_dset) {
    auto targets = detail::glossy_targets(side, phi, b);
    std::map<detail::Target, std::size_t> tindex;
    for (std::size_t i = 0; i < targets.size(); ++i) tindex[targets[i]] = i;
    std::vector<GlossyWitness::Entry> cands;
    std::vector<std::vector<std::size_t>> cover_sets;
    std::vector<std::vector<std::size_t>> by_target(targets.size());
    for (auto bi : pm.source_dset) {
      const auto& betas = side == Side::Left ? c.hom(phi(b), phi(bi)) : c.hom(phi(bi), phi(b));
      for (MorId beta : betas) {
        std::vector<std::size_t> cov;
        bool dup = false;
        for (const auto& t : detail::entry_coverage(side, phi, {bi, beta})) {
          std::size_t ti = tindex.at(t);
          if (std::find(cov.begin(), cov.end(), ti) != cov.end()) {
            dup = true;
            break;
          }
          cov.push_back(ti);
        }
        if (dup) continue;  // covers some alpha twice on its own
        for (auto ti : cov) by_target[ti].push_back(cands.size());
        cands.push_back({bi, beta});
        cover_sets.push_back(std::move(cov));
      }
    }
    std::vector<int> count(targets.size(), 0);
    std::vector<bool> used(cands.size(), false);
    std::vector<std::size_t> chosen;
    if (!detail::exact_cover(0, targets, cover_sets, by_target, count, used, chosen)) {
      result.reason = "no witness set exists at '" + phi.source->object_name(b) + "'";
      result.witnesses.clear();
      return result;
    }
    GlossyWitness w{b, {}};
    for (auto i : chosen) w.entries.push_back(cands[i]);
    result.witnesses.push_back(std::move(w));
  }
  result.holds = true;
  return result;
}

// ---------------------------------------------------------------------------
// Category surgery.

/// Keeps every morphism whose source lies in D, and only identities elsewhere.
inline FinCat restrict_sources(const CatPair& pair) {
  const FinCat& c = *pair.cat;
  FinCat a = subcategory(c, c.all_objects(), [&](MorId m) { return pair.in_d(c.source(m)); });
  if (!is_left_absorbant(a, a.lookup_objects(object_names(c, pair.dset)))) {
    throw Error(ErrorKind::BadCategory, "restricted category does not contain D as a left absorbant subset");
  }
  return a;
}

struct Funnel {
  ObjectSet d_c;                         // objects of D with a morphism to c (ambient ids)
  CatPair funnel;                        // full subcategory on D u {c}, paired with D
  std::optional<CatPair> strict_funnel;  // D_c with c adjoined (identities only at c); absent if c in D
};

inline ObjectSet objects_mapping_to(const CatPair& pair, ObjId c) {
  ObjectSet out;
  for (auto d : pair.dset)
    if (!pair.cat->hom(d, c).empty()) out.push_back(d);
  return out;
}

inline Funnel funnel_objects(const CatPair& pair, ObjId c) {
  const FinCat& cat = *pair.cat;
  if (c >= cat.object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
  Funnel out;
  out.d_c = objects_mapping_to(pair, c);
  ObjectSet with_c = pair.dset;
  with_c.push_back(c);
  auto full = make_cat(full_subcategory(cat, with_c));
  out.funnel = CatPair::make(full, object_names(cat, pair.dset));
  if (!pair.in_d(c)) {
    ObjectSet objs = out.d_c;
    objs.push_back(c);
    auto strict = make_cat(subcategory(cat, normalized(objs), [&](MorId m) { return cat.source(m) != c; }));
    out.strict_funnel = CatPair::make(strict, object_names(cat, out.d_c));
  }
  return out;
}

}  // namespace codescent

#endif  // CODESCENT_FINCAT_HPP
