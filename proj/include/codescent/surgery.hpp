#ifndef CODESCENT_SURGERY_HPP
#define CODESCENT_SURGERY_HPP

// Rewrites of a codescent problem into a smaller one with the same verdict at
// the focus object. Each rewrite records a short citation tag.

#include <optional>
#include <string>
#include <vector>

#include "codescent/codescent.hpp"
#include "codescent/diagram.hpp"
#include "codescent/fincat.hpp"

namespace codescent {

struct Instance {
  CatPair pair;
  Diagram x;
  std::optional<ObjId> focus;
};

struct Reduction {
  std::string name;
  Instance input;
  Instance output;
  std::string citation;
};

namespace detail {

inline std::optional<ObjId> carry_focus(const Instance& in, const FinCat& to) {
  if (!in.focus) return std::nullopt;
  return to.find_object(in.pair.cat->object_name(*in.focus));
}

/// Restricts an instance to a subcategory of its category (matched by names).
inline Instance restrict_instance(const Instance& in, const CatPtr& sub, const std::vector<std::string>& dset) {
  FunctorData incl = FunctorData::inclusion(sub, in.pair.cat);
  return {CatPair::make(sub, dset), restrict_along(incl, in.x), carry_focus(in, *sub)};
}

inline void check_object(const CatPair& pair, ObjId c) {
  if (c >= pair.cat->object_count()) throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
}

}  // namespace detail

/// Replaces D by D_c, the objects of D with a morphism to c.
inline Reduction reduce_prune_objects(const Diagram& x, const CatPair& pair, ObjId c) {
  detail::check_object(pair, c);
  Instance in{pair, x, c};
  Instance out{CatPair::make(pair.cat, objects_mapping_to(pair, c)), x, c};
  return {"prune-objects", std::move(in), std::move(out), "pruning-objects"};
}

/// Restricts X to the subcategory keeping only morphisms with source in D.
inline Reduction reduce_prune_morphisms(const Diagram& x, const CatPair& pair, std::optional<ObjId> focus = std::nullopt) {
  if (focus) detail::check_object(pair, *focus);
  Instance in{pair, x, focus};
  CatPtr a = make_cat(restrict_sources(pair));
  Instance out = detail::restrict_instance(in, a, object_names(*pair.cat, pair.dset));
  return {"prune-morphisms", std::move(in), std::move(out), "pruning-morphisms"};
}

/// Restricts to the full subcategory on D u {c}.
inline Reduction reduce_funnel(const Diagram& x, const CatPair& pair, ObjId c) {
  detail::check_object(pair, c);
  Instance in{pair, x, c};
  Funnel f = funnel_objects(pair, c);
  Instance out = detail::restrict_instance(in, f.funnel.cat, object_names(*pair.cat, pair.dset));
  return {"funnel", std::move(in), std::move(out), "funneling"};
}

/// Restricts to D_c with c adjoined, keeping only the morphisms out of D_c.
inline Reduction reduce_strict_funnel(const Diagram& x, const CatPair& pair, ObjId c) {
  detail::check_object(pair, c);
  if (pair.in_d(c)) throw Error(ErrorKind::FocusInD, "'" + pair.cat->object_name(c) + "' lies in D");
  Instance in{pair, x, c};
  Funnel f = funnel_objects(pair, c);
  Instance out = detail::restrict_instance(in, f.strict_funnel->cat, object_names(*pair.cat, f.d_c));
  return {"strict-funnel", std::move(in), std::move(out), "strict-funnel"};
}

/// One subproblem per member of the cover, each the full subcategory on it.
inline std::vector<Instance> cover_split(const Diagram& x, const CatPair& pair, const std::vector<ObjectSet>& covering) {
  const FinCat& c = *pair.cat;
  std::vector<bool> covered(c.object_count(), false);
  std::vector<Instance> out;
  const Instance whole{pair, x, std::nullopt};
  for (const auto& raw : covering) {
    ObjectSet part = normalized(raw);
    for (auto o : part) {
      detail::check_object(pair, o);
      covered[o] = true;
    }
    for (auto d : pair.dset) {
      if (!contains(part, d)) throw Error(ErrorKind::NotACover, "a member of the cover misses '" + c.object_name(d) + "' of D");
    }
    out.push_back(detail::restrict_instance(whole, make_cat(full_subcategory(c, part)), object_names(c, pair.dset)));
  }
  for (ObjId o = 0; o < c.object_count(); ++o) {
    if (!covered[o]) throw Error(ErrorKind::NotACover, "'" + c.object_name(o) + "' is not covered");
  }
  return out;
}

/// Verdicts of the whole problem recovered from the subproblems of a cover:
/// each object takes its verdict from the first member containing it.
inline std::vector<Verdict> combine_cover(const CatPair& pair, const std::vector<Instance>& parts,
                                          const std::vector<CodescentReport>& reports) {
  const FinCat& c = *pair.cat;
  std::vector<std::optional<Verdict>> found(c.object_count());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const FinCat& sub = *parts[k].pair.cat;
    for (ObjId o = 0; o < sub.object_count(); ++o) {
      ObjId amb = c.lookup_object(sub.object_name(o));
      if (!found[amb]) found[amb] = reports[k].verdicts[o];
    }
  }
  std::vector<Verdict> out;
  for (auto& v : found) out.push_back(*v);
  return out;
}

/// The cover of C by the funnels D u {c}.
inline std::vector<ObjectSet> funnel_cover(const CatPair& pair) {
  std::vector<ObjectSet> cover;
  for (ObjId o = 0; o < pair.cat->object_count(); ++o) {
    ObjectSet s = pair.dset;
    s.push_back(o);
    cover.push_back(normalized(s));
  }
  return cover;
}

inline Verdict verdict_at_focus(const Instance& in, const CodescentOptions& opt = {}) {
  if (!in.focus) throw Error(ErrorKind::UnknownObject, "instance has no focus object");
  return codescent_at(in.x, in.pair, *in.focus, opt);
}

}  // namespace codescent

#endif  // CODESCENT_SURGERY_HPP
