#ifndef CODESCENT_RANDOM_HPP
#define CODESCENT_RANDOM_HPP

// Seeded generators for chain maps, quasi-isomorphisms and diagrams. Every
// draw goes through mt19937_64 and rng() % n, so a seed fixes the output on
// every platform.

#include <map>
#include <optional>
#include <vector>

#include "codescent/chain.hpp"
#include "codescent/diagram.hpp"
#include "codescent/fincat.hpp"

namespace codescent {

struct ComplexShape {
  int lo = 0;
  int hi = 2;
  std::size_t max_dim = 2;
};

inline RandomComplex random_complex(Rng& rng, const ComplexShape& s, std::uint32_t p) {
  return random_complex(rng, s.lo, s.hi, s.max_dim, p);
}

/// Conjugates c by a random change of basis; returns the new complex and the
/// isomorphism c -> new.
inline std::pair<ChainComplex, ChainMap> random_basis_change(Rng& rng, const ChainComplex& c) {
  if (c.is_zero()) return {c, ChainMap::identity(c)};
  const std::uint32_t p = c.prime();
  std::vector<Matrix> basis, inv;
  std::vector<std::size_t> dims;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    basis.push_back(random_invertible(rng, c.dim(n), p));
    inv.push_back(*inverse(basis.back()));
    dims.push_back(c.dim(n));
  }
  auto k = [&](int n) { return static_cast<std::size_t>(n - c.lo()); };
  std::vector<Matrix> diffs;
  for (int n = c.lo() + 1; n <= c.hi(); ++n) diffs.push_back(basis[k(n - 1)] * c.d(n) * inv[k(n)]);
  ChainComplex out = ChainComplex::trusted(p, c.lo(), dims, std::move(diffs));
  ChainMap iso = ChainMap::trusted(c, out, [&](int n) { return basis[k(n)]; });
  return {out, iso};
}

struct SplitQuasiIso {
  ChainMap map;         // s -> t, a quasi-isomorphism and degreewise mono
  ChainMap retraction;  // t -> s with retraction o map = id
};

/// s -> s (+) (random disks), followed by a random change of basis.
inline SplitQuasiIso random_quasi_iso(Rng& rng, const ChainComplex& s, int lo, int hi, std::size_t max_disks) {
  const std::uint32_t p = s.prime();
  std::vector<ChainComplex> parts{s};
  const std::size_t disks = hi > lo ? draw(rng, max_disks + 1) : 0;
  for (std::size_t k = 0; k < disks; ++k) {
    parts.push_back(ChainComplex::disk(lo + 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(hi - lo))), p));
  }
  ChainComplex sum = direct_sum(parts, p);
  ChainMap inc = sum_injection(parts, sum, 0);
  ChainMap proj = sum_projection(parts, sum, 0);
  auto [t, iso] = random_basis_change(rng, sum);
  ChainMap iso_inv = ChainMap::trusted(t, sum, [&, &iso = iso](int n) { return *inverse(iso.at(n)); });
  return {iso.after(inc), proj.after(iso_inv)};
}

/// Uniformly random element of the space of chain maps, as a linear combination of a basis.
inline ChainMap random_chain_map(Rng& rng, const std::vector<ChainMap>& basis, const ChainComplex& s, const ChainComplex& t) {
  ChainMap f = ChainMap::zero(s, t);
  const std::uint32_t p = s.is_zero() ? t.prime() : s.prime();
  for (const auto& b : basis) f = f + b.scaled(static_cast<std::int64_t>(draw(rng, p)));
  return f;
}

inline NatTrans random_nat_trans(Rng& rng, const std::vector<NatTrans>& basis, const Diagram& x, const Diagram& y) {
  NatTrans t = NatTrans::zero(x, y);
  for (const auto& b : basis) t = t + b.scaled(static_cast<std::int64_t>(draw(rng, x.prime())));
  return t;
}

// ---------------------------------------------------------------------------
// Free and constant diagrams.

/// The free diagram iota_a(v): c |-> (+)_{u in hom(a, c)} v, post-composition on summands.
inline Diagram free_diagram(const CatPtr& cat, ObjId a, const ChainComplex& v) {
  const FinCat& c = *cat;
  std::vector<ChainComplex> values;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    values.push_back(direct_sum(std::vector<ChainComplex>(c.hom(a, b).size(), v), v.prime()));
  }
  auto position = [&](ObjId b, MorId u) {
    const auto& h = c.hom(a, b);
    return static_cast<std::size_t>(std::find(h.begin(), h.end(), u) - h.begin());
  };
  std::vector<ChainMap> maps;
  for (MorId g = 0; g < c.morphism_count(); ++g) {
    const ObjId b = c.source(g), b2 = c.target(g);
    maps.push_back(ChainMap::trusted(values[b], values[b2], [&](int n) {
      const std::size_t dv = v.dim(n);
      Matrix m(values[b2].dim(n), values[b].dim(n), v.prime());
      const auto& h = c.hom(a, b);
      for (std::size_t k = 0; k < h.size(); ++k) {
        m.place(position(b2, c.compose(g, h[k])) * dv, k * dv, Matrix::identity(dv, v.prime()));
      }
      return m;
    }));
  }
  return Diagram::trusted(cat, v.prime(), std::move(values), std::move(maps));
}

/// The transformation iota_a(v) -> z corresponding to phi: v -> z(a).
inline NatTrans free_nat_trans(const Diagram& free, ObjId a, const ChainMap& phi, const Diagram& z) {
  const FinCat& c = z.category();
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < c.object_count(); ++b) {
    std::vector<ChainMap> parts;
    for (MorId u : c.hom(a, b)) parts.push_back(z.on(u).after(phi));
    if (parts.empty()) {
      comps.push_back(ChainMap::zero(free.at(b), z.at(b)));
    } else {
      ChainMap m = copair(parts, z.at(b));
      comps.push_back(ChainMap::trusted(free.at(b), z.at(b), [&](int n) { return m.at(n); }));
    }
  }
  return NatTrans::trusted(free, z, std::move(comps));
}

struct DiagramShape {
  ComplexShape complex{0, 2, 2};
  std::size_t max_free = 2;    // free summands in each layer
  bool allow_constant = true;  // add a constant summand to the target layer
};

/// A random diagram over any finite category: the objectwise cone of a random
/// transformation from a sum of free diagrams into a sum of free and
/// constant diagrams, or that target alone.
inline Diagram random_diagram(Rng& rng, const CatPtr& cat, std::uint32_t p, const DiagramShape& shape = {}) {
  const FinCat& c = *cat;
  const std::size_t objs = c.object_count();
  if (objs == 0) return Diagram::zero(cat, p);
  std::vector<Diagram> target_parts;
  const std::size_t nt = 1 + draw(rng, shape.max_free);
  for (std::size_t k = 0; k < nt; ++k) {
    target_parts.push_back(free_diagram(cat, draw(rng, objs), random_complex(rng, shape.complex, p).complex));
  }
  if (shape.allow_constant && draw(rng, 2) == 0) {
    target_parts.push_back(Diagram::constant(cat, random_complex(rng, shape.complex, p).complex));
  }
  Diagram target = direct_sum(target_parts);
  if (draw(rng, 3) == 0) return target;
  std::vector<Diagram> frees;
  std::vector<NatTrans> legs;
  const std::size_t ns = 1 + draw(rng, shape.max_free);
  for (std::size_t k = 0; k < ns; ++k) {
    const ObjId a = draw(rng, objs);
    ChainComplex v = random_complex(rng, shape.complex, p).complex;
    Diagram f = free_diagram(cat, a, v);
    ChainMap phi = random_chain_map(rng, chain_map_basis(v, target.at(a)), v, target.at(a));
    legs.push_back(free_nat_trans(f, a, phi, target));
    frees.push_back(std::move(f));
  }
  // The sum of the legs, as one transformation out of the sum of the frees.
  Diagram source = direct_sum(frees);
  std::vector<ChainMap> comps;
  for (ObjId b = 0; b < objs; ++b) {
    std::vector<ChainMap> parts;
    for (const auto& l : legs) parts.push_back(l.at(b));
    ChainMap m = copair(parts, target.at(b));
    comps.push_back(ChainMap::trusted(source.at(b), target.at(b), [&](int n) { return m.at(n); }));
  }
  return mapping_cone(NatTrans::trusted(source, target, std::move(comps)));
}

// ---------------------------------------------------------------------------
// Diagrams on specific shapes, biased so that both verdicts occur often.

/// A map out of s that is a quasi-isomorphism about half of the time.
inline ChainMap random_map_from(Rng& rng, const ChainComplex& s, const ComplexShape& shape) {
  if (draw(rng, 2) == 0) return random_quasi_iso(rng, s, shape.lo, shape.hi, 2).map;
  ChainComplex t = random_complex(rng, shape, s.prime()).complex;
  return random_chain_map(rng, chain_map_basis(s, t), s, t);
}

/// Arrow pair d -> c.
inline Diagram random_arrow_diagram(Rng& rng, const CatPair& pair, std::uint32_t p, const ComplexShape& shape) {
  const FinCat& c = *pair.cat;
  ChainComplex xd = random_complex(rng, shape, p).complex;
  ChainMap a = random_map_from(rng, xd, shape);
  std::vector<ChainComplex> values(2);
  values[c.lookup_object("d")] = xd;
  values[c.lookup_object("c")] = a.target();
  return Diagram::from_generators(pair.cat, p, values, {{c.lookup_morphism("alpha"), a}});
}

/// Funnel with trivial monoid: arrows alpha1..alphaN from d to c.
inline Diagram random_multi_arrow_diagram(Rng& rng, const CatPair& pair, std::uint32_t p, const ComplexShape& shape) {
  const FinCat& c = *pair.cat;
  const ObjId d = c.lookup_object("d"), top = c.lookup_object("c");
  ChainComplex xd = random_complex(rng, shape, p).complex;
  const auto& arrows = c.hom(d, top);
  std::map<MorId, ChainMap> maps;
  ChainComplex xc;
  if (draw(rng, 2) == 0) {
    std::vector<ChainComplex> copies(arrows.size(), xd);
    ChainComplex sum = direct_sum(copies, p);
    ChainMap q = random_quasi_iso(rng, sum, shape.lo, shape.hi, 2).map;
    xc = q.target();
    for (std::size_t k = 0; k < arrows.size(); ++k) maps[arrows[k]] = q.after(sum_injection(copies, sum, k));
  } else {
    xc = random_complex(rng, shape, p).complex;
    auto basis = chain_map_basis(xd, xc);
    for (auto m : arrows) maps[m] = random_chain_map(rng, basis, xd, xc);
  }
  std::vector<ChainComplex> values(2);
  values[d] = xd;
  values[top] = xc;
  return Diagram::from_generators(pair.cat, p, values, maps);
}

/// Commutative square: alpha is a degreewise mono, c receives a map out of
/// the strict pushout.
inline Diagram random_square_diagram(Rng& rng, const CatPair& pair, std::uint32_t p, const ComplexShape& shape) {
  const FinCat& c = *pair.cat;
  ChainComplex xe = random_complex(rng, shape, p).complex;
  ChainMap alpha;
  if (draw(rng, 2) == 0) {
    alpha = random_quasi_iso(rng, xe, shape.lo, shape.hi, 2).map;
  } else {
    // xe -> xe (+) w, identity on the first summand plus a random map to w.
    ChainComplex w = random_complex(rng, shape, p).complex;
    ChainMap g = random_chain_map(rng, chain_map_basis(xe, w), xe, w);
    ChainMap m = pair_into(xe, {ChainMap::identity(xe), g});
    auto [t, iso] = random_basis_change(rng, m.target());
    alpha = iso.after(m);
  }
  ChainMap alphap = random_map_from(rng, xe, shape);
  ChainMap diff = pair_into(xe, {alpha, alphap.scaled(-1)});
  CokernelResult po = chain_cokernel(diff);
  std::vector<ChainComplex> parts{alpha.target(), alphap.target()};
  ChainMap leg_d = po.projection.after(sum_injection(parts, diff.target(), 0));
  ChainMap leg_dp = po.projection.after(sum_injection(parts, diff.target(), 1));
  ChainMap h;
  switch (draw(rng, 3)) {
    case 0: h = ChainMap::identity(po.object); break;
    case 1: h = random_quasi_iso(rng, po.object, shape.lo, shape.hi + 1, 2).map; break;
    default: h = random_map_from(rng, po.object, ComplexShape{shape.lo, shape.hi + 1, shape.max_dim}); break;
  }
  ChainMap beta = h.after(leg_d), betap = h.after(leg_dp);
  std::vector<ChainComplex> values(4);
  values[c.lookup_object("e")] = xe;
  values[c.lookup_object("d")] = alpha.target();
  values[c.lookup_object("dp")] = alphap.target();
  values[c.lookup_object("c")] = h.target();
  return Diagram::from_generators(pair.cat, p, values,
                                  {{c.lookup_morphism("alpha"), alpha},
                                   {c.lookup_morphism("alphap"), alphap},
                                   {c.lookup_morphism("beta"), beta},
                                   {c.lookup_morphism("betap"), betap},
                                   {c.lookup_morphism("gamma"), beta.after(alpha)}});
}

/// Square without the relation. The two composites into c are drawn first
/// (jointly a quasi-isomorphism about half of the time), then factored
/// through split monos alpha and alphap.
inline Diagram random_free_square_diagram(Rng& rng, const CatPair& pair, std::uint32_t p, const ComplexShape& shape) {
  const FinCat& c = *pair.cat;
  ChainComplex xe = random_complex(rng, shape, p).complex;
  std::vector<ChainComplex> two{xe, xe};
  ChainComplex sum = direct_sum(two, p);
  ChainMap u = random_map_from(rng, sum, shape);
  ChainMap g1 = u.after(sum_injection(two, sum, 0)), g2 = u.after(sum_injection(two, sum, 1));
  auto side = [&](const ChainMap& g) -> std::pair<ChainMap, ChainMap> {
    if (draw(rng, 3) != 0) {
      SplitQuasiIso q = random_quasi_iso(rng, xe, shape.lo, shape.hi, 2);
      return {q.map, g.after(q.retraction)};
    }
    // A split mono that is not a quasi-iso: xe -> xe (+) sphere.
    ChainComplex s = ChainComplex::sphere(shape.lo + static_cast<int>(draw(rng, static_cast<std::uint64_t>(shape.hi - shape.lo + 1))), p);
    std::vector<ChainComplex> parts{xe, s};
    ChainComplex t = direct_sum(parts, p);
    return {sum_injection(parts, t, 0), g.after(sum_projection(parts, t, 0))};
  };
  auto [alpha, beta] = side(g1);
  auto [alphap, betap] = side(g2);
  std::vector<ChainComplex> values(4);
  values[c.lookup_object("e")] = xe;
  values[c.lookup_object("d")] = alpha.target();
  values[c.lookup_object("dp")] = alphap.target();
  values[c.lookup_object("c")] = u.target();
  return Diagram::from_generators(pair.cat, p, values,
                                  {{c.lookup_morphism("alpha"), alpha},
                                   {c.lookup_morphism("alphap"), alphap},
                                   {c.lookup_morphism("beta"), beta},
                                   {c.lookup_morphism("betap"), betap},
                                   {c.lookup_morphism("gamma"), g1},
                                   {c.lookup_morphism("gammap"), g2}});
}

/// A transformation x -> y that is a quasi-isomorphism at every object:
/// the inclusion x -> x (+) k with k objectwise acyclic (a cone of an identity).
inline NatTrans random_weak_equivalence(Rng& rng, const Diagram& x, const DiagramShape& shape = {}) {
  Diagram k0 = random_diagram(rng, x.cat(), x.prime(), shape);
  Diagram k = mapping_cone(NatTrans::identity(k0));
  Diagram y = direct_sum(std::vector<Diagram>{x, k});
  std::vector<ChainMap> comps;
  for (ObjId o = 0; o < x.category().object_count(); ++o) {
    std::vector<ChainComplex> parts{x.at(o), k.at(o)};
    comps.push_back(sum_injection(parts, y.at(o), 0));
  }
  return NatTrans::trusted(x, y, std::move(comps));
}

}  // namespace codescent

#endif  // CODESCENT_RANDOM_HPP
