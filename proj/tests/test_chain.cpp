#include <catch2/catch_amalgamated.hpp>

#include "codescent/chain.hpp"
#include "oracles.hpp"

using namespace codescent;

namespace {

ChainComplex s0(std::uint32_t p = 2) { return ChainComplex::sphere(0, p); }

// S^0 (+) D^1 -> S^0, projection onto the sphere summand.
ChainMap sphere_plus_disk_projection(std::uint32_t p) {
  ChainComplex src = direct_sum({s0(p), ChainComplex::disk(1, p)}, p);
  return ChainMap::validate(src, s0(p), [&](int n) {
    Matrix m(s0(p).dim(n), src.dim(n), p);
    if (n == 0) m.set(0, 0, 1);
    return m;
  });
}

}  // namespace

TEST_CASE("complex validation", "[chain]") {
  CHECK(ChainComplex::validate(2, 0, {}, {}).is_zero());
  ChainComplex d1 = ChainComplex::validate(3, 0, {1, 1}, {Matrix::identity(1, 3)});
  CHECK(d1 == ChainComplex::disk(1, 3));
  try {
    ChainComplex::validate(2, 0, {1, 1, 1}, {Matrix::identity(1, 2), Matrix::identity(1, 2)});
    FAIL("accepted d o d != 0");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAComplex);
  }
  CHECK_THROWS_AS(ChainComplex::validate(2, 0, {2, 1}, {Matrix::identity(1, 2)}), Error);
  // Zero end degrees are trimmed.
  ChainComplex padded = ChainComplex::validate(2, -1, {0, 1, 0}, {Matrix(0, 1, 2), Matrix(1, 0, 2)});
  CHECK(padded == s0());
}

TEST_CASE("homology of spheres, disks and random complexes", "[chain]") {
  for (int n : {-2, 0, 3}) {
    HomologyProfile h = homology_dims(ChainComplex::sphere(n, 5));
    CHECK(h.at(n) == 1);
    CHECK(h.at(n + 1) == 0);
    CHECK(h.at(n - 1) == 0);
    CHECK(homology_dims(ChainComplex::disk(n, 5)).acyclic());
  }
  Rng rng(21);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 40; ++trial) {
      RandomComplex rc = random_complex(rng, -1, 3, 4, p);
      HomologyProfile h = homology_dims(rc.complex);
      auto ob = oracle::betti(rc.complex);
      for (const auto& [n, b] : ob) CHECK(h.at(n) == b);
      CHECK(h == rc.expected);
      CHECK(h.euler_characteristic() == euler_characteristic(rc.complex));
    }
  }
}

TEST_CASE("mapping cones", "[chain]") {
  CHECK(homology_dims(mapping_cone(ChainMap::identity(s0()))).acyclic());

  HomologyProfile h = homology_dims(mapping_cone(ChainMap::zero(s0(), s0())));
  CHECK(h.at(0) == 1);
  CHECK(h.at(1) == 1);

  Rng rng(22);
  ChainComplex c = random_complex(rng, 0, 3, 3, 3).complex;
  CHECK(mapping_cone(ChainMap::zero(ChainComplex(3), c)) == c);

  for (int trial = 0; trial < 30; ++trial) {
    ChainComplex a = random_complex(rng, 0, 2, 3, 2).complex;
    ChainComplex b = random_complex(rng, 0, 2, 3, 2).complex;
    ChainComplex cone = mapping_cone(random_chain_map(rng, a, b));
    CHECK_NOTHROW(ChainComplex::validate(2, cone.lo(), [&] {
      std::vector<std::size_t> dims;
      for (int n = cone.lo(); n <= cone.hi(); ++n) dims.push_back(cone.dim(n));
      return dims;
    }(), [&] {
      std::vector<Matrix> ds;
      for (int n = cone.lo() + 1; n <= cone.hi(); ++n) ds.push_back(cone.d(n));
      return ds;
    }()));
  }
}

TEST_CASE("quasi-isomorphism tests", "[chain]") {
  CHECK(is_quasi_iso(ChainMap::identity(ChainComplex::disk(2, 3))));

  QuasiIsoResult q = is_quasi_iso(ChainMap::zero(ChainComplex(2), s0()));
  CHECK_FALSE(q.holds);
  REQUIRE(q.obstruction_degree);
  CHECK(*q.obstruction_degree == 0);
  CHECK(q.defect == 1);

  // D^1 -> S^1, identity in degree 1, kills nothing but homology differs.
  const std::uint32_t p = 3;
  ChainComplex d1 = ChainComplex::disk(1, p), s1 = ChainComplex::sphere(1, p);
  ChainMap quot = ChainMap::validate(d1, s1, [&](int n) {
    return n == 1 ? Matrix::identity(1, p) : Matrix(s1.dim(n), d1.dim(n), p);
  });
  CHECK_FALSE(is_quasi_iso(quot));
  CHECK_FALSE(oracle::quasi_iso(quot));

  CHECK(is_quasi_iso(sphere_plus_disk_projection(p)));
  CHECK(oracle::quasi_iso(sphere_plus_disk_projection(p)));
}

TEST_CASE("cone route agrees with the homology route and the oracle", "[chain]") {
  Rng rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint32_t p = trial % 2 ? 3 : 2;
    ChainComplex a = random_complex(rng, -1, 2, 3, p).complex;
    ChainComplex b = random_complex(rng, -1, 2, 3, p).complex;
    ChainMap f = random_chain_map(rng, a, b);
    const bool cone_route = is_quasi_iso(f).holds;
    CHECK(cone_route == induces_homology_iso(f));
    CHECK(cone_route == oracle::quasi_iso(f));
  }
  // Random maps are rarely quasi-isos; inclusions that add a disk summand are.
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t p = trial % 2 ? 3 : 2;
    std::vector<ChainComplex> parts{random_complex(rng, 0, 2, 3, p).complex,
                                    ChainComplex::disk(1 + static_cast<int>(draw(rng, 3)), p)};
    ChainComplex sum = direct_sum(parts, p);
    ChainMap f = sum_injection(parts, sum, 0);
    CHECK(is_quasi_iso(f));
    CHECK(induces_homology_iso(f));
    CHECK(oracle::quasi_iso(f));
    std::vector<ChainComplex> with_sphere{parts[0], ChainComplex::sphere(1, p)};
    ChainMap g = sum_injection(with_sphere, direct_sum(with_sphere, p), 0);
    CHECK_FALSE(is_quasi_iso(g));
    CHECK_FALSE(oracle::quasi_iso(g));
  }
}

TEST_CASE("degreewise epi and mono", "[chain]") {
  CHECK(is_degreewise_epi(ChainMap::identity(s0())));
  CHECK(is_degreewise_mono(ChainMap::identity(s0())));
  CHECK(is_degreewise_epi(ChainMap::zero(s0(), ChainComplex(2))));
  CHECK_FALSE(is_degreewise_mono(ChainMap::zero(s0(), ChainComplex(2))));
  ChainComplex two = ChainComplex::sphere(0, 2, 2);
  ChainMap incl = ChainMap::validate(s0(), two, [&](int n) {
    Matrix m(two.dim(n), 1, 2);
    if (n == 0) m.set(0, 0, 1);
    return m;
  });
  CHECK_FALSE(is_degreewise_epi(incl));
  CHECK(is_degreewise_mono(incl));
  CHECK(is_degreewise_epi(sphere_plus_disk_projection(2)));
}

TEST_CASE("direct sums", "[chain]") {
  CHECK(homology_dims(direct_sum({s0(), s0()}, 2)).at(0) == 2);
  CHECK(direct_sum(std::vector<ChainComplex>{}, 2).is_zero());
  CHECK_THROWS_AS(direct_sum({s0(2), s0(3)}, 2), Error);

  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    ChainMap f = sphere_plus_disk_projection(3);
    ChainComplex c = random_complex(rng, 0, 2, 2, 3).complex;
    ChainMap sum = direct_sum({f, ChainMap::identity(c)}, 3);
    CHECK(is_quasi_iso(sum));
    ChainComplex cone_sum = direct_sum({mapping_cone(f), mapping_cone(ChainMap::identity(c))}, 3);
    CHECK(homology_dims(mapping_cone(sum)) == homology_dims(cone_sum));
  }
  ChainComplex sum = direct_sum({s0(), ChainComplex::disk(1, 2)}, 2);
  ChainMap back = sum_projection({s0(), ChainComplex::disk(1, 2)}, sum, 1)
                      .after(sum_injection({s0(), ChainComplex::disk(1, 2)}, sum, 1));
  CHECK(back == ChainMap::identity(ChainComplex::disk(1, 2)));
}

TEST_CASE("tensor products", "[chain]") {
  Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t p = trial % 2 ? 3 : 5;
    ChainComplex c = random_complex(rng, -1, 2, 3, p).complex;
    CHECK(tensor_with(c, ChainComplex::sphere(0, p)) == c);
    ChainComplex q = random_complex(rng, 0, 2, 2, p).complex;
    ChainComplex t = tensor(c, q);
    // Re-validate d o d = 0 and check Kunneth on Betti numbers.
    for (int n = t.lo() + 2; n <= t.hi(); ++n) CHECK((t.d(n - 1) * t.d(n)).is_zero());
    HomologyProfile hc = homology_dims(c), hq = homology_dims(q), ht = homology_dims(t);
    for (int n = t.lo(); n <= t.hi(); ++n) {
      std::size_t expect = 0;
      for (int i = c.lo(); i <= c.hi(); ++i) expect += hc.at(i) * hq.at(n - i);
      CHECK(ht.at(n) == expect);
    }
  }
  CHECK(tensor(ChainComplex::sphere(2, 3), ChainComplex::sphere(-1, 3)) == ChainComplex::sphere(1, 3));
  CHECK_THROWS_AS(tensor(s0(2), s0(3)), Error);
}

TEST_CASE("finite colimits and limits", "[chain]") {
  const std::uint32_t p = 3;
  Rng rng(27);
  ChainComplex c = random_complex(rng, 0, 2, 3, p).complex;

  RawCategory one;
  one.objects = {"x"};
  one.morphisms = {{"id", "x", "x"}};
  one.identities = {{"x", "id"}};
  FinCat pt = FinCat::validate(one);
  CHECK(homology_dims(finite_colimit(pt, {c}, {ChainMap::identity(c)}, p).object) == homology_dims(c));
  CHECK(finite_limit(pt, {c}, {ChainMap::identity(c)}, p).object.total_dim() == c.total_dim());

  RawCategory two;
  two.objects = {"x", "y"};
  two.morphisms = {{"id_x", "x", "x"}, {"id_y", "y", "y"}};
  two.identities = {{"x", "id_x"}, {"y", "id_y"}};
  FinCat disc = FinCat::validate(two);
  std::vector<ChainMap> ids{ChainMap::identity(c), ChainMap::identity(s0(p))};
  CHECK(finite_colimit(disc, {c, s0(p)}, ids, p).object.total_dim() == c.total_dim() + 1);
  CHECK(finite_limit(disc, {c, s0(p)}, ids, p).object.total_dim() == c.total_dim() + 1);

  // Parallel pair u, v: x -> y.
  RawCategory par = two;
  par.morphisms.push_back({"u", "x", "y"});
  par.morphisms.push_back({"v", "x", "y"});
  FinCat pp = FinCat::validate(par);
  auto map_of = [&](const ChainMap& u, const ChainMap& v, const ChainComplex& a, const ChainComplex& b) {
    std::vector<ChainMap> maps(pp.morphism_count());
    maps[pp.lookup_morphism("id_x")] = ChainMap::identity(a);
    maps[pp.lookup_morphism("id_y")] = ChainMap::identity(b);
    maps[pp.lookup_morphism("u")] = u;
    maps[pp.lookup_morphism("v")] = v;
    return maps;
  };
  ColimitResult coeq = finite_colimit(pp, {c, c}, map_of(ChainMap::identity(c), ChainMap::identity(c), c, c), p);
  CHECK(coeq.object.total_dim() == c.total_dim());
  for (MorId m : {pp.lookup_morphism("u"), pp.lookup_morphism("v")}) {
    (void)m;
    CHECK(coeq.legs[1].after(ChainMap::identity(c)) == coeq.legs[0]);
  }
  CHECK(is_degreewise_epi(copair(coeq.legs, coeq.object)));

  ChainComplex s = s0(p);
  LimitResult eq = finite_limit(pp, {s, s}, map_of(ChainMap::identity(s), ChainMap::zero(s, s), s, s), p);
  CHECK(eq.object.is_zero());

  std::vector<ChainMap> bad = map_of(ChainMap::identity(s), ChainMap::zero(s, s), s, s);
  bad[pp.lookup_morphism("id_y")] = ChainMap::zero(s, s);
  CHECK_THROWS_AS(finite_colimit(pp, {s, s}, bad, p), Error);
}

TEST_CASE("lifting problems", "[chain]") {
  const std::uint32_t p = 2;
  Rng rng(28);
  ChainComplex a = random_complex(rng, 0, 2, 2, p).complex;
  ChainComplex b = random_complex(rng, 0, 2, 2, p).complex;
  ChainMap top = random_chain_map(rng, a, b);
  auto h = solve_lifting(ChainMap::identity(a), ChainMap::identity(b), top, top);
  REQUIRE(h);
  CHECK(*h == top);

  // 0 -> S^0 against the trivial fibration S^0 (+) D^1 -> S^0.
  ChainMap fib = sphere_plus_disk_projection(p);
  ChainMap i = ChainMap::zero(ChainComplex(p), s0(p));
  auto lift = solve_lifting(i, fib, ChainMap::zero(ChainComplex(p), fib.source()), ChainMap::identity(s0(p)));
  REQUIRE(lift);
  CHECK(fib.after(*lift) == ChainMap::identity(s0(p)));

  // S^1 -> D^2 -> 0 with the identity of S^1 on top: the boundary inclusion of a
  // disk cannot be retracted.
  ChainComplex s1 = ChainComplex::sphere(1, p), d2 = ChainComplex::disk(2, p);
  ChainMap edge = ChainMap::validate(s1, d2, [&](int n) {
    return n == 1 ? Matrix::identity(1, p) : Matrix(d2.dim(n), s1.dim(n), p);
  });
  CHECK_FALSE(solve_lifting(edge, ChainMap::zero(s1, ChainComplex(p)), ChainMap::identity(s1),
                            ChainMap::zero(d2, ChainComplex(p))));
  CHECK_THROWS_AS(solve_lifting(ChainMap::identity(s0(p)), ChainMap::identity(s0(p)), ChainMap::identity(s0(p)),
                                ChainMap::zero(s0(p), s0(p))),
                  Error);
}

TEST_CASE("random complexes", "[chain]") {
  CHECK(random_complex(1, 0, 3, 0, 2).complex.is_zero());
  RandomComplex a = random_complex(99, -1, 3, 4, 3), b = random_complex(99, -1, 3, 4, 3);
  CHECK(a.complex == b.complex);
  CHECK(homology_dims(a.complex) == a.expected);
  // A single degree holds only spheres.
  RandomComplex one = random_complex(7, 2, 2, 1, 5);
  CHECK(homology_dims(one.complex).at(2) == one.complex.dim(2));
}
