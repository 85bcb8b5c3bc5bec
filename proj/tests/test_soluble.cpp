#include <cmath>
#include <random>

#include "doctest.h"
#include "widthlab/error.hpp"
#include "widthlab/group_spec.hpp"
#include "widthlab/soluble.hpp"
#include "widthlab/subgroups.hpp"

using namespace widthlab;

namespace {

TablePtr table_of(const char* spec) { return ElementTable::enumerate(parse_group(spec)); }

bool generates(const TablePtr& t, const std::vector<ElemId>& xs) { return subgroup(t, xs).size() == t->order(); }

const std::vector<SolubleInstance>& instances() {
  static const std::vector<SolubleInstance> all = builtin_soluble_instances();
  return all;
}

const SolubleInstance& instance(const std::string& name) {
  for (const auto& i : instances())
    if (i.name == name) return i;
  throw std::runtime_error("missing instance " + name);
}

// Brute-force count of a in N^m with <y_i^{a_i}> != G.
std::uint64_t brute_nongenerating(const TablePtr& t, const ElementSet& n, const std::vector<ElemId>& y) {
  auto ne = n.elements();
  std::vector<std::size_t> idx(y.size(), 0);
  std::uint64_t count = 0;
  while (true) {
    std::vector<ElemId> c;
    for (std::size_t i = 0; i < y.size(); ++i) c.push_back(t->conj(y[i], ne[idx[i]]));
    if (!generates(t, c)) ++count;
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == ne.size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return count;
}

// Direct fibre histogram of a -> prod [a_j, x_j] over N^m.
std::map<ElemId, std::uint64_t> brute_histogram(const TablePtr& t, const ElementSet& n, const std::vector<ElemId>& x) {
  auto ne = n.elements();
  std::vector<std::size_t> idx(x.size(), 0);
  std::map<ElemId, std::uint64_t> h;
  while (true) {
    ElemId r = ElementTable::identity();
    for (std::size_t j = 0; j < x.size(); ++j) r = t->mul(r, t->comm(ne[idx[j]], x[j]));
    ++h[r];
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == ne.size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return h;
}

}  // namespace

TEST_CASE("exact power comparison agrees with floating point away from ties") {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    long long a = 1 + static_cast<long long>(rng() % 50), b = 1 + static_cast<long long>(rng() % 50);
    Rational x(static_cast<long long>(rng() % 13) - 6, 1 + static_cast<long long>(rng() % 4));
    Rational y(static_cast<long long>(rng() % 13) - 6, 1 + static_cast<long long>(rng() % 4));
    double lhs = boost::rational_cast<double>(x) * std::log(static_cast<double>(a));
    double rhs = boost::rational_cast<double>(y) * std::log(static_cast<double>(b));
    if (std::abs(lhs - rhs) < 1e-9) continue;
    ++checked;
    CHECK(power_geq(a, x, b, y) == (lhs > rhs));
  }
  CHECK(checked > 1000);
  CHECK(power_geq(4, Rational(1, 2), 2, Rational(1)));
  CHECK(power_geq(2, Rational(1), 4, Rational(1, 2)));
  CHECK_FALSE(power_geq(3, Rational(1, 2), 2, Rational(1)));
}

TEST_CASE("matrices over prime fields") {
  auto c3 = FpMatrix::from_rows(2, {{0, 1}, {1, 1}});
  CHECK(c3 * c3 * c3 == FpMatrix::identity(2, 2));
  CHECK(c3.fixed_dimension() == 0);
  CHECK(FpMatrix::identity(5, 3).fixed_dimension() == 3);
  auto sing = FpMatrix::from_rows(3, {{1, 2}, {2, 1}});
  CHECK(sing.rank() == 1);
  CHECK_FALSE(sing.invertible());
  CHECK_THROWS_AS(FpMatrix::from_rows(4, {{1}}), InputError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    unsigned p = trial % 2 ? 3u : 2u;
    auto rand_m = [&] {
      FpMatrix m(p, 3);
      for (auto& v : m.a) v = static_cast<unsigned>(rng() % p);
      return m;
    };
    auto a = rand_m(), b = rand_m(), c = rand_m();
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * b).rank() <= std::min(a.rank(), b.rank()));
    // Fixed vectors by enumeration.
    std::size_t fixed = 0, total = 1;
    for (int i = 0; i < 3; ++i) total *= p;
    for (std::size_t v = 0; v < total; ++v) {
      unsigned c0[3] = {static_cast<unsigned>(v % p), static_cast<unsigned>(v / p % p), static_cast<unsigned>(v / p / p)};
      bool same = true;
      for (std::size_t j = 0; j < 3; ++j) {
        unsigned s = 0;
        for (std::size_t i = 0; i < 3; ++i) s += c0[i] * a.at(i, j);
        if (s % p != c0[j]) same = false;
      }
      if (same) ++fixed;
    }
    std::size_t expect = 1;
    for (std::size_t i = 0; i < a.fixed_dimension(); ++i) expect *= p;
    CHECK(fixed == expect);
  }
}

TEST_CASE("module view of chief factors") {
  for (const auto& inst : instances()) {
    CAPTURE(inst.name);
    FpModuleView view(inst.n, inst.z);
    CHECK(view.size() * inst.z.size() == inst.n.size());
    const auto& t = *inst.g;
    auto ne = inst.n.elements();
    for (ElemId a : ne)
      for (ElemId b : ne) CHECK(view.coords(t.mul(a, b)) == view.add(view.coords(a), view.coords(b)));
    for (std::uint64_t v = 0; v < view.size(); ++v) {
      CHECK(view.coords(view.representative(v)) == v);
      CHECK(view.pack(view.unpack(v)) == v);
    }
    CHECK(view.consistent(t.generator_ids()));
    CHECK(view.irreducible(t.generator_ids()));
  }
  auto q8 = instance("SL(2,3) on Q8");
  FpModuleView view(q8.n, q8.z);
  CHECK(view.p() == 2);
  CHECK(view.dim() == 2);
  // A reducible module: V under the Klein four group itself.
  auto v4 = table_of("Direct(Cyclic(2), Cyclic(2))");
  FpModuleView trivial(ElementSet::full(v4), ElementSet::trivial(v4));
  CHECK_FALSE(trivial.irreducible(v4->generator_ids()));
  auto s3 = table_of("Sym(3)");
  CHECK_THROWS_AS(FpModuleView(ElementSet::full(s3), ElementSet::trivial(s3)), PreconditionError);
}

TEST_CASE("fixed-point and fixed-space properties") {
  std::vector<Permutation> sym4{Permutation::from_cycles(4, "(0 1 2 3)"), Permutation::from_cycles(4, "(0 1)")};
  std::vector<Permutation> y{Permutation::from_cycles(4, "(0 1)"), Permutation::from_cycles(4, "(0 1 2)"),
                             Permutation::identity(4)};
  auto r = fixed_point_property(sym4, y, 2, Rational(1, 2));
  CHECK(r.holds);
  CHECK(r.witnesses == std::vector<std::size_t>{0, 1});
  CHECK(r.measure == std::vector<std::size_t>{2, 3, 0});
  CHECK_FALSE(fixed_point_property(sym4, y, 2, Rational(3, 4)).holds);
  CHECK_THROWS_AS(fixed_point_property({Permutation::from_cycles(4, "(0 1)")}, y, 1, Rational(1, 2)), InputError);

  auto c3 = FpMatrix::from_rows(2, {{0, 1}, {1, 1}});
  auto tr = FpMatrix::from_rows(2, {{1, 1}, {0, 1}});
  auto s = fixed_space_property({c3, tr, FpMatrix::identity(2, 2)}, 1, Rational(1));
  CHECK(s.holds);
  CHECK(s.witnesses == std::vector<std::size_t>{0});
  CHECK(s.measure == std::vector<std::size_t>{2, 1, 0});
  CHECK(fixed_space_property({c3, tr}, 2, Rational(1, 2)).holds);
}

TEST_CASE("non-generating count matches brute force") {
  for (const auto& inst : instances()) {
    CAPTURE(inst.name);
    auto q = find_qmn(ElementSet::full(inst.g));
    REQUIRE(q);
    if (brute_nongenerating(inst.g, q->n, inst.y) > 200000) continue;
    NongeneratingConstants c;
    auto rep = count_nongenerating(*q, inst.y, c);
    CHECK(rep.count == brute_nongenerating(inst.g, q->n, inst.y));
    CHECK(rep.total == [&] {
      std::uint64_t v = 1;
      for (std::size_t i = 0; i < inst.y.size(); ++i) v *= q->n.size();
      return v;
    }());
    // With k = 0 the bound is |N|^m |N/Z|^d, always above the count.
    CHECK(rep.pass);
    c.k = rep.k_on_quotient;
    auto sharp = count_nongenerating(*q, inst.y, c);
    CHECK(sharp.count == rep.count);
    MESSAGE(inst.name << ": count " << rep.count << " / " << rep.total << ", k " << rep.k_on_quotient
                      << ", bound pass " << sharp.pass);
    c.k = rep.k_on_quotient + 1;
    CHECK_THROWS_AS(count_nongenerating(*q, inst.y, c), PreconditionError);
  }
}

TEST_CASE("non-generating count on a simple group") {
  auto t = table_of("Alt(5)");
  auto q = find_qmn(ElementSet::full(t));
  REQUIRE(q);
  CHECK(q->kind == QmnKind::QuasiSemisimple);
  std::vector<ElemId> y{t->generator_ids()[0], t->generator_ids()[1]};
  auto rep = count_nongenerating(*q, y, NongeneratingConstants{});
  CHECK(rep.count == brute_nongenerating(t, q->n, y));
  CHECK(rep.strict_ok);
  CHECK(rep.maximal_supplements == 21);
  CHECK_THROWS_AS(count_nongenerating(*q, y, NongeneratingConstants{}, 100), CapacityError);
}

TEST_CASE("v identity over all maximal subgroups") {
  for (const char* spec : {"Alt(4)", "Sym(4)", "Alt(5)", "Sym(3)"}) {
    CAPTURE(spec);
    auto t = table_of(spec);
    auto maxes = maximal_subgroups(t);
    std::vector<ElementSet> normals;
    for (const auto& ns : normal_subgroups(t))
      if (ns.set.size() > 1) normals.push_back(ns.set);
    std::size_t cases = 0;
    for (const auto& m : maxes) {
      CHECK(is_maximal_subgroup(m));
      for (const auto& n : normals) {
        if (m.size() * n.size() / (m & n).size() != t->order()) {
          CHECK_THROWS_AS(v_identity_check(m, n, 0), InputError);
          continue;
        }
        for (ElemId y = 0; y < t->order(); ++y) {
          auto r = v_identity_check(m, n, y);
          CHECK(r.agree);
          ++cases;
        }
      }
    }
    CHECK(cases > 0);
  }
  auto t = table_of("Alt(5)");
  CHECK_FALSE(is_maximal_subgroup(ElementSet::trivial(t)));
  CHECK_FALSE(is_maximal_subgroup(ElementSet::full(t)));
}

TEST_CASE("subdirect inequality") {
  auto a = table_of("Alt(5)");
  auto id = Automorphism::identity(a);
  // Point stabiliser of 4.
  ElementSet b(a);
  for (ElemId x = 0; x < a->order(); ++x)
    if (a->permutation(x)(4) == 4) b.insert(x);
  REQUIRE(b.size() == 12);
  auto r = subdirect_product_check(a, {1, 0}, {id, id}, {b, b});
  // C_V(g) is the diagonal; [g,V] = {(x, x^-1)} meets B x B in |B| points.
  CHECK(r.centralizer == 60);
  CHECK(r.bracket_meet == 12);
  CHECK(r.lhs == 720);
  CHECK(r.pass);
  auto fixed = subdirect_product_check(a, {0, 1}, {id, id}, {b, b});
  CHECK(fixed.moved == 0);
  CHECK(fixed.centralizer == 3600);
  CHECK(fixed.bracket_meet == 1);
  CHECK(fixed.pass);
  CHECK_THROWS_AS(subdirect_diagonal_check(a, {1, 0}, {id, id}), InputError);
  CHECK_THROWS_AS(subdirect_product_check(a, {1, 0}, {id, id}, {ElementSet::full(a), ElementSet::full(a)}),
                  InputError);
  auto d3 = subdirect_diagonal_check(a, {1, 2, 0}, {id, id, id});
  CHECK(d3.centralizer == 60);
  CHECK(d3.pass);

  // Other invariant B_i under twisted components.
  auto inner = Automorphism::inner(a, 1);
  ElementSet b2(a);
  b.for_each([&](ElemId x) { b2.insert(inner(x)); });
  auto tw = subdirect_product_check(a, {1, 0}, {inner, inner.inverse()}, {b2, b});
  CHECK(tw.pass);
}

TEST_CASE("fibre histograms against direct enumeration") {
  for (const auto& inst : instances()) {
    CAPTURE(inst.name);
    auto fa = phi_fibres(inst.n, inst.z, inst.x);
    REQUIRE(fa.histograms.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(fa.histograms[i] == brute_histogram(inst.g, inst.n, inst.x[i]));
    CHECK(fa.coset_granular);
    for (const auto& [kappa, parts] : fa.decompositions) {
      const auto& t = *inst.g;
      CHECK(t.mul(t.mul(parts[0], parts[1]), parts[2]) == kappa);
      for (std::size_t i = 0; i < 3; ++i) CHECK(fa.report(i, kappa).pass);
    }
    CHECK(fa.decompositions.size() + fa.failures.size() == fa.k_elements.size());
    MESSAGE(inst.name << ": case " << static_cast<int>(fa.fibre_case) << ", failures " << fa.failures.size());
  }
  auto sl = instance("SL(2,3) on Q8");
  CHECK(phi_fibres(sl.n, sl.z, sl.x).fibre_case == FibreCase::CommutatorOrderTwo);
  CHECK(phi_fibres(instance("Alt(4) on V").n, instance("Alt(4) on V").z, instance("Alt(4) on V").x).fibre_case ==
        FibreCase::Abelian);
  auto h = instance("Heisenberg(3):Q8");
  CHECK(phi_fibres(h.n, h.z, h.x).fibre_case == FibreCase::BruteForce);
  std::vector<std::vector<ElemId>> trivial(3, std::vector<ElemId>(sl.x[0].size(), 0));
  CHECK_THROWS_AS(phi_fibres(sl.n, sl.z, trivial), PreconditionError);
  CHECK_THROWS_AS(phi_fibres(sl.n, sl.z, sl.x, 0, 10), CapacityError);
}

TEST_CASE("bilinear form of the commutator map") {
  for (const SolubleInstance& inst : {instance("SL(2,3) on Q8"), extraspecial_instance()}) {
    CAPTURE(inst.name);
    auto r = bilinear_extract(inst.n, inst.z, inst.x[0]);
    CHECK(r.formula_matches_polarization);
    CHECK(r.bilinear);
    CHECK(r.quadratic);
    CHECK(r.fibre_bound);
    CHECK(r.gram.size() == r.dim_v);
    // V is the preimage of N' under the induced map; count it directly.
    const auto& t = *inst.g;
    FpModuleView view(inst.n, inst.z);
    ElementSet nd = derived_subgroup(inst.n);
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < inst.x[0].size(); ++j) total *= view.size();
    std::uint64_t vsize = 0;
    for (std::uint64_t u = 0; u < total; ++u) {
      std::uint64_t rest = u;
      ElemId acc = ElementTable::identity();
      for (ElemId xj : inst.x[0]) {
        acc = t.mul(acc, t.comm(view.representative(rest % view.size()), xj));
        rest /= view.size();
      }
      if (nd.contains(acc)) ++vsize;
    }
    CHECK(r.v_size == vsize);
  }
  // With the cross terms ordered as [[u_j,x_j],[v_l,x_l]] the form misses the
  // diagonal sum_j [[u_j,x_j],[v_j,x_j]]; the second map of SL(2,3) exposes it.
  {
    auto sl = instance("SL(2,3) on Q8");
    auto r = bilinear_extract(sl.n, sl.z, sl.x[1]);
    CHECK(r.formula_matches_polarization);
    CHECK(r.displayed_defect_is_diagonal);
    CHECK(r.displayed_mismatches > 0);
    CHECK(r.quadratic);
    CHECK(r.fibre_bound);
  }
  auto e = extraspecial_instance();
  CHECK(e.g->order() == 160);
  CHECK(e.n.size() == 32);
  CHECK(e.z.size() == 2);
  auto h = instance("Heisenberg(3):Q8");
  CHECK_THROWS_AS(bilinear_extract(h.n, h.z, h.x[0]), PreconditionError);
}

TEST_CASE("psi identities on a class two group") {
  auto a = table_of("Heisenberg(3)");
  auto auts = automorphism_group(a);
  auto z = centre(a).elements();
  std::vector<Automorphism> pool;
  for (const auto& g : auts)
    if (std::all_of(z.begin(), z.end(), [&](ElemId c) { return g(c) == c; })) pool.push_back(g);
  REQUIRE(pool.size() == 216);
  auto g1 = pool[3], g2 = pool[7];

  auto w = psi_identity_check(a, {{1, g1}, {-1, g1}});
  CHECK(w.holds);
  CHECK(w.pairs.empty());
  auto w2 = psi_identity_check(a, {{1, g1}, {1, g2}, {-1, g2}, {-1, g1}});
  CHECK(w2.holds);
  CHECK(w2.checked == 27);
  CHECK(w2.pairs.size() == 2);
  CHECK_THROWS_AS(psi_identity_check(a, {{1, g1}, {-1, g2}}), InputError);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RelationTerm> rel;
    std::size_t pairs = 1 + rng() % 4;
    for (std::size_t i = 0; i < pairs; ++i) {
      const auto& g = pool[rng() % pool.size()];
      rel.push_back({1, g});
      rel.push_back({-1, g});
    }
    std::shuffle(rel.begin(), rel.end(), rng);
    CHECK(psi_identity_check(a, rel).holds);
    if (trial < 10) CHECK(psi_scalar_check(a, rel));
  }
  auto s3 = table_of("Sym(3)");
  auto id = Automorphism::identity(s3);
  CHECK_THROWS_AS(psi_identity_check(s3, {{1, id}, {-1, id}}), PreconditionError);
}

TEST_CASE("abelian q-generation") {
  auto c12 = table_of("Cyclic(12)");
  auto r = abelian_q_generation(ElementSet::full(c12), c12->generator_ids(), 2, 1);
  CHECK(r.verified);
  CHECK(r.x.size() <= 1);
  CHECK(r.y.size() == 1);
  auto c6 = table_of("Direct(Cyclic(2), Cyclic(3))");
  auto r6 = abelian_q_generation(ElementSet::full(c6), c6->generator_ids(), 6, 2);
  CHECK(r6.verified);
  CHECK(r6.x.size() <= 2 * distinct_prime_divisors(6));
  CHECK(distinct_prime_divisors(1) == 0);
  CHECK(distinct_prime_divisors(360) == 3);

  std::mt19937_64 rng(9);
  const char* specs[] = {"Cyclic(12)", "Direct(Cyclic(6), Cyclic(4))", "Direct(Cyclic(2), Cyclic(2), Cyclic(3))",
                         "Direct(Cyclic(9), Cyclic(3))", "Cyclic(30)", "Direct(Cyclic(10), Cyclic(15))"};
  for (const char* spec : specs) {
    auto t = table_of(spec);
    auto h = ElementSet::full(t);
    std::size_t r0 = min_generators(t);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<ElemId> x = t->generator_ids();
      for (int extra = 0; extra < 3; ++extra) x.push_back(static_cast<ElemId>(rng() % t->order()));
      std::shuffle(x.begin(), x.end(), rng);
      std::uint64_t q = 1 + rng() % 60;
      CAPTURE(spec);
      CAPTURE(q);
      auto g = abelian_q_generation(h, x, q, r0);
      CHECK(g.verified);
      // Independent check of <y^q, x'>.
      std::vector<ElemId> seeds = g.x;
      for (ElemId y : g.y) seeds.push_back(t->pow(y, static_cast<long long>(q)));
      CHECK(subgroup(t, seeds).size() == t->order());
    }
  }
  auto s3 = table_of("Sym(3)");
  CHECK_THROWS_AS(abelian_q_generation(ElementSet::full(s3), s3->generator_ids(), 2, 2), InputError);
}
