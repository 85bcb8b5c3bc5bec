#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "widthlab/automorphism.hpp"
#include "widthlab/element_table.hpp"
#include "widthlab/error.hpp"
#include "widthlab/subgroups.hpp"

using namespace widthlab;

namespace {
TablePtr table_of(const char* spec) { return ElementTable::enumerate(parse_group(spec)); }
std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }
}  // namespace

TEST_CASE("permutation conventions") {
  auto x = Permutation::from_cycles(3, "(0 1 2)");
  auto y = Permutation::from_cycles(3, "(0 1)");
  CHECK(conjugate(x, y).to_cycles() == "(0 2 1)");
  CHECK(commutator(x, y) == x.inverse() * y.inverse() * x * y);
  // Left-to-right products: first x then y.
  CHECK((x * y)(0) == y(x(0)));
  CHECK(power(x, 3).is_identity());
  CHECK(power(x, -1) == x.inverse());
  CHECK(Permutation::from_cycles(5, "(0 1 2)(3 4)").order() == 6);
  CHECK_THROWS_AS(Permutation::from_cycles(3, "(0 3)"), InputError);
  CHECK_THROWS_AS(Permutation::from_cycles(3, "(0 1 0)"), InputError);
  CHECK_THROWS_AS(x * Permutation::identity(4), InputError);
}

TEST_CASE("group orders match closed forms") {
  for (unsigned n = 1; n <= 7; ++n) {
    CHECK(table_of(("Sym(" + std::to_string(n) + ")").c_str())->order() == factorial(n));
    CHECK(table_of(("Alt(" + std::to_string(n) + ")").c_str())->order() == std::max<std::size_t>(1, factorial(n) / 2));
  }
  for (unsigned n = 1; n <= 12; ++n) {
    CHECK(table_of(("Cyclic(" + std::to_string(n) + ")").c_str())->order() == n);
    CHECK(table_of(("Dihedral(" + std::to_string(n) + ")").c_str())->order() == 2 * n);
  }
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
    CHECK(table_of(("SL(2," + std::to_string(q) + ")").c_str())->order() == q * (q * q - 1));
  for (unsigned p : {2u, 3u, 5u}) CHECK(table_of(("Heisenberg(" + std::to_string(p) + ")").c_str())->order() == p * p * p);
  CHECK(table_of("Direct(Sym(3), Cyclic(4))")->order() == 24);
  CHECK(table_of("FromGenerators(5; (0 1 2 3 4), (0 1))")->order() == 120);
  CHECK(table_of("  Sym ( 4 ) ")->order() == 24);
}

TEST_CASE("bad group specs are rejected") {
  CHECK_THROWS_AS(parse_group("Foo(3)"), InputError);
  CHECK_THROWS_AS(parse_group("Sym(x)"), InputError);
  CHECK_THROWS_AS(parse_group("SL(2,6)"), InputError);
  CHECK_THROWS_AS(parse_group("Heisenberg(4)"), InputError);
  CHECK_THROWS_AS(parse_group("FromGenerators(3; (0 5))"), InputError);
  CHECK_THROWS_AS(ElementTable::enumerate(parse_group("Sym(8)"), 1000), CapacityError);
}

TEST_CASE("element table basics") {
  auto t = table_of("Sym(4)");
  CHECK(t->permutation(0).is_identity());
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    ElemId a = rng() % 24, b = rng() % 24;
    CHECK(t->permutation(t->mul(a, b)) == t->permutation(a) * t->permutation(b));
    CHECK(t->mul(a, t->inv(a)) == 0);
    CHECK(t->permutation(t->conj(a, b)) == conjugate(t->permutation(a), t->permutation(b)));
  }
  // Breadth-first ids: generators appear right after the identity.
  CHECK(t->generator(0) == 1);
  CHECK_THROWS_AS(t->id_of(Permutation::from_cycles(5, "(0 4)")), InputError);
  // Same results with the hashed product path of a large group.
  auto big = table_of("Sym(7)");
  for (int i = 0; i < 200; ++i) {
    ElemId a = rng() % 5040, b = rng() % 5040;
    CHECK(big->permutation(big->mul(a, b)) == big->permutation(a) * big->permutation(b));
  }
}

TEST_CASE("table cache round trip") {
  auto g = parse_group("Alt(5)");
  auto t = ElementTable::enumerate(g);
  std::stringstream ss;
  t->save(ss);
  auto u = ElementTable::load(ss, g);
  REQUIRE(u->order() == 60);
  for (ElemId a = 0; a < 60; ++a) {
    CHECK(u->permutation(a) == t->permutation(a));
    for (ElemId b = 0; b < 60; ++b) CHECK(u->mul(a, b) == t->mul(a, b));
  }
}

TEST_CASE("conjugacy classes") {
  CHECK(conjugacy_classes(table_of("Alt(5)")).size() == 5);
  CHECK(conjugacy_classes(table_of("Sym(5)")).size() == 7);
  CHECK(conjugacy_classes(table_of("SL(2,5)")).size() == 9);
  CHECK(conjugacy_classes(table_of("Heisenberg(3)")).size() == 11);
}

TEST_CASE("subgroups, closures and brackets") {
  auto t = table_of("Sym(4)");
  ElementSet g = ElementSet::full(t);
  auto d = derived_subgroup(g);
  CHECK(d.size() == 12);
  CHECK(derived_subgroup(d).size() == 4);
  CHECK(is_soluble(g));
  CHECK_FALSE(is_soluble(ElementSet::full(table_of("Alt(5)"))));
  ElemId tr = t->id_of(Permutation::from_cycles(4, "(0 1)"));
  CHECK(subgroup(t, std::vector<ElemId>{tr}).size() == 2);
  CHECK(subgroup(t, std::vector<ElemId>{tr}, ClosureMode::NormalClosure).size() == 24);
  // Lower central series of Sym(4) stops at Alt(4).
  CHECK(iterated_bracket(g, g, 2).size() == 12);
  CHECK(omega_limit(g, g).size() == 12);
  auto d8 = ElementSet::full(table_of("Dihedral(4)"));
  CHECK(iterated_bracket(d8, d8, 1).size() == 2);
  CHECK(iterated_bracket(d8, d8, 2).size() == 1);
  CHECK(omega_limit(d8, d8).size() == 1);
  CHECK(centre(t).size() == 1);
  CHECK(centre(table_of("SL(2,5)")).size() == 2);
  CHECK(centre(table_of("Heisenberg(5)")).size() == 5);
  ElementSet not_sub = ElementSet::of(t, std::vector<ElemId>{0, tr, t->id_of(Permutation::from_cycles(4, "(1 2)"))});
  CHECK_FALSE(is_subgroup(not_sub));
  CHECK_THROWS_AS(generators_of(not_sub), InputError);
}

TEST_CASE("normal subgroup lattices") {
  CHECK(normal_subgroups(table_of("Sym(4)")).size() == 4);
  CHECK(normal_subgroups(table_of("Alt(5)")).size() == 2);
  CHECK(normal_subgroups(table_of("Sym(5)")).size() == 3);
  CHECK(normal_subgroups(table_of("SL(2,5)")).size() == 3);
  CHECK(normal_subgroups(table_of("Cyclic(12)")).size() == 6);
  CHECK(normal_subgroups(table_of("Dihedral(4)")).size() == 6);
  auto ns = normal_subgroups(table_of("Sym(4)"));
  CHECK(ns.front().set.size() == 1);
  CHECK(ns.back().set.size() == 24);
}

TEST_CASE("subgroup lattices and mu") {
  CHECK(all_subgroups(table_of("Alt(5)")).subgroups.size() == 59);
  CHECK(all_subgroups(table_of("Sym(4)")).subgroups.size() == 30);
  CHECK(all_subgroups(table_of("Sym(3)")).subgroups.size() == 6);
  CHECK(maximal_subgroups(table_of("Alt(5)")).size() == 21);
  auto m = mu(table_of("Alt(5)"));
  CHECK(m.index == 5);
  CHECK(m.value == doctest::Approx(std::log(5.0) / std::log(60.0)));
  for (unsigned p : {2u, 3u, 5u, 7u}) CHECK(mu(table_of(("Cyclic(" + std::to_string(p) + ")").c_str())).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(mu(table_of("Cyclic(1)")), PreconditionError);
}

TEST_CASE("quasi-minimal normal subgroups") {
  {
    auto t = table_of("Alt(5)");
    auto q = find_qmn(ElementSet::full(t));
    REQUIRE(q);
    CHECK(q->n.size() == 60);
    CHECK(q->z.size() == 1);
    CHECK(q->kind == QmnKind::QuasiSemisimple);
    CHECK(q->factors == 1);
    CHECK(q->simple_order == 60);
  }
  {
    auto t = table_of("SL(2,5)");
    auto q = find_qmn(ElementSet::full(t));
    REQUIRE(q);
    CHECK(q->n.size() == 120);
    CHECK(q->z.size() == 2);
    CHECK(q->kind == QmnKind::QuasiSemisimple);
  }
  {
    auto t = table_of("Sym(4)");
    auto q = find_qmn(ElementSet::full(t));
    REQUIRE(q);
    CHECK(q->n.size() == 4);
    CHECK(q->kind == QmnKind::Soluble);
    CHECK(q->prime == 2);
    CHECK(q->rank == 2);
  }
  {
    // Sym(3) wr C2: the base C3 x C3 is minimal normal.
    auto t = table_of("FromGenerators(6; (0 1 2), (0 1), (0 3)(1 4)(2 5))");
    auto q = find_qmn(ElementSet::full(t));
    REQUIRE(q);
    CHECK(q->n.size() == 9);
    CHECK(q->prime == 3);
  }
  {
    auto t = table_of("Direct(Alt(5),Alt(5))");
    auto q = find_qmn(ElementSet::full(t));
    REQUIRE(q);
    CHECK(q->n.size() == 60);
  }
  CHECK_FALSE(find_qmn(ElementSet::full(table_of("Cyclic(1)"))));
  // Nilpotent groups have no N = [N,G] > 1.
  CHECK_FALSE(find_qmn(ElementSet::full(table_of("Heisenberg(3)"))));
}

TEST_CASE("acceptability") {
  auto a5 = table_of("Alt(5)");
  auto r = is_acceptable(ElementSet::full(a5));
  CHECK_FALSE(r.acceptable);
  REQUIRE(r.witness);
  CHECK(r.witness->first.size() == 1);
  CHECK(r.witness->second.size() == 60);
  auto s4 = table_of("Sym(4)");
  auto v4 = find_qmn(ElementSet::full(s4))->n;
  CHECK(is_acceptable(v4).acceptable);
  auto sl = is_acceptable(ElementSet::full(table_of("SL(2,5)")));
  CHECK_FALSE(sl.acceptable);
  CHECK(sl.witness->first.size() == 2);
  // Sym(4) itself: [G,G] != G.
  CHECK_FALSE(is_acceptable(ElementSet::full(s4)).acceptable);
}

TEST_CASE("automorphisms") {
  auto s5 = table_of("Sym(5)");
  auto alt = [&] {
    std::vector<ElemId> ids;
    for (ElemId a = 0; a < s5->order(); ++a) {
      auto p = s5->permutation(a);
      // even permutations
      std::size_t cycles = 0;
      std::vector<bool> seen(5);
      for (std::size_t i = 0; i < 5; ++i)
        if (!seen[i]) {
          ++cycles;
          for (std::size_t j = i; !seen[j]; j = p(j)) seen[j] = true;
        }
      if ((5 - cycles) % 2 == 0) ids.push_back(a);
    }
    return ElementSet::of(s5, ids);
  }();
  auto induced = automorphism_from_ambient(s5, alt, Permutation::from_cycles(5, "(0 1)"));
  CHECK(induced.subgroup_table->order() == 60);
  CHECK_FALSE(is_inner(induced.automorphism));
  CHECK(compose(induced.automorphism, induced.automorphism).is_identity());
  auto a5 = table_of("Alt(5)");
  CHECK(automorphism_group(a5).size() == 120);
  CHECK(automorphism_group(table_of("Sym(4)")).size() == 24);
  CHECK(automorphism_group(table_of("Cyclic(12)")).size() == 4);
  CHECK(automorphism_group(table_of("Dihedral(4)")).size() == 8);
  // Conjugation by an odd permutation of degree 5 does not normalize Cyclic(5)'s complement...
  CHECK_THROWS_AS(Automorphism::from_conjugation(table_of("Cyclic(5)"), Permutation::from_cycles(5, "(0 1)")), InputError);
  // Bad generator images are rejected.
  std::vector<ElemId> bad{a5->generator(0), a5->generator(0)};
  CHECK_THROWS_AS(Automorphism::from_generator_images(a5, bad), InputError);
  auto in = Automorphism::inner(a5, 7);
  CHECK(is_inner(in));
  CHECK(compose(in, in.inverse()).is_identity());
  CHECK(in.pow(a5->element_order(7)).is_identity());
}

TEST_CASE("minimal number of generators") {
  CHECK(min_generators(table_of("Cyclic(6)")) == 1);
  CHECK(min_generators(table_of("Alt(5)")) == 2);
  CHECK(min_generators(table_of("Direct(Cyclic(2),Cyclic(2),Cyclic(2))")) == 3);
  CHECK(min_generators(table_of("Cyclic(1)")) == 0);
}
