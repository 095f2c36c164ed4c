#include <random>

#include "doctest.h"
#include "sutured/abelian.hpp"

using namespace sutured;

namespace {

bool is_smith_diagonal(const IntMatrix& d, const IntVector& diag) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      Int expect = i == j ? diag[i] : 0;
      if (d(i, j) != expect) return false;
    }
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
    if (diag[i] < 0) return false;
    if (diag[i] == 0 && diag[i + 1] != 0) return false;
    if (diag[i] != 0 && diag[i + 1] % diag[i] != 0) return false;
  }
  return true;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range) {
  std::uniform_int_distribution<int> dist(-range, range);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("smith normal form examples") {
  CHECK(smith_normal_form(IntMatrix{{2, 0}, {0, 3}}).diag == IntVector{1, 6});
  CHECK(smith_normal_form(IntMatrix{{0}}).diag == IntVector{0});
  CHECK(smith_normal_form(IntMatrix{{1, 0}, {0, 1}}).diag == IntVector{1, 1});
  CHECK(smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}).diag == IntVector{2, 6, 12});
}

TEST_CASE("smith normal form on random matrices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m = random_matrix(rng, r, c, 6);
    SmithForm s = smith_normal_form(m);
    CHECK(is_smith_diagonal(s.left * m * s.right, s.diag));
    CHECK(std::abs(determinant(s.left)) == 1);
    CHECK(std::abs(determinant(s.right)) == 1);
    CHECK(s.right * s.right_inverse == IntMatrix::identity(c));
  }
}

TEST_CASE("group_from_relations") {
  auto q = group_from_relations(2, IntMatrix{{0, 5}});
  CHECK(q.group == FinAbGroup(1, {5}));
  CHECK(group_from_relations(1, IntMatrix(0, 1)).group == FinAbGroup::free(1));
  CHECK(group_from_relations(2, IntMatrix{{1, 1}}).group == FinAbGroup::free(1));
  CHECK(group_from_relations(2, IntMatrix{{2, 0}, {0, 3}}).group == FinAbGroup(0, {6}));
  CHECK(group_from_relations(3, IntMatrix{{2, 0, 0}, {0, 4, 0}}).group == FinAbGroup(1, {2, 4}));
}

TEST_CASE("group_from_relations kills relations and lifts generators") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4, k = rng() % 4;
    IntMatrix rel = random_matrix(rng, k, n, 4);
    Quotient q = group_from_relations(n, rel);
    for (std::size_t i = 0; i < k; ++i) {
      IntVector row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = rel(i, j);
      CHECK(q.hom(FinAbGroup::free(n).make(row)).is_identity());
    }
    for (std::size_t g = 0; g < q.group.dim(); ++g) {
      IntVector lift(n);
      for (std::size_t j = 0; j < n; ++j) lift[j] = q.lift(g, j);
      CHECK(q.hom(FinAbGroup::free(n).make(lift)) == q.group.generator(g));
    }
    // Row operations do not change the quotient.
    if (k >= 2) {
      IntMatrix rel2 = rel;
      for (std::size_t j = 0; j < n; ++j) rel2(0, j) += 3 * rel(1, j);
      CHECK(group_from_relations(n, rel2).group == q.group);
    }
  }
}

TEST_CASE("quotient_by_element") {
  FinAbGroup h(1, {5});
  CHECK(quotient_by_element(h, h.make({1, 0})).group == FinAbGroup(0, {5}));
  CHECK(quotient_by_element(h, h.identity()).group == h);
  CHECK(quotient_by_element(FinAbGroup::free(1), FinAbGroup::free(1).make({1})).group == FinAbGroup());
  auto q = quotient_by_element(h, h.make({1, 2}));
  CHECK(q.group == FinAbGroup(0, {5}));
  CHECK(q.hom(h.make({1, 2})).is_identity());
}

TEST_CASE("projections") {
  FinAbGroup h(1, {5});
  auto p = free_projection(h);
  CHECK(p(h.make({3, 4})) == FinAbGroup::free(1).make({3}));
  CHECK(free_projection(FinAbGroup::free(2)).matrix() == IntMatrix::identity(2));
  CHECK(free_projection(FinAbGroup(0, {5})).target() == FinAbGroup());
  CHECK(free_projection(h).compose(torsion_inclusion(h)).is_zero());
  CHECK(torsion_projection(h)(h.make({3, 4})) == FinAbGroup(0, {5}).make({4}));
}

TEST_CASE("hom well-definedness is checked") {
  FinAbGroup z5(0, {5}), z(1, {});
  CHECK_THROWS_AS(GroupHom(z5, z, IntMatrix{{1}}), InvalidHom);
  CHECK_THROWS_AS(GroupHom(z5, FinAbGroup(0, {3}), IntMatrix{{1}}), InvalidHom);
  CHECK_NOTHROW(GroupHom(FinAbGroup(0, {6}), FinAbGroup(0, {3}), IntMatrix{{1}}));
  CHECK_THROWS_AS(GroupHom(z, z, IntMatrix{{1, 0}}), InvalidHom);
}

TEST_CASE("group and element literals") {
  FinAbGroup g = FinAbGroup::parse("Z^1 x Z/5");
  CHECK(g == FinAbGroup(1, {5}));
  CHECK(FinAbGroup::parse("Z x Z x Z/2 x Z/4") == FinAbGroup(2, {2, 4}));
  CHECK(FinAbGroup::parse(g.to_string()) == g);
  auto e = g.parse_elem("(3 | 7)");
  CHECK(e == g.make({3, 2}));
  CHECK(g.format(e) == "(3|2)");
  CHECK(g.parse_elem(g.format(e)) == e);
  CHECK_THROWS_AS(FinAbGroup::parse("Z/4 x Z/2"), ParseError);
  CHECK_THROWS_AS(FinAbGroup::parse("Q"), ParseError);
  CHECK_THROWS_AS(g.parse_elem("(1,2|3)"), ParseError);
}

TEST_CASE("element arithmetic") {
  FinAbGroup g(1, {2, 4});
  auto a = g.make({1, 1, 3});
  CHECK(g.add(a, g.neg(a)).is_identity());
  CHECK(g.scale(a, 4) == g.make({4, 0, 0}));
  CHECK(g.order(g.make({0, 1, 2})) == 2);
  CHECK(g.order(g.make({0, 1, 1})) == 4);
  CHECK(g.order(a) == 0);
  CHECK(FinAbGroup(0, {2, 4}).elements().size() == 8);
  CHECK(FinAbGroup().elements().size() == 1);
  CHECK_THROWS_AS(checked::mul(Int{1} << 62, 4), ArithmeticOverflow);
}
