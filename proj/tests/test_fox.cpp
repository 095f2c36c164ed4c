#include <random>

#include "doctest.h"
#include "sutured/cyclotomic.hpp"
#include "sutured/fox.hpp"
#include "test_support.hpp"

using namespace sutured;
using sutured::testing::random_presentation;
using sutured::testing::random_word;

namespace {

GroupPresentation pres(const char* text) { return GroupPresentation::parse(text); }

const char* kTrefoil = "gens: x y\nrel: x y x Y X Y\nmeridian: x\n";
const char* kFigure8 = "gens: a b\nrel: a B a b A B a B A b\nmeridian: a\n";
const char* kUnknot = "gens: x\nmeridian: x\n";
const char* kCensus = "gens: a b\nrel: a b a b b A A b b\nmeridian: A b b\n";

GroupRingElem over_z(const char* s) { return GroupRingElem::parse(s, FinAbGroup::free(1)); }

// Free-ring identity sum_j (dr/dx_j)(x_j - 1) = r - 1.
FreeRingElem fundamental_lhs(const FreeWord& r, std::size_t n) {
  FreeRingElem lhs;
  for (std::size_t j = 0; j < n; ++j) {
    FreeRingElem d = fox_derivative(r, j);
    add_into(lhs, right_multiply(d, FreeWord::generator(j)));
    add_into(lhs, d, -1);
  }
  return lhs;
}

}  // namespace

TEST_CASE("free fox derivative examples") {
  auto x = FreeWord::generator(0), y = FreeWord::generator(1);
  CHECK(fox_derivative(x * y, 0) == FreeRingElem{{FreeWord(), 1}});
  CHECK(fox_derivative(x.inverse(), 0) == FreeRingElem{{x.inverse(), -1}});
  FreeWord comm = x * y * x.inverse() * y.inverse();
  CHECK(fox_derivative(comm, 0) == FreeRingElem{{FreeWord(), 1}, {x * y * x.inverse(), -1}});
  CHECK(fox_derivative(FreeWord(), 0).empty());
}

TEST_CASE("words reduce freely") {
  auto x = FreeWord::generator(0), y = FreeWord::generator(1);
  CHECK((x * y * y.inverse() * x.inverse()).empty());
  GroupPresentation p = pres("gens: x y\nrel: x y Y X x\nmeridian: x\n");
  CHECK(p.relators[0] == x);
  CHECK(p.parse_word("x^3 Y^-2") == x * x * x * y * y);
}

TEST_CASE("fundamental identity on random relators") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 4;
    FreeWord r = random_word(rng, n, 1 + rng() % 14);
    FreeRingElem lhs = fundamental_lhs(r, n);
    FreeRingElem rhs{{r, 1}};
    add_into(rhs, {{FreeWord(), 1}}, -1);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("abelianize") {
  auto ab = abelianize(pres(kTrefoil));
  CHECK(ab.group == FinAbGroup::free(1));
  CHECK(ab.images[0] == ab.images[1]);
  CHECK(abelianize(pres(kUnknot)).group == FinAbGroup::free(1));
  auto five = abelianize(pres("gens: x y\nrel: x^5\nmeridian: y\n"));
  CHECK(five.group == FinAbGroup(1, {5}));
  CHECK(abelianize(pres(kCensus)).group == FinAbGroup(1, {5}));
}

TEST_CASE("alexander matrix rows satisfy the abelian fundamental identity") {
  for (const char* text : {kTrefoil, kFigure8, kCensus}) {
    auto p = pres(text);
    auto ab = abelianize(p);
    auto a = alexander_matrix(p, ab);
    for (const auto& row : a.entries) {
      GroupRingElem sum(ab.group);
      for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * GroupRingElem::unit_minus_one(ab.group, ab.images[j]);
      CHECK(sum.is_zero());
    }
  }
  auto tre = alexander_matrix(pres(kTrefoil));
  CHECK(pm_equal(tre.entries[0][0], over_z("1 - t + t^2")));
  auto single = alexander_matrix(pres("gens: x y\nrel: x\nmeridian: y\n"));
  CHECK(single.entries[0][0] == GroupRingElem::one(single.group));
}

TEST_CASE("abelian derivative matches the pushed free derivative") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_presentation(rng, 1 + rng() % 4, 8);
    auto ab = abelianize(p);
    for (const auto& r : p.relators)
      for (std::size_t j = 0; j < p.num_generators(); ++j)
        CHECK(abelian_fox_derivative(r, j, ab) == ab(fox_derivative(r, j)));
  }
}

TEST_CASE("sutured torsion of standard knots") {
  auto t = FinAbGroup::free(1);
  CHECK(pm_equal(sutured_torsion(pres(kTrefoil)).value, over_z("t - 1 + t^-1")));
  CHECK(pm_equal(sutured_torsion(pres(kUnknot)).value, GroupRingElem::one(t)));
  CHECK(pm_equal(sutured_torsion(pres(kFigure8)).value, over_z("t - 3 + t^-1")));
  auto unknot = turaev_torsion(pres(kUnknot));
  CHECK(unknot.numerator == GroupRingElem::one(t));
  auto tre = turaev_torsion(pres(kTrefoil));
  CHECK(pm_equal(tre.numerator, over_z("t^2 - t + 1")));
}

TEST_CASE("sutured torsion of the census knot with torsion in homology") {
  auto p = pres(kCensus);
  auto s = sutured_torsion(p);
  CHECK(s.group == FinAbGroup(1, {5}));
  CHECK(s.route == DivisionRoute::Exact);
  CHECK(s.value.norm() == Half::of(9));
  CHECK(pushforward(s.value, free_projection(s.group)).norm() == Half::of(5));
  CHECK(pm_equal(pushforward(s.value, free_projection(s.group)), over_z("2 + t + 2*t^2")));
  CHECK(s.group.has_infinite_order(s.meridian));
}

TEST_CASE("character route agrees with exact division") {
  auto p = pres(kCensus);
  auto ab = abelianize(p);
  auto tau = turaev_torsion(p);
  auto m = ab(p.meridian);
  auto num = tau.numerator * GroupRingElem::unit_minus_one(ab.group, m);
  auto exact = divide_exact(num, tau.denominator, 1);
  auto chars = divide_by_characters(num, tau.denominator);
  REQUIRE(exact);
  REQUIRE(chars);
  CHECK(*exact == *chars);

  std::mt19937 rng(31);
  for (const FinAbGroup& h : {FinAbGroup(1, {5}), FinAbGroup(1, {2, 4}), FinAbGroup(1, {6}), FinAbGroup(1, {})}) {
    for (int trial = 0; trial < 30; ++trial) {
      GroupRingElem q(h);
      for (int k = 0; k < 4; ++k) {
        IntVector c(h.dim());
        for (auto& v : c) v = static_cast<Int>(rng() % 7) - 3;
        q.add_term(h.make(c), static_cast<Int>(rng() % 5) - 2);
      }
      IntVector gc(h.dim());
      for (auto& v : gc) v = static_cast<Int>(rng() % 5);
      gc[0] = (trial % 2 ? -1 : 1) * (1 + static_cast<Int>(rng() % 2));
      auto g = h.make(gc);
      auto x = q * GroupRingElem::unit_minus_one(h, g);
      auto via = divide_by_characters(x, g);
      REQUIRE(via);
      CHECK(*via == q);
      if (!x.is_zero()) {
        auto off = x + GroupRingElem::one(h);
        CHECK(divide_by_characters(off, g).has_value() == divide_exact(off, g, 1).has_value());
      }
    }
  }
}

TEST_CASE("column independence on random presentations") {
  std::mt19937 rng(4242);
  int checked_count = 0;
  while (checked_count < 150) {
    auto p = random_presentation(rng, 2 + rng() % 3, 7);
    auto ab = abelianize(p);
    if (ab.group.rank() != 1) continue;
    std::vector<TorsionFraction> fr;
    for (std::size_t j = 0; j < p.num_generators(); ++j)
      if (ab.group.has_infinite_order(ab.images[j])) fr.push_back(turaev_torsion(p, j));
    for (std::size_t a = 1; a < fr.size(); ++a) {
      CHECK(pm_equal(fr[0], fr[a]));
      // Exact form: D_j (x_k - 1) = +-D_k (x_j - 1).
      auto lhs = fr[0].numerator * GroupRingElem::unit_minus_one(ab.group, fr[a].denominator);
      auto rhs = fr[a].numerator * GroupRingElem::unit_minus_one(ab.group, fr[0].denominator);
      CHECK((lhs == rhs || lhs == -rhs));
    }
    ++checked_count;
  }
}

TEST_CASE("invalid torsion requests") {
  CHECK_THROWS_AS(turaev_torsion(pres("gens: x y\nmeridian: x\n")), Indeterminate);
  CHECK_THROWS_AS(turaev_torsion(pres("gens: x y\nrel: x^2\nmeridian: y\n"), 0), Indeterminate);
  CHECK_THROWS_AS(sutured_torsion(pres("gens: x y\nrel: x^2\nmeridian: x\n")), Indeterminate);
}

TEST_CASE("presentation parse errors carry positions") {
  try {
    pres("gens: x y\nrel: x q\nmeridian: x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 8);
  }
  CHECK_THROWS_AS(pres("rel: x\n"), ParseError);
  CHECK_THROWS_AS(pres("gens: x\n"), ParseError);
  CHECK_THROWS_AS(pres("gens: X\nmeridian: X\n"), ParseError);
  CHECK_THROWS_AS(pres("gens: x\nfoo: x\nmeridian: x\n"), ParseError);
  auto p = pres(kCensus);
  CHECK(GroupPresentation::parse(p.to_string()).relators == p.relators);
}

TEST_CASE("cyclotomic arithmetic") {
  CHECK(cyclotomic_polynomial(1) == IntVector{-1, 1});
  CHECK(cyclotomic_polynomial(5) == IntVector{1, 1, 1, 1, 1});
  CHECK(cyclotomic_polynomial(6) == IntVector{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == IntVector{1, 0, -1, 0, 1});
  for (Int n : {1, 2, 3, 4, 5, 6, 8, 12}) {
    CyclotomicField f(n);
    CHECK(f.root_power(n) == f.from_int(1));
    CHECK(f.mul(f.root_power(3), f.root_power(-3)) == f.from_int(1));
    // 1 + zeta + ... + zeta^(n-1) = 0 for n > 1.
    auto s = f.zero();
    for (Int k = 0; k < n; ++k) s = f.add(s, f.root_power(k));
    CHECK(f.as_integer(s) == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("torsion is invariant under Tietze moves") {
  using sutured::testing::TietzeMove;
  std::mt19937 rng(777);
  int done = 0;
  while (done < 150) {
    auto p = random_presentation(rng, 2 + rng() % 3, 6);
    auto ab = abelianize(p);
    if (ab.group.rank() != 1) continue;
    auto tau = turaev_torsion(p);
    for (TietzeMove mv : {TietzeMove::Conjugate, TietzeMove::Invert, TietzeMove::Substitute}) {
      auto t = sutured::testing::tietze(rng, p, mv);
      auto ab2 = abelianize(t.moved);
      auto hom = sutured::testing::induced_hom(ab2, ab, t.images);
      auto tau2 = sutured::testing::push(turaev_torsion(t.moved), hom);
      CHECK(pm_equal(tau, tau2));
    }
    ++done;
  }
}
