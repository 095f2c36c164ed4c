#include <random>
#include <set>

#include "doctest.h"
#include "sutured/decomposition.hpp"
#include "sutured/heegaard.hpp"

using namespace sutured;

namespace {

const FinAbGroup Z = FinAbGroup::free(1);
const FinAbGroup ZxZ5(1, {5});

GroupRingElem P(std::string_view s, const FinAbGroup& h) { return GroupRingElem::parse(s, h); }

// The element of Z + Z/5 from the census example, in t (free) and r (order 5).
GroupRingElem example14() { return P("1 + r + t + r*t + r^2*t - r^3*t - r^4*t + r*t^2 + r^2*t^2", ZxZ5); }

GroupRingElem random_elem(std::mt19937& rng, const FinAbGroup& h, int terms) {
  GroupRingElem x(h);
  for (int i = 0; i < terms; ++i) {
    IntVector c(h.dim());
    for (auto& v : c) v = static_cast<Int>(rng() % 7) - 3;
    x.add_term(h.make(c), static_cast<Int>(rng() % 5) - 2);
  }
  return x;
}

DetectionInput single_coset(Int dim, const char* chi) {
  return {Z, Z.make({1}), 1, {{Z.identity(), dim, P(chi, Z)}}};
}

struct KnotData {
  GroupRingElem chi;
  std::map<GroupElem, Int> table;
  GroupElem meridian;
  Int h1_order;
};

// Canonically normalized data of every null-homologous diagram with p <= max_p.
std::vector<KnotData> null_homologous_examples(Int max_p) {
  std::vector<KnotData> out;
  for (Int p = 1; p <= max_p; ++p)
    enumerate_diagrams(p, [&](const OneOneDiagram& d) {
      auto k = knot_complement_homology(d);
      if (k.group.torsion_order() != k.h1_order) return;
      auto e = euler_char(d);
      REQUIRE(e.canonical);
      const auto& c = *e.canonical;
      GroupElem m = c.lattice ? c.lattice->embed(k.meridian) : k.meridian;
      out.push_back({c.value, e.hfk_table, m, k.h1_order});
    });
  return out;
}

GroupRingElem unknot_chi(const FinAbGroup& g) {
  GroupRingElem u(g);
  for (const auto& t : FinAbGroup(0, g.torsion_divisors()).elements())
    u.add_term(g.make(IntVector(g.rank(), 0), t.torsion_part), 1);
  return u;
}

}  // namespace

TEST_CASE("report on the census element") {
  auto r = report(EnhancedChi(example14()));
  CHECK(r.norm_en == Half::of(9));
  CHECK(r.chi_gr == P("2 + t + 2*t^2", Z));
  CHECK(r.norm_gr == Half::of(5));
  CHECK(r.per_torsion.size() == 5);
  GroupRingElem sum(ZxZ5);
  for (const auto& [cls, part] : r.per_torsion) sum += part;
  CHECK(sum == example14());

  auto one = report(EnhancedChi(GroupRingElem::one(Z)));
  CHECK(one.norm_en == Half::of(1));
  CHECK(one.norm_gr == Half::of(1));
}

TEST_CASE("torsion free groups have equal norms") {
  std::mt19937 rng(17);
  for (const FinAbGroup& h : {FinAbGroup::free(1), FinAbGroup::free(2), FinAbGroup::free(3)})
    for (int t = 0; t < 50; ++t) {
      auto r = report(EnhancedChi(random_elem(rng, h, 6)));
      CHECK(r.norm_en == r.norm_gr);
    }
}

TEST_CASE("graded projection commutes with pushforward") {
  std::mt19937 rng(23);
  const FinAbGroup src(2, {3});
  const FinAbGroup dst(1, {6});
  for (int t = 0; t < 80; ++t) {
    // Free block arbitrary, torsion sent to torsion (Z/3 -> Z/6 multiplies by 2).
    IntMatrix a(2, 3);
    a(0, 0) = static_cast<Int>(rng() % 5) - 2;
    a(0, 1) = static_cast<Int>(rng() % 5) - 2;
    a(1, 0) = static_cast<Int>(rng() % 6);
    a(1, 1) = static_cast<Int>(rng() % 6);
    a(1, 2) = 2 * static_cast<Int>(rng() % 3);
    GroupHom f(src, dst, a);
    IntMatrix fa(1, 2);
    fa(0, 0) = a(0, 0);
    fa(0, 1) = a(0, 1);
    GroupHom fbar(FinAbGroup::free(2), FinAbGroup::free(1), fa);
    auto x = random_elem(rng, src, 7);
    auto lhs = report(EnhancedChi(pushforward(x, f))).chi_gr;
    auto rhs = pushforward(report(EnhancedChi(x)).chi_gr, fbar);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("bound chain") {
  auto b = bound_chain(9, EnhancedChi(example14()));
  CHECK(b.ok);
  CHECK(b.tight_first);
  CHECK_FALSE(b.tight_second);
  auto tre = EnhancedChi(P("t - 1 + t^-1", Z));
  b = bound_chain(3, tre);
  CHECK((b.ok && b.tight_first && b.tight_second));
  b = bound_chain(2, tre);
  CHECK_FALSE(b.ok);
  CHECK(b.failing == "first");
}

TEST_CASE("bound chain holds on every certified diagram") {
  int certified = 0;
  for (Int p = 1; p <= 5; ++p)
    enumerate_diagrams(p, [&](const OneOneDiagram& d) {
      auto cert = khi_certificate(d);
      auto e = euler_char(d);
      auto b = bound_chain(e.total_dimension, EnhancedChi(e.raw));
      CHECK(b.ok);
      if (cert.certified) {
        CHECK(b.tight_first);
        ++certified;
      }
    });
  CHECK(certified > 0);
}

TEST_CASE("difference test examples") {
  auto m = Z.make({1});
  auto tre = EnhancedChi(P("t - 1 + t^-1", Z), m);
  auto un = EnhancedChi(P("1", Z), m);
  auto r = difference_test(tre, un);
  REQUIRE(r.size() == 1);
  CHECK(r[0].divisible);
  CHECK(r[0].f == P("1", Z));
  CHECK(r[0].h == Z.make({-1}));

  r = difference_test(tre, tre);
  REQUIRE(r.size() == 1);
  CHECK(r[0].divisible);
  CHECK(r[0].f.is_zero());

  r = difference_test(EnhancedChi(P("t", Z), m), un);
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].divisible);

  CHECK_THROWS_AS(difference_test(tre, EnhancedChi(P("1", Z))), InvalidInput);
  CHECK_THROWS_AS(difference_test(tre, EnhancedChi(P("1", ZxZ5), ZxZ5.make({1, 0}))), GroupMismatch);
}

TEST_CASE("difference test is antisymmetric") {
  std::mt19937 rng(5);
  const FinAbGroup h(1, {3});
  auto m = h.make({1, 0});
  for (int t = 0; t < 60; ++t) {
    auto base = random_elem(rng, h, 4);
    auto a = base + random_elem(rng, h, 3) * GroupRingElem::unit_minus_one(h, m).pow(2);
    auto b = t % 3 ? base : random_elem(rng, h, 4);
    auto ab = difference_test(EnhancedChi(a, m), EnhancedChi(b, m));
    auto ba = difference_test(EnhancedChi(b, m), EnhancedChi(a, m));
    REQUIRE(ab.size() == ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
      CHECK(ab[i].coset == ba[i].coset);
      CHECK(ab[i].divisible == ba[i].divisible);
      if (ab[i].divisible) {
        CHECK(ab[i].f == -ba[i].f);
        if (!ab[i].f.is_zero()) CHECK(ab[i].h == ba[i].h);
      }
    }
  }
}

TEST_CASE("difference witnesses reconstruct the difference") {
  std::mt19937 rng(9);
  const FinAbGroup h(1, {2});
  auto m = h.make({1, 0});
  auto sq = GroupRingElem::unit_minus_one(h, m).pow(2);
  for (int t = 0; t < 40; ++t) {
    auto a = random_elem(rng, h, 5);
    auto b = a + random_elem(rng, h, 4) * sq;
    GroupRingElem rebuilt(h);
    for (const auto& c : difference_test(EnhancedChi(b, m), EnhancedChi(a, m))) {
      REQUIRE(c.divisible);
      for (const auto& [k, twice] : c.f.twice_terms())
        rebuilt.add_twice(h.add(c.h, h.scale(m, k.free_part[0])), twice);
    }
    CHECK(rebuilt * sq == b - a);
  }
}

TEST_CASE("every null-homologous example differs from the unknot by (m - 1)^2") {
  auto all = null_homologous_examples(5);
  std::set<Int> orders;
  for (const auto& k : all) {
    auto r = difference_test(EnhancedChi(k.chi, k.meridian), EnhancedChi(unknot_chi(k.chi.group()), k.meridian));
    CHECK(static_cast<Int>(r.size()) == k.h1_order);
    for (const auto& c : r) CHECK(c.divisible);
    orders.insert(k.h1_order);
  }
  CHECK(orders.size() >= 3);
}

TEST_CASE("classifier transcriptions") {
  CHECK(classify(single_coset(1, "1")).kind == Verdict::Kind::Unknot);
  auto v = classify(single_coset(3, "t - 1 + t^-1"));
  CHECK(v.kind == Verdict::Kind::GenusOneFibred);
  CHECK(v.genus == 1);
  v = classify(single_coset(3, "1"));
  CHECK(v.kind == Verdict::Kind::Inconsistent);
  CHECK(v.reason == "symmetry");

  v = classify(single_coset(3, "t^2 - 1 + t^-2"));
  CHECK(v.to_string() == "Inconsistent(next-to-top)");
  v = classify(single_coset(3, "t^2 - 1 + t^-2"), {false});
  CHECK(v.kind == Verdict::Kind::FibredGenusN);
  CHECK(v.genus == 2);
  CHECK(v.excluded_by_nonvanishing);

  CHECK(classify(single_coset(2, "1")).reason == "parity");
  CHECK(classify(single_coset(1, "t")).reason == "divisibility");
  CHECK(classify(single_coset(5, "-t + 3 - t^-1")).kind == Verdict::Kind::Unknown);
  CHECK(classify(single_coset(3, "2*t - 3 + 2*t^-1")).reason == "parity");

  // Lens space data: every coset a single generator.
  const FinAbGroup h(1, {3});
  DetectionInput lens{h, h.make({1, 0}), 3, {}};
  for (Int k = 0; k < 3; ++k) lens.cosets.push_back({h.make({0, k}), 1, GroupRingElem::monomial(h, h.make({0, k}))});
  CHECK(classify(lens).kind == Verdict::Kind::Unknot);
  lens.cosets[1].chi = GroupRingElem::monomial(h, h.make({1, 1}));
  CHECK(classify(lens).reason == "divisibility");
}

TEST_CASE("classifier rejects malformed input") {
  auto bad = single_coset(1, "1");
  bad.h1_order = 2;
  CHECK_THROWS_AS(classify(bad), InvalidInput);
  bad = single_coset(-1, "1");
  CHECK_THROWS_AS(classify(bad), InvalidInput);
  const FinAbGroup h(1, {2});
  DetectionInput mixed{h, h.make({1, 0}), 2,
                       {{h.identity(), 1, P("1 + r", h)}, {h.make({0, 1}), 1, P("r", h)}}};
  CHECK_THROWS_AS(classify(mixed), InvalidInput);
}

TEST_CASE("classifier on diagram data") {
  auto unknot = OneOneDiagram::parse("p: 1\narc: -0 +0 w=0\nz: gap 0 -\nw: gap 0 +\n");
  auto e = euler_char(unknot);
  auto k = knot_complement_homology(unknot);
  CHECK(classify(detection_input(e.canonical->value, e.hfk_table, k.meridian)).kind == Verdict::Kind::Unknot);

  std::map<std::string, int> verdicts;
  for (const auto& kd : null_homologous_examples(5)) {
    auto v = classify(detection_input(kd.chi, kd.table, kd.meridian));
    CHECK(v.kind != Verdict::Kind::Inconsistent);
    ++verdicts[v.to_string()];
    Int total = 0;
    for (const auto& [c, d] : kd.table) total += d;
    if (total == kd.h1_order) CHECK(v.kind == Verdict::Kind::Unknot);
  }
  CHECK(verdicts["GenusOneFibred"] > 0);
  CHECK(verdicts["Unknot"] > 0);
}
