#include "doctest.h"
#include "sutured/window.hpp"

using namespace sutured;

namespace {

WindowParams params(Int q, Int chi, Int n, int tp = 0, int tm = 0, std::map<Int, int> tau = {}) {
  WindowParams w;
  w.q = q;
  w.chi_bar_plus = chi;
  w.n = n;
  w.tau_plus = tp;
  w.tau_minus = tm;
  w.tau = std::move(tau);
  return w;
}

// tau chosen so every chi(S_k) = chi - k q + tau(k) is even.
WindowParams even_params(Int q, Int chi, Int n) {
  std::map<Int, int> tau;
  for (Int k = 0; k <= n + 2; ++k) tau[k] = (chi + k * q) % 2 ? -1 : 0;
  return params(q, chi, n, 0, (chi - q) % 2 ? -1 : 0, tau);
}

bool parity_ok(const WindowParams& w, std::initializer_list<SurfaceIndex> js) {
  for (const auto& j : js)
    if (chi_bar(w, j) % 2 != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("bounds examples") {
  CHECK_THROWS_AS(bounds(params(5, -2, 1), SurfaceIndex::natural(1)), ParityError);
  CHECK(chi_bar(params(5, -2, 1, 0, 0, {{1, -1}}), SurfaceIndex::natural(1)) == -8);
  CHECK(bounds(params(5, -2, 1, 0, 0, {{1, -1}}), SurfaceIndex::natural(1)) == Bounds{4, -3});
  CHECK(bounds(params(5, -2, 0), SurfaceIndex::plus()) == Bounds{1, -1});
  CHECK(bounds(params(1, 0, 0), SurfaceIndex::plus()) == Bounds{0, 0});
  // chi(S-) = chi(S+) - q + tau(-)
  CHECK(chi_bar(params(5, -2, 0, 0, -1), SurfaceIndex::minus()) == -8);
  CHECK_THROWS_AS(bounds(params(0, 0, 0), SurfaceIndex::plus()), InvalidInput);
  CHECK_THROWS_AS(bounds(params(1, 2, 0), SurfaceIndex::plus()), InvalidInput);
  CHECK_THROWS_AS(bounds(params(1, 0, 0, 1), SurfaceIndex::plus()), InvalidInput);
}

TEST_CASE("window constants") {
  // q = 5, chi(S+) = -2: tau(-) = -1 and tau(n) = -1 for odd n keep parity even.
  auto w = params(5, -2, 4, 0, -1, {{5, -1}});
  auto r = window_constants(w);
  CHECK(r.at_n == Bounds{11, -11});
  CHECK(r.P == r.at_n.i_min + 25);
  CHECK(r.rho == r.at_n.i_max - 20);
  CHECK(r.Q == r.P - 5);
  CHECK(r.valid == (r.Q - r.rho > 5));
  CHECK(r.valid);

  auto small = window_constants(params(5, -2, 0, 0, -1, {{1, -1}}));
  CHECK_FALSE(small.valid);

  for (Int n = 3; n < 10; ++n) {
    auto c = window_constants(even_params(1, 0, n));
    CHECK(c.Q - c.rho > 1);
  }
}

TEST_CASE("validity is monotone in n") {
  for (Int q = 1; q <= 6; ++q)
    for (Int chi = 0; chi >= -6; chi -= 2) {
      bool seen = false;
      for (Int n = 0; n <= 12; ++n) {
        bool v = window_constants(even_params(q, chi, n)).valid;
        if (seen) CHECK(v);
        seen = seen || v;
      }
      CHECK(seen);
    }
}

TEST_CASE("identity suite on the exhaustive grid") {
  int suites = 0;
  for (Int q = 1; q <= 8; ++q)
    for (Int chi = 0; chi >= -8; --chi)
      for (Int n = 0; n <= 12; ++n)
        for (int pattern = 0; pattern < 32; ++pattern) {
          auto bit = [&](int b) { return (pattern >> b) & 1 ? -1 : 0; };
          auto w = params(q, chi, n, bit(0), bit(1), {{n, bit(2)}, {n + 1, bit(3)}, {n + 2, bit(4)}});
          if (!parity_ok(w, {SurfaceIndex::plus(), SurfaceIndex::minus(), SurfaceIndex::natural(n),
                             SurfaceIndex::natural(n + 1), SurfaceIndex::natural(n + 2)}))
            continue;
          for (const auto& id : identity_suite(w)) {
            INFO(id.name << " " << id.detail);
            CHECK(id.holds);
          }
          ++suites;
        }
  CHECK(suites > 1000);
}

TEST_CASE("identity suite degenerate case") {
  auto ids = identity_suite(even_params(1, 0, 3));
  REQUIRE(ids.size() >= 5);
  for (const auto& id : ids) CHECK(id.holds);
  auto r = window_constants(even_params(1, 0, 3));
  // Q - rho = chi(S+) + n q
  CHECK(r.Q - r.rho == 3);
}

TEST_CASE("block sums") {
  auto b = block_sums(params(5, -2, 2, 0, -1, {{3, -1}}), 2);
  CHECK(b.first == std::array<Int, 5>{5, 3, 2, 5, 3});
  CHECK(b.second == std::array<Int, 5>{3, 5, 2, 3, 5});
  CHECK(b.total_first == 18);
  CHECK(b.total_second == 18);
  CHECK(b.expected == 18);
  CHECK(b.window_length == 18);
  CHECK_THROWS_AS(block_sums(params(5, -2, 0), 0), NegativeBlock);

  for (Int q = 1; q <= 8; ++q)
    for (Int chi = 0; chi >= -8; --chi)
      for (Int n = 0; n <= 12; ++n)
        for (int t = 0; t < 2; ++t) {
          auto w = params(q, chi, n, 0, 0, {{n + 1, -t}});
          if (chi + (n - 1) * q - 1 < 0) {
            CHECK_THROWS_AS(block_sums(w, n), NegativeBlock);
            continue;
          }
          if (!parity_ok(w, {SurfaceIndex::natural(n + 1)})) continue;
          auto s = block_sums(w, n);
          CHECK(s.total_first == s.total_second);
          CHECK(s.total_first == s.expected);
          CHECK(s.expected == s.window_length);
        }
}
