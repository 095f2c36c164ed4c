#pragma once

// Grading windows of stabilized surfaces: the bounds i_max, i_min for each
// surface S_j, the constants P_n, rho_n, Q_n, the identities relating them and
// the two five-block splittings of the window.

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sutured/error.hpp"

namespace sutured {

using Int = std::int64_t;

/// Surface index j: a natural number, or one of the two ends + and -.
struct SurfaceIndex {
  enum class Kind { Natural, Plus, Minus };
  Kind kind = Kind::Natural;
  Int n = 0;

  static SurfaceIndex natural(Int n) { return {Kind::Natural, n}; }
  static SurfaceIndex plus() { return {Kind::Plus, 0}; }
  static SurfaceIndex minus() { return {Kind::Minus, 0}; }
  std::string to_string() const;
};

struct WindowParams {
  Int q = 1;              // > 0
  Int chi_bar_plus = 0;   // <= 0
  int tau_plus = 0;       // each tau value is 0 or -1
  int tau_minus = 0;
  std::map<Int, int> tau; // tau(n); missing entries are 0
  Int n = 0;

  int tau_of(const SurfaceIndex& j) const;
  /// Throws InvalidInput when q, chi_bar_plus or a tau value is out of range.
  void check() const;
};

Int chi_bar(const WindowParams& w, const SurfaceIndex& j);

struct Bounds {
  Int i_max = 0;
  Int i_min = 0;
  bool operator==(const Bounds&) const = default;
};

/// Throws ParityError when chi_bar(S_j) is odd.
Bounds bounds(const WindowParams& w, const SurfaceIndex& j);

struct WindowReport {
  Bounds plus, minus, at_n, at_next;  // j = +, -, n, n + 1
  Int P = 0, rho = 0, Q = 0;
  bool valid = false;                  // Q - rho > q
};

WindowReport window_constants(const WindowParams& w);

struct IdentityResult {
  std::string name;
  bool holds = false;
  std::string detail;  // both sides
};

std::vector<IdentityResult> identity_suite(const WindowParams& w);

struct BlockSums {
  std::array<Int, 5> first{};
  std::array<Int, 5> second{};
  Int total_first = 0;
  Int total_second = 0;
  Int expected = 0;        // (n + 1) q - chi_bar_plus + 1
  Int window_length = 0;   // i_max^{n+1} - i_min^{n+1} + 1
};

/// Throws NegativeBlock when the middle block is negative.
BlockSums block_sums(const WindowParams& w, Int n);

}  // namespace sutured
