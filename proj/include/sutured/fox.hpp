#pragma once

// Free differential calculus, Alexander matrices over Z[H] and the torsion
// of knot-complement presentations.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sutured/group_ring.hpp"

namespace sutured {

struct Letter {
  std::size_t gen = 0;
  int exp = 1;  // +1 or -1
  auto operator<=>(const Letter&) const = default;
};

/// A freely reduced word in the free group.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);  // reduces

  static FreeWord generator(std::size_t g, int exp = 1) { return FreeWord({{g, exp}}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  FreeWord operator*(const FreeWord& o) const;
  FreeWord inverse() const;
  /// w -> c w c^-1
  FreeWord conjugate_by(const FreeWord& c) const { return c * *this * c.inverse(); }
  /// Replaces every occurrence of generator g by the word `image`.
  FreeWord substitute(std::size_t g, const FreeWord& image) const;

  auto operator<=>(const FreeWord&) const = default;

  /// Space separated letters, capitals for inverses: "x y X".
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::vector<Letter> letters_;
};

/// Finite Z-combination of free words.
using FreeRingElem = std::map<FreeWord, Int>;

/// The free Fox derivative d w / d x_j.
FreeRingElem fox_derivative(const FreeWord& w, std::size_t j);

/// a * w for a free-ring element a and word w.
FreeRingElem right_multiply(const FreeRingElem& a, const FreeWord& w);
void add_into(FreeRingElem& into, const FreeRingElem& a, Int k = 1);

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<FreeWord> relators;
  FreeWord meridian;

  std::size_t num_generators() const noexcept { return generators.size(); }
  int deficiency() const noexcept { return static_cast<int>(generators.size()) - static_cast<int>(relators.size()); }

  static GroupPresentation parse(std::string_view text);
  std::string to_string() const;
  /// Parses a word in this presentation's generator names.
  FreeWord parse_word(std::string_view text) const;
};

struct Abelianization {
  FinAbGroup group;
  std::vector<GroupElem> images;  // one class per generator
  IntMatrix lift;                 // row i: a word exponent vector hitting canonical generator i

  GroupElem operator()(const FreeWord& w) const;
  GroupRingElem operator()(const FreeRingElem& a) const;
};

Abelianization abelianize(const GroupPresentation& p);

/// d w / d x_j pushed to Z[H] directly from prefix classes.
GroupRingElem abelian_fox_derivative(const FreeWord& w, std::size_t j, const Abelianization& ab);

struct AlexanderMatrix {
  FinAbGroup group;
  std::vector<std::vector<GroupRingElem>> entries;  // relators x generators
  std::vector<std::string> column_generators;
};

AlexanderMatrix alexander_matrix(const GroupPresentation& p, const Abelianization& ab);
inline AlexanderMatrix alexander_matrix(const GroupPresentation& p) { return alexander_matrix(p, abelianize(p)); }

/// Determinant of a square matrix over Z[H] by cofactor expansion.
GroupRingElem determinant(const std::vector<std::vector<GroupRingElem>>& m, const FinAbGroup& h);

/// tau = numerator / (denominator - 1).
struct TorsionFraction {
  GroupRingElem numerator;
  GroupElem denominator;
  std::size_t column = 0;
};

/// Equality of fractions up to multiplication by +-H.
bool pm_equal(const TorsionFraction& a, const TorsionFraction& b);

/// Torsion from column j (or the first valid column). Throws Indeterminate
/// unless the presentation has deficiency 1, b1 = 1 and a valid column.
TorsionFraction turaev_torsion(const GroupPresentation& p, std::optional<std::size_t> column = std::nullopt);

enum class DivisionRoute { None, Exact, Characters };

struct SuturedTorsion {
  FinAbGroup group;
  GroupElem meridian;
  GroupRingElem value;  // (m - 1) * tau, defined up to +-H
  std::size_t column = 0;
  DivisionRoute route = DivisionRoute::None;
};

SuturedTorsion sutured_torsion(const GroupPresentation& p);

/// q with (h - 1) q = x, computed one character of Tors(H) at a time over
/// Z[zeta_N][t^+-1] and recombined by the inverse transform. Requires rank 1.
/// nullopt when some component does not divide or recombination is not integral.
std::optional<GroupRingElem> divide_by_characters(const GroupRingElem& x, const GroupElem& h);

}  // namespace sutured
