#pragma once

// Group rings Z[H] and (1/2 Z)[H] over finitely generated abelian groups.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sutured/abelian.hpp"

namespace sutured {

/// A rational with denominator 1 or 2, stored as twice its value.
struct Half {
  Int twice = 0;

  static Half of(Int v) { return {checked::mul(v, 2)}; }
  bool is_integer() const noexcept { return twice % 2 == 0; }
  /// Exact integer value; throws NotRepresentable for a proper half.
  Int as_integer() const;
  std::string to_string() const;  // "3", "-1/2"
  auto operator<=>(const Half&) const = default;
};

/// Generator names for printing and parsing ring literals. `halved` marks
/// the coordinate whose exponents are stored doubled (printed as k/2).
struct RingNames {
  std::vector<std::string> names;
  std::optional<std::size_t> halved;

  static RingNames defaults(const FinAbGroup& h);
};

class GroupRingElem {
 public:
  using Terms = std::map<GroupElem, Int>;  // key -> twice the coefficient

  GroupRingElem() = default;
  explicit GroupRingElem(FinAbGroup group, bool allow_halves = false)
      : group_(std::move(group)), halves_(allow_halves) {}

  static GroupRingElem zero(const FinAbGroup& h) { return GroupRingElem(h); }
  static GroupRingElem one(const FinAbGroup& h) { return monomial(h, h.identity()); }
  static GroupRingElem monomial(const FinAbGroup& h, const GroupElem& g, Int c = 1);
  /// g - 1
  static GroupRingElem unit_minus_one(const FinAbGroup& h, const GroupElem& g);

  const FinAbGroup& group() const noexcept { return group_; }
  bool allows_halves() const noexcept { return halves_; }
  const Terms& twice_terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  Half coeff(const GroupElem& g) const;
  std::vector<GroupElem> support() const;

  void add_term(const GroupElem& g, Int c) { add_twice(g, checked::mul(c, 2)); }
  void add_twice(const GroupElem& g, Int twice);
  GroupRingElem with_halves() const;

  GroupRingElem operator+(const GroupRingElem& o) const;
  GroupRingElem operator-(const GroupRingElem& o) const;
  GroupRingElem operator-() const;
  GroupRingElem operator*(const GroupRingElem& o) const;
  GroupRingElem operator*(Int k) const;
  GroupRingElem& operator+=(const GroupRingElem& o) { return *this = *this + o; }
  GroupRingElem& operator-=(const GroupRingElem& o) { return *this = *this - o; }
  GroupRingElem& operator*=(const GroupRingElem& o) { return *this = *this * o; }
  bool operator==(const GroupRingElem& o) const { return group_ == o.group_ && terms_ == o.terms_; }

  /// g * x
  GroupRingElem translate(const GroupElem& g) const;
  /// The involution induced by g -> g^-1.
  GroupRingElem conjugate() const;
  GroupRingElem pow(unsigned k) const;

  Half norm() const;
  Half augmentation() const;

  std::string to_string(const RingNames& names) const;
  std::string to_string() const { return to_string(RingNames::defaults(group_)); }
  static GroupRingElem parse(std::string_view text, const FinAbGroup& h, const RingNames& names);
  static GroupRingElem parse(std::string_view text, const FinAbGroup& h) {
    return parse(text, h, RingNames::defaults(h));
  }

 private:
  void require_same_group(const GroupRingElem& o) const;

  FinAbGroup group_;
  bool halves_ = false;
  Terms terms_;
};

/// Images of every term key under f.
GroupRingElem pushforward(const GroupRingElem& x, const GroupHom& f);

/// Terms of x grouped by their image under f.
std::map<GroupElem, GroupRingElem> coset_split(const GroupRingElem& x, const GroupHom& f);

/// q with (h - 1)^power * q = x, or nullopt when no such q exists.
/// Throws FiniteOrderElement when h is torsion.
std::optional<GroupRingElem> divide_exact(const GroupRingElem& x, const GroupElem& h, unsigned power = 1);

/// Class of an element modulo multiplication by units +-g.
class PmClass {
 public:
  PmClass() = default;
  explicit PmClass(GroupRingElem representative);

  const GroupRingElem& representative() const noexcept { return rep_; }
  /// Canonical member of the class: the minimum over all translates putting a
  /// support element at the identity, signed so the first coefficient is positive.
  const GroupRingElem& normal_form() const noexcept { return normal_; }
  bool operator==(const PmClass& o) const { return normal_ == o.normal_; }

 private:
  GroupRingElem rep_;
  GroupRingElem normal_;
};

bool pm_equal(const GroupRingElem& a, const GroupRingElem& b);

/// H[m^(1/2)]: H with a square root u of m adjoined.
struct HalfLattice {
  FinAbGroup group;
  GroupHom embed;  // H -> H'
  GroupElem root;  // 2 * root = embed(m)
  RingNames names;
};

HalfLattice half_lattice(const FinAbGroup& h, const GroupElem& m, const RingNames& names);

struct CanonicalForm {
  GroupRingElem value;  // sign * translation * image of x
  bool half_shifted = false;
  std::optional<HalfLattice> lattice;  // set when half_shifted
  GroupElem translation;               // in the group of `value`
  int sign = 1;

  RingNames names(const RingNames& base) const { return lattice ? lattice->names : base; }
};

/// The involution-invariant +-translate of x, shifting by m^(1/2) when no
/// integral translate is invariant. Throws NotSymmetrizable otherwise.
CanonicalForm canonical_rep(const GroupRingElem& x, const GroupElem& m,
                            const RingNames& names);
inline CanonicalForm canonical_rep(const GroupRingElem& x, const GroupElem& m) {
  return canonical_rep(x, m, RingNames::defaults(x.group()));
}

}  // namespace sutured
