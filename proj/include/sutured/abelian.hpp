#pragma once

// Finitely generated abelian groups in invariant-factor form, their elements
// and homomorphisms, plus the Smith normal form that produces them.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sutured/error.hpp"

namespace sutured {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntVector apply(const IntVector& v) const;
  bool operator==(const IntMatrix&) const = default;

  void append_row(const IntVector& row);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Exact determinant by fraction-free elimination; test helper for unimodularity.
Int determinant(const IntMatrix& m);

struct SmithForm {
  IntVector diag;   // min(rows, cols) entries, non-negative, d_i | d_{i+1}
  IntMatrix left;   // unimodular, rows x rows
  IntMatrix right;  // unimodular, cols x cols
  IntMatrix right_inverse;
};

/// left * mat * right is diagonal with entries `diag`.
SmithForm smith_normal_form(const IntMatrix& mat);

class FinAbGroup;

/// Element of Z^r + (+) Z/d_i. Torsion coordinates are kept reduced into
/// [0, d_i); only FinAbGroup constructs reduced elements.
struct GroupElem {
  IntVector free_part;
  IntVector torsion_part;

  auto operator<=>(const GroupElem&) const = default;
  bool operator==(const GroupElem&) const = default;

  /// free ++ torsion coordinates.
  IntVector coords() const;
  bool is_identity() const;
};

class FinAbGroup {
 public:
  FinAbGroup() = default;
  FinAbGroup(std::size_t rank, IntVector torsion_divisors);

  static FinAbGroup free(std::size_t rank) { return FinAbGroup(rank, {}); }

  std::size_t rank() const noexcept { return rank_; }
  const IntVector& torsion_divisors() const noexcept { return divisors_; }
  std::size_t num_torsion() const noexcept { return divisors_.size(); }
  std::size_t dim() const noexcept { return rank_ + divisors_.size(); }
  bool is_finite() const noexcept { return rank_ == 0; }
  /// Order of the torsion subgroup.
  Int torsion_order() const;

  bool operator==(const FinAbGroup&) const = default;

  GroupElem identity() const;
  GroupElem make(const IntVector& coords) const;  // reduces torsion
  GroupElem make(IntVector free_part, IntVector torsion_part) const;
  GroupElem generator(std::size_t index) const;   // index into free ++ torsion
  GroupElem add(const GroupElem& a, const GroupElem& b) const;
  GroupElem neg(const GroupElem& a) const;
  GroupElem sub(const GroupElem& a, const GroupElem& b) const { return add(a, neg(b)); }
  GroupElem scale(const GroupElem& a, Int k) const;
  bool contains(const GroupElem& a) const;
  bool has_infinite_order(const GroupElem& a) const;
  /// Order of a, or 0 when a has infinite order.
  Int order(const GroupElem& a) const;

  /// Every element of a finite group in lexicographic order.
  std::vector<GroupElem> elements() const;

  /// `Z^r x Z/d1 x ... x Z/dk`
  std::string to_string() const;
  static FinAbGroup parse(std::string_view text);
  /// `(a1,...,ar | b1,...,bk)`
  std::string format(const GroupElem& e) const;
  GroupElem parse_elem(std::string_view text) const;

 private:
  std::size_t rank_ = 0;
  IntVector divisors_;
};

/// Homomorphism acting on exponent vectors (free ++ torsion coordinates).
class GroupHom {
 public:
  GroupHom(FinAbGroup source, FinAbGroup target, IntMatrix matrix);

  static GroupHom identity(const FinAbGroup& g);

  const FinAbGroup& source() const noexcept { return source_; }
  const FinAbGroup& target() const noexcept { return target_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  GroupElem operator()(const GroupElem& e) const;
  /// this ∘ inner
  GroupHom compose(const GroupHom& inner) const;
  bool is_zero() const;

 private:
  FinAbGroup source_;
  FinAbGroup target_;
  IntMatrix matrix_;
};

struct Quotient {
  FinAbGroup group;
  GroupHom hom;       // Z^n -> group, or H -> group
  IntMatrix lift;     // row i: a preimage of canonical generator i
};

/// Z^n / rowspan(relations) in canonical form.
Quotient group_from_relations(std::size_t n_generators, const IntMatrix& relations);
Quotient quotient_by_element(const FinAbGroup& h, const GroupElem& g);
/// H -> Z^r killing torsion.
GroupHom free_projection(const FinAbGroup& h);
/// H -> Tors(H) in the canonical splitting.
GroupHom torsion_projection(const FinAbGroup& h);
/// Tors(H) -> H.
GroupHom torsion_inclusion(const FinAbGroup& h);

}  // namespace sutured
