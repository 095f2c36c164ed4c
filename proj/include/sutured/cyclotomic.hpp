#pragma once

// Z[zeta_N] as Z[x]/(Phi_N) in the power basis 1, x, ..., x^(phi(N)-1).

#include <optional>

#include "sutured/abelian.hpp"

namespace sutured {

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
IntVector cyclotomic_polynomial(Int n);

class CyclotomicField {
 public:
  using Elem = IntVector;

  explicit CyclotomicField(Int n);

  Int order() const noexcept { return n_; }
  std::size_t degree() const noexcept { return phi_.size() - 1; }
  const IntVector& minimal_polynomial() const noexcept { return phi_; }

  Elem zero() const { return Elem(degree(), 0); }
  Elem from_int(Int v) const;
  /// zeta^k for any integer k.
  const Elem& root_power(Int k) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scale(const Elem& a, Int k) const;
  bool is_zero(const Elem& a) const;
  /// The rational integer a represents, if any.
  std::optional<Int> as_integer(const Elem& a) const;

 private:
  Elem reduce(IntVector poly) const;

  Int n_;
  IntVector phi_;
  std::vector<Elem> powers_;  // zeta^0 .. zeta^(n-1)
};

}  // namespace sutured
