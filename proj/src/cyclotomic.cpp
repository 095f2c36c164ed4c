#include "sutured/cyclotomic.hpp"

#include <algorithm>
#include <stdexcept>

namespace sutured {

namespace {

// Exact quotient of a by a monic divisor b, both lowest degree first.
IntVector poly_div_exact(IntVector a, const IntVector& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw std::logic_error("cyclotomic division underflow");
  IntVector q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    Int c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t k = 0; k <= db; ++k) a[i - db + k] = checked::sub(a[i - db + k], checked::mul(c, b[k]));
  }
  if (std::any_of(a.begin(), a.end(), [](Int v) { return v != 0; }))
    throw std::logic_error("cyclotomic division left a remainder");
  return q;
}

}  // namespace

IntVector cyclotomic_polynomial(Int n) {
  if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
  IntVector p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (Int d = 1; d < n; ++d)
    if (n % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
  return p;
}

CyclotomicField::CyclotomicField(Int n) : n_(n), phi_(cyclotomic_polynomial(n)) {
  powers_.reserve(static_cast<std::size_t>(n));
  for (Int k = 0; k < n; ++k) {
    IntVector mono(static_cast<std::size_t>(k) + 1, 0);
    mono[static_cast<std::size_t>(k)] = 1;
    powers_.push_back(reduce(std::move(mono)));
  }
}

CyclotomicField::Elem CyclotomicField::reduce(IntVector poly) const {
  const std::size_t d = degree();
  for (std::size_t i = poly.size(); i-- > d;) {
    Int c = poly[i];
    if (c == 0) continue;
    for (std::size_t k = 0; k <= d; ++k) poly[i - d + k] = checked::sub(poly[i - d + k], checked::mul(c, phi_[k]));
  }
  poly.resize(d, 0);
  return poly;
}

CyclotomicField::Elem CyclotomicField::from_int(Int v) const {
  Elem e = zero();
  if (!e.empty()) e[0] = v;
  return e;
}

const CyclotomicField::Elem& CyclotomicField::root_power(Int k) const {
  return powers_[static_cast<std::size_t>(checked::mod(k, n_))];
}

CyclotomicField::Elem CyclotomicField::add(const Elem& a, const Elem& b) const {
  Elem r(degree());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked::add(a[i], b[i]);
  return r;
}

CyclotomicField::Elem CyclotomicField::sub(const Elem& a, const Elem& b) const {
  Elem r(degree());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked::sub(a[i], b[i]);
  return r;
}

CyclotomicField::Elem CyclotomicField::neg(const Elem& a) const { return scale(a, -1); }

CyclotomicField::Elem CyclotomicField::scale(const Elem& a, Int k) const {
  Elem r(degree());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked::mul(a[i], k);
  return r;
}

CyclotomicField::Elem CyclotomicField::mul(const Elem& a, const Elem& b) const {
  const std::size_t d = degree();
  if (d == 0) return {};
  IntVector prod(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) prod[i + j] = checked::add(prod[i + j], checked::mul(a[i], b[j]));
  }
  return reduce(std::move(prod));
}

bool CyclotomicField::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](Int v) { return v == 0; });
}

std::optional<Int> CyclotomicField::as_integer(const Elem& a) const {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] != 0) return std::nullopt;
  return a.empty() ? 0 : a[0];
}

}  // namespace sutured
