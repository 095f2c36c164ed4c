#include "sutured/abelian.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace sutured {

using checked::add;
using checked::mul;
using checked::sub;

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      Int a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) = add(out(i, j), mul(a, rhs(k, j)));
    }
  return out;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  IntVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] = add(out[i], mul((*this)(i, j), v[j]));
  return out;
}

void IntMatrix::append_row(const IntVector& row) {
  if (rows_ == 0 && data_.empty()) cols_ = row.size();
  if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Bareiss: every intermediate division is exact over Z.
  IntMatrix a = m;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = sub(mul(a(i, j), a(k, k)), mul(a(i, k), a(k, j))) / prev;
    prev = a(k, k);
  }
  return mul(sign, a(n - 1, n - 1));
}

// ---------------------------------------------------------------- Smith form

namespace {

struct SmithWork {
  IntMatrix a, u, v, vinv;

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    for (std::size_t c = 0; c < vinv.cols(); ++c) std::swap(vinv(i, c), vinv(j, c));
  }
  // row_dst += k * row_src
  void add_row(std::size_t dst, std::size_t src, Int k) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(dst, c) = add(a(dst, c), mul(k, a(src, c)));
    for (std::size_t c = 0; c < u.cols(); ++c) u(dst, c) = add(u(dst, c), mul(k, u(src, c)));
  }
  // col_dst += k * col_src
  void add_col(std::size_t dst, std::size_t src, Int k) {
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, dst) = add(a(r, dst), mul(k, a(r, src)));
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, dst) = add(v(r, dst), mul(k, v(r, src)));
    for (std::size_t c = 0; c < vinv.cols(); ++c) vinv(src, c) = sub(vinv(src, c), mul(k, vinv(dst, c)));
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& mat) {
  const std::size_t m = mat.rows(), n = mat.cols();
  SmithWork w{mat, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(n)};
  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest non-zero entry of the trailing block becomes the pivot.
      bool found = false;
      std::size_t pr = t, pc = t;
      Int best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          Int x = w.a(i, j);
          if (x != 0 && (!found || std::abs(x) < best)) {
            found = true, best = std::abs(x), pr = i, pc = j;
          }
        }
      if (!found) break;
      if (pr != t) w.swap_rows(pr, t);
      if (pc != t) w.swap_cols(pc, t);

      bool clean = true;
      const Int piv = w.a(t, t);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.a(i, t) == 0) continue;
        w.add_row(i, t, -(w.a(i, t) / piv));
        if (w.a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.a(t, j) == 0) continue;
        w.add_col(j, t, -(w.a(t, j) / piv));
        if (w.a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce d_t | every remaining entry.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.a(i, j) % piv != 0) {
            w.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.a(t, t) < 0) w.negate_row(t);
  }
  SmithForm out;
  out.diag.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) out.diag[t] = w.a(t, t);
  out.left = std::move(w.u);
  out.right = std::move(w.v);
  out.right_inverse = std::move(w.vinv);
  return out;
}

// ---------------------------------------------------------------- GroupElem

IntVector GroupElem::coords() const {
  IntVector c = free_part;
  c.insert(c.end(), torsion_part.begin(), torsion_part.end());
  return c;
}

bool GroupElem::is_identity() const {
  return std::all_of(free_part.begin(), free_part.end(), [](Int x) { return x == 0; }) &&
         std::all_of(torsion_part.begin(), torsion_part.end(), [](Int x) { return x == 0; });
}

// ---------------------------------------------------------------- FinAbGroup

FinAbGroup::FinAbGroup(std::size_t rank, IntVector torsion_divisors)
    : rank_(rank), divisors_(std::move(torsion_divisors)) {
  for (std::size_t i = 0; i < divisors_.size(); ++i) {
    if (divisors_[i] < 2) throw std::invalid_argument("torsion divisor must be >= 2");
    if (i + 1 < divisors_.size() && divisors_[i + 1] % divisors_[i] != 0)
      throw std::invalid_argument("torsion divisors must form a divisibility chain");
  }
}

Int FinAbGroup::torsion_order() const {
  Int o = 1;
  for (Int d : divisors_) o = mul(o, d);
  return o;
}

GroupElem FinAbGroup::identity() const { return {IntVector(rank_, 0), IntVector(divisors_.size(), 0)}; }

GroupElem FinAbGroup::make(const IntVector& coords) const {
  if (coords.size() != dim()) throw GroupMismatch("element has wrong number of coordinates");
  return make(IntVector(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(rank_)),
              IntVector(coords.begin() + static_cast<std::ptrdiff_t>(rank_), coords.end()));
}

GroupElem FinAbGroup::make(IntVector free_part, IntVector torsion_part) const {
  if (free_part.size() != rank_ || torsion_part.size() != divisors_.size())
    throw GroupMismatch("element has wrong number of coordinates");
  for (std::size_t i = 0; i < torsion_part.size(); ++i) torsion_part[i] = checked::mod(torsion_part[i], divisors_[i]);
  return {std::move(free_part), std::move(torsion_part)};
}

GroupElem FinAbGroup::generator(std::size_t index) const {
  IntVector c(dim(), 0);
  c.at(index) = 1;
  return make(c);
}

GroupElem FinAbGroup::add(const GroupElem& a, const GroupElem& b) const {
  GroupElem r = a;
  for (std::size_t i = 0; i < rank_; ++i) r.free_part[i] = checked::add(a.free_part[i], b.free_part[i]);
  for (std::size_t i = 0; i < divisors_.size(); ++i)
    r.torsion_part[i] = (a.torsion_part[i] + b.torsion_part[i]) % divisors_[i];
  return r;
}

GroupElem FinAbGroup::neg(const GroupElem& a) const {
  GroupElem r = a;
  for (auto& x : r.free_part) x = -x;
  for (std::size_t i = 0; i < divisors_.size(); ++i)
    r.torsion_part[i] = (divisors_[i] - a.torsion_part[i]) % divisors_[i];
  return r;
}

GroupElem FinAbGroup::scale(const GroupElem& a, Int k) const {
  GroupElem r = a;
  for (auto& x : r.free_part) x = mul(x, k);
  for (std::size_t i = 0; i < divisors_.size(); ++i)
    r.torsion_part[i] = checked::mod(mul(checked::mod(k, divisors_[i]), a.torsion_part[i]), divisors_[i]);
  return r;
}

bool FinAbGroup::contains(const GroupElem& a) const {
  if (a.free_part.size() != rank_ || a.torsion_part.size() != divisors_.size()) return false;
  for (std::size_t i = 0; i < divisors_.size(); ++i)
    if (a.torsion_part[i] < 0 || a.torsion_part[i] >= divisors_[i]) return false;
  return true;
}

bool FinAbGroup::has_infinite_order(const GroupElem& a) const {
  return std::any_of(a.free_part.begin(), a.free_part.end(), [](Int x) { return x != 0; });
}

Int FinAbGroup::order(const GroupElem& a) const {
  if (has_infinite_order(a)) return 0;
  Int o = 1;
  for (std::size_t i = 0; i < divisors_.size(); ++i) {
    Int d = divisors_[i] / std::gcd(divisors_[i], a.torsion_part[i]);
    o = std::lcm(o, d);
  }
  return o;
}

std::vector<GroupElem> FinAbGroup::elements() const {
  if (!is_finite()) throw std::logic_error("elements() of an infinite group");
  std::vector<GroupElem> out;
  IntVector t(divisors_.size(), 0);
  for (;;) {
    out.push_back({{}, t});
    std::size_t i = divisors_.size();
    while (i > 0) {
      --i;
      if (++t[i] < divisors_[i]) break;
      t[i] = 0;
      if (i == 0) return out;
    }
    if (divisors_.empty()) return out;
  }
}

std::string FinAbGroup::to_string() const {
  std::string s = "Z^" + std::to_string(rank_);
  for (Int d : divisors_) s += " x Z/" + std::to_string(d);
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Int parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw ParseError("expected an integer", 1, 1);
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') neg = s[0] == '-', i = 1;
  if (i == s.size()) throw ParseError("expected an integer", 1, 1);
  Int v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", 1, static_cast<int>(i) + 1);
    v = checked::add(checked::mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

FinAbGroup FinAbGroup::parse(std::string_view text) {
  std::size_t rank = 0;
  IntVector divisors;
  std::string_view rest = trim(text);
  if (rest.empty()) throw ParseError("empty group literal", 1, 1);
  while (!rest.empty()) {
    std::size_t cut = rest.find(" x ");
    std::string_view factor = trim(rest.substr(0, cut));
    rest = cut == std::string_view::npos ? std::string_view{} : rest.substr(cut + 3);
    if (factor == "Z") {
      rank += 1;
    } else if (factor.starts_with("Z^")) {
      Int r = parse_int(factor.substr(2));
      if (r < 0) throw ParseError("negative rank", 1, 1);
      rank += static_cast<std::size_t>(r);
    } else if (factor.starts_with("Z/")) {
      divisors.push_back(parse_int(factor.substr(2)));
    } else {
      throw ParseError("unknown group factor '" + std::string(factor) + "'", 1, 1);
    }
  }
  try {
    return FinAbGroup(rank, divisors);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

std::string FinAbGroup::format(const GroupElem& e) const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.free_part.size(); ++i) os << (i ? "," : "") << e.free_part[i];
  os << '|';
  for (std::size_t i = 0; i < e.torsion_part.size(); ++i) os << (i ? "," : "") << e.torsion_part[i];
  os << ')';
  return os.str();
}

GroupElem FinAbGroup::parse_elem(std::string_view text) const {
  std::string_view s = trim(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw ParseError("element must be parenthesised", 1, 1);
  s = s.substr(1, s.size() - 2);
  std::size_t bar = s.find('|');
  auto split = [](std::string_view part) {
    IntVector v;
    part = trim(part);
    if (part.empty()) return v;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = part.find(',', start);
      v.push_back(parse_int(part.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return v;
  };
  IntVector fp = split(s.substr(0, bar));
  IntVector tp = bar == std::string_view::npos ? IntVector{} : split(s.substr(bar + 1));
  if (fp.size() != rank_ || tp.size() != divisors_.size())
    throw ParseError("element does not match group " + to_string(), 1, 1);
  return make(std::move(fp), std::move(tp));
}

// ---------------------------------------------------------------- GroupHom

GroupHom::GroupHom(FinAbGroup source, FinAbGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    throw InvalidHom("hom matrix has shape " + std::to_string(matrix_.rows()) + "x" +
                     std::to_string(matrix_.cols()) + ", expected " + std::to_string(target_.dim()) + "x" +
                     std::to_string(source_.dim()));
  // Relations of the source must land on relations of the target.
  for (std::size_t i = 0; i < source_.num_torsion(); ++i) {
    const std::size_t col = source_.rank() + i;
    const Int d = source_.torsion_divisors()[i];
    for (std::size_t r = 0; r < target_.dim(); ++r) {
      Int img = checked::mul(matrix_(r, col), d);
      bool ok = r < target_.rank() ? img == 0
                                   : checked::mod(img, target_.torsion_divisors()[r - target_.rank()]) == 0;
      if (!ok) throw InvalidHom("hom does not respect the torsion relation of generator " + std::to_string(col));
    }
  }
}

GroupHom GroupHom::identity(const FinAbGroup& g) { return GroupHom(g, g, IntMatrix::identity(g.dim())); }

GroupElem GroupHom::operator()(const GroupElem& e) const {
  if (!source_.contains(e)) throw GroupMismatch("element is not in the hom's source group");
  return target_.make(matrix_.apply(e.coords()));
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
  if (!(inner.target_ == source_)) throw GroupMismatch("composition of non-composable homs");
  return GroupHom(inner.source_, target_, matrix_ * inner.matrix_);
}

bool GroupHom::is_zero() const {
  for (std::size_t c = 0; c < source_.dim(); ++c)
    if (!(*this)(source_.generator(c)).is_identity()) return false;
  return true;
}

// ---------------------------------------------------------------- quotients

Quotient group_from_relations(std::size_t n, const IntMatrix& relations) {
  if (relations.rows() > 0 && relations.cols() != n)
    throw std::invalid_argument("relation matrix must have one column per generator");
  IntMatrix rel = relations.rows() == 0 ? IntMatrix(0, n) : relations;
  SmithForm snf = smith_normal_form(rel);
  // x |-> x * right sends rowspan(relations) onto rowspan(diag).
  IntVector d(n, 0);
  for (std::size_t k = 0; k < snf.diag.size(); ++k) d[k] = snf.diag[k];
  std::vector<std::size_t> free_cols, tors_cols;
  IntVector divisors;
  for (std::size_t k = 0; k < n; ++k) {
    if (d[k] == 0) free_cols.push_back(k);
    else if (d[k] > 1) tors_cols.push_back(k), divisors.push_back(d[k]);
  }
  FinAbGroup group(free_cols.size(), divisors);
  IntMatrix hom(group.dim(), n);
  IntMatrix lift(group.dim(), n);
  std::size_t row = 0;
  for (auto cols : {&free_cols, &tors_cols})
    for (std::size_t k : *cols) {
      for (std::size_t i = 0; i < n; ++i) {
        hom(row, i) = snf.right(i, k);
        lift(row, i) = snf.right_inverse(k, i);
      }
      ++row;
    }
  // Keep the hom entries on torsion rows reduced so outputs stay small.
  for (std::size_t r = group.rank(); r < group.dim(); ++r)
    for (std::size_t i = 0; i < n; ++i) hom(r, i) = checked::mod(hom(r, i), divisors[r - group.rank()]);
  return {group, GroupHom(FinAbGroup::free(n), group, hom), lift};
}

Quotient quotient_by_element(const FinAbGroup& h, const GroupElem& g) {
  if (!h.contains(g)) throw GroupMismatch("element is not in the group");
  IntMatrix rel(0, h.dim());
  for (std::size_t i = 0; i < h.num_torsion(); ++i) {
    IntVector row(h.dim(), 0);
    row[h.rank() + i] = h.torsion_divisors()[i];
    rel.append_row(row);
  }
  rel.append_row(g.coords());
  Quotient q = group_from_relations(h.dim(), rel);
  return {q.group, GroupHom(h, q.group, q.hom.matrix()), q.lift};
}

GroupHom free_projection(const FinAbGroup& h) {
  IntMatrix m(h.rank(), h.dim());
  for (std::size_t i = 0; i < h.rank(); ++i) m(i, i) = 1;
  return GroupHom(h, FinAbGroup::free(h.rank()), m);
}

GroupHom torsion_projection(const FinAbGroup& h) {
  FinAbGroup t(0, h.torsion_divisors());
  IntMatrix m(t.dim(), h.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) m(i, h.rank() + i) = 1;
  return GroupHom(h, t, m);
}

GroupHom torsion_inclusion(const FinAbGroup& h) {
  FinAbGroup t(0, h.torsion_divisors());
  IntMatrix m(h.dim(), t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i) m(h.rank() + i, i) = 1;
  return GroupHom(t, h, m);
}

}  // namespace sutured
