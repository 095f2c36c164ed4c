#include "sutured/group_ring.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace sutured {

// ---------------------------------------------------------------- Half

Int Half::as_integer() const {
  if (!is_integer()) throw NotRepresentable("coefficient " + to_string() + " is not an integer");
  return twice / 2;
}

std::string Half::to_string() const {
  if (is_integer()) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

RingNames RingNames::defaults(const FinAbGroup& h) {
  RingNames n;
  for (std::size_t i = 0; i < h.rank(); ++i) n.names.push_back(h.rank() == 1 ? "t" : "t" + std::to_string(i + 1));
  for (std::size_t i = 0; i < h.num_torsion(); ++i)
    n.names.push_back(h.num_torsion() == 1 ? "r" : "r" + std::to_string(i + 1));
  return n;
}

// ---------------------------------------------------------------- GroupRingElem

GroupRingElem GroupRingElem::monomial(const FinAbGroup& h, const GroupElem& g, Int c) {
  GroupRingElem x(h);
  x.add_term(g, c);
  return x;
}

GroupRingElem GroupRingElem::unit_minus_one(const FinAbGroup& h, const GroupElem& g) {
  GroupRingElem x(h);
  x.add_term(g, 1);
  x.add_term(h.identity(), -1);
  return x;
}

Half GroupRingElem::coeff(const GroupElem& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Half{} : Half{it->second};
}

std::vector<GroupElem> GroupRingElem::support() const {
  std::vector<GroupElem> s;
  s.reserve(terms_.size());
  for (const auto& [g, c] : terms_) s.push_back(g);
  return s;
}

void GroupRingElem::add_twice(const GroupElem& g, Int twice) {
  if (twice == 0) return;
  if (!group_.contains(g)) throw GroupMismatch("term " + group_.format(g) + " is not in " + group_.to_string());
  if (!halves_ && twice % 2 != 0) throw NotRepresentable("half-integer coefficient in an integral group ring");
  auto [it, inserted] = terms_.try_emplace(g, twice);
  if (!inserted) {
    it->second = checked::add(it->second, twice);
    if (it->second == 0) terms_.erase(it);
  }
}

GroupRingElem GroupRingElem::with_halves() const {
  GroupRingElem out = *this;
  out.halves_ = true;
  return out;
}

void GroupRingElem::require_same_group(const GroupRingElem& o) const {
  if (!(group_ == o.group_))
    throw GroupMismatch("group ring elements over " + group_.to_string() + " and " + o.group_.to_string());
}

GroupRingElem GroupRingElem::operator+(const GroupRingElem& o) const {
  require_same_group(o);
  GroupRingElem out = *this;
  out.halves_ = halves_ || o.halves_;
  for (const auto& [g, c] : o.terms_) out.add_twice(g, c);
  return out;
}

GroupRingElem GroupRingElem::operator-() const {
  GroupRingElem out = *this;
  for (auto& [g, c] : out.terms_) c = checked::sub(0, c);
  return out;
}

GroupRingElem GroupRingElem::operator-(const GroupRingElem& o) const { return *this + (-o); }

GroupRingElem GroupRingElem::operator*(const GroupRingElem& o) const {
  require_same_group(o);
  // Products of doubled coefficients carry a factor 4; collect, then halve.
  std::map<GroupElem, Int> acc;
  for (const auto& [g, a] : terms_)
    for (const auto& [h, b] : o.terms_) {
      Int& slot = acc[group_.add(g, h)];
      slot = checked::add(slot, checked::mul(a, b));
    }
  GroupRingElem out(group_, halves_ || o.halves_);
  for (const auto& [g, c4] : acc) {
    if (c4 % 2 != 0) throw NotRepresentable("product has a coefficient with denominator 4");
    out.add_twice(g, c4 / 2);
  }
  return out;
}

GroupRingElem GroupRingElem::operator*(Int k) const {
  GroupRingElem out(group_, halves_);
  for (const auto& [g, c] : terms_) out.add_twice(g, checked::mul(c, k));
  return out;
}

GroupRingElem GroupRingElem::translate(const GroupElem& g) const {
  GroupRingElem out(group_, halves_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(group_.add(k, g), c);
  return out;
}

GroupRingElem GroupRingElem::conjugate() const {
  GroupRingElem out(group_, halves_);
  for (const auto& [k, c] : terms_) out.terms_.emplace(group_.neg(k), c);
  return out;
}

GroupRingElem GroupRingElem::pow(unsigned k) const {
  GroupRingElem out = one(group_);
  out.halves_ = halves_;
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

Half GroupRingElem::norm() const {
  Half n;
  for (const auto& [g, c] : terms_) n.twice = checked::add(n.twice, std::abs(c));
  return n;
}

Half GroupRingElem::augmentation() const {
  Half n;
  for (const auto& [g, c] : terms_) n.twice = checked::add(n.twice, c);
  return n;
}

// ---------------------------------------------------------------- printing

namespace {

std::string format_monomial(const FinAbGroup& h, const GroupElem& g, const RingNames& names) {
  std::string out;
  IntVector c = g.coords();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names.names.at(i);
    bool halved = names.halved && *names.halved == i;
    if (halved && c[i] % 2 != 0) {
      out += '^' + std::to_string(c[i]) + "/2";
    } else {
      Int e = halved ? c[i] / 2 : c[i];
      if (e != 1) out += '^' + std::to_string(e);
    }
  }
  (void)h;
  return out;
}

}  // namespace

std::string GroupRingElem::to_string(const RingNames& names) const {
  if (names.names.size() != group_.dim()) throw GroupMismatch("wrong number of generator names");
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [g, twice] = *it;
    bool neg = twice < 0;
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    Half a{std::abs(twice)};
    std::string mono = format_monomial(group_, g, names);
    if (mono.empty()) {
      out += a.to_string();
    } else {
      if (a.twice != 2) out += a.to_string() + "*";
      out += mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

class RingParser {
 public:
  RingParser(std::string_view s, const FinAbGroup& h, const RingNames& names) : s_(s), h_(h), names_(names) {}

  GroupRingElem parse() {
    GroupRingElem out(h_, true);
    bool any_half = false;
    skip_ws();
    if (at_end()) fail("empty ring literal");
    Int sign = 1;
    if (peek() == '-' || peek() == '+') sign = next() == '-' ? -1 : 1;
    for (;;) {
      auto [coeff, key] = term();
      coeff = checked::mul(coeff, sign);
      any_half = any_half || coeff % 2 != 0;
      out.add_twice(key, coeff);
      skip_ws();
      if (at_end()) break;
      char c = next();
      if (c != '+' && c != '-') fail("expected '+' or '-'", pos_ - 1);
      sign = c == '-' ? -1 : 1;
    }
    GroupRingElem result(h_, any_half);
    for (const auto& [g, c] : out.twice_terms()) result.add_twice(g, c);
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, 1, static_cast<int>(at) + 1);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char next() { return s_[pos_++]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  Int integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (peek() == '-') neg = true, ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number", start);
    Int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) v = checked::add(checked::mul(v, 10), next() - '0');
    return neg ? -v : v;
  }

  // Returns true when "/2" follows.
  bool half_suffix() {
    if (peek() != '/') return false;
    ++pos_;
    std::size_t at = pos_;
    if (integer() != 2) fail("only denominator 2 is supported", at);
    return true;
  }

  std::pair<Int, GroupElem> term() {
    skip_ws();
    Int twice = 2;
    IntVector coords(h_.dim(), 0);
    bool need_factor = true;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      Int c = integer();
      twice = half_suffix() ? c : checked::mul(c, 2);
      skip_ws();
      if (peek() == '*') ++pos_;
      else need_factor = false;
    }
    while (need_factor) {
      factor(coords);
      skip_ws();
      if (peek() == '*') ++pos_;
      else break;
    }
    return {twice, h_.make(coords)};
  }

  void factor(IntVector& coords) {
    skip_ws();
    std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected a generator name");
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    auto it = std::find(names_.names.begin(), names_.names.end(), name);
    if (it == names_.names.end()) fail("unknown generator '" + name + "'", start);
    std::size_t idx = static_cast<std::size_t>(it - names_.names.begin());
    bool halved = names_.halved && *names_.halved == idx;
    Int e = halved ? 2 : 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      std::size_t at = pos_;
      Int v = integer();
      if (half_suffix()) {
        if (!halved) fail("half exponent on generator '" + name + "'", at);
        e = v;
      } else {
        e = halved ? checked::mul(v, 2) : v;
      }
    }
    coords[idx] = checked::add(coords[idx], e);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  const FinAbGroup& h_;
  const RingNames& names_;
};

}  // namespace

GroupRingElem GroupRingElem::parse(std::string_view text, const FinAbGroup& h, const RingNames& names) {
  if (names.names.size() != h.dim()) throw ParseError("wrong number of generator names", 1, 1);
  return RingParser(text, h, names).parse();
}

// ---------------------------------------------------------------- maps

GroupRingElem pushforward(const GroupRingElem& x, const GroupHom& f) {
  if (!(f.source() == x.group())) throw GroupMismatch("pushforward along a hom with the wrong source");
  GroupRingElem out(f.target(), x.allows_halves());
  for (const auto& [g, c] : x.twice_terms()) out.add_twice(f(g), c);
  return out;
}

std::map<GroupElem, GroupRingElem> coset_split(const GroupRingElem& x, const GroupHom& f) {
  if (!(f.source() == x.group())) throw GroupMismatch("coset_split along a hom with the wrong source");
  std::map<GroupElem, GroupRingElem> parts;
  for (const auto& [g, c] : x.twice_terms()) {
    auto [it, _] = parts.try_emplace(f(g), GroupRingElem(x.group(), x.allows_halves()));
    it->second.add_twice(g, c);
  }
  return parts;
}

namespace {

Int level(const GroupElem& k, const GroupElem& h) {
  Int v = 0;
  for (std::size_t i = 0; i < h.free_part.size(); ++i) v = checked::add(v, checked::mul(k.free_part[i], h.free_part[i]));
  return v;
}

// One step of exact division by (h - 1). The level functional phi(k) =
// <free(k), free(h)> raises by phi(h) > 0 under multiplication by h, so the
// top level of x must come from h times the top level of the quotient.
std::optional<GroupRingElem> divide_once(GroupRingElem x, const GroupElem& h) {
  const FinAbGroup& grp = x.group();
  const Int step = level(h, h);
  const GroupElem hinv = grp.neg(h);
  GroupRingElem q(grp, x.allows_halves());
  while (!x.is_zero()) {
    Int top = std::numeric_limits<Int>::min(), bottom = std::numeric_limits<Int>::max();
    for (const auto& [k, c] : x.twice_terms()) {
      Int l = level(k, h);
      top = std::max(top, l);
      bottom = std::min(bottom, l);
    }
    if (top - bottom < step) return std::nullopt;
    GroupRingElem peel(grp, x.allows_halves());
    for (const auto& [k, c] : x.twice_terms())
      if (level(k, h) == top) peel.add_twice(grp.add(k, hinv), c);
    q += peel;
    x -= peel.translate(h) - peel;
  }
  return q;
}

}  // namespace

std::optional<GroupRingElem> divide_exact(const GroupRingElem& x, const GroupElem& h, unsigned power) {
  if (!x.group().contains(h)) throw GroupMismatch("divisor is not in the group");
  if (!x.group().has_infinite_order(h))
    throw FiniteOrderElement("division by (h - 1) for h of finite order " + x.group().format(h));
  GroupRingElem cur = x;
  for (unsigned i = 0; i < power; ++i) {
    auto q = divide_once(cur, h);
    if (!q) return std::nullopt;
    cur = std::move(*q);
  }
  return cur;
}

// ---------------------------------------------------------------- PmClass

namespace {

std::vector<std::pair<GroupElem, Int>> flat(const GroupRingElem& x) {
  return {x.twice_terms().begin(), x.twice_terms().end()};
}

GroupRingElem sign_first_positive(const GroupRingElem& x) {
  if (!x.is_zero() && x.twice_terms().begin()->second < 0) return -x;
  return x;
}

}  // namespace

PmClass::PmClass(GroupRingElem representative) : rep_(std::move(representative)) {
  normal_ = rep_;
  if (rep_.is_zero()) return;
  const FinAbGroup& h = rep_.group();
  bool have = false;
  std::vector<std::pair<GroupElem, Int>> best;
  for (const auto& [k, c] : rep_.twice_terms()) {
    GroupRingElem cand = sign_first_positive(rep_.translate(h.neg(k)));
    auto f = flat(cand);
    if (!have || f < best) {
      best = std::move(f);
      normal_ = std::move(cand);
      have = true;
    }
  }
}

bool pm_equal(const GroupRingElem& a, const GroupRingElem& b) {
  if (!(a.group() == b.group())) throw GroupMismatch("pm_equal over different groups");
  return PmClass(a) == PmClass(b);
}

// ---------------------------------------------------------------- canonical_rep

HalfLattice half_lattice(const FinAbGroup& h, const GroupElem& m, const RingNames& names) {
  if (!h.has_infinite_order(m)) throw FiniteOrderElement("half lattice over a torsion element");
  // m = +-e_i on a free coordinate: double that coordinate's lattice.
  std::optional<std::size_t> unit;
  bool tors_zero = std::all_of(m.torsion_part.begin(), m.torsion_part.end(), [](Int v) { return v == 0; });
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < h.rank(); ++i)
    if (m.free_part[i] != 0) ++nonzero, unit = i;
  if (tors_zero && nonzero == 1 && std::abs(m.free_part[*unit]) == 1) {
    IntMatrix e = IntMatrix::identity(h.dim());
    e(*unit, *unit) = 2;
    RingNames n = names;
    n.halved = *unit;
    IntVector r(h.dim(), 0);
    r[*unit] = m.free_part[*unit];
    return {h, GroupHom(h, h, e), h.make(r), n};
  }
  const std::size_t d = h.dim();
  IntMatrix rel(0, d + 1);
  for (std::size_t i = 0; i < h.num_torsion(); ++i) {
    IntVector row(d + 1, 0);
    row[h.rank() + i] = h.torsion_divisors()[i];
    rel.append_row(row);
  }
  IntVector row = m.coords();
  row.push_back(-2);
  rel.append_row(row);
  Quotient q = group_from_relations(d + 1, rel);
  IntMatrix embed(q.group.dim(), d);
  for (std::size_t r = 0; r < q.group.dim(); ++r)
    for (std::size_t c = 0; c < d; ++c) embed(r, c) = q.hom.matrix()(r, c);
  IntVector u(d + 1, 0);
  u[d] = 1;
  return {q.group, GroupHom(h, q.group, embed), q.hom(FinAbGroup::free(d + 1).make(u)),
          RingNames::defaults(q.group)};
}

namespace {

// Solves 2g = c in h, taking the smallest solution on even torsion factors.
std::optional<GroupElem> halve(const FinAbGroup& h, const GroupElem& c) {
  IntVector fp(c.free_part.size()), tp(c.torsion_part.size());
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (c.free_part[i] % 2 != 0) return std::nullopt;
    fp[i] = c.free_part[i] / 2;
  }
  for (std::size_t i = 0; i < tp.size(); ++i) {
    Int d = h.torsion_divisors()[i], v = c.torsion_part[i];
    if (d % 2 == 0) {
      if (v % 2 != 0) return std::nullopt;
      tp[i] = v / 2;
    } else {
      tp[i] = checked::mod(checked::mul(v, (d + 1) / 2), d);
    }
  }
  return h.make(fp, tp);
}

int sign_for(const GroupRingElem& y, const GroupElem& root) {
  Half a = y.augmentation();
  if (a.twice != 0) return a.twice > 0 ? 1 : -1;
  GroupRingElem p = pushforward(y, quotient_by_element(y.group(), root).hom);
  if (!p.is_zero()) return p.twice_terms().begin()->second > 0 ? 1 : -1;
  return y.twice_terms().begin()->second > 0 ? 1 : -1;
}

}  // namespace

CanonicalForm canonical_rep(const GroupRingElem& x, const GroupElem& m, const RingNames& names) {
  const FinAbGroup& h = x.group();
  if (!h.has_infinite_order(m)) throw FiniteOrderElement("canonical_rep needs a meridian of infinite order");
  if (x.is_zero()) return {x, false, std::nullopt, h.identity(), 1};
  const GroupRingElem xbar = x.conjugate();
  const GroupElem k0 = x.twice_terms().begin()->first;
  // xbar = c * x for the involution-invariant translate to exist.
  std::optional<GroupElem> shift;
  for (const auto& [k, coef] : xbar.twice_terms()) {
    GroupElem c = h.sub(k, k0);
    if (x.translate(c) == xbar) {
      shift = c;
      break;
    }
  }
  if (!shift) throw NotSymmetrizable("no translate of " + x.to_string(names) + " is invariant under inversion");
  if (auto g = halve(h, *shift)) {
    GroupRingElem y = x.translate(*g);
    int sign = sign_for(y, m);
    return {sign > 0 ? y : -y, false, std::nullopt, *g, sign};
  }
  auto g = halve(h, h.sub(*shift, m));
  if (!g) throw NotSymmetrizable("no half translate of " + x.to_string(names) + " is invariant under inversion");
  HalfLattice lat = half_lattice(h, m, names);
  GroupElem t = lat.group.add(lat.root, lat.embed(*g));
  GroupRingElem y = pushforward(x, lat.embed).translate(t);
  int sign = sign_for(y, lat.root);
  return {sign > 0 ? y : -y, true, lat, t, sign};
}

}  // namespace sutured
