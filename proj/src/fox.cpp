#include "sutured/fox.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sutured/cyclotomic.hpp"

namespace sutured {

// ---------------------------------------------------------------- FreeWord

FreeWord::FreeWord(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.exp != 1 && l.exp != -1) throw std::invalid_argument("letter exponent must be +-1");
    if (!letters_.empty() && letters_.back().gen == l.gen && letters_.back().exp == -l.exp) letters_.pop_back();
    else letters_.push_back(l);
  }
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
  std::vector<Letter> l = letters_;
  l.insert(l.end(), o.letters_.begin(), o.letters_.end());
  return FreeWord(std::move(l));
}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> l;
  l.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) l.push_back({it->gen, -it->exp});
  return FreeWord(std::move(l));
}

FreeWord FreeWord::substitute(std::size_t g, const FreeWord& image) const {
  FreeWord out;
  const FreeWord inv = image.inverse();
  for (const Letter& l : letters_) {
    if (l.gen == g) out = out * (l.exp > 0 ? image : inv);
    else out = out * FreeWord({l});
  }
  return out;
}

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string FreeWord::to_string(const std::vector<std::string>& names) const {
  std::string out;
  for (const Letter& l : letters_) {
    if (!out.empty()) out += ' ';
    out += l.exp > 0 ? names.at(l.gen) : upper(names.at(l.gen));
  }
  return out;
}

// ---------------------------------------------------------------- free Fox calculus

FreeRingElem fox_derivative(const FreeWord& w, std::size_t j) {
  FreeRingElem out;
  FreeWord prefix;
  for (const Letter& l : w.letters()) {
    FreeWord next = prefix * FreeWord({l});
    if (l.gen == j) add_into(out, {{l.exp > 0 ? prefix : next, 1}}, l.exp);
    prefix = std::move(next);
  }
  return out;
}

void add_into(FreeRingElem& into, const FreeRingElem& a, Int k) {
  for (const auto& [w, c] : a) {
    Int& slot = into[w];
    slot = checked::add(slot, checked::mul(c, k));
    if (slot == 0) into.erase(w);
  }
}

FreeRingElem right_multiply(const FreeRingElem& a, const FreeWord& w) {
  FreeRingElem out;
  for (const auto& [u, c] : a) add_into(out, {{u * w, c}});
  return out;
}

// ---------------------------------------------------------------- presentations

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

FreeWord parse_word_at(std::string_view text, const std::vector<std::string>& names, int line, int col0) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view tok = text.substr(start, i - start);
    const int col = col0 + static_cast<int>(start);
    if (tok == "1") continue;
    std::string_view base = tok;
    Int power = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      base = tok.substr(0, caret);
      std::string_view e = tok.substr(caret + 1);
      try {
        std::size_t used = 0;
        power = std::stoll(std::string(e), &used);
        if (used != e.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("bad exponent in '" + std::string(tok) + "'", line, col);
      }
    }
    int sign = 0;
    std::size_t gen = 0;
    for (std::size_t g = 0; g < names.size(); ++g) {
      if (base == names[g]) sign = 1, gen = g;
      else if (base == upper(names[g])) sign = -1, gen = g;
    }
    if (sign == 0) throw ParseError("unknown generator '" + std::string(base) + "'", line, col);
    if (power < 0) sign = -sign, power = -power;
    for (Int k = 0; k < power; ++k) letters.push_back({gen, sign});
  }
  return FreeWord(std::move(letters));
}

}  // namespace

GroupPresentation GroupPresentation::parse(std::string_view text) {
  GroupPresentation p;
  bool have_gens = false, have_meridian = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no, 1);
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = line.substr(colon + 1);
    const int vcol = static_cast<int>(colon) + 2;
    if (key == "gens") {
      if (have_gens) throw ParseError("duplicate 'gens'", line_no, 1);
      std::istringstream in{std::string(value)};
      std::string name;
      while (in >> name) {
        bool ok = std::isalpha(static_cast<unsigned char>(name[0])) &&
                  std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); }) &&
                  upper(name) != name;
        if (!ok) throw ParseError("generator names must be alphanumeric with a lowercase letter: '" + name + "'", line_no, vcol);
        for (const auto& other : p.generators)
          if (other == name || upper(other) == upper(name))
            throw ParseError("generator '" + name + "' clashes with '" + other + "'", line_no, vcol);
        p.generators.push_back(name);
      }
      have_gens = true;
    } else if (key == "rel" || key == "meridian") {
      if (!have_gens) throw ParseError("'gens' must come first", line_no, 1);
      FreeWord w = parse_word_at(value, p.generators, line_no, vcol);
      if (key == "rel") {
        p.relators.push_back(std::move(w));
      } else {
        if (have_meridian) throw ParseError("duplicate 'meridian'", line_no, 1);
        if (w.empty()) throw ParseError("meridian must be a nontrivial word", line_no, vcol);
        p.meridian = std::move(w);
        have_meridian = true;
      }
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
    }
  }
  if (!have_gens) throw ParseError("missing 'gens'", line_no, 1);
  if (!have_meridian) throw ParseError("missing 'meridian'", line_no, 1);
  return p;
}

FreeWord GroupPresentation::parse_word(std::string_view text) const { return parse_word_at(text, generators, 1, 1); }

std::string GroupPresentation::to_string() const {
  std::string out = "gens:";
  for (const auto& g : generators) out += " " + g;
  out += "\n";
  for (const auto& r : relators) out += "rel: " + r.to_string(generators) + "\n";
  out += "meridian: " + meridian.to_string(generators) + "\n";
  return out;
}

// ---------------------------------------------------------------- abelianization

GroupElem Abelianization::operator()(const FreeWord& w) const {
  GroupElem e = group.identity();
  for (const Letter& l : w.letters()) e = l.exp > 0 ? group.add(e, images[l.gen]) : group.sub(e, images[l.gen]);
  return e;
}

GroupRingElem Abelianization::operator()(const FreeRingElem& a) const {
  GroupRingElem out(group);
  for (const auto& [w, c] : a) out.add_term((*this)(w), c);
  return out;
}

Abelianization abelianize(const GroupPresentation& p) {
  const std::size_t n = p.num_generators();
  IntMatrix rel(0, n);
  for (const FreeWord& r : p.relators) {
    IntVector row(n, 0);
    for (const Letter& l : r.letters()) row[l.gen] += l.exp;
    rel.append_row(row);
  }
  Quotient q = group_from_relations(n, rel);
  Abelianization ab{q.group, {}, q.lift};
  for (std::size_t g = 0; g < n; ++g) ab.images.push_back(q.hom(FinAbGroup::free(n).generator(g)));
  return ab;
}

GroupRingElem abelian_fox_derivative(const FreeWord& w, std::size_t j, const Abelianization& ab) {
  const FinAbGroup& h = ab.group;
  GroupRingElem out(h);
  GroupElem prefix = h.identity();
  for (const Letter& l : w.letters()) {
    if (l.exp > 0) {
      if (l.gen == j) out.add_term(prefix, 1);
      prefix = h.add(prefix, ab.images[l.gen]);
    } else {
      prefix = h.sub(prefix, ab.images[l.gen]);
      if (l.gen == j) out.add_term(prefix, -1);
    }
  }
  return out;
}

AlexanderMatrix alexander_matrix(const GroupPresentation& p, const Abelianization& ab) {
  AlexanderMatrix a{ab.group, {}, p.generators};
  for (const FreeWord& r : p.relators) {
    std::vector<GroupRingElem> row;
    for (std::size_t j = 0; j < p.num_generators(); ++j) row.push_back(abelian_fox_derivative(r, j, ab));
    a.entries.push_back(std::move(row));
  }
  return a;
}

// ---------------------------------------------------------------- determinants

GroupRingElem determinant(const std::vector<std::vector<GroupRingElem>>& m, const FinAbGroup& h) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return GroupRingElem::one(h);
  if (n > 20) throw std::invalid_argument("determinant too large for cofactor expansion");
  // Minor on rows [k, n) and the columns in mask, with k = n - popcount(mask).
  std::unordered_map<std::uint32_t, GroupRingElem> memo;
  auto rec = [&](auto&& self, std::uint32_t mask) -> GroupRingElem {
    if (mask == 0) return GroupRingElem::one(h);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const std::size_t row = n - static_cast<std::size_t>(__builtin_popcount(mask));
    GroupRingElem acc(h);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      if (!m[row][c].is_zero()) {
        GroupRingElem term = m[row][c] * self(self, mask & ~(1u << c));
        acc = sign > 0 ? acc + term : acc - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(rec, (1u << n) - 1u);
}

// ---------------------------------------------------------------- torsion

bool pm_equal(const TorsionFraction& a, const TorsionFraction& b) {
  const FinAbGroup& h = a.numerator.group();
  return pm_equal(a.numerator * GroupRingElem::unit_minus_one(h, b.denominator),
                  b.numerator * GroupRingElem::unit_minus_one(h, a.denominator));
}

namespace {

TorsionFraction torsion_with(const GroupPresentation& p, const Abelianization& ab, std::optional<std::size_t> column) {
  if (p.deficiency() != 1)
    throw Indeterminate("torsion needs a deficiency one presentation, got deficiency " + std::to_string(p.deficiency()));
  if (ab.group.rank() != 1)
    throw Indeterminate("torsion needs first Betti number 1, got " + std::to_string(ab.group.rank()));
  std::size_t j = 0;
  if (column) {
    j = *column;
    if (j >= p.num_generators()) throw Indeterminate("column out of range");
    if (!ab.group.has_infinite_order(ab.images[j]))
      throw Indeterminate("generator " + p.generators[j] + " has finite order in homology");
  } else {
    while (j < p.num_generators() && !ab.group.has_infinite_order(ab.images[j])) ++j;
    if (j == p.num_generators()) throw Indeterminate("no generator of infinite order");
  }
  AlexanderMatrix a = alexander_matrix(p, ab);
  std::vector<std::vector<GroupRingElem>> minor;
  for (const auto& row : a.entries) {
    std::vector<GroupRingElem> r;
    for (std::size_t c = 0; c < row.size(); ++c)
      if (c != j) r.push_back(row[c]);
    minor.push_back(std::move(r));
  }
  return {determinant(minor, ab.group), ab.images[j], j};
}

}  // namespace

TorsionFraction turaev_torsion(const GroupPresentation& p, std::optional<std::size_t> column) {
  return torsion_with(p, abelianize(p), column);
}

SuturedTorsion sutured_torsion(const GroupPresentation& p) {
  Abelianization ab = abelianize(p);
  const GroupElem m = ab(p.meridian);
  if (!ab.group.has_infinite_order(m)) throw Indeterminate("meridian has finite order in homology");
  std::optional<std::size_t> column;
  for (std::size_t j = 0; j < p.num_generators() && !column; ++j)
    if (ab.images[j] == m) column = j;
  TorsionFraction tau = torsion_with(p, ab, column);
  SuturedTorsion out{ab.group, m, tau.numerator, tau.column, DivisionRoute::None};
  if (tau.denominator == m) return out;
  GroupRingElem num = tau.numerator * GroupRingElem::unit_minus_one(ab.group, m);
  if (auto q = divide_exact(num, tau.denominator, 1)) {
    out.value = std::move(*q);
    out.route = DivisionRoute::Exact;
    return out;
  }
  if (ab.group.num_torsion() > 0) {
    if (auto q = divide_by_characters(num, tau.denominator)) {
      out.value = std::move(*q);
      out.route = DivisionRoute::Characters;
      return out;
    }
  }
  throw Indeterminate("(x_j - 1) does not divide D_j (m - 1)");
}

// ---------------------------------------------------------------- characters

namespace {

using Laurent = std::map<Int, CyclotomicField::Elem>;

void laurent_add(const CyclotomicField& f, Laurent& p, Int deg, const CyclotomicField::Elem& c) {
  auto [it, inserted] = p.try_emplace(deg, c);
  if (!inserted) it->second = f.add(it->second, c);
  if (f.is_zero(it->second)) p.erase(it);
}

// X / (zeta^u t^a - 1) in Z[zeta][t^+-1].
std::optional<Laurent> laurent_divide(const CyclotomicField& f, Laurent x, Int u, Int a) {
  if (a < 0) {
    // zeta^u t^a - 1 = -zeta^u t^a (zeta^-u t^-a - 1)
    auto q = laurent_divide(f, std::move(x), -u, -a);
    if (!q) return std::nullopt;
    Laurent out;
    for (const auto& [d, c] : *q) laurent_add(f, out, checked::sub(d, a), f.neg(f.mul(c, f.root_power(-u))));
    return out;
  }
  Laurent q;
  const auto& uinv = f.root_power(-u);
  while (!x.empty()) {
    Int top = x.rbegin()->first, bottom = x.begin()->first;
    if (top - bottom < a) return std::nullopt;
    CyclotomicField::Elem qc = f.mul(x.rbegin()->second, uinv);
    laurent_add(f, q, top - a, qc);
    x.erase(top);
    laurent_add(f, x, top - a, qc);
  }
  return q;
}

}  // namespace

std::optional<GroupRingElem> divide_by_characters(const GroupRingElem& x, const GroupElem& h) {
  const FinAbGroup& grp = x.group();
  if (grp.rank() != 1) throw Indeterminate("character division needs rank one");
  if (!grp.has_infinite_order(h)) throw FiniteOrderElement("character division by a torsion element");
  const IntVector& divs = grp.torsion_divisors();
  const Int n = divs.empty() ? 1 : divs.back();
  const CyclotomicField f(n);
  const FinAbGroup tors(0, divs);
  const std::vector<GroupElem> chars = tors.elements();  // character a <-> element a
  auto pairing = [&](const GroupElem& a, const IntVector& s) {
    Int e = 0;
    for (std::size_t i = 0; i < divs.size(); ++i)
      e = checked::add(e, checked::mul(checked::mul(a.torsion_part[i], s[i]), n / divs[i]));
    return checked::mod(e, n);
  };
  std::vector<Laurent> parts;
  parts.reserve(chars.size());
  for (const GroupElem& a : chars) {
    Laurent xa;
    for (const auto& [k, twice] : x.twice_terms())
      laurent_add(f, xa, k.free_part[0], f.scale(f.root_power(pairing(a, k.torsion_part)), twice));
    auto qa = laurent_divide(f, std::move(xa), pairing(a, h.torsion_part), h.free_part[0]);
    if (!qa) return std::nullopt;
    parts.push_back(std::move(*qa));
  }
  std::set<Int> degrees;
  for (const auto& q : parts)
    for (const auto& [d, c] : q) degrees.insert(d);
  const Int order = static_cast<Int>(chars.size());
  GroupRingElem out(grp, x.allows_halves());
  for (Int d : degrees) {
    for (const GroupElem& s : chars) {
      CyclotomicField::Elem sum = f.zero();
      for (std::size_t i = 0; i < chars.size(); ++i) {
        auto it = parts[i].find(d);
        if (it == parts[i].end()) continue;
        sum = f.add(sum, f.mul(it->second, f.root_power(-pairing(chars[i], s.torsion_part))));
      }
      auto v = f.as_integer(sum);
      if (!v || *v % order != 0) return std::nullopt;
      Int twice = *v / order;
      if (!x.allows_halves() && twice % 2 != 0) return std::nullopt;
      out.add_twice(grp.make({d}, s.torsion_part), twice);
    }
  }
  return out;
}

}  // namespace sutured
