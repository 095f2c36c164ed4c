#include "sutured/heegaard.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace sutured {

namespace {

Int mod(Int x, Int p) { return x - p * checked::floor_div(x, p); }

char side_char(Side s) { return s == Side::Minus ? '-' : '+'; }

// A point on the boundary of one strip, x lifted to R.
struct Lift {
  Side side = Side::Minus;
  Int x = 0;
};

// Position on the boundary circle of the strip, in doubled coordinates so that
// gap midpoints are integers. Bottom runs left to right, top right to left.
std::pair<int, Int> key2(Side side, Int x2) {
  return side == Side::Minus ? std::pair<int, Int>{0, x2} : std::pair<int, Int>{1, -x2};
}
std::pair<int, Int> key(const Lift& l) { return key2(l.side, 2 * l.x); }

bool strictly_between(std::pair<int, Int> lo, std::pair<int, Int> hi, std::pair<int, Int> k) {
  if (hi < lo) std::swap(lo, hi);
  return lo < k && k < hi;
}

bool chords_cross(const Lift& a1, const Lift& a2, const Lift& b1, const Lift& b2) {
  return strictly_between(key(a1), key(a2), key(b1)) != strictly_between(key(a1), key(a2), key(b2));
}

// +1 when b1 lies on the counterclockwise boundary arc from a1 to a2.
int crossing_sign(std::pair<int, Int> a1, std::pair<int, Int> a2, std::pair<int, Int> b1) {
  bool on = a1 < a2 ? (a1 < b1 && b1 < a2) : (b1 > a1 || b1 < a2);
  return on ? 1 : -1;
}

std::pair<Lift, Lift> arc_lift(const OneOneDiagram& d, const Arc& a, Int s) {
  return {{a.start.side, a.start.pos + d.p * s}, {a.end.side, a.end.pos + d.p * (a.winding + s)}};
}

std::pair<Int, Int> x_range(const Lift& a, const Lift& b) { return {std::min(a.x, b.x), std::max(a.x, b.x)}; }

void check_range(const OneOneDiagram& d) {
  if (d.p < 1) throw DiagramError("range", "p must be at least 1");
  if (static_cast<Int>(d.arcs.size()) != d.p)
    throw DiagramError("range", "expected " + std::to_string(d.p) + " arcs, got " + std::to_string(d.arcs.size()));
  for (const Arc& a : d.arcs)
    for (const Endpoint& e : {a.start, a.end})
      if (e.pos < 0 || e.pos >= d.p) throw DiagramError("range", "endpoint position " + std::to_string(e.pos) + " out of range");
  for (const Mark& m : {d.z, d.w})
    if (m.gap < 0 || m.gap >= d.p) throw DiagramError("range", "gap " + std::to_string(m.gap) + " out of range");
}

void check_matching(const OneOneDiagram& d) {
  std::set<Endpoint> seen;
  for (const Arc& a : d.arcs)
    for (const Endpoint& e : {a.start, a.end})
      if (!seen.insert(e).second)
        throw DiagramError("matching", std::string("endpoint ") + side_char(e.side) + std::to_string(e.pos) + " used twice");
}

void check_embedding(const OneOneDiagram& d) {
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    auto [a1, a2] = arc_lift(d, d.arcs[i], 0);
    auto [alo, ahi] = x_range(a1, a2);
    for (std::size_t j = i; j < d.arcs.size(); ++j) {
      auto [b1, b2] = arc_lift(d, d.arcs[j], 0);
      auto [blo, bhi] = x_range(b1, b2);
      Int smin = checked::floor_div(alo - bhi, d.p) - 1, smax = checked::floor_div(ahi - blo, d.p) + 1;
      for (Int s = smin; s <= smax; ++s) {
        if (i == j && s == 0) continue;
        Lift c1{b1.side, b1.x + d.p * s}, c2{b2.side, b2.x + d.p * s};
        if (chords_cross(a1, a2, c1, c2))
          throw DiagramError("embedding", "arcs " + std::to_string(i) + " and " + std::to_string(j) + " cross in the strip");
      }
    }
  }
}

// Which arc owns an endpoint, and whether it is the arc's start.
struct Owner {
  std::size_t arc = 0;
  bool is_start = true;
};

std::map<Endpoint, Owner> owners(const OneOneDiagram& d) {
  std::map<Endpoint, Owner> out;
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    out[d.arcs[i].start] = {i, true};
    out[d.arcs[i].end] = {i, false};
  }
  return out;
}

// The other end of the arc through a lifted boundary point.
Lift across(const OneOneDiagram& d, const std::map<Endpoint, Owner>& own, const Lift& from) {
  const Owner& o = own.at({from.side, mod(from.x, d.p)});
  const Arc& a = d.arcs[o.arc];
  if (o.is_start) {
    Int offset = from.x - a.start.pos;
    return {a.end.side, a.end.pos + d.p * a.winding + offset};
  }
  Int offset = from.x - (a.end.pos + d.p * a.winding);
  return {a.start.side, a.start.pos + offset};
}

// One beta segment inside strip `strip`.
struct Piece {
  Int strip = 0;
  Lift from;
  Lift to;
};

struct Walk {
  BetaPath path;
  std::vector<Piece> pieces;   // piece k leaves point k
  std::vector<std::vector<int>> delta_signs;  // crossings with delta along each piece
  bool closed = false;         // returned after exactly p steps
};

std::vector<int> delta_crossings(const OneOneDiagram& d, const Lift& a1, const Lift& a2) {
  auto [lo, hi] = x_range(a1, a2);
  Int dlo = std::min(d.z.gap, d.w.gap), dhi = std::max(d.z.gap, d.w.gap) + 1;
  std::vector<std::pair<std::pair<int, Int>, int>> found;
  for (Int s = checked::floor_div(lo - dhi, d.p) - 1; s <= checked::floor_div(hi - dlo, d.p) + 1; ++s) {
    auto z = key2(d.z.side, 2 * (d.z.gap + d.p * s) + 1), w = key2(d.w.side, 2 * (d.w.gap + d.p * s) + 1);
    auto ka1 = key(a1), ka2 = key(a2);
    if (strictly_between(ka1, ka2, z) == strictly_between(ka1, ka2, w)) continue;
    // Order along the arc by where delta meets the counterclockwise side.
    auto near = crossing_sign(ka1, ka2, z) > 0 ? z : w;
    found.push_back({near, crossing_sign(ka1, ka2, z)});
  }
  auto ka1 = key(a1);
  std::sort(found.begin(), found.end(), [&](const auto& u, const auto& v) {
    // counterclockwise distance from a1
    auto before = [&](std::pair<int, Int> k) { return k > ka1 ? 0 : 1; };
    if (before(u.first) != before(v.first)) return before(u.first) < before(v.first);
    return u.first < v.first;
  });
  std::vector<int> out;
  for (const auto& f : found) out.push_back(f.second);
  return out;
}

Walk walk(const OneOneDiagram& d) {
  auto own = owners(d);
  Walk w;
  Int x = 0, line = 0, delta = 0;
  bool up = true;
  for (Int step = 0; step < d.p; ++step) {
    if (step > 0 && up && mod(x, d.p) == 0) return w;
    w.path.points.push_back({x, line, up ? 1 : -1, delta});
    Lift from{up ? Side::Minus : Side::Plus, x};
    Int strip = up ? line : line - 1;
    Lift to = across(d, own, from);
    w.pieces.push_back({strip, from, to});
    auto signs = delta_crossings(d, from, to);
    for (int s : signs) delta += s;
    w.delta_signs.push_back(std::move(signs));
    x = to.x;
    if (to.side == Side::Minus) {
      line = strip;
      up = false;
    } else {
      line = strip + 1;
      up = true;
    }
  }
  w.closed = up && mod(x, d.p) == 0;
  w.path.shift_x = x;
  w.path.shift_line = line;
  w.path.delta_total = delta;
  return w;
}

Mark successor(const OneOneDiagram& d, const std::map<Endpoint, Owner>& own, const Mark& m) {
  Lift hit = m.side == Side::Minus ? Lift{Side::Minus, m.gap + 1} : Lift{Side::Plus, m.gap};
  Lift far = across(d, own, hit);
  if (far.side == Side::Minus) return {mod(far.x, d.p), Side::Minus};
  return {mod(far.x - 1, d.p), Side::Plus};
}

std::vector<std::vector<Mark>> trace_regions(const OneOneDiagram& d) {
  auto own = owners(d);
  std::set<Mark> done;
  std::vector<std::vector<Mark>> out;
  for (Side s : {Side::Minus, Side::Plus})
    for (Int g = 0; g < d.p; ++g) {
      Mark start{g, s};
      if (done.count(start)) continue;
      std::vector<Mark> cyc;
      Mark m = start;
      do {
        cyc.push_back(m);
        done.insert(m);
        m = successor(d, own, m);
      } while (!(m == start));
      std::sort(cyc.begin(), cyc.end());
      out.push_back(std::move(cyc));
    }
  std::sort(out.begin(), out.end());
  return out;
}

Side parse_side(char c) { return c == '-' ? Side::Minus : Side::Plus; }

}  // namespace

OneOneDiagram OneOneDiagram::parse(std::string_view text) {
  OneOneDiagram d;
  d.arcs.clear();
  bool have_p = false, have_z = false, have_w = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::size_t colon = line.find(':');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", lineno, 1);
    std::string k = line.substr(0, colon);
    k.erase(0, k.find_first_not_of(" \t"));
    k.erase(k.find_last_not_of(" \t") + 1);
    std::vector<std::pair<std::string, int>> tok;  // token, column
    for (std::size_t i = colon + 1; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tok.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    auto integer = [&](const std::string& s, int col) {
      Int v = 0;
      auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ParseError("expected an integer", lineno, col);
      return v;
    };
    auto endpoint = [&](const std::string& s, int col) {
      if (s.size() < 2 || (s[0] != '+' && s[0] != '-')) throw ParseError("expected an endpoint like +0 or -2", lineno, col);
      return Endpoint{parse_side(s[0]), integer(s.substr(1), col + 1)};
    };
    if (k == "p") {
      if (tok.size() != 1) throw ParseError("expected 'p: N'", lineno, static_cast<int>(colon) + 2);
      d.p = integer(tok[0].first, tok[0].second);
      have_p = true;
    } else if (k == "arc") {
      if (tok.size() != 3 || tok[2].first.rfind("w=", 0) != 0)
        throw ParseError("expected 'arc: <endpoint> <endpoint> w=<int>'", lineno, static_cast<int>(colon) + 2);
      d.arcs.push_back({endpoint(tok[0].first, tok[0].second), endpoint(tok[1].first, tok[1].second),
                        integer(tok[2].first.substr(2), tok[2].second + 2)});
    } else if (k == "z" || k == "w") {
      if (tok.size() != 3 || tok[0].first != "gap" || (tok[2].first != "+" && tok[2].first != "-"))
        throw ParseError("expected '" + k + ": gap <int> <side>'", lineno, static_cast<int>(colon) + 2);
      Mark m{integer(tok[1].first, tok[1].second), parse_side(tok[2].first[0])};
      (k == "z" ? d.z : d.w) = m;
      (k == "z" ? have_z : have_w) = true;
    } else {
      throw ParseError("unknown key '" + k + "'", lineno, 1);
    }
  }
  if (!have_p) throw ParseError("missing 'p:' line", lineno, 1);
  if (!have_z || !have_w) throw ParseError("missing basepoint line", lineno, 1);
  return d;
}

std::string OneOneDiagram::to_string() const {
  std::ostringstream out;
  out << "p: " << p << "\n";
  for (const Arc& a : arcs)
    out << "arc: " << side_char(a.start.side) << a.start.pos << ' ' << side_char(a.end.side) << a.end.pos
        << " w=" << a.winding << "\n";
  out << "z: gap " << z.gap << ' ' << side_char(z.side) << "\n";
  out << "w: gap " << w.gap << ' ' << side_char(w.side) << "\n";
  return out.str();
}

void validate(const OneOneDiagram& d) {
  check_range(d);
  check_matching(d);
  check_embedding(d);
  Walk w = walk(d);
  if (!w.closed) throw DiagramError("connected", "the arcs close up into more than one curve");
  if (w.path.shift_line == 0) throw DiagramError("homology", "beta is homologous to a multiple of alpha; H1(Y) is infinite");
  auto regs = trace_regions(d);
  if (regs.size() > 1 && region_of(d, d.z) == region_of(d, d.w))
    throw DiagramError("marks", "z and w lie in the same region");
}

bool is_valid(const OneOneDiagram& d) {
  try {
    validate(d);
    return true;
  } catch (const DiagramError&) {
    return false;
  }
}

std::vector<std::vector<Mark>> regions(const OneOneDiagram& d) { return trace_regions(d); }

std::size_t region_of(const OneOneDiagram& d, const Mark& m) {
  auto regs = trace_regions(d);
  for (std::size_t i = 0; i < regs.size(); ++i)
    if (std::binary_search(regs[i].begin(), regs[i].end(), m)) return i;
  throw DiagramError("range", "mark is not adjacent to alpha");
}

BetaPath trace_beta(const OneOneDiagram& d) {
  Walk w = walk(d);
  if (!w.closed) throw DiagramError("connected", "the arcs close up into more than one curve");
  return w.path;
}

KnotHomology knot_complement_homology(const OneOneDiagram& d) {
  BetaPath b = trace_beta(d);
  IntMatrix rel(1, 2);
  rel(0, 0) = b.shift_line;
  rel(0, 1) = b.delta_total;
  Quotient q = group_from_relations(2, rel);
  GroupElem m = q.hom(FinAbGroup::free(2).make({0, 1}));
  return {q.group, m, q.hom, b.shift_line < 0 ? -b.shift_line : b.shift_line};
}

GroupPresentation knot_group_presentation(const OneOneDiagram& d) {
  Walk w = walk(d);
  if (!w.closed) throw DiagramError("connected", "the arcs close up into more than one curve");
  GroupPresentation g;
  g.generators = {"b", "c"};
  std::vector<Letter> letters;
  for (std::size_t k = 0; k < w.path.points.size(); ++k) {
    letters.push_back({0, w.path.points[k].sign});
    for (int s : w.delta_signs[k]) letters.push_back({1, s});
  }
  g.relators.push_back(FreeWord(std::move(letters)));
  g.meridian = FreeWord::generator(1);
  return g;
}

namespace {

// Beta in the universal cover, extended periodically past one period.
struct Cover {
  const Walk* w = nullptr;
  Int p = 1;

  BetaPoint point(Int k) const {
    Int q = k / p;
    BetaPoint b = w->path.points[static_cast<std::size_t>(k % p)];
    b.x += q * w->path.shift_x;
    b.line += q * w->path.shift_line;
    b.delta += q * w->path.delta_total;
    return b;
  }
  Piece piece(Int k) const {
    Int q = k / p;
    Piece c = w->pieces[static_cast<std::size_t>(k % p)];
    c.strip += q * w->path.shift_line;
    c.from.x += q * w->path.shift_x;
    c.to.x += q * w->path.shift_x;
    return c;
  }
};

struct Bigon {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<Int> multiplicity;  // per region
};

// Winding number of the loop (beta from point i to point j, then alpha back)
// around a point just inside strip `strip` at doubled abscissa x2.
struct Loop {
  std::vector<Piece> pieces;
  Int line = 0;
  Int xi = 0, xj = 0;

  int winding(Int x2, Int strip, bool near_bottom) const {
    int w = 0;
    for (const Piece& c : pieces) {
      if (c.strip < strip || (c.strip == strip && !near_bottom)) continue;
      bool fr = 2 * c.from.x > x2, to = 2 * c.to.x > x2;
      if (fr != to) w += fr ? 1 : -1;
    }
    if (line > strip && std::min(xi, xj) * 2 < x2 && x2 < std::max(xi, xj) * 2) w += xi < xj ? 1 : -1;
    return w;
  }

  // Sum of the four quadrant windings at the lattice point (x, l).
  int quadrants(Int x, Int l) const {
    int sum = 0;
    for (Int dx : {-1, 1}) sum += winding(2 * x + dx, l, true) + winding(2 * x + dx, l - 1, false);
    return sum;
  }
};

std::vector<Bigon> find_bigons(const OneOneDiagram& d, const Walk& w, BigonOptions opts) {
  // A positive index one domain longer than this along beta does not exist.
  Int wsum = 0;
  for (const Arc& a : d.arcs) wsum += a.winding < 0 ? -a.winding : a.winding;
  const Int W = wsum + d.p + 2;
  const Int B = checked::mul(checked::mul(W, d.p), std::max<Int>(1, opts.bound_factor));
  Cover cov{&w, d.p};
  auto regs = trace_regions(d);
  std::vector<Bigon> out;
  for (Int i = 0; i < d.p; ++i) {
    BetaPoint pi = cov.point(i);
    for (Int j = i + 1; j <= i + B; ++j) {
      BetaPoint pj = cov.point(j);
      if (pj.line != pi.line) continue;
      Int lo = std::min(pi.x, pj.x), hi = std::max(pi.x, pj.x);
      Loop loop;
      loop.line = pi.line;
      loop.xi = pi.x;
      loop.xj = pj.x;
      for (Int k = i; k < j; ++k) loop.pieces.push_back(cov.piece(k));
      Int smin = loop.pieces[0].strip, smax = smin, xmin = lo, xmax = hi;
      for (const Piece& c : loop.pieces) {
        smin = std::min(smin, c.strip);
        smax = std::max(smax, c.strip);
        xmin = std::min({xmin, c.from.x, c.to.x});
        xmax = std::max({xmax, c.from.x, c.to.x});
      }
      // Projected multiplicities of the torus regions.
      Bigon b;
      int orient = 0;
      bool positive = true;
      for (const auto& reg : regs) {
        const Mark& m = reg.front();
        Int total = 0;
        for (Int s = checked::floor_div(xmin - m.gap, d.p) - 1; m.gap + d.p * s <= xmax && positive; ++s) {
          Int x2 = 2 * (m.gap + d.p * s) + 1;
          if (x2 < 2 * xmin) continue;
          for (Int strip = smin; strip <= smax; ++strip) {
            int v = loop.winding(x2, strip, m.side == Side::Minus);
            if (v == 0) continue;
            if (orient == 0) orient = v > 0 ? 1 : -1;
            if (v * orient < 0) positive = false;
            total += v;
          }
        }
        if (!positive) break;
        b.multiplicity.push_back(total * (orient ? orient : 1));
      }
      if (!positive || orient == 0) continue;
      // Maslov index times four: Euler measure of the domain plus the
      // point measures at both corners, counted over every lift.
      Int mu4 = 0;
      for (std::size_t r = 0; r < regs.size(); ++r)
        mu4 += b.multiplicity[r] * (4 - 2 * static_cast<Int>(regs[r].size()));
      for (Int corner : {pi.x, pj.x}) {
        Int base = mod(corner, d.p);
        for (Int s = checked::floor_div(xmin - base, d.p); base + d.p * s <= xmax; ++s)
          for (Int l = smin; l <= smax + 1; ++l) mu4 += orient * loop.quadrants(base + d.p * s, l);
      }
      if (mu4 != 4) continue;
      int ci = orient;
      std::size_t gi = static_cast<std::size_t>(i), gj = static_cast<std::size_t>(j % d.p);
      if (ci > 0) {
        b.source = gj;
        b.target = gi;
      } else {
        b.source = gi;
        b.target = gj;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::vector<GroupElem> generator_classes(const Walk& w, const KnotHomology& h) {
  std::vector<GroupElem> out;
  const Int line0 = w.path.points[0].line;
  for (const BetaPoint& b : w.path.points) out.push_back(h.from_bc(FinAbGroup::free(2).make({b.line - line0, b.delta})));
  return out;
}

GroupRingElem raw_chi(const FloerComplex& c) {
  GroupRingElem x(c.group);
  for (const Generator& g : c.generators) x.add_term(g.h1_class, g.sign);
  return x;
}

std::optional<CanonicalForm> try_canonical(const GroupRingElem& x, const GroupElem& m) {
  try {
    return canonical_rep(x, m);
  } catch (const NotSymmetrizable&) {
    return std::nullopt;
  }
}

int rank_f2(std::vector<std::vector<int>> a) {
  int rank = 0;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows && !a[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != static_cast<std::size_t>(rank) && a[r][c])
        for (std::size_t k = 0; k < cols; ++k) a[r][k] ^= a[static_cast<std::size_t>(rank)][k];
    ++rank;
  }
  return rank;
}

FloerComplex build_complex(const OneOneDiagram& d, const Walk& w, const std::vector<Bigon>& bigons,
                           const std::vector<std::vector<Mark>>& regs) {
  KnotHomology h = knot_complement_homology(d);
  FloerComplex c{h.group, h.meridian, {}, {}};
  auto classes = generator_classes(w, h);
  for (std::size_t k = 0; k < w.path.points.size(); ++k)
    c.generators.push_back({mod(w.path.points[k].x, d.p), w.path.points[k].sign, classes[k], 0});
  auto find = [&](const Mark& m) {
    for (std::size_t r = 0; r < regs.size(); ++r)
      if (std::binary_search(regs[r].begin(), regs[r].end(), m)) return r;
    throw DiagramError("range", "mark is not adjacent to alpha");
  };
  std::size_t rz = find(d.z), rw = find(d.w);
  std::size_t n = c.generators.size();
  c.differential.assign(n, std::vector<int>(n, 0));
  for (const Bigon& b : bigons)
    if (b.multiplicity[rz] == 0 && b.multiplicity[rw] == 0) c.differential[b.target][b.source] ^= 1;
  auto canon = try_canonical(raw_chi(c), c.meridian);
  int eps = canon ? canon->sign : 1;
  for (Generator& g : c.generators) g.z2 = g.sign * eps > 0 ? 0 : 1;
  return c;
}

}  // namespace

FloerComplex differential(const OneOneDiagram& d, BigonOptions opts) {
  validate(d);
  Walk w = walk(d);
  return build_complex(d, w, find_bigons(d, w, opts), trace_regions(d));
}

std::vector<int> z2_grading(const OneOneDiagram& d) {
  std::vector<int> out;
  for (const BetaPoint& b : trace_beta(d).points) out.push_back(b.sign);
  return out;
}

GroupElem relative_h1_grading(const OneOneDiagram& d, std::size_t x, std::size_t y) {
  KnotHomology h = knot_complement_homology(d);
  Walk w = walk(d);
  auto cls = generator_classes(w, h);
  return h.group.sub(cls.at(y), cls.at(x));
}

std::map<GroupElem, Int> homology_dimensions(const FloerComplex& c) {
  std::map<GroupElem, std::vector<std::size_t>> by_class;
  for (std::size_t k = 0; k < c.generators.size(); ++k) by_class[c.generators[k].h1_class].push_back(k);
  std::map<GroupElem, Int> out;
  for (const auto& [cls, idx] : by_class) {
    std::vector<std::vector<int>> sub(idx.size(), std::vector<int>(idx.size(), 0));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t s = 0; s < idx.size(); ++s) sub[r][s] = c.differential[idx[r]][idx[s]];
    Int dim = static_cast<Int>(idx.size()) - 2 * rank_f2(sub);
    if (dim > 0) out[cls] = dim;
  }
  return out;
}

namespace {

EulerCharResult summarize(const FloerComplex& c) {
  EulerCharResult r;
  r.raw = raw_chi(c);
  r.chi = PmClass(r.raw);
  r.canonical = try_canonical(r.raw, c.meridian);
  r.names = RingNames::defaults(c.group);
  for (const auto& [cls, dim] : homology_dimensions(c)) {
    r.total_dimension += dim;
    if (r.canonical) {
      const FinAbGroup& g = r.canonical->value.group();
      GroupElem e = r.canonical->lattice ? r.canonical->lattice->embed(cls) : cls;
      r.hfk_table[g.add(e, r.canonical->translation)] += dim;
    } else {
      r.hfk_table[cls] += dim;
    }
  }
  if (r.canonical && r.canonical->lattice) r.names = r.canonical->lattice->names;
  return r;
}

}  // namespace

EulerCharResult euler_char(const OneOneDiagram& d) { return summarize(differential(d)); }

KhiCertificate khi_certificate(const OneOneDiagram& d) {
  EulerCharResult e = euler_char(d);
  KhiCertificate k;
  k.upper = e.total_dimension;
  k.lower = e.raw.norm().as_integer();
  k.certified = k.upper == k.lower;
  return k;
}

namespace {

// Arc through the lifted points X1 (at `a`) and X2 (at `b`), with the start
// shifted into [0, p).
Arc arc_from_lifts(Int p, Side a, Int x1, Side b, Int x2) {
  Int off = p * checked::floor_div(x1, p);
  x2 -= off;
  return {{a, x1 - off}, {b, mod(x2, p)}, checked::floor_div(x2, p)};
}

Arc oriented(Int p, const Arc& a) {
  if (a.start < a.end) return a;
  return arc_from_lifts(p, a.end.side, a.end.pos + p * a.winding, a.start.side, a.start.pos);
}

std::vector<Arc> normalized(Int p, std::vector<Arc> arcs) {
  for (Arc& a : arcs) a = oriented(p, a);
  std::sort(arcs.begin(), arcs.end());
  return arcs;
}

bool pair_crosses(Int p, const Arc& a, const Arc& b, bool same) {
  OneOneDiagram d;
  d.p = p;
  auto [a1, a2] = arc_lift(d, a, 0);
  auto [b1, b2] = arc_lift(d, b, 0);
  auto [alo, ahi] = x_range(a1, a2);
  auto [blo, bhi] = x_range(b1, b2);
  for (Int s = checked::floor_div(alo - bhi, p) - 1; s <= checked::floor_div(ahi - blo, p) + 1; ++s) {
    if (same && s == 0) continue;
    if (chords_cross(a1, a2, {b1.side, b1.x + p * s}, {b2.side, b2.x + p * s})) return true;
  }
  return false;
}

void emit_with_marks(OneOneDiagram d, const std::function<void(const OneOneDiagram&)>& f) {
  auto regs = trace_regions(d);
  if (regs.size() == 1) {
    d.z = d.w = regs[0].front();
    f(d);
    return;
  }
  for (std::size_t a = 0; a < regs.size(); ++a)
    for (std::size_t b = 0; b < regs.size(); ++b) {
      if (a == b) continue;
      d.z = regs[a].front();
      d.w = regs[b].front();
      f(d);
    }
}

}  // namespace

OneOneDiagram rotate(const OneOneDiagram& d, Int r) {
  OneOneDiagram out = d;
  for (Arc& a : out.arcs)
    a = arc_from_lifts(d.p, a.start.side, a.start.pos + r, a.end.side, a.end.pos + d.p * a.winding + r);
  out.z.gap = mod(d.z.gap + r, d.p);
  out.w.gap = mod(d.w.gap + r, d.p);
  return out;
}

OneOneDiagram simple_knot(Int p, Int q, Int k) {
  if (p < 1) throw DiagramError("range", "p must be at least 1");
  OneOneDiagram d;
  d.p = p;
  for (Int i = 0; i < p; ++i)
    d.arcs.push_back({{Side::Minus, i}, {Side::Plus, mod(i + q, p)}, checked::floor_div(i + q, p)});
  d.z = {0, Side::Minus};
  d.w = {mod(k, p), Side::Minus};
  validate(d);
  return d;
}

void enumerate_diagrams(Int p, const std::function<void(const OneOneDiagram&)>& f) {
  if (p < 1) return;
  std::vector<Endpoint> ends;
  for (Side s : {Side::Minus, Side::Plus})
    for (Int i = 0; i < p; ++i) ends.push_back({s, i});
  std::vector<bool> used(ends.size(), false);
  std::vector<Arc> arcs;
  std::function<void()> rec = [&]() {
    std::size_t e = 0;
    while (e < ends.size() && used[e]) ++e;
    if (e == ends.size()) {
      OneOneDiagram d;
      d.p = p;
      d.arcs = arcs;
      Walk w = walk(d);
      if (!w.closed || w.path.shift_line == 0) return;
      for (Int r = 1; r < p; ++r)
        if (normalized(p, rotate(d, r).arcs) < arcs) return;
      emit_with_marks(d, f);
      return;
    }
    used[e] = true;
    for (std::size_t g = e + 1; g < ends.size(); ++g) {
      if (used[g]) continue;
      used[g] = true;
      for (Int wind = -1; wind <= 1; ++wind) {
        Arc a{ends[e], ends[g], wind};
        if (pair_crosses(p, a, a, true)) continue;
        bool ok = true;
        for (const Arc& b : arcs)
          if (pair_crosses(p, a, b, false)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        arcs.push_back(a);
        rec();
        arcs.pop_back();
      }
      used[g] = false;
    }
    used[e] = false;
  };
  rec();
}

namespace {

// A random row of p boundary points: c nested cap pairs and t through points,
// all through points at depth zero. Returns cap index pairs (a < b) and the
// through indices in order.
struct Row {
  std::vector<std::pair<Int, Int>> caps;
  std::vector<Int> through;
};

Row random_row(std::mt19937& rng, Int c, Int t) {
  std::vector<int> dyck;
  for (;;) {
    dyck.assign(static_cast<std::size_t>(c), 1);
    dyck.insert(dyck.end(), static_cast<std::size_t>(c), -1);
    std::shuffle(dyck.begin(), dyck.end(), rng);
    int depth = 0;
    bool ok = true;
    for (int v : dyck) ok = ok && (depth += v) >= 0;
    if (ok) break;
  }
  // Top-level block boundaries are the slots for through points.
  std::vector<std::size_t> slots{0};
  int depth = 0;
  for (std::size_t i = 0; i < dyck.size(); ++i)
    if ((depth += dyck[i]) == 0) slots.push_back(i + 1);
  std::vector<std::size_t> bars_at(slots.size(), 0);
  for (Int k = 0; k < t; ++k) ++bars_at[rng() % slots.size()];
  std::vector<int> seq;  // 1 open, -1 close, 0 through
  for (std::size_t s = 0; s < slots.size(); ++s) {
    seq.insert(seq.end(), bars_at[s], 0);
    if (s + 1 < slots.size())
      for (std::size_t i = slots[s]; i < slots[s + 1]; ++i) seq.push_back(dyck[i]);
  }
  Row row;
  std::vector<Int> stack;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Int idx = static_cast<Int>(i);
    if (seq[i] == 0) row.through.push_back(idx);
    else if (seq[i] > 0) stack.push_back(idx);
    else {
      row.caps.push_back({stack.back(), idx});
      stack.pop_back();
    }
  }
  return row;
}

}  // namespace

OneOneDiagram random_diagram(std::mt19937& rng, Int p) {
  if (p < 1) throw DiagramError("range", "p must be at least 1");
  for (;;) {
    Int c = static_cast<Int>(rng() % static_cast<unsigned>((p - 1) / 2 + 1));
    Int t = p - 2 * c;
    Row bottom = random_row(rng, c, t), top = random_row(rng, c, t);
    Int rb = static_cast<Int>(rng() % static_cast<unsigned>(p)), rt = static_cast<Int>(rng() % static_cast<unsigned>(p));
    Int twist = static_cast<Int>(rng() % static_cast<unsigned>(4 * t + 1)) - 2 * t;
    OneOneDiagram d;
    d.p = p;
    for (auto [a, b] : bottom.caps) d.arcs.push_back(arc_from_lifts(p, Side::Minus, a + rb, Side::Minus, b + rb));
    for (auto [a, b] : top.caps) d.arcs.push_back(arc_from_lifts(p, Side::Plus, a + rt, Side::Plus, b + rt));
    for (Int i = 0; i < t; ++i) {
      Int k = i + twist;
      Int u = top.through[static_cast<std::size_t>(mod(k, t))] + rt + p * checked::floor_div(k, t);
      d.arcs.push_back(arc_from_lifts(p, Side::Minus, bottom.through[static_cast<std::size_t>(i)] + rb, Side::Plus, u));
    }
    d.arcs = normalized(p, d.arcs);
    Walk w = walk(d);
    if (!w.closed || w.path.shift_line == 0) continue;
    auto regs = trace_regions(d);
    if (regs.size() == 1) {
      d.z = d.w = regs[0].front();
    } else {
      std::size_t a = rng() % regs.size(), b = (a + 1 + rng() % (regs.size() - 1)) % regs.size();
      d.z = regs[a][rng() % regs[a].size()];
      d.w = regs[b][rng() % regs[b].size()];
    }
    if (is_valid(d)) return d;
  }
}

}  // namespace sutured
