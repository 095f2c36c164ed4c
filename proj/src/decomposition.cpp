#include "sutured/decomposition.hpp"

#include <set>

namespace sutured {

namespace {

const GroupElem& meridian_of(const EnhancedChi& e) {
  if (!e.meridian) throw InvalidInput("a meridian class is required");
  return *e.meridian;
}

// k with g = base + k m, for g in the coset of base.
Int exponent_along(const FinAbGroup& h, const GroupElem& m, const GroupElem& base, const GroupElem& g) {
  GroupElem diff = h.sub(g, base);
  for (std::size_t i = 0; i < m.free_part.size(); ++i)
    if (m.free_part[i] != 0) {
      Int k = diff.free_part[i] / m.free_part[i];
      if (!(h.scale(m, k) == diff)) break;
      return k;
    }
  throw InvalidInput("element is not in the meridian coset");
}

GroupElem coset_rep(const Quotient& q, const FinAbGroup& h, const GroupElem& cls) {
  IntVector c = cls.coords();
  IntVector acc(h.dim(), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j) acc[j] = checked::add(acc[j], checked::mul(c[i], q.lift(i, j)));
  return h.make(acc);
}

}  // namespace

DecompositionReport report(const EnhancedChi& e) {
  const GroupRingElem& x = e.value();
  DecompositionReport r;
  r.norm_en = x.norm();
  r.chi_gr = pushforward(x, free_projection(x.group()));
  r.norm_gr = r.chi_gr.norm();
  r.per_torsion = coset_split(x, torsion_projection(x.group()));
  return r;
}

BoundCheck bound_chain(Int dim, const EnhancedChi& e) {
  DecompositionReport r = report(e);
  BoundCheck b;
  Int d2 = checked::mul(dim, 2);
  b.tight_first = d2 == r.norm_en.twice;
  b.tight_second = r.norm_en == r.norm_gr;
  if (d2 < r.norm_en.twice) {
    b.ok = false;
    b.failing = "first";
  } else if (r.norm_en.twice < r.norm_gr.twice) {
    b.ok = false;
    b.failing = "second";
  }
  return b;
}

std::vector<CosetDifference> difference_test(const EnhancedChi& chi1, const EnhancedChi& chi2) {
  if (!(chi1.group == chi2.group)) throw GroupMismatch("difference_test needs a common group");
  const GroupElem& m = meridian_of(chi1);
  if (!(meridian_of(chi2) == m)) throw GroupMismatch("difference_test needs a common meridian class");
  const FinAbGroup& h = chi1.group;
  GroupRingElem diff = chi1.value() - chi2.value();
  Quotient q = quotient_by_element(h, m);
  std::set<GroupElem> cosets;
  if (q.group.is_finite()) {
    for (const GroupElem& c : q.group.elements()) cosets.insert(c);
  } else {
    for (const GroupRingElem* x : {&chi1.value(), &chi2.value()})
      for (const auto& [c, part] : coset_split(*x, q.hom)) cosets.insert(c);
  }
  auto parts = coset_split(diff, q.hom);
  FinAbGroup z = FinAbGroup::free(1);
  std::vector<CosetDifference> out;
  for (const GroupElem& c : cosets) {
    CosetDifference cd{c, true, GroupRingElem(z), coset_rep(q, h, c)};
    auto it = parts.find(c);
    if (it != parts.end() && !it->second.is_zero()) {
      auto quot = divide_exact(it->second, m, 2);
      if (!quot) {
        cd.divisible = false;
      } else {
        std::map<Int, Int> laurent;
        for (const auto& [g, twice] : quot->twice_terms()) laurent[exponent_along(h, m, cd.h, g)] += twice;
        Int low = laurent.begin()->first;
        for (const auto& [k, twice] : laurent) cd.f.add_twice(z.make({k - low}), twice);
        cd.h = h.add(cd.h, h.scale(m, low));
      }
    }
    out.push_back(std::move(cd));
  }
  return out;
}

std::string Verdict::to_string() const {
  switch (kind) {
    case Kind::Unknot: return "Unknot";
    case Kind::GenusOneFibred: return "GenusOneFibred";
    case Kind::FibredGenusN:
      return "FibredGenusN(" + std::to_string(genus) + ")" + (excluded_by_nonvanishing ? " excluded-by-nonvanishing" : "");
    case Kind::Inconsistent: return "Inconsistent(" + reason + ")";
    case Kind::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

Verdict inconsistent(std::string why) {
  Verdict v;
  v.kind = Verdict::Kind::Inconsistent;
  v.reason = std::move(why);
  return v;
}

void check_structure(const DetectionInput& in) {
  const FinAbGroup& h = in.group;
  if (!h.contains(in.meridian) || !h.has_infinite_order(in.meridian))
    throw InvalidInput("the meridian must be an element of infinite order");
  if (static_cast<Int>(in.cosets.size()) != in.h1_order)
    throw InvalidInput("expected one coset entry per element of H1(Y)");
  Quotient q = quotient_by_element(h, in.meridian);
  if (q.group.is_finite() && q.group.torsion_order() != in.h1_order)
    throw InvalidInput("|H1(Y)| does not match the group and meridian");
  std::set<GroupElem> seen;
  for (const CosetData& c : in.cosets) {
    if (c.dim < 0) throw InvalidInput("negative dimension");
    if (!(c.chi.group() == h)) throw InvalidInput("coset element over the wrong group");
    GroupElem cls = q.hom(c.s);
    if (!seen.insert(cls).second) throw InvalidInput("two entries for the same coset");
    for (const auto& g : c.chi.support())
      if (!(q.hom(g) == cls)) throw InvalidInput("coset element leaves its coset");
  }
}

// m^n - 1 + m^-n, or 0 when y has another shape.
Int symmetric_trinomial(const FinAbGroup& h, const GroupElem& m, const GroupRingElem& y) {
  if (y.size() != 3 || y.coeff(h.identity()) != Half::of(-1)) return 0;
  for (const GroupElem& g : y.support()) {
    if (g.is_identity()) continue;
    Int n = exponent_along(h, m, h.identity(), g);
    if (n < 0) n = -n;
    GroupRingElem want = GroupRingElem::monomial(h, h.scale(m, n)) - GroupRingElem::one(h) +
                         GroupRingElem::monomial(h, h.scale(m, -n));
    return want == y ? n : 0;
  }
  return 0;
}

}  // namespace

Verdict classify(const DetectionInput& in, ClassifyOptions opts) {
  check_structure(in);
  const FinAbGroup& h = in.group;
  Int total = 0;
  for (const CosetData& c : in.cosets) {
    Half n = c.chi.norm();
    if (n.twice > 2 * c.dim || (n.twice / 2 - c.dim) % 2 != 0 || !n.is_integer()) return inconsistent("parity");
    total += c.dim;
  }
  for (const CosetData& c : in.cosets) {
    if (c.chi.is_zero()) return inconsistent("divisibility");
    try {
      if (!divide_exact(c.chi - GroupRingElem::monomial(h, c.s), in.meridian, 2)) return inconsistent("divisibility");
    } catch (const NotRepresentable&) {
      return inconsistent("divisibility");
    }
  }
  bool all_one = true;
  for (const CosetData& c : in.cosets) all_one = all_one && c.dim == 1;
  Verdict v;
  if (all_one) {
    v.kind = Verdict::Kind::Unknot;
    return v;
  }
  if (total != in.h1_order + 2) return v;
  const CosetData* top = nullptr;
  for (const CosetData& c : in.cosets) {
    if (c.dim == 3 && !top) top = &c;
    else if (c.dim != 1) return v;
  }
  if (!top) return v;
  Half n = top->chi.norm();
  if (n == Half::of(1)) return inconsistent("symmetry");
  if (n != Half::of(3)) return v;
  Int genus = symmetric_trinomial(h, in.meridian, top->chi.translate(h.neg(top->s)));
  if (genus == 0) return inconsistent("symmetry");
  if (genus == 1) {
    v.kind = Verdict::Kind::GenusOneFibred;
    v.genus = 1;
    return v;
  }
  if (opts.apply_next_to_top) return inconsistent("next-to-top");
  v.kind = Verdict::Kind::FibredGenusN;
  v.genus = genus;
  v.excluded_by_nonvanishing = true;
  return v;
}

DetectionInput detection_input(const GroupRingElem& chi, const std::map<GroupElem, Int>& dims,
                               const GroupElem& meridian) {
  const FinAbGroup& h = chi.group();
  Quotient q = quotient_by_element(h, meridian);
  if (!q.group.is_finite()) throw InvalidInput("H1(Y) must be finite");
  DetectionInput in{h, meridian, q.group.torsion_order(), {}};
  auto parts = coset_split(chi, q.hom);
  std::map<GroupElem, GroupElem> torsion_lift;
  for (const GroupElem& t : FinAbGroup(0, h.torsion_divisors()).elements()) {
    GroupElem e = h.make(IntVector(h.rank(), 0), t.torsion_part);
    torsion_lift.emplace(q.hom(e), e);
  }
  bool split = torsion_lift.size() == static_cast<std::size_t>(in.h1_order);
  for (const GroupElem& c : q.group.elements()) {
    CosetData d{coset_rep(q, h, c), 0, GroupRingElem(h)};
    if (auto it = parts.find(c); it != parts.end()) d.chi = it->second;
    for (const auto& [g, n] : dims)
      if (q.hom(g) == c) d.dim += n;
    if (split) {
      d.s = torsion_lift.at(c);
    } else if (!d.chi.is_zero()) {
      // f(1) = 1 and f'(1) = k give f = m^k mod (m - 1)^2.
      Int aug = 0, slope = 0;
      for (const auto& [g, twice] : d.chi.twice_terms()) {
        aug += twice / 2;
        slope += exponent_along(h, meridian, d.s, g) * (twice / 2);
      }
      if (aug == 1) d.s = h.add(d.s, h.scale(meridian, slope));
    }
    in.cosets.push_back(std::move(d));
  }
  return in;
}

}  // namespace sutured
