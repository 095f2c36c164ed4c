#pragma once

// Euler characteristic bookkeeping for sutured decompositions: norms and the
// graded projection, the dimension bound chain, the (m - 1)^2 divisibility of
// differences, and the unknot / genus one fibred classifiers.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sutured/group_ring.hpp"

namespace sutured {

struct EnhancedChi {
  FinAbGroup group;
  PmClass chi;                      // representative as supplied
  std::optional<GroupElem> meridian;

  EnhancedChi() = default;
  explicit EnhancedChi(GroupRingElem x, std::optional<GroupElem> m = std::nullopt)
      : group(x.group()), chi(std::move(x)), meridian(std::move(m)) {}
  const GroupRingElem& value() const noexcept { return chi.representative(); }
};

struct DecompositionReport {
  Half norm_en;
  GroupRingElem chi_gr;  // over H / Tors
  Half norm_gr;
  std::map<GroupElem, GroupRingElem> per_torsion;  // keyed by torsion class
};

DecompositionReport report(const EnhancedChi& e);

struct BoundCheck {
  bool ok = true;
  std::string failing;  // "first" (dim >= norm_en) or "second" (norm_en >= norm_gr)
  bool tight_first = false;
  bool tight_second = false;
};

BoundCheck bound_chain(Int dim, const EnhancedChi& e);

struct CosetDifference {
  GroupElem coset;         // class in H / <m>
  bool divisible = false;
  GroupRingElem f;         // Laurent polynomial in m over Z<t>, lowest exponent 0
  GroupElem h;             // base point: part = (m - 1)^2 f(m) h
};

/// chi1 - chi2 split along <m>-cosets, each tested for a factor (m - 1)^2.
/// Uses the representatives as given, so both should be normalized alike.
std::vector<CosetDifference> difference_test(const EnhancedChi& chi1, const EnhancedChi& chi2);

struct CosetData {
  GroupElem s;   // lift of the class in H1(Y) to H1(Y(K))
  Int dim = 0;
  GroupRingElem chi;
};

struct DetectionInput {
  FinAbGroup group;   // H1(Y(K))
  GroupElem meridian;
  Int h1_order = 1;   // |H1(Y)|
  std::vector<CosetData> cosets;
};

struct Verdict {
  enum class Kind { Unknot, GenusOneFibred, FibredGenusN, Inconsistent, Unknown };
  Kind kind = Kind::Unknown;
  Int genus = 0;
  std::string reason;             // set for Inconsistent
  bool excluded_by_nonvanishing = false;  // FibredGenusN with the next-to-top rule off

  std::string to_string() const;
};

struct ClassifyOptions {
  bool apply_next_to_top = true;
};

/// Splits chi and a class -> dimension table along <m>-cosets. Each coset is
/// lifted to its torsion element when H = Z m + Tors, else to the h with
/// chi_s = h mod (m - 1)^2 when one exists.
DetectionInput detection_input(const GroupRingElem& chi, const std::map<GroupElem, Int>& dims,
                               const GroupElem& meridian);

/// Throws InvalidInput on structurally malformed data.
Verdict classify(const DetectionInput& in, ClassifyOptions opts = {});

}  // namespace sutured
