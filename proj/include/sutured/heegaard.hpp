#pragma once

// Doubly pointed genus one Heegaard diagrams in the annulus model and their
// knot Floer complexes.
//
// Cutting the torus along alpha leaves an annulus; its universal cover is the
// strip R x [0,1] with side - at the bottom and side + at the top. Beta is a
// family of p disjoint chords in the strip, one per arc, periodic under
// x -> x + p. Gluing the top of a strip to the bottom of the next (no twist)
// gives the universal cover of the torus, where alpha lifts to the lines y = n.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sutured/fox.hpp"
#include "sutured/group_ring.hpp"

namespace sutured {

enum class Side { Minus, Plus };

struct Endpoint {
  Side side = Side::Minus;
  Int pos = 0;
  auto operator<=>(const Endpoint&) const = default;
};

/// Chord from `start` (lifted at x = start.pos) to `end` (lifted at
/// x = end.pos + p * winding).
struct Arc {
  Endpoint start;
  Endpoint end;
  Int winding = 0;
  auto operator<=>(const Arc&) const = default;
};

/// The complementary region touching alpha along gap `gap` (between
/// positions gap and gap + 1) from side `side`.
struct Mark {
  Int gap = 0;
  Side side = Side::Minus;
  auto operator<=>(const Mark&) const = default;
};

struct OneOneDiagram {
  Int p = 1;
  std::vector<Arc> arcs;
  Mark z;
  Mark w;

  static OneOneDiagram parse(std::string_view text);
  std::string to_string() const;
  bool operator==(const OneOneDiagram&) const = default;
};

class DiagramError : public Error {
 public:
  DiagramError(std::string invariant, const std::string& what)
      : Error("DiagramError", invariant + ": " + what), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Throws DiagramError naming the first violated invariant: range, matching,
/// embedding, connected, homology, marks.
void validate(const OneOneDiagram& d);
bool is_valid(const OneOneDiagram& d);

/// Complementary regions as lists of (gap, side) pairs touching them.
std::vector<std::vector<Mark>> regions(const OneOneDiagram& d);
/// Index into regions(d) of the region containing a mark.
std::size_t region_of(const OneOneDiagram& d, const Mark& m);

/// One period of beta traversed from position 0 leaving into the strip above.
struct BetaPoint {
  Int x = 0;     // lifted position on its alpha line
  Int line = 0;  // which lift of alpha
  int sign = 1;  // +1 when beta leaves upward
  Int delta = 0; // signed crossings with delta accumulated before this point
};

struct BetaPath {
  std::vector<BetaPoint> points;  // p points
  Int shift_x = 0;                // lift displacement after one period
  Int shift_line = 0;             // algebraic intersection of alpha and beta
  Int delta_total = 0;            // algebraic intersection of beta and delta
};

BetaPath trace_beta(const OneOneDiagram& d);

struct KnotHomology {
  FinAbGroup group;     // H1 of the knot complement
  GroupElem meridian;
  GroupHom from_bc;     // Z<b, c> -> group
  Int h1_order = 0;     // |H1(Y)|
};

KnotHomology knot_complement_homology(const OneOneDiagram& d);

struct Generator {
  Int position = 0;  // on alpha
  int sign = 1;      // local intersection sign
  GroupElem h1_class;
  int z2 = 0;        // 0 or 1
};

struct FloerComplex {
  FinAbGroup group;
  GroupElem meridian;
  std::vector<Generator> generators;         // in beta order starting at position 0
  std::vector<std::vector<int>> differential; // [target][source] over F2
};

struct BigonOptions {
  /// Multiplier on the search bound along beta.
  Int bound_factor = 1;
};

FloerComplex differential(const OneOneDiagram& d, BigonOptions opts = {});

/// Local intersection signs in generator order.
std::vector<int> z2_grading(const OneOneDiagram& d);

/// Class of the one-cycle from generator x to generator y.
GroupElem relative_h1_grading(const OneOneDiagram& d, std::size_t x, std::size_t y);

/// Generator counts per class minus twice the rank of the differential there.
std::map<GroupElem, Int> homology_dimensions(const FloerComplex& c);

struct EulerCharResult {
  GroupRingElem raw;                       // sum sign * class
  PmClass chi;
  std::optional<CanonicalForm> canonical;  // unset when not symmetrizable
  std::map<GroupElem, Int> hfk_table;      // keyed in the canonical group when set
  Int total_dimension = 0;
  RingNames names;                         // for printing canonical values
};

EulerCharResult euler_char(const OneOneDiagram& d);

struct KhiCertificate {
  Int upper = 0;
  Int lower = 0;
  bool certified = false;
};

KhiCertificate khi_certificate(const OneOneDiagram& d);

/// <b, c | beta word> with meridian c: the knot group read along beta.
GroupPresentation knot_group_presentation(const OneOneDiagram& d);

/// Relabels positions by i -> i + r mod p.
OneOneDiagram rotate(const OneOneDiagram& d, Int r);

/// The simple knot in L(p, q) with basepoints k gaps apart.
OneOneDiagram simple_knot(Int p, Int q, Int k);

/// Every valid diagram with p points, arc windings in [-1, 1] and marks in
/// distinct regions, up to rotation. Calls f for each.
void enumerate_diagrams(Int p, const std::function<void(const OneOneDiagram&)>& f);

/// A random valid diagram with p points built from cap systems and a twisted
/// band of through arcs.
OneOneDiagram random_diagram(std::mt19937& rng, Int p);

}  // namespace sutured
