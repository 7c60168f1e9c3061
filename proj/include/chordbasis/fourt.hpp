#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chordbasis/enumerate.hpp"

namespace chordbasis {

/// Which foot moves in a 4T instance built from an adjacent pair (a, b) of
/// feet on one circle, and whether the pair is interior to the circle's
/// block or wraps from its last foot to its first.
enum class Family : std::uint8_t {
  InteriorA,  // foot of a moves around the feet of b
  InteriorB,  // foot of b moves around the feet of a
  WrapA,
  WrapB,
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct Provenance {
  std::uint32_t source = 0;  // index of the generating diagram
  std::uint16_t circle = 0;
  std::uint16_t first = 0;   // positions within the circle block
  std::uint16_t second = 0;
  Family family = Family::InteriorA;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Term {
  std::uint32_t index = 0;
  std::int32_t coef = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// One 4T instance with equal diagrams merged.  Terms are sorted by index
/// and carry nonzero coefficients; a fully cancelled instance has no terms.
struct Relation {
  std::vector<Term> terms;
  Provenance provenance;

  bool empty() const { return terms.empty(); }
  friend bool operator==(const Relation&, const Relation&) = default;
};

struct RelationOptions {
  unsigned threads = 1;
};

/// All 4T instances generated from every diagram of `ds`, in the order
/// (diagram, circle, position, family A before B).  Works on any diagram set
/// closed under 4T moves; the connected sets are the ones used for bases.
std::vector<Relation> generate_relations(const DiagramSet& ds, const RelationOptions& opts = {});

/// True iff every diagram with a nonzero coefficient has the same circle
/// partition and the same chord count per component.
bool check_component_preservation(const Relation& rel, const DiagramSet& ds);

// --- relation file -------------------------------------------------------------

void write_relations(std::ostream& out, const DiagramSet& ds, const std::vector<Relation>& rows);

/// Reads a relation file and checks it is bound to `ds`.
std::vector<Relation> read_relations(std::istream& in, const DiagramSet& ds);

}  // namespace chordbasis
