#pragma once

// The two-colored operad of marked pointed sets: objects (S,U) with U a set
// of marked non-base elements, morphisms constrained so that each marked
// target element receives exactly one marked source element. Both readings
// of the constraint are first class: `literal` imposes nothing on marked
// elements over unmarked targets, `strengthened` forbids them.

#include <optional>
#include <string>
#include <vector>

#include "opcheck/fincat.hpp"
#include "opcheck/finset.hpp"

namespace opcheck {

enum class Variant { literal, strengthened };

const char* to_string(Variant v);
std::optional<Variant> parse_variant(const std::string& s);

struct CMObject {
  int arity = 0;
  std::uint32_t marked = 0;  // subset of 1..arity as a bitmask

  auto operator<=>(const CMObject&) const = default;
};

std::string to_string(const CMObject& o);  // "(2|1,2)"
CMObject parse_cm_object(const std::string& text);

// An object of the pointed-arrow category: a pointed map <1> -> S recorded
// by the element it picks out (0 when it picks the basepoint).
struct FoObject {
  int arity = 0;
  int point = 0;

  auto operator<=>(const FoObject&) const = default;
};

std::string to_string(const FoObject& o);  // "(2@1)"

// The morphism predicate. Throws std::invalid_argument when f's arities do
// not match the objects.
bool is_cm_morphism(const PointedMap& f, const CMObject& src, const CMObject& tgt,
                    Variant v);

struct CMMorphism {
  CMObject src;
  CMObject tgt;
  PointedMap map;
  Variant variant = Variant::strengthened;
};

// Target of the canonical cocartesian lift of an inert map: (T, f(U) ∩ T°).
CMObject canonical_cocartesian_target(const CMObject& src, const PointedMap& inert_f);

// The truncated total category fibered over the pointed-set truncation.
// Objects are ordered by (arity, marked mask); arrows by (source object,
// target object, underlying map in lexicographic order).
struct CMTruncation {
  int bound = 0;
  Variant variant = Variant::strengthened;
  FiberedCategory fib;
  std::vector<CMObject> object_data;

  std::optional<int> object_index(const CMObject& o) const;
  const CMObject& object_at(int idx) const { return object_data[static_cast<size_t>(idx)]; }
};

CMTruncation build_cm_truncation(int N, Variant v);

// Identities present and composites of valid morphisms valid, within the
// truncation at N.
Verdict closure_check(int N, Variant v);

// The two colors: a = (<1>,∅) carries the algebra, m = (<1>,{1}) the module.
enum class Color { a, m };
const char* to_string(Color c);
std::optional<Color> parse_color(const std::string& s);

// All active morphisms from (<n>, {i : inputs[i] = m}) to the output color,
// in map enumeration order.
std::vector<CMMorphism> mul_set(const std::vector<Color>& inputs, Color output,
                                Variant v);

// Fiber over <n> and the comparison functor into the n-fold product of the
// fiber over <1>, via the canonical cocartesian lifts over the rho^i.
struct SegalFiberResult {
  CategoryPtr fiber;
  CategoryPtr product;
  FunctorData comparison;
  Verdict construction;
};
SegalFiberResult segal_fiber(int n, Variant v, std::size_t ceiling = 200000);

// phi sends (S, j) to (S, {j(1)}) when j picks a non-base element and to
// (S, ∅) otherwise.
CMObject phi_embed(const FoObject& o);

// Exhaustive full-faithfulness of phi onto the |U| <= 1 objects at bound N:
// object bijectivity, hom-set equality pair by pair, and the requirement
// that morphisms with inert underlying map land on cocartesian edges.
Verdict phi_check(int N, Variant v);

}  // namespace opcheck
