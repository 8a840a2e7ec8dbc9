#pragma once

// Marked finite sets and their disjoint-union fibration over the pointed-set
// category, the envelope of the marked-pointed-set operad built from triples
// (S, U, f : S° -> T), and the comparison functor between the two.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opcheck/cm_operad.hpp"
#include "opcheck/fincat.hpp"
#include "opcheck/finset.hpp"

namespace opcheck {

// A finite set {1..carrier} with a marked subset.
struct FPlusObject {
  int carrier = 0;
  std::uint32_t marked = 0;

  auto operator<=>(const FPlusObject&) const = default;
};

std::string to_string(const FPlusObject& o);  // "{1,2|1}"
FPlusObject parse_fplus_object(const std::string& text);

// img is total on 1..src.carrier with values in 1..tgt.carrier. Valid iff
// the restriction to the marked set is a bijection onto tgt's marked set.
bool is_fplus_morphism(const std::vector<int>& img, const FPlusObject& src,
                       const FPlusObject& tgt);

struct FPlusMorphism {
  FPlusObject src;
  FPlusObject tgt;
  std::vector<int> img;
};

// Concatenation in component order; elements records, per label of the
// result, which (component, label) pair it came from.
struct DisjointUnion {
  FPlusObject object;
  std::vector<std::pair<int, int>> elements;
};
DisjointUnion disjoint_union(const std::vector<FPlusObject>& parts);

// All valid morphisms src -> tgt in image-tuple lexicographic order.
std::vector<std::vector<int>> valid_fplus_maps(const FPlusObject& src,
                                               const FPlusObject& tgt);

// The disjoint-union fibration: objects over <n> are n-tuples of marked
// sets with each carrier bounded by carrier_bound (and, when set, total
// carrier across the tuple bounded by total_carrier_bound); an arrow over
// a base map assigns to each surviving target index a valid morphism from
// the disjoint union of the components above it.
struct FPlusFibration {
  int carrier_bound = 0;
  int shape_bound = 0;
  std::optional<int> total_carrier_bound;
  FiberedCategory fib;
  std::vector<std::vector<FPlusObject>> tuples;  // per total object

  struct ArrowData {
    std::vector<std::vector<int>> components;  // per target index
  };
  std::vector<ArrowData> arrows;

  std::optional<int> object_index(const std::vector<FPlusObject>& tuple) const;

 private:
  friend FPlusFibration build_fplus_over_fstar(int, int, std::size_t,
                                               std::optional<int>);
  std::map<std::vector<FPlusObject>, int> lookup_;
};

FPlusFibration build_fplus_over_fstar(int carrier_bound, int shape_bound,
                                      std::size_t ceiling = 200000,
                                      std::optional<int> total_carrier_bound = std::nullopt);

// An envelope object: a marked pointed set together with a total assignment
// of its non-base elements to a shape set {1..shape}. Canonical objects
// carry nondecreasing assignments; arbitrary assignments are accepted by
// comparison_on_objects.
struct EnvObject {
  CMObject cm;
  int shape = 0;
  std::vector<int> assign;  // size cm.arity, values in 1..shape

  auto operator<=>(const EnvObject&) const = default;
};

std::string to_string(const EnvObject& o);  // "(2|1)@2:1,2"
EnvObject parse_env_object(const std::string& text);

struct EnvArrowData {
  PointedMap u;          // map of marked pointed sets
  PointedMap shape_map;  // pointed map between the shapes' basepoint extensions
};

struct EnvTruncation {
  int bound = 0;
  int shape_bound = 0;
  Variant variant = Variant::strengthened;
  FiberedCategory fib;
  std::vector<EnvObject> objects;
  std::vector<EnvArrowData> arrows;

  std::optional<int> object_index(const EnvObject& o) const;
};

// Canonical envelope objects with |S°| <= N and |T| <= shape_bound, fibered
// over the shape truncation. An arrow is a valid morphism of marked pointed
// sets together with a base map of shapes making the assignment square
// commute in the pointed-set category.
EnvTruncation build_envelope(int N, int shape_bound, Variant v,
                             std::size_t ceiling = 200000);

// (S,U,f) |-> the tuple (f^{-1}(t), f^{-1}(t) ∩ U) over t in 1..shape, each
// fiber relabeled 1..k in source order.
std::vector<FPlusObject> comparison_on_objects(const EnvObject& e);

// Compares the envelope against the disjoint-union fibration restricted to
// tuples of total carrier <= N: hom-set cardinalities over every base
// arrow, then well-definedness and functoriality of the comparison, then a
// bijective check on objects and arrows. Witnesses are minimal in scan
// order; info carries object/arrow counts for both sides.
Verdict verify_envelope_iso(int N, int shape_bound, Variant v,
                            std::size_t ceiling = 200000);

}  // namespace opcheck
