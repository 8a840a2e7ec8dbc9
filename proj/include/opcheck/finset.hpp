#pragma once

// The skeleton of finite pointed sets and the structure the rest of the
// workbench is built on: map enumeration, inert/active classification,
// inert-active factorization, and cubes of inert restriction maps.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace opcheck {

// <n> has elements {*, 1, .., n}. Elements are encoded as int, with 0
// standing for the basepoint *. S° denotes the non-basepoint part {1..n}.
struct PointedSet {
  int arity = 0;

  int size() const { return arity + 1; }
  bool contains(int x) const { return 0 <= x && x <= arity; }
  std::string name() const;

  auto operator<=>(const PointedSet&) const = default;
};

// A basepoint-preserving map <m> -> <n>, stored as the image tuple of 1..m.
struct PointedMap {
  int src_arity = 0;
  int tgt_arity = 0;
  std::vector<int> img;  // img[i-1] = f(i), each in 0..tgt_arity

  int operator()(int x) const { return x == 0 ? 0 : img[static_cast<size_t>(x) - 1]; }
  PointedSet source() const { return {src_arity}; }
  PointedSet target() const { return {tgt_arity}; }
  bool well_formed() const;

  static PointedMap identity(int n);

  auto operator<=>(const PointedMap&) const = default;
};

// g∘f. Throws std::invalid_argument if f's target does not match g's source.
PointedMap compose(const PointedMap& g, const PointedMap& f);

// All pointed maps S -> T, each exactly once, lexicographic on image tuples.
std::vector<PointedMap> enumerate_maps(PointedSet S, PointedSet T);

struct MapClass {
  bool inert = false;   // every fiber over 1..n is a singleton
  bool active = false;  // the fiber over * is exactly {*}
};
MapClass classify(const PointedMap& f);

// f = active_part ∘ inert_part with the intermediate object (f^{-1}(T°))_+,
// relabeled 1..k preserving the numeric order of the surviving elements.
struct Factorization {
  PointedMap inert_part;
  PointedMap active_part;
};
Factorization factorize(const PointedMap& f);

// The inert generator rho^i : <n> -> <1> with singleton fiber {i}.
PointedMap rho(int n, int i);

// Subsets of S° as bitmasks: bit (i-1) set means element i is in the set.
int subset_size(std::uint32_t mask);
std::vector<int> subset_elements(std::uint32_t mask);
std::string subset_to_string(std::uint32_t mask);  // "1,3" ; "" for the empty set

// The cube of inert restriction maps on subsets of S°, ordered by reverse
// inclusion: an edge V -> V' exists for each V' ⊆ V and carries the inert
// map V_+ -> V'_+ that keeps V' and kills V \ V'.
struct CubeDiagram {
  int ambient_arity = 0;
  std::vector<std::uint32_t> vertices;  // canonical order: larger sets first

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t index_of(std::uint32_t mask) const;  // throws if absent
  PointedSet vertex_set(std::uint32_t mask) const;
  PointedMap edge_map(std::uint32_t from, std::uint32_t to) const;  // to ⊆ from
  // All strict inclusions (from, to), to ⊊ from, in canonical vertex order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;
};

CubeDiagram inert_cube(PointedSet S);

// Restriction to { V : U1 ⊆ V ⊆ U2 }. Throws std::invalid_argument if
// U1 ⊄ U2 or the bounds are not vertices of the ambient cube.
CubeDiagram subcube(const CubeDiagram& cube, std::uint32_t u1, std::uint32_t u2);

// Textual notation "<m>-><n>:i1,...,im" with 0 for the basepoint,
// e.g. "2->1:1,0" is rho^1. An empty list is written "0->3:".
std::string to_string(const PointedMap& f);
PointedMap parse_pointed_map(const std::string& text);  // throws std::invalid_argument

}  // namespace opcheck
