#pragma once

// Finite commutative monoids acting on finite modules, evaluated in finite
// sets under cartesian product: each marked-set object becomes a set of
// assignments, each morphism a fold-then-act function, and pointed sets are
// carried in through the basepoint-marked embedding.

#include <string>
#include <vector>

#include <json.hpp>

#include "opcheck/envelope.hpp"
#include "opcheck/fincat.hpp"
#include "opcheck/finset.hpp"

namespace opcheck {

struct CommMonoid {
  std::vector<std::string> elems;
  int unit = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b]

  int size() const { return static_cast<int>(elems.size()); }
  int apply(int a, int b) const { return mult[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  int fold(const std::vector<int>& xs) const;
};

struct ModuleData {
  std::vector<std::string> elems;
  std::vector<std::vector<int>> action;  // action[e][m]

  int size() const { return static_cast<int>(elems.size()); }
  int apply(int e, int m) const { return action[static_cast<size_t>(e)][static_cast<size_t>(m)]; }
};

struct Algebra {
  std::string name;
  CommMonoid monoid;
  ModuleData module;
};

// Parses {"name": ..., "monoid": {elems, unit, mult}, "module": {elems, action}}.
// Throws std::invalid_argument on malformed or non-total tables.
Algebra load_algebra(const nlohmann::json& doc);

// Associativity, commutativity, unit, and the module laws, element by element.
Verdict check_algebra(const CommMonoid& E, const ModuleData& M);

// S as a marked set: the whole of S including the basepoint, which becomes
// the last carrier label and the unique mark.
FPlusObject embed_fstar(PointedSet S);
FPlusMorphism embed_fstar_map(const PointedMap& f);

// The value set of a marked-set object: one monoid factor per unmarked
// label, one module factor per marked label. Values are indexed in mixed
// radix with label 1 most significant.
struct SemSet {
  FPlusObject shape;
  std::vector<int> radix;  // per carrier label

  std::size_t size() const;
  std::vector<int> decode(std::size_t idx) const;
  std::size_t encode(const std::vector<int>& tuple) const;
};

SemSet eval_object(const Algebra& alg, const FPlusObject& x);

// Value table of a morphism: per unmarked target label the fold of the
// monoid entries over its fiber (unit for an empty fiber), per marked
// target label the action of that fold on the unique marked entry.
std::vector<std::size_t> eval_morphism(const Algebra& alg, const FPlusMorphism& f);

// The functor on the pointed-set truncation at N obtained by embedding and
// evaluating. arrow_table is indexed by the truncation's arrow indices.
struct SemFunctor {
  int bound = 0;
  Algebra algebra;
  FStarPtr base;
  std::vector<std::size_t> object_size;            // per arity 0..bound
  std::vector<std::vector<std::size_t>> arrow_table;
};

SemFunctor build_A(const Algebra& alg, int N);

// Identities preserved and A(g∘f) = A(g)∘A(f) pointwise on every input,
// over all composable pairs within the bound.
Verdict check_functoriality(const SemFunctor& A);

// The cube of values over the inert restrictions of (S, U): vertex V gets
// the assignments on (V, U∩V), edges project coordinates away. Checks the
// apex maps bijectively onto the product of the singleton-vertex values,
// and that for every nontrivial subcube the apex maps bijectively onto the
// limit of the punctured subcube.
Verdict check_inert_cube_limit(const Algebra& alg, PointedSet S, std::uint32_t marked);

}  // namespace opcheck
