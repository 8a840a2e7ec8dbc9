#pragma once

// A small engine for explicitly presented finite categories: functor and
// category validation, brute-force cocartesian-edge checks, and the
// 1-categorical operad conditions for categories fibered over a truncation
// of the pointed-set category.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opcheck/finset.hpp"

namespace opcheck {

// Outcome of a check. Failures carry a machine-readable code plus a
// structured witness; passes may carry informational counts.
struct Verdict {
  bool pass = true;
  std::string code;        // short tag, e.g. "assoc", "cond1"
  nlohmann::json witness;  // canonical minimal witness, null on pass
  nlohmann::json info;     // counts and sub-results, may be set either way

  static Verdict ok(nlohmann::json info = nullptr) {
    return Verdict{true, "", nullptr, std::move(info)};
  }
  static Verdict fail(std::string code, nlohmann::json witness,
                      nlohmann::json info = nullptr) {
    return Verdict{false, std::move(code), std::move(witness), std::move(info)};
  }
  explicit operator bool() const { return pass; }
  nlohmann::json to_json() const;
};

// Thrown when a constructed category would exceed the object/arrow ceiling
// (overridable through OPCHECK_CEILING).
struct CeilingExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Arrow {
  std::string name;
  int src = 0;
  int tgt = 0;
};

// Objects and arrows are referred to by index; composition is a partial
// function so that morphism classes that fail to be closed under
// composition can still be represented and reported on.
class FinCategory {
 public:
  using Composer = std::function<std::optional<int>(int g, int f)>;

  FinCategory() = default;

  // Table-backed category; entries are (f, g, g∘f) triples of arrow indices.
  static FinCategory from_table(std::vector<std::string> objects,
                                std::vector<Arrow> arrows,
                                std::vector<int> identities,
                                const std::vector<std::array<int, 3>>& comp);

  // Category whose composition is computed on demand.
  static FinCategory computed(std::vector<std::string> objects,
                              std::vector<Arrow> arrows,
                              std::vector<int> identities, Composer composer);

  int object_count() const { return static_cast<int>(objects_.size()); }
  const std::string& object_name(int o) const { return objects_[static_cast<size_t>(o)]; }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(int a) const { return arrows_[static_cast<size_t>(a)]; }
  int identity_of(int o) const { return identities_[static_cast<size_t>(o)]; }
  bool is_identity(int a) const;

  // g∘f, or nullopt when the pair is not composable or the composite is
  // missing from the arrow set.
  std::optional<int> compose(int g, int f) const;

  const std::vector<int>& arrows_from(int o) const { return out_[static_cast<size_t>(o)]; }
  const std::vector<int>& arrows_into(int o) const { return in_[static_cast<size_t>(o)]; }
  const std::vector<int>& arrows_between(int s, int t) const {
    return hom_[static_cast<size_t>(s)][static_cast<size_t>(t)];
  }

  // Versioned JSON document; materializes the composition table.
  nlohmann::json to_json() const;
  static FinCategory from_json(const nlohmann::json& doc);

 private:
  void build_indexes();

  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<int> identities_;
  Composer composer_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<std::vector<std::vector<int>>> hom_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

// Identity laws, totality of composition, endpoint compatibility and
// associativity, reported with the first violation in canonical order.
Verdict check_category(const FinCategory& c);

struct FunctorData {
  CategoryPtr source;
  CategoryPtr target;
  std::vector<int> object_map;  // indexed by source object
  std::vector<int> arrow_map;   // indexed by source arrow
};

FunctorData identity_functor(CategoryPtr c);

// Sources, targets, identities and composites preserved.
Verdict check_functor(const FunctorData& F);

// Pass iff object_map and arrow_map are bijections.
Verdict categories_isomorphic(const FunctorData& F);

// Full faithfulness plus brute-force essential surjectivity.
Verdict categories_equivalent(const FunctorData& F);

bool is_isomorphism(const FinCategory& c, int arrow);

// The truncation of the pointed-set category at a bound: objects <0>..<N>,
// arrows all pointed maps, with a dense composition table and the
// inert/active bookkeeping the operad checks need.
class FStarTruncation {
 public:
  explicit FStarTruncation(int bound);

  int bound() const { return data_->bound; }
  CategoryPtr category() const { return cat_; }
  int object_of(int arity) const { return arity; }
  int arity_of(int obj) const { return obj; }
  const PointedMap& map_of(int arrow) const {
    return data_->maps[static_cast<size_t>(arrow)];
  }
  std::optional<int> arrow_of(const PointedMap& f) const { return data_->arrow_of(f); }
  // Total; returns -1 when the pair is not composable.
  int compose_arrows(int g, int f) const { return data_->compose_arrows(g, f); }
  // Arrow indices of the hom block <src> -> <tgt>: [first, first+count).
  std::pair<int, int> hom_range(int src_arity, int tgt_arity) const;
  bool inert(int arrow) const { return data_->cls[static_cast<size_t>(arrow)].inert; }
  bool active(int arrow) const { return data_->cls[static_cast<size_t>(arrow)].active; }
  int rho_arrow(int n, int i) const;
  int identity_arrow(int arity) const;

 private:
  struct Data {
    int bound = 0;
    std::vector<PointedMap> maps;
    std::vector<MapClass> cls;
    std::vector<int> hom_offset;  // per (src,tgt) pair, offset of the lex block
    std::vector<int> comp;        // dense [g][f] composite table when small

    std::optional<int> arrow_of(const PointedMap& f) const;
    int compose_arrows(int g, int f) const;
  };
  std::shared_ptr<const Data> data_;
  CategoryPtr cat_;
};

using FStarPtr = std::shared_ptr<const FStarTruncation>;

// A finite category together with its projection to a pointed-set
// truncation. obj_over/arr_over index into the truncation's category.
struct FiberedCategory {
  CategoryPtr total;
  FStarPtr base;
  std::vector<int> obj_over;
  std::vector<int> arr_over;

  int base_of_object(int o) const { return obj_over[static_cast<size_t>(o)]; }
  int base_of_arrow(int a) const { return arr_over[static_cast<size_t>(a)]; }
  FunctorData projection() const;
};

// Exhaustive universal-property test: e is cocartesian iff every arrow out
// of its source whose projection factors through p(e) has a unique filler
// over the given base factor.
bool is_cocartesian_edge(const FiberedCategory& p, int e);

// Least arrow (in enumeration order) over base_arrow with source X that
// passes is_cocartesian_edge.
std::optional<int> choose_cocartesian_lift(const FiberedCategory& p, int X,
                                           int base_arrow);

struct OperadOptions {
  bool inert_only = false;         // restrict condition (2) to inert base maps
  bool up_to_equivalence = false;  // relax condition (3) to equivalence
  std::size_t ceiling = 200000;    // guard for constructed categories
};

// The three 1-categorical operad conditions: (1) cocartesian lifts of all
// inert base maps, (2) hom decomposition along the rho^i, (3) the fiber
// over <n> is the n-fold product of the fiber over <1> via the chosen
// lifts. Throws std::invalid_argument when the base bound is < 1.
Verdict check_operad_axioms(const FiberedCategory& p, const OperadOptions& opts = {});

// The fiber over <n>: objects over <n>, arrows over its identity.
struct FiberExtract {
  FinCategory cat;
  std::vector<int> object_ids;  // fiber object -> total object
  std::vector<int> arrow_ids;   // fiber arrow -> total arrow
};
FiberExtract fiber_over(const FiberedCategory& p, int arity);

// Fiber over <n> together with the comparison functor into the n-fold
// product of the fiber over <1>. `construction` records any failure while
// assembling the comparison (missing lift or non-unique component).
struct SegalComparison {
  CategoryPtr fiber;
  CategoryPtr product;
  FunctorData comparison;
  Verdict construction;
};
SegalComparison build_segal_comparison(const FiberedCategory& p, int n,
                                       std::size_t ceiling);

}  // namespace opcheck
