#include "opcheck/cm_operad.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace opcheck {

const char* to_string(Variant v) {
  return v == Variant::literal ? "literal" : "strengthened";
}

std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "literal") return Variant::literal;
  if (s == "strengthened") return Variant::strengthened;
  return std::nullopt;
}

std::string to_string(const CMObject& o) {
  return "(" + std::to_string(o.arity) + "|" + subset_to_string(o.marked) + ")";
}

CMObject parse_cm_object(const std::string& text) {
  if (text.size() < 3 || text.front() != '(' || text.back() != ')')
    throw std::invalid_argument("object notation must look like \"(2|1,2)\": " + text);
  const auto bar = text.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("object notation must look like \"(2|1,2)\": " + text);
  CMObject o;
  try {
    o.arity = std::stoi(text.substr(1, bar - 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad arity in object notation: " + text);
  }
  if (o.arity < 0 || o.arity > 31)
    throw std::invalid_argument("arity out of range in object notation: " + text);
  std::string marks = text.substr(bar + 1, text.size() - bar - 2);
  if (!marks.empty()) {
    std::stringstream ss(marks);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      int e = 0;
      try {
        e = std::stoi(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad marked element in object notation: " + text);
      }
      if (e < 1 || e > o.arity)
        throw std::invalid_argument("marked element out of range: " + text);
      o.marked |= 1u << (e - 1);
    }
  }
  return o;
}

std::string to_string(const FoObject& o) {
  return "(" + std::to_string(o.arity) + "@" + std::to_string(o.point) + ")";
}

bool is_cm_morphism(const PointedMap& f, const CMObject& src, const CMObject& tgt,
                    Variant v) {
  if (f.src_arity != src.arity || f.tgt_arity != tgt.arity)
    throw std::invalid_argument("is_cm_morphism: map does not match object bases");
  // Count marked sources per non-base target element.
  for (int t = 1; t <= tgt.arity; ++t) {
    int marked_hits = 0;
    for (int s = 1; s <= src.arity; ++s)
      if ((src.marked >> (s - 1)) & 1u)
        if (f(s) == t) ++marked_hits;
    const bool t_marked = (tgt.marked >> (t - 1)) & 1u;
    if (t_marked && marked_hits != 1) return false;
    if (!t_marked && v == Variant::strengthened && marked_hits != 0) return false;
  }
  return true;
}

CMObject canonical_cocartesian_target(const CMObject& src, const PointedMap& inert_f) {
  CMObject out{inert_f.tgt_arity, 0};
  for (int s = 1; s <= src.arity; ++s)
    if (((src.marked >> (s - 1)) & 1u) && inert_f(s) != 0)
      out.marked |= 1u << (inert_f(s) - 1);
  return out;
}

namespace {

struct CMData {
  int bound = 0;
  Variant variant = Variant::strengthened;
  std::vector<CMObject> objects;
  std::vector<PointedMap> maps;  // per arrow
  // rank_to_arrow[src][tgt][lex rank of map] = arrow index or -1
  std::vector<std::vector<std::vector<int>>> rank_to_arrow;

  static int rank_of(const PointedMap& f) {
    int rank = 0;
    for (int v : f.img) rank = rank * (f.tgt_arity + 1) + v;
    return rank;
  }

  std::optional<int> arrow_index(int src_obj, int tgt_obj, const PointedMap& f) const {
    const int r =
        rank_to_arrow[static_cast<size_t>(src_obj)][static_cast<size_t>(tgt_obj)]
                     [static_cast<size_t>(rank_of(f))];
    if (r < 0) return std::nullopt;
    return r;
  }
};

}  // namespace

std::optional<int> CMTruncation::object_index(const CMObject& o) const {
  auto it = std::lower_bound(object_data.begin(), object_data.end(), o);
  if (it == object_data.end() || *it != o) return std::nullopt;
  return static_cast<int>(it - object_data.begin());
}

CMTruncation build_cm_truncation(int N, Variant v) {
  if (N < 1) throw std::invalid_argument("build_cm_truncation: bound must be >= 1");
  auto fstar = std::make_shared<FStarTruncation>(N);
  auto data = std::make_shared<CMData>();
  data->bound = N;
  data->variant = v;
  for (int k = 0; k <= N; ++k)
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask)
      data->objects.push_back(CMObject{k, mask});

  const int nobj = static_cast<int>(data->objects.size());
  std::vector<std::string> names;
  std::vector<int> obj_over;
  for (const CMObject& o : data->objects) {
    names.push_back(to_string(o));
    obj_over.push_back(o.arity);
  }

  std::vector<Arrow> arrows;
  std::vector<int> arr_over;
  std::vector<int> identities(static_cast<size_t>(nobj), -1);
  data->rank_to_arrow.assign(
      static_cast<size_t>(nobj),
      std::vector<std::vector<int>>(static_cast<size_t>(nobj)));
  for (int so = 0; so < nobj; ++so) {
    const CMObject& src = data->objects[static_cast<size_t>(so)];
    for (int to = 0; to < nobj; ++to) {
      const CMObject& tgt = data->objects[static_cast<size_t>(to)];
      const auto all = enumerate_maps({src.arity}, {tgt.arity});
      auto& slot = data->rank_to_arrow[static_cast<size_t>(so)][static_cast<size_t>(to)];
      slot.assign(all.size(), -1);
      for (size_t r = 0; r < all.size(); ++r) {
        const PointedMap& f = all[r];
        if (!is_cm_morphism(f, src, tgt, v)) continue;
        const int idx = static_cast<int>(arrows.size());
        slot[r] = idx;
        if (so == to && f == PointedMap::identity(src.arity))
          identities[static_cast<size_t>(so)] = idx;
        arrows.push_back({names[static_cast<size_t>(so)] + "--" + to_string(f) +
                              "-->" + names[static_cast<size_t>(to)],
                          so, to});
        data->maps.push_back(f);
        arr_over.push_back(*fstar->arrow_of(f));
      }
    }
  }

  std::shared_ptr<const CMData> shared = data;
  auto arrow_src = std::make_shared<std::vector<int>>();
  auto arrow_tgt = std::make_shared<std::vector<int>>();
  for (const Arrow& a : arrows) {
    arrow_src->push_back(a.src);
    arrow_tgt->push_back(a.tgt);
  }
  FinCategory::Composer composer = [shared, arrow_src, arrow_tgt](
                                       int g, int f) -> std::optional<int> {
    const PointedMap& mf = shared->maps[static_cast<size_t>(f)];
    const PointedMap& mg = shared->maps[static_cast<size_t>(g)];
    return shared->arrow_index((*arrow_src)[static_cast<size_t>(f)],
                               (*arrow_tgt)[static_cast<size_t>(g)],
                               opcheck::compose(mg, mf));
  };

  CMTruncation out;
  out.bound = N;
  out.variant = v;
  out.object_data = data->objects;
  out.fib.total = std::make_shared<FinCategory>(FinCategory::computed(
      std::move(names), std::move(arrows), std::move(identities), composer));
  out.fib.base = fstar;
  out.fib.obj_over = std::move(obj_over);
  out.fib.arr_over = std::move(arr_over);
  return out;
}

Verdict closure_check(int N, Variant v) {
  const CMTruncation tr = build_cm_truncation(N, v);
  const FinCategory& C = *tr.fib.total;
  for (int o = 0; o < C.object_count(); ++o) {
    const int id = C.identity_of(o);
    if (id < 0)
      return Verdict::fail("identity_missing", {{"object", C.object_name(o)}});
  }
  long long pairs = 0;
  for (int f = 0; f < C.arrow_count(); ++f) {
    for (int g : C.arrows_from(C.arrow(f).tgt)) {
      ++pairs;
      if (!C.compose(g, f)) {
        const PointedMap composite =
            opcheck::compose(tr.fib.base->map_of(tr.fib.base_of_arrow(g)),
                             tr.fib.base->map_of(tr.fib.base_of_arrow(f)));
        return Verdict::fail("not_closed", {{"f", C.arrow(f).name},
                                            {"g", C.arrow(g).name},
                                            {"composite", to_string(composite)}});
      }
    }
  }
  return Verdict::ok({{"arrows", C.arrow_count()}, {"composable_pairs", pairs}});
}

const char* to_string(Color c) { return c == Color::a ? "a" : "m"; }

std::optional<Color> parse_color(const std::string& s) {
  if (s == "a") return Color::a;
  if (s == "m") return Color::m;
  return std::nullopt;
}

std::vector<CMMorphism> mul_set(const std::vector<Color>& inputs, Color output,
                                Variant v) {
  const int n = static_cast<int>(inputs.size());
  if (n > 31) throw std::invalid_argument("mul_set: too many inputs");
  CMObject src{n, 0};
  for (int i = 0; i < n; ++i)
    if (inputs[static_cast<size_t>(i)] == Color::m) src.marked |= 1u << i;
  const CMObject tgt{1, output == Color::m ? 1u : 0u};

  std::vector<CMMorphism> out;
  for (const PointedMap& f : enumerate_maps({n}, {1})) {
    if (!classify(f).active) continue;
    if (!is_cm_morphism(f, src, tgt, v)) continue;
    out.push_back(CMMorphism{src, tgt, f, v});
  }
  return out;
}

SegalFiberResult segal_fiber(int n, Variant v, std::size_t ceiling) {
  if (n < 0) throw std::invalid_argument("segal_fiber: n must be >= 0");
  const CMTruncation tr = build_cm_truncation(std::max(n, 1), v);
  SegalComparison seg = build_segal_comparison(tr.fib, n, ceiling);
  return SegalFiberResult{seg.fiber, seg.product, seg.comparison, seg.construction};
}

CMObject phi_embed(const FoObject& o) {
  if (o.point < 0 || o.point > o.arity)
    throw std::invalid_argument("phi_embed: point out of range");
  CMObject out{o.arity, 0};
  if (o.point > 0) out.marked = 1u << (o.point - 1);
  return out;
}

Verdict phi_check(int N, Variant v) {
  if (N < 1) throw std::invalid_argument("phi_check: bound must be >= 1");
  const CMTruncation tr = build_cm_truncation(N, v);

  std::vector<FoObject> fo_objects;
  for (int m = 0; m <= N; ++m)
    for (int pt = 0; pt <= m; ++pt) fo_objects.push_back(FoObject{m, pt});

  // Object bijectivity onto the |U| <= 1 objects.
  {
    std::vector<int> hits(tr.object_data.size(), 0);
    for (const FoObject& o : fo_objects) {
      auto idx = tr.object_index(phi_embed(o));
      if (!idx)
        return Verdict::fail("phi_object_missing", {{"fo", to_string(o)}});
      ++hits[static_cast<size_t>(*idx)];
    }
    for (size_t i = 0; i < tr.object_data.size(); ++i) {
      const bool small = std::popcount(tr.object_data[i].marked) <= 1;
      if (small && hits[i] != 1)
        return Verdict::fail("phi_object_bijection",
                             {{"cm", to_string(tr.object_data[i])}, {"hits", hits[i]}});
      if (!small && hits[i] != 0)
        return Verdict::fail("phi_object_bijection",
                             {{"cm", to_string(tr.object_data[i])}, {"hits", hits[i]}});
    }
  }

  // Hom-set equality pair by pair: a pointed map is a morphism of the
  // pointed-arrow category iff it carries the chosen point to the chosen
  // point, and the embedding must identify that set with the valid
  // morphisms between the embedded objects.
  long long pairs = 0, marked_edges = 0;
  for (const FoObject& o1 : fo_objects) {
    for (const FoObject& o2 : fo_objects) {
      ++pairs;
      const CMObject c1 = phi_embed(o1), c2 = phi_embed(o2);
      int fo_count = 0, cm_count = 0;
      std::optional<PointedMap> first_diff;
      bool diff_in_fo = false;
      for (const PointedMap& f : enumerate_maps({o1.arity}, {o2.arity})) {
        const bool in_fo = f(o1.point) == o2.point;
        const bool in_cm = is_cm_morphism(f, c1, c2, v);
        fo_count += in_fo ? 1 : 0;
        cm_count += in_cm ? 1 : 0;
        if (in_fo != in_cm && !first_diff) {
          first_diff = f;
          diff_in_fo = in_fo;
        }
      }
      if (first_diff)
        return Verdict::fail("phi_hom_mismatch",
                             {{"src", to_string(o1)},
                              {"tgt", to_string(o2)},
                              {"src_cm", to_string(c1)},
                              {"tgt_cm", to_string(c2)},
                              {"map", to_string(*first_diff)},
                              {"in_fo", diff_in_fo},
                              {"fo_hom", fo_count},
                              {"cm_hom", cm_count}});
    }
  }

  // Marked edges (inert underlying map) must land on cocartesian edges.
  for (const FoObject& o1 : fo_objects) {
    for (const FoObject& o2 : fo_objects) {
      const int s = *tr.object_index(phi_embed(o1));
      const int t = *tr.object_index(phi_embed(o2));
      for (const PointedMap& f : enumerate_maps({o1.arity}, {o2.arity})) {
        if (f(o1.point) != o2.point || !classify(f).inert) continue;
        ++marked_edges;
        bool found = false;
        for (int a : tr.fib.total->arrows_between(s, t)) {
          if (tr.fib.base->map_of(tr.fib.base_of_arrow(a)) != f) continue;
          found = true;
          if (!is_cocartesian_edge(tr.fib, a))
            return Verdict::fail("phi_marked_edge_not_cocartesian",
                                 {{"src", to_string(o1)},
                                  {"tgt", to_string(o2)},
                                  {"map", to_string(f)}});
        }
        if (!found)
          return Verdict::fail("phi_marked_edge_missing",
                               {{"src", to_string(o1)},
                                {"tgt", to_string(o2)},
                                {"map", to_string(f)}});
      }
    }
  }

  return Verdict::ok({{"fo_objects", fo_objects.size()},
                      {"pairs", pairs},
                      {"marked_edges", marked_edges}});
}

}  // namespace opcheck
