#include "opcheck/fincat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace opcheck {

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["verdict"] = pass ? "pass" : "fail";
  if (!pass) {
    j["code"] = code;
    j["witness"] = witness;
  }
  if (!info.is_null()) j["info"] = info;
  return j;
}

FinCategory FinCategory::from_table(std::vector<std::string> objects,
                                    std::vector<Arrow> arrows,
                                    std::vector<int> identities,
                                    const std::vector<std::array<int, 3>>& comp) {
  FinCategory c;
  c.objects_ = std::move(objects);
  c.arrows_ = std::move(arrows);
  c.identities_ = std::move(identities);
  auto table = std::make_shared<std::map<std::pair<int, int>, int>>();
  for (const auto& [f, g, gof] : comp) (*table)[{g, f}] = gof;
  c.composer_ = [table](int g, int f) -> std::optional<int> {
    auto it = table->find({g, f});
    if (it == table->end()) return std::nullopt;
    return it->second;
  };
  c.build_indexes();
  return c;
}

FinCategory FinCategory::computed(std::vector<std::string> objects,
                                  std::vector<Arrow> arrows,
                                  std::vector<int> identities, Composer composer) {
  FinCategory c;
  c.objects_ = std::move(objects);
  c.arrows_ = std::move(arrows);
  c.identities_ = std::move(identities);
  c.composer_ = std::move(composer);
  c.build_indexes();
  return c;
}

void FinCategory::build_indexes() {
  const size_t nobj = objects_.size();
  out_.assign(nobj, {});
  in_.assign(nobj, {});
  hom_.assign(nobj, std::vector<std::vector<int>>(nobj));
  for (int a = 0; a < arrow_count(); ++a) {
    const Arrow& ar = arrows_[static_cast<size_t>(a)];
    if (ar.src < 0 || ar.src >= static_cast<int>(nobj) || ar.tgt < 0 ||
        ar.tgt >= static_cast<int>(nobj))
      throw std::invalid_argument("FinCategory: arrow endpoint out of range");
    out_[static_cast<size_t>(ar.src)].push_back(a);
    in_[static_cast<size_t>(ar.tgt)].push_back(a);
    hom_[static_cast<size_t>(ar.src)][static_cast<size_t>(ar.tgt)].push_back(a);
  }
  if (identities_.size() != nobj)
    throw std::invalid_argument("FinCategory: one identity arrow per object required");
}

bool FinCategory::is_identity(int a) const {
  const Arrow& ar = arrow(a);
  return ar.src == ar.tgt && identity_of(ar.src) == a;
}

std::optional<int> FinCategory::compose(int g, int f) const {
  if (arrow(f).tgt != arrow(g).src) return std::nullopt;
  return composer_(g, f);
}

nlohmann::json FinCategory::to_json() const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["objects"] = objects_;
  nlohmann::json arrs = nlohmann::json::array();
  for (const Arrow& a : arrows_)
    arrs.push_back({{"id", a.name}, {"src", objects_[static_cast<size_t>(a.src)]},
                    {"tgt", objects_[static_cast<size_t>(a.tgt)]}});
  doc["arrows"] = arrs;
  nlohmann::json ids;
  for (int o = 0; o < object_count(); ++o)
    ids[objects_[static_cast<size_t>(o)]] = arrows_[static_cast<size_t>(identity_of(o))].name;
  doc["ids"] = ids;
  nlohmann::json comp = nlohmann::json::array();
  for (int f = 0; f < arrow_count(); ++f)
    for (int g : out_[static_cast<size_t>(arrow(f).tgt)])
      if (auto h = compose(g, f))
        comp.push_back({arrows_[static_cast<size_t>(f)].name,
                        arrows_[static_cast<size_t>(g)].name,
                        arrows_[static_cast<size_t>(*h)].name});
  doc["comp"] = comp;
  return doc;
}

FinCategory FinCategory::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("version", 0) != 1)
    throw std::invalid_argument("category document: unsupported version");
  std::vector<std::string> objects = doc.at("objects").get<std::vector<std::string>>();
  std::map<std::string, int> obj_index;
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) {
    if (!obj_index.emplace(objects[static_cast<size_t>(i)], i).second)
      throw std::invalid_argument("category document: duplicate object name");
  }
  std::vector<Arrow> arrows;
  std::map<std::string, int> arr_index;
  for (const auto& ja : doc.at("arrows")) {
    Arrow a;
    a.name = ja.at("id").get<std::string>();
    a.src = obj_index.at(ja.at("src").get<std::string>());
    a.tgt = obj_index.at(ja.at("tgt").get<std::string>());
    if (!arr_index.emplace(a.name, static_cast<int>(arrows.size())).second)
      throw std::invalid_argument("category document: duplicate arrow id");
    arrows.push_back(a);
  }
  std::vector<int> identities(objects.size(), -1);
  for (const auto& [oname, aname] : doc.at("ids").items()) {
    identities[static_cast<size_t>(obj_index.at(oname))] =
        arr_index.at(aname.get<std::string>());
  }
  for (int id : identities)
    if (id < 0) throw std::invalid_argument("category document: missing identity");
  std::vector<std::array<int, 3>> comp;
  for (const auto& entry : doc.at("comp")) {
    comp.push_back({arr_index.at(entry.at(0).get<std::string>()),
                    arr_index.at(entry.at(1).get<std::string>()),
                    arr_index.at(entry.at(2).get<std::string>())});
  }
  return from_table(std::move(objects), std::move(arrows), std::move(identities), comp);
}

namespace {

nlohmann::json arrow_ref(const FinCategory& c, int a) {
  return {{"arrow", c.arrow(a).name},
          {"src", c.object_name(c.arrow(a).src)},
          {"tgt", c.object_name(c.arrow(a).tgt)}};
}

}  // namespace

Verdict check_category(const FinCategory& c) {
  for (int o = 0; o < c.object_count(); ++o) {
    const int id = c.identity_of(o);
    if (id < 0 || id >= c.arrow_count() || c.arrow(id).src != o || c.arrow(id).tgt != o)
      return Verdict::fail("identity_endpoints", {{"object", c.object_name(o)}});
  }
  for (int o = 0; o < c.object_count(); ++o) {
    const int id = c.identity_of(o);
    for (int f : c.arrows_from(o))
      if (c.compose(f, id) != std::optional<int>(f))
        return Verdict::fail("right_unit", arrow_ref(c, f));
    for (int g : c.arrows_into(o))
      if (c.compose(id, g) != std::optional<int>(g))
        return Verdict::fail("left_unit", arrow_ref(c, g));
  }
  for (int f = 0; f < c.arrow_count(); ++f) {
    for (int g : c.arrows_from(c.arrow(f).tgt)) {
      auto h = c.compose(g, f);
      if (!h)
        return Verdict::fail("not_closed",
                             {{"f", arrow_ref(c, f)}, {"g", arrow_ref(c, g)}});
      if (c.arrow(*h).src != c.arrow(f).src || c.arrow(*h).tgt != c.arrow(g).tgt)
        return Verdict::fail("composite_endpoints",
                             {{"f", arrow_ref(c, f)}, {"g", arrow_ref(c, g)}});
    }
  }
  for (int f = 0; f < c.arrow_count(); ++f) {
    for (int g : c.arrows_from(c.arrow(f).tgt)) {
      const int gf = *c.compose(g, f);
      for (int k : c.arrows_from(c.arrow(g).tgt)) {
        const int kg = *c.compose(k, g);
        if (c.compose(k, gf) != c.compose(kg, f))
          return Verdict::fail("assoc", {{"f", arrow_ref(c, f)},
                                         {"g", arrow_ref(c, g)},
                                         {"k", arrow_ref(c, k)}});
      }
    }
  }
  return Verdict::ok({{"objects", c.object_count()}, {"arrows", c.arrow_count()}});
}

FunctorData identity_functor(CategoryPtr c) {
  FunctorData F;
  F.source = c;
  F.target = c;
  F.object_map.resize(static_cast<size_t>(c->object_count()));
  F.arrow_map.resize(static_cast<size_t>(c->arrow_count()));
  for (int o = 0; o < c->object_count(); ++o) F.object_map[static_cast<size_t>(o)] = o;
  for (int a = 0; a < c->arrow_count(); ++a) F.arrow_map[static_cast<size_t>(a)] = a;
  return F;
}

Verdict check_functor(const FunctorData& F) {
  const FinCategory& S = *F.source;
  const FinCategory& T = *F.target;
  if (F.object_map.size() != static_cast<size_t>(S.object_count()) ||
      F.arrow_map.size() != static_cast<size_t>(S.arrow_count()))
    return Verdict::fail("shape", {{"reason", "map sizes do not match source"}});
  for (int a = 0; a < S.arrow_count(); ++a) {
    const Arrow& ar = S.arrow(a);
    const int fa = F.arrow_map[static_cast<size_t>(a)];
    if (fa < 0 || fa >= T.arrow_count())
      return Verdict::fail("range", arrow_ref(S, a));
    if (T.arrow(fa).src != F.object_map[static_cast<size_t>(ar.src)] ||
        T.arrow(fa).tgt != F.object_map[static_cast<size_t>(ar.tgt)])
      return Verdict::fail("endpoints", arrow_ref(S, a));
  }
  for (int o = 0; o < S.object_count(); ++o) {
    if (F.arrow_map[static_cast<size_t>(S.identity_of(o))] !=
        T.identity_of(F.object_map[static_cast<size_t>(o)]))
      return Verdict::fail("identities", {{"object", S.object_name(o)}});
  }
  for (int f = 0; f < S.arrow_count(); ++f) {
    for (int g : S.arrows_from(S.arrow(f).tgt)) {
      auto h = S.compose(g, f);
      if (!h) continue;
      auto th = T.compose(F.arrow_map[static_cast<size_t>(g)],
                          F.arrow_map[static_cast<size_t>(f)]);
      if (th != std::optional<int>(F.arrow_map[static_cast<size_t>(*h)]))
        return Verdict::fail("composition",
                             {{"f", arrow_ref(S, f)}, {"g", arrow_ref(S, g)}});
    }
  }
  return Verdict::ok();
}

Verdict categories_isomorphic(const FunctorData& F) {
  const FinCategory& T = *F.target;
  {
    std::vector<int> hits(static_cast<size_t>(T.object_count()), 0);
    for (int img : F.object_map) ++hits[static_cast<size_t>(img)];
    for (int o = 0; o < T.object_count(); ++o) {
      if (hits[static_cast<size_t>(o)] == 0)
        return Verdict::fail("object_not_hit", {{"object", T.object_name(o)}});
      if (hits[static_cast<size_t>(o)] > 1)
        return Verdict::fail("object_hit_twice", {{"object", T.object_name(o)}});
    }
  }
  {
    std::vector<int> hits(static_cast<size_t>(T.arrow_count()), 0);
    for (int img : F.arrow_map) ++hits[static_cast<size_t>(img)];
    for (int a = 0; a < T.arrow_count(); ++a) {
      if (hits[static_cast<size_t>(a)] == 0)
        return Verdict::fail("arrow_not_hit", arrow_ref(T, a));
      if (hits[static_cast<size_t>(a)] > 1)
        return Verdict::fail("arrow_hit_twice", arrow_ref(T, a));
    }
  }
  return Verdict::ok({{"objects", T.object_count()}, {"arrows", T.arrow_count()}});
}

bool is_isomorphism(const FinCategory& c, int arrow) {
  const Arrow& u = c.arrow(arrow);
  for (int v : c.arrows_between(u.tgt, u.src)) {
    if (c.compose(v, arrow) == std::optional<int>(c.identity_of(u.src)) &&
        c.compose(arrow, v) == std::optional<int>(c.identity_of(u.tgt)))
      return true;
  }
  return false;
}

Verdict categories_equivalent(const FunctorData& F) {
  const FinCategory& S = *F.source;
  const FinCategory& T = *F.target;
  // Full faithfulness, hom-set by hom-set.
  for (int a = 0; a < S.object_count(); ++a) {
    for (int b = 0; b < S.object_count(); ++b) {
      const int fa = F.object_map[static_cast<size_t>(a)];
      const int fb = F.object_map[static_cast<size_t>(b)];
      const auto& src_hom = S.arrows_between(a, b);
      const auto& tgt_hom = T.arrows_between(fa, fb);
      std::vector<int> hits(tgt_hom.size(), 0);
      for (int f : src_hom) {
        const int img = F.arrow_map[static_cast<size_t>(f)];
        auto it = std::find(tgt_hom.begin(), tgt_hom.end(), img);
        if (it == tgt_hom.end())
          return Verdict::fail("hom_endpoints", arrow_ref(S, f));
        ++hits[static_cast<size_t>(it - tgt_hom.begin())];
      }
      for (size_t i = 0; i < tgt_hom.size(); ++i) {
        if (hits[i] == 0)
          return Verdict::fail("not_full", {{"src", S.object_name(a)},
                                            {"tgt", S.object_name(b)},
                                            {"missing", T.arrow(tgt_hom[i]).name}});
        if (hits[i] > 1)
          return Verdict::fail("not_faithful", {{"src", S.object_name(a)},
                                                {"tgt", S.object_name(b)},
                                                {"hit_twice", T.arrow(tgt_hom[i]).name}});
      }
    }
  }
  // Essential surjectivity by brute-force isomorphism search.
  for (int t = 0; t < T.object_count(); ++t) {
    bool hit = false;
    for (int a = 0; a < S.object_count() && !hit; ++a) {
      const int fa = F.object_map[static_cast<size_t>(a)];
      if (fa == t) hit = true;
      for (int u : T.arrows_between(fa, t))
        if (is_isomorphism(T, u)) {
          hit = true;
          break;
        }
    }
    if (!hit)
      return Verdict::fail("not_essentially_surjective", {{"object", T.object_name(t)}});
  }
  return Verdict::ok();
}

namespace {
int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}
}  // namespace

FStarTruncation::FStarTruncation(int bound) {
  if (bound < 0) throw std::invalid_argument("FStarTruncation: bound must be >= 0");
  auto data = std::make_shared<Data>();
  data->bound = bound;
  std::vector<std::string> objects;
  for (int n = 0; n <= bound; ++n) objects.push_back(PointedSet{n}.name());
  std::vector<Arrow> arrows;
  std::vector<int> identities(static_cast<size_t>(bound) + 1, -1);
  data->hom_offset.assign(static_cast<size_t>((bound + 1) * (bound + 1)), 0);
  for (int m = 0; m <= bound; ++m) {
    for (int n = 0; n <= bound; ++n) {
      data->hom_offset[static_cast<size_t>(m * (bound + 1) + n)] =
          static_cast<int>(arrows.size());
      for (const PointedMap& f : enumerate_maps({m}, {n})) {
        if (m == n && f == PointedMap::identity(n))
          identities[static_cast<size_t>(n)] = static_cast<int>(arrows.size());
        arrows.push_back({to_string(f), m, n});
        data->maps.push_back(f);
        data->cls.push_back(classify(f));
      }
    }
  }

  const int A = static_cast<int>(data->maps.size());
  if (A <= 4096) {
    data->comp.assign(static_cast<size_t>(A) * static_cast<size_t>(A), -1);
    for (int f = 0; f < A; ++f)
      for (int g = 0; g < A; ++g)
        if (data->maps[static_cast<size_t>(f)].tgt_arity ==
            data->maps[static_cast<size_t>(g)].src_arity)
          data->comp[static_cast<size_t>(g) * static_cast<size_t>(A) +
                     static_cast<size_t>(f)] =
              *data->arrow_of(opcheck::compose(data->maps[static_cast<size_t>(g)],
                                               data->maps[static_cast<size_t>(f)]));
  }

  std::shared_ptr<const Data> shared = data;
  FinCategory::Composer composer = [shared](int g, int f) -> std::optional<int> {
    const int r = shared->compose_arrows(g, f);
    if (r < 0) return std::nullopt;
    return r;
  };
  data_ = shared;
  cat_ = std::make_shared<FinCategory>(FinCategory::computed(
      std::move(objects), std::move(arrows), std::move(identities), composer));
}

std::optional<int> FStarTruncation::Data::arrow_of(const PointedMap& f) const {
  if (f.src_arity < 0 || f.src_arity > bound || f.tgt_arity < 0 || f.tgt_arity > bound)
    return std::nullopt;
  int rank = 0;
  for (int v : f.img) rank = rank * (f.tgt_arity + 1) + v;
  return hom_offset[static_cast<size_t>(f.src_arity * (bound + 1) + f.tgt_arity)] + rank;
}

int FStarTruncation::Data::compose_arrows(int g, int f) const {
  const PointedMap& mf = maps[static_cast<size_t>(f)];
  const PointedMap& mg = maps[static_cast<size_t>(g)];
  if (mf.tgt_arity != mg.src_arity) return -1;
  if (!comp.empty()) {
    const size_t A = maps.size();
    return comp[static_cast<size_t>(g) * A + static_cast<size_t>(f)];
  }
  return *arrow_of(opcheck::compose(mg, mf));
}

std::pair<int, int> FStarTruncation::hom_range(int src_arity, int tgt_arity) const {
  const int first =
      data_->hom_offset[static_cast<size_t>(src_arity * (data_->bound + 1) + tgt_arity)];
  return {first, ipow(tgt_arity + 1, src_arity)};
}

int FStarTruncation::rho_arrow(int n, int i) const {
  auto a = arrow_of(rho(n, i));
  if (!a) throw std::invalid_argument("rho_arrow: out of bound");
  return *a;
}

int FStarTruncation::identity_arrow(int arity) const {
  auto a = arrow_of(PointedMap::identity(arity));
  if (!a) throw std::invalid_argument("identity_arrow: out of bound");
  return *a;
}

FunctorData FiberedCategory::projection() const {
  return FunctorData{total, base->category(), obj_over, arr_over};
}

bool is_cocartesian_edge(const FiberedCategory& p, int e) {
  const FinCategory& C = *p.total;
  const FStarTruncation& B = *p.base;
  const int X = C.arrow(e).src;
  const int Y = C.arrow(e).tgt;
  const int fbar = p.base_of_arrow(e);
  for (int h : C.arrows_from(X)) {
    const int Z = C.arrow(h).tgt;
    const int hbar = p.base_of_arrow(h);
    const auto [first, count] =
        B.hom_range(B.arity_of(p.base_of_object(Y)), B.arity_of(p.base_of_object(Z)));
    for (int gbar = first; gbar < first + count; ++gbar) {
      if (B.compose_arrows(gbar, fbar) != hbar) continue;
      int fillers = 0;
      for (int g : C.arrows_between(Y, Z)) {
        if (p.base_of_arrow(g) != gbar) continue;
        if (C.compose(g, e) == std::optional<int>(h)) ++fillers;
      }
      if (fillers != 1) return false;
    }
  }
  return true;
}

std::optional<int> choose_cocartesian_lift(const FiberedCategory& p, int X,
                                           int base_arrow) {
  for (int e : p.total->arrows_from(X)) {
    if (p.base_of_arrow(e) != base_arrow) continue;
    if (is_cocartesian_edge(p, e)) return e;
  }
  return std::nullopt;
}

FiberExtract fiber_over(const FiberedCategory& p, int arity) {
  const FinCategory& C = *p.total;
  const int base_obj = p.base->object_of(arity);
  const int base_id = p.base->identity_arrow(arity);

  FiberExtract out;
  std::vector<int> obj_to_fiber(static_cast<size_t>(C.object_count()), -1);
  for (int o = 0; o < C.object_count(); ++o)
    if (p.base_of_object(o) == base_obj) {
      obj_to_fiber[static_cast<size_t>(o)] = static_cast<int>(out.object_ids.size());
      out.object_ids.push_back(o);
    }
  std::vector<int> arr_to_fiber(static_cast<size_t>(C.arrow_count()), -1);
  std::vector<Arrow> arrows;
  for (int a = 0; a < C.arrow_count(); ++a) {
    if (p.base_of_arrow(a) != base_id) continue;
    const Arrow& ar = C.arrow(a);
    arr_to_fiber[static_cast<size_t>(a)] = static_cast<int>(arrows.size());
    arrows.push_back({ar.name, obj_to_fiber[static_cast<size_t>(ar.src)],
                      obj_to_fiber[static_cast<size_t>(ar.tgt)]});
    out.arrow_ids.push_back(a);
  }
  std::vector<std::string> names;
  std::vector<int> identities;
  for (int o : out.object_ids) {
    names.push_back(C.object_name(o));
    identities.push_back(arr_to_fiber[static_cast<size_t>(C.identity_of(o))]);
  }
  auto total = p.total;
  auto arrow_ids = out.arrow_ids;
  auto to_fiber = arr_to_fiber;
  FinCategory::Composer composer = [total, arrow_ids, to_fiber](int g, int f)
      -> std::optional<int> {
    auto h = total->compose(arrow_ids[static_cast<size_t>(g)],
                            arrow_ids[static_cast<size_t>(f)]);
    if (!h) return std::nullopt;
    const int r = to_fiber[static_cast<size_t>(*h)];
    if (r < 0) return std::nullopt;
    return r;
  };
  out.cat = FinCategory::computed(std::move(names), std::move(arrows),
                                  std::move(identities), composer);
  return out;
}

namespace {

// The n-fold product of a category with itself: tuples of objects and
// arrows, composed componentwise. Indexing is lexicographic with the first
// component most significant.
FinCategory product_category(CategoryPtr c, int n, std::size_t ceiling) {
  const int k = c->object_count();
  const int l = c->arrow_count();
  double objs = 1, arrs = 1;
  for (int i = 0; i < n; ++i) {
    objs *= k;
    arrs *= l;
  }
  if (objs > static_cast<double>(ceiling) || arrs > static_cast<double>(ceiling))
    throw CeilingExceeded("product category exceeds object ceiling");

  const auto tuple_name = [](const std::vector<std::string>& parts) {
    std::string s = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) s += ",";
      s += parts[i];
    }
    return s + ")";
  };

  const int nobjs = static_cast<int>(objs);
  const int narrs = static_cast<int>(arrs);
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(nobjs));
  for (int idx = 0; idx < nobjs; ++idx) {
    std::vector<std::string> parts;
    int rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      parts.insert(parts.begin(), c->object_name(rest % std::max(k, 1)));
      rest /= std::max(k, 1);
    }
    names.push_back(tuple_name(parts));
  }

  std::vector<Arrow> arrows;
  arrows.reserve(static_cast<size_t>(narrs));
  for (int idx = 0; idx < narrs; ++idx) {
    std::vector<std::string> parts;
    int src = 0, tgt = 0, rest = idx;
    std::vector<int> comp(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      comp[static_cast<size_t>(i)] = rest % std::max(l, 1);
      rest /= std::max(l, 1);
    }
    for (int i = 0; i < n; ++i) {
      const Arrow& a = c->arrow(comp[static_cast<size_t>(i)]);
      parts.push_back(a.name);
      src = src * k + a.src;
      tgt = tgt * k + a.tgt;
    }
    arrows.push_back({tuple_name(parts), src, tgt});
  }

  std::vector<int> identities(static_cast<size_t>(nobjs));
  for (int idx = 0; idx < nobjs; ++idx) {
    int rest = idx, id = 0;
    std::vector<int> comp(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      comp[static_cast<size_t>(i)] = rest % std::max(k, 1);
      rest /= std::max(k, 1);
    }
    for (int i = 0; i < n; ++i) id = id * l + c->identity_of(comp[static_cast<size_t>(i)]);
    identities[static_cast<size_t>(idx)] = id;
  }

  FinCategory::Composer composer = [c, n, l](int g, int f) -> std::optional<int> {
    std::vector<int> gs(static_cast<size_t>(n)), fs(static_cast<size_t>(n));
    int rg = g, rf = f;
    for (int i = n - 1; i >= 0; --i) {
      gs[static_cast<size_t>(i)] = rg % std::max(l, 1);
      fs[static_cast<size_t>(i)] = rf % std::max(l, 1);
      rg /= std::max(l, 1);
      rf /= std::max(l, 1);
    }
    int out = 0;
    for (int i = 0; i < n; ++i) {
      auto h = c->compose(gs[static_cast<size_t>(i)], fs[static_cast<size_t>(i)]);
      if (!h) return std::nullopt;
      out = out * l + *h;
    }
    return out;
  };

  return FinCategory::computed(std::move(names), std::move(arrows),
                               std::move(identities), composer);
}

}  // namespace

SegalComparison build_segal_comparison(const FiberedCategory& p, int n,
                                       std::size_t ceiling) {
  SegalComparison out;
  FiberExtract fib1 = fiber_over(p, 1);
  FiberExtract fibn = fiber_over(p, n);
  out.fiber = std::make_shared<FinCategory>(std::move(fibn.cat));
  auto fiber1 = std::make_shared<FinCategory>(std::move(fib1.cat));
  out.product = std::make_shared<FinCategory>(product_category(fiber1, n, ceiling));
  out.construction = Verdict::ok();

  const FinCategory& C = *p.total;
  const int k = fiber1->object_count();
  const int l = fiber1->arrow_count();
  std::vector<int> total_to_fib1_obj(static_cast<size_t>(C.object_count()), -1);
  for (int i = 0; i < k; ++i)
    total_to_fib1_obj[static_cast<size_t>(fib1.object_ids[static_cast<size_t>(i)])] = i;
  std::vector<int> total_to_fib1_arr(static_cast<size_t>(C.arrow_count()), -1);
  for (int i = 0; i < l; ++i)
    total_to_fib1_arr[static_cast<size_t>(fib1.arrow_ids[static_cast<size_t>(i)])] = i;

  // Chosen cocartesian lifts over each rho^i for every object of the fiber.
  std::vector<std::vector<int>> lift(fibn.object_ids.size(),
                                     std::vector<int>(static_cast<size_t>(n), -1));
  for (size_t xi = 0; xi < fibn.object_ids.size(); ++xi) {
    const int X = fibn.object_ids[xi];
    for (int i = 1; i <= n; ++i) {
      auto e = choose_cocartesian_lift(p, X, p.base->rho_arrow(n, i));
      if (!e) {
        out.construction = Verdict::fail(
            "segal_lift_missing",
            {{"object", C.object_name(X)}, {"rho", to_string(rho(n, i))}});
        return out;
      }
      lift[xi][static_cast<size_t>(i) - 1] = *e;
    }
  }

  FunctorData F;
  F.source = out.fiber;
  F.target = out.product;
  F.object_map.resize(fibn.object_ids.size());
  for (size_t xi = 0; xi < fibn.object_ids.size(); ++xi) {
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      const int Yi = C.arrow(lift[xi][static_cast<size_t>(i)]).tgt;
      idx = idx * k + total_to_fib1_obj[static_cast<size_t>(Yi)];
    }
    F.object_map[xi] = idx;
  }

  const int id1 = p.base->identity_arrow(1);
  F.arrow_map.resize(fibn.arrow_ids.size());
  for (size_t ui = 0; ui < fibn.arrow_ids.size(); ++ui) {
    const int u = fibn.arrow_ids[ui];
    const size_t sx = static_cast<size_t>(
        std::find(fibn.object_ids.begin(), fibn.object_ids.end(), C.arrow(u).src) -
        fibn.object_ids.begin());
    const size_t tx = static_cast<size_t>(
        std::find(fibn.object_ids.begin(), fibn.object_ids.end(), C.arrow(u).tgt) -
        fibn.object_ids.begin());
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      const int ei_src = lift[sx][static_cast<size_t>(i)];
      const int ei_tgt = lift[tx][static_cast<size_t>(i)];
      const auto rhs = C.compose(ei_tgt, u);
      int found = -1, count = 0;
      for (int v : C.arrows_between(C.arrow(ei_src).tgt, C.arrow(ei_tgt).tgt)) {
        if (p.base_of_arrow(v) != id1) continue;
        if (C.compose(v, ei_src) == rhs && rhs.has_value()) {
          found = v;
          ++count;
        }
      }
      if (count != 1) {
        out.construction = Verdict::fail(
            "segal_component_not_unique",
            {{"arrow", C.arrow(u).name}, {"component", i + 1}, {"candidates", count}});
        return out;
      }
      idx = idx * l + total_to_fib1_arr[static_cast<size_t>(found)];
    }
    F.arrow_map[ui] = idx;
  }
  out.comparison = std::move(F);
  return out;
}

Verdict check_operad_axioms(const FiberedCategory& p, const OperadOptions& opts) {
  const FStarTruncation& B = *p.base;
  if (B.bound() < 1)
    throw std::invalid_argument("check_operad_axioms: base bound must be >= 1");
  const FinCategory& C = *p.total;
  const int N = B.bound();

  // Condition (1): chosen cocartesian lifts of every inert base map.
  const int base_arrows = B.category()->arrow_count();
  std::vector<std::vector<int>> lift(
      static_cast<size_t>(C.object_count()),
      std::vector<int>(static_cast<size_t>(base_arrows), -1));
  for (int X = 0; X < C.object_count(); ++X) {
    const int S = p.base_of_object(X);
    for (int T = 0; T <= N; ++T) {
      const auto [first, count] = B.hom_range(B.arity_of(S), T);
      for (int f = first; f < first + count; ++f) {
        if (!B.inert(f)) continue;
        auto e = choose_cocartesian_lift(p, X, f);
        if (!e)
          return Verdict::fail("cond1", {{"object", C.object_name(X)},
                                         {"base", B.category()->arrow(f).name}});
        lift[static_cast<size_t>(X)][static_cast<size_t>(f)] = *e;
      }
    }
  }

  // Condition (2): hom decomposition along the rho^i.
  for (int X = 0; X < C.object_count(); ++X) {
    const int m = B.arity_of(p.base_of_object(X));
    for (int Y = 0; Y < C.object_count(); ++Y) {
      const int n = B.arity_of(p.base_of_object(Y));
      const auto [first, count] = B.hom_range(m, n);
      for (int f = first; f < first + count; ++f) {
        if (opts.inert_only && !B.inert(f)) continue;
        nlohmann::json where = {{"src", C.object_name(X)},
                                {"tgt", C.object_name(Y)},
                                {"base", B.category()->arrow(f).name}};
        std::vector<int> lhs;
        for (int h : C.arrows_between(X, Y))
          if (p.base_of_arrow(h) == f) lhs.push_back(h);

        std::vector<int> ei(static_cast<size_t>(n));
        std::vector<std::vector<int>> cand(static_cast<size_t>(n));
        for (int i = 1; i <= n; ++i) {
          const int r = B.rho_arrow(n, i);
          ei[static_cast<size_t>(i) - 1] =
              lift[static_cast<size_t>(Y)][static_cast<size_t>(r)];
          const int base_comp = B.compose_arrows(r, f);
          const int Yi = C.arrow(ei[static_cast<size_t>(i) - 1]).tgt;
          for (int g : C.arrows_between(X, Yi))
            if (p.base_of_arrow(g) == base_comp)
              cand[static_cast<size_t>(i) - 1].push_back(g);
        }

        std::vector<std::vector<int>> images;
        for (int h : lhs) {
          std::vector<int> tup(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i) {
            auto cmp = C.compose(ei[static_cast<size_t>(i)], h);
            if (!cmp) {
              where["reason"] = "composite with chosen lift missing";
              return Verdict::fail("cond2", where);
            }
            tup[static_cast<size_t>(i)] = *cmp;
          }
          images.push_back(std::move(tup));
        }
        for (size_t a = 0; a < images.size(); ++a)
          for (size_t b = a + 1; b < images.size(); ++b)
            if (images[a] == images[b]) {
              where["reason"] = "not injective";
              where["h1"] = C.arrow(lhs[a]).name;
              where["h2"] = C.arrow(lhs[b]).name;
              return Verdict::fail("cond2", where);
            }
        // Enumerate the product of candidate tuples and require each is hit.
        std::vector<size_t> odo(static_cast<size_t>(n), 0);
        bool done = false;
        if (n > 0)
          for (const auto& c : cand)
            if (c.empty()) done = true;
        while (!done) {
          std::vector<int> tup(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i)
            tup[static_cast<size_t>(i)] = cand[static_cast<size_t>(i)][odo[static_cast<size_t>(i)]];
          if (std::find(images.begin(), images.end(), tup) == images.end()) {
            where["reason"] = "not surjective";
            nlohmann::json parts = nlohmann::json::array();
            for (int i = 0; i < n; ++i)
              parts.push_back(C.arrow(tup[static_cast<size_t>(i)]).name);
            where["tuple"] = parts;
            return Verdict::fail("cond2", where);
          }
          if (n == 0) break;
          int pos = n - 1;
          while (pos >= 0 && ++odo[static_cast<size_t>(pos)] ==
                                 cand[static_cast<size_t>(pos)].size()) {
            odo[static_cast<size_t>(pos)] = 0;
            --pos;
          }
          if (pos < 0) done = true;
        }
      }
    }
  }

  // Condition (3): Segal fibers.
  for (int n = 0; n <= N; ++n) {
    SegalComparison seg = build_segal_comparison(p, n, opts.ceiling);
    if (!seg.construction) {
      seg.construction.witness["fiber"] = n;
      return Verdict::fail("cond3", seg.construction.witness);
    }
    Verdict vf = check_functor(seg.comparison);
    if (!vf)
      return Verdict::fail("cond3", {{"fiber", n},
                                     {"reason", "comparison is not a functor"},
                                     {"sub", vf.to_json()}});
    Verdict iso = opts.up_to_equivalence ? categories_equivalent(seg.comparison)
                                         : categories_isomorphic(seg.comparison);
    if (!iso)
      return Verdict::fail("cond3",
                           {{"fiber", n}, {"sub", iso.to_json()}});
  }

  return Verdict::ok({{"objects", C.object_count()},
                      {"arrows", C.arrow_count()},
                      {"inert_only", opts.inert_only}});
}

}  // namespace opcheck
