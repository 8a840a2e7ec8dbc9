#include "opcheck/envelope.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace opcheck {

std::string to_string(const FPlusObject& o) {
  std::string s = "{";
  for (int i = 1; i <= o.carrier; ++i) {
    if (i > 1) s += ',';
    s += std::to_string(i);
  }
  s += '|';
  s += subset_to_string(o.marked);
  return s + "}";
}

FPlusObject parse_fplus_object(const std::string& text) {
  if (text.size() < 3 || text.front() != '{' || text.back() != '}')
    throw std::invalid_argument("marked-set notation must look like \"{1,2|1}\": " + text);
  const auto bar = text.find('|');
  if (bar == std::string::npos)
    throw std::invalid_argument("marked-set notation must look like \"{1,2|1}\": " + text);
  FPlusObject o;
  const std::string carrier = text.substr(1, bar - 1);
  if (!carrier.empty()) {
    std::stringstream ss(carrier);
    std::string tok;
    int expect = 1;
    while (std::getline(ss, tok, ',')) {
      int e = 0;
      try {
        e = std::stoi(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad carrier element: " + text);
      }
      if (e != expect)
        throw std::invalid_argument("carrier must be 1..k in order: " + text);
      ++expect;
    }
    o.carrier = expect - 1;
  }
  const std::string marks = text.substr(bar + 1, text.size() - bar - 2);
  if (!marks.empty()) {
    std::stringstream ss(marks);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      int e = 0;
      try {
        e = std::stoi(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad marked element: " + text);
      }
      if (e < 1 || e > o.carrier)
        throw std::invalid_argument("marked element out of range: " + text);
      o.marked |= 1u << (e - 1);
    }
  }
  return o;
}

bool is_fplus_morphism(const std::vector<int>& img, const FPlusObject& src,
                       const FPlusObject& tgt) {
  if (static_cast<int>(img.size()) != src.carrier) return false;
  for (int v : img)
    if (v < 1 || v > tgt.carrier) return false;
  // Marked elements land on marked elements, one per marked target.
  std::vector<int> hits(static_cast<size_t>(tgt.carrier) + 1, 0);
  for (int s = 1; s <= src.carrier; ++s) {
    if (!((src.marked >> (s - 1)) & 1u)) continue;
    const int t = img[static_cast<size_t>(s) - 1];
    if (!((tgt.marked >> (t - 1)) & 1u)) return false;
    ++hits[static_cast<size_t>(t)];
  }
  for (int t = 1; t <= tgt.carrier; ++t)
    if (((tgt.marked >> (t - 1)) & 1u) && hits[static_cast<size_t>(t)] != 1)
      return false;
  return true;
}

DisjointUnion disjoint_union(const std::vector<FPlusObject>& parts) {
  DisjointUnion u;
  for (size_t p = 0; p < parts.size(); ++p) {
    for (int x = 1; x <= parts[p].carrier; ++x) {
      if ((parts[p].marked >> (x - 1)) & 1u)
        u.object.marked |= 1u << u.object.carrier;
      ++u.object.carrier;
      u.elements.emplace_back(static_cast<int>(p), x);
    }
  }
  return u;
}

std::vector<std::vector<int>> valid_fplus_maps(const FPlusObject& src,
                                               const FPlusObject& tgt) {
  std::vector<std::vector<int>> out;
  if (src.carrier == 0) {
    if (is_fplus_morphism({}, src, tgt)) out.push_back({});
    return out;
  }
  if (tgt.carrier == 0) return out;  // no total map from a nonempty carrier
  std::vector<int> img(static_cast<size_t>(src.carrier), 1);
  while (true) {
    if (is_fplus_morphism(img, src, tgt)) out.push_back(img);
    int pos = src.carrier - 1;
    while (pos >= 0 && img[static_cast<size_t>(pos)] == tgt.carrier) {
      img[static_cast<size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++img[static_cast<size_t>(pos)];
  }
  return out;
}

std::optional<int> FPlusFibration::object_index(
    const std::vector<FPlusObject>& tuple) const {
  auto it = lookup_.find(tuple);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string tuple_name(const std::vector<FPlusObject>& tuple) {
  std::string s = "(";
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) s += ',';
    s += to_string(tuple[i]);
  }
  return s + ")";
}

int total_carrier(const std::vector<FPlusObject>& tuple) {
  int c = 0;
  for (const FPlusObject& o : tuple) c += o.carrier;
  return c;
}

// Position of label x of component t (1-based) within the disjoint union of
// the components above tprime, ordered by component then label.
int union_position(const std::vector<FPlusObject>& tuple, const PointedMap& delta,
                   int tprime, int t, int x) {
  int pos = 0;
  for (int s = 1; s <= static_cast<int>(tuple.size()); ++s) {
    if (delta(s) != tprime) continue;
    if (s < t) pos += tuple[static_cast<size_t>(s) - 1].carrier;
  }
  return pos + x - 1;
}

struct FPlusData {
  FStarPtr base;
  std::vector<std::vector<FPlusObject>> tuples;
  std::vector<FPlusFibration::ArrowData> arrow_data;
  std::vector<int> arrow_src, arrow_tgt, arrow_base;
  std::map<std::vector<int>, int> arrow_lookup;

  std::vector<int> arrow_key(int src, int tgt, int base_arrow,
                             const std::vector<std::vector<int>>& components) const {
    std::vector<int> key{src, tgt, base_arrow};
    for (const auto& c : components)
      key.insert(key.end(), c.begin(), c.end());
    return key;
  }
};

}  // namespace

FPlusFibration build_fplus_over_fstar(int carrier_bound, int shape_bound,
                                      std::size_t ceiling,
                                      std::optional<int> total_carrier_bound) {
  if (carrier_bound < 0 || shape_bound < 0)
    throw std::invalid_argument("build_fplus_over_fstar: bounds must be >= 0");
  auto fstar = std::make_shared<FStarTruncation>(shape_bound);

  std::vector<FPlusObject> components;
  for (int c = 0; c <= carrier_bound; ++c)
    for (std::uint32_t mask = 0; mask < (1u << c); ++mask)
      components.push_back(FPlusObject{c, mask});
  const size_t K = components.size();

  FPlusFibration out;
  out.carrier_bound = carrier_bound;
  out.shape_bound = shape_bound;
  out.total_carrier_bound = total_carrier_bound;

  std::vector<std::string> names;
  std::vector<int> obj_over;
  for (int n = 0; n <= shape_bound; ++n) {
    std::vector<size_t> odo(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<FPlusObject> tuple;
      for (size_t i = 0; i < odo.size(); ++i) tuple.push_back(components[odo[i]]);
      if (!total_carrier_bound || total_carrier(tuple) <= *total_carrier_bound) {
        if (out.tuples.size() >= ceiling)
          throw CeilingExceeded("marked-set fibration exceeds object ceiling");
        out.lookup_[tuple] = static_cast<int>(out.tuples.size());
        names.push_back(tuple_name(tuple));
        obj_over.push_back(n);
        out.tuples.push_back(std::move(tuple));
      }
      if (n == 0) break;
      int pos = n - 1;
      while (pos >= 0 && ++odo[static_cast<size_t>(pos)] == K) {
        odo[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }

  auto data = std::make_shared<FPlusData>();
  data->base = fstar;
  data->tuples = out.tuples;

  std::vector<Arrow> arrows;
  std::vector<int> arr_over;
  std::vector<int> identities(out.tuples.size(), -1);
  const int nobj = static_cast<int>(out.tuples.size());
  for (int so = 0; so < nobj; ++so) {
    const auto& X = out.tuples[static_cast<size_t>(so)];
    const int n = static_cast<int>(X.size());
    for (int to = 0; to < nobj; ++to) {
      const auto& Y = out.tuples[static_cast<size_t>(to)];
      const int np = static_cast<int>(Y.size());
      const auto [first, count] = fstar->hom_range(n, np);
      for (int b = first; b < first + count; ++b) {
        const PointedMap& delta = fstar->map_of(b);
        // Valid maps per surviving target index.
        std::vector<std::vector<std::vector<int>>> choices(static_cast<size_t>(np));
        bool possible = true;
        for (int tp = 1; tp <= np && possible; ++tp) {
          std::vector<FPlusObject> above;
          for (int t = 1; t <= n; ++t)
            if (delta(t) == tp) above.push_back(X[static_cast<size_t>(t) - 1]);
          choices[static_cast<size_t>(tp) - 1] =
              valid_fplus_maps(disjoint_union(above).object, Y[static_cast<size_t>(tp) - 1]);
          if (choices[static_cast<size_t>(tp) - 1].empty()) possible = false;
        }
        if (!possible) continue;
        std::vector<size_t> odo(static_cast<size_t>(np), 0);
        while (true) {
          FPlusFibration::ArrowData ad;
          for (int tp = 0; tp < np; ++tp)
            ad.components.push_back(
                choices[static_cast<size_t>(tp)][odo[static_cast<size_t>(tp)]]);
          const int idx = static_cast<int>(arrows.size());
          if (arrows.size() >= ceiling)
            throw CeilingExceeded("marked-set fibration exceeds arrow ceiling");
          std::string nm = names[static_cast<size_t>(so)] + "--" +
                           fstar->category()->arrow(b).name;
          for (const auto& c : ad.components) {
            nm += ';';
            for (size_t i = 0; i < c.size(); ++i)
              nm += (i ? "," : "") + std::to_string(c[i]);
          }
          nm += "-->" + names[static_cast<size_t>(to)];
          arrows.push_back({nm, so, to});
          arr_over.push_back(b);
          data->arrow_lookup[data->arrow_key(so, to, b, ad.components)] = idx;
          data->arrow_src.push_back(so);
          data->arrow_tgt.push_back(to);
          data->arrow_base.push_back(b);
          data->arrow_data.push_back(std::move(ad));
          if (np == 0) break;
          int pos = np - 1;
          while (pos >= 0 && ++odo[static_cast<size_t>(pos)] ==
                                 choices[static_cast<size_t>(pos)].size()) {
            odo[static_cast<size_t>(pos)] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
  }
  out.arrows = data->arrow_data;

  // Identities: over the base identity, each component the identity map.
  for (int o = 0; o < nobj; ++o) {
    const auto& X = out.tuples[static_cast<size_t>(o)];
    const int n = static_cast<int>(X.size());
    FPlusFibration::ArrowData ad;
    for (int t = 1; t <= n; ++t) {
      std::vector<int> img;
      for (int x = 1; x <= X[static_cast<size_t>(t) - 1].carrier; ++x) img.push_back(x);
      ad.components.push_back(img);
    }
    auto it = data->arrow_lookup.find(
        data->arrow_key(o, o, fstar->identity_arrow(n), ad.components));
    if (it == data->arrow_lookup.end())
      throw std::logic_error("identity arrow missing from marked-set fibration");
    identities[static_cast<size_t>(o)] = it->second;
  }

  FinCategory::Composer composer = [data](int g, int f) -> std::optional<int> {
    const auto& X = data->tuples[static_cast<size_t>(data->arrow_src[static_cast<size_t>(f)])];
    const auto& Y = data->tuples[static_cast<size_t>(data->arrow_tgt[static_cast<size_t>(f)])];
    if (data->arrow_tgt[static_cast<size_t>(f)] != data->arrow_src[static_cast<size_t>(g)])
      return std::nullopt;
    const PointedMap& d1 = data->base->map_of(data->arrow_base[static_cast<size_t>(f)]);
    const PointedMap& d2 = data->base->map_of(data->arrow_base[static_cast<size_t>(g)]);
    const PointedMap beta = opcheck::compose(d2, d1);
    const int n = static_cast<int>(X.size());
    const int npp = beta.tgt_arity;
    std::vector<std::vector<int>> components(static_cast<size_t>(npp));
    for (int tpp = 1; tpp <= npp; ++tpp) {
      for (int t = 1; t <= n; ++t) {
        if (beta(t) != tpp) continue;
        for (int x = 1; x <= X[static_cast<size_t>(t) - 1].carrier; ++x) {
          const int tp = d1(t);
          const int p1 = union_position(X, d1, tp, t, x);
          const int y =
              data->arrow_data[static_cast<size_t>(f)].components[static_cast<size_t>(tp) - 1]
                              [static_cast<size_t>(p1)];
          const int p2 = union_position(Y, d2, tpp, tp, y);
          const int z =
              data->arrow_data[static_cast<size_t>(g)].components[static_cast<size_t>(tpp) - 1]
                              [static_cast<size_t>(p2)];
          components[static_cast<size_t>(tpp) - 1].push_back(z);
        }
      }
    }
    auto it = data->arrow_lookup.find(
        data->arrow_key(data->arrow_src[static_cast<size_t>(f)],
                        data->arrow_tgt[static_cast<size_t>(g)],
                        *data->base->arrow_of(beta), components));
    if (it == data->arrow_lookup.end()) return std::nullopt;
    return it->second;
  };

  out.fib.total = std::make_shared<FinCategory>(FinCategory::computed(
      std::move(names), std::move(arrows), std::move(identities), composer));
  out.fib.base = fstar;
  out.fib.obj_over = std::move(obj_over);
  out.fib.arr_over = std::move(arr_over);
  return out;
}

std::string to_string(const EnvObject& o) {
  std::string s = to_string(o.cm) + "@" + std::to_string(o.shape) + ":";
  for (size_t i = 0; i < o.assign.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(o.assign[i]);
  }
  return s;
}

EnvObject parse_env_object(const std::string& text) {
  const auto at = text.rfind('@');
  if (at == std::string::npos)
    throw std::invalid_argument("envelope notation must look like \"(2|1)@2:1,2\": " + text);
  const auto colon = text.find(':', at);
  if (colon == std::string::npos)
    throw std::invalid_argument("envelope notation must look like \"(2|1)@2:1,2\": " + text);
  EnvObject e;
  e.cm = parse_cm_object(text.substr(0, at));
  try {
    e.shape = std::stoi(text.substr(at + 1, colon - at - 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad shape size: " + text);
  }
  const std::string rest = text.substr(colon + 1);
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        e.assign.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad assignment entry: " + text);
      }
    }
  }
  if (static_cast<int>(e.assign.size()) != e.cm.arity)
    throw std::invalid_argument("assignment must cover all non-base elements: " + text);
  for (int v : e.assign)
    if (v < 1 || v > e.shape)
      throw std::invalid_argument("assignment out of range: " + text);
  return e;
}

std::optional<int> EnvTruncation::object_index(const EnvObject& o) const {
  auto it = std::lower_bound(
      objects.begin(), objects.end(), o, [](const EnvObject& a, const EnvObject& b) {
        return std::tuple(a.shape, a.cm.arity, a.assign, a.cm.marked) <
               std::tuple(b.shape, b.cm.arity, b.assign, b.cm.marked);
      });
  if (it == objects.end() || !(*it == o)) return std::nullopt;
  return static_cast<int>(it - objects.begin());
}

namespace {

struct EnvData {
  Variant variant;
  FStarPtr base;
  std::vector<EnvObject> objects;
  std::vector<EnvArrowData> arrow_data;
  std::vector<int> arrow_src, arrow_tgt;
  std::map<std::vector<int>, int> arrow_lookup;

  static int rank_of(const PointedMap& f) {
    int rank = 0;
    for (int v : f.img) rank = rank * (f.tgt_arity + 1) + v;
    return rank;
  }

  std::vector<int> arrow_key(int src, int tgt, int base_arrow,
                             const PointedMap& u) const {
    return {src, tgt, base_arrow, rank_of(u)};
  }
};

// Coherence of (u, delta) against the assignments: killed elements must sit
// over killed shape indices, surviving ones over the matching shape index.
bool env_coherent(const EnvObject& src, const EnvObject& tgt, const PointedMap& u,
                  const PointedMap& delta) {
  for (int s = 1; s <= src.cm.arity; ++s) {
    const int ds = delta(src.assign[static_cast<size_t>(s) - 1]);
    if (u(s) == 0) {
      if (ds != 0) return false;
    } else {
      if (ds != tgt.assign[static_cast<size_t>(u(s)) - 1]) return false;
    }
  }
  return true;
}

}  // namespace

EnvTruncation build_envelope(int N, int shape_bound, Variant v, std::size_t ceiling) {
  if (N < 0 || shape_bound < 0)
    throw std::invalid_argument("build_envelope: bounds must be >= 0");
  auto fstar = std::make_shared<FStarTruncation>(shape_bound);

  auto data = std::make_shared<EnvData>();
  data->variant = v;
  data->base = fstar;
  for (int k = 0; k <= shape_bound; ++k) {
    for (int m = 0; m <= N; ++m) {
      // Nondecreasing assignments [m] -> [k]: the canonical representatives.
      std::vector<std::vector<int>> assigns;
      if (m == 0) {
        assigns.push_back({});
      } else if (k > 0) {
        std::vector<int> a(static_cast<size_t>(m), 1);
        while (true) {
          assigns.push_back(a);
          int pos = m - 1;
          while (pos >= 0 && a[static_cast<size_t>(pos)] == k) --pos;
          if (pos < 0) break;
          const int next = a[static_cast<size_t>(pos)] + 1;
          for (int i = pos; i < m; ++i) a[static_cast<size_t>(i)] = next;
        }
      }
      for (const auto& a : assigns)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
          if (data->objects.size() >= ceiling)
            throw CeilingExceeded("envelope exceeds object ceiling");
          data->objects.push_back(EnvObject{CMObject{m, mask}, k, a});
        }
    }
  }

  const int nobj = static_cast<int>(data->objects.size());
  std::vector<std::string> names;
  std::vector<int> obj_over;
  for (const EnvObject& o : data->objects) {
    names.push_back(to_string(o));
    obj_over.push_back(o.shape);
  }

  std::vector<Arrow> arrows;
  std::vector<int> arr_over;
  std::vector<int> identities(static_cast<size_t>(nobj), -1);
  for (int so = 0; so < nobj; ++so) {
    const EnvObject& src = data->objects[static_cast<size_t>(so)];
    for (int to = 0; to < nobj; ++to) {
      const EnvObject& tgt = data->objects[static_cast<size_t>(to)];
      const auto [first, count] = fstar->hom_range(src.shape, tgt.shape);
      for (int b = first; b < first + count; ++b) {
        const PointedMap& delta = fstar->map_of(b);
        for (const PointedMap& u : enumerate_maps({src.cm.arity}, {tgt.cm.arity})) {
          if (!env_coherent(src, tgt, u, delta)) continue;
          if (!is_cm_morphism(u, src.cm, tgt.cm, v)) continue;
          const int idx = static_cast<int>(arrows.size());
          if (arrows.size() >= ceiling)
            throw CeilingExceeded("envelope exceeds arrow ceiling");
          if (so == to && u == PointedMap::identity(src.cm.arity) &&
              delta == PointedMap::identity(src.shape))
            identities[static_cast<size_t>(so)] = idx;
          arrows.push_back({names[static_cast<size_t>(so)] + "--" + to_string(u) +
                                "/" + to_string(delta) + "-->" +
                                names[static_cast<size_t>(to)],
                            so, to});
          arr_over.push_back(b);
          data->arrow_lookup[data->arrow_key(so, to, b, u)] = idx;
          data->arrow_src.push_back(so);
          data->arrow_tgt.push_back(to);
          data->arrow_data.push_back(EnvArrowData{u, delta});
        }
      }
    }
  }

  FinCategory::Composer composer = [data](int g, int f) -> std::optional<int> {
    if (data->arrow_tgt[static_cast<size_t>(f)] != data->arrow_src[static_cast<size_t>(g)])
      return std::nullopt;
    const EnvArrowData& af = data->arrow_data[static_cast<size_t>(f)];
    const EnvArrowData& ag = data->arrow_data[static_cast<size_t>(g)];
    const PointedMap u = opcheck::compose(ag.u, af.u);
    const PointedMap delta = opcheck::compose(ag.shape_map, af.shape_map);
    const int so = data->arrow_src[static_cast<size_t>(f)];
    const int to = data->arrow_tgt[static_cast<size_t>(g)];
    if (!is_cm_morphism(u, data->objects[static_cast<size_t>(so)].cm,
                        data->objects[static_cast<size_t>(to)].cm, data->variant))
      return std::nullopt;
    auto it = data->arrow_lookup.find(
        data->arrow_key(so, to, *data->base->arrow_of(delta), u));
    if (it == data->arrow_lookup.end()) return std::nullopt;
    return it->second;
  };

  EnvTruncation out;
  out.bound = N;
  out.shape_bound = shape_bound;
  out.variant = v;
  out.objects = data->objects;
  out.arrows = data->arrow_data;
  out.fib.total = std::make_shared<FinCategory>(FinCategory::computed(
      std::move(names), std::move(arrows), std::move(identities), composer));
  out.fib.base = fstar;
  out.fib.obj_over = std::move(obj_over);
  out.fib.arr_over = std::move(arr_over);
  return out;
}

std::vector<FPlusObject> comparison_on_objects(const EnvObject& e) {
  std::vector<FPlusObject> out;
  for (int t = 1; t <= e.shape; ++t) {
    FPlusObject comp;
    for (int s = 1; s <= e.cm.arity; ++s) {
      if (e.assign[static_cast<size_t>(s) - 1] != t) continue;
      if ((e.cm.marked >> (s - 1)) & 1u) comp.marked |= 1u << comp.carrier;
      ++comp.carrier;
    }
    out.push_back(comp);
  }
  return out;
}

Verdict verify_envelope_iso(int N, int shape_bound, Variant v, std::size_t ceiling) {
  const EnvTruncation env = build_envelope(N, shape_bound, v, ceiling);
  const FPlusFibration fp = build_fplus_over_fstar(N, shape_bound, ceiling, N);
  const FinCategory& E = *env.fib.total;
  const FinCategory& P = *fp.fib.total;

  nlohmann::json counts = {{"envelope_objects", E.object_count()},
                           {"envelope_arrows", E.arrow_count()},
                           {"fplus_objects", P.object_count()},
                           {"fplus_arrows", P.arrow_count()}};

  // Object comparison.
  std::vector<int> object_map(static_cast<size_t>(E.object_count()));
  for (int o = 0; o < E.object_count(); ++o) {
    auto idx = fp.object_index(comparison_on_objects(env.objects[static_cast<size_t>(o)]));
    if (!idx)
      return Verdict::fail("object_missing",
                           {{"envelope", E.object_name(o)}}, counts);
    object_map[static_cast<size_t>(o)] = *idx;
  }

  // Hom-set cardinalities over every base arrow, in scan order.
  for (int so = 0; so < E.object_count(); ++so) {
    for (int to = 0; to < E.object_count(); ++to) {
      const auto [first, count] = env.fib.base->hom_range(
          env.objects[static_cast<size_t>(so)].shape,
          env.objects[static_cast<size_t>(to)].shape);
      for (int b = first; b < first + count; ++b) {
        int env_count = 0;
        for (int a : E.arrows_between(so, to))
          if (env.fib.base_of_arrow(a) == b) ++env_count;
        int fp_count = 0;
        for (int a : P.arrows_between(object_map[static_cast<size_t>(so)],
                                      object_map[static_cast<size_t>(to)]))
          if (fp.fib.base_of_arrow(a) == b) ++fp_count;
        if (env_count != fp_count)
          return Verdict::fail(
              "hom_mismatch",
              {{"src", E.object_name(so)},
               {"tgt", E.object_name(to)},
               {"src_cm", to_string(env.objects[static_cast<size_t>(so)].cm)},
               {"tgt_cm", to_string(env.objects[static_cast<size_t>(to)].cm)},
               {"base", env.fib.base->category()->arrow(b).name},
               {"envelope_hom", env_count},
               {"fplus_hom", fp_count}},
              counts);
      }
    }
  }

  // Arrow map: restrict the marked-pointed-set morphism to each fiber union.
  std::vector<int> arrow_map(static_cast<size_t>(E.arrow_count()));
  for (int a = 0; a < E.arrow_count(); ++a) {
    const EnvObject& src = env.objects[static_cast<size_t>(E.arrow(a).src)];
    const EnvObject& tgt = env.objects[static_cast<size_t>(E.arrow(a).tgt)];
    const EnvArrowData& ad = env.arrows[static_cast<size_t>(a)];
    const auto src_tuple = comparison_on_objects(src);
    const auto tgt_tuple = comparison_on_objects(tgt);

    // Fiber contents in source order, per shape index.
    std::vector<std::vector<int>> src_fiber(static_cast<size_t>(src.shape));
    std::vector<std::vector<int>> tgt_fiber(static_cast<size_t>(tgt.shape));
    for (int s = 1; s <= src.cm.arity; ++s)
      src_fiber[static_cast<size_t>(src.assign[static_cast<size_t>(s) - 1]) - 1]
          .push_back(s);
    for (int s = 1; s <= tgt.cm.arity; ++s)
      tgt_fiber[static_cast<size_t>(tgt.assign[static_cast<size_t>(s) - 1]) - 1]
          .push_back(s);

    std::vector<std::vector<int>> components(static_cast<size_t>(tgt.shape));
    for (int tp = 1; tp <= tgt.shape; ++tp) {
      std::vector<int>& img = components[static_cast<size_t>(tp) - 1];
      FPlusObject union_obj;
      for (int t = 1; t <= src.shape; ++t) {
        if (ad.shape_map(t) != tp) continue;
        for (int s : src_fiber[static_cast<size_t>(t) - 1]) {
          if ((src.cm.marked >> (s - 1)) & 1u)
            union_obj.marked |= 1u << union_obj.carrier;
          ++union_obj.carrier;
          const int us = ad.u(s);
          const auto& fiber = tgt_fiber[static_cast<size_t>(tp) - 1];
          auto it = std::find(fiber.begin(), fiber.end(), us);
          if (it == fiber.end())
            return Verdict::fail("comparison_ill_defined",
                                 {{"arrow", E.arrow(a).name},
                                  {"element", s},
                                  {"reason", "image outside the expected fiber"}},
                                 counts);
          img.push_back(static_cast<int>(it - fiber.begin()) + 1);
        }
      }
      if (!is_fplus_morphism(img, union_obj, tgt_tuple[static_cast<size_t>(tp) - 1]))
        return Verdict::fail("comparison_not_marked_bijective",
                             {{"arrow", E.arrow(a).name}, {"component", tp}},
                             counts);
    }

    std::vector<int> key{object_map[static_cast<size_t>(E.arrow(a).src)],
                         object_map[static_cast<size_t>(E.arrow(a).tgt)],
                         env.fib.base_of_arrow(a)};
    for (const auto& c : components) key.insert(key.end(), c.begin(), c.end());
    // Find the arrow on the marked-set side with exactly this payload.
    int found = -1;
    for (int pa : P.arrows_between(object_map[static_cast<size_t>(E.arrow(a).src)],
                                   object_map[static_cast<size_t>(E.arrow(a).tgt)])) {
      if (fp.fib.base_of_arrow(pa) != env.fib.base_of_arrow(a)) continue;
      if (fp.arrows[static_cast<size_t>(pa)].components == components) {
        found = pa;
        break;
      }
    }
    if (found < 0)
      return Verdict::fail("comparison_arrow_missing",
                           {{"arrow", E.arrow(a).name}}, counts);
    arrow_map[static_cast<size_t>(a)] = found;
  }

  FunctorData F{env.fib.total, fp.fib.total, object_map, arrow_map};
  if (Verdict vf = check_functor(F); !vf)
    return Verdict::fail("comparison_not_functorial", vf.to_json(), counts);
  Verdict iso = categories_isomorphic(F);
  if (!iso) return Verdict::fail("not_isomorphic", iso.to_json(), counts);
  return Verdict::ok(counts);
}

}  // namespace opcheck
