#include "opcheck/finset.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace opcheck {

std::string PointedSet::name() const {
  return "<" + std::to_string(arity) + ">";
}

bool PointedMap::well_formed() const {
  if (src_arity < 0 || tgt_arity < 0) return false;
  if (static_cast<int>(img.size()) != src_arity) return false;
  for (int v : img)
    if (v < 0 || v > tgt_arity) return false;
  return true;
}

PointedMap PointedMap::identity(int n) {
  PointedMap f{n, n, {}};
  f.img.resize(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) f.img[static_cast<size_t>(i) - 1] = i;
  return f;
}

PointedMap compose(const PointedMap& g, const PointedMap& f) {
  if (f.tgt_arity != g.src_arity)
    throw std::invalid_argument("compose: target of f is " + f.target().name() +
                                " but source of g is " + g.source().name());
  PointedMap h{f.src_arity, g.tgt_arity, {}};
  h.img.resize(f.img.size());
  for (size_t i = 0; i < f.img.size(); ++i) h.img[i] = g(f.img[i]);
  return h;
}

std::vector<PointedMap> enumerate_maps(PointedSet S, PointedSet T) {
  const int m = S.arity, n = T.arity;
  std::vector<PointedMap> out;
  std::vector<int> img(static_cast<size_t>(m), 0);
  while (true) {
    out.push_back(PointedMap{m, n, img});
    int pos = m - 1;
    while (pos >= 0 && img[static_cast<size_t>(pos)] == n) {
      img[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++img[static_cast<size_t>(pos)];
  }
  return out;
}

MapClass classify(const PointedMap& f) {
  MapClass c;
  std::vector<int> fiber(static_cast<size_t>(f.tgt_arity) + 1, 0);
  for (int v : f.img) ++fiber[static_cast<size_t>(v)];
  c.inert = true;
  for (int v = 1; v <= f.tgt_arity; ++v)
    if (fiber[static_cast<size_t>(v)] != 1) c.inert = false;
  c.active = fiber[0] == 0;
  return c;
}

Factorization factorize(const PointedMap& f) {
  std::vector<int> survivors;  // elements of S° not killed, in numeric order
  for (int i = 1; i <= f.src_arity; ++i)
    if (f(i) != 0) survivors.push_back(i);
  const int k = static_cast<int>(survivors.size());

  PointedMap inert_part{f.src_arity, k, std::vector<int>(static_cast<size_t>(f.src_arity), 0)};
  for (int j = 0; j < k; ++j)
    inert_part.img[static_cast<size_t>(survivors[static_cast<size_t>(j)]) - 1] = j + 1;

  PointedMap active_part{k, f.tgt_arity, {}};
  active_part.img.reserve(static_cast<size_t>(k));
  for (int s : survivors) active_part.img.push_back(f(s));

  return {inert_part, active_part};
}

PointedMap rho(int n, int i) {
  if (i < 1 || i > n) throw std::invalid_argument("rho: index out of range");
  PointedMap f{n, 1, std::vector<int>(static_cast<size_t>(n), 0)};
  f.img[static_cast<size_t>(i) - 1] = 1;
  return f;
}

int subset_size(std::uint32_t mask) { return std::popcount(mask); }

std::vector<int> subset_elements(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 1; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

std::string subset_to_string(std::uint32_t mask) {
  std::string s;
  for (int e : subset_elements(mask)) {
    if (!s.empty()) s += ',';
    s += std::to_string(e);
  }
  return s;
}

std::size_t CubeDiagram::index_of(std::uint32_t mask) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == mask) return i;
  throw std::invalid_argument("CubeDiagram: no vertex " + subset_to_string(mask));
}

PointedSet CubeDiagram::vertex_set(std::uint32_t mask) const {
  index_of(mask);
  return {subset_size(mask)};
}

PointedMap CubeDiagram::edge_map(std::uint32_t from, std::uint32_t to) const {
  index_of(from);
  index_of(to);
  if ((to & ~from) != 0)
    throw std::invalid_argument("CubeDiagram: edge requires to ⊆ from");
  const auto from_elems = subset_elements(from);
  const auto to_elems = subset_elements(to);
  PointedMap f{subset_size(from), subset_size(to),
               std::vector<int>(from_elems.size(), 0)};
  for (size_t j = 0; j < from_elems.size(); ++j) {
    auto it = std::find(to_elems.begin(), to_elems.end(), from_elems[j]);
    if (it != to_elems.end())
      f.img[j] = static_cast<int>(it - to_elems.begin()) + 1;
  }
  return f;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> CubeDiagram::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t v : vertices)
    for (std::uint32_t w : vertices)
      if (w != v && (w & ~v) == 0) out.emplace_back(v, w);
  return out;
}

namespace {
std::vector<std::uint32_t> sorted_masks(std::vector<std::uint32_t> masks) {
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });
  return masks;
}
}  // namespace

CubeDiagram inert_cube(PointedSet S) {
  if (S.arity < 0 || S.arity > 20)
    throw std::invalid_argument("inert_cube: arity out of range");
  std::vector<std::uint32_t> masks;
  const std::uint32_t full = (1u << S.arity) - 1u;
  for (std::uint32_t v = 0; v <= full; ++v) masks.push_back(v);
  return {S.arity, sorted_masks(std::move(masks))};
}

CubeDiagram subcube(const CubeDiagram& cube, std::uint32_t u1, std::uint32_t u2) {
  if ((u1 & ~u2) != 0)
    throw std::invalid_argument("subcube: U1 must be a subset of U2");
  cube.index_of(u1);
  cube.index_of(u2);
  std::vector<std::uint32_t> masks;
  for (std::uint32_t v : cube.vertices)
    if ((u1 & ~v) == 0 && (v & ~u2) == 0) masks.push_back(v);
  return {cube.ambient_arity, sorted_masks(std::move(masks))};
}

std::string to_string(const PointedMap& f) {
  std::string s = std::to_string(f.src_arity) + "->" + std::to_string(f.tgt_arity) + ":";
  for (size_t i = 0; i < f.img.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(f.img[i]);
  }
  return s;
}

PointedMap parse_pointed_map(const std::string& text) {
  const auto arrow = text.find("->");
  const auto colon = text.find(':', arrow == std::string::npos ? 0 : arrow + 2);
  if (arrow == std::string::npos || colon == std::string::npos)
    throw std::invalid_argument("map notation must look like \"2->1:1,0\": " + text);
  PointedMap f;
  try {
    f.src_arity = std::stoi(text.substr(0, arrow));
    f.tgt_arity = std::stoi(text.substr(arrow + 2, colon - arrow - 2));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad arity in map notation: " + text);
  }
  std::string rest = text.substr(colon + 1);
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        f.img.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad image entry in map notation: " + text);
      }
    }
  }
  if (!f.well_formed())
    throw std::invalid_argument("ill-formed pointed map: " + text);
  return f;
}

}  // namespace opcheck
