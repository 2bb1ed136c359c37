#include "covtrick/topology.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

namespace covtrick {

namespace {

struct Candidate {
  double length;
  std::vector<Vertex> cycle;  // canonical, open (no repeated endpoint)
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.length != b.length) return a.length < b.length;
  return a.cycle < b.cycle;
}

Loop closed_loop(const MetricSpace& s, const std::vector<Vertex>& cycle) {
  std::vector<Vertex> walk = cycle;
  walk.push_back(cycle.front());
  return make_loop(s, std::move(walk));
}

/// Shortest-path tree rooted at `root`: parent vertex and parent edge.
struct Tree {
  std::vector<double> dist;
  std::vector<Vertex> parent;
  std::vector<std::size_t> parent_edge;
};

constexpr Vertex kNoVertex = static_cast<Vertex>(-1);
constexpr std::size_t kNoEdge = static_cast<std::size_t>(-1);

Tree shortest_path_tree(const MetricSpace& s, Vertex root) {
  const std::size_t n = s.vertex_count();
  Tree t{std::vector<double>(n, kInfinity), std::vector<Vertex>(n, kNoVertex),
         std::vector<std::size_t>(n, kNoEdge)};
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  t.dist[root] = 0.0;
  queue.emplace(0.0, root);
  const auto edges = s.edges();
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > t.dist[u]) continue;
    for (const auto& adj : s.neighbors(u)) {
      const double candidate = d + edges[adj.edge].length;
      if (candidate < t.dist[adj.to]) {
        t.dist[adj.to] = candidate;
        t.parent[adj.to] = u;
        t.parent_edge[adj.to] = adj.edge;
        queue.emplace(candidate, adj.to);
      }
    }
  }
  return t;
}

/// All distinct fundamental cycles of all shortest-path trees, sorted by
/// (length, canonical sequence).
std::vector<Candidate> candidate_cycles(const MetricSpace& s) {
  std::set<std::vector<Vertex>> seen;
  std::vector<Candidate> out;
  const std::size_t n = s.vertex_count();
  std::vector<std::size_t> stamp(n, 0);
  std::size_t epoch = 0;
  const auto edges = s.edges();
  for (Vertex root = 0; root < n; ++root) {
    const Tree t = shortest_path_tree(s, root);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Vertex u = edges[e].u;
      const Vertex v = edges[e].v;
      if (t.dist[u] == kInfinity) continue;
      if (t.parent_edge[u] == e || t.parent_edge[v] == e) continue;
      ++epoch;
      for (Vertex x = u; x != kNoVertex; x = t.parent[x]) stamp[x] = epoch;
      std::vector<Vertex> down;  // v up to (excluding) the meeting vertex
      Vertex w = v;
      while (stamp[w] != epoch) {
        down.push_back(w);
        w = t.parent[w];
      }
      std::vector<Vertex> cycle;
      for (Vertex x = u; x != w; x = t.parent[x]) cycle.push_back(x);
      cycle.push_back(w);
      cycle.insert(cycle.end(), down.rbegin(), down.rend());
      auto canon = canonical_cycle(std::move(cycle));
      if (!seen.insert(canon).second) continue;
      const double length = closed_loop(s, canon).length;
      out.push_back({length, std::move(canon)});
    }
  }
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

std::vector<Vertex> carrier_of(const std::vector<Loop>& loops) {
  std::vector<Vertex> carrier;
  for (const auto& loop : loops) {
    carrier.insert(carrier.end(), loop.vertices.begin(), loop.vertices.end());
  }
  std::sort(carrier.begin(), carrier.end());
  carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
  return carrier;
}

}  // namespace

std::vector<Vertex> canonical_cycle(std::vector<Vertex> cycle) {
  if (cycle.empty()) return cycle;
  const auto start = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), start, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1]) {
    std::reverse(cycle.begin() + 1, cycle.end());
  }
  return cycle;
}

Loop make_loop(const MetricSpace& s, std::vector<Vertex> walk) {
  if (walk.size() < 2) throw InputError("loop needs at least one edge");
  if (walk.front() != walk.back()) throw InputError("loop is not closed");
  Loop loop;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (walk[i] >= s.vertex_count() || walk[i + 1] >= s.vertex_count()) {
      throw InputError("loop references an unknown vertex");
    }
    const auto e = s.edge_between(walk[i], walk[i + 1]);
    if (!e) {
      throw InputError("loop steps between non-adjacent vertices " +
                       std::to_string(s.id(walk[i])) + " and " +
                       std::to_string(s.id(walk[i + 1])));
    }
    loop.edges.push_back(*e);
    loop.length += s.edges()[*e].length;
  }
  loop.vertices = std::move(walk);
  return loop;
}

BitVector cycle_vector(const MetricSpace& s, const Loop& loop) {
  BitVector v(s.edge_count());
  for (auto e : loop.edges) v.flip(e);
  return v;
}

Gf2Basis face_boundary_basis(const MetricSpace& s) {
  Gf2Basis basis(s.edge_count());
  for (const auto& sides : s.face_edges()) {
    BitVector v(s.edge_count());
    for (auto e : sides) v.flip(e);
    basis.insert(std::move(v));
  }
  return basis;
}

std::size_t betti1(const MetricSpace& s) {
  const std::size_t cycle_rank =
      s.edge_count() + s.component_count() - s.vertex_count();
  return cycle_rank - face_boundary_basis(s).rank();
}

HomologyBasis homology_basis(const MetricSpace& s) {
  const std::size_t b = betti1(s);
  HomologyBasis result;
  if (b == 0) return result;
  Gf2Basis span = face_boundary_basis(s);
  for (const auto& candidate : candidate_cycles(s)) {
    Loop loop = closed_loop(s, candidate.cycle);
    if (span.insert(cycle_vector(s, loop))) {
      result.loops.push_back(std::move(loop));
      if (result.loops.size() == b) break;
    }
  }
  result.carrier = carrier_of(result.loops);
  return result;
}

HomologyBasis basis_from_loops(const MetricSpace& s, std::vector<Loop> loops) {
  const std::size_t b = betti1(s);
  if (loops.size() != b) {
    throw InputError("marked loops: expected " + std::to_string(b) +
                     " loops (betti1), got " + std::to_string(loops.size()));
  }
  Gf2Basis span = face_boundary_basis(s);
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (!span.insert(cycle_vector(s, loops[i]))) {
      throw InputError("marked loop " + std::to_string(i) +
                       " is trivial or dependent on earlier loops");
    }
  }
  HomologyBasis result{std::move(loops), {}};
  result.carrier = carrier_of(result.loops);
  return result;
}

std::optional<double> systole(const MetricSpace& s) {
  if (betti1(s) == 0) return std::nullopt;
  const Gf2Basis faces = face_boundary_basis(s);
  for (const auto& candidate : candidate_cycles(s)) {
    const Loop loop = closed_loop(s, candidate.cycle);
    if (!faces.contains(cycle_vector(s, loop))) {
      std::vector<double> lengths;
      for (auto e : loop.edges) lengths.push_back(s.edges()[e].length);
      std::sort(lengths.begin(), lengths.end());
      return std::accumulate(lengths.begin(), lengths.end(), 0.0);
    }
  }
  return std::nullopt;
}

bool is_trivial_cycle(const MetricSpace& s, const Loop& loop) {
  for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
    const auto e = s.edge_between(loop.vertices[i], loop.vertices[i + 1]);
    if (!e || i >= loop.edges.size() || *e != loop.edges[i]) {
      throw InputError("loop is not a valid walk in this instance");
    }
  }
  return face_boundary_basis(s).contains(cycle_vector(s, loop));
}

bool ball_contractible(const MetricSpace& s, const Ball& b) {
  if (b.members.empty()) return false;
  std::vector<char> inside(s.vertex_count(), 0);
  for (auto v : b.members) inside[v] = 1;

  std::vector<std::size_t> local(s.vertex_count(), 0);
  for (std::size_t i = 0; i < b.members.size(); ++i) local[b.members[i]] = i;
  std::vector<std::size_t> parent(b.members.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::size_t induced_edges = 0;
  std::size_t components = b.members.size();
  for (const auto& e : s.edges()) {
    if (!inside[e.u] || !inside[e.v]) continue;
    ++induced_edges;
    const auto a = find(local[e.u]);
    const auto c = find(local[e.v]);
    if (a != c) {
      parent[a] = c;
      --components;
    }
  }
  if (components != 1) return false;

  Gf2Basis faces(s.edge_count());
  const auto all_faces = s.faces();
  const auto sides = s.face_edges();
  for (std::size_t f = 0; f < all_faces.size(); ++f) {
    const auto& face = all_faces[f];
    if (!inside[face[0]] || !inside[face[1]] || !inside[face[2]]) continue;
    BitVector v(s.edge_count());
    for (auto e : sides[f]) v.flip(e);
    faces.insert(std::move(v));
  }
  const std::size_t cycle_rank = induced_edges + 1 - b.members.size();
  return cycle_rank == faces.rank();
}

double systolic_ratio(const MetricSpace& s) {
  if (s.dimension() != 2) {
    throw InputError("systolic ratio needs a 2-dimensional instance");
  }
  const auto sys = systole(s);
  if (!sys) throw DomainError("no systole: betti1 is zero");
  return total_volume(s) / (*sys * *sys);
}

}  // namespace covtrick
