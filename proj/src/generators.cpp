#include "covtrick/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace covtrick {

namespace {

std::vector<VertexSpec> unit_vertices(std::size_t count) {
  std::vector<VertexSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back({static_cast<std::int64_t>(i), 1.0});
  return out;
}

/// Triangulated surface where distinct edges or triangles may share vertex
/// sets. Triangle sides: e[0] = (v0, v1), e[1] = (v1, v2), e[2] = (v2, v0).
struct DeltaComplex {
  struct Triangle {
    std::array<std::size_t, 3> v;
    std::array<std::size_t, 3> e;
  };
  std::size_t vertex_count = 0;
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<Triangle> triangles;
};

DeltaComplex polygon_complex(int g) {
  const std::size_t letters = 2 * static_cast<std::size_t>(g);
  const std::size_t sides = 4 * static_cast<std::size_t>(g);
  constexpr std::size_t corner = 0;
  constexpr std::size_t centre = 1;
  auto mid = [](std::size_t letter) { return 2 + letter; };

  DeltaComplex c;
  c.vertex_count = 2 + letters;
  std::vector<std::size_t> tail_half(letters), head_half(letters);
  for (std::size_t x = 0; x < letters; ++x) {
    tail_half[x] = c.edges.size();
    c.edges.push_back({corner, mid(x)});
    head_half[x] = c.edges.size();
    c.edges.push_back({mid(x), corner});
  }
  std::vector<std::size_t> corner_ray(sides), mid_ray(sides);
  for (std::size_t k = 0; k < sides; ++k) {
    corner_ray[k] = c.edges.size();
    c.edges.push_back({centre, corner});
  }

  // Boundary word a_i b_i a_i^-1 b_i^-1: side s carries letter and sign.
  for (std::size_t s = 0; s < sides; ++s) {
    const std::size_t block = s / 4;
    const std::size_t pos = s % 4;
    const std::size_t letter = 2 * block + (pos % 2);
    const bool forward = pos < 2;
    mid_ray[s] = c.edges.size();
    c.edges.push_back({centre, mid(letter)});
    const std::size_t first = forward ? tail_half[letter] : head_half[letter];
    const std::size_t second = forward ? head_half[letter] : tail_half[letter];
    c.triangles.push_back({{centre, corner, mid(letter)}, {corner_ray[s], first, mid_ray[s]}});
    c.triangles.push_back({{centre, mid(letter), corner},
                           {mid_ray[s], second, corner_ray[(s + 1) % sides]}});
  }
  return c;
}

/// Barycentric subdivision. Needs every edge to have distinct endpoints and
/// every triangle distinct vertices and sides; the result is simplicial.
DeltaComplex subdivide(const DeltaComplex& c) {
  const std::size_t old_v = c.vertex_count;
  const std::size_t old_e = c.edges.size();
  auto edge_point = [&](std::size_t e) { return old_v + e; };
  auto tri_point = [&](std::size_t t) { return old_v + old_e + t; };

  DeltaComplex out;
  out.vertex_count = old_v + old_e + c.triangles.size();
  // Halves of old edge e: 2e at endpoint edges[e][0], 2e + 1 at edges[e][1].
  for (std::size_t e = 0; e < old_e; ++e) {
    if (c.edges[e][0] == c.edges[e][1]) throw std::logic_error("loop edge in subdivision");
    out.edges.push_back({c.edges[e][0], edge_point(e)});
    out.edges.push_back({c.edges[e][1], edge_point(e)});
  }
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const auto& tri = c.triangles[t];
    const std::size_t base = out.edges.size();
    for (int i = 0; i < 3; ++i) out.edges.push_back({tri.v[i], tri_point(t)});
    for (int j = 0; j < 3; ++j) out.edges.push_back({edge_point(tri.e[j]), tri_point(t)});
    for (int j = 0; j < 3; ++j) {
      const std::size_t e = tri.e[j];
      const std::array<int, 2> ends{j, (j + 1) % 3};
      for (int end : ends) {
        const std::size_t x = tri.v[end];
        std::size_t half;
        if (c.edges[e][0] == x) {
          half = 2 * e;
        } else if (c.edges[e][1] == x) {
          half = 2 * e + 1;
        } else {
          throw std::logic_error("triangle side does not contain its vertex");
        }
        out.triangles.push_back(
            {{x, edge_point(e), tri_point(t)}, {half, base + 3 + j, base + end}});
      }
    }
  }
  return out;
}

MetricSpace to_metric_space(const DeltaComplex& c, int dimension) {
  std::vector<EdgeSpec> edges;
  edges.reserve(c.edges.size());
  for (const auto& e : c.edges) {
    edges.push_back({static_cast<std::int64_t>(e[0]), static_cast<std::int64_t>(e[1]), 1.0});
  }
  std::vector<FaceSpec> faces;
  faces.reserve(c.triangles.size());
  for (const auto& t : c.triangles) {
    faces.push_back({static_cast<std::int64_t>(t.v[0]), static_cast<std::int64_t>(t.v[1]),
                     static_cast<std::int64_t>(t.v[2])});
  }
  return MetricSpace(dimension, unit_vertices(c.vertex_count), std::move(edges),
                     std::move(faces));
}

struct Point3 {
  double x, y, z;
};

double euclidean(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Point3> sample_points(SampledKind kind, int count, std::mt19937_64& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<Point3> points;
  points.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(points.size()) < count) {
    if (kind == SampledKind::torus_embed) {
      constexpr double major = 2.0;
      constexpr double minor = 1.0;
      const double u = two_pi * unit_uniform(rng);
      const double v = two_pi * unit_uniform(rng);
      // Area element is proportional to (major + minor cos u).
      if (unit_uniform(rng) * (major + minor) > major + minor * std::cos(u)) continue;
      const double ring = major + minor * std::cos(u);
      points.push_back({ring * std::cos(v), ring * std::sin(v), minor * std::sin(u)});
    } else {
      const double z = 2.0 * unit_uniform(rng) - 1.0;
      const double phi = two_pi * unit_uniform(rng);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      points.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }
  return points;
}

}  // namespace

MetricSpace gen_cycle(int k) {
  if (k < 3) throw InputError("cycle needs at least 3 vertices");
  std::vector<EdgeSpec> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k, 1.0});
  return MetricSpace(1, unit_vertices(static_cast<std::size_t>(k)), std::move(edges));
}

MetricSpace gen_grid_torus(int m, bool with_faces) {
  if (m < 3) throw InputError("grid torus needs m >= 3");
  auto at = [m](int i, int j) -> std::int64_t {
    return static_cast<std::int64_t>(((i % m + m) % m) * m + ((j % m + m) % m));
  };
  std::vector<EdgeSpec> edges;
  std::vector<FaceSpec> faces;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      edges.push_back({at(i, j), at(i + 1, j), 1.0});
      edges.push_back({at(i, j), at(i, j + 1), 1.0});
    }
  }
  if (with_faces) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        edges.push_back({at(i, j), at(i + 1, j + 1), 1.0});
        faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
        faces.push_back({at(i, j), at(i, j + 1), at(i + 1, j + 1)});
      }
    }
  }
  return MetricSpace(2, unit_vertices(static_cast<std::size_t>(m) * m), std::move(edges),
                     std::move(faces));
}

MetricSpace gen_genus_surface(int g, int subdiv) {
  if (g < 1) throw InputError("genus must be at least 1");
  if (subdiv < 1) throw InputError("genus surface needs at least one subdivision");
  DeltaComplex complex = polygon_complex(g);
  for (int i = 0; i < subdiv; ++i) complex = subdivide(complex);
  return to_metric_space(complex, 2);
}

SampledKind parse_sampled_kind(const std::string& name) {
  if (name == "torus_embed") return SampledKind::torus_embed;
  if (name == "sphere_embed") return SampledKind::sphere_embed;
  throw InputError("unknown sampled kind '" + name + "' (torus_embed or sphere_embed)");
}

std::string to_string(SampledKind kind) {
  return kind == SampledKind::torus_embed ? "torus_embed" : "sphere_embed";
}

SampledInstance gen_sampled(SampledKind kind, int count, int knn, std::uint64_t seed) {
  if (knn < 1) throw InputError("knn must be positive");
  if (count < knn + 1) throw InputError("sampled instance needs count >= knn + 1");
  std::mt19937_64 rng(seed);
  const auto points = sample_points(kind, count, rng);
  const double area = kind == SampledKind::torus_embed
                          ? 4.0 * std::numbers::pi * std::numbers::pi * 2.0 * 1.0
                          : 4.0 * std::numbers::pi;
  const double weight = area / count;
  const auto n = static_cast<std::size_t>(count);

  // Neighbour lists by (distance, index), computed once for the largest knn.
  constexpr int kRetries = 3;
  const int max_knn = std::min(count - 1, knn + 2 * kRetries);
  std::vector<std::vector<std::size_t>> nearest(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.emplace_back(euclidean(points[i], points[j]), j);
    }
    std::partial_sort(order.begin(), order.begin() + max_knn, order.end());
    for (int t = 0; t < max_knn; ++t) nearest[i].push_back(order[t].second);
  }

  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    const int k = std::min(count - 1, knn + 2 * attempt);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (int t = 0; t < k; ++t) {
        const std::size_t j = nearest[i][t];
        pairs.emplace(std::min(i, j), std::max(i, j));
      }
    }
    std::vector<VertexSpec> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back({static_cast<std::int64_t>(i), weight});
    std::vector<EdgeSpec> edges;
    for (const auto& [a, b] : pairs) {
      edges.push_back({static_cast<std::int64_t>(a), static_cast<std::int64_t>(b),
                       euclidean(points[a], points[b])});
    }
    MetricSpace space(2, std::move(vertices), std::move(edges));
    if (space.component_count() == 1) return {std::move(space), k};
  }
  throw InputError("sampled k-nearest-neighbour graph stays disconnected after retries");
}

}  // namespace covtrick
