#pragma once

// Test instances: cycles, grid tori, closed orientable surfaces of any genus,
// and k-nearest-neighbour graphs on points sampled from embedded surfaces.

#include <cstdint>
#include <string>

#include "covtrick/metric_space.hpp"

namespace covtrick {

/// C_k with unit edges and weights, dimension 1.
MetricSpace gen_cycle(int k);

/// m x m torus grid, unit edges and weights, dimension 2. With faces, every
/// square is split along the diagonal (i, j) -> (i+1, j+1).
MetricSpace gen_grid_torus(int m, bool with_faces);

/// Closed orientable genus-g surface. The 4g-gon with boundary word
/// a1 b1 a1^-1 b1^-1 ... is cut into 8g triangles (centre, corner, side
/// midpoint) and then barycentrically subdivided `subdiv` times; one
/// subdivision already yields a simplicial complex. Unit edges and weights.
MetricSpace gen_genus_surface(int g, int subdiv);

enum class SampledKind { torus_embed, sphere_embed };

SampledKind parse_sampled_kind(const std::string& name);
std::string to_string(SampledKind kind);

struct SampledInstance {
  MetricSpace space;
  int knn_used;  // after connectivity retries
};

/// `count` seeded uniform points on a torus (radii 2 and 1) or the unit
/// sphere, joined by a symmetric k-nearest-neighbour graph with Euclidean
/// lengths. Each vertex weighs area / count. A disconnected graph is retried
/// with knn + 2, at most three times.
SampledInstance gen_sampled(SampledKind kind, int count, int knn, std::uint64_t seed);

}  // namespace covtrick
