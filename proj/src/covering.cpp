#include "covtrick/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "covtrick/bounds.hpp"

namespace covtrick {

namespace {

struct GrowthProbe {
  const MetricSpace& space;
  Vertex center;
  double alpha;

  double vol_at(double r) const { return dilated_volume(space, center, r, 1); }
  double vol5_at(double r) const { return dilated_volume(space, center, r, 5); }
  bool admissible(double r) const { return vol5_at(r) <= alpha * vol_at(r); }
};

/// Largest R0 / 5^k in [lo, hi), if any.
std::optional<std::pair<double, int>> largest_scale_in(double r0, double lo, double hi) {
  int k = 0;
  double scale = r0;
  while (!(scale < hi)) {
    ++k;
    scale = five_adic_scale(r0, k);
  }
  if (scale >= lo && scale > 0.0) return std::make_pair(scale, k);
  return std::nullopt;
}

/// Weight of the marked vertices, summed in vertex order.
double union_volume(const MetricSpace& s, const std::vector<char>& marked) {
  double total = 0.0;
  for (Vertex v = 0; v < s.vertex_count(); ++v) {
    if (marked[v]) total += s.weight(v);
  }
  return total;
}

}  // namespace

double five_adic_scale(double r0, int k) {
  return r0 / std::pow(5.0, k);
}

int k_index(double r, double r0) {
  if (!(r > 0.0) || !(r <= r0)) {
    throw InputError("k-index needs 0 < R <= R0");
  }
  if (r == r0) return 0;
  int k = 1;
  while (five_adic_scale(r0, k) > r) ++k;
  return k;
}

AdmissibleBall admissible_radius(const MetricSpace& s, Vertex p, double r0, double alpha) {
  if (!(r0 > 0.0)) throw InputError("R0 must be positive");
  if (!(alpha > 1.0)) throw InputError("no admissible radius: alpha must exceed 1");

  std::vector<double> grid{r0};
  for (double d : s.distances_from(p)) {
    if (d == 0.0 || d == kInfinity) continue;
    if (d <= r0) grid.push_back(d);
    if (d / 5.0 <= r0) grid.push_back(d / 5.0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const GrowthProbe probe{s, p, alpha};
  std::optional<std::size_t> last;
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (probe.admissible(grid[i])) {
      last = i;
      break;
    }
  }

  AdmissibleBall result;
  result.alpha_used = alpha;
  double radius = 0.0;
  if (last && *last + 1 == grid.size()) {
    radius = r0;
    result.sup_radius = r0;
    result.sup_attained = true;
  } else {
    // The admissible set ends with [lo, hi) and hi is not admissible.
    const double lo = last ? grid[*last] : 0.0;
    const double hi = last ? grid[*last + 1] : grid.front();
    const auto scale = largest_scale_in(r0, lo, hi);
    radius = scale ? scale->first : lo;
    result.sup_radius = hi;
    result.sup_attained = false;
  }

  result.ball = ball(s, p, radius);
  result.vol_R = result.ball.volume;
  result.vol_5R = probe.vol5_at(radius);
  result.k = k_index(radius, r0);
  if (!(result.vol_5R <= alpha * result.vol_R)) {
    throw std::logic_error("admissible radius search returned a non-admissible radius");
  }
  return result;
}

double empirical_beta(const MetricSpace& s, double r0) {
  if (!(r0 > 0.0)) throw InputError("R0 must be positive");
  const int n = s.dimension();
  double best = kInfinity;
  for (Vertex p = 0; p < s.vertex_count(); ++p) {
    double volume = s.weight(p);
    for (double b : breakpoints(s, p, r0)) {
      best = std::min(best, volume / std::pow(b, n));
      volume = dilated_volume(s, p, b, 1);
    }
    best = std::min(best, volume / std::pow(r0, n));
  }
  return best;
}

ThetaAlpha theta_alpha(double volume, double beta, double r0, int n) {
  const double theta = bounds::theta_exponent(volume, beta, r0, n);
  return {theta, std::pow(5.0, n + theta)};
}

BallSystem build_system(const MetricSpace& s, std::span<const Vertex> carrier, double r0,
                        double alpha) {
  if (carrier.empty()) throw InputError("empty carrier: no ball centers available");
  BallSystem sys;
  sys.r0 = r0;
  sys.alpha = alpha;
  sys.carrier.assign(carrier.begin(), carrier.end());
  std::sort(sys.carrier.begin(), sys.carrier.end());
  sys.carrier.erase(std::unique(sys.carrier.begin(), sys.carrier.end()), sys.carrier.end());
  for (auto v : sys.carrier) {
    if (v >= s.vertex_count()) throw InputError("carrier vertex out of range");
  }

  std::vector<AdmissibleBall> candidates;
  candidates.reserve(sys.carrier.size());
  for (auto v : sys.carrier) candidates.push_back(admissible_radius(s, v, r0, alpha));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const AdmissibleBall& a, const AdmissibleBall& b) {
                     if (a.radius() != b.radius()) return a.radius() > b.radius();
                     return a.center() < b.center();
                   });

  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(s.vertex_count(), kFree);
  for (auto& candidate : candidates) {
    std::size_t witness = kFree;
    for (auto x : candidate.ball.members) witness = std::min(witness, owner[x]);
    if (witness == kFree) {
      for (auto x : candidate.ball.members) owner[x] = sys.balls.size();
      sys.balls.push_back(std::move(candidate));
    } else {
      sys.rejected.push_back({candidate.center(), candidate.radius(), witness});
    }
  }
  return sys;
}

BallSystem build_system(const MetricSpace& s, const HomologyBasis& basis, double r0,
                        double alpha) {
  if (basis.loops.empty()) throw InputError("empty homology basis");
  return build_system(s, basis.carrier, r0, alpha);
}

std::vector<Ball> doubled_balls(const MetricSpace& s, const BallSystem& sys) {
  std::vector<Ball> out;
  out.reserve(sys.balls.size());
  for (const auto& b : sys.balls) out.push_back(dilated_ball(s, b.center(), b.radius(), 2));
  return out;
}

bool doubled_cover_check(const MetricSpace& s, const BallSystem& sys) {
  std::vector<char> covered(s.vertex_count(), 0);
  for (const auto& b : doubled_balls(s, sys)) {
    for (auto x : b.members) covered[x] = 1;
  }
  return std::all_of(sys.carrier.begin(), sys.carrier.end(),
                     [&](Vertex v) { return covered[v] != 0; });
}

std::vector<std::pair<std::size_t, std::size_t>> nerve_edges(const MetricSpace& s,
                                                            const BallSystem& sys) {
  const auto doubled = doubled_balls(s, sys);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<char> mark(s.vertex_count(), 0);
  for (std::size_t i = 0; i < doubled.size(); ++i) {
    for (auto x : doubled[i].members) mark[x] = 1;
    for (std::size_t j = i + 1; j < doubled.size(); ++j) {
      const auto& members = doubled[j].members;
      if (std::any_of(members.begin(), members.end(), [&](Vertex x) { return mark[x]; })) {
        out.emplace_back(i, j);
      }
    }
    for (auto x : doubled[i].members) mark[x] = 0;
  }
  return out;
}

NerveStats nerve_stats(const MetricSpace& s, const BallSystem& sys) {
  const auto edges = nerve_edges(s, sys);
  NerveStats stats;
  stats.balls = sys.balls.size();
  stats.pairs = edges.size();
  std::vector<std::size_t> parent(stats.balls);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  stats.components = stats.balls;
  for (const auto& [a, b] : edges) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --stats.components;
    }
  }
  return stats;
}

bool containment_check(const MetricSpace& s, const BallSystem& sys) {
  auto contained = [&](std::size_t small, std::size_t large) {
    const auto& dist = s.distances_from(sys.balls[large].center());
    const double r = sys.balls[large].radius();
    const auto& members = sys.balls[small].ball.members;
    return std::all_of(members.begin(), members.end(),
                       [&](Vertex x) { return dist[x] / 5.0 <= r; });
  };
  for (const auto& [a, b] : nerve_edges(s, sys)) {
    const double ra = sys.balls[a].radius();
    const double rb = sys.balls[b].radius();
    if (ra <= rb && !contained(a, b)) return false;
    if (rb <= ra && !contained(b, a)) return false;
  }
  return true;
}

std::size_t charged_side(const BallSystem& sys, std::size_t a, std::size_t b) {
  const auto& x = sys.balls[a];
  const auto& y = sys.balls[b];
  if (x.radius() != y.radius()) return x.radius() > y.radius() ? a : b;
  return x.center() < y.center() ? a : b;
}

ChainReport verify_chain(const MetricSpace& s, const BallSystem& sys, double beta_hat) {
  ChainReport report;
  report.n = s.dimension();
  report.volume = total_volume(s);
  report.beta_hat = beta_hat;
  report.r0 = sys.r0;
  report.alpha = sys.alpha;
  const int n = report.n;
  const std::size_t count = sys.balls.size();

  std::vector<double> vol_r(count), vol_5r(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto& b = sys.balls[j];
    vol_r[j] = dilated_volume(s, b.center(), b.radius(), 1);
    vol_5r[j] = dilated_volume(s, b.center(), b.radius(), 5);
    report.sum_vol_R += vol_r[j];
    report.sum_vol_5R += vol_5r[j];
  }

  // L1: the R-balls are disjoint, so their volumes fit inside V. The union
  // volume is summed in vertex order, like V, so that rounding preserves the
  // comparison; for disjoint balls it equals sum_vol_R.
  bool disjoint = true;
  std::vector<char> in_union(s.vertex_count(), 0);
  for (const auto& b : sys.balls) {
    for (auto x : b.ball.members) {
      if (in_union[x]) disjoint = false;
      in_union[x] = 1;
    }
  }
  report.l1_disjoint_volume = disjoint && report.volume >= union_volume(s, in_union);

  // L2: admissibility of every ball.
  report.l2_admissible = true;
  for (std::size_t j = 0; j < count; ++j) {
    if (!(vol_5r[j] <= sys.alpha * vol_r[j])) report.l2_admissible = false;
  }

  // L3: each pair is charged once, to its larger ball, whose 5R-ball holds
  // the smaller R-ball. Charged balls are disjoint, so their total is the
  // volume of their union, again summed in vertex order.
  const auto edges = nerve_edges(s, sys);
  report.pairs = edges.size();
  std::vector<std::vector<std::size_t>> charged(count);
  std::vector<char> charged_neighbor(count, 0);
  for (const auto& [a, b] : edges) {
    const std::size_t j = charged_side(sys, a, b);
    const std::size_t i = j == a ? b : a;
    charged[j].push_back(i);
    charged_neighbor[i] = 1;
  }
  report.l3_containment = true;
  std::vector<char> mark(s.vertex_count(), 0);
  for (std::size_t j = 0; j < count; ++j) {
    for (auto i : charged[j]) {
      for (auto x : sys.balls[i].ball.members) mark[x] = 1;
    }
    const double charged_volume = union_volume(s, mark);
    for (auto i : charged[j]) {
      for (auto x : sys.balls[i].ball.members) mark[x] = 0;
    }
    report.double_sum += charged_volume;
    if (!(vol_5r[j] >= charged_volume)) report.l3_containment = false;
  }

  const double ratio = bounds::volume_ratio(report.volume, beta_hat, sys.r0, n);
  if (ratio >= 1.0) {
    report.theta = bounds::theta_exponent(report.volume, beta_hat, sys.r0, n);
    report.t_bound = bounds::t_upper_bound(report.volume, beta_hat, sys.r0, n);
  }
  try {
    report.k_bound = bounds::k_upper_bound(report.volume, beta_hat, sys.r0, n, sys.alpha);
  } catch (const DomainError&) {
    report.k_bound.reset();
  }

  // L4 and L5 range over balls that appear as charged neighbours.
  report.l4_density = true;
  report.l5_scale = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (!charged_neighbor[i]) continue;
    const double r = sys.balls[i].radius();
    if (!(vol_r[i] / std::pow(r, n) >= beta_hat)) report.l4_density = false;
    const int k = k_index(r, sys.r0);
    report.max_charged_k = std::max(report.max_charged_k, k);
    const bool below_bound = report.k_bound ? k < *report.k_bound : k == 0;
    if (k != sys.balls[i].k || r < five_adic_scale(sys.r0, k) || !below_bound) {
      report.l5_scale = false;
    }
  }

  report.chain_bound =
      sys.alpha * report.volume /
      (beta_hat * std::pow(five_adic_scale(sys.r0, report.max_charged_k), n));
  const auto t = static_cast<double>(report.pairs);
  report.t_within_chain_bound = t <= report.chain_bound;
  report.t_within_t_bound = report.t_bound && t <= *report.t_bound;

  if (!report.l1_disjoint_volume) report.failed_links.emplace_back("L1");
  if (!report.l2_admissible) report.failed_links.emplace_back("L2");
  if (!report.l3_containment) report.failed_links.emplace_back("L3");
  if (!report.l4_density) report.failed_links.emplace_back("L4");
  if (!report.l5_scale) report.failed_links.emplace_back("L5");
  return report;
}

}  // namespace covtrick
