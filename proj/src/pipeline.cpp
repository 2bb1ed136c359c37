#include "covtrick/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "covtrick/bounds.hpp"
#include "covtrick/topology.hpp"

namespace covtrick {

namespace {

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

double parse_number(const std::string& text, const std::string& what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InputError("cannot parse " + what + " '" + text + "'");
  }
  return value;
}

double ball_diameter(const MetricSpace& s, const std::vector<Vertex>& members) {
  double best = 0.0;
  for (auto x : members) {
    const auto& row = s.distances_from(x);
    for (auto y : members) best = std::max(best, row[y]);
  }
  return best;
}

std::vector<std::int64_t> ids_of(const MetricSpace& s, const std::vector<Vertex>& vs) {
  std::vector<std::int64_t> out;
  out.reserve(vs.size());
  for (auto v : vs) out.push_back(s.id(v));
  return out;
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& value) {
  return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return ec == std::errc() ? std::string(buffer, ptr) : std::string("nan");
}

const char* to_string(R0Policy::Kind kind) {
  return kind == R0Policy::Kind::absolute ? "absolute" : "systole_fraction";
}

const char* to_string(AlphaPolicy::Kind kind) {
  return kind == AlphaPolicy::Kind::absolute ? "absolute" : "theta_rule";
}

bool hypotheses_hold(bool r0_small, bool contractible) { return r0_small && contractible; }

}  // namespace

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

R0Policy parse_r0_policy(const std::string& text) {
  if (text.rfind("abs:", 0) == 0) {
    const double r = parse_number(text.substr(4), "R0");
    if (!(r > 0.0)) throw InputError("absolute R0 must be positive");
    return R0Policy::absolute(r);
  }
  if (text.rfind("sys:", 0) == 0) {
    const double q = parse_number(text.substr(4), "systole fraction");
    if (!(q > 0.0)) throw InputError("systole fraction must be positive");
    return R0Policy::systole_fraction(q);
  }
  throw InputError("R0 policy must be abs:<radius> or sys:<fraction>, got '" + text + "'");
}

AlphaPolicy parse_alpha_policy(const std::string& text) {
  if (text == "theta") return AlphaPolicy::theta_rule();
  const double a = parse_number(text, "alpha");
  if (!(a > 1.0)) throw InputError("alpha must exceed 1");
  return AlphaPolicy::absolute(a);
}

PipelineReport run_pipeline(const Instance& instance, const PipelineOptions& options) {
  const MetricSpace& s = instance.space;
  PipelineReport report;
  report.instance_metadata = instance.metadata;
  report.instance_data = instance_to_json(instance);
  report.options = options;
  report.dimension = s.dimension();
  report.vertex_count = s.vertex_count();
  report.edge_count = s.edge_count();
  report.face_count = s.face_count();
  report.b1_notion = s.has_faces() ? "homology" : "graph_cycle_rank";
  report.volume = total_volume(s);

  stage("topology", [&] {
    report.b1 = betti1(s);
    report.systole = systole(s);
    if (report.systole && s.dimension() == 2) report.systolic_ratio = systolic_ratio(s);
  });

  const HomologyBasis basis = stage("homology_basis", [&] {
    HomologyBasis b;
    if (instance.marked_loops.empty()) {
      report.basis_source = "shortest";
      b = homology_basis(s);
    } else {
      report.basis_source = "marked";
      std::vector<Loop> loops;
      for (const auto& walk : instance.marked_loops) loops.push_back(make_loop(s, walk));
      b = basis_from_loops(s, std::move(loops));
    }
    if (b.loops.empty()) throw InputError("empty homology basis");
    return b;
  });
  for (const auto& loop : basis.loops) {
    report.basis.push_back(ids_of(s, loop.vertices));
    report.basis_lengths.push_back(loop.length);
  }
  report.carrier = ids_of(s, basis.carrier);

  report.r0 = stage("r0_policy", [&] {
    if (options.r0.kind == R0Policy::Kind::absolute) {
      if (!(options.r0.value > 0.0)) throw InputError("absolute R0 must be positive");
      return options.r0.value;
    }
    if (!report.systole) throw InputError("systole fraction needs a systole");
    if (!(options.r0.value > 0.0)) throw InputError("systole fraction must be positive");
    return options.r0.value * *report.systole;
  });

  report.beta_hat = stage("empirical_beta", [&] { return empirical_beta(s, report.r0); });

  report.alpha = stage("theta_alpha", [&] {
    if (options.alpha.kind == AlphaPolicy::Kind::absolute) {
      if (!(options.alpha.value > 1.0)) throw InputError("alpha must exceed 1");
      return options.alpha.value;
    }
    const auto ta = theta_alpha(report.volume, report.beta_hat, report.r0, s.dimension());
    return ta.alpha;
  });

  const BallSystem sys =
      stage("build_system", [&] { return build_system(s, basis, report.r0, report.alpha); });

  stage("nerve_stats", [&] {
    report.nerve_pairs = nerve_edges(s, sys);
    report.nerve = nerve_stats(s, sys);
    report.doubled_cover = doubled_cover_check(s, sys);
    const auto doubled = doubled_balls(s, sys);
    for (std::size_t j = 0; j < sys.balls.size(); ++j) {
      const auto& b = sys.balls[j];
      BallRecord rec;
      rec.center_id = s.id(b.center());
      rec.radius = b.radius();
      rec.k = b.k;
      rec.vol_R = b.vol_R;
      rec.vol_5R = b.vol_5R;
      rec.sup_radius = b.sup_radius;
      rec.sup_attained = b.sup_attained;
      rec.members = ids_of(s, b.ball.members);
      rec.doubled_members = ids_of(s, doubled[j].members);
      rec.dilated5_members = ids_of(s, dilated_ball(s, b.center(), b.radius(), 5).members);
      rec.diameter = ball_diameter(s, b.ball.members);
      rec.doubled_diameter = ball_diameter(s, doubled[j].members);
      rec.contractible = ball_contractible(s, b.ball);
      rec.doubled_contractible = ball_contractible(s, doubled[j]);
      report.balls.push_back(std::move(rec));
    }
    for (const auto& r : sys.rejected) {
      report.rejected.push_back({s.id(r.vertex), r.radius, r.witness});
    }
  });

  report.containment = stage("containment_check", [&] { return containment_check(s, sys); });

  report.chain = stage("verify_chain", [&] { return verify_chain(s, sys, report.beta_hat); });
  report.theta = report.chain.theta;
  report.k_bound = report.chain.k_bound;
  report.t_bound = report.chain.t_bound;
  report.chain_ok = report.chain.links_pass() && report.chain.t_within_chain_bound &&
                    report.chain.t_within_t_bound;

  stage("bounds", [&] {
    const auto b1 = static_cast<long long>(report.b1);
    const int n = s.dimension();
    report.main_lower_sqrt = bounds::main_lower_bound(b1, n, bounds::LowerBoundVariant::sqrt_b1);
    report.main_lower_sqrt_log =
        bounds::main_lower_bound(b1, n, bounds::LowerBoundVariant::sqrt_log_b1);
    report.durumeric = bounds::durumeric_bound(b1);
  });

  report.r0_below_quarter_systole = report.systole && report.r0 < *report.systole / 4.0;
  report.doubled_balls_contractible =
      std::all_of(report.balls.begin(), report.balls.end(),
                  [](const BallRecord& b) { return b.doubled_contractible; });
  report.balls_below_systole =
      report.systole && std::all_of(report.balls.begin(), report.balls.end(), [&](const auto& b) {
        return b.diameter < *report.systole && b.doubled_diameter < *report.systole;
      });

  const bool hypotheses =
      hypotheses_hold(report.r0_below_quarter_systole, report.doubled_balls_contractible);
  const auto b1 = static_cast<long long>(report.b1);
  const auto big_n = static_cast<long long>(report.nerve.balls);
  report.nerve_accounting = !hypotheses || b1 <= report.nerve.cycle_rank();
  report.pair_counting = !hypotheses || b1 <= big_n * (big_n - 1) / 2;
  return report;
}

nlohmann::ordered_json report_to_json(const PipelineReport& r) {
  using json = nlohmann::ordered_json;
  json doc;

  json instance;
  instance["metadata"] = r.instance_metadata;
  instance["dimension"] = r.dimension;
  instance["vertex_count"] = r.vertex_count;
  instance["edge_count"] = r.edge_count;
  instance["face_count"] = r.face_count;
  instance["data"] = r.instance_data;
  doc["instance"] = std::move(instance);

  json options;
  options["r0_policy"] = {{"kind", to_string(r.options.r0.kind)}, {"value", r.options.r0.value}};
  options["alpha_policy"] = {{"kind", to_string(r.options.alpha.kind)},
                             {"value", r.options.alpha.value}};
  options["c_prime_log_base"] = std::string(bounds::kPrimeConstantLogBase);
  doc["options"] = std::move(options);

  json topology;
  topology["b1"] = r.b1;
  topology["b1_notion"] = r.b1_notion;
  topology["face_data"] = r.face_count > 0;
  topology["systole"] = optional_json(r.systole);
  topology["systolic_ratio"] = optional_json(r.systolic_ratio);
  topology["volume"] = r.volume;
  topology["basis_source"] = r.basis_source;
  json basis = json::array();
  for (std::size_t i = 0; i < r.basis.size(); ++i) {
    basis.push_back({{"walk", r.basis[i]}, {"length", r.basis_lengths[i]}});
  }
  topology["basis"] = std::move(basis);
  topology["carrier"] = r.carrier;
  doc["topology"] = std::move(topology);

  doc["parameters"] = {{"r0", r.r0},
                       {"beta_hat", r.beta_hat},
                       {"theta", optional_json(r.theta)},
                       {"alpha", r.alpha}};

  json system;
  system["N"] = r.nerve.balls;
  system["T"] = r.nerve.pairs;
  system["C"] = r.nerve.components;
  json balls = json::array();
  for (const auto& b : r.balls) {
    json entry;
    entry["center"] = b.center_id;
    entry["radius"] = b.radius;
    entry["k"] = b.k;
    entry["vol_R"] = b.vol_R;
    entry["vol_5R"] = b.vol_5R;
    entry["sup_radius"] = b.sup_radius;
    entry["sup_attained"] = b.sup_attained;
    entry["members"] = b.members;
    entry["doubled_members"] = b.doubled_members;
    entry["dilated5_members"] = b.dilated5_members;
    entry["diameter"] = b.diameter;
    entry["doubled_diameter"] = b.doubled_diameter;
    entry["contractible"] = b.contractible;
    entry["doubled_contractible"] = b.doubled_contractible;
    balls.push_back(std::move(entry));
  }
  system["balls"] = std::move(balls);
  json rejected = json::array();
  for (const auto& x : r.rejected) {
    rejected.push_back({{"vertex", x.vertex_id}, {"radius", x.radius}, {"witness", x.witness}});
  }
  system["rejected"] = std::move(rejected);
  json pairs = json::array();
  for (const auto& [a, b] : r.nerve_pairs) pairs.push_back({a, b});
  system["nerve_pairs"] = std::move(pairs);
  doc["system"] = std::move(system);

  const auto& c = r.chain;
  json chain;
  chain["volume"] = c.volume;
  chain["sum_vol_R"] = c.sum_vol_R;
  chain["sum_vol_5R"] = c.sum_vol_5R;
  chain["double_sum"] = c.double_sum;
  chain["max_charged_k"] = c.max_charged_k;
  chain["chain_bound"] = c.chain_bound;
  chain["links"] = {{"L1", c.l1_disjoint_volume},
                    {"L2", c.l2_admissible},
                    {"L3", c.l3_containment},
                    {"L4", c.l4_density},
                    {"L5", c.l5_scale}};
  chain["failed_links"] = c.failed_links;
  chain["t_within_chain_bound"] = c.t_within_chain_bound;
  chain["t_within_t_bound"] = c.t_within_t_bound;
  doc["chain"] = std::move(chain);

  doc["bounds"] = {{"k_bound", optional_json(r.k_bound)},
                   {"t_bound", optional_json(r.t_bound)},
                   {"main_lower_bound",
                    {{"sqrt_b1", r.main_lower_sqrt}, {"sqrt_log_b1", r.main_lower_sqrt_log}}},
                   {"durumeric_bound", r.durumeric}};

  doc["preconditions"] = {{"r0_below_quarter_systole", r.r0_below_quarter_systole},
                          {"doubled_balls_contractible", r.doubled_balls_contractible},
                          {"balls_below_systole", r.balls_below_systole}};

  doc["verdicts"] = {{"doubled_cover", r.doubled_cover},
                     {"containment", r.containment},
                     {"chain", r.chain_ok},
                     {"nerve_accounting", r.nerve_accounting},
                     {"pair_counting", r.pair_counting}};

  const auto big_n = static_cast<long long>(r.nerve.balls);
  const auto b1 = static_cast<long long>(r.b1);
  doc["observations"] = {{"cycle_rank", r.nerve.cycle_rank()},
                         {"pair_bound", big_n * (big_n - 1) / 2},
                         {"b1_le_cycle_rank", b1 <= r.nerve.cycle_rank()},
                         {"b1_le_pair_bound", b1 <= big_n * (big_n - 1) / 2}};
  doc["all_verdicts"] = r.all_verdicts();
  return doc;
}

std::string report_to_csv(const PipelineReport& r) {
  std::ostringstream out;
  out << "row,ball,center,radius,k,vol_R,vol_5R,sup_radius,sup_attained,members,"
         "contractible,doubled_contractible,b1,N,T,C,r0,beta_hat,theta,alpha,all_verdicts\n";
  for (std::size_t j = 0; j < r.balls.size(); ++j) {
    const auto& b = r.balls[j];
    out << "ball," << j << ',' << b.center_id << ',' << format_number(b.radius) << ',' << b.k
        << ',' << format_number(b.vol_R) << ',' << format_number(b.vol_5R) << ','
        << format_number(b.sup_radius) << ',' << (b.sup_attained ? 1 : 0) << ','
        << b.members.size() << ',' << (b.contractible ? 1 : 0) << ','
        << (b.doubled_contractible ? 1 : 0) << ",,,,,,,,,\n";
  }
  out << "summary,,,,,,,,,,,," << r.b1 << ',' << r.nerve.balls << ',' << r.nerve.pairs << ','
      << r.nerve.components << ',' << format_number(r.r0) << ',' << format_number(r.beta_hat)
      << ',' << (r.theta ? format_number(*r.theta) : std::string()) << ','
      << format_number(r.alpha) << ',' << (r.all_verdicts() ? 1 : 0) << '\n';
  return out.str();
}

bool VerifyOutcome::ok() const {
  return problems.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const VerdictCheck& c) {
           return c.recomputed && c.stored == c.recomputed;
         });
}

VerifyOutcome verify_report(const nlohmann::json& doc) {
  VerifyOutcome outcome;
  try {
    const auto& topology = doc.at("topology");
    const auto& params = doc.at("parameters");
    const auto& system = doc.at("system");
    const auto& verdicts = doc.at("verdicts");
    const int n = doc.at("instance").at("dimension").get<int>();
    const auto b1 = topology.at("b1").get<long long>();
    const double volume = topology.at("volume").get<double>();
    const bool has_systole = !topology.at("systole").is_null();
    const double sys_len = has_systole ? topology.at("systole").get<double>() : 0.0;
    const double r0 = params.at("r0").get<double>();
    const double beta_hat = params.at("beta_hat").get<double>();
    const double alpha = params.at("alpha").get<double>();

    struct Rec {
      std::int64_t center;
      double radius;
      int k;
      double vol_r, vol_5r;
      std::set<std::int64_t> members, doubled, dilated5;
      bool doubled_contractible;
    };
    std::vector<Rec> balls;
    for (const auto& b : system.at("balls")) {
      Rec rec;
      rec.center = b.at("center").get<std::int64_t>();
      rec.radius = b.at("radius").get<double>();
      rec.k = b.at("k").get<int>();
      rec.vol_r = b.at("vol_R").get<double>();
      rec.vol_5r = b.at("vol_5R").get<double>();
      for (const auto& x : b.at("members")) rec.members.insert(x.get<std::int64_t>());
      for (const auto& x : b.at("doubled_members")) rec.doubled.insert(x.get<std::int64_t>());
      for (const auto& x : b.at("dilated5_members")) rec.dilated5.insert(x.get<std::int64_t>());
      rec.doubled_contractible = b.at("doubled_contractible").get<bool>();
      balls.push_back(std::move(rec));
    }
    const std::size_t count = balls.size();

    // Weights in vertex order (ascending id), as the library sums them.
    std::map<std::int64_t, double> weight;
    double recomputed_volume = 0.0;
    for (const auto& v : doc.at("instance").at("data").at("vertices")) {
      const double w = v.at("weight").get<double>();
      weight[v.at("id").get<std::int64_t>()] = w;
      recomputed_volume += w;
    }
    if (recomputed_volume != volume) outcome.problems.emplace_back("volume disagrees with instance");
    auto union_volume = [&](const std::set<std::int64_t>& ids) {
      double total = 0.0;
      for (const auto& [id, w] : weight) {
        if (ids.count(id)) total += w;
      }
      return total;
    };

    const auto agrees = [](double stored, double recomputed) {
      return std::abs(stored - recomputed) <= 1e-12 * std::max(1.0, std::abs(recomputed));
    };
    for (const auto& b : balls) {
      if (!agrees(b.vol_r, union_volume(b.members)) ||
          !agrees(b.vol_5r, union_volume(b.dilated5))) {
        outcome.problems.emplace_back("ball volumes disagree with members");
        break;
      }
    }

    auto check = [&](const char* name, bool recomputed) {
      outcome.checks.push_back({name, verdicts.at(name).get<bool>(), recomputed});
    };

    // Doubled cover of the carrier.
    std::set<std::int64_t> covered;
    for (const auto& b : balls) covered.insert(b.doubled.begin(), b.doubled.end());
    bool cover = true;
    for (const auto& v : topology.at("carrier")) {
      if (!covered.count(v.get<std::int64_t>())) cover = false;
    }
    check("doubled_cover", cover);

    // Nerve pairs from doubled-ball intersections.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const auto& a = balls[i].doubled;
        const bool meet = std::any_of(a.begin(), a.end(),
                                      [&](std::int64_t x) { return balls[j].doubled.count(x); });
        if (meet) pairs.emplace_back(i, j);
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> stored_pairs;
    for (const auto& p : system.at("nerve_pairs")) {
      stored_pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    }
    if (stored_pairs != pairs) outcome.problems.emplace_back("nerve pairs disagree with balls");
    std::vector<std::size_t> parent(count);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::size_t components = count;
    for (const auto& [a, b] : pairs) {
      const auto ra = find(a);
      const auto rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --components;
      }
    }
    const auto big_n = static_cast<long long>(count);
    const auto big_t = static_cast<long long>(pairs.size());
    const auto big_c = static_cast<long long>(components);
    if (system.at("N").get<long long>() != big_n || system.at("T").get<long long>() != big_t ||
        system.at("C").get<long long>() != big_c) {
      outcome.problems.emplace_back("N, T, C disagree with balls");
    }

    // Containment of the smaller R-ball in the larger 5R-ball.
    auto inside = [&](std::size_t small, std::size_t large) {
      return std::includes(balls[large].dilated5.begin(), balls[large].dilated5.end(),
                           balls[small].members.begin(), balls[small].members.end());
    };
    bool contained = true;
    for (const auto& [a, b] : pairs) {
      if (balls[a].radius <= balls[b].radius && !inside(a, b)) contained = false;
      if (balls[b].radius <= balls[a].radius && !inside(b, a)) contained = false;
    }
    check("containment", contained);

    // Inequality chain.
    bool disjoint = true;
    std::set<std::int64_t> seen;
    for (const auto& b : balls) {
      for (auto x : b.members) {
        if (!seen.insert(x).second) disjoint = false;
      }
    }
    const bool l1 = disjoint && volume >= union_volume(seen);
    const bool l2 = std::all_of(balls.begin(), balls.end(),
                                [&](const Rec& b) { return b.vol_5r <= alpha * b.vol_r; });
    std::vector<std::set<std::int64_t>> charged(count);
    std::vector<char> neighbor(count, 0);
    for (const auto& [a, b] : pairs) {
      std::size_t j;
      if (balls[a].radius != balls[b].radius) {
        j = balls[a].radius > balls[b].radius ? a : b;
      } else {
        j = balls[a].center < balls[b].center ? a : b;
      }
      const std::size_t i = j == a ? b : a;
      charged[j].insert(balls[i].members.begin(), balls[i].members.end());
      neighbor[i] = 1;
    }
    bool l3 = true;
    for (std::size_t j = 0; j < count; ++j) {
      if (!(balls[j].vol_5r >= union_volume(charged[j]))) l3 = false;
    }
    std::optional<double> k_bound;
    try {
      k_bound = bounds::k_upper_bound(volume, beta_hat, r0, n, alpha);
    } catch (const DomainError&) {
    }
    bool l4 = true;
    bool l5 = true;
    int max_k = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (!neighbor[i]) continue;
      const double r = balls[i].radius;
      if (!(balls[i].vol_r / std::pow(r, n) >= beta_hat)) l4 = false;
      const int k = k_index(r, r0);
      max_k = std::max(max_k, k);
      const bool below = k_bound ? k < *k_bound : k == 0;
      if (k != balls[i].k || r < five_adic_scale(r0, k) || !below) l5 = false;
    }
    const double chain_bound =
        alpha * volume / (beta_hat * std::pow(five_adic_scale(r0, max_k), n));
    std::optional<double> t_bound;
    if (bounds::volume_ratio(volume, beta_hat, r0, n) >= 1.0) {
      t_bound = bounds::t_upper_bound(volume, beta_hat, r0, n);
    }
    const auto t = static_cast<double>(big_t);
    check("chain", l1 && l2 && l3 && l4 && l5 && t <= chain_bound && t_bound && t <= *t_bound);

    // Nerve counts against b1, under the stated hypotheses.
    const bool r0_small = has_systole && r0 < sys_len / 4.0;
    const bool contractible = std::all_of(balls.begin(), balls.end(),
                                          [](const Rec& b) { return b.doubled_contractible; });
    const bool hypotheses = hypotheses_hold(r0_small, contractible);
    check("nerve_accounting", !hypotheses || b1 <= big_t - big_n + big_c);
    check("pair_counting", !hypotheses || b1 <= big_n * (big_n - 1) / 2);
  } catch (const nlohmann::json::exception& e) {
    outcome.problems.emplace_back(std::string("malformed report: ") + e.what());
  } catch (const std::exception& e) {
    outcome.problems.emplace_back(e.what());
  }
  return outcome;
}

}  // namespace covtrick
