#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>

#include "doctest.h"

#include "covtrick/generators.hpp"
#include "covtrick/instance_io.hpp"
#include "covtrick/pipeline.hpp"
#include "covtrick/topology.hpp"
#include "oracles.hpp"

using namespace covtrick;
using nlohmann::json;

namespace {

Instance wrap(MetricSpace s) { return Instance{std::move(s), {}, {}}; }

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("generator sizes") {
  for (int k : {3, 4, 10}) {
    const auto c = gen_cycle(k);
    CHECK(c.vertex_count() == static_cast<std::size_t>(k));
    CHECK(c.edge_count() == static_cast<std::size_t>(k));
    CHECK(c.dimension() == 1);
  }
  CHECK_THROWS_AS(gen_cycle(2), InputError);

  const auto faced = gen_grid_torus(4, true);
  CHECK(faced.vertex_count() == 16);
  CHECK(faced.edge_count() == 48);
  CHECK(faced.faces().size() == 32);
  const auto bare = gen_grid_torus(4, false);
  CHECK(bare.edge_count() == 32);
  CHECK(oracle::betti1(bare) == 17);
  CHECK(oracle::betti1(faced) == 2);
}

TEST_CASE("sampled instances are deterministic and connected") {
  const auto a = gen_sampled(SampledKind::torus_embed, 120, 6, 7);
  const auto b = gen_sampled(SampledKind::torus_embed, 120, 6, 7);
  REQUIRE(a.space.edge_count() == b.space.edge_count());
  for (std::size_t i = 0; i < a.space.edge_count(); ++i) {
    CHECK(a.space.edges()[i].u == b.space.edges()[i].u);
    CHECK(a.space.edges()[i].v == b.space.edges()[i].v);
    CHECK(a.space.edges()[i].length == b.space.edges()[i].length);
  }
  const auto c = gen_sampled(SampledKind::torus_embed, 120, 6, 8);
  CHECK(instance_to_json(wrap(c.space)) != instance_to_json(wrap(a.space)));

  const auto big = gen_sampled(SampledKind::torus_embed, 500, 8, 1);
  CHECK(big.space.vertex_count() == 500);
  CHECK(big.space.component_count() == 1);
  CHECK(big.knn_used >= 8);
  CHECK(total_volume(big.space) == doctest::Approx(8 * std::acos(-1.0) * std::acos(-1.0)));

  const auto sphere = gen_sampled(SampledKind::sphere_embed, 150, 6, 3);
  CHECK(total_volume(sphere.space) == doctest::Approx(4 * std::acos(-1.0)));
  CHECK(parse_sampled_kind("sphere_embed") == SampledKind::sphere_embed);
  CHECK(to_string(SampledKind::torus_embed) == "torus_embed");
  CHECK_THROWS_AS(parse_sampled_kind("klein"), InputError);
}

TEST_CASE("instance JSON round trip") {
  Instance torus = make_instance("torus", {{"m", 3}});
  torus.marked_loops = {{0, 1, 2, 0}};
  const auto doc = instance_to_json(torus);
  const Instance back = instance_from_json(json::parse(doc.dump()));
  CHECK(instance_to_json(back).dump() == doc.dump());
  CHECK(back.marked_loops == torus.marked_loops);
  CHECK(back.metadata["generator"] == "torus");

  const auto path = std::filesystem::temp_directory_path() / "covtrick_roundtrip.json";
  write_instance(path, torus);
  CHECK(instance_to_json(read_instance(path)).dump() == doc.dump());
  std::filesystem::remove(path);

  const auto plain = instance_to_json(wrap(gen_cycle(5)));
  CHECK_FALSE(plain.contains("faces"));
  CHECK_FALSE(plain.contains("marked_loops"));
  CHECK_FALSE(plain.contains("metadata"));
}

TEST_CASE("malformed instance files") {
  CHECK_THROWS_AS(instance_from_json(json::array()), InputError);
  CHECK_THROWS_AS(instance_from_json(json{{"vertices", json::array()}}), InputError);
  CHECK_THROWS_AS(instance_from_json(json::parse(R"({"dimension": "two", "vertices": [], "edges": []})")),
                  InputError);
  CHECK_THROWS_AS(
      instance_from_json(json::parse(R"({"dimension": 1, "vertices": [{"id": 0}], "edges": []})")),
      InputError);
  CHECK_THROWS_AS(instance_from_json(json::parse(
                      R"({"dimension": 2, "vertices": [{"id": 0, "weight": 1}], "edges": [], "faces": [[0, 0]]})")),
                  InputError);
  CHECK_THROWS_AS(read_instance("/nonexistent/instance.json"), InputError);
  CHECK_THROWS_AS(make_instance("klein", json::object()), InputError);
}

TEST_CASE("make_instance records its parameters") {
  const auto sampled = make_instance("sampled", {{"kind", "sphere_embed"}, {"count", 80}, {"knn", 6}, {"seed", 5}});
  CHECK(sampled.metadata["face_data"] == false);
  CHECK(sampled.metadata["count"] == 80);
  CHECK(sampled.metadata.contains("knn_used"));
  const auto genus = make_instance("genus", {{"g", 2}, {"subdiv", 1}});
  CHECK(genus.metadata["g"] == 2);
  CHECK(betti1(genus.space) == 4);
}

TEST_CASE("pipeline on the faced 4x4 torus") {
  const auto report = run_pipeline(make_instance("torus", {{"m", 4}}));
  CHECK(report.b1 == 2);
  CHECK(report.b1_notion == "homology");
  REQUIRE(report.systole.has_value());
  CHECK(*report.systole == 4.0);
  CHECK(report.r0 == doctest::Approx(0.96));
  CHECK(report.nerve.cycle_rank() >= 2);
  CHECK(report.doubled_cover);
  CHECK(report.containment);
  CHECK(report.chain_ok);
  CHECK(report.nerve_accounting);
  CHECK(report.pair_counting);
  CHECK(report.all_verdicts());
  CHECK(report.basis_source == "shortest");
}

TEST_CASE("pipeline on C10 with fixed parameters") {
  PipelineOptions options{R0Policy::absolute(1.0), AlphaPolicy::absolute(25.0)};
  const auto report = run_pipeline(wrap(gen_cycle(10)), options);
  CHECK(report.b1 == 1);
  CHECK(report.b1_notion == "graph_cycle_rank");
  CHECK(report.nerve.balls == 3);
  CHECK(report.nerve.pairs == 3);
  CHECK(report.nerve.components == 1);
  CHECK(report.alpha == 25.0);
  REQUIRE(report.k_bound.has_value());
  CHECK(*report.k_bound > 0);
  CHECK(report.all_verdicts());
}

TEST_CASE("pipeline stage errors") {
  const MetricSpace tree(1, {{0, 1.0}, {1, 1.0}, {2, 1.0}}, {{0, 1, 1.0}, {1, 2, 1.0}});
  try {
    run_pipeline(wrap(tree));
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "homology_basis");
    CHECK(std::string(e.what()).find("empty homology basis") != std::string::npos);
  }
  PipelineOptions bad{R0Policy::absolute(-1.0), AlphaPolicy::theta_rule()};
  CHECK_THROWS_AS(run_pipeline(wrap(gen_cycle(6)), bad), StageError);
}

TEST_CASE("policy parsing") {
  const auto sys = parse_r0_policy("sys:0.2");
  CHECK(sys.kind == R0Policy::Kind::systole_fraction);
  CHECK(sys.value == 0.2);
  const auto abs = parse_r0_policy("abs:1.5");
  CHECK(abs.kind == R0Policy::Kind::absolute);
  CHECK(abs.value == 1.5);
  CHECK(parse_alpha_policy("theta").kind == AlphaPolicy::Kind::theta_rule);
  CHECK(parse_alpha_policy("40").value == 40.0);
  CHECK_THROWS_AS(parse_r0_policy("0.3"), InputError);
  CHECK_THROWS_AS(parse_r0_policy("abs:x"), InputError);
  CHECK_THROWS_AS(parse_alpha_policy("0.5"), InputError);
}

TEST_CASE("marked loops replace the computed basis") {
  Instance c = wrap(gen_cycle(8));
  c.marked_loops = {{0, 1, 2, 3, 4, 5, 6, 7, 0}};
  const auto report = run_pipeline(c, {R0Policy::absolute(1.0), AlphaPolicy::absolute(30.0)});
  CHECK(report.basis_source == "marked");
  REQUIRE(report.basis.size() == 1);
  CHECK(report.basis_lengths.front() == 8.0);
}

TEST_CASE("reports re-verify from their JSON") {
  const auto report = run_pipeline(make_instance("genus", {{"g", 1}, {"subdiv", 1}}));
  const auto doc = report_to_json(report);
  const auto outcome = verify_report(json::parse(doc.dump()));
  CHECK(outcome.ok());
  CHECK(outcome.problems.empty());
  CHECK(outcome.checks.size() >= 5);
  for (const auto& check : outcome.checks) CHECK(check.stored == check.recomputed);

  const auto csv = report_to_csv(report);
  CHECK(line_count(csv) == report.balls.size() + 2);
  CHECK(csv.rfind("row,ball,center,radius,k,", 0) == 0);
}

TEST_CASE("tampered reports fail verification") {
  const auto report = run_pipeline(make_instance("torus", {{"m", 4}}));
  const json doc = json::parse(report_to_json(report).dump());

  json flipped = doc;
  flipped["verdicts"]["containment"] = false;
  CHECK_FALSE(verify_report(flipped).ok());

  json shrunk = doc;
  shrunk["system"]["balls"][0]["vol_R"] = 0.5;
  CHECK_FALSE(verify_report(shrunk).ok());

  json dropped = doc;
  dropped["system"]["nerve_pairs"].erase(0);
  CHECK_FALSE(verify_report(dropped).ok());

  json wrong_t = doc;
  wrong_t["system"]["T"] = 3;
  CHECK_FALSE(verify_report(wrong_t).ok());

  CHECK_FALSE(verify_report(json::object()).ok());
}
