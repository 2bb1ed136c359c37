// covtrick: generate instances, analyze topology, run the covering pipeline,
// print dimension constants and re-verify saved reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "covtrick/bounds.hpp"
#include "covtrick/instance_io.hpp"
#include "covtrick/pipeline.hpp"
#include "covtrick/topology.hpp"

namespace {

using covtrick::Instance;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw covtrick::InputError("cannot write " + path.string());
  out << text;
}

int cmd_gen(const std::string& kind, const nlohmann::json& params, const std::string& out) {
  const Instance instance = covtrick::make_instance(kind, params);
  covtrick::write_instance(out, instance);
  const auto& s = instance.space;
  std::cout << kind << ": " << s.vertex_count() << " vertices, " << s.edge_count()
            << " edges, " << s.face_count() << " faces -> " << out << '\n';
  return 0;
}

int cmd_analyze(const std::string& file) {
  const Instance instance = covtrick::read_instance(file);
  const auto& s = instance.space;
  nlohmann::ordered_json doc;
  doc["vertices"] = s.vertex_count();
  doc["edges"] = s.edge_count();
  doc["faces"] = s.face_count();
  doc["components"] = s.component_count();
  doc["b1"] = covtrick::betti1(s);
  doc["b1_notion"] = s.has_faces() ? "homology" : "graph_cycle_rank";
  const auto sys = covtrick::systole(s);
  doc["systole"] = sys ? nlohmann::ordered_json(*sys) : nlohmann::ordered_json(nullptr);
  const auto basis = covtrick::homology_basis(s);
  auto loops = nlohmann::ordered_json::array();
  for (const auto& loop : basis.loops) {
    auto ids = nlohmann::ordered_json::array();
    for (auto v : loop.vertices) ids.push_back(s.id(v));
    loops.push_back({{"walk", ids}, {"length", loop.length}});
  }
  doc["basis"] = std::move(loops);
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_cover(const std::string& file, const std::string& r0, const std::string& alpha,
              const std::string& out) {
  const Instance instance = covtrick::read_instance(file);
  covtrick::PipelineOptions options;
  options.r0 = covtrick::parse_r0_policy(r0);
  options.alpha = covtrick::parse_alpha_policy(alpha);
  const auto report = covtrick::run_pipeline(instance, options);
  const auto doc = covtrick::report_to_json(report);

  std::filesystem::path json_path(out);
  std::filesystem::path csv_path(out);
  csv_path.replace_extension(".csv");
  if (csv_path == json_path) csv_path += ".csv";
  write_text(json_path, doc.dump(1) + "\n");
  write_text(csv_path, covtrick::report_to_csv(report));

  std::cout << "N=" << report.nerve.balls << " T=" << report.nerve.pairs
            << " C=" << report.nerve.components << " b1=" << report.b1 << '\n';
  for (const auto& [name, value] : doc.at("verdicts").items()) {
    std::cout << name << ": " << (value.get<bool>() ? "true" : "false") << '\n';
  }
  std::cout << "report -> " << json_path.string() << ", " << csv_path.string() << '\n';
  return report.all_verdicts() ? 0 : 1;
}

int cmd_bounds(std::optional<int> n) {
  if (n && *n < 1) throw covtrick::InputError("dimension must be at least 1");
  std::cout << "n,sigma_n,omega_n,alpha_n,beta_n,C_n,C_prime_n\n";
  auto row = [](int k) {
    const auto c = covtrick::bounds::dimension_constants(k);
    std::printf("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, c.sigma_n, c.omega_n,
                c.alpha_berger, c.beta_croke, c.c_n, c.c_n_prime);
  };
  if (n) {
    row(*n);
  } else {
    for (int k = 1; k <= 10; ++k) row(k);
  }
  return 0;
}

int cmd_verify(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw covtrick::InputError("cannot open report " + file);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw covtrick::InputError("report is not valid JSON: " + std::string(e.what()));
  }
  const auto outcome = covtrick::verify_report(doc);
  for (const auto& c : outcome.checks) {
    std::cout << c.name << ": stored " << (c.stored ? "true" : "false") << ", recomputed "
              << (c.recomputed ? "true" : "false")
              << (c.stored == c.recomputed ? "" : "  MISMATCH") << '\n';
  }
  for (const auto& p : outcome.problems) std::cout << "problem: " << p << '\n';
  std::cout << (outcome.ok() ? "verified" : "NOT verified") << '\n';
  return outcome.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covering-trick workbench for weighted graphs and triangulated surfaces"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  std::string gen_kind;
  std::string gen_out;
  int k = 10, m = 4, g = 2, subdiv = 1, count = 200, knn = 8;
  bool no_faces = false;
  std::uint64_t seed = 1;
  std::string sampled_kind = "torus_embed";
  gen->add_option("generator", gen_kind, "cycle, torus, genus or sampled")
      ->required()
      ->check(CLI::IsMember({"cycle", "torus", "genus", "sampled"}));
  gen->add_option("-o,--output", gen_out, "Output instance file")->required();
  gen->add_option("--k", k, "Cycle length");
  gen->add_option("--m", m, "Torus side");
  gen->add_flag("--no-faces", no_faces, "Torus without triangles");
  gen->add_option("--g", g, "Genus");
  gen->add_option("--subdiv", subdiv, "Barycentric subdivisions");
  gen->add_option("--kind", sampled_kind, "torus_embed or sphere_embed");
  gen->add_option("--count", count, "Sample size");
  gen->add_option("--knn", knn, "Nearest neighbours");
  gen->add_option("--seed", seed, "Random seed");

  auto* analyze = app.add_subcommand("analyze", "Betti number, systole and basis");
  std::string analyze_file;
  analyze->add_option("file", analyze_file)->required()->check(CLI::ExistingFile);

  auto* cover = app.add_subcommand("cover", "Run the covering pipeline and write a report");
  std::string cover_file, cover_out, r0 = "sys:0.24", alpha = "theta";
  cover->add_option("file", cover_file)->required()->check(CLI::ExistingFile);
  cover->add_option("--r0", r0, "abs:<radius> or sys:<fraction of systole>")
      ->capture_default_str();
  cover->add_option("--alpha", alpha, "theta or a number > 1")->capture_default_str();
  cover->add_option("-o,--output", cover_out, "Report path (.json; a .csv is written beside it)")
      ->required();

  auto* bounds_cmd = app.add_subcommand("bounds", "Dimension constants");
  std::optional<int> bounds_n;
  bounds_cmd->add_option("--n", bounds_n, "Dimension (default: table for 1..10)");

  auto* verify = app.add_subcommand("verify", "Re-derive the verdicts of a saved report");
  std::string verify_file;
  verify->add_option("report", verify_file)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share exit code 2 with input errors; --help still exits 0.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      nlohmann::json params = {{"k", k},         {"m", m},         {"faces", !no_faces},
                               {"g", g},         {"subdiv", subdiv}, {"kind", sampled_kind},
                               {"count", count}, {"knn", knn},     {"seed", seed}};
      return cmd_gen(gen_kind, params, gen_out);
    }
    if (*analyze) return cmd_analyze(analyze_file);
    if (*cover) return cmd_cover(cover_file, r0, alpha, cover_out);
    if (*bounds_cmd) return cmd_bounds(bounds_n);
    if (*verify) return cmd_verify(verify_file);
  } catch (const covtrick::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
