#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "ipsep/config.hpp"
#include "ipsep/errors.hpp"
#include "ipsep/experiment.hpp"
#include "ipsep/io.hpp"
#include "ipsep/plot.hpp"

using namespace ipsep;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;

struct Options {
  std::string config;
  std::string out;
  std::string input;
  std::vector<int> scales;
  std::optional<std::uint64_t> seed;
  bool plot = false;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.scales.empty()) cfg.scales = o.scales;
  if (o.seed) cfg.seed = *o.seed;
  validate(cfg);
  return cfg;
}

std::string prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IOError("cannot create output directory " + dir);
  return dir;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IOError("failed writing " + path);
}

// Whole-image mask: the band width of the coarsest requested scale.
double image_mask_width(const RunConfig& cfg) {
  const int j0 = *std::min_element(cfg.scales.begin(), cfg.scales.end());
  return mask_schedule_checked(cfg.alpha, cfg.epsilon, cfg.mask_c, j0, cfg.grid_size);
}

void save_image(const SampledImage& img, const std::string& dir, const std::string& stem, bool real) {
  write_grid(img, dir + "/" + stem + ".ipg", real);
  write_png_magnitude(img.data.data(), img.rows, img.cols, dir + "/" + stem + ".png");
}

void synthesize(const RunConfig& cfg, const Scene& scene) {
  const auto dir = prepare_dir(cfg.output_dir);
  const auto cartoon = inverse_transform(scene.cartoon_hat);
  const auto texture = inverse_transform(scene.texture_hat);
  SampledImage mixed(scene.n, Domain::Spatial);
  for (std::size_t i = 0; i < mixed.data.size(); ++i) mixed.data[i] = cartoon.data[i] + texture.data[i];
  const auto masked = apply_mask(mixed, image_mask_width(cfg)).known;
  save_image(cartoon, dir, "cartoon", true);
  save_image(texture, dir, "texture", true);
  save_image(mixed, dir, "mixed", true);
  save_image(masked, dir, "masked", true);
}

int cmd_synth(const RunConfig& cfg) {
  synthesize(cfg, make_scene(cfg));
  return kOk;
}

std::optional<SampledImage> try_read(const std::string& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_grid(path);
}

double distance(const SampledImage& a, const SampledImage& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s);
}

int cmd_separate(const RunConfig& cfg, const std::string& input_dir) {
  const auto in = input_dir.empty() ? cfg.output_dir : input_dir;
  const auto f = read_grid(in + "/masked.ipg");
  if (f.rows != cfg.grid_size)
    throw ShapeError("input grid " + std::to_string(f.rows) + " does not match grid_size " +
                     std::to_string(cfg.grid_size));
  const double h = image_mask_width(cfg);
  const auto missing = missing_indicator(f.rows, h);
  const int texture_s = cfg.texture.s;
  const ShearletSystem shear(f.rows, filter_j_max(f.rows), {cfg.alpha, cfg.sampling, false});
  const GaborSystem gabor(f.rows, texture_s);
  const auto r = solve_inpsep(f, missing, shear, gabor, cfg.solver);

  const auto dir = prepare_dir(cfg.output_dir);
  write_grid(r.C_star, dir + "/C_star.ipg");
  write_grid(r.T_star, dir + "/T_star.ipg");

  json metrics{{"iterations", r.iterations_used},
               {"converged", r.converged},
               {"objective", r.objective_trace.empty() ? 0.0 : r.objective_trace.back()},
               {"feasibility", r.feasibility_trace.empty() ? 0.0 : r.feasibility_trace.back()},
               {"mask_width", h}};
  const auto c = try_read(in + "/cartoon.ipg");
  const auto t = try_read(in + "/texture.ipg");
  if (c && t && c->rows == f.rows && t->rows == f.rows) {
    const double ec = distance(r.C_star, *c), et = distance(r.T_star, *t);
    metrics["error_cartoon"] = ec;
    metrics["error_texture"] = et;
    const double denom = norm2(*c) + norm2(*t);
    metrics["relative_error"] = denom > 0 ? (ec + et) / denom : 0.0;
  }
  write_json({{"command", "separate"},
              {"config", to_json(cfg)},
              {"input", in},
              {"metrics", metrics},
              {"objective_trace", r.objective_trace},
              {"feasibility_trace", r.feasibility_trace}},
             dir + "/run_summary.json");
  if (!r.converged) {
    std::cerr << "solver did not converge in " << r.iterations_used << " iterations; results written\n";
    return kNotConverged;
  }
  return kOk;
}

void plot_rows(const std::vector<CsvRow>& rows, const std::string& dir) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    const auto key = r.kind + "_" + r.quantity;
    if (!series.count(key)) order.push_back(key);
    series[key].first.push_back(r.j);
    series[key].second.push_back(r.log2_value);
  }
  for (const auto& key : order) {
    const auto& [x, y] = series[key];
    if (std::none_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) continue;
    write_line_plot(x, y, dir + "/" + key + ".png");
  }
}

json cluster_echo(const Scene& scene, const RunConfig& cfg, const ScaleAnalysis& a) {
  json scales = json::array();
  for (const auto& r : a.rows) {
    scales.push_back({{"j", r.j},
                      {"grid", scale_grid(scene.n, r.j)},
                      {"h", mask_schedule(cfg.alpha, cfg.epsilon, cfg.mask_c, r.j)},
                      {"shear_offset_reach", std::floor(std::pow(2.0, cfg.epsilon * r.j))},
                      {"shear_scales", {r.j - 1, r.j, r.j + 1}},
                      {"gabor_radius", gabor_radius(r.j, cfg.epsilon)},
                      {"cluster1_size", r.cluster1},
                      {"cluster2_size", r.cluster2}});
  }
  json points = json::array();
  for (std::size_t i = 0; i < scene.texture.points.size(); ++i)
    points.push_back({{"n", scene.texture.points[i]},
                      {"d", {scene.texture.d[i].real(), scene.texture.d[i].imag()}}});
  return {{"alpha", cfg.alpha},
          {"epsilon", cfg.epsilon},
          {"texture_s", scene.texture.s},
          {"texture_points", points},
          {"scales", scales},
          {"skipped", a.skipped}};
}

// Writes the four CSV tables (and plots); returns the per-scale solves.
PipelineResult analyze(const RunConfig& cfg, const Scene& scene, bool plot) {
  const auto dir = prepare_dir(cfg.output_dir);
  const auto a = analyze_scales(scene, cfg);
  auto run = multiscale_pipeline(scene, cfg);

  auto sparsity = sparsity_rows(a, DecayKind::Sparsity1);
  const auto s2 = sparsity_rows(a, DecayKind::Sparsity2);
  sparsity.insert(sparsity.end(), s2.begin(), s2.end());
  const auto coherence = coherence_rows(a);
  auto energy = energy_rows(scene, cfg);
  const auto missing = missing_energy_rows(scene, cfg);
  energy.insert(energy.end(), missing.begin(), missing.end());
  const auto endtoend = endtoend_rows(run, a);

  write_csv(dir + "/coherence.csv", coherence);
  write_csv(dir + "/sparsity.csv", sparsity);
  write_csv(dir + "/energy.csv", energy);
  write_csv(dir + "/endtoend.csv", endtoend);
  write_json(cluster_echo(scene, cfg, a), dir + "/clusters.json");
  if (plot) {
    const auto pdir = prepare_dir(dir + "/plots");
    plot_rows(coherence, pdir);
    plot_rows(sparsity, pdir);
    plot_rows(energy, pdir);
    plot_rows(endtoend, pdir);
  }
  return run;
}

int report_convergence(const PipelineResult& run) {
  int code = kOk;
  for (const auto& r : run.rows)
    if (!r.converged) {
      std::cerr << "scale " << r.j << ": solver did not converge in " << r.iterations << " iterations\n";
      code = kNotConverged;
    }
  return code;
}

int cmd_analyze(const RunConfig& cfg, bool plot) {
  const auto scene = make_scene(cfg);
  return report_convergence(analyze(cfg, scene, plot));
}

int cmd_pipeline(const RunConfig& cfg, bool plot) {
  const auto scene = make_scene(cfg);
  synthesize(cfg, scene);
  const auto run = analyze(cfg, scene, plot);
  const auto dir = cfg.output_dir;
  write_grid(run.cartoon, dir + "/C_star.ipg");
  write_grid(run.texture, dir + "/T_star.ipg");
  json rows = json::array();
  for (const auto& r : run.rows)
    rows.push_back({{"j", r.j},
                    {"h", r.h},
                    {"relative_error", r.relative_error},
                    {"missing_cartoon_ratio", r.missing_cartoon},
                    {"missing_texture_ratio", r.missing_texture},
                    {"missing_texture_relative", r.missing_texture_relative},
                    {"error_sum", r.error_sum},
                    {"feasibility", r.feasibility},
                    {"iterations", r.iterations},
                    {"converged", r.converged}});
  write_json({{"command", "pipeline"}, {"config", to_json(cfg)}, {"scales", rows}, {"skipped", run.skipped}},
             dir + "/run_summary.json");
  return report_convergence(run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous cartoon/texture separation and inpainting"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides output_dir)");
    sub->add_option("--scales", o.scales, "scales, e.g. 2,3,4")->delimiter(',');
    sub->add_option("--seed", o.seed, "texture seed (overrides seed)");
  };
  auto* synth = app.add_subcommand("synth", "write cartoon, texture, mixed and masked images");
  auto* separate = app.add_subcommand("separate", "solve INP-SEP on masked.ipg");
  auto* analyze_cmd = app.add_subcommand("analyze", "write coherence, sparsity, energy and end-to-end tables");
  auto* pipeline = app.add_subcommand("pipeline", "synth, analyze and per-scale separation in one run");
  for (auto* sub : {synth, separate, analyze_cmd, pipeline}) common(sub);
  separate->add_option("--input", o.input, "directory holding masked.ipg (default: the output directory)");
  for (auto* sub : {analyze_cmd, pipeline}) sub->add_flag("--plot", o.plot, "write PNG line plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const auto cfg = resolve(o);
    if (*synth) return cmd_synth(cfg);
    if (*separate) return cmd_separate(cfg, o.input);
    if (*analyze_cmd) return cmd_analyze(cfg, o.plot);
    return cmd_pipeline(cfg, o.plot);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
