#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ipsep/analysis.hpp"
#include "ipsep/config.hpp"
#include "ipsep/gabor.hpp"
#include "ipsep/models.hpp"
#include "ipsep/shearlet.hpp"
#include "ipsep/solver.hpp"

namespace ipsep {

// Ground truth on the full grid (spectra).
struct Scene {
  int n = 0;
  CartoonSpec cartoon;
  TextureSpec texture;
  SampledImage cartoon_hat, texture_hat;
};

Scene make_scene(const RunConfig& cfg);

// Grid used for scale j: the smallest one holding corona j + 1, at most n.
int scale_grid(int n, int j);

// Everything needed to solve and analyse one scale on its own grid.
struct ScaleProblem {
  int j = 0;
  int n = 0;
  double h = 0;
  SampledImage cartoon, texture, mixed;  // F_j applied, spatial
  std::vector<std::uint8_t> missing;
  ShearletSystem shear;
  GaborSystem gabor;
};

// Throws ScaleError when h_j is below one cell of the scale grid.
ScaleProblem build_scale_problem(const Scene& scene, const RunConfig& cfg, int j);

struct ScaleClusters {
  ClusterSet shear, gabor;
};
ScaleClusters scale_clusters(const ScaleProblem& p, const Scene& scene, const RunConfig& cfg);
CoherenceRow analyze_scale(const ScaleProblem& p, const Scene& scene, const RunConfig& cfg);

struct ScaleAnalysis {
  std::vector<CoherenceRow> rows;
  std::vector<int> skipped;
};
ScaleAnalysis analyze_scales(const Scene& scene, const RunConfig& cfg);

struct EndToEndRow {
  int j = 0;
  double h = 0;
  double relative_error = 0;  // (|C*-C| + |T*-T|) / (|C| + |T|)
  double missing_cartoon = 0;  // |P(C*-C)| / |P C|
  double missing_texture = 0;  // |P(T*-T)| / (h 2^{-j})
  double missing_texture_relative = 0;  // |P(T*-T)| / |P T|
  double error_sum = 0;       // |C*-C| + |T*-T|
  double feasibility = 0;
  int iterations = 0;
  bool converged = false;
};

EndToEndRow solve_scale(const ScaleProblem& p, const SolverConfig& solver, SeparationResult* keep = nullptr);

struct PipelineResult {
  std::vector<EndToEndRow> rows;
  std::vector<int> skipped;
  SampledImage cartoon, texture;  // recombined sum over scales on the full grid
};

PipelineResult multiscale_pipeline(const Scene& scene, const RunConfig& cfg);

struct CsvRow {
  std::string kind;
  int j = 0;
  std::string quantity;
  double value = 0;
  double log2_value = 0;
  double slope = 0;  // log2 difference to the previous scale; NaN on the first row
  std::string flag;
};

// Rows for one quantity over scales. With `decreasing`, each row after the first is
// flagged by strict decrease (and a log2 drop >= min_drop when min_drop > 0); otherwise
// the flag is `fixed_flag`.
std::vector<CsvRow> trend_rows(const std::string& kind, const std::string& quantity, const std::vector<int>& js,
                               const std::vector<double>& values, bool decreasing, double min_drop = 0,
                               const std::string& fixed_flag = "info");
void write_csv(const std::string& path, const std::vector<CsvRow>& rows);

enum class DecayKind { Sparsity1, Sparsity2, Coherence, EnergyBalance, MissingEnergy, EndToEnd };

std::vector<CsvRow> sparsity_rows(const ScaleAnalysis& a, DecayKind which);
std::vector<CsvRow> coherence_rows(const ScaleAnalysis& a);
std::vector<CsvRow> energy_rows(const Scene& scene, const RunConfig& cfg);
std::vector<CsvRow> missing_energy_rows(const Scene& scene, const RunConfig& cfg);
// Error ratios per scale plus the bound column where composite mu < 1/2.
std::vector<CsvRow> endtoend_rows(const PipelineResult& run, const ScaleAnalysis& a);

// One CSV table per kind; scales whose h_j is sub-grid produce a ScaleSkipped row.
std::vector<CsvRow> decay_experiment(DecayKind kind, const Scene& scene, const RunConfig& cfg);

}  // namespace ipsep
