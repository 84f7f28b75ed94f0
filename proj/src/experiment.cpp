#include "ipsep/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ipsep/errors.hpp"
#include "ipsep/fft.hpp"

namespace ipsep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double norm_diff(const SampledImage& a, const SampledImage& b, const std::vector<std::uint8_t>* only = nullptr) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (!only || (*only)[i]) s += std::norm(a.data[i] - b.data[i]);
  return std::sqrt(s);
}

double norm_on(const SampledImage& a, const std::vector<std::uint8_t>* only = nullptr) {
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (!only || (*only)[i]) s += std::norm(a.data[i]);
  return std::sqrt(s);
}

SampledImage scale_component(const SampledImage& full_hat, int j, int nj) {
  return inverse_transform(resize_spectrum(subband_filter_spectrum(full_hat, j), nj));
}

// Running per-target sums of |<atom, target>| for one coherence column.
struct Accumulator {
  std::vector<double> acc;
  void add(const cvec& c) {
    if (acc.empty()) acc.assign(c.size(), 0.0);
    for (std::size_t t = 0; t < c.size(); ++t) acc[t] += std::abs(c[t]);
  }
  double max() const {
    double m = 0;
    for (double v : acc) m = std::max(m, v);
    return m;
  }
};

// For each atom of `cluster` in frame A: plain inner products against `other`, and
// masked inner products against A itself and `other`.
void coherence_columns(const ClusterSet& cluster, const GridFrame& a, const GridFrame& other,
                       const std::vector<std::uint8_t>& missing, double& plain_other, double& masked_self,
                       double& masked_other) {
  Accumulator p_other, m_self, m_other;
  const int n = a.grid();
  cvec c;
  for (auto i : cluster.indices) {
    cvec spec = a.atom_spectrum_at(i);
    other.analysis_spectrum(spec, c);
    p_other.add(c);
    fft::centered_inverse(spec, n);
    for (std::size_t k = 0; k < spec.size(); ++k)
      if (!missing[k]) spec[k] = cplx{};
    fft::centered_forward(spec, n);
    a.analysis_spectrum(spec, c);
    m_self.add(c);
    other.analysis_spectrum(spec, c);
    m_other.add(c);
  }
  plain_other = p_other.max();
  masked_self = m_self.max();
  masked_other = m_other.max();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

Scene make_scene(const RunConfig& cfg) {
  validate(cfg);
  Scene s;
  s.n = cfg.grid_size;
  s.cartoon = cfg.cartoon;
  TextureGenConfig tc = cfg.texture;
  tc.seed = cfg.seed;
  s.texture = generate_texture(tc, cfg.grid_size);
  if (!cfg.validate_scales.empty()) validate_texture(s.texture, cfg.alpha, cfg.epsilon, cfg.validate_scales, true);
  s.cartoon_hat = cartoon_spectrum(cfg.cartoon, cfg.grid_size);
  s.texture_hat = texture_spectrum(s.texture, cfg.grid_size);
  return s;
}

int scale_grid(int n, int j) { return static_cast<int>(std::min<long>(n, 1L << (2 * j + 1))); }

ScaleProblem build_scale_problem(const Scene& scene, const RunConfig& cfg, int j) {
  if (j < 1 || j > filter_j_max(scene.n)) throw ParamError("scale " + std::to_string(j) + " is outside the grid");
  const int nj = scale_grid(scene.n, j);
  const double h = mask_schedule_checked(cfg.alpha, cfg.epsilon, cfg.mask_c, j, nj);
  SampledImage c = scale_component(scene.cartoon_hat, j, nj);
  SampledImage t = scale_component(scene.texture_hat, j, nj);
  SampledImage m(nj, Domain::Spatial);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = c.data[i] + t.data[i];
  return ScaleProblem{j,
                      nj,
                      h,
                      std::move(c),
                      std::move(t),
                      std::move(m),
                      missing_indicator(nj, h),
                      ShearletSystem(nj, j + 1, {cfg.alpha, cfg.sampling, true}),
                      GaborSystem(nj, scene.texture.s)};
}

ScaleClusters scale_clusters(const ScaleProblem& p, const Scene& scene, const RunConfig& cfg) {
  return {cluster_shearlet(p.shear, p.j, cfg.epsilon, true), cluster_gabor(p.gabor, p.j, cfg.epsilon, scene.texture)};
}

CoherenceRow analyze_scale(const ScaleProblem& p, const Scene& scene, const RunConfig& cfg) {
  const auto cl = scale_clusters(p, scene, cfg);
  CoherenceRow row;
  row.j = p.j;
  row.cluster1 = cl.shear.size();
  row.cluster2 = cl.gabor.size();
  row.delta1 = relative_sparsity(p.cartoon, p.shear, cl.shear);
  row.delta2 = relative_sparsity(p.texture, p.gabor, cl.gabor);
  auto& mu = row.mu;
  coherence_columns(cl.shear, p.shear, p.gabor, p.missing, mu.mu_shear_gabor, mu.mu_pshear_shear, mu.mu_pshear_gabor);
  coherence_columns(cl.gabor, p.gabor, p.shear, p.missing, mu.mu_gabor_shear, mu.mu_pgabor_gabor, mu.mu_pgabor_shear);
  row.kappa1_bound = std::max(mu.mu_shear_gabor, mu.mu_gabor_shear);
  row.kappa2_bound = std::max(mu.mu_pshear_shear + mu.mu_pgabor_shear, mu.mu_pgabor_gabor + mu.mu_pshear_gabor);
  row.composite = composite_mu(mu);
  row.bound = error_bound(row.delta1 + row.delta2, row.composite);
  return row;
}

ScaleAnalysis analyze_scales(const Scene& scene, const RunConfig& cfg) {
  ScaleAnalysis out;
  for (int j : cfg.scales) {
    try {
      const auto p = build_scale_problem(scene, cfg, j);
      out.rows.push_back(analyze_scale(p, scene, cfg));
    } catch (const ScaleError&) {
      out.skipped.push_back(j);
    }
  }
  return out;
}

EndToEndRow solve_scale(const ScaleProblem& p, const SolverConfig& solver, SeparationResult* keep) {
  auto r = solve_inpsep(p.mixed, p.missing, p.shear, p.gabor, solver);
  EndToEndRow row;
  row.j = p.j;
  row.h = p.h;
  const double ec = norm_diff(r.C_star, p.cartoon), et = norm_diff(r.T_star, p.texture);
  row.error_sum = ec + et;
  row.relative_error = row.error_sum / (norm_on(p.cartoon) + norm_on(p.texture));
  const double pc = norm_on(p.cartoon, &p.missing);
  row.missing_cartoon = pc > 0 ? norm_diff(r.C_star, p.cartoon, &p.missing) / pc : kNaN;
  const double et_missing = norm_diff(r.T_star, p.texture, &p.missing);
  row.missing_texture = et_missing / (p.h * std::ldexp(1.0, -p.j));
  const double pt = norm_on(p.texture, &p.missing);
  row.missing_texture_relative = pt > 0 ? et_missing / pt : kNaN;
  row.feasibility = r.feasibility_trace.empty() ? 0 : r.feasibility_trace.back();
  row.iterations = r.iterations_used;
  row.converged = r.converged;
  if (keep) *keep = std::move(r);
  return row;
}

PipelineResult multiscale_pipeline(const Scene& scene, const RunConfig& cfg) {
  PipelineResult out;
  out.cartoon = SampledImage(scene.n, Domain::Spatial);
  out.texture = SampledImage(scene.n, Domain::Spatial);
  for (int j : cfg.scales) {
    std::optional<ScaleProblem> p;
    try {
      p.emplace(build_scale_problem(scene, cfg, j));
    } catch (const ScaleError&) {
      out.skipped.push_back(j);
      continue;
    }
    SeparationResult r;
    out.rows.push_back(solve_scale(*p, cfg.solver, &r));
    const auto c = inverse_transform(resize_spectrum(forward_transform(r.C_star), scene.n));
    const auto t = inverse_transform(resize_spectrum(forward_transform(r.T_star), scene.n));
    for (std::size_t i = 0; i < c.data.size(); ++i) {
      out.cartoon.data[i] += c.data[i];
      out.texture.data[i] += t.data[i];
    }
  }
  return out;
}

std::vector<CsvRow> trend_rows(const std::string& kind, const std::string& quantity, const std::vector<int>& js,
                               const std::vector<double>& values, bool decreasing, double min_drop,
                               const std::string& fixed_flag) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < js.size(); ++i) {
    CsvRow r{kind, js[i], quantity, values[i], std::log2(values[i]), kNaN, fixed_flag};
    if (i > 0) {
      r.slope = r.log2_value - rows.back().log2_value;
      if (decreasing) {
        bool ok = values[i] < values[i - 1];
        if (min_drop > 0) ok = ok && -r.slope >= min_drop;
        r.flag = ok ? "pass" : "fail";
      }
    } else if (decreasing) {
      r.flag = "base";
    }
    rows.push_back(r);
  }
  return rows;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << "kind,j,quantity,value,log2_value,slope,flag\n";
  for (const auto& r : rows)
    out << r.kind << ',' << r.j << ',' << r.quantity << ',' << fmt(r.value) << ',' << fmt(r.log2_value) << ','
        << fmt(r.slope) << ',' << r.flag << '\n';
  if (!out) throw IOError("failed writing " + path);
}

namespace {

std::vector<CsvRow> skipped_rows(const std::string& kind, const std::vector<int>& skipped) {
  std::vector<CsvRow> rows;
  for (int j : skipped) rows.push_back({kind, j, "all", kNaN, kNaN, kNaN, "ScaleSkipped"});
  return rows;
}

void append(std::vector<CsvRow>& to, const std::vector<CsvRow>& from) { to.insert(to.end(), from.begin(), from.end()); }

}  // namespace

std::vector<CsvRow> sparsity_rows(const ScaleAnalysis& a, DecayKind which) {
  std::vector<int> js;
  std::vector<double> v;
  for (const auto& r : a.rows) {
    js.push_back(r.j);
    v.push_back(which == DecayKind::Sparsity1 ? r.delta1 : r.delta2);
  }
  const std::string kind = which == DecayKind::Sparsity1 ? "sparsity1" : "sparsity2";
  auto rows = trend_rows(kind, which == DecayKind::Sparsity1 ? "delta1" : "delta2", js, v, true, 1.0);
  append(rows, skipped_rows(kind, a.skipped));
  return rows;
}

std::vector<CsvRow> coherence_rows(const ScaleAnalysis& a) {
  std::vector<int> js;
  for (const auto& r : a.rows) js.push_back(r.j);
  const std::vector<std::pair<std::string, double CoherenceInputs::*>> columns{
      {"mu_L1_Psi_G", &CoherenceInputs::mu_shear_gabor},   {"mu_L2_G_Psi", &CoherenceInputs::mu_gabor_shear},
      {"mu_L1_PPsi_Psi", &CoherenceInputs::mu_pshear_shear}, {"mu_L2_PG_G", &CoherenceInputs::mu_pgabor_gabor},
      {"mu_L2_PG_Psi", &CoherenceInputs::mu_pgabor_shear},  {"mu_L1_PPsi_G", &CoherenceInputs::mu_pshear_gabor}};
  std::vector<CsvRow> rows;
  for (const auto& [name, member] : columns) {
    std::vector<double> v;
    for (const auto& r : a.rows) v.push_back(r.mu.*member);
    append(rows, trend_rows("coherence", name, js, v, true));
  }
  std::vector<double> comp, k1, k2;
  for (const auto& r : a.rows) {
    comp.push_back(r.composite);
    k1.push_back(r.kappa1_bound);
    k2.push_back(r.kappa2_bound);
  }
  append(rows, trend_rows("coherence", "kappa1_bound", js, k1, false));
  append(rows, trend_rows("coherence", "kappa2_bound", js, k2, false));
  auto comp_rows = trend_rows("coherence", "composite_mu", js, comp, false);
  for (std::size_t i = 0; i < comp_rows.size(); ++i) comp_rows[i].flag = comp[i] < 0.5 ? "guarantee" : "NoGuarantee";
  append(rows, comp_rows);
  append(rows, skipped_rows("coherence", a.skipped));
  return rows;
}

std::vector<CsvRow> energy_rows(const Scene& scene, const RunConfig& cfg) {
  const auto report = energy_balance_report(scene.cartoon_hat, scene.texture_hat, cfg.scales);
  std::vector<int> js;
  std::vector<double> c, t, ratio, scaled;
  for (const auto& r : report) {
    js.push_back(r.j);
    c.push_back(r.cartoon);
    t.push_back(r.texture);
    ratio.push_back(r.ratio);
    scaled.push_back(r.cartoon_scaled);
  }
  std::vector<CsvRow> rows;
  append(rows, trend_rows("energy", "cartoon_energy", js, c, false));
  append(rows, trend_rows("energy", "texture_energy", js, t, false));
  auto rr = trend_rows("energy", "ratio", js, ratio, false);
  for (std::size_t i = 0; i < rr.size(); ++i) rr[i].flag = report[i].flag ? "pass" : "fail";
  append(rows, rr);
  append(rows, trend_rows("energy", "cartoon_energy_scaled", js, scaled, false));
  return rows;
}

std::vector<CsvRow> missing_energy_rows(const Scene& scene, const RunConfig& cfg) {
  const auto report =
      missing_energy_check(scene.cartoon, scene.cartoon_hat, cfg.alpha, cfg.epsilon, cfg.mask_c, cfg.scales);
  std::vector<CsvRow> rows;
  std::vector<int> js;
  std::vector<double> v;
  std::vector<std::string> flags;
  for (const auto& r : report) {
    if (r.skipped) {
      rows.push_back({"missing_energy", r.j, "ratio", kNaN, kNaN, kNaN, "ScaleSkipped"});
      continue;
    }
    js.push_back(r.j);
    v.push_back(r.ratio);
    flags.push_back(!r.applicable ? "inapplicable" : r.flag ? "pass" : "fail");
  }
  auto tr = trend_rows("missing_energy", "ratio", js, v, false);
  for (std::size_t i = 0; i < tr.size(); ++i) tr[i].flag = flags[i];
  append(rows, tr);
  return rows;
}

std::vector<CsvRow> endtoend_rows(const PipelineResult& run, const ScaleAnalysis& a) {
  std::vector<int> js;
  std::vector<double> rel, mc, mt, mtr, err, bound;
  std::vector<std::string> bound_flags;
  for (const auto& r : run.rows) {
    js.push_back(r.j);
    rel.push_back(r.relative_error);
    mc.push_back(r.missing_cartoon);
    mt.push_back(r.missing_texture);
    mtr.push_back(r.missing_texture_relative);
    err.push_back(r.error_sum);
    double b = kNaN;
    std::string flag = "NoGuarantee";
    for (const auto& row : a.rows)
      if (row.j == r.j && row.bound) {
        b = *row.bound;
        flag = r.error_sum <= b * 1.05 ? "pass" : "fail";
      }
    bound.push_back(b);
    bound_flags.push_back(flag);
  }
  std::vector<CsvRow> rows;
  append(rows, trend_rows("endtoend", "relative_error", js, rel, true));
  append(rows, trend_rows("endtoend", "missing_cartoon_ratio", js, mc, true));
  append(rows, trend_rows("endtoend", "missing_texture_ratio", js, mt, true));
  append(rows, trend_rows("endtoend", "missing_texture_relative", js, mtr, false));
  auto er = trend_rows("endtoend", "error_sum", js, err, false);
  append(rows, er);
  auto br = trend_rows("endtoend", "bound", js, bound, false);
  for (std::size_t i = 0; i < br.size(); ++i) br[i].flag = bound_flags[i];
  append(rows, br);
  append(rows, skipped_rows("endtoend", run.skipped));
  return rows;
}

std::vector<CsvRow> decay_experiment(DecayKind kind, const Scene& scene, const RunConfig& cfg) {
  switch (kind) {
    case DecayKind::Sparsity1:
    case DecayKind::Sparsity2: return sparsity_rows(analyze_scales(scene, cfg), kind);
    case DecayKind::Coherence: return coherence_rows(analyze_scales(scene, cfg));
    case DecayKind::EnergyBalance: return energy_rows(scene, cfg);
    case DecayKind::MissingEnergy: return missing_energy_rows(scene, cfg);
    case DecayKind::EndToEnd: return endtoend_rows(multiscale_pipeline(scene, cfg), analyze_scales(scene, cfg));
  }
  return {};
}

}  // namespace ipsep
