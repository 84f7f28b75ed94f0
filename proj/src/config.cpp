#include "ipsep/config.hpp"

#include <fstream>
#include <set>

#include "ipsep/errors.hpp"

namespace ipsep {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParamError(where + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ParamError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParamError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string kind_name(BumpKind k) { return k == BumpKind::Centered ? "centered" : "offset"; }
std::string constant_name(StepConstant c) { return c == StepConstant::TwoPi ? "2pi" : "pi"; }
std::string algorithm_name(Algorithm a) { return a == Algorithm::PrimalDualCP ? "primal_dual" : "douglas_rachford"; }
std::string sampling_name(Sampling s) { return s == Sampling::Lattice ? "lattice" : "full_grid"; }

}  // namespace

void validate(const RunConfig& cfg) {
  require_grid_size(cfg.grid_size);
  require_epsilon(cfg.alpha, cfg.epsilon);
  if (cfg.scales.empty()) throw ParamError("scales must not be empty");
  for (int j : cfg.scales)
    if (j < 1 || (1L << (2 * j - 1)) > cfg.grid_size / 2)
      throw ParamError("scale " + std::to_string(j) + " does not fit a grid of size " + std::to_string(cfg.grid_size));
  if (!(cfg.cartoon.rho > 0 && cfg.cartoon.rho < 0.5)) throw ParamError("cartoon rho must lie in (0, 1/2)");
  if (cfg.cartoon.r < 1) throw ParamError("cartoon cutoff r must be at least 1");
  if (cfg.texture.s < 1) throw ParamError("texture s must be positive");
  if (cfg.texture.scales.size() != cfg.texture.counts.size())
    throw ParamError("texture scales and counts must have equal length");
  for (int c : cfg.texture.counts)
    if (c < 0) throw ParamError("texture counts must be non-negative");
  if (!(cfg.mask_c > 0)) throw ParamError("mask constant c must be positive");
  validate(cfg.solver);
}

RunConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"grid_size", "alpha", "epsilon", "scales", "cartoon", "texture", "mask", "sampling", "solver",
                  "output_dir", "seed"},
                 "config");
  RunConfig cfg;
  take(j, "grid_size", cfg.grid_size);
  take(j, "alpha", cfg.alpha);
  take(j, "epsilon", cfg.epsilon);
  take(j, "scales", cfg.scales);
  take(j, "output_dir", cfg.output_dir);
  take(j, "seed", cfg.seed);
  if (j.contains("sampling")) {
    const auto s = j.at("sampling").get<std::string>();
    if (s == "lattice") cfg.sampling = Sampling::Lattice;
    else if (s == "full_grid") cfg.sampling = Sampling::FullGrid;
    else throw ParamError("sampling must be 'lattice' or 'full_grid'");
  }
  if (j.contains("cartoon")) {
    const auto& c = j.at("cartoon");
    reject_unknown(c, {"rho", "r", "w_kind", "step_constant"}, "cartoon");
    take(c, "rho", cfg.cartoon.rho);
    take(c, "r", cfg.cartoon.r);
    if (c.contains("w_kind")) {
      const auto k = c.at("w_kind").get<std::string>();
      if (k == "centered") cfg.cartoon.kind = BumpKind::Centered;
      else if (k == "offset") cfg.cartoon.kind = BumpKind::Offset;
      else throw ParamError("cartoon.w_kind must be 'centered' or 'offset'");
    }
    if (c.contains("step_constant")) {
      const auto k = c.at("step_constant").get<std::string>();
      if (k == "2pi") cfg.cartoon.constant = StepConstant::TwoPi;
      else if (k == "pi") cfg.cartoon.constant = StepConstant::Pi;
      else throw ParamError("cartoon.step_constant must be '2pi' or 'pi'");
    }
  }
  if (j.contains("texture")) {
    const auto& t = j.at("texture");
    reject_unknown(t, {"s", "scales", "counts", "auto_balance", "balance_constant", "min_separation", "validate_scales"},
                   "texture");
    take(t, "s", cfg.texture.s);
    take(t, "scales", cfg.texture.scales);
    take(t, "counts", cfg.texture.counts);
    take(t, "auto_balance", cfg.texture.auto_balance);
    take(t, "balance_constant", cfg.texture.balance_constant);
    take(t, "min_separation", cfg.texture.min_separation);
    take(t, "validate_scales", cfg.validate_scales);
  }
  if (j.contains("mask")) {
    const auto& m = j.at("mask");
    reject_unknown(m, {"c"}, "mask");
    take(m, "c", cfg.mask_c);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s,
                   {"max_iters", "tol_feasibility", "tol_objective", "step", "relaxation", "algorithm", "balance",
                    "adaptive"},
                   "solver");
    take(s, "max_iters", cfg.solver.max_iters);
    take(s, "tol_feasibility", cfg.solver.tol_feasibility);
    take(s, "tol_objective", cfg.solver.tol_objective);
    take(s, "step", cfg.solver.step);
    take(s, "relaxation", cfg.solver.relaxation);
    take(s, "balance", cfg.solver.balance);
    take(s, "adaptive", cfg.solver.adaptive);
    if (s.contains("algorithm")) {
      const auto a = s.at("algorithm").get<std::string>();
      if (a == "primal_dual") cfg.solver.algorithm = Algorithm::PrimalDualCP;
      else if (a == "douglas_rachford") cfg.solver.algorithm = Algorithm::DouglasRachford;
      else throw ParamError("solver.algorithm must be 'primal_dual' or 'douglas_rachford'");
    }
  }
  cfg.texture.seed = cfg.seed;
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParamError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json to_json(const RunConfig& cfg) {
  return {
      {"grid_size", cfg.grid_size},
      {"alpha", cfg.alpha},
      {"epsilon", cfg.epsilon},
      {"scales", cfg.scales},
      {"cartoon",
       {{"rho", cfg.cartoon.rho},
        {"r", cfg.cartoon.r},
        {"w_kind", kind_name(cfg.cartoon.kind)},
        {"step_constant", constant_name(cfg.cartoon.constant)}}},
      {"texture",
       {{"s", cfg.texture.s},
        {"scales", cfg.texture.scales},
        {"counts", cfg.texture.counts},
        {"auto_balance", cfg.texture.auto_balance},
        {"balance_constant", cfg.texture.balance_constant},
        {"min_separation", cfg.texture.min_separation},
        {"validate_scales", cfg.validate_scales}}},
      {"mask", {{"c", cfg.mask_c}}},
      {"sampling", sampling_name(cfg.sampling)},
      {"solver",
       {{"max_iters", cfg.solver.max_iters},
        {"tol_feasibility", cfg.solver.tol_feasibility},
        {"tol_objective", cfg.solver.tol_objective},
        {"step", cfg.solver.step},
        {"relaxation", cfg.solver.relaxation},
        {"algorithm", algorithm_name(cfg.solver.algorithm)},
        {"balance", cfg.solver.balance},
        {"adaptive", cfg.solver.adaptive}}},
      {"output_dir", cfg.output_dir},
      {"seed", cfg.seed},
  };
}

}  // namespace ipsep
