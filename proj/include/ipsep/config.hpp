#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipsep/models.hpp"
#include "ipsep/shearlet.hpp"
#include "ipsep/solver.hpp"

namespace ipsep {

struct RunConfig {
  int grid_size = 1024;
  double alpha = 1.0;
  double epsilon = 0.19;
  std::vector<int> scales{2, 3, 4};
  CartoonSpec cartoon;
  TextureGenConfig texture;
  // Scales at which the texture sparsity caps are enforced.
  std::vector<int> validate_scales{4};
  double mask_c = 1.0;
  Sampling sampling = Sampling::Lattice;
  SolverConfig solver;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

// Throws ParamError naming the violated constraint.
void validate(const RunConfig& cfg);

// Missing keys keep their defaults; unknown keys raise ParamError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace ipsep
