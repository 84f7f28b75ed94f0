#pragma once

#include <random>

#include "ipsep/grid.hpp"

namespace testsupport {

inline ipsep::cvec random_cvec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ipsep::cvec v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline ipsep::SampledImage random_image(int n, std::mt19937_64& rng, ipsep::Domain d = ipsep::Domain::Spatial) {
  return ipsep::SampledImage(n, d, random_cvec(static_cast<std::size_t>(n) * n, rng));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testsupport
