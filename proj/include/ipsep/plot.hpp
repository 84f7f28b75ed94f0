#pragma once

#include <string>
#include <vector>

namespace ipsep {

// Grayscale PNG line plot of y against x (no labels). Non-finite points are dropped.
void write_line_plot(const std::vector<double>& x, const std::vector<double>& y, const std::string& path,
                     int width = 320, int height = 240);

}  // namespace ipsep
