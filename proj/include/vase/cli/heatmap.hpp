#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace vase::cli {

// Visitation counts over the plane2d square [-extent, extent]^2. Row 0 is
// the top of the image (y = +extent); the total equals the number of binned
// steps.
struct HeatmapGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  double extent = 2.5;
  std::vector<std::uint64_t> counts;  // row-major
  std::uint64_t total = 0;

  std::uint64_t at(std::size_t row, std::size_t col) const {
    return counts[row * width + col];
  }
};

HeatmapGrid bin_trajectory(std::span<const double> xs, std::span<const double> ys,
                           std::size_t height, std::size_t width, double extent);

void write_grid_csv(std::ostream& os, const HeatmapGrid& grid);

// 8-bit binary PGM (P5) with log(1 + count) intensity scaling.
void write_grid_pgm(std::ostream& os, const HeatmapGrid& grid);

}  // namespace vase::cli
