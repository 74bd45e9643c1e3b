#include "vase/cli/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "vase/cli/csv.hpp"
#include "vase/ioutil.hpp"
#include "vase/numkit/errors.hpp"

namespace vase::cli {

HeatmapGrid bin_trajectory(std::span<const double> xs, std::span<const double> ys,
                           std::size_t height, std::size_t width, double extent) {
  require(height >= 1 && width >= 1, "heatmap: grid must be at least 1x1");
  require(extent > 0.0, "heatmap: extent must be positive");
  check_length("heatmap ys", ys.size(), xs.size());
  require(!xs.empty(), "heatmap: empty trajectory");

  HeatmapGrid grid;
  grid.height = height;
  grid.width = width;
  grid.extent = extent;
  grid.counts.assign(height * width, 0);
  const double span = 2.0 * extent;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto col = static_cast<std::size_t>(std::clamp(
        static_cast<long>((xs[i] + extent) / span * static_cast<double>(width)),
        0L, static_cast<long>(width) - 1));
    const auto row = static_cast<std::size_t>(std::clamp(
        static_cast<long>((extent - ys[i]) / span * static_cast<double>(height)),
        0L, static_cast<long>(height) - 1));
    ++grid.counts[row * width + col];
  }
  grid.total = xs.size();
  return grid;
}

void write_grid_csv(std::ostream& os, const HeatmapGrid& grid) {
  for (std::size_t r = 0; r < grid.height; ++r) {
    std::vector<std::string> cells(grid.width);
    for (std::size_t c = 0; c < grid.width; ++c) {
      cells[c] = std::to_string(grid.at(r, c));
    }
    write_csv_row(os, cells);
  }
}

void write_grid_pgm(std::ostream& os, const HeatmapGrid& grid) {
  std::uint64_t max_count = 0;
  for (auto c : grid.counts) max_count = std::max(max_count, c);
  const double denom = std::log1p(static_cast<double>(max_count));
  os << "P5\n" << grid.width << ' ' << grid.height << "\n255\n";
  for (auto c : grid.counts) {
    const double v = denom > 0.0
                         ? std::log1p(static_cast<double>(c)) / denom * 255.0
                         : 0.0;
    os.put(static_cast<char>(static_cast<unsigned char>(std::lround(v))));
  }
}

}  // namespace vase::cli
