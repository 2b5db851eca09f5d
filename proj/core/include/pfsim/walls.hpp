#pragma once

#include <vector>

#include "pfsim/interfaces.hpp"
#include "pfsim/stats.hpp"

namespace pfsim {

// 2D projections use doubled coordinates: cells have both coordinates odd,
// unit segments have exactly one even coordinate.
struct Cell2 {
  int x2, y2;
  auto operator<=>(const Cell2&) const = default;
};

struct Wall {
  std::vector<Plaquette> A;  // wall plaquettes in I_Full
  std::vector<Plaquette> B;  // wall plaquettes added by the star augmentation
  std::vector<Cell2> cells;     // projection of the horizontal plaquettes
  std::vector<Cell2> segments;  // projection of the vertical plaquettes
  std::vector<Cell2> hull;      // cells of the projected hull
  bool touches_side = false;

  int excess_area() const { return static_cast<int>(A.size()) - static_cast<int>(cells.size()); }
};

struct Ceiling {
  std::vector<Plaquette> plaquettes;
  int height2 = 0;
};

struct WallDecomposition {
  std::vector<Plaquette> star;  // I*
  std::vector<Wall> walls;
  std::vector<Ceiling> ceilings;
  int total_excess() const;
};

std::vector<Plaquette> star_augment(const InterfaceSet& full, const Domain& d);
WallDecomposition decompose_walls(const InterfaceSet& full, const Domain& d);
// Indices of the walls whose projection is not inside another wall's hull.
std::vector<int> outermost_walls(const std::vector<Wall>& walls);

struct WallSampleStats {
  int full_size = 0;
  int n_walls = 0;
  int total_excess = 0;
  int outermost_hull_area = 0;
  int level_set_count = 0;  // columns whose blue height is at least h + 1
};

WallSampleStats wall_sample_stats(const InterfaceSet& full, const InterfaceSet& blue, const Domain& d,
                                  int level_h);

struct WallAreaSummary {
  McEstimate hull_fraction;       // outermost hull area / n^2
  McEstimate level_set_fraction;  // level set count / n^2
  McEstimate full_area_ratio;     // |I_Full| / n^2
};

WallAreaSummary wall_area_statistics(const std::vector<WallSampleStats>& samples, int n);

}  // namespace pfsim
