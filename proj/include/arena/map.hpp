#pragma once

#include <cstdint>
#include <vector>

#include "arena/types.hpp"

namespace arena {

struct Tile {
  TerrainKind terrain = TerrainKind::Grass;
  std::int32_t resource_units = 0;

  friend bool operator==(const Tile&, const Tile&) = default;
};

inline constexpr std::int32_t kMinMapSize = 16;

/// Square tile grid. Row-major storage; (0,0) is the north-west corner.
class MapGrid {
 public:
  MapGrid() = default;
  MapGrid(std::int32_t size, std::uint64_t seed);

  std::int32_t size() const noexcept { return size_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool in_bounds(Position p) const noexcept {
    return p.row >= 0 && p.col >= 0 && p.row < size_ && p.col < size_;
  }
  Tile& at(Position p) { return tiles_[index(p)]; }
  const Tile& at(Position p) const { return tiles_[index(p)]; }
  const std::vector<Tile>& tiles() const noexcept { return tiles_; }
  std::vector<Tile>& tiles() noexcept { return tiles_; }

  std::size_t count(TerrainKind t) const;

  /// Spawn tiles in clockwise ring order starting at the north-west corner.
  const std::vector<Position>& spawn_tiles() const noexcept { return spawns_; }

  /// Maximum resource units a tile of this terrain regrows to.
  static std::int32_t capacity(TerrainKind t, std::int32_t forest_units, std::int32_t ore_units) noexcept;

  friend bool operator==(const MapGrid& a, const MapGrid& b) {
    return a.size_ == b.size_ && a.seed_ == b.seed_ && a.tiles_ == b.tiles_;
  }

 private:
  friend MapGrid generate_map(std::uint64_t seed, std::int32_t size);

  std::size_t index(Position p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(p.col);
  }

  std::int32_t size_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Tile> tiles_;
  std::vector<Position> spawns_;
};

/// Procedural map from thresholded value noise. Pure function of
/// (seed, size); throws ConfigError when size < kMinMapSize.
///
/// Layout: a one-tile Water border, a Spawn ring two tiles in from the edge,
/// and an interior of Water/Grass/Forest/Stone/Ore driven by two noise fields
/// (elevation and vegetation). Forest and Water are topped up to 5% coverage
/// from the most suitable Grass tiles when the noise falls short.
MapGrid generate_map(std::uint64_t seed, std::int32_t size);

/// Value noise in [0, 1): hashed lattice values, bilinear interpolation.
double value_noise(std::uint64_t seed, double row, double col, double spacing);

}  // namespace arena
