#include "arena/map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arena/rng.hpp"

namespace arena {
namespace {

constexpr double kWaterLevel = 0.22;
constexpr double kStoneLevel = 0.78;
constexpr double kForestLevel = 0.58;
constexpr double kOreChance = 0.03;
constexpr double kMinCoverage = 0.05;
constexpr std::int32_t kSpawnInset = 2;

double lattice(std::uint64_t seed, std::int64_t r, std::int64_t c) {
  return unit_from_u64(hash_combine(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c)));
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double fractal(std::uint64_t seed, double r, double c) {
  return 0.65 * value_noise(seed, r, c, 16.0) + 0.35 * value_noise(hash_combine(seed, 1), r, c, 6.0);
}

// Converts the `want - have` best-ranked candidates to `to`.
void top_up(std::vector<Tile>& tiles, std::vector<std::pair<double, std::size_t>> candidates,
            std::size_t have, std::size_t want, TerrainKind to) {
  if (have >= want) return;
  std::sort(candidates.begin(), candidates.end());
  for (std::size_t i = 0; i < candidates.size() && have < want; ++i, ++have) {
    tiles[candidates[i].second].terrain = to;
  }
}

}  // namespace

MapGrid::MapGrid(std::int32_t size, std::uint64_t seed)
    : size_(size), seed_(seed), tiles_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {}

std::size_t MapGrid::count(TerrainKind t) const {
  return static_cast<std::size_t>(
      std::count_if(tiles_.begin(), tiles_.end(), [t](const Tile& x) { return x.terrain == t; }));
}

std::int32_t MapGrid::capacity(TerrainKind t, std::int32_t forest_units, std::int32_t ore_units) noexcept {
  switch (t) {
    case TerrainKind::Forest: return forest_units;
    case TerrainKind::Ore: return ore_units;
    default: return 0;
  }
}

double value_noise(std::uint64_t seed, double row, double col, double spacing) {
  const double fr = row / spacing;
  const double fc = col / spacing;
  const auto r0 = static_cast<std::int64_t>(std::floor(fr));
  const auto c0 = static_cast<std::int64_t>(std::floor(fc));
  const double tr = smooth(fr - static_cast<double>(r0));
  const double tc = smooth(fc - static_cast<double>(c0));
  const double top = lattice(seed, r0, c0) * (1 - tc) + lattice(seed, r0, c0 + 1) * tc;
  const double bot = lattice(seed, r0 + 1, c0) * (1 - tc) + lattice(seed, r0 + 1, c0 + 1) * tc;
  return top * (1 - tr) + bot * tr;
}

MapGrid generate_map(std::uint64_t seed, std::int32_t size) {
  if (size < kMinMapSize) {
    throw ConfigError("map size " + std::to_string(size) + " is below the minimum of " +
                      std::to_string(kMinMapSize));
  }
  MapGrid map(size, seed);
  const std::uint64_t elevation_seed = hash_combine(seed, 0xe1e7);
  const std::uint64_t vegetation_seed = hash_combine(seed, 0x7e6e);
  const std::uint64_t ore_seed = hash_combine(seed, 0x04e);

  std::vector<std::pair<double, std::size_t>> forest_candidates;
  std::vector<std::pair<double, std::size_t>> water_candidates;

  for (std::int32_t r = 0; r < size; ++r) {
    for (std::int32_t c = 0; c < size; ++c) {
      Tile& tile = map.at({r, c});
      const std::int32_t edge = std::min({r, c, size - 1 - r, size - 1 - c});
      if (edge == 0) {
        tile.terrain = TerrainKind::Water;
        continue;
      }
      if (edge == kSpawnInset) {
        tile.terrain = TerrainKind::Spawn;
        continue;
      }
      const double elevation = fractal(elevation_seed, r, c);
      const double vegetation = fractal(vegetation_seed, r, c);
      // the ring between border and spawns stays walkable
      if (edge > kSpawnInset && elevation < kWaterLevel) {
        tile.terrain = TerrainKind::Water;
      } else if (edge > kSpawnInset && elevation > kStoneLevel) {
        tile.terrain = TerrainKind::Stone;
      } else if (vegetation > kForestLevel) {
        tile.terrain = TerrainKind::Forest;
      } else if (unit_from_u64(hash_combine(ore_seed, r, c)) < kOreChance) {
        tile.terrain = TerrainKind::Ore;
      } else {
        tile.terrain = TerrainKind::Grass;
        const std::size_t idx = static_cast<std::size_t>(r) * size + c;
        forest_candidates.emplace_back(-vegetation, idx);
        if (edge > kSpawnInset) water_candidates.emplace_back(elevation, idx);
      }
    }
  }

  const auto want = static_cast<std::size_t>(std::ceil(kMinCoverage * size * size));
  top_up(map.tiles_, std::move(forest_candidates), map.count(TerrainKind::Forest), want, TerrainKind::Forest);
  // tiles converted to Forest above are no longer candidates
  std::erase_if(water_candidates, [&](const auto& cand) {
    return map.tiles_[cand.second].terrain != TerrainKind::Grass;
  });
  top_up(map.tiles_, std::move(water_candidates), map.count(TerrainKind::Water), want, TerrainKind::Water);

  for (Tile& t : map.tiles_) t.resource_units = MapGrid::capacity(t.terrain, 3, 1);

  // clockwise ring walk
  const std::int32_t lo = kSpawnInset;
  const std::int32_t hi = size - 1 - kSpawnInset;
  for (std::int32_t c = lo; c < hi; ++c) map.spawns_.push_back({lo, c});
  for (std::int32_t r = lo; r < hi; ++r) map.spawns_.push_back({r, hi});
  for (std::int32_t c = hi; c > lo; --c) map.spawns_.push_back({hi, c});
  for (std::int32_t r = hi; r > lo; --r) map.spawns_.push_back({r, lo});
  return map;
}

}  // namespace arena
