#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "arena/types.hpp"

namespace arena {

/// Column order of an entity row. All values are in [0, 1].
enum EntityFeature : std::uint8_t {
  kEntRelRow = 0,   ///< (drow + R) / 2R
  kEntRelCol,       ///< (dcol + R) / 2R
  kEntHealth,       ///< health / 100
  kEntLevel,        ///< level / 10 (agents: best combat level)
  kEntStyle,        ///< style / 2
  kEntImmune,       ///< 1 if spawn immunity is active
  kEntIsNpc,
  kEntDisposition,  ///< disposition / 2, 0 for agents
  kEntSameGroup,    ///< 1 for agents of the observer's group
  kEntityFeatures
};

enum InventoryFeature : std::uint8_t {
  kInvKind = 0,  ///< kind / 4
  kInvStyle,     ///< (style + 1) / 3, 0 when the kind has no style
  kInvTier,      ///< tier / 10
  kInvQuantity,  ///< min(quantity, 20) / 20
  kInvEquipped,
  kInventoryFeatures
};

enum MarketFeature : std::uint8_t {
  kMktKind = 0,
  kMktStyle,
  kMktTier,
  kMktPrice,  ///< min(price, 100) / 100
  kMarketFeatures
};

enum SelfFeature : std::uint8_t {
  kSelfHealth = 0,
  kSelfFood,
  kSelfWater,
  kSelfGold,  ///< min(gold, 100) / 100
  kSelfMelee,
  kSelfRanged,
  kSelfMagic,
  kSelfForage,
  kSelfImmunity,  ///< remaining / configured immunity ticks
  kSelfRow,       ///< row / (size - 1)
  kSelfCol,
  kSelfStyle,
  kSelfTick,  ///< tick / max_ticks
  kSelfAlive,
  kSelfFeatures
};

inline constexpr float kQuantityScale = 20.0f;
inline constexpr float kPriceScale = 100.0f;
inline constexpr float kGoldScale = 100.0f;

using EntityRow = std::array<float, kEntityFeatures>;
using InventoryRow = std::array<float, kInventoryFeatures>;
using MarketRow = std::array<float, kMarketFeatures>;
using SelfRow = std::array<float, kSelfFeatures>;

/// Structured per-agent view. Every fixed-capacity list has a parallel
/// validity mask; masked-out rows are all zero. The tile crop is a
/// (2R+1)x(2R+1) row-major window centred on the agent, zero outside the map.
struct Observation {
  AgentId agent_id = 0;
  std::int32_t radius = 0;

  std::vector<float> tile_terrain;   ///< terrain code / 5
  std::vector<float> tile_resource;  ///< resource units / max units
  std::vector<std::uint8_t> tile_mask;

  std::vector<EntityRow> entities;
  std::vector<std::uint8_t> entity_mask;

  std::vector<InventoryRow> inventory;
  std::vector<std::uint8_t> inventory_mask;

  std::vector<MarketRow> market;
  std::vector<std::uint8_t> market_mask;

  SelfRow self{};
  std::vector<float> task_embedding;

  std::int32_t side() const noexcept { return 2 * radius + 1; }
  std::size_t tile_index(std::int32_t drow, std::int32_t dcol) const noexcept {
    return static_cast<std::size_t>(drow + radius) * static_cast<std::size_t>(side()) +
           static_cast<std::size_t>(dcol + radius);
  }
  bool alive() const noexcept { return self[kSelfAlive] > 0.5f; }
};

// Decoding helpers for policies consuming scaled features.

inline TerrainKind decode_terrain(float v) {
  return static_cast<TerrainKind>(static_cast<int>(std::lround(v * (kNumTerrainKinds - 1))));
}
inline std::int32_t decode_offset(float v, std::int32_t radius) {
  return static_cast<std::int32_t>(std::lround(v * 2.0f * static_cast<float>(radius))) - radius;
}
inline ItemKind decode_item_kind(float v) {
  return static_cast<ItemKind>(static_cast<int>(std::lround(v * (kNumItemKinds - 1))));
}
inline CombatStyle decode_style(float v) {
  return static_cast<CombatStyle>(static_cast<int>(std::lround(v * (kNumCombatStyles - 1))));
}
inline Disposition decode_disposition(float v) {
  return static_cast<Disposition>(static_cast<int>(std::lround(v * 2.0f)));
}
inline std::int32_t decode_level(float v) { return static_cast<std::int32_t>(std::lround(v * 10.0f)); }
inline std::int32_t decode_tier(float v) { return static_cast<std::int32_t>(std::lround(v * kMaxTier)); }
inline std::int32_t decode_percent(float v) { return static_cast<std::int32_t>(std::lround(v * 100.0f)); }

/// Offsets of each block inside the flat float layout produced by
/// flatten(). Masks are emitted as 0.0/1.0 floats.
struct ObservationLayout {
  std::size_t tile_cells = 0;
  std::size_t entity_rows = 0;
  std::size_t inventory_rows = 0;
  std::size_t market_rows = 0;
  std::size_t embedding_dim = 0;

  std::size_t tile_terrain = 0;
  std::size_t tile_resource = 0;
  std::size_t tile_mask = 0;
  std::size_t entities = 0;
  std::size_t entity_mask = 0;
  std::size_t inventory = 0;
  std::size_t inventory_mask = 0;
  std::size_t market = 0;
  std::size_t market_mask = 0;
  std::size_t self = 0;
  std::size_t task_embedding = 0;
  std::size_t total = 0;
};

ObservationLayout observation_layout(std::int32_t radius, std::int32_t entity_capacity,
                                     std::int32_t inventory_capacity, std::int32_t market_top_k,
                                     std::int32_t embedding_dim);

/// Field-order flat encoding (tile_terrain, tile_resource, tile_mask,
/// entities, entity_mask, inventory, inventory_mask, market, market_mask,
/// self, task_embedding).
std::vector<float> flatten(const Observation& obs);

}  // namespace arena
