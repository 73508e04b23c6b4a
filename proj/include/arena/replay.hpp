#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/world.hpp"

namespace arena {

/// Canonical little-endian byte serialization of the full world state.
///
/// Integers are written at their declared width, booleans and enums as u8,
/// an absent item style as 0xff, doubles as their IEEE-754 bit pattern.
/// Order: tick (i32), done (u8); map size (i32), map seed (u64), per tile in
/// row-major order terrain (u8) and resource units (i32); agent count (u32)
/// and per agent id, group, row, col, health, food, water (i32), gold (i64),
/// xp x4 (i64), alive (u8), immunity, lifespan (i32), style (u8), damage
/// dealt (i64), kills (i32), gold earned (i64), item count (u32) then items;
/// NPC count (u32) and per NPC id, row, col (i32), disposition (u8), health
/// (i32), style (u8), level (i32), alive (u8), last attacker (i32); listing
/// count (u32) and per listing id (i64), seller (i32), item, price (i64),
/// listed tick (i32); next listing id (i64); event count (u64) and per event
/// tick, agent (i32), kind (u8), value (i64); per assignment progress (f64),
/// completed (u8).
/// An item is kind (u8), style (u8), tier, quantity (i32), equipped (u8).
std::vector<std::uint8_t> serialize_state(const World& world);

/// 64-bit FNV-1a over serialize_state().
std::uint64_t state_hash(const World& world);

/// Hash rendered as 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

/// JSON-lines replay: a header line, then one line per tick of
/// {"tick", "events", "agents", "npcs"}.
class ReplayWriter {
 public:
  explicit ReplayWriter(std::ostream& out) : out_(out) {}

  /// Header carries the env config, seeds and `extra`.
  void header(const World& world, std::uint64_t map_seed, const nlohmann::json& extra = nlohmann::json::object());
  void tick(const World& world, const std::vector<GameEvent>& events);

 private:
  std::ostream& out_;
};

nlohmann::json event_to_json(const GameEvent& e);

}  // namespace arena
