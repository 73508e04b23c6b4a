#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

using AgentId = std::int32_t;
using Tick = std::int32_t;

/// Raised for invalid configuration or precondition violations at API
/// boundaries (bad sizes, count mismatches, malformed files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Position {
  std::int32_t row = 0;
  std::int32_t col = 0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

constexpr std::int32_t chebyshev(Position a, Position b) noexcept {
  const std::int32_t dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const std::int32_t dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr > dc ? dr : dc;
}

constexpr std::int32_t manhattan(Position a, Position b) noexcept {
  const std::int32_t dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const std::int32_t dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr + dc;
}

enum class TerrainKind : std::uint8_t { Water = 0, Grass, Forest, Stone, Ore, Spawn };
inline constexpr int kNumTerrainKinds = 6;

constexpr bool is_passable(TerrainKind t) noexcept {
  return t != TerrainKind::Water && t != TerrainKind::Stone;
}

enum class CombatStyle : std::uint8_t { Melee = 0, Ranged, Magic };
inline constexpr int kNumCombatStyles = 3;

/// The style `s` has the advantage over. Melee > Ranged > Magic > Melee.
constexpr CombatStyle beats(CombatStyle s) noexcept {
  switch (s) {
    case CombatStyle::Melee: return CombatStyle::Ranged;
    case CombatStyle::Ranged: return CombatStyle::Magic;
    case CombatStyle::Magic: return CombatStyle::Melee;
  }
  return CombatStyle::Ranged;
}

constexpr CombatStyle loses_to(CombatStyle s) noexcept { return beats(beats(s)); }

enum class Skill : std::uint8_t { Melee = 0, Ranged, Magic, Forage };
inline constexpr int kNumSkills = 4;
inline constexpr int kMaxLevel = 10;

constexpr Skill skill_for(CombatStyle s) noexcept { return static_cast<Skill>(s); }

/// Level n >= 2 needs 10 * n^2 cumulative xp; level 1 is the floor.
constexpr int level_from_xp(std::int64_t xp) noexcept {
  int level = 1;
  while (level < kMaxLevel && 10LL * (level + 1) * (level + 1) <= xp) ++level;
  return level;
}

constexpr std::int64_t xp_for_level(int level) noexcept {
  return level <= 1 ? 0 : 10LL * level * level;
}

struct SkillSet {
  std::array<std::int64_t, kNumSkills> xp{};

  int level(Skill s) const noexcept { return level_from_xp(xp[static_cast<int>(s)]); }
  std::int64_t max_xp() const noexcept {
    std::int64_t m = 0;
    for (auto v : xp) m = v > m ? v : m;
    return m;
  }
};

enum class ItemKind : std::uint8_t { Armor = 0, Weapon, Ammo, Ration, Poultice };
inline constexpr int kNumItemKinds = 5;
inline constexpr int kMaxTier = 10;

constexpr bool is_equippable(ItemKind k) noexcept {
  return k == ItemKind::Armor || k == ItemKind::Weapon;
}
constexpr bool is_stackable(ItemKind k) noexcept { return !is_equippable(k); }
constexpr bool has_style(ItemKind k) noexcept {
  return k == ItemKind::Weapon || k == ItemKind::Ammo;
}

struct Item {
  ItemKind kind = ItemKind::Ration;
  std::optional<CombatStyle> style;
  std::int32_t tier = 1;
  std::int32_t quantity = 1;
  bool equipped = false;

  bool stacks_with(const Item& o) const noexcept {
    return is_stackable(kind) && kind == o.kind && style == o.style && tier == o.tier;
  }
  friend bool operator==(const Item&, const Item&) = default;
};

enum class Disposition : std::uint8_t { Passive = 0, Neutral, Hostile };

struct AgentState {
  AgentId id = 0;
  std::int32_t group_id = 0;
  Position pos;
  std::int32_t health = 100;
  std::int32_t food = 100;
  std::int32_t water = 100;
  std::int64_t gold = 0;
  SkillSet skills;
  std::vector<Item> inventory;
  bool alive = true;
  std::int32_t spawn_immunity_remaining = 0;
  Tick lifespan = 0;
  /// Style used by the most recent attack; the defender's active style.
  CombatStyle style = CombatStyle::Melee;
  std::int64_t damage_dealt = 0;
  std::int32_t kills = 0;
  std::int64_t gold_earned = 0;
};

struct NpcState {
  std::int32_t id = 0;
  Position pos;
  Disposition disposition = Disposition::Passive;
  std::int32_t health = 0;
  CombatStyle style = CombatStyle::Melee;
  std::int32_t level = 1;
  bool alive = true;
  /// Agent that most recently damaged this NPC, -1 if none.
  AgentId last_attacker = -1;
};

struct MarketListing {
  std::int64_t listing_id = 0;
  AgentId seller_id = 0;
  Item item;
  std::int64_t price = 1;
  Tick listed_tick = 0;
};

enum class EventKind : std::uint8_t {
  EatFood = 0,
  DrinkWater,
  ScoreHit,
  PlayerKill,
  ConsumeItem,
  HarvestItem,
  EquipItem,
  ListItem,
  BuyItem,
  EarnGold,
  LevelUp,
};
inline constexpr int kNumEventKinds = 11;

/// `value` carries the event payload: damage for ScoreHit, gold amount for
/// EarnGold, ItemKind for item events, Skill for LevelUp, 0 otherwise.
struct GameEvent {
  Tick tick = 0;
  AgentId agent_id = 0;
  EventKind kind = EventKind::EatFood;
  std::int64_t value = 0;

  friend bool operator==(const GameEvent&, const GameEvent&) = default;
};

std::string_view to_string(TerrainKind t);
std::string_view to_string(CombatStyle s);
std::string_view to_string(Skill s);
std::string_view to_string(ItemKind k);
std::string_view to_string(Disposition d);
std::string_view to_string(EventKind e);

std::optional<CombatStyle> parse_combat_style(std::string_view s);
std::optional<Skill> parse_skill(std::string_view s);
std::optional<ItemKind> parse_item_kind(std::string_view s);
std::optional<EventKind> parse_event_kind(std::string_view s);

}  // namespace arena
