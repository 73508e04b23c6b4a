#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "arena/types.hpp"

namespace arena {

enum class Direction : std::uint8_t { North = 0, East, South, West };

constexpr Position step_toward(Position p, Direction d) noexcept {
  switch (d) {
    case Direction::North: return {p.row - 1, p.col};
    case Direction::East: return {p.row, p.col + 1};
    case Direction::South: return {p.row + 1, p.col};
    case Direction::West: return {p.row, p.col - 1};
  }
  return p;
}

namespace act {

struct Noop {
  friend bool operator==(const Noop&, const Noop&) = default;
};
struct Move {
  Direction direction = Direction::North;
  friend bool operator==(const Move&, const Move&) = default;
};
/// `target_slot` indexes the attacker's observed entity rows.
struct Attack {
  CombatStyle style = CombatStyle::Melee;
  std::int32_t target_slot = 0;
  friend bool operator==(const Attack&, const Attack&) = default;
};
struct Use {
  std::int32_t inventory_slot = 0;
  friend bool operator==(const Use&, const Use&) = default;
};
struct Sell {
  std::int32_t inventory_slot = 0;
  std::int64_t price = 1;
  friend bool operator==(const Sell&, const Sell&) = default;
};
/// `market_slot` indexes the observed market rows.
struct Buy {
  std::int32_t market_slot = 0;
  friend bool operator==(const Buy&, const Buy&) = default;
};
struct GiveItem {
  std::int32_t inventory_slot = 0;
  std::int32_t target_slot = 0;
  friend bool operator==(const GiveItem&, const GiveItem&) = default;
};
struct GiveGold {
  std::int64_t amount = 0;
  std::int32_t target_slot = 0;
  friend bool operator==(const GiveGold&, const GiveGold&) = default;
};

}  // namespace act

using Action = std::variant<act::Noop, act::Move, act::Attack, act::Use, act::Sell, act::Buy,
                            act::GiveItem, act::GiveGold>;

inline bool is_give(const Action& a) {
  return std::holds_alternative<act::GiveItem>(a) || std::holds_alternative<act::GiveGold>(a);
}

/// Packs an action into 32 bits: variant index in bits 0-3, first argument
/// in bits 4-11, second argument in bits 12-31. Arguments that do not fit
/// are saturated, so the code is a lossy summary for out-of-range values.
std::uint32_t encode_action(const Action& a);
Action decode_action(std::uint32_t code);

std::string describe(const Action& a);

}  // namespace arena
