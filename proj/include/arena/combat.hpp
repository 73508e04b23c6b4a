#pragma once

#include <cstdint>

#include "arena/config.hpp"
#include "arena/types.hpp"

namespace arena {

/// Damage multiplier for an attack of `attack` against a defender whose
/// active style is `defense`.
double advantage(const CombatConstants& k, CombatStyle attack, CombatStyle defense) noexcept;

/// round(base * multiplier - defense), clamped at zero.
std::int32_t compute_damage(double base, double multiplier, double defense) noexcept;

/// 5 + 2*level + 3*tier with the default constants.
std::int32_t base_damage(const CombatConstants& k, std::int32_t level, std::int32_t tier) noexcept;

/// Everything resolve_combat needs to know about one side of a fight.
struct Combatant {
  std::int32_t level = 1;
  /// Tier of the matching weapon/ammo used for this attack, 0 if none.
  std::int32_t tier = 0;
  CombatStyle active_style = CombatStyle::Melee;
  /// Tier of equipped armor, 0 if none.
  std::int32_t armor_tier = 0;
  std::int32_t immunity_remaining = 0;
};

std::int32_t resolve_combat(const CombatConstants& k, const Combatant& attacker, const Combatant& defender,
                            CombatStyle style) noexcept;

}  // namespace arena
