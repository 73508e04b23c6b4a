#include "arena/combat.hpp"

#include <cmath>

namespace arena {

double advantage(const CombatConstants& k, CombatStyle attack, CombatStyle defense) noexcept {
  if (beats(attack) == defense) return k.advantage_mult;
  if (loses_to(attack) == defense) return k.disadvantage_mult;
  return 1.0;
}

std::int32_t compute_damage(double base, double multiplier, double defense) noexcept {
  const double raw = std::round(base * multiplier - defense);
  return raw > 0.0 ? static_cast<std::int32_t>(raw) : 0;
}

std::int32_t base_damage(const CombatConstants& k, std::int32_t level, std::int32_t tier) noexcept {
  return k.base_damage + k.level_coef * level + k.tier_coef * tier;
}

std::int32_t resolve_combat(const CombatConstants& k, const Combatant& attacker, const Combatant& defender,
                            CombatStyle style) noexcept {
  if (defender.immunity_remaining > 0) return 0;
  return compute_damage(base_damage(k, attacker.level, attacker.tier),
                        advantage(k, style, defender.active_style),
                        static_cast<double>(k.armor_coef * defender.armor_tier));
}

}  // namespace arena
