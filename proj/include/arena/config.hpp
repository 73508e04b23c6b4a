#pragma once

#include <cstdint>

#include "arena/types.hpp"

namespace arena {

enum class ImmunityMode : std::uint8_t {
  Fixed,       ///< every agent starts with spawn_immunity_ticks
  Randomized,  ///< each agent draws uniformly from [0, spawn_immunity_ticks]
};

struct CombatConstants {
  std::int32_t base_damage = 5;
  std::int32_t level_coef = 2;
  std::int32_t tier_coef = 3;
  double advantage_mult = 1.5;
  double disadvantage_mult = 0.67;
  std::int32_t armor_coef = 2;
  std::int32_t melee_range = 1;
  std::int32_t ranged_range = 3;
  std::int32_t magic_range = 4;

  std::int32_t range(CombatStyle s) const noexcept {
    switch (s) {
      case CombatStyle::Melee: return melee_range;
      case CombatStyle::Ranged: return ranged_range;
      case CombatStyle::Magic: return magic_range;
    }
    return melee_range;
  }
};

struct MetabolismRates {
  std::int32_t food_decay = 1;
  std::int32_t water_decay = 1;
  std::int32_t food_restore = 20;
  std::int32_t water_restore = 20;
  std::int32_t starvation_damage = 5;
  /// Health regained per tick while food and water are both >= regen_threshold.
  std::int32_t health_regen = 2;
  std::int32_t regen_threshold = 50;
  bool enabled = true;
};

struct EnvConfig {
  std::int32_t num_agents = 128;
  std::int32_t map_size = 64;
  Tick max_ticks = 1024;
  std::int32_t num_npcs = 128;
  std::int32_t early_stop_agent_num = 0;
  bool resilience_enabled = false;
  std::int32_t spawn_immunity_ticks = 20;
  ImmunityMode immunity_mode = ImmunityMode::Fixed;
  bool disable_giving = false;
  MetabolismRates metabolism;
  CombatConstants combat;

  std::int64_t starting_gold = 10;
  std::int32_t inventory_capacity = 12;
  std::int32_t view_radius = 7;
  std::int32_t entity_capacity = 16;
  std::int32_t market_top_k = 16;
  Tick resource_respawn_interval = 32;
  std::int32_t forest_units = 3;
  std::int32_t ore_units = 1;
  std::int32_t poultice_heal = 30;
  std::int32_t ration_food = 30;
  std::int32_t npc_max_level = 5;
  std::int32_t hostile_chase_radius = 5;
  std::int32_t task_embedding_dim = 64;

  std::uint64_t seed = 0;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

}  // namespace arena
