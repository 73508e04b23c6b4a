#include "arena/config.hpp"

#include <cmath>
#include <string>

namespace arena {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("invalid env config: " + msg);
}

}  // namespace

void EnvConfig::validate() const {
  require(num_agents >= 1, "num_agents must be >= 1");
  require(map_size >= 16, "map_size must be >= 16");
  require(max_ticks >= 1, "max_ticks must be >= 1");
  require(num_npcs >= 0, "num_npcs must be >= 0");
  require(early_stop_agent_num >= 0 && early_stop_agent_num <= num_agents,
          "early_stop_agent_num must be in [0, num_agents]");
  require(spawn_immunity_ticks >= 0, "spawn_immunity_ticks must be >= 0");
  require(starting_gold >= 0, "starting_gold must be >= 0");
  require(inventory_capacity >= 1, "inventory_capacity must be >= 1");
  require(view_radius >= 1, "view_radius must be >= 1");
  require(entity_capacity >= 1, "entity_capacity must be >= 1");
  require(market_top_k >= 1, "market_top_k must be >= 1");
  require(resource_respawn_interval >= 1, "resource_respawn_interval must be >= 1");
  require(forest_units >= 1 && ore_units >= 1, "resource units must be >= 1");
  require(npc_max_level >= 1 && npc_max_level <= kMaxLevel, "npc_max_level must be in [1, 10]");
  require(task_embedding_dim >= 1, "task_embedding_dim must be >= 1");
  require(metabolism.food_decay >= 0 && metabolism.water_decay >= 0, "decay rates must be >= 0");
  require(metabolism.starvation_damage >= 0, "starvation_damage must be >= 0");
  require(std::isfinite(combat.advantage_mult) && std::isfinite(combat.disadvantage_mult) &&
              combat.advantage_mult > 1.0 && combat.disadvantage_mult > 0.0 && combat.disadvantage_mult < 1.0,
          "advantage multipliers must satisfy disadvantage < 1 < advantage");
  require(combat.melee_range >= 1 && combat.ranged_range >= 1 && combat.magic_range >= 1,
          "combat ranges must be >= 1");
}

}  // namespace arena
