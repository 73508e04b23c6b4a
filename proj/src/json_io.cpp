#include "arena/json_io.hpp"

#include <string>

namespace arena {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

template <typename T>
void read(const json& j, const std::string& key, T& out) {
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
      out = v.get<bool>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
      out = v.get<T>();
    } else {
      if (!v.is_number_integer()) throw ConfigError("");
      out = v.get<T>();
    }
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

// Applies `fields` to every key of `j`, rejecting keys it does not know.
template <typename F>
void for_each_key(const json& j, const std::string& section, F&& apply) {
  require_object(j, section);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!apply(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + section);
  }
}

json to_json(const MetabolismRates& m) {
  return {{"food_decay", m.food_decay},       {"water_decay", m.water_decay},
          {"food_restore", m.food_restore},   {"water_restore", m.water_restore},
          {"starvation_damage", m.starvation_damage}, {"health_regen", m.health_regen},
          {"regen_threshold", m.regen_threshold},     {"enabled", m.enabled}};
}

json to_json(const CombatConstants& k) {
  return {{"base_damage", k.base_damage},       {"level_coef", k.level_coef},
          {"tier_coef", k.tier_coef},           {"advantage_mult", k.advantage_mult},
          {"disadvantage_mult", k.disadvantage_mult}, {"armor_coef", k.armor_coef},
          {"melee_range", k.melee_range},       {"ranged_range", k.ranged_range},
          {"magic_range", k.magic_range}};
}

MetabolismRates metabolism_from_json(const json& j, MetabolismRates m) {
  for_each_key(j, "metabolism", [&](const std::string& k) {
    if (k == "food_decay") read(j, k, m.food_decay);
    else if (k == "water_decay") read(j, k, m.water_decay);
    else if (k == "food_restore") read(j, k, m.food_restore);
    else if (k == "water_restore") read(j, k, m.water_restore);
    else if (k == "starvation_damage") read(j, k, m.starvation_damage);
    else if (k == "health_regen") read(j, k, m.health_regen);
    else if (k == "regen_threshold") read(j, k, m.regen_threshold);
    else if (k == "enabled") read(j, k, m.enabled);
    else return false;
    return true;
  });
  return m;
}

CombatConstants combat_from_json(const json& j, CombatConstants c) {
  for_each_key(j, "combat", [&](const std::string& k) {
    if (k == "base_damage") read(j, k, c.base_damage);
    else if (k == "level_coef") read(j, k, c.level_coef);
    else if (k == "tier_coef") read(j, k, c.tier_coef);
    else if (k == "advantage_mult") read(j, k, c.advantage_mult);
    else if (k == "disadvantage_mult") read(j, k, c.disadvantage_mult);
    else if (k == "armor_coef") read(j, k, c.armor_coef);
    else if (k == "melee_range") read(j, k, c.melee_range);
    else if (k == "ranged_range") read(j, k, c.ranged_range);
    else if (k == "magic_range") read(j, k, c.magic_range);
    else return false;
    return true;
  });
  return c;
}

}  // namespace

nlohmann::json to_json(const EnvConfig& c) {
  return {{"num_agents", c.num_agents},
          {"map_size", c.map_size},
          {"max_ticks", c.max_ticks},
          {"num_npcs", c.num_npcs},
          {"early_stop_agent_num", c.early_stop_agent_num},
          {"resilience_enabled", c.resilience_enabled},
          {"spawn_immunity_ticks", c.spawn_immunity_ticks},
          {"immunity_mode", c.immunity_mode == ImmunityMode::Fixed ? "fixed" : "randomized"},
          {"disable_giving", c.disable_giving},
          {"metabolism", to_json(c.metabolism)},
          {"combat", to_json(c.combat)},
          {"starting_gold", c.starting_gold},
          {"inventory_capacity", c.inventory_capacity},
          {"view_radius", c.view_radius},
          {"entity_capacity", c.entity_capacity},
          {"market_top_k", c.market_top_k},
          {"resource_respawn_interval", c.resource_respawn_interval},
          {"forest_units", c.forest_units},
          {"ore_units", c.ore_units},
          {"poultice_heal", c.poultice_heal},
          {"ration_food", c.ration_food},
          {"npc_max_level", c.npc_max_level},
          {"hostile_chase_radius", c.hostile_chase_radius},
          {"task_embedding_dim", c.task_embedding_dim},
          {"seed", c.seed}};
}

nlohmann::json to_json(const RewardConfig& c) {
  return {{"task_progress_coef", c.task_progress_coef},
          {"completion_bonus", c.completion_bonus},
          {"hp_delta_coef", c.hp_delta_coef},
          {"health_recovery_bonus", c.health_recovery_bonus},
          {"event_bonus_per_new_event_type", c.event_bonus_per_new_event_type},
          {"gold_delta_coef", c.gold_delta_coef},
          {"defense_coef", c.defense_coef},
          {"attack_coef", c.attack_coef},
          {"experience_coef", c.experience_coef},
          {"death_penalty", c.death_penalty},
          {"clip", c.clip}};
}

EnvConfig env_config_from_json(const nlohmann::json& j, EnvConfig c) {
  for_each_key(j, "env", [&](const std::string& k) {
    if (k == "num_agents") read(j, k, c.num_agents);
    else if (k == "map_size") read(j, k, c.map_size);
    else if (k == "max_ticks") read(j, k, c.max_ticks);
    else if (k == "num_npcs") read(j, k, c.num_npcs);
    else if (k == "early_stop_agent_num") read(j, k, c.early_stop_agent_num);
    else if (k == "resilience_enabled") read(j, k, c.resilience_enabled);
    else if (k == "spawn_immunity_ticks") read(j, k, c.spawn_immunity_ticks);
    else if (k == "immunity_mode") {
      const json& v = j.at(k);
      if (v == "fixed") c.immunity_mode = ImmunityMode::Fixed;
      else if (v == "randomized") c.immunity_mode = ImmunityMode::Randomized;
      else throw ConfigError("immunity_mode must be \"fixed\" or \"randomized\"");
    } else if (k == "disable_giving") read(j, k, c.disable_giving);
    else if (k == "metabolism") c.metabolism = metabolism_from_json(j.at(k), c.metabolism);
    else if (k == "combat") c.combat = combat_from_json(j.at(k), c.combat);
    else if (k == "starting_gold") read(j, k, c.starting_gold);
    else if (k == "inventory_capacity") read(j, k, c.inventory_capacity);
    else if (k == "view_radius") read(j, k, c.view_radius);
    else if (k == "entity_capacity") read(j, k, c.entity_capacity);
    else if (k == "market_top_k") read(j, k, c.market_top_k);
    else if (k == "resource_respawn_interval") read(j, k, c.resource_respawn_interval);
    else if (k == "forest_units") read(j, k, c.forest_units);
    else if (k == "ore_units") read(j, k, c.ore_units);
    else if (k == "poultice_heal") read(j, k, c.poultice_heal);
    else if (k == "ration_food") read(j, k, c.ration_food);
    else if (k == "npc_max_level") read(j, k, c.npc_max_level);
    else if (k == "hostile_chase_radius") read(j, k, c.hostile_chase_radius);
    else if (k == "task_embedding_dim") read(j, k, c.task_embedding_dim);
    else if (k == "seed") read(j, k, c.seed);
    else return false;
    return true;
  });
  c.validate();
  return c;
}

RewardConfig reward_config_from_json(const nlohmann::json& j) {
  require_object(j, "rewards");
  RewardConfig c;
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) throw ConfigError("rewards.preset must be a string");
    c = reward_preset(j.at("preset").get<std::string>());
  }
  for_each_key(j, "rewards", [&](const std::string& k) {
    if (k == "preset") return true;
    if (k == "task_progress_coef") read(j, k, c.task_progress_coef);
    else if (k == "completion_bonus") read(j, k, c.completion_bonus);
    else if (k == "hp_delta_coef") read(j, k, c.hp_delta_coef);
    else if (k == "health_recovery_bonus") read(j, k, c.health_recovery_bonus);
    else if (k == "event_bonus_per_new_event_type") read(j, k, c.event_bonus_per_new_event_type);
    else if (k == "gold_delta_coef") read(j, k, c.gold_delta_coef);
    else if (k == "defense_coef") read(j, k, c.defense_coef);
    else if (k == "attack_coef") read(j, k, c.attack_coef);
    else if (k == "experience_coef") read(j, k, c.experience_coef);
    else if (k == "death_penalty") read(j, k, c.death_penalty);
    else if (k == "clip") read(j, k, c.clip);
    else return false;
    return true;
  });
  c.validate();
  return c;
}

}  // namespace arena
