#pragma once

#include <vector>

#include "arena/map.hpp"
#include "arena/task.hpp"
#include "arena/world.hpp"

namespace arena::testing {

inline EnvConfig small_env(std::int32_t agents = 2) {
  EnvConfig c;
  c.num_agents = agents;
  c.map_size = 16;
  c.num_npcs = 0;
  c.max_ticks = 200;
  c.spawn_immunity_ticks = 0;
  c.entity_capacity = 8;
  c.market_top_k = 4;
  c.task_embedding_dim = 8;
  return c;
}

inline std::vector<TaskAssignment> tick_tasks(std::int32_t n, std::int64_t target = 100) {
  std::vector<TaskAssignment> out(static_cast<std::size_t>(n));
  for (auto& a : out) a.task = TaskSpec::make("survive", make_predicate(PredicateKind::TickGE, {target}));
  return out;
}

/// Generated map with the interior flattened to Grass, keeping the Water
/// border and the Spawn ring.
inline MapGrid flat_map(std::int32_t size = 16, std::uint64_t seed = 7) {
  MapGrid m = generate_map(seed, size);
  for (std::int32_t r = 1; r < size - 1; ++r) {
    for (std::int32_t c = 1; c < size - 1; ++c) {
      Tile& t = m.at({r, c});
      if (t.terrain != TerrainKind::Spawn) t = Tile{TerrainKind::Grass, 0};
    }
  }
  return m;
}

inline World flat_world(const EnvConfig& c, std::uint64_t seed = 1) {
  return World::reset(c, flat_map(c.map_size), tick_tasks(c.num_agents), seed).world;
}

/// Places two agents side by side in the middle of a flat world.
inline World duel_world(EnvConfig c = small_env(2)) {
  World w = flat_world(c);
  w.place_agent(0, {8, 7});
  w.place_agent(1, {8, 8});
  return w;
}

/// Entity slot of `target` in the observer's view.
inline std::int32_t slot_of(const World& w, AgentId observer, AgentId target) {
  const auto view = w.visible_entities(observer);
  for (std::size_t i = 0; i < view.size(); ++i) {
    if (!view[i].is_npc && view[i].index == target) return static_cast<std::int32_t>(i);
  }
  return -1;
}

inline std::int64_t count_events(const std::vector<GameEvent>& events, EventKind k, AgentId id = -1) {
  std::int64_t n = 0;
  for (const auto& e : events) {
    if (e.kind == k && (id < 0 || e.agent_id == id)) ++n;
  }
  return n;
}

}  // namespace arena::testing
