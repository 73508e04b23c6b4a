#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "arena/action.hpp"
#include "arena/config.hpp"
#include "arena/embedding.hpp"
#include "arena/map.hpp"
#include "arena/observation.hpp"
#include "arena/rng.hpp"
#include "arena/task.hpp"
#include "arena/types.hpp"

namespace arena {

/// What an agent stands on and next to, for metabolism.
struct TileContext {
  Tile* standing = nullptr;
  bool adjacent_water = false;
};

struct MetabolismOutcome {
  bool drank = false;
  bool ate = false;
  /// A Ration was harvested into the inventory.
  bool harvested_ration = false;
  /// Health rose this tick from being fed and watered.
  bool recovered = false;
};

/// One tick of food/water bookkeeping for a living agent.
///
/// Water refills when next to Water, food when standing on a Forest that
/// still has resource units (which also harvests a Ration). Otherwise the
/// meter decays. At food == 0 or water == 0 health drops by the starvation
/// damage, halved (floor) under resilience. Health regenerates while both
/// meters are at or above the regen threshold. Events are appended to
/// `events`; all meters stay within [0, 100].
MetabolismOutcome apply_metabolism(AgentState& agent, TileContext ctx, const EnvConfig& config, Tick tick,
                                   std::vector<GameEvent>& events);

/// Adds xp to a skill, emitting one LevelUp per level gained.
void add_xp(AgentState& agent, Skill skill, std::int64_t amount, Tick tick, std::vector<GameEvent>& events);

/// Stacks into an existing slot when possible, otherwise takes a free slot.
/// Returns false when the inventory is full.
bool add_item(std::vector<Item>& inventory, const Item& item, std::int32_t capacity);

/// Entity visible to an observer, as addressed by Attack/Give target slots.
struct EntityRef {
  bool is_npc = false;
  std::int32_t index = 0;
  std::int32_t distance = 0;
};

struct StepResult {
  std::vector<Observation> observations;
  std::vector<GameEvent> events;
  std::vector<AgentId> deaths;
  bool done = false;
};

struct Diagnostics {
  /// Actions replaced by Noop, indexed by Action variant index.
  std::array<std::int64_t, std::variant_size_v<Action>> invalid_actions{};
  std::int64_t items_created = 0;
  std::int64_t items_destroyed = 0;

  std::int64_t total_invalid() const noexcept {
    std::int64_t s = 0;
    for (auto v : invalid_actions) s += v;
    return s;
  }
};

/// Full simulation state and the tick function.
///
/// A tick runs these phases in order: action validation, movement, combat,
/// items and market, metabolism, NPC AI, death resolution, event emission,
/// task-progress update. Per-agent work inside each phase runs in ascending
/// agent id, which is also how simultaneous move conflicts are broken.
/// Illegal actions never throw; they become Noop and are tallied in
/// diagnostics().
class World {
 public:
  struct ResetResult;

  /// Throws ConfigError for an invalid config, a map whose size differs
  /// from config.map_size, an assignment count different from num_agents,
  /// or fewer Spawn tiles than agents.
  ///
  /// `group_ids[i]`, when given, is agent i's group; otherwise all agents
  /// share group 0.
  static ResetResult reset(const EnvConfig& config, MapGrid map, std::vector<TaskAssignment> assignments,
                           std::uint64_t seed, std::span<const std::int32_t> group_ids = {});

  /// Advances one tick. `actions[i]` is agent i's action; missing entries
  /// and entries for dead agents are ignored. Throws std::logic_error when
  /// the episode is already done.
  StepResult step(std::span<const Action> actions);

  /// Observation for one agent; dead agents get a terminal observation with
  /// every mask empty.
  Observation observe(AgentId id, std::span<const float> task_embedding) const;
  Observation observe(AgentId id) const;
  std::vector<Observation> observe_all() const;

  /// Entities in the observer's view, sorted by (distance, entity key) where
  /// agents key by id and NPCs by num_agents + id. Truncated to the entity
  /// capacity.
  std::vector<EntityRef> visible_entities(AgentId observer) const;

  /// Listings visible this tick: listed before the current tick, cheapest
  /// first, ties by listing id, at most market_top_k.
  std::vector<const MarketListing*> market_snapshot() const;

  /// Escrows one unit of an unequipped inventory item. Returns the listing id
  /// or nullopt (empty slot, equipped item, price < 1, dead agent).
  std::optional<std::int64_t> market_list(AgentId seller, std::int32_t inventory_slot, std::int64_t price);

  /// Buys the listing at `market_slot` of market_snapshot(). Returns the item
  /// or nullopt (bad slot, own listing, insufficient gold, full inventory).
  std::optional<Item> market_buy(AgentId buyer, std::int32_t market_slot);

  const EnvConfig& config() const noexcept { return config_; }
  const MapGrid& map() const noexcept { return map_; }
  MapGrid& mutable_map() noexcept { return map_; }
  Tick tick() const noexcept { return tick_; }
  bool done() const noexcept { return done_; }
  std::uint64_t seed() const noexcept { return seed_; }

  const std::vector<AgentState>& agents() const noexcept { return agents_; }
  const AgentState& agent(AgentId id) const { return agents_.at(static_cast<std::size_t>(id)); }
  /// Mutable access for scenario setup in tests and tools. Position changes
  /// must go through place_agent to keep occupancy consistent.
  AgentState& mutable_agent(AgentId id) { return agents_.at(static_cast<std::size_t>(id)); }
  void place_agent(AgentId id, Position p);

  const std::vector<NpcState>& npcs() const noexcept { return npcs_; }
  NpcState& mutable_npc(std::int32_t i) { return npcs_.at(static_cast<std::size_t>(i)); }
  void place_npc(std::int32_t i, Position p);

  const std::vector<MarketListing>& listings() const noexcept { return listings_; }
  std::int64_t next_listing_id() const noexcept { return next_listing_id_; }
  const std::vector<GameEvent>& event_log() const noexcept { return event_log_; }
  const std::vector<TaskAssignment>& assignments() const noexcept { return assignments_; }
  const std::vector<AgentEpisodeState>& episode_states() const noexcept { return episode_states_; }
  const std::vector<float>& task_embedding(AgentId id) const { return embeddings_.at(static_cast<std::size_t>(id)); }
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }
  /// True when the agent's health rose during the last tick's metabolism.
  bool recovered_last_tick(AgentId id) const { return recovered_.at(static_cast<std::size_t>(id)) != 0; }

  std::int32_t living_agents() const noexcept;
  std::int64_t total_gold() const noexcept;
  /// Item units held in inventories plus units escrowed in listings.
  std::int64_t total_item_units() const noexcept;

  /// Equipped armor tier times the armor coefficient.
  std::int32_t defense(const AgentState& a) const noexcept;
  std::int32_t best_combat_level(const AgentState& a) const noexcept;

 private:
  World() = default;

  std::int32_t& occupant(Position p) { return occupancy_[occ_index(p)]; }
  std::int32_t occupant(Position p) const { return occupancy_[occ_index(p)]; }
  std::size_t occ_index(Position p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(map_.size()) + static_cast<std::size_t>(p.col);
  }
  bool walkable(Position p) const;
  bool active(const AgentState& a) const noexcept { return a.alive && a.health > 0; }

  void spawn_npc(std::int32_t i, bool initial);
  Position random_free_tile();

  void invalid(const Action& a) { ++diagnostics_.invalid_actions[a.index()]; }

  void phase_movement(std::span<const Action> actions);
  void phase_combat(std::span<const Action> actions, const std::vector<std::vector<EntityRef>>& views);
  void phase_items(std::span<const Action> actions, const std::vector<std::vector<EntityRef>>& views,
                   const std::vector<std::int64_t>& market_view);
  void phase_metabolism();
  void phase_npcs();
  std::vector<AgentId> phase_deaths();

  bool use_item(AgentState& a, std::int32_t slot);
  std::optional<Item> buy_listing(AgentState& buyer, std::int64_t listing_id);
  Observation observe_with(AgentId id, std::span<const float> task_embedding,
                           const std::vector<const MarketListing*>& market) const;
  void npc_act(NpcState& npc);
  void npc_step_toward(NpcState& npc, Position target);
  void npc_attack(NpcState& npc, AgentState& target);
  void harvest_ore(AgentState& a);
  void delist_all(AgentState& seller);

  EnvConfig config_;
  MapGrid map_;
  std::uint64_t seed_ = 0;
  Rng rng_;

  Tick tick_ = 0;
  bool done_ = false;
  std::vector<AgentState> agents_;
  std::vector<NpcState> npcs_;
  std::vector<MarketListing> listings_;
  std::int64_t next_listing_id_ = 1;
  std::vector<std::int32_t> occupancy_;
  std::vector<GameEvent> event_log_;
  std::vector<GameEvent> pending_;
  std::vector<TaskAssignment> assignments_;
  std::vector<AgentEpisodeState> episode_states_;
  std::vector<std::vector<float>> embeddings_;
  Diagnostics diagnostics_;
  std::vector<std::uint8_t> recovered_;
};

struct World::ResetResult {
  World world;
  std::vector<Observation> observations;
};

}  // namespace arena
