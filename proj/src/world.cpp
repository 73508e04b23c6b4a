#include "arena/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "arena/combat.hpp"

namespace arena {
namespace {

constexpr std::uint64_t kNpcSalt = 0x4e5043;
constexpr std::uint64_t kOreSalt = 0x4f5245;
constexpr std::uint64_t kLootSalt = 0x4c4f4f54;
constexpr std::int32_t kAmmoStack = 3;

std::int32_t npc_max_health(std::int32_t level) { return std::min(100, 10 + 15 * level); }

float unit(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

float style_code(const Item& it) {
  return it.style ? static_cast<float>(static_cast<int>(*it.style) + 1) / 3.0f : 0.0f;
}

Direction random_direction(Rng& rng) { return static_cast<Direction>(rng.below(4)); }

// Tier of the equipped item of `kind`, 0 if none.
std::int32_t equipped_tier(const AgentState& a, ItemKind kind, std::optional<CombatStyle> style = {}) {
  for (const Item& it : a.inventory) {
    if (it.kind == kind && it.equipped && (!style || it.style == style)) return it.tier;
  }
  return 0;
}

}  // namespace

bool add_item(std::vector<Item>& inventory, const Item& item, std::int32_t capacity) {
  for (Item& it : inventory) {
    if (it.stacks_with(item)) {
      it.quantity += item.quantity;
      return true;
    }
  }
  if (static_cast<std::int32_t>(inventory.size()) >= capacity) return false;
  inventory.push_back(item);
  return true;
}

void add_xp(AgentState& agent, Skill skill, std::int64_t amount, Tick tick, std::vector<GameEvent>& events) {
  if (amount <= 0) return;
  const int before = agent.skills.level(skill);
  agent.skills.xp[static_cast<int>(skill)] += amount;
  const int after = agent.skills.level(skill);
  for (int l = before; l < after; ++l) {
    events.push_back({tick, agent.id, EventKind::LevelUp, static_cast<std::int64_t>(skill)});
  }
}

MetabolismOutcome apply_metabolism(AgentState& agent, TileContext ctx, const EnvConfig& config, Tick tick,
                                   std::vector<GameEvent>& events) {
  MetabolismOutcome out;
  const MetabolismRates& m = config.metabolism;

  if (ctx.adjacent_water) {
    agent.water = std::min(100, agent.water + m.water_restore);
    events.push_back({tick, agent.id, EventKind::DrinkWater, 0});
    out.drank = true;
  } else {
    agent.water = std::max(0, agent.water - m.water_decay);
  }

  if (ctx.standing && ctx.standing->terrain == TerrainKind::Forest && ctx.standing->resource_units > 0) {
    --ctx.standing->resource_units;
    agent.food = std::min(100, agent.food + m.food_restore);
    events.push_back({tick, agent.id, EventKind::EatFood, 0});
    out.ate = true;
    Item ration{ItemKind::Ration, std::nullopt, 1, 1, false};
    if (add_item(agent.inventory, ration, config.inventory_capacity)) {
      events.push_back({tick, agent.id, EventKind::HarvestItem, static_cast<std::int64_t>(ItemKind::Ration)});
      out.harvested_ration = true;
    }
    add_xp(agent, Skill::Forage, 1, tick, events);
  } else {
    agent.food = std::max(0, agent.food - m.food_decay);
  }

  if (agent.food == 0 || agent.water == 0) {
    std::int32_t dmg = m.starvation_damage;
    if (config.resilience_enabled) dmg /= 2;
    agent.health = std::max(0, agent.health - dmg);
  } else if (agent.food >= m.regen_threshold && agent.water >= m.regen_threshold && agent.health < 100) {
    agent.health = std::min(100, agent.health + m.health_regen);
    out.recovered = true;
  }
  return out;
}

World::ResetResult World::reset(const EnvConfig& config, MapGrid map, std::vector<TaskAssignment> assignments,
                                std::uint64_t seed, std::span<const std::int32_t> group_ids) {
  config.validate();
  if (map.size() != config.map_size) {
    throw ConfigError("map size " + std::to_string(map.size()) + " differs from config map_size " +
                      std::to_string(config.map_size));
  }
  if (static_cast<std::int32_t>(assignments.size()) != config.num_agents) {
    throw ConfigError("got " + std::to_string(assignments.size()) + " task assignments for " +
                      std::to_string(config.num_agents) + " agents");
  }
  if (!group_ids.empty() && static_cast<std::int32_t>(group_ids.size()) != config.num_agents) {
    throw ConfigError("group id count differs from num_agents");
  }
  const auto& spawns = map.spawn_tiles();
  if (static_cast<std::int32_t>(spawns.size()) < config.num_agents) {
    throw ConfigError("map has " + std::to_string(spawns.size()) + " spawn tiles for " +
                      std::to_string(config.num_agents) + " agents");
  }

  World w;
  w.config_ = config;
  w.map_ = std::move(map);
  const auto& spawn_ring = w.map_.spawn_tiles();
  w.seed_ = seed;
  w.rng_.seed(hash_combine(seed, w.map_.seed()));
  for (Tile& t : w.map_.tiles()) t.resource_units = MapGrid::capacity(t.terrain, config.forest_units, config.ore_units);
  w.occupancy_.assign(static_cast<std::size_t>(config.map_size) * static_cast<std::size_t>(config.map_size), -1);

  const auto n = static_cast<std::uint64_t>(config.num_agents);
  const auto s = static_cast<std::uint64_t>(spawn_ring.size());
  const std::uint64_t offset = w.rng_.below(s);
  w.agents_.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    AgentState& a = w.agents_[i];
    a.id = static_cast<AgentId>(i);
    a.group_id = group_ids.empty() ? 0 : group_ids[i];
    a.pos = spawn_ring[(offset + i * s / n) % s];
    a.gold = config.starting_gold;
    a.style = static_cast<CombatStyle>(i % kNumCombatStyles);
    a.spawn_immunity_remaining =
        config.immunity_mode == ImmunityMode::Randomized
            ? static_cast<std::int32_t>(w.rng_.range(0, config.spawn_immunity_ticks))
            : config.spawn_immunity_ticks;
    w.occupant(a.pos) = a.id;
  }

  w.assignments_ = std::move(assignments);
  w.episode_states_.assign(n, AgentEpisodeState(config.map_size));
  w.embeddings_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    TaskAssignment& t = w.assignments_[i];
    t.agent_id = static_cast<AgentId>(i);
    t.progress = 0.0;
    t.completed = false;
    const EmbeddingVector e = embed_task(t.task.source_text, static_cast<std::size_t>(config.task_embedding_dim));
    w.embeddings_.emplace_back(e.begin(), e.end());
  }
  w.recovered_.assign(n, 0);

  w.npcs_.resize(static_cast<std::size_t>(config.num_npcs));
  for (std::int32_t i = 0; i < config.num_npcs; ++i) w.spawn_npc(i, true);

  ResetResult r{std::move(w), {}};
  r.observations = r.world.observe_all();
  return r;
}

void World::spawn_npc(std::int32_t i, bool initial) {
  NpcState& npc = npcs_[static_cast<std::size_t>(i)];
  const std::uint64_t h = hash_combine(seed_, kNpcSalt, static_cast<std::uint64_t>(i));
  if (initial) {
    const std::uint64_t d = h % 10;
    npc.id = i;
    npc.disposition = d < 5 ? Disposition::Passive : (d < 8 ? Disposition::Neutral : Disposition::Hostile);
    npc.style = static_cast<CombatStyle>((h >> 8) % kNumCombatStyles);
  }
  npc.last_attacker = -1;
  const Position p = random_free_tile();
  if (p.row < 0) {
    npc.alive = false;
    return;
  }
  // Level rises from 1 at the border to npc_max_level at the centre.
  const std::int32_t half = map_.size() / 2;
  const std::int32_t depth = half - chebyshev(p, {half, half});
  npc.level = 1 + (config_.npc_max_level - 1) * std::max(0, depth) / std::max(1, half);
  npc.health = npc_max_health(npc.level);
  npc.alive = true;
  npc.pos = p;
  occupant(p) = config_.num_agents + i;
}

Position World::random_free_tile() {
  const auto size = static_cast<std::uint64_t>(map_.size());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const Position p{static_cast<std::int32_t>(rng_.below(size)), static_cast<std::int32_t>(rng_.below(size))};
    if (walkable(p) && map_.at(p).terrain != TerrainKind::Spawn) return p;
  }
  return {-1, -1};
}

bool World::walkable(Position p) const {
  return map_.in_bounds(p) && is_passable(map_.at(p).terrain) && occupant(p) < 0;
}

void World::place_agent(AgentId id, Position p) {
  AgentState& a = agents_.at(static_cast<std::size_t>(id));
  if (!map_.in_bounds(p)) throw ConfigError("place_agent: position out of bounds");
  if (occupant(p) >= 0 && occupant(p) != id) throw ConfigError("place_agent: tile occupied");
  if (a.alive) occupant(a.pos) = -1;
  a.pos = p;
  if (a.alive) occupant(p) = id;
}

void World::place_npc(std::int32_t i, Position p) {
  NpcState& npc = npcs_.at(static_cast<std::size_t>(i));
  if (!map_.in_bounds(p)) throw ConfigError("place_npc: position out of bounds");
  const std::int32_t key = config_.num_agents + i;
  if (occupant(p) >= 0 && occupant(p) != key) throw ConfigError("place_npc: tile occupied");
  if (npc.alive) occupant(npc.pos) = -1;
  npc.pos = p;
  if (npc.alive) occupant(p) = key;
}

StepResult World::step(std::span<const Action> actions) {
  if (done_) throw std::logic_error("step called on a finished episode");
  const std::size_t n = agents_.size();
  pending_.clear();
  std::fill(recovered_.begin(), recovered_.end(), 0);

  // validation: actions past the agent count are ignored, gives are stripped
  std::vector<Action> acts(n, act::Noop{});
  for (std::size_t i = 0; i < n && i < actions.size(); ++i) {
    if (!active(agents_[i])) continue;
    if (config_.disable_giving && is_give(actions[i])) {
      invalid(actions[i]);
      continue;
    }
    acts[i] = actions[i];
  }

  std::vector<std::vector<EntityRef>> views(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::holds_alternative<act::Attack>(acts[i]) || is_give(acts[i])) {
      views[i] = visible_entities(static_cast<AgentId>(i));
    }
  }
  std::vector<std::int64_t> market_view;
  for (const MarketListing* l : market_snapshot()) market_view.push_back(l->listing_id);

  phase_movement(acts);
  phase_combat(acts, views);
  phase_items(acts, views, market_view);
  phase_metabolism();
  phase_npcs();
  StepResult result;
  result.deaths = phase_deaths();

  const Tick next = tick_ + 1;
  if (config_.resource_respawn_interval > 0 && next % config_.resource_respawn_interval == 0) {
    for (Tile& t : map_.tiles()) {
      t.resource_units = MapGrid::capacity(t.terrain, config_.forest_units, config_.ore_units);
    }
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(npcs_.size()); ++i) {
      if (!npcs_[static_cast<std::size_t>(i)].alive) spawn_npc(i, false);
    }
  }

  for (AgentState& a : agents_) {
    if (a.alive && a.spawn_immunity_remaining > 0) --a.spawn_immunity_remaining;
  }
  tick_ = next;
  for (AgentState& a : agents_) {
    if (a.alive) a.lifespan = tick_;
  }

  event_log_.insert(event_log_.end(), pending_.begin(), pending_.end());

  std::vector<std::uint8_t> touched(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (agents_[i].alive) touched[i] = 1;
  }
  for (AgentId d : result.deaths) touched[static_cast<std::size_t>(d)] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (touched[i]) episode_states_[i].observe(agents_[i]);
  }
  for (const GameEvent& e : pending_) episode_states_[static_cast<std::size_t>(e.agent_id)].record_event(e);
  for (std::size_t i = 0; i < n; ++i) {
    if (touched[i]) assignments_[i].update(episode_states_[i]);
  }

  done_ = tick_ >= config_.max_ticks || living_agents() <= config_.early_stop_agent_num;
  result.events = pending_;
  result.done = done_;
  result.observations = observe_all();
  return result;
}

void World::phase_movement(std::span<const Action> actions) {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto* mv = std::get_if<act::Move>(&actions[i]);
    if (!mv) continue;
    AgentState& a = agents_[i];
    const Position to = step_toward(a.pos, mv->direction);
    if (!walkable(to)) {
      invalid(actions[i]);
      continue;
    }
    occupant(a.pos) = -1;
    a.pos = to;
    occupant(to) = a.id;
  }
}

void World::phase_combat(std::span<const Action> actions, const std::vector<std::vector<EntityRef>>& views) {
  struct Hit {
    AgentId attacker;
    EntityRef target;
    std::int32_t damage;
    CombatStyle style;
  };
  std::vector<CombatStyle> styles(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) styles[i] = agents_[i].style;

  std::vector<Hit> hits;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto* atk = std::get_if<act::Attack>(&actions[i]);
    if (!atk) continue;
    AgentState& a = agents_[i];
    const auto& view = views[i];
    if (atk->target_slot < 0 || atk->target_slot >= static_cast<std::int32_t>(view.size())) {
      invalid(actions[i]);
      continue;
    }
    const EntityRef ref = view[static_cast<std::size_t>(atk->target_slot)];
    Combatant def;
    Position target_pos;
    if (ref.is_npc) {
      const NpcState& npc = npcs_[static_cast<std::size_t>(ref.index)];
      if (!npc.alive) {
        invalid(actions[i]);
        continue;
      }
      target_pos = npc.pos;
      def = {npc.level, 0, npc.style, 0, 0};
    } else {
      const AgentState& d = agents_[static_cast<std::size_t>(ref.index)];
      if (!active(d)) {
        invalid(actions[i]);
        continue;
      }
      target_pos = d.pos;
      def = {best_combat_level(d), 0, styles[static_cast<std::size_t>(ref.index)],
             equipped_tier(d, ItemKind::Armor), d.spawn_immunity_remaining};
    }
    if (chebyshev(a.pos, target_pos) > config_.combat.range(atk->style)) {
      invalid(actions[i]);
      continue;
    }

    Combatant off;
    off.level = a.skills.level(skill_for(atk->style));
    off.tier = equipped_tier(a, ItemKind::Weapon, atk->style);
    if (atk->style != CombatStyle::Melee) {
      for (std::size_t s = 0; s < a.inventory.size(); ++s) {
        Item& it = a.inventory[s];
        if (it.kind != ItemKind::Ammo || it.style != atk->style) continue;
        off.tier = std::max(off.tier, it.tier);
        ++diagnostics_.items_destroyed;
        if (--it.quantity == 0) a.inventory.erase(a.inventory.begin() + static_cast<std::ptrdiff_t>(s));
        break;
      }
    }
    a.style = atk->style;
    hits.push_back({a.id, ref, resolve_combat(config_.combat, off, def, atk->style), atk->style});
  }

  for (const Hit& h : hits) {
    AgentState& a = agents_[static_cast<std::size_t>(h.attacker)];
    std::int32_t* hp;
    if (h.target.is_npc) {
      NpcState& npc = npcs_[static_cast<std::size_t>(h.target.index)];
      hp = &npc.health;
      if (h.damage > 0) npc.last_attacker = a.id;
    } else {
      hp = &agents_[static_cast<std::size_t>(h.target.index)].health;
    }
    if (h.damage <= 0 || *hp == 0) continue;
    const std::int32_t before = *hp;
    *hp = std::max(0, *hp - h.damage);
    pending_.push_back({tick_, a.id, EventKind::ScoreHit, h.damage});
    a.damage_dealt += h.damage;
    add_xp(a, skill_for(h.style), h.damage, tick_, pending_);
    if (before > 0 && *hp == 0) {
      ++a.kills;
      pending_.push_back({tick_, a.id, EventKind::PlayerKill, h.target.is_npc ? 1 : 0});
      if (h.target.is_npc) {
        const NpcState& npc = npcs_[static_cast<std::size_t>(h.target.index)];
        const std::uint64_t lh = hash_combine(seed_, kLootSalt, static_cast<std::uint64_t>(tick_),
                                              static_cast<std::uint64_t>(npc.id));
        Item loot;
        loot.kind = static_cast<ItemKind>(lh % 3);
        loot.tier = npc.level;
        if (has_style(loot.kind)) loot.style = npc.style;
        loot.quantity = loot.kind == ItemKind::Ammo ? kAmmoStack : 1;
        if (add_item(a.inventory, loot, config_.inventory_capacity)) diagnostics_.items_created += loot.quantity;
      }
    }
  }
}

void World::phase_items(std::span<const Action> actions, const std::vector<std::vector<EntityRef>>& views,
                        const std::vector<std::int64_t>& market_view) {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    AgentState& a = agents_[i];
    if (!active(a)) continue;
    const Action& action = actions[i];
    bool ok = true;
    if (const auto* u = std::get_if<act::Use>(&action)) {
      ok = use_item(a, u->inventory_slot);
    } else if (const auto* s = std::get_if<act::Sell>(&action)) {
      ok = market_list(a.id, s->inventory_slot, s->price).has_value();
    } else if (const auto* b = std::get_if<act::Buy>(&action)) {
      ok = b->market_slot >= 0 && b->market_slot < static_cast<std::int32_t>(market_view.size()) &&
           buy_listing(a, market_view[static_cast<std::size_t>(b->market_slot)]).has_value();
    } else if (const auto* g = std::get_if<act::GiveItem>(&action)) {
      ok = false;
      const auto& view = views[i];
      if (g->target_slot >= 0 && g->target_slot < static_cast<std::int32_t>(view.size()) && g->inventory_slot >= 0 &&
          g->inventory_slot < static_cast<std::int32_t>(a.inventory.size())) {
        const EntityRef ref = view[static_cast<std::size_t>(g->target_slot)];
        const auto slot = static_cast<std::size_t>(g->inventory_slot);
        if (!ref.is_npc) {
          AgentState& t = agents_[static_cast<std::size_t>(ref.index)];
          if (active(t) && chebyshev(a.pos, t.pos) <= 1 && !a.inventory[slot].equipped) {
            Item unit_item = a.inventory[slot];
            unit_item.quantity = 1;
            if (add_item(t.inventory, unit_item, config_.inventory_capacity)) {
              if (--a.inventory[slot].quantity == 0) {
                a.inventory.erase(a.inventory.begin() + static_cast<std::ptrdiff_t>(slot));
              }
              ok = true;
            }
          }
        }
      }
    } else if (const auto* g = std::get_if<act::GiveGold>(&action)) {
      ok = false;
      const auto& view = views[i];
      if (g->target_slot >= 0 && g->target_slot < static_cast<std::int32_t>(view.size()) && g->amount >= 1 &&
          g->amount <= a.gold) {
        const EntityRef ref = view[static_cast<std::size_t>(g->target_slot)];
        if (!ref.is_npc) {
          AgentState& t = agents_[static_cast<std::size_t>(ref.index)];
          if (active(t) && chebyshev(a.pos, t.pos) <= 1) {
            a.gold -= g->amount;
            t.gold += g->amount;
            ok = true;
          }
        }
      }
    }
    if (!ok) invalid(action);
  }
}

bool World::use_item(AgentState& a, std::int32_t slot) {
  if (slot < 0 || slot >= static_cast<std::int32_t>(a.inventory.size())) return false;
  const auto s = static_cast<std::size_t>(slot);
  Item& it = a.inventory[s];
  switch (it.kind) {
    case ItemKind::Armor:
    case ItemKind::Weapon:
      if (it.equipped) {
        it.equipped = false;
        return true;
      }
      for (Item& other : a.inventory) {
        if (other.kind == it.kind) other.equipped = false;
      }
      it.equipped = true;
      pending_.push_back({tick_, a.id, EventKind::EquipItem, static_cast<std::int64_t>(it.kind)});
      return true;
    case ItemKind::Ration:
    case ItemKind::Poultice: {
      const ItemKind kind = it.kind;
      if (kind == ItemKind::Ration) {
        a.food = std::min(100, a.food + config_.ration_food);
      } else {
        a.health = std::min(100, a.health + config_.poultice_heal);
      }
      ++diagnostics_.items_destroyed;
      if (--it.quantity == 0) a.inventory.erase(a.inventory.begin() + slot);
      pending_.push_back({tick_, a.id, EventKind::ConsumeItem, static_cast<std::int64_t>(kind)});
      return true;
    }
    case ItemKind::Ammo:
      return false;
  }
  return false;
}

std::vector<const MarketListing*> World::market_snapshot() const {
  std::vector<const MarketListing*> out;
  for (const MarketListing& l : listings_) {
    if (l.listed_tick < tick_) out.push_back(&l);
  }
  std::sort(out.begin(), out.end(), [](const MarketListing* x, const MarketListing* y) {
    if (x->price != y->price) return x->price < y->price;
    return x->listing_id < y->listing_id;
  });
  if (out.size() > static_cast<std::size_t>(config_.market_top_k)) {
    out.resize(static_cast<std::size_t>(config_.market_top_k));
  }
  return out;
}

std::optional<std::int64_t> World::market_list(AgentId seller, std::int32_t inventory_slot, std::int64_t price) {
  AgentState& a = agents_.at(static_cast<std::size_t>(seller));
  if (!active(a) || price < 1) return std::nullopt;
  if (inventory_slot < 0 || inventory_slot >= static_cast<std::int32_t>(a.inventory.size())) return std::nullopt;
  const auto s = static_cast<std::size_t>(inventory_slot);
  Item& it = a.inventory[s];
  if (it.equipped) return std::nullopt;

  MarketListing l;
  l.listing_id = next_listing_id_++;
  l.seller_id = seller;
  l.item = it;
  l.item.quantity = 1;
  l.price = price;
  l.listed_tick = tick_;
  if (--it.quantity == 0) a.inventory.erase(a.inventory.begin() + inventory_slot);
  pending_.push_back({tick_, seller, EventKind::ListItem, static_cast<std::int64_t>(l.item.kind)});
  listings_.push_back(std::move(l));
  return listings_.back().listing_id;
}

std::optional<Item> World::market_buy(AgentId buyer, std::int32_t market_slot) {
  AgentState& a = agents_.at(static_cast<std::size_t>(buyer));
  const auto snap = market_snapshot();
  if (!active(a) || market_slot < 0 || market_slot >= static_cast<std::int32_t>(snap.size())) return std::nullopt;
  return buy_listing(a, snap[static_cast<std::size_t>(market_slot)]->listing_id);
}

std::optional<Item> World::buy_listing(AgentState& buyer, std::int64_t listing_id) {
  const auto it = std::find_if(listings_.begin(), listings_.end(),
                               [listing_id](const MarketListing& l) { return l.listing_id == listing_id; });
  if (it == listings_.end()) return std::nullopt;
  if (it->seller_id == buyer.id || buyer.gold < it->price) return std::nullopt;
  const Item item = it->item;
  if (!add_item(buyer.inventory, item, config_.inventory_capacity)) return std::nullopt;

  AgentState& seller = agents_[static_cast<std::size_t>(it->seller_id)];
  buyer.gold -= it->price;
  seller.gold += it->price;
  seller.gold_earned += it->price;
  pending_.push_back({tick_, buyer.id, EventKind::BuyItem, static_cast<std::int64_t>(item.kind)});
  pending_.push_back({tick_, seller.id, EventKind::EarnGold, it->price});
  listings_.erase(it);
  return item;
}

void World::phase_metabolism() {
  for (AgentState& a : agents_) {
    if (!active(a)) continue;
    if (config_.metabolism.enabled) {
      TileContext ctx;
      ctx.standing = &map_.at(a.pos);
      for (int dr = -1; dr <= 1 && !ctx.adjacent_water; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const Position p{a.pos.row + dr, a.pos.col + dc};
          if (map_.in_bounds(p) && map_.at(p).terrain == TerrainKind::Water) {
            ctx.adjacent_water = true;
            break;
          }
        }
      }
      const MetabolismOutcome out = apply_metabolism(a, ctx, config_, tick_, pending_);
      if (out.harvested_ration) ++diagnostics_.items_created;
      if (out.recovered) recovered_[static_cast<std::size_t>(a.id)] = 1;
    }
    harvest_ore(a);
  }
}

void World::harvest_ore(AgentState& a) {
  if (a.health == 0) return;
  Tile& t = map_.at(a.pos);
  if (t.terrain != TerrainKind::Ore || t.resource_units <= 0) return;
  const std::uint64_t h =
      hash_combine(seed_, kOreSalt, static_cast<std::uint64_t>(tick_), static_cast<std::uint64_t>(a.id));
  Item it;
  switch (h % 4) {
    case 0: it.kind = ItemKind::Armor; break;
    case 1: it.kind = ItemKind::Weapon; break;
    case 2: it.kind = ItemKind::Ammo; break;
    default: it.kind = ItemKind::Poultice; break;
  }
  if (has_style(it.kind)) it.style = static_cast<CombatStyle>((h >> 8) % kNumCombatStyles);
  it.tier = std::min(kMaxTier, 1 + (a.skills.level(Skill::Forage) - 1) / 2);
  it.quantity = it.kind == ItemKind::Ammo ? kAmmoStack : 1;
  if (!add_item(a.inventory, it, config_.inventory_capacity)) return;
  --t.resource_units;
  diagnostics_.items_created += it.quantity;
  pending_.push_back({tick_, a.id, EventKind::HarvestItem, static_cast<std::int64_t>(it.kind)});
  add_xp(a, Skill::Forage, 1, tick_, pending_);
}

void World::phase_npcs() {
  for (NpcState& npc : npcs_) {
    if (npc.alive && npc.health > 0) npc_act(npc);
  }
}

void World::npc_act(NpcState& npc) {
  const std::int32_t radius = config_.hostile_chase_radius;
  const AgentState* target = nullptr;
  if (npc.disposition == Disposition::Neutral && npc.last_attacker >= 0) {
    const AgentState& a = agents_[static_cast<std::size_t>(npc.last_attacker)];
    if (active(a) && chebyshev(a.pos, npc.pos) <= radius) {
      target = &a;
    } else {
      npc.last_attacker = -1;
    }
  } else if (npc.disposition == Disposition::Hostile) {
    std::int32_t best = radius + 1;
    for (std::int32_t dr = -radius; dr <= radius; ++dr) {
      for (std::int32_t dc = -radius; dc <= radius; ++dc) {
        const Position p{npc.pos.row + dr, npc.pos.col + dc};
        if (!map_.in_bounds(p)) continue;
        const std::int32_t occ = occupant(p);
        if (occ < 0 || occ >= config_.num_agents) continue;
        const AgentState& a = agents_[static_cast<std::size_t>(occ)];
        const std::int32_t d = chebyshev(p, npc.pos);
        if (active(a) && (d < best || (d == best && target && a.id < target->id))) {
          best = d;
          target = &a;
        }
      }
    }
  }

  if (target) {
    AgentState& t = agents_[static_cast<std::size_t>(target->id)];
    if (chebyshev(t.pos, npc.pos) <= config_.combat.range(npc.style)) {
      npc_attack(npc, t);
    } else {
      npc_step_toward(npc, t.pos);
    }
    return;
  }
  if (rng_.chance(0.5)) {
    const Position to = step_toward(npc.pos, random_direction(rng_));
    if (walkable(to)) {
      occupant(npc.pos) = -1;
      npc.pos = to;
      occupant(to) = config_.num_agents + npc.id;
    }
  }
}

void World::npc_step_toward(NpcState& npc, Position target) {
  const std::int32_t dr = target.row - npc.pos.row;
  const std::int32_t dc = target.col - npc.pos.col;
  const Direction vertical = dr < 0 ? Direction::North : Direction::South;
  const Direction horizontal = dc < 0 ? Direction::West : Direction::East;
  Direction order[2] = {vertical, horizontal};
  if (std::abs(dc) > std::abs(dr)) std::swap(order[0], order[1]);
  for (Direction d : order) {
    if ((d == vertical && dr == 0) || (d == horizontal && dc == 0)) continue;
    const Position to = step_toward(npc.pos, d);
    if (walkable(to)) {
      occupant(npc.pos) = -1;
      npc.pos = to;
      occupant(to) = config_.num_agents + npc.id;
      return;
    }
  }
}

void World::npc_attack(NpcState& npc, AgentState& target) {
  const Combatant off{npc.level, 0, npc.style, 0, 0};
  const Combatant def{best_combat_level(target), 0, target.style, equipped_tier(target, ItemKind::Armor),
                      target.spawn_immunity_remaining};
  const std::int32_t dmg = resolve_combat(config_.combat, off, def, npc.style);
  target.health = std::max(0, target.health - dmg);
}

std::vector<AgentId> World::phase_deaths() {
  std::vector<AgentId> deaths;
  for (AgentState& a : agents_) {
    if (!a.alive || a.health > 0) continue;
    a.alive = false;
    occupant(a.pos) = -1;
    delist_all(a);
    deaths.push_back(a.id);
  }
  for (NpcState& npc : npcs_) {
    if (!npc.alive || npc.health > 0) continue;
    npc.alive = false;
    occupant(npc.pos) = -1;
  }
  return deaths;
}

void World::delist_all(AgentState& seller) {
  for (const MarketListing& l : listings_) {
    if (l.seller_id != seller.id) continue;
    // escrow returns to the inventory even past capacity
    auto held = std::find_if(seller.inventory.begin(), seller.inventory.end(),
                             [&](const Item& it) { return it.stacks_with(l.item); });
    if (held != seller.inventory.end()) {
      held->quantity += l.item.quantity;
    } else {
      seller.inventory.push_back(l.item);
    }
  }
  std::erase_if(listings_, [&](const MarketListing& l) { return l.seller_id == seller.id; });
}

std::vector<EntityRef> World::visible_entities(AgentId observer) const {
  std::vector<EntityRef> out;
  const AgentState& self = agents_.at(static_cast<std::size_t>(observer));
  if (!self.alive) return out;
  const std::int32_t r = config_.view_radius;
  struct Keyed {
    EntityRef ref;
    std::int32_t key;
  };
  std::vector<Keyed> found;
  for (std::int32_t dr = -r; dr <= r; ++dr) {
    for (std::int32_t dc = -r; dc <= r; ++dc) {
      const Position p{self.pos.row + dr, self.pos.col + dc};
      if (!map_.in_bounds(p)) continue;
      const std::int32_t occ = occupant(p);
      if (occ < 0 || occ == observer) continue;
      const bool npc = occ >= config_.num_agents;
      found.push_back({{npc, npc ? occ - config_.num_agents : occ, chebyshev(p, self.pos)}, occ});
    }
  }
  std::sort(found.begin(), found.end(), [](const Keyed& x, const Keyed& y) {
    if (x.ref.distance != y.ref.distance) return x.ref.distance < y.ref.distance;
    return x.key < y.key;
  });
  const std::size_t cap = std::min(found.size(), static_cast<std::size_t>(config_.entity_capacity));
  out.reserve(cap);
  for (std::size_t i = 0; i < cap; ++i) out.push_back(found[i].ref);
  return out;
}

Observation World::observe(AgentId id, std::span<const float> task_embedding) const {
  return observe_with(id, task_embedding, market_snapshot());
}

Observation World::observe(AgentId id) const { return observe(id, task_embedding(id)); }

std::vector<Observation> World::observe_all() const {
  const auto market = market_snapshot();
  std::vector<Observation> out;
  out.reserve(agents_.size());
  for (const AgentState& a : agents_) out.push_back(observe_with(a.id, task_embedding(a.id), market));
  return out;
}

Observation World::observe_with(AgentId id, std::span<const float> task_embedding,
                                const std::vector<const MarketListing*>& market) const {
  const AgentState& a = agents_.at(static_cast<std::size_t>(id));
  const std::int32_t r = config_.view_radius;
  Observation o;
  o.agent_id = id;
  o.radius = r;
  const auto cells = static_cast<std::size_t>(o.side()) * static_cast<std::size_t>(o.side());
  o.tile_terrain.assign(cells, 0.0f);
  o.tile_resource.assign(cells, 0.0f);
  o.tile_mask.assign(cells, 0);
  const auto ecap = static_cast<std::size_t>(config_.entity_capacity);
  o.entities.assign(ecap, EntityRow{});
  o.entity_mask.assign(ecap, 0);
  const auto icap = static_cast<std::size_t>(config_.inventory_capacity);
  o.inventory.assign(icap, InventoryRow{});
  o.inventory_mask.assign(icap, 0);
  const auto mcap = static_cast<std::size_t>(config_.market_top_k);
  o.market.assign(mcap, MarketRow{});
  o.market_mask.assign(mcap, 0);
  o.task_embedding.assign(task_embedding.begin(), task_embedding.end());
  if (!a.alive) return o;

  const double max_units = std::max({config_.forest_units, config_.ore_units, 1});
  for (std::int32_t dr = -r; dr <= r; ++dr) {
    for (std::int32_t dc = -r; dc <= r; ++dc) {
      const Position p{a.pos.row + dr, a.pos.col + dc};
      if (!map_.in_bounds(p)) continue;
      const std::size_t k = o.tile_index(dr, dc);
      const Tile& t = map_.at(p);
      o.tile_terrain[k] = static_cast<float>(static_cast<int>(t.terrain)) / (kNumTerrainKinds - 1);
      o.tile_resource[k] = unit(t.resource_units / max_units);
      o.tile_mask[k] = 1;
    }
  }

  const auto ents = visible_entities(id);
  const float span = 2.0f * static_cast<float>(r);
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const EntityRef& e = ents[i];
    EntityRow& row = o.entities[i];
    Position p;
    if (e.is_npc) {
      const NpcState& npc = npcs_[static_cast<std::size_t>(e.index)];
      p = npc.pos;
      row[kEntHealth] = unit(npc.health / 100.0);
      row[kEntLevel] = unit(npc.level / static_cast<double>(kMaxLevel));
      row[kEntStyle] = static_cast<float>(static_cast<int>(npc.style)) / 2.0f;
      row[kEntIsNpc] = 1.0f;
      row[kEntDisposition] = static_cast<float>(static_cast<int>(npc.disposition)) / 2.0f;
    } else {
      const AgentState& b = agents_[static_cast<std::size_t>(e.index)];
      p = b.pos;
      row[kEntHealth] = unit(b.health / 100.0);
      row[kEntLevel] = unit(best_combat_level(b) / static_cast<double>(kMaxLevel));
      row[kEntStyle] = static_cast<float>(static_cast<int>(b.style)) / 2.0f;
      row[kEntImmune] = b.spawn_immunity_remaining > 0 ? 1.0f : 0.0f;
      row[kEntSameGroup] = b.group_id == a.group_id ? 1.0f : 0.0f;
    }
    row[kEntRelRow] = static_cast<float>(p.row - a.pos.row + r) / span;
    row[kEntRelCol] = static_cast<float>(p.col - a.pos.col + r) / span;
    o.entity_mask[i] = 1;
  }

  for (std::size_t i = 0; i < a.inventory.size() && i < icap; ++i) {
    const Item& it = a.inventory[i];
    InventoryRow& row = o.inventory[i];
    row[kInvKind] = static_cast<float>(static_cast<int>(it.kind)) / (kNumItemKinds - 1);
    row[kInvStyle] = style_code(it);
    row[kInvTier] = unit(it.tier / static_cast<double>(kMaxTier));
    row[kInvQuantity] = unit(it.quantity / static_cast<double>(kQuantityScale));
    row[kInvEquipped] = it.equipped ? 1.0f : 0.0f;
    o.inventory_mask[i] = 1;
  }

  for (std::size_t i = 0; i < market.size() && i < mcap; ++i) {
    const MarketListing& l = *market[i];
    MarketRow& row = o.market[i];
    row[kMktKind] = static_cast<float>(static_cast<int>(l.item.kind)) / (kNumItemKinds - 1);
    row[kMktStyle] = style_code(l.item);
    row[kMktTier] = unit(l.item.tier / static_cast<double>(kMaxTier));
    row[kMktPrice] = unit(static_cast<double>(l.price) / kPriceScale);
    o.market_mask[i] = 1;
  }

  SelfRow& s = o.self;
  s[kSelfHealth] = unit(a.health / 100.0);
  s[kSelfFood] = unit(a.food / 100.0);
  s[kSelfWater] = unit(a.water / 100.0);
  s[kSelfGold] = unit(static_cast<double>(a.gold) / kGoldScale);
  for (int k = 0; k < kNumSkills; ++k) {
    s[kSelfMelee + k] = unit(a.skills.level(static_cast<Skill>(k)) / static_cast<double>(kMaxLevel));
  }
  s[kSelfImmunity] = config_.spawn_immunity_ticks > 0
                         ? unit(a.spawn_immunity_remaining / static_cast<double>(config_.spawn_immunity_ticks))
                         : 0.0f;
  const double edge = std::max(1, map_.size() - 1);
  s[kSelfRow] = unit(a.pos.row / edge);
  s[kSelfCol] = unit(a.pos.col / edge);
  s[kSelfStyle] = static_cast<float>(static_cast<int>(a.style)) / 2.0f;
  s[kSelfTick] = unit(tick_ / static_cast<double>(config_.max_ticks));
  s[kSelfAlive] = 1.0f;
  return o;
}

std::int32_t World::living_agents() const noexcept {
  return static_cast<std::int32_t>(std::count_if(agents_.begin(), agents_.end(), [](const AgentState& a) {
    return a.alive;
  }));
}

std::int64_t World::total_gold() const noexcept {
  std::int64_t g = 0;
  for (const AgentState& a : agents_) g += a.gold;
  return g;
}

std::int64_t World::total_item_units() const noexcept {
  std::int64_t n = 0;
  for (const AgentState& a : agents_) {
    for (const Item& it : a.inventory) n += it.quantity;
  }
  for (const MarketListing& l : listings_) n += l.item.quantity;
  return n;
}

std::int32_t World::defense(const AgentState& a) const noexcept {
  return config_.combat.armor_coef * equipped_tier(a, ItemKind::Armor);
}

std::int32_t World::best_combat_level(const AgentState& a) const noexcept {
  return std::max({a.skills.level(Skill::Melee), a.skills.level(Skill::Ranged), a.skills.level(Skill::Magic)});
}

}  // namespace arena
