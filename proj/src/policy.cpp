#include "arena/policy.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "arena/config.hpp"

namespace arena {
namespace policy_detail {
namespace {

constexpr std::array<Direction, 4> kDirections = {Direction::North, Direction::East, Direction::South,
                                                  Direction::West};

bool in_crop(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  return dr >= -obs.radius && dr <= obs.radius && dc >= -obs.radius && dc <= obs.radius;
}

TerrainKind terrain_at(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  return decode_terrain(obs.tile_terrain[obs.tile_index(dr, dc)]);
}

bool entity_at(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  for (std::size_t i = 0; i < obs.entities.size(); ++i) {
    if (!obs.entity_mask[i]) continue;
    if (decode_offset(obs.entities[i][kEntRelRow], obs.radius) == dr &&
        decode_offset(obs.entities[i][kEntRelCol], obs.radius) == dc) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_walkable(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  if (!in_crop(obs, dr, dc) || !obs.tile_mask[obs.tile_index(dr, dc)]) return false;
  return is_passable(terrain_at(obs, dr, dc)) && !entity_at(obs, dr, dc);
}

std::optional<Direction> path_step(const Observation& obs,
                                   const std::function<bool(std::int32_t, std::int32_t)>& goal) {
  if (goal(0, 0)) return std::nullopt;
  const std::int32_t side = obs.side();
  const std::int32_t r = obs.radius;
  const auto idx = [&](std::int32_t dr, std::int32_t dc) { return obs.tile_index(dr, dc); };

  std::vector<std::uint8_t> open(static_cast<std::size_t>(side * side), 0);
  for (std::int32_t dr = -r; dr <= r; ++dr) {
    for (std::int32_t dc = -r; dc <= r; ++dc) {
      const std::size_t k = idx(dr, dc);
      open[k] = obs.tile_mask[k] && is_passable(terrain_at(obs, dr, dc));
    }
  }
  for (std::size_t i = 0; i < obs.entities.size(); ++i) {
    if (!obs.entity_mask[i]) continue;
    const std::int32_t er = decode_offset(obs.entities[i][kEntRelRow], r);
    const std::int32_t ec = decode_offset(obs.entities[i][kEntRelCol], r);
    if (in_crop(obs, er, ec)) open[idx(er, ec)] = 0;
  }

  // first[k]: index of the first move on the path to k, 4 for the start
  std::vector<std::int8_t> first(open.size(), -1);
  std::deque<std::pair<std::int32_t, std::int32_t>> queue;
  first[idx(0, 0)] = 4;
  for (std::size_t d = 0; d < kDirections.size(); ++d) {
    const Position p = step_toward({0, 0}, kDirections[d]);
    if (!in_crop(obs, p.row, p.col) || !open[idx(p.row, p.col)]) continue;
    first[idx(p.row, p.col)] = static_cast<std::int8_t>(d);
    queue.emplace_back(p.row, p.col);
  }
  while (!queue.empty()) {
    const auto [dr, dc] = queue.front();
    queue.pop_front();
    const std::int8_t via = first[idx(dr, dc)];
    if (goal(dr, dc)) return kDirections[static_cast<std::size_t>(via)];
    for (Direction d : kDirections) {
      const Position p = step_toward({dr, dc}, d);
      if (!in_crop(obs, p.row, p.col)) continue;
      const std::size_t k = idx(p.row, p.col);
      if (first[k] >= 0 || !open[k]) continue;
      first[k] = via;
      queue.emplace_back(p.row, p.col);
    }
  }
  return std::nullopt;
}

namespace {

bool water_near(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  for (std::int32_t a = -1; a <= 1; ++a) {
    for (std::int32_t b = -1; b <= 1; ++b) {
      const std::int32_t r = dr + a;
      const std::int32_t c = dc + b;
      if (in_crop(obs, r, c) && obs.tile_mask[obs.tile_index(r, c)] && terrain_at(obs, r, c) == TerrainKind::Water) {
        return true;
      }
    }
  }
  return false;
}

bool food_at(const Observation& obs, std::int32_t dr, std::int32_t dc) {
  const std::size_t k = obs.tile_index(dr, dc);
  return obs.tile_mask[k] && terrain_at(obs, dr, dc) == TerrainKind::Forest && obs.tile_resource[k] > 0.0f;
}

}  // namespace

bool adjacent_to_water(const Observation& obs) { return water_near(obs, 0, 0); }
bool on_food(const Observation& obs) { return food_at(obs, 0, 0); }

std::optional<Direction> step_to_water(const Observation& obs) {
  return path_step(obs, [&](std::int32_t dr, std::int32_t dc) { return water_near(obs, dr, dc); });
}

std::optional<Direction> step_to_food(const Observation& obs) {
  return path_step(obs, [&](std::int32_t dr, std::int32_t dc) { return food_at(obs, dr, dc); });
}

std::optional<std::int32_t> find_item(const Observation& obs, ItemKind kind, bool unequipped_only) {
  for (std::size_t i = 0; i < obs.inventory.size(); ++i) {
    if (!obs.inventory_mask[i]) continue;
    const InventoryRow& row = obs.inventory[i];
    if (decode_item_kind(row[kInvKind]) != kind) continue;
    if (unequipped_only && row[kInvEquipped] > 0.5f) continue;
    return static_cast<std::int32_t>(i);
  }
  return std::nullopt;
}

std::int32_t count_item(const Observation& obs, ItemKind kind) {
  std::int32_t n = 0;
  for (std::size_t i = 0; i < obs.inventory.size(); ++i) {
    if (obs.inventory_mask[i] && decode_item_kind(obs.inventory[i][kInvKind]) == kind) {
      n += static_cast<std::int32_t>(std::lround(obs.inventory[i][kInvQuantity] * kQuantityScale));
    }
  }
  return n;
}

}  // namespace policy_detail

namespace {

using namespace policy_detail;

constexpr std::int32_t kSeekThreshold = 60;
constexpr std::int32_t kWarriorSeekThreshold = 40;
constexpr std::int32_t kWarriorRetreatHealth = 40;
constexpr std::int32_t kRationThreshold = 35;
constexpr std::int32_t kPoulticeThreshold = 50;
constexpr std::int32_t kRationSurplus = 2;
constexpr std::array<Direction, 4> kAllDirections = {Direction::North, Direction::East, Direction::South,
                                                     Direction::West};

Action move(Direction d) { return act::Move{d}; }

std::optional<Action> equip_gear(const Observation& obs) {
  for (ItemKind kind : {ItemKind::Armor, ItemKind::Weapon}) {
    bool equipped = false;
    for (std::size_t i = 0; i < obs.inventory.size(); ++i) {
      if (obs.inventory_mask[i] && decode_item_kind(obs.inventory[i][kInvKind]) == kind &&
          obs.inventory[i][kInvEquipped] > 0.5f) {
        equipped = true;
      }
    }
    if (equipped) continue;
    if (auto slot = find_item(obs, kind, true)) return act::Use{*slot};
  }
  return std::nullopt;
}

constexpr std::int32_t kThreatRadius = 5;

// Deals with the nearest hostile NPC within kThreatRadius: fights it with
// the style that beats it when its level is at most one above the agent's
// best combat level, otherwise steps away, hitting back when cornered.
std::optional<Action> defend(const Observation& obs) {
  std::optional<std::size_t> threat;
  Position tp{};
  for (std::size_t i = 0; i < obs.entities.size(); ++i) {
    if (!obs.entity_mask[i]) continue;
    const EntityRow& row = obs.entities[i];
    if (row[kEntIsNpc] < 0.5f || decode_disposition(row[kEntDisposition]) != Disposition::Hostile) continue;
    const Position p{decode_offset(row[kEntRelRow], obs.radius), decode_offset(row[kEntRelCol], obs.radius)};
    if (chebyshev({0, 0}, p) > kThreatRadius) continue;
    if (!threat || chebyshev({0, 0}, p) < chebyshev({0, 0}, tp)) {
      threat = i;
      tp = p;
    }
  }
  if (!threat) return std::nullopt;
  const EntityRow& row = obs.entities[*threat];
  const CombatStyle style = loses_to(decode_style(row[kEntStyle]));
  const std::int32_t range = CombatConstants{}.range(style);
  const std::int32_t dist = chebyshev({0, 0}, tp);
  std::int32_t own_level = 1;
  for (int k : {kSelfMelee, kSelfRanged, kSelfMagic}) own_level = std::max(own_level, decode_level(obs.self[k]));

  if (decode_level(row[kEntLevel]) <= own_level + 1) {
    if (dist <= range) return act::Attack{style, static_cast<std::int32_t>(*threat)};
    const auto step = path_step(obs, [&](std::int32_t dr, std::int32_t dc) {
      return chebyshev({dr, dc}, tp) <= range;
    });
    if (step) return move(*step);
  }
  std::optional<Direction> best;
  std::int32_t best_dist = dist;
  for (Direction d : kAllDirections) {
    const Position p = step_toward({0, 0}, d);
    if (!is_walkable(obs, p.row, p.col)) continue;
    if (chebyshev(p, tp) > best_dist) {
      best_dist = chebyshev(p, tp);
      best = d;
    }
  }
  if (best) return move(*best);
  if (dist <= range) return act::Attack{style, static_cast<std::int32_t>(*threat)};
  return std::nullopt;
}

// Eat, heal, drink or head for food/water when a meter is below `threshold`.
std::optional<Action> survive(const Observation& obs, std::int32_t threshold) {
  const std::int32_t health = decode_percent(obs.self[kSelfHealth]);
  const std::int32_t food = decode_percent(obs.self[kSelfFood]);
  const std::int32_t water = decode_percent(obs.self[kSelfWater]);

  if (food < kRationThreshold) {
    if (auto slot = find_item(obs, ItemKind::Ration)) return act::Use{*slot};
  }
  if (health < kPoulticeThreshold) {
    if (auto slot = find_item(obs, ItemKind::Poultice)) return act::Use{*slot};
  }

  const bool thirsty = water < threshold;
  const bool hungry = food < threshold;
  if (!thirsty && !hungry) return std::nullopt;
  if (adjacent_to_water(obs) && water < 90 && (!hungry || water <= food)) return act::Noop{};
  if (on_food(obs) && food < 90 && (!thirsty || food < water)) return act::Noop{};

  const bool water_first = thirsty && (!hungry || water <= food);
  auto step = water_first ? step_to_water(obs) : step_to_food(obs);
  if (!step) step = water_first ? step_to_food(obs) : step_to_water(obs);
  if (step) return move(*step);
  return std::nullopt;
}

Action wander(const Observation& obs, Rng& rng) {
  if (!rng.chance(0.5)) return act::Noop{};
  const auto d = static_cast<Direction>(rng.below(4));
  const Position p = step_toward({0, 0}, d);
  if (is_walkable(obs, p.row, p.col)) return move(d);
  return act::Noop{};
}

}  // namespace

Action RandomPolicy::act(const Observation& obs, Rng& rng) {
  if (!obs.alive()) return act::Noop{};
  const std::uint64_t kinds = options_.disable_giving ? 6 : 8;
  const auto pick = [&rng](const std::vector<std::uint8_t>& mask) -> std::optional<std::int32_t> {
    std::vector<std::int32_t> valid;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) valid.push_back(static_cast<std::int32_t>(i));
    }
    if (valid.empty()) return std::nullopt;
    return valid[rng.below(valid.size())];
  };
  switch (rng.below(kinds)) {
    case 0: return act::Noop{};
    case 1: return move(static_cast<Direction>(rng.below(4)));
    case 2: {
      const auto style = static_cast<CombatStyle>(rng.below(kNumCombatStyles));
      if (auto slot = pick(obs.entity_mask)) return act::Attack{style, *slot};
      return act::Noop{};
    }
    case 3:
      if (auto slot = pick(obs.inventory_mask)) return act::Use{*slot};
      return act::Noop{};
    case 4:
      if (auto slot = pick(obs.inventory_mask)) return act::Sell{*slot, rng.range(1, 20)};
      return act::Noop{};
    case 5:
      if (auto slot = pick(obs.market_mask)) return act::Buy{*slot};
      return act::Noop{};
    case 6: {
      const auto item = pick(obs.inventory_mask);
      const auto target = pick(obs.entity_mask);
      if (item && target) return act::GiveItem{*item, *target};
      return act::Noop{};
    }
    default: {
      const auto target = pick(obs.entity_mask);
      if (target) return act::GiveGold{rng.range(1, 5), *target};
      return act::Noop{};
    }
  }
}

Action ForagePolicy::act(const Observation& obs, Rng& rng) {
  if (!obs.alive()) return act::Noop{};
  if (auto a = defend(obs)) return *a;
  if (auto a = survive(obs, kSeekThreshold)) return *a;
  if (auto a = equip_gear(obs)) return *a;
  // Eat down a ration surplus.
  if (count_item(obs, ItemKind::Ration) >= kRationSurplus && decode_percent(obs.self[kSelfFood]) <= 70) {
    if (auto slot = find_item(obs, ItemKind::Ration)) return act::Use{*slot};
  }
  return wander(obs, rng);
}

Action WarriorPolicy::act(const Observation& obs, Rng& rng) {
  if (!obs.alive()) return act::Noop{};
  if (decode_percent(obs.self[kSelfHealth]) < kWarriorRetreatHealth) {
    if (auto a = defend(obs)) return *a;
  }
  if (auto a = survive(obs, kWarriorSeekThreshold)) return *a;
  if (auto a = equip_gear(obs)) return *a;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < obs.entities.size(); ++i) {
    if (!obs.entity_mask[i]) continue;
    const EntityRow& row = obs.entities[i];
    if (row[kEntImmune] > 0.5f || row[kEntHealth] <= 0.0f) continue;
    if (row[kEntIsNpc] < 0.5f && row[kEntSameGroup] > 0.5f) continue;
    if (!best || row[kEntHealth] < obs.entities[*best][kEntHealth]) best = i;
  }
  if (!best) return wander(obs, rng);

  const EntityRow& row = obs.entities[*best];
  const std::int32_t tr = decode_offset(row[kEntRelRow], obs.radius);
  const std::int32_t tc = decode_offset(row[kEntRelCol], obs.radius);
  const CombatStyle style = loses_to(decode_style(row[kEntStyle]));
  const std::int32_t range = CombatConstants{}.range(style);
  const std::int32_t dist = chebyshev({0, 0}, {tr, tc});
  if (dist <= range) return act::Attack{style, static_cast<std::int32_t>(*best)};
  const auto step = path_step(obs, [&](std::int32_t dr, std::int32_t dc) {
    return chebyshev({dr, dc}, {tr, tc}) <= range;
  });
  if (step) return move(*step);
  return wander(obs, rng);
}

Action MarketeerPolicy::act(const Observation& obs, Rng& rng) {
  if (!obs.alive()) return act::Noop{};
  if (auto a = defend(obs)) return *a;
  if (auto a = survive(obs, kSeekThreshold)) return *a;

  const std::int32_t gold = decode_percent(obs.self[kSelfGold]);
  const std::int32_t rations = count_item(obs, ItemKind::Ration);
  if (rations >= 3) {
    if (auto slot = find_item(obs, ItemKind::Ration)) {
      return act::Sell{*slot, static_cast<std::int64_t>(rng.range(2, 5))};
    }
  }
  if (rations < 2) {
    for (std::size_t i = 0; i < obs.market.size(); ++i) {
      if (!obs.market_mask[i]) continue;
      const ItemKind kind = decode_item_kind(obs.market[i][kMktKind]);
      const std::int32_t price = decode_percent(obs.market[i][kMktPrice]);
      if ((kind == ItemKind::Ration || kind == ItemKind::Poultice) && price <= 5 && price <= gold) {
        return act::Buy{static_cast<std::int32_t>(i)};
      }
    }
  }
  if (auto a = equip_gear(obs)) return *a;
  if (!on_food(obs)) {
    if (auto step = step_to_food(obs)) return move(*step);
  }
  return wander(obs, rng);
}

std::unique_ptr<Policy> make_policy(std::string_view name, PolicyOptions options) {
  if (name == "random") return std::make_unique<RandomPolicy>(options);
  if (name == "forage") return std::make_unique<ForagePolicy>();
  if (name == "warrior") return std::make_unique<WarriorPolicy>();
  if (name == "marketeer") return std::make_unique<MarketeerPolicy>();
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::vector<std::string> policy_names() { return {"random", "forage", "warrior", "marketeer"}; }

std::vector<Action> act_batch(Policy& policy, std::span<const Observation> observations, std::span<Rng> rngs) {
  if (rngs.size() < observations.size()) throw ConfigError("act_batch needs one rng per observation");
  std::vector<Action> out;
  out.reserve(observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    out.push_back(observations[i].alive() ? policy.act(observations[i], rngs[i]) : Action{act::Noop{}});
  }
  return out;
}

}  // namespace arena
