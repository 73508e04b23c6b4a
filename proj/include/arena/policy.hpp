#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/action.hpp"
#include "arena/observation.hpp"
#include "arena/rng.hpp"

namespace arena {

struct PolicyOptions {
  /// Never emit GiveItem/GiveGold.
  bool disable_giving = false;
};

/// Maps one agent's observation to an action. Implementations keep no state
/// across calls other than what reset() clears, so a policy is a pure
/// function of (observation, rng state).
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual void reset(std::uint64_t episode_seed) { (void)episode_seed; }
  virtual Action act(const Observation& obs, Rng& rng) = 0;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(PolicyOptions options = {}) : options_(options) {}
  std::string_view name() const override { return "random"; }
  Action act(const Observation& obs, Rng& rng) override;

 private:
  PolicyOptions options_;
};

/// Drinks and eats when a meter runs low, otherwise wanders. Consumes
/// rations/poultices when low, eats surplus rations early and equips any
/// gear it holds. A hostile NPC within 5 tiles is fought when its level is
/// at most one above the agent's best combat level and avoided otherwise.
class ForagePolicy final : public Policy {
 public:
  std::string_view name() const override { return "forage"; }
  Action act(const Observation& obs, Rng& rng) override;
};

/// Forages when low, otherwise attacks the weakest non-immune entity outside
/// its own group with the style that has the advantage. Below 40 health it
/// handles nearby hostile NPCs like ForagePolicy.
class WarriorPolicy final : public Policy {
 public:
  std::string_view name() const override { return "warrior"; }
  Action act(const Observation& obs, Rng& rng) override;
};

/// Forages (including the hostile-NPC handling), lists surplus rations, buys
/// cheap consumables.
class MarketeerPolicy final : public Policy {
 public:
  std::string_view name() const override { return "marketeer"; }
  Action act(const Observation& obs, Rng& rng) override;
};

/// "random", "forage", "warrior", "marketeer". Throws ConfigError otherwise.
std::unique_ptr<Policy> make_policy(std::string_view name, PolicyOptions options = {});
std::vector<std::string> policy_names();

/// One action per observation; dead agents get Noop. `rngs[i]` is the
/// stream of the agent behind `observations[i]`.
std::vector<Action> act_batch(Policy& policy, std::span<const Observation> observations, std::span<Rng> rngs);

// Shared building blocks, exposed for tests.
namespace policy_detail {

/// First move of a shortest walkable path (4-neighbour, inside the tile crop,
/// entity tiles blocked) from the centre to any cell where `goal(dr, dc)` is
/// true. nullopt when already at a goal or none is reachable.
std::optional<Direction> path_step(const Observation& obs,
                                   const std::function<bool(std::int32_t, std::int32_t)>& goal);

bool is_walkable(const Observation& obs, std::int32_t dr, std::int32_t dc);
bool adjacent_to_water(const Observation& obs);
bool on_food(const Observation& obs);
std::optional<Direction> step_to_water(const Observation& obs);
std::optional<Direction> step_to_food(const Observation& obs);
/// Slot of the first inventory item of `kind`, optionally unequipped only.
std::optional<std::int32_t> find_item(const Observation& obs, ItemKind kind, bool unequipped_only = false);
std::int32_t count_item(const Observation& obs, ItemKind kind);

}  // namespace policy_detail

}  // namespace arena
