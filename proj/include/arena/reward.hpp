#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arena/types.hpp"

namespace arena {

class World;

struct RewardConfig {
  double task_progress_coef = 1.0;
  double completion_bonus = 3.0;
  double hp_delta_coef = 0.005;
  double health_recovery_bonus = 0.02;
  double event_bonus_per_new_event_type = 0.5;
  double gold_delta_coef = 0.0;
  double defense_coef = 0.0;
  double attack_coef = 0.0;
  double experience_coef = 0.0;
  double death_penalty = 0.0;
  /// Per-tick reward is clipped to [-clip, clip].
  double clip = 5.0;

  /// Throws ConfigError on non-finite coefficients or a non-positive clip.
  void validate() const;
  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

/// Named presets: "default", "takeru", "yaofeng", "mori".
RewardConfig reward_preset(std::string_view name);
std::vector<std::string> reward_preset_names();

/// Per-agent change between two consecutive ticks.
struct TickDelta {
  double hp = 0.0;
  /// Health rose this tick from being fed and watered.
  bool recovered = false;
  double gold = 0.0;
  double defense = 0.0;
  double max_xp = 0.0;
  double damage_dealt = 0.0;
  /// Event kinds emitted by this agent for the first time this episode.
  std::int32_t new_event_types = 0;
  double progress = 0.0;
  bool completed_now = false;
  bool died = false;
};

/// Weighted sum of the delta terms, clipped. Linear in every coefficient
/// while unclipped.
double shaped_reward(const RewardConfig& config, const TickDelta& d);

/// Tracks per-agent snapshots across ticks and produces TickDeltas.
class RewardTracker {
 public:
  explicit RewardTracker(const World& world);

  /// Deltas for every agent for the tick the world just advanced through.
  /// `events` are that tick's events.
  std::vector<TickDelta> update(const World& world, const std::vector<GameEvent>& events);

 private:
  struct Snapshot {
    double hp = 0.0;
    double gold = 0.0;
    double defense = 0.0;
    double max_xp = 0.0;
    double damage = 0.0;
    double progress = 0.0;
    bool completed = false;
    bool alive = true;
  };
  static Snapshot take(const World& world, AgentId id);

  std::vector<Snapshot> last_;
  std::vector<std::bitset<kNumEventKinds>> seen_;
};

}  // namespace arena
