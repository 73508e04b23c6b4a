#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arena/types.hpp"

namespace arena {

enum class PredicateKind : std::uint8_t {
  TickGE = 0,
  CountEvent,
  AttainSkill,
  EquipItem,
  OwnItem,
  HarvestItem,
  EarnGold,
  HoardGold,
  OccupyTile,
  DefeatEntity,
};
inline constexpr int kNumPredicateKinds = 10;

enum class ArgType : std::uint8_t { Int, Event, Skill, Item };

struct ArgSchema {
  std::string_view name;
  ArgType type;
  std::int64_t min = 0;
  std::int64_t max = INT64_MAX;
};

/// Argument schema of each predicate, in canonical order.
std::span<const ArgSchema> predicate_schema(PredicateKind k);
std::string_view to_string(PredicateKind k);
std::optional<PredicateKind> parse_predicate_kind(std::string_view s);

/// A predicate with bound arguments. Enum-typed arguments are stored as
/// their underlying integer code, in schema order.
struct Predicate {
  PredicateKind kind = PredicateKind::TickGE;
  std::vector<std::int64_t> args;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Builds a predicate and checks arity and argument ranges.
/// Throws ConfigError on mismatch.
Predicate make_predicate(PredicateKind kind, std::vector<std::int64_t> args);

/// Canonical text, e.g. "AttainSkill(skill=Melee, level=10)".
std::string render(const Predicate& p);

/// Parses canonical or loosely spaced predicate text; arguments may appear in
/// any order but each exactly once. Throws ConfigError.
Predicate parse_predicate(std::string_view text);

/// Sorted "name=value" pairs joined by ',', the key for full-mode overlap.
std::string canonical_args_key(const Predicate& p);

struct TaskSpec {
  std::string name;
  Predicate predicate;
  std::string source_text;
  double sampling_weight = 1.0;

  static TaskSpec make(std::string name, Predicate predicate, double weight = 1.0);

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

/// One line of the task file format: "NAME: Predicate(arg=value, ...) weight=W".
std::string render_task_line(const TaskSpec& t);

/// Cumulative per-agent episode record that predicates are evaluated on.
/// Every field is a running total or a high-water mark, which is what makes
/// every progress function monotone over an episode.
class AgentEpisodeState {
 public:
  AgentEpisodeState() = default;
  explicit AgentEpisodeState(std::int32_t map_size);

  /// Folds in the agent's state at the end of a tick.
  void observe(const AgentState& agent);
  void record_event(const GameEvent& e);

  Tick ticks_alive() const noexcept { return ticks_alive_; }
  std::int64_t event_count(EventKind k) const noexcept { return event_counts_[static_cast<int>(k)]; }
  int skill_level(Skill s) const noexcept { return skill_levels_[static_cast<int>(s)]; }
  std::int32_t max_equipped_tier(ItemKind k) const noexcept { return max_equipped_tier_[static_cast<int>(k)]; }
  /// Most items of kind `k` with tier >= `tier` ever held at once.
  std::int64_t max_owned(ItemKind k, std::int32_t tier) const noexcept;
  std::int64_t harvested(ItemKind k) const noexcept { return harvested_[static_cast<int>(k)]; }
  std::int64_t gold_earned() const noexcept { return gold_earned_; }
  std::int64_t max_gold() const noexcept { return max_gold_; }
  std::int64_t kills() const noexcept { return event_count(EventKind::PlayerKill); }
  bool visited(Position p) const noexcept;

 private:
  std::int32_t map_size_ = 0;
  Tick ticks_alive_ = 0;
  std::array<std::int64_t, kNumEventKinds> event_counts_{};
  std::array<int, kNumSkills> skill_levels_{1, 1, 1, 1};
  std::array<std::int32_t, kNumItemKinds> max_equipped_tier_{};
  std::array<std::array<std::int64_t, kMaxTier + 1>, kNumItemKinds> max_owned_{};
  std::array<std::int64_t, kNumItemKinds> harvested_{};
  std::int64_t gold_earned_ = 0;
  std::int64_t max_gold_ = 0;
  std::vector<bool> visited_;
};

/// Progress in [0, 1]: min(1, achieved/target) for counting predicates,
/// level/target for AttainSkill, an indicator for EquipItem and OccupyTile.
double evaluate_progress(const Predicate& p, const AgentEpisodeState& s);

struct TaskAssignment {
  AgentId agent_id = 0;
  TaskSpec task;
  double progress = 0.0;
  bool completed = false;

  /// Re-evaluates and keeps the maximum; completion latches at 1.0.
  void update(const AgentEpisodeState& s);
};

}  // namespace arena
