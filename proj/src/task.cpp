#include "arena/task.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace arena {
namespace {

constexpr std::int64_t kTierMax = kMaxTier;

constexpr ArgSchema kTickGE[] = {{"target", ArgType::Int, 1}};
constexpr ArgSchema kCountEvent[] = {{"event", ArgType::Event}, {"n", ArgType::Int, 1}};
constexpr ArgSchema kAttainSkill[] = {{"skill", ArgType::Skill}, {"level", ArgType::Int, 1, kMaxLevel}};
constexpr ArgSchema kEquipItem[] = {{"item", ArgType::Item}, {"tier", ArgType::Int, 1, kTierMax}};
constexpr ArgSchema kOwnItem[] = {
    {"item", ArgType::Item}, {"tier", ArgType::Int, 1, kTierMax}, {"n", ArgType::Int, 1}};
constexpr ArgSchema kHarvestItem[] = {{"item", ArgType::Item}, {"n", ArgType::Int, 1}};
constexpr ArgSchema kEarnGold[] = {{"amount", ArgType::Int, 1}};
constexpr ArgSchema kHoardGold[] = {{"amount", ArgType::Int, 1}};
constexpr ArgSchema kOccupyTile[] = {{"row", ArgType::Int, 0}, {"col", ArgType::Int, 0}};
constexpr ArgSchema kDefeatEntity[] = {{"n", ArgType::Int, 1}};

constexpr std::array<std::string_view, kNumPredicateKinds> kPredicateNames = {
    "TickGE", "CountEvent", "AttainSkill", "EquipItem", "OwnItem",
    "HarvestItem", "EarnGold", "HoardGold", "OccupyTile", "DefeatEntity"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string render_value(ArgType t, std::int64_t v) {
  switch (t) {
    case ArgType::Int: return std::to_string(v);
    case ArgType::Event: return std::string(to_string(static_cast<EventKind>(v)));
    case ArgType::Skill: return std::string(to_string(static_cast<Skill>(v)));
    case ArgType::Item: return std::string(to_string(static_cast<ItemKind>(v)));
  }
  return {};
}

std::int64_t parse_value(const ArgSchema& a, std::string_view text) {
  auto fail = [&](const char* what) -> std::int64_t {
    throw ConfigError("argument '" + std::string(a.name) + "': " + what + " '" + std::string(text) + "'");
  };
  switch (a.type) {
    case ArgType::Int: {
      std::int64_t v = 0;
      const auto* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(text.data(), end, v);
      if (ec != std::errc() || ptr != end) return fail("expected an integer, got");
      return v;
    }
    case ArgType::Event:
      if (auto e = parse_event_kind(text)) return static_cast<std::int64_t>(*e);
      return fail("unknown event kind");
    case ArgType::Skill:
      if (auto s = parse_skill(text)) return static_cast<std::int64_t>(*s);
      return fail("unknown skill");
    case ArgType::Item:
      if (auto i = parse_item_kind(text)) return static_cast<std::int64_t>(*i);
      return fail("unknown item kind");
  }
  return fail("bad value");
}

double ratio(std::int64_t achieved, std::int64_t target) {
  if (target <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(achieved) / static_cast<double>(target));
}

}  // namespace

std::span<const ArgSchema> predicate_schema(PredicateKind k) {
  switch (k) {
    case PredicateKind::TickGE: return kTickGE;
    case PredicateKind::CountEvent: return kCountEvent;
    case PredicateKind::AttainSkill: return kAttainSkill;
    case PredicateKind::EquipItem: return kEquipItem;
    case PredicateKind::OwnItem: return kOwnItem;
    case PredicateKind::HarvestItem: return kHarvestItem;
    case PredicateKind::EarnGold: return kEarnGold;
    case PredicateKind::HoardGold: return kHoardGold;
    case PredicateKind::OccupyTile: return kOccupyTile;
    case PredicateKind::DefeatEntity: return kDefeatEntity;
  }
  return {};
}

std::string_view to_string(PredicateKind k) { return kPredicateNames[static_cast<int>(k)]; }

std::optional<PredicateKind> parse_predicate_kind(std::string_view s) {
  for (int i = 0; i < kNumPredicateKinds; ++i) {
    if (kPredicateNames[i] == s) return static_cast<PredicateKind>(i);
  }
  return std::nullopt;
}

Predicate make_predicate(PredicateKind kind, std::vector<std::int64_t> args) {
  const auto schema = predicate_schema(kind);
  if (args.size() != schema.size()) {
    throw ConfigError(std::string(to_string(kind)) + " takes " + std::to_string(schema.size()) +
                      " arguments, got " + std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const ArgSchema& a = schema[i];
    const std::int64_t v = args[i];
    bool ok = true;
    switch (a.type) {
      case ArgType::Int: ok = v >= a.min && v <= a.max; break;
      case ArgType::Event: ok = v >= 0 && v < kNumEventKinds; break;
      case ArgType::Skill: ok = v >= 0 && v < kNumSkills; break;
      case ArgType::Item: ok = v >= 0 && v < kNumItemKinds; break;
    }
    if (!ok) {
      std::string range = a.type == ArgType::Int
                              ? (a.max == INT64_MAX ? " (must be >= " + std::to_string(a.min) + ")"
                                                    : " (must be in [" + std::to_string(a.min) + ", " +
                                                          std::to_string(a.max) + "])")
                              : std::string();
      throw ConfigError(std::string(to_string(kind)) + ": argument '" + std::string(a.name) +
                        "' out of range: " + std::to_string(v) + range);
    }
  }
  if (kind == PredicateKind::EquipItem && !is_equippable(static_cast<ItemKind>(args[0]))) {
    throw ConfigError("EquipItem: item must be Armor or Weapon");
  }
  return Predicate{kind, std::move(args)};
}

std::string render(const Predicate& p) {
  const auto schema = predicate_schema(p.kind);
  std::string out(to_string(p.kind));
  out += '(';
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (i) out += ", ";
    out += schema[i].name;
    out += '=';
    out += render_value(schema[i].type, p.args[i]);
  }
  out += ')';
  return out;
}

Predicate parse_predicate(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ConfigError("expected 'Predicate(arg=value, ...)', got '" + std::string(text) + "'");
  }
  const std::string_view name = trim(text.substr(0, open));
  const auto kind = parse_predicate_kind(name);
  if (!kind) throw ConfigError("unknown predicate '" + std::string(name) + "'");

  const auto schema = predicate_schema(*kind);
  std::vector<std::int64_t> args(schema.size());
  std::vector<bool> seen(schema.size(), false);

  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  std::size_t given = 0;
  while (!trim(body).empty()) {
    const auto comma = body.find(',');
    const std::string_view item = trim(body.substr(0, comma));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(name) + ": expected 'name=value', got '" + std::string(item) + "'");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    auto it = std::find_if(schema.begin(), schema.end(), [&](const ArgSchema& a) { return a.name == key; });
    if (it == schema.end()) {
      throw ConfigError(std::string(name) + ": unknown argument '" + std::string(key) + "'");
    }
    const auto idx = static_cast<std::size_t>(it - schema.begin());
    if (seen[idx]) throw ConfigError(std::string(name) + ": duplicate argument '" + std::string(key) + "'");
    seen[idx] = true;
    args[idx] = parse_value(*it, value);
    ++given;
  }
  if (given != schema.size()) {
    throw ConfigError(std::string(name) + " takes " + std::to_string(schema.size()) + " arguments, got " +
                      std::to_string(given));
  }
  return make_predicate(*kind, std::move(args));
}

std::string canonical_args_key(const Predicate& p) {
  const auto schema = predicate_schema(p.kind);
  std::vector<std::string> pairs;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    pairs.push_back(std::string(schema[i].name) + "=" + render_value(schema[i].type, p.args[i]));
  }
  std::sort(pairs.begin(), pairs.end());
  std::string out;
  for (const auto& s : pairs) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

TaskSpec TaskSpec::make(std::string name, Predicate predicate, double weight) {
  TaskSpec t;
  t.name = std::move(name);
  t.source_text = render(predicate);
  t.predicate = std::move(predicate);
  t.sampling_weight = weight;
  return t;
}

std::string render_task_line(const TaskSpec& t) {
  // shortest representation that parses back to the same double
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, t.sampling_weight);
  return t.name + ": " + t.source_text + " weight=" + std::string(buf, end);
}

// --- episode state ---------------------------------------------------------

AgentEpisodeState::AgentEpisodeState(std::int32_t map_size)
    : map_size_(map_size), visited_(static_cast<std::size_t>(map_size) * map_size, false) {}

void AgentEpisodeState::observe(const AgentState& agent) {
  ticks_alive_ = std::max(ticks_alive_, agent.lifespan);
  for (int s = 0; s < kNumSkills; ++s) {
    skill_levels_[s] = std::max(skill_levels_[s], agent.skills.level(static_cast<Skill>(s)));
  }
  std::array<std::array<std::int64_t, kMaxTier + 1>, kNumItemKinds> owned{};
  for (const Item& it : agent.inventory) {
    const int k = static_cast<int>(it.kind);
    const int tier = std::clamp(it.tier, 1, kMaxTier);
    for (int t = 1; t <= tier; ++t) owned[k][t] += it.quantity;
    if (it.equipped) max_equipped_tier_[k] = std::max(max_equipped_tier_[k], it.tier);
  }
  for (int k = 0; k < kNumItemKinds; ++k) {
    for (int t = 1; t <= kMaxTier; ++t) max_owned_[k][t] = std::max(max_owned_[k][t], owned[k][t]);
  }
  gold_earned_ = std::max(gold_earned_, agent.gold_earned);
  max_gold_ = std::max(max_gold_, agent.gold);
  if (map_size_ > 0 && agent.pos.row >= 0 && agent.pos.col >= 0 && agent.pos.row < map_size_ &&
      agent.pos.col < map_size_) {
    visited_[static_cast<std::size_t>(agent.pos.row) * map_size_ + agent.pos.col] = true;
  }
}

void AgentEpisodeState::record_event(const GameEvent& e) {
  ++event_counts_[static_cast<int>(e.kind)];
  if (e.kind == EventKind::HarvestItem && e.value >= 0 && e.value < kNumItemKinds) {
    ++harvested_[static_cast<std::size_t>(e.value)];
  }
}

std::int64_t AgentEpisodeState::max_owned(ItemKind k, std::int32_t tier) const noexcept {
  return max_owned_[static_cast<int>(k)][std::clamp(tier, 1, kMaxTier)];
}

bool AgentEpisodeState::visited(Position p) const noexcept {
  if (p.row < 0 || p.col < 0 || p.row >= map_size_ || p.col >= map_size_) return false;
  return visited_[static_cast<std::size_t>(p.row) * map_size_ + p.col];
}

double evaluate_progress(const Predicate& p, const AgentEpisodeState& s) {
  const auto& a = p.args;
  switch (p.kind) {
    case PredicateKind::TickGE: return ratio(s.ticks_alive(), a[0]);
    case PredicateKind::CountEvent: return ratio(s.event_count(static_cast<EventKind>(a[0])), a[1]);
    case PredicateKind::AttainSkill: return ratio(s.skill_level(static_cast<Skill>(a[0])), a[1]);
    case PredicateKind::EquipItem:
      return s.max_equipped_tier(static_cast<ItemKind>(a[0])) >= a[1] ? 1.0 : 0.0;
    case PredicateKind::OwnItem:
      return ratio(s.max_owned(static_cast<ItemKind>(a[0]), static_cast<std::int32_t>(a[1])), a[2]);
    case PredicateKind::HarvestItem: return ratio(s.harvested(static_cast<ItemKind>(a[0])), a[1]);
    case PredicateKind::EarnGold: return ratio(s.gold_earned(), a[0]);
    case PredicateKind::HoardGold: return ratio(s.max_gold(), a[0]);
    case PredicateKind::OccupyTile:
      return s.visited({static_cast<std::int32_t>(a[0]), static_cast<std::int32_t>(a[1])}) ? 1.0 : 0.0;
    case PredicateKind::DefeatEntity: return ratio(s.kills(), a[0]);
  }
  return 0.0;
}

void TaskAssignment::update(const AgentEpisodeState& s) {
  progress = std::max(progress, evaluate_progress(task.predicate, s));
  if (progress >= 1.0) {
    progress = 1.0;
    completed = true;
  }
}

}  // namespace arena
