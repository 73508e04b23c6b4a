#include "arena/types.hpp"

#include <array>

namespace arena {
namespace {

constexpr std::array<std::string_view, kNumTerrainKinds> kTerrainNames = {
    "Water", "Grass", "Forest", "Stone", "Ore", "Spawn"};
constexpr std::array<std::string_view, kNumCombatStyles> kStyleNames = {"Melee", "Ranged", "Magic"};
constexpr std::array<std::string_view, kNumSkills> kSkillNames = {"Melee", "Ranged", "Magic", "Forage"};
constexpr std::array<std::string_view, kNumItemKinds> kItemNames = {
    "Armor", "Weapon", "Ammo", "Ration", "Poultice"};
constexpr std::array<std::string_view, 3> kDispositionNames = {"Passive", "Neutral", "Hostile"};
constexpr std::array<std::string_view, kNumEventKinds> kEventNames = {
    "EatFood",   "DrinkWater", "ScoreHit", "PlayerKill", "ConsumeItem", "HarvestItem",
    "EquipItem", "ListItem",   "BuyItem",  "EarnGold",   "LevelUp"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(TerrainKind t) { return kTerrainNames[static_cast<int>(t)]; }
std::string_view to_string(CombatStyle s) { return kStyleNames[static_cast<int>(s)]; }
std::string_view to_string(Skill s) { return kSkillNames[static_cast<int>(s)]; }
std::string_view to_string(ItemKind k) { return kItemNames[static_cast<int>(k)]; }
std::string_view to_string(Disposition d) { return kDispositionNames[static_cast<int>(d)]; }
std::string_view to_string(EventKind e) { return kEventNames[static_cast<int>(e)]; }

std::optional<CombatStyle> parse_combat_style(std::string_view s) {
  return lookup<CombatStyle>(kStyleNames, s);
}
std::optional<Skill> parse_skill(std::string_view s) { return lookup<Skill>(kSkillNames, s); }
std::optional<ItemKind> parse_item_kind(std::string_view s) { return lookup<ItemKind>(kItemNames, s); }
std::optional<EventKind> parse_event_kind(std::string_view s) {
  return lookup<EventKind>(kEventNames, s);
}

}  // namespace arena
