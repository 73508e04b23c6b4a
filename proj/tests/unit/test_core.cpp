#include <gtest/gtest.h>

#include <set>

#include "arena/action.hpp"
#include "arena/combat.hpp"
#include "arena/map.hpp"
#include "arena/rng.hpp"
#include "arena/types.hpp"

namespace arena {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowAndRangeStayInBounds) {
  Rng r(5);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const auto v = r.range(-2, 2);
    EXPECT_GE(v, -2);
    EXPECT_LE(v, 2);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
  EXPECT_EQ(r.below(0), 0u);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Hashing, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hashing, CombineIsOrderSensitive) {
  EXPECT_NE(hash_combine(1, 2), hash_combine(2, 1));
  EXPECT_EQ(hash_combine(1, 2, 3), hash_combine(hash_combine(1, 2), 3));
}

TEST(Skills, LevelCurve) {
  EXPECT_EQ(level_from_xp(0), 1);
  EXPECT_EQ(level_from_xp(39), 1);
  EXPECT_EQ(level_from_xp(40), 2);
  EXPECT_EQ(level_from_xp(89), 2);
  EXPECT_EQ(level_from_xp(90), 3);
  EXPECT_EQ(level_from_xp(1000), 10);
  EXPECT_EQ(level_from_xp(1'000'000), kMaxLevel);
  for (int l = 2; l <= kMaxLevel; ++l) EXPECT_EQ(level_from_xp(xp_for_level(l)), l);
}

TEST(Styles, RockPaperScissorsCycle) {
  EXPECT_EQ(beats(CombatStyle::Melee), CombatStyle::Ranged);
  EXPECT_EQ(beats(CombatStyle::Ranged), CombatStyle::Magic);
  EXPECT_EQ(beats(CombatStyle::Magic), CombatStyle::Melee);
  for (auto s : {CombatStyle::Melee, CombatStyle::Ranged, CombatStyle::Magic}) {
    EXPECT_EQ(beats(loses_to(s)), s);
    EXPECT_NE(beats(s), s);
  }
}

TEST(Names, RoundTrip) {
  for (int k = 0; k < kNumEventKinds; ++k) {
    const auto e = static_cast<EventKind>(k);
    EXPECT_EQ(parse_event_kind(to_string(e)), e);
  }
  for (int k = 0; k < kNumItemKinds; ++k) {
    const auto i = static_cast<ItemKind>(k);
    EXPECT_EQ(parse_item_kind(to_string(i)), i);
  }
  EXPECT_FALSE(parse_skill("Cooking").has_value());
}

TEST(Combat, DamageFormula) {
  const CombatConstants k;
  // level 1, no gear, neutral matchup: 5 + 2 = 7
  EXPECT_EQ(resolve_combat(k, {1, 0, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Melee, 0, 0},
                           CombatStyle::Melee),
            7);
  // advantage 1.5: round(10.5) = 11 (half away from zero)
  EXPECT_EQ(resolve_combat(k, {1, 0, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Ranged, 0, 0},
                           CombatStyle::Melee),
            11);
  // disadvantage 0.67: round(4.69) = 5
  EXPECT_EQ(resolve_combat(k, {1, 0, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Magic, 0, 0},
                           CombatStyle::Melee),
            5);
  // level 3, tier 2, armor 2: (5 + 6 + 6) - 4 = 13
  EXPECT_EQ(resolve_combat(k, {3, 2, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Melee, 2, 0},
                           CombatStyle::Melee),
            13);
}

TEST(Combat, ImmunityAndArmorFloorAtZero) {
  const CombatConstants k;
  EXPECT_EQ(resolve_combat(k, {10, 10, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Ranged, 0, 3},
                           CombatStyle::Melee),
            0);
  EXPECT_EQ(resolve_combat(k, {1, 0, CombatStyle::Melee, 0, 0}, {1, 0, CombatStyle::Melee, 10, 0},
                           CombatStyle::Melee),
            0);
  EXPECT_EQ(compute_damage(1.0, 1.0, 5.0), 0);
}

TEST(Combat, Ranges) {
  const CombatConstants k;
  EXPECT_EQ(k.range(CombatStyle::Melee), 1);
  EXPECT_EQ(k.range(CombatStyle::Ranged), 3);
  EXPECT_EQ(k.range(CombatStyle::Magic), 4);
}

TEST(Actions, EncodeDecodeRoundTrip) {
  const std::vector<Action> actions = {act::Noop{},
                                       act::Move{Direction::West},
                                       act::Attack{CombatStyle::Magic, 7},
                                       act::Use{3},
                                       act::Sell{2, 15},
                                       act::Buy{5},
                                       act::GiveItem{1, 4},
                                       act::GiveGold{9, 2}};
  std::set<std::uint32_t> codes;
  for (const Action& a : actions) {
    const auto code = encode_action(a);
    EXPECT_EQ(decode_action(code), a) << describe(a);
    codes.insert(code);
  }
  EXPECT_EQ(codes.size(), actions.size());
}

TEST(Map, DeterministicPerSeed) {
  EXPECT_EQ(generate_map(3, 32), generate_map(3, 32));
  EXPECT_FALSE(generate_map(3, 32) == generate_map(4, 32));
}

TEST(Map, BorderSpawnRingAndCoverage) {
  const MapGrid m = generate_map(11, 64);
  for (std::int32_t i = 0; i < 64; ++i) {
    EXPECT_EQ(m.at({0, i}).terrain, TerrainKind::Water);
    EXPECT_EQ(m.at({63, i}).terrain, TerrainKind::Water);
    EXPECT_EQ(m.at({i, 0}).terrain, TerrainKind::Water);
    EXPECT_EQ(m.at({i, 63}).terrain, TerrainKind::Water);
  }
  ASSERT_GE(m.spawn_tiles().size(), 128u);
  std::set<Position> unique(m.spawn_tiles().begin(), m.spawn_tiles().end());
  EXPECT_EQ(unique.size(), m.spawn_tiles().size());
  for (Position p : m.spawn_tiles()) EXPECT_EQ(m.at(p).terrain, TerrainKind::Spawn);
  const auto want = static_cast<std::size_t>(0.05 * 64 * 64);
  EXPECT_GE(m.count(TerrainKind::Forest), want);
  EXPECT_GE(m.count(TerrainKind::Water), want);
}

TEST(Map, TooSmallThrows) { EXPECT_THROW(generate_map(1, kMinMapSize - 1), ConfigError); }

TEST(Map, ValueNoiseRange) {
  for (int i = 0; i < 200; ++i) {
    const double v = value_noise(5, i * 0.37, i * 1.3, 4.0);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

}  // namespace
}  // namespace arena
