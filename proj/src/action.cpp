#include "arena/action.hpp"

#include <algorithm>

namespace arena {
namespace {

constexpr std::uint32_t kArg0Max = 0xff;
constexpr std::uint32_t kArg1Max = 0xfffff;

std::uint32_t sat(std::int64_t v, std::uint32_t max) {
  return static_cast<std::uint32_t>(std::clamp<std::int64_t>(v, 0, max));
}

std::uint32_t pack(std::size_t kind, std::int64_t a0, std::int64_t a1) {
  return static_cast<std::uint32_t>(kind) | (sat(a0, kArg0Max) << 4) | (sat(a1, kArg1Max) << 12);
}

}  // namespace

std::uint32_t encode_action(const Action& a) {
  const std::size_t k = a.index();
  return std::visit(
      [k](const auto& x) -> std::uint32_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, act::Noop>) return pack(k, 0, 0);
        if constexpr (std::is_same_v<T, act::Move>) return pack(k, static_cast<int>(x.direction), 0);
        if constexpr (std::is_same_v<T, act::Attack>) return pack(k, static_cast<int>(x.style), x.target_slot);
        if constexpr (std::is_same_v<T, act::Use>) return pack(k, x.inventory_slot, 0);
        if constexpr (std::is_same_v<T, act::Sell>) return pack(k, x.inventory_slot, x.price);
        if constexpr (std::is_same_v<T, act::Buy>) return pack(k, x.market_slot, 0);
        if constexpr (std::is_same_v<T, act::GiveItem>) return pack(k, x.inventory_slot, x.target_slot);
        if constexpr (std::is_same_v<T, act::GiveGold>) return pack(k, x.target_slot, x.amount);
      },
      a);
}

Action decode_action(std::uint32_t code) {
  const std::uint32_t k = code & 0xf;
  const auto a0 = static_cast<std::int32_t>((code >> 4) & kArg0Max);
  const auto a1 = static_cast<std::int32_t>((code >> 12) & kArg1Max);
  switch (k) {
    case 1: return act::Move{static_cast<Direction>(a0 & 3)};
    case 2: return act::Attack{static_cast<CombatStyle>(std::min(a0, 2)), a1};
    case 3: return act::Use{a0};
    case 4: return act::Sell{a0, a1};
    case 5: return act::Buy{a0};
    case 6: return act::GiveItem{a0, a1};
    case 7: return act::GiveGold{a1, a0};
    default: return act::Noop{};
  }
}

std::string describe(const Action& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, act::Noop>) return "Noop";
        if constexpr (std::is_same_v<T, act::Move>) {
          static constexpr const char* kDirs[] = {"N", "E", "S", "W"};
          return std::string("Move(") + kDirs[static_cast<int>(x.direction)] + ")";
        }
        if constexpr (std::is_same_v<T, act::Attack>)
          return "Attack(" + std::string(to_string(x.style)) + "," + std::to_string(x.target_slot) + ")";
        if constexpr (std::is_same_v<T, act::Use>) return "Use(" + std::to_string(x.inventory_slot) + ")";
        if constexpr (std::is_same_v<T, act::Sell>)
          return "Sell(" + std::to_string(x.inventory_slot) + "," + std::to_string(x.price) + ")";
        if constexpr (std::is_same_v<T, act::Buy>) return "Buy(" + std::to_string(x.market_slot) + ")";
        if constexpr (std::is_same_v<T, act::GiveItem>)
          return "GiveItem(" + std::to_string(x.inventory_slot) + "," + std::to_string(x.target_slot) + ")";
        if constexpr (std::is_same_v<T, act::GiveGold>)
          return "GiveGold(" + std::to_string(x.amount) + "," + std::to_string(x.target_slot) + ")";
      },
      a);
}

}  // namespace arena
