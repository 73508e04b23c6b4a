#include "arena/replay.hpp"

#include <bit>
#include <cstdio>
#include <ostream>

#include "arena/json_io.hpp"

namespace arena {
namespace {

class ByteSink {
 public:
  template <typename T>
  void put(T v) {
    if constexpr (std::is_same_v<T, bool>) {
      bytes_.push_back(v ? 1 : 0);
    } else if constexpr (std::is_enum_v<T>) {
      bytes_.push_back(static_cast<std::uint8_t>(v));
    } else if constexpr (std::is_same_v<T, double>) {
      put(std::bit_cast<std::uint64_t>(v));
    } else {
      auto u = static_cast<std::make_unsigned_t<T>>(v);
      for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes_.push_back(static_cast<std::uint8_t>(u & 0xff));
        u = static_cast<decltype(u)>(u >> 8);
      }
    }
  }

  void put_item(const Item& it) {
    put(it.kind);
    put<std::uint8_t>(it.style ? static_cast<std::uint8_t>(*it.style) : 0xff);
    put(it.tier);
    put(it.quantity);
    put(it.equipped);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

}  // namespace

std::vector<std::uint8_t> serialize_state(const World& w) {
  ByteSink s;
  s.put<std::int32_t>(w.tick());
  s.put(w.done());

  const MapGrid& map = w.map();
  s.put<std::int32_t>(map.size());
  s.put<std::uint64_t>(map.seed());
  for (const Tile& t : map.tiles()) {
    s.put(t.terrain);
    s.put<std::int32_t>(t.resource_units);
  }

  s.put<std::uint32_t>(static_cast<std::uint32_t>(w.agents().size()));
  for (const AgentState& a : w.agents()) {
    s.put<std::int32_t>(a.id);
    s.put<std::int32_t>(a.group_id);
    s.put<std::int32_t>(a.pos.row);
    s.put<std::int32_t>(a.pos.col);
    s.put<std::int32_t>(a.health);
    s.put<std::int32_t>(a.food);
    s.put<std::int32_t>(a.water);
    s.put<std::int64_t>(a.gold);
    for (std::int64_t xp : a.skills.xp) s.put<std::int64_t>(xp);
    s.put(a.alive);
    s.put<std::int32_t>(a.spawn_immunity_remaining);
    s.put<std::int32_t>(a.lifespan);
    s.put(a.style);
    s.put<std::int64_t>(a.damage_dealt);
    s.put<std::int32_t>(a.kills);
    s.put<std::int64_t>(a.gold_earned);
    s.put<std::uint32_t>(static_cast<std::uint32_t>(a.inventory.size()));
    for (const Item& it : a.inventory) s.put_item(it);
  }

  s.put<std::uint32_t>(static_cast<std::uint32_t>(w.npcs().size()));
  for (const NpcState& n : w.npcs()) {
    s.put<std::int32_t>(n.id);
    s.put<std::int32_t>(n.pos.row);
    s.put<std::int32_t>(n.pos.col);
    s.put(n.disposition);
    s.put<std::int32_t>(n.health);
    s.put(n.style);
    s.put<std::int32_t>(n.level);
    s.put(n.alive);
    s.put<std::int32_t>(n.last_attacker);
  }

  s.put<std::uint32_t>(static_cast<std::uint32_t>(w.listings().size()));
  for (const MarketListing& l : w.listings()) {
    s.put<std::int64_t>(l.listing_id);
    s.put<std::int32_t>(l.seller_id);
    s.put_item(l.item);
    s.put<std::int64_t>(l.price);
    s.put<std::int32_t>(l.listed_tick);
  }
  s.put<std::int64_t>(w.next_listing_id());

  s.put<std::uint64_t>(w.event_log().size());
  for (const GameEvent& e : w.event_log()) {
    s.put<std::int32_t>(e.tick);
    s.put<std::int32_t>(e.agent_id);
    s.put(e.kind);
    s.put<std::int64_t>(e.value);
  }

  for (const TaskAssignment& t : w.assignments()) {
    s.put(t.progress);
    s.put(t.completed);
  }
  return s.take();
}

std::uint64_t state_hash(const World& world) {
  const auto bytes = serialize_state(world);
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json event_to_json(const GameEvent& e) {
  return {{"tick", e.tick}, {"agent", e.agent_id}, {"kind", std::string(to_string(e.kind))}, {"value", e.value}};
}

void ReplayWriter::header(const World& world, std::uint64_t map_seed, const nlohmann::json& extra) {
  nlohmann::json h = {{"type", "header"},
                      {"config", to_json(world.config())},
                      {"seed", world.seed()},
                      {"map_seed", map_seed},
                      {"num_agents", world.agents().size()},
                      {"num_npcs", world.npcs().size()}};
  std::vector<std::string> tasks;
  for (const TaskAssignment& t : world.assignments()) tasks.push_back(t.task.source_text);
  h["tasks"] = tasks;
  for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  out_ << h.dump() << '\n';
}

void ReplayWriter::tick(const World& world, const std::vector<GameEvent>& events) {
  nlohmann::json line;
  line["tick"] = world.tick();
  auto& ev = line["events"] = nlohmann::json::array();
  for (const GameEvent& e : events) ev.push_back(event_to_json(e));
  auto& agents = line["agents"] = nlohmann::json::array();
  for (const AgentState& a : world.agents()) {
    agents.push_back({{"id", a.id},
                      {"pos", {a.pos.row, a.pos.col}},
                      {"hp", a.health},
                      {"food", a.food},
                      {"water", a.water},
                      {"gold", a.gold},
                      {"alive", a.alive}});
  }
  auto& npcs = line["npcs"] = nlohmann::json::array();
  for (const NpcState& n : world.npcs()) {
    npcs.push_back({{"id", n.id},
                    {"pos", {n.pos.row, n.pos.col}},
                    {"hp", n.health},
                    {"level", n.level},
                    {"disposition", static_cast<int>(n.disposition)},
                    {"alive", n.alive}});
  }
  out_ << line.dump() << '\n';
}

}  // namespace arena
