#include "arena/observation.hpp"

namespace arena {
namespace {

template <typename Row>
void append_rows(std::vector<float>& out, const std::vector<Row>& rows) {
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
}

void append_mask(std::vector<float>& out, const std::vector<std::uint8_t>& mask) {
  for (auto m : mask) out.push_back(m ? 1.0f : 0.0f);
}

}  // namespace

ObservationLayout observation_layout(std::int32_t radius, std::int32_t entity_capacity,
                                     std::int32_t inventory_capacity, std::int32_t market_top_k,
                                     std::int32_t embedding_dim) {
  ObservationLayout l;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  l.tile_cells = side * side;
  l.entity_rows = static_cast<std::size_t>(entity_capacity);
  l.inventory_rows = static_cast<std::size_t>(inventory_capacity);
  l.market_rows = static_cast<std::size_t>(market_top_k);
  l.embedding_dim = static_cast<std::size_t>(embedding_dim);

  std::size_t off = 0;
  auto take = [&off](std::size_t n) {
    const std::size_t at = off;
    off += n;
    return at;
  };
  l.tile_terrain = take(l.tile_cells);
  l.tile_resource = take(l.tile_cells);
  l.tile_mask = take(l.tile_cells);
  l.entities = take(l.entity_rows * kEntityFeatures);
  l.entity_mask = take(l.entity_rows);
  l.inventory = take(l.inventory_rows * kInventoryFeatures);
  l.inventory_mask = take(l.inventory_rows);
  l.market = take(l.market_rows * kMarketFeatures);
  l.market_mask = take(l.market_rows);
  l.self = take(kSelfFeatures);
  l.task_embedding = take(l.embedding_dim);
  l.total = off;
  return l;
}

std::vector<float> flatten(const Observation& obs) {
  const ObservationLayout l = observation_layout(
      obs.radius, static_cast<std::int32_t>(obs.entities.size()), static_cast<std::int32_t>(obs.inventory.size()),
      static_cast<std::int32_t>(obs.market.size()), static_cast<std::int32_t>(obs.task_embedding.size()));
  std::vector<float> out;
  out.reserve(l.total);
  out.insert(out.end(), obs.tile_terrain.begin(), obs.tile_terrain.end());
  out.insert(out.end(), obs.tile_resource.begin(), obs.tile_resource.end());
  append_mask(out, obs.tile_mask);
  append_rows(out, obs.entities);
  append_mask(out, obs.entity_mask);
  append_rows(out, obs.inventory);
  append_mask(out, obs.inventory_mask);
  append_rows(out, obs.market);
  append_mask(out, obs.market_mask);
  out.insert(out.end(), obs.self.begin(), obs.self.end());
  out.insert(out.end(), obs.task_embedding.begin(), obs.task_embedding.end());
  return out;
}

}  // namespace arena
