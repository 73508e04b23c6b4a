#include "arena/rollout.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace arena {
namespace {

constexpr char kMagic[8] = {'A', 'R', 'B', 'A', 'T', 'C', 'H', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T v) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(v);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>(u & 0xff);
    u = static_cast<U>(u >> 8);
  }
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ConfigError("batch dump truncated");
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8) | bytes[i]);
  return static_cast<T>(u);
}

}  // namespace

RolloutBuffer::RolloutBuffer(std::size_t block_size) : block_size_(block_size) {
  if (block_size_ == 0) throw ConfigError("rollout block size must be >= 1");
}

void RolloutBuffer::record_tick(Tick tick, std::span<const Transition> live) {
  if (finished_) throw std::logic_error("record_tick after finish");
  if (any_tick_ && tick <= last_tick_) {
    throw ConfigError("tick " + std::to_string(tick) + " does not follow " + std::to_string(last_tick_));
  }

  std::vector<Transition> sorted(live.begin(), live.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Transition& a, const Transition& b) { return a.agent_id < b.agent_id; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Transition& t = sorted[i];
    if (t.tick != tick) throw ConfigError("transition tick differs from recorded tick " + std::to_string(tick));
    if (t.agent_id < 0) throw ConfigError("negative agent id");
    if (i > 0 && sorted[i - 1].agent_id == t.agent_id) {
      throw ConfigError("agent " + std::to_string(t.agent_id) + " recorded twice at tick " + std::to_string(tick));
    }
    const auto a = static_cast<std::size_t>(t.agent_id);
    if (a < done_agents_.size() && done_agents_[a]) {
      throw ConfigError("agent " + std::to_string(t.agent_id) + " recorded after its done transition");
    }
  }

  for (const Transition& t : sorted) {
    if (blocks_.empty() || blocks_.back().size() == block_size_) {
      blocks_.emplace_back();
      blocks_.back().reserve(block_size_);
    }
    blocks_.back().push_back(t);
    if (t.done) {
      const auto a = static_cast<std::size_t>(t.agent_id);
      if (a >= done_agents_.size()) done_agents_.resize(a + 1, 0);
      done_agents_[a] = 1;
    }
  }
  size_ += sorted.size();
  live_counts_.push_back({tick, static_cast<std::int32_t>(sorted.size())});
  any_tick_ = true;
  last_tick_ = tick;
}

FlatBatch RolloutBuffer::finish() {
  if (finished_) throw std::logic_error("rollout buffer already finished");
  if (!any_tick_) throw ConfigError("cannot finish an empty rollout buffer");
  finished_ = true;

  FlatBatch b;
  b.transitions_.reserve(size_);
  for (auto& block : blocks_) {
    b.transitions_.insert(b.transitions_.end(), block.begin(), block.end());
  }
  blocks_.clear();
  blocks_.shrink_to_fit();
  for (const Transition& t : b.transitions_) b.index_[t.agent_id].push_back(t.tick);
  b.live_counts_ = std::move(live_counts_);
  return b;
}

std::vector<Transition> DenseGrid::compacted() const {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (mask[i]) out.push_back(cells[i]);
  }
  return out;
}

DenseGrid padded_oracle(const EpisodeTrace& trace, std::int32_t num_agents, std::int32_t num_ticks) {
  if (num_agents < 1 || num_ticks < 1) throw ConfigError("oracle grid needs at least one agent and tick");
  DenseGrid g;
  g.num_agents = num_agents;
  g.num_ticks = num_ticks;
  const auto cells = static_cast<std::size_t>(num_agents) * static_cast<std::size_t>(num_ticks);
  g.cells.assign(cells, Transition{});
  g.mask.assign(cells, 0);
  for (const TickRecord& rec : trace) {
    if (rec.tick < 0 || rec.tick >= num_ticks) throw ConfigError("trace tick outside the oracle grid");
    for (const Transition& t : rec.live) {
      if (t.agent_id < 0 || t.agent_id >= num_agents) throw ConfigError("trace agent outside the oracle grid");
      const std::size_t k = g.at(t.agent_id, rec.tick);
      g.cells[k] = t;
      g.mask[k] = 1;
    }
  }
  return g;
}

double padding_fraction(const DenseGrid& grid, Tick begin, Tick end) {
  if (begin < 0 || end > grid.num_ticks || begin >= end) throw ConfigError("invalid padding tick range");
  std::size_t live = 0;
  const std::size_t lo = grid.at(0, begin);
  const std::size_t hi = grid.at(0, end);
  for (std::size_t i = lo; i < hi; ++i) live += grid.mask[i];
  return 1.0 - static_cast<double>(live) / static_cast<double>(hi - lo);
}

FlatBatch collect(const EpisodeTrace& trace, std::size_t block_size) {
  RolloutBuffer buf(block_size);
  for (const TickRecord& rec : trace) buf.record_tick(rec.tick, rec.live);
  return buf.finish();
}

void write_batch_dump(std::ostream& out, const FlatBatch& batch) {
  const auto& ts = batch.transitions();
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, ts.size());
  put_le<std::uint64_t>(out, batch.live_counts().size());
  for (const auto& t : ts) put_le<std::int32_t>(out, t.tick);
  for (const auto& t : ts) put_le<std::int32_t>(out, t.agent_id);
  for (const auto& t : ts) put_le<std::uint32_t>(out, t.action);
  for (const auto& t : ts) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(t.reward));
  for (const auto& t : ts) put_le<std::uint8_t>(out, t.done ? 1 : 0);
  for (const auto& t : ts) put_le<std::uint64_t>(out, t.payload);
  for (const auto& lc : batch.live_counts()) {
    put_le<std::int32_t>(out, lc.tick);
    put_le<std::int32_t>(out, lc.live);
  }
}

FlatBatch read_batch_dump(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("not a batch dump");
  }
  if (get_le<std::uint32_t>(in) != kVersion) throw ConfigError("unsupported batch dump version");
  get_le<std::uint32_t>(in);
  const auto n = get_le<std::uint64_t>(in);
  const auto m = get_le<std::uint64_t>(in);

  FlatBatch b;
  b.transitions_.resize(n);
  for (auto& t : b.transitions_) t.tick = get_le<std::int32_t>(in);
  for (auto& t : b.transitions_) t.agent_id = get_le<std::int32_t>(in);
  for (auto& t : b.transitions_) t.action = get_le<std::uint32_t>(in);
  for (auto& t : b.transitions_) t.reward = std::bit_cast<double>(get_le<std::uint64_t>(in));
  for (auto& t : b.transitions_) t.done = get_le<std::uint8_t>(in) != 0;
  for (auto& t : b.transitions_) t.payload = get_le<std::uint64_t>(in);
  b.live_counts_.resize(m);
  for (auto& lc : b.live_counts_) {
    lc.tick = get_le<std::int32_t>(in);
    lc.live = get_le<std::int32_t>(in);
  }
  for (const Transition& t : b.transitions_) b.index_[t.agent_id].push_back(t.tick);
  return b;
}

}  // namespace arena
