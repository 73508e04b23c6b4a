#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "arena/types.hpp"

namespace arena {

struct Transition {
  AgentId agent_id = 0;
  Tick tick = 0;
  /// Opaque reference to the observation/value payload kept by the caller.
  std::uint64_t payload = 0;
  /// encode_action() code.
  std::uint32_t action = 0;
  double reward = 0.0;
  bool done = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct LiveCount {
  Tick tick = 0;
  std::int32_t live = 0;

  friend bool operator==(const LiveCount&, const LiveCount&) = default;
};

/// Sealed padding-free batch. Transitions are contiguous in (tick, agent_id)
/// order and contain no placeholders.
class FlatBatch {
 public:
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  std::size_t size() const noexcept { return transitions_.size(); }
  /// Ticks recorded for each agent, ascending.
  const std::map<AgentId, std::vector<Tick>>& index() const noexcept { return index_; }
  const std::vector<LiveCount>& live_counts() const noexcept { return live_counts_; }

 private:
  friend class RolloutBuffer;
  friend FlatBatch read_batch_dump(std::istream& in);

  std::vector<Transition> transitions_;
  std::map<AgentId, std::vector<Tick>> index_;
  std::vector<LiveCount> live_counts_;
};

/// Append-only collector. Storage grows in fixed-size blocks so allocation
/// tracks the number of live transitions, never agents x ticks.
class RolloutBuffer {
 public:
  static constexpr std::size_t kDefaultBlockSize = 1024;

  explicit RolloutBuffer(std::size_t block_size = kDefaultBlockSize);

  /// Throws ConfigError when `tick` is not greater than the previous one,
  /// an agent appears twice, a transition's tick differs from `tick`, or an
  /// agent already recorded its done transition. Throws std::logic_error
  /// after finish().
  void record_tick(Tick tick, std::span<const Transition> live);

  /// Throws ConfigError when nothing was recorded, std::logic_error when
  /// called twice.
  FlatBatch finish();

  std::size_t size() const noexcept { return size_; }
  /// Transition slots currently allocated.
  std::size_t capacity() const noexcept { return blocks_.size() * block_size_; }
  bool finished() const noexcept { return finished_; }

 private:
  std::size_t block_size_;
  std::vector<std::vector<Transition>> blocks_;
  std::size_t size_ = 0;
  std::vector<LiveCount> live_counts_;
  std::vector<std::uint8_t> done_agents_;
  bool any_tick_ = false;
  Tick last_tick_ = 0;
  bool finished_ = false;
};

/// What happened in one episode, tick by tick, as the collector saw it.
struct TickRecord {
  Tick tick = 0;
  std::vector<Transition> live;
};
using EpisodeTrace = std::vector<TickRecord>;

/// Zero-padded agents x ticks grid, tick-major.
struct DenseGrid {
  std::int32_t num_agents = 0;
  std::int32_t num_ticks = 0;
  std::vector<Transition> cells;
  std::vector<std::uint8_t> mask;

  std::size_t at(AgentId a, Tick t) const noexcept {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(num_agents) + static_cast<std::size_t>(a);
  }
  /// Mask-true cells in (tick, agent) order.
  std::vector<Transition> compacted() const;
};

/// Throws ConfigError when a trace entry falls outside the grid.
DenseGrid padded_oracle(const EpisodeTrace& trace, std::int32_t num_agents, std::int32_t num_ticks);

/// 1 - live cells / total cells over ticks [begin, end). Throws ConfigError
/// for an empty or out-of-range interval.
double padding_fraction(const DenseGrid& grid, Tick begin, Tick end);

/// Feeds a trace through a fresh RolloutBuffer.
FlatBatch collect(const EpisodeTrace& trace, std::size_t block_size = RolloutBuffer::kDefaultBlockSize);

/// Little-endian columnar dump:
///   magic "ARBATCH1" (8 bytes), u32 version = 1, u32 reserved = 0,
///   u64 transition count N, u64 live-count entries M,
///   i32 tick[N], i32 agent_id[N], u32 action[N], f64 reward[N], u8 done[N],
///   u64 payload[N], then M pairs of (i32 tick, i32 live).
void write_batch_dump(std::ostream& out, const FlatBatch& batch);
/// Inverse of write_batch_dump. Throws ConfigError on a malformed stream.
FlatBatch read_batch_dump(std::istream& in);

}  // namespace arena
