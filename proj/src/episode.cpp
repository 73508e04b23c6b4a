#include "arena/episode.hpp"

#include <memory>

#include "arena/map.hpp"
#include "arena/policy.hpp"
#include "arena/replay.hpp"

namespace arena {

Rng agent_rng(std::uint64_t seed, AgentId id) {
  return Rng(hash_combine(seed, 0x6167656e74ULL, static_cast<std::uint64_t>(id)));
}

EpisodeResult run_episode(const EpisodeSpec& spec, const EpisodeOptions& options) {
  const auto n = static_cast<std::size_t>(spec.env.num_agents);
  if (spec.tasks.size() != n) throw ConfigError("episode needs one task per agent");
  if (spec.policies.empty()) throw ConfigError("episode needs at least one policy");
  if (!spec.controller.empty() && spec.controller.size() != n) {
    throw ConfigError("episode controller list must have one entry per agent");
  }

  const PolicyOptions popts{spec.env.disable_giving};
  std::vector<std::unique_ptr<Policy>> policies;
  for (const std::string& name : spec.policies) {
    policies.push_back(make_policy(name, popts));
    policies.back()->reset(spec.seed);
  }
  std::vector<Policy*> driver(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t c = spec.controller.empty() ? 0 : spec.controller[i];
    if (c < 0 || c >= static_cast<std::int32_t>(policies.size())) throw ConfigError("controller index out of range");
    driver[i] = policies[static_cast<std::size_t>(c)].get();
  }

  std::vector<TaskAssignment> assignments(n);
  for (std::size_t i = 0; i < n; ++i) {
    assignments[i].agent_id = static_cast<AgentId>(i);
    assignments[i].task = spec.tasks[i];
  }
  auto [world, obs] = World::reset(spec.env, generate_map(spec.map_seed, spec.env.map_size), std::move(assignments),
                                   spec.seed, spec.groups);

  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rngs.push_back(agent_rng(spec.seed, static_cast<AgentId>(i)));

  std::optional<ReplayWriter> replay;
  if (options.replay) {
    replay.emplace(*options.replay);
    replay->header(world, spec.map_seed);
  }
  std::optional<RewardTracker> tracker;
  if (options.rewards) tracker.emplace(world);
  std::optional<RolloutBuffer> buffer;
  if (options.collect_rollout) buffer.emplace();

  EpisodeResult result;
  result.agents.resize(n);
  std::vector<Action> actions(n);
  std::vector<std::uint8_t> was_alive(n);
  std::vector<Transition> live;
  while (!world.done()) {
    const Tick t = world.tick();
    for (std::size_t i = 0; i < n; ++i) {
      was_alive[i] = world.agents()[i].alive;
      actions[i] = was_alive[i] ? driver[i]->act(obs[i], rngs[i]) : Action{act::Noop{}};
    }
    StepResult step = world.step(actions);
    obs = std::move(step.observations);

    std::vector<TickDelta> deltas;
    if (tracker) deltas = tracker->update(world, step.events);
    live.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!was_alive[i]) continue;
      ++result.agent_steps;
      const double r = tracker ? shaped_reward(*options.rewards, deltas[i]) : 0.0;
      result.agents[i].total_reward += r;
      if (buffer || options.keep_trace) {
        const auto id = static_cast<AgentId>(i);
        live.push_back({id, t, (static_cast<std::uint64_t>(t) << 32) | static_cast<std::uint32_t>(id),
                        encode_action(actions[i]), r, !world.agents()[i].alive || step.done});
      }
    }
    if (buffer) buffer->record_tick(t, live);
    if (options.keep_trace) result.trace.push_back({t, live});
    if (replay) replay->tick(world, step.events);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const TaskAssignment& a = world.assignments()[i];
    result.agents[i].progress = a.progress;
    result.agents[i].completed = a.completed;
    result.agents[i].lifespan = world.agents()[i].lifespan;
  }
  result.ticks = world.tick();
  result.final_hash = state_hash(world);
  result.diagnostics = world.diagnostics();
  if (buffer) result.batch = buffer->finish();
  return result;
}

}  // namespace arena
