// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails. Usage: arena_acceptance [GOLDEN_HASH_FILE]

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "arena/curriculum.hpp"
#include "arena/embedding.hpp"
#include "arena/episode.hpp"
#include "arena/map.hpp"
#include "arena/pca.hpp"
#include "arena/policy.hpp"
#include "arena/replay.hpp"
#include "arena/reward.hpp"
#include "arena/rollout.hpp"
#include "arena/run_config.hpp"
#include "arena/tournament.hpp"

namespace {

using namespace arena;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void check(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    o.pass = false;
    o.detail += " over budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s %-22s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int jobs_available() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Curriculum bundled(const char* name) { return load_task_file((bundled_data_dir() / "tasks" / name).string()); }

std::vector<TaskSpec> bundled_all() {
  auto all = bundled("train.tasks").tasks();
  const auto eval = bundled("eval.tasks").tasks();
  all.insert(all.end(), eval.begin(), eval.end());
  return all;
}

Outcome trial_arithmetic() {
  const PveConfig pve;
  const PvpConfig pvp;
  constexpr std::int64_t kEvalTasks = 63;
  const auto a = trials_per_task(static_cast<std::int64_t>(pve.episodes) * pve.env.num_agents, kEvalTasks);
  const auto b = trials_per_task(static_cast<std::int64_t>(pvp.episodes) * pvp.group_size, kEvalTasks);
  const auto lo_a = *std::min_element(a.begin(), a.end());
  const auto lo_b = *std::min_element(b.begin(), b.end());
  return {lo_a == 65 && lo_b == 44, fmt("pve=%lld pvp=%lld", static_cast<long long>(lo_a), static_cast<long long>(lo_b))};
}

Outcome pvp_structure() {
  PvpConfig c;
  c.tasks = bundled("eval.tasks").tasks();
  c.validate();
  const auto agents = c.num_groups * c.group_size + c.filler_agents;
  bool rejects = false;
  try {
    PvpConfig bad = c;
    bad.group_size = 13;
    bad.validate();
  } catch (const ConfigError&) {
    rejects = true;
  }
  return {agents == 128 && c.env.num_agents == 128 && c.total_episodes() == 1800 && rejects,
          fmt("agents=%d episodes=%lld rejects_mismatch=%d", agents, static_cast<long long>(c.total_episodes()),
              rejects)};
}

Outcome padding() {
  // 128 agents for 1024 ticks: all alive for the first quarter, a linear
  // die-off to 13 over the middle half, 13 alive in the last quarter.
  constexpr std::int32_t kAgents = 128, kTicks = 1024;
  EpisodeTrace trace;
  for (Tick t = 0; t < kTicks; ++t) {
    std::int32_t live = kAgents;
    if (t >= 256) live = std::max(13, kAgents - static_cast<std::int32_t>((t - 256) * (kAgents - 13) / 512));
    TickRecord rec{t, {}};
    for (AgentId a = 0; a < live; ++a) {
      const bool dies = t + 1 < kTicks && a >= 13 && t >= 256 &&
                        a >= std::max(13, kAgents - static_cast<std::int32_t>((t + 1 - 256) * (kAgents - 13) / 512));
      rec.live.push_back({a, t, static_cast<std::uint64_t>(t) << 8 | static_cast<std::uint64_t>(a), 0, 0.0, dies});
    }
    trace.push_back(std::move(rec));
  }
  const DenseGrid grid = padded_oracle(trace, kAgents, kTicks);
  const double pad = padding_fraction(grid, 3 * kTicks / 4, kTicks);
  bool same = collect(trace).transitions() == grid.compacted();

  Rng r(77);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    EnvConfig env;
    env.num_agents = 8 + static_cast<std::int32_t>(r.below(40));
    env.map_size = 32;
    env.num_npcs = static_cast<std::int32_t>(r.below(48));
    env.spawn_immunity_ticks = static_cast<std::int32_t>(r.below(10));
    const Tick ticks = 20 + static_cast<Tick>(r.below(180));
    const auto names = policy_names();
    const auto spec = simulate_spec(env, bundled("eval.tasks").tasks(), r.next(), ticks, names[r.below(names.size())]);
    EpisodeOptions o;
    o.collect_rollout = true;
    o.keep_trace = true;
    const auto res = run_episode(spec, o);
    const DenseGrid g = padded_oracle(res.trace, env.num_agents, ticks);
    if (res.batch->transitions() != g.compacted() || collect(res.trace, 1 + r.below(64)).transitions() != g.compacted()) {
      ++mismatches;
    }
  }
  same = same && mismatches == 0;
  return {std::abs(pad - 0.90) <= 0.01 && same, fmt("last_quarter_padding=%.4f oracle_mismatches=%d/100", pad, mismatches)};
}

Outcome progress() {
  AgentEpisodeState s(64);
  AgentState a;
  a.lifespan = 512;
  a.skills.xp[static_cast<int>(Skill::Ranged)] = xp_for_level(3);
  s.observe(a);
  const double tick = evaluate_progress(parse_predicate("TickGE(target=1024)"), s);
  const double skill = evaluate_progress(parse_predicate("AttainSkill(skill=Ranged, level=10)"), s);

  const auto tasks = bundled_all();
  Rng r(1234);
  std::int64_t violations = 0, out_of_range = 0;
  for (int trace = 0; trace < 1000; ++trace) {
    AgentEpisodeState st(64);
    AgentState ag;
    ag.pos = {static_cast<std::int32_t>(r.below(64)), static_cast<std::int32_t>(r.below(64))};
    std::vector<double> last(tasks.size(), 0.0);
    for (int step = 0; step < 60; ++step) {
      ++ag.lifespan;
      ag.pos.row = std::clamp(ag.pos.row + static_cast<std::int32_t>(r.range(-1, 1)), 0, 63);
      ag.pos.col = std::clamp(ag.pos.col + static_cast<std::int32_t>(r.range(-1, 1)), 0, 63);
      ag.gold = std::max<std::int64_t>(0, ag.gold + r.range(-8, 8));
      ag.gold_earned += static_cast<std::int64_t>(r.below(4));
      ag.skills.xp[r.below(kNumSkills)] += static_cast<std::int64_t>(r.below(60));
      if (r.below(3) == 0) {
        Item it;
        it.kind = static_cast<ItemKind>(r.below(kNumItemKinds));
        if (has_style(it.kind)) it.style = static_cast<CombatStyle>(r.below(kNumCombatStyles));
        it.tier = 1 + static_cast<std::int32_t>(r.below(kMaxTier));
        it.quantity = 1 + static_cast<std::int32_t>(r.below(3));
        it.equipped = r.below(2) == 0;
        ag.inventory.push_back(it);
      } else if (!ag.inventory.empty() && r.below(3) == 0) {
        ag.inventory.erase(ag.inventory.begin() + static_cast<std::ptrdiff_t>(r.below(ag.inventory.size())));
      }
      for (int e = static_cast<int>(r.below(3)); e > 0; --e) {
        const auto kind = static_cast<EventKind>(r.below(kNumEventKinds));
        st.record_event({ag.lifespan, 0, kind, static_cast<std::int64_t>(r.below(kNumItemKinds))});
      }
      st.observe(ag);
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        const double p = evaluate_progress(tasks[i].predicate, st);
        if (p < last[i]) ++violations;
        if (p < 0.0 || p > 1.0) ++out_of_range;
        last[i] = p;
      }
    }
  }
  return {tick == 0.5 && skill == 0.3 && violations == 0 && out_of_range == 0,
          fmt("tick=%.17g skill=%.17g violations=%lld out_of_range=%lld", tick, skill,
              static_cast<long long>(violations), static_cast<long long>(out_of_range))};
}

Outcome embedding() {
  const auto tasks = bundled_all();
  std::vector<EmbeddingVector> emb;
  for (const auto& t : tasks) emb.push_back(embed_task(t.source_text));
  double intra = 0, inter = 0;
  std::int64_t n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = i + 1; j < tasks.size(); ++j) {
      const double c = cosine_similarity(emb[i], emb[j]);
      if (tasks[i].predicate.kind == tasks[j].predicate.kind) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  const double gap = intra / static_cast<double>(n_intra) - inter / static_cast<double>(n_inter);

  const PcaResult corpus = pca_project(emb);
  double ortho = 0;
  for (std::size_t a = 0; a < corpus.components.size(); ++a) {
    for (std::size_t b = 0; b < corpus.components.size(); ++b) {
      ortho = std::max(ortho, std::abs(dot(corpus.components[a], corpus.components[b]) - (a == b ? 1.0 : 0.0)));
    }
  }

  Rng r(99);
  double oracle_err = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t d = 2 + r.below(7);
    const std::size_t n = d + 3 + r.below(20);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    for (auto& row : rows) {
      for (std::size_t k = 0; k < d; ++k) row[k] = r.uniform() * static_cast<double>(k + 1) + (k == 0 ? row[0] : 0.0);
    }
    const PcaResult p = pca_project(rows, {.k = 2, .tolerance = 1e-14, .max_iterations = 1000000});
    const auto cov = covariance(rows);
    Eigen::MatrixXd m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov[i][j];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (std::size_t c = 0; c < 2; ++c) {
      const auto col = static_cast<Eigen::Index>(d - 1 - c);
      double plus = 0, minus = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const double o = es.eigenvectors()(static_cast<Eigen::Index>(i), col);
        plus = std::max(plus, std::abs(p.components[c][i] - o));
        minus = std::max(minus, std::abs(p.components[c][i] + o));
      }
      oracle_err = std::max({oracle_err, std::min(plus, minus), std::abs(p.explained_variance[c] - es.eigenvalues()(col))});
    }
  }
  return {gap >= 0.1 && ortho <= 1e-6 && oracle_err <= 1e-6,
          fmt("tasks=%zu intra-inter=%.4f orthonormality_err=%.2e eigen_oracle_err=%.2e", tasks.size(), gap, ortho,
              oracle_err)};
}

Outcome overlap_check() {
  const Curriculum train = bundled("train.tasks");
  const Curriculum eval = bundled("eval.tasks");
  const double pred = overlap(train, eval, OverlapMode::Predicates);
  const double full = overlap(train, eval, OverlapMode::Full);

  const Curriculum mt = parse_task_file(
      "t1: TickGE(target=10)\n"
      "t2: DefeatEntity(n=1)\n"
      "t3: AttainSkill(skill=Melee, level=3)\n");
  struct Micro {
    const char* text;
    double pred, full;
  };
  const Micro micro[] = {
      {"e1: TickGE(target=10)\ne2: DefeatEntity(n=5)\n", 1.0, 0.5},
      {"e1: HoardGold(amount=5)\ne2: EarnGold(amount=5)\ne3: OccupyTile(row=1, col=1)\n"
       "e4: AttainSkill(skill=Magic, level=3)\n",
       0.25, 0.0},
      {"e1: AttainSkill(level=3, skill=Melee)\ne2: AttainSkill(skill=Melee, level=3)\ne3: TickGE(target=11)\n", 1.0,
       0.5},
  };
  int exact = 0;
  for (const Micro& m : micro) {
    const Curriculum e = parse_task_file(m.text);
    exact += overlap(mt, e, OverlapMode::Predicates) == m.pred && overlap(mt, e, OverlapMode::Full) == m.full;
  }
  return {full < pred && exact == 3, fmt("bundled predicates=%.4f full=%.4f micro_exact=%d/3", pred, full, exact)};
}

Outcome determinism(const std::string& golden_path) {
  std::ifstream in(golden_path);
  std::string golden;
  in >> golden;
  if (golden.empty()) return {false, "golden hash missing: " + golden_path};
  const RunConfig rc;
  const auto spec = simulate_spec(rc.env, load_task_file(rc.train_tasks.string()).tasks(), 42, rc.env.max_ticks,
                                  "forage");
  std::ostringstream replay;
  EpisodeOptions o;
  o.replay = &replay;
  const std::string got = hash_hex(run_episode(spec, o).final_hash);

  PveConfig pc;
  pc.env.num_agents = 32;
  pc.env.map_size = 32;
  pc.env.num_npcs = 16;
  pc.env.max_ticks = 96;
  pc.episodes = 8;
  pc.tasks = bundled("eval.tasks").tasks();
  Rng r(2024);
  const auto names = policy_names();
  int differing = 0;
  for (int i = 0; i < 20; ++i) {
    pc.master_seed = r.next();
    const std::string& policy = names[static_cast<std::size_t>(i) % names.size()];
    pc.jobs = 1;
    const std::string one = to_json(run_pve(policy, pc)).dump();
    pc.jobs = 8;
    const std::string eight = to_json(run_pve(policy, pc)).dump();
    differing += one != eight;
  }
  return {got == golden && differing == 0,
          fmt("seed42=%s golden=%s jobs1_vs_jobs8_differing=%d/20", got.c_str(), golden.c_str(), differing)};
}

Outcome conservation() {
  const Curriculum tasks = bundled("train.tasks");
  const std::vector<std::string> mix{"marketeer", "marketeer", "random", "forage", "warrior"};
  Rng r(555);
  std::int64_t gold_breaks = 0, item_breaks = 0, meter_breaks = 0, trades = 0;
  for (int ep = 0; ep < 200; ++ep) {
    EnvConfig env;
    env.num_agents = 16;
    env.map_size = 32;
    env.num_npcs = static_cast<std::int32_t>(r.below(16));
    env.max_ticks = 150;
    env.spawn_immunity_ticks = 5;
    const std::uint64_t seed = r.next();
    World w = World::reset(env, generate_map(seed ^ 0x5a5a, env.map_size),
                           sample_assignments(tasks, env.num_agents, seed), seed)
                  .world;
    std::vector<std::unique_ptr<Policy>> pol;
    std::vector<Rng> rngs;
    for (AgentId a = 0; a < env.num_agents; ++a) {
      pol.push_back(make_policy(mix[static_cast<std::size_t>(a) % mix.size()]));
      pol.back()->reset(seed);
      rngs.push_back(agent_rng(seed, a));
    }
    const std::int64_t gold0 = w.total_gold();
    const std::int64_t items0 = w.total_item_units();
    auto obs = w.observe_all();
    while (!w.done()) {
      std::vector<Action> acts(static_cast<std::size_t>(env.num_agents), act::Noop{});
      for (AgentId a = 0; a < env.num_agents; ++a) {
        const auto i = static_cast<std::size_t>(a);
        if (obs[i].alive()) acts[i] = pol[i]->act(obs[i], rngs[i]);
      }
      auto res = w.step(acts);
      for (const auto& e : res.events) trades += e.kind == EventKind::BuyItem;
      gold_breaks += w.total_gold() != gold0;
      const auto& d = w.diagnostics();
      item_breaks += w.total_item_units() != items0 + d.items_created - d.items_destroyed;
      for (const AgentState& a : w.agents()) {
        for (const std::int32_t v : {a.health, a.food, a.water}) meter_breaks += v < 0 || v > 100;
      }
      obs = std::move(res.observations);
    }
  }
  return {gold_breaks == 0 && item_breaks == 0 && meter_breaks == 0 && trades > 0,
          fmt("gold_breaks=%lld item_breaks=%lld meter_breaks=%lld trades=%lld", static_cast<long long>(gold_breaks),
              static_cast<long long>(item_breaks), static_cast<long long>(meter_breaks),
              static_cast<long long>(trades))};
}

Outcome reward_presets() {
  double max_err = 0;
  TickDelta d;
  d.hp = -6;
  d.gold = 4;
  d.defense = 2;
  d.max_xp = 13;
  d.damage_dealt = 9;
  d.new_event_types = 2;
  d.progress = 0.375;
  d.recovered = true;
  double RewardConfig::*coefs[] = {&RewardConfig::task_progress_coef, &RewardConfig::hp_delta_coef,
                                   &RewardConfig::event_bonus_per_new_event_type, &RewardConfig::gold_delta_coef,
                                   &RewardConfig::defense_coef, &RewardConfig::attack_coef,
                                   &RewardConfig::experience_coef, &RewardConfig::health_recovery_bonus};
  const double terms[] = {d.progress, d.hp, 2.0, d.gold, d.defense, d.damage_dealt, d.max_xp, 1.0};
  for (const auto& name : reward_preset_names()) {
    const RewardConfig base = reward_preset(name);
    const double r0 = shaped_reward(base, d);
    for (std::size_t i = 0; i < std::size(coefs); ++i) {
      for (const double step : {0.01, 0.02, -0.03}) {
        RewardConfig c = base;
        c.*coefs[i] += step;
        max_err = std::max(max_err, std::abs(shaped_reward(c, d) - r0 - step * terms[i]));
      }
    }
  }
  const RewardConfig def = reward_preset("default");
  TickDelta hit;
  hit.hp = -10;
  TickDelta done;
  done.completed_now = true;
  const double h = shaped_reward(def, hit), c = shaped_reward(def, done);
  return {max_err <= 1e-12 && std::abs(h + 0.05) <= 1e-12 && std::abs(c - 3.0) <= 1e-12,
          fmt("linearity_err=%.2e hp(-10)=%.15g completion=%.15g", max_err, h, c)};
}

Outcome scripted_policies() {
  const RunConfig rc;
  const auto eval = load_task_file(rc.eval_tasks.string()).tasks();
  PveConfig pc = make_pve_config(rc, eval);
  pc.episodes = 10;
  pc.master_seed = 7;
  pc.jobs = jobs_available();
  const ScoreReport forage = run_pve("forage", pc);
  const ScoreReport random = run_pve("random", pc);
  const ScoreReport warrior = run_pve("warrior", pc);
  const auto cats = default_categories(eval);
  std::int64_t combat = 0;
  for (const auto& t : warrior.per_task) {
    if (cats.at(t.name) == Category::Combat) combat += t.completions;
  }
  const double f = completion_rate(forage), rr = completion_rate(random);
  return {f > rr && combat >= 1,
          fmt("forage=%.2f%% random=%.2f%% warrior=%.2f%% warrior_combat_completions=%lld", f, rr,
              completion_rate(warrior), static_cast<long long>(combat))};
}

Outcome spearman_check() {
  const std::vector<double> a{1, 2, 3, 4};
  const double s1 = spearman(a, std::vector<double>{1, 3, 2, 4});
  const double s2 = spearman(a, a);
  const double s3 = spearman(a, std::vector<double>{4, 3, 2, 1});
  return {std::abs(s1 - 0.8) <= 1e-12 && s2 == 1.0 && s3 == -1.0, fmt("%.15g %.15g %.15g", s1, s2, s3)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string golden = argc > 1 ? argv[1] : "tests/golden/canonical_seed42.hash";
  check("trial-arithmetic", 1.0, trial_arithmetic);
  check("pvp-structure", 0, pvp_structure);
  check("padding", 30.0, padding);
  check("progress", 0, progress);
  check("embedding-pca", 10.0, embedding);
  check("overlap", 0, overlap_check);
  check("determinism", 0, [&] { return determinism(golden); });
  check("conservation-fuzz", 0, conservation);
  check("reward-presets", 0, reward_presets);
  check("scripted-policies", 300.0, scripted_policies);
  check("spearman", 0, spearman_check);
  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
