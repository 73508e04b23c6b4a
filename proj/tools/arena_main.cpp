#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "arena/curriculum.hpp"
#include "arena/embedding.hpp"
#include "arena/episode.hpp"
#include "arena/pca.hpp"
#include "arena/replay.hpp"
#include "arena/rollout.hpp"
#include "arena/run_config.hpp"
#include "arena/tournament.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::int32_t jobs = 1;
  std::string out;
};

arena::RunConfig load(const Common& c) {
  arena::RunConfig rc = c.config.empty() ? arena::RunConfig{} : arena::load_run_config(c.config);
  if (c.seed) rc.master_seed = *c.seed;
  if (!c.out.empty()) rc.output_dir = c.out;
  if (c.jobs < 1) throw arena::ConfigError("--jobs must be >= 1");
  return rc;
}

std::vector<arena::TaskSpec> load_tasks(const fs::path& path) {
  if (!fs::exists(path)) throw arena::ConfigError("task file not found: " + path.string());
  arena::Curriculum c = arena::load_task_file(path.string());
  if (c.empty()) throw arena::ConfigError("task file has no tasks: " + path.string());
  return c.tasks();
}

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw arena::ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  spdlog::info("wrote {}", path.string());
}

void configure_logging() {
  spdlog::set_default_logger(spdlog::stderr_color_st("arena"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("ARENA_LOG")) {
    const auto level = spdlog::level::from_str(lvl);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string_view(lvl) != "off") {
      throw arena::ConfigError(std::string("ARENA_LOG: unknown level '") + lvl + "'");
    }
    spdlog::set_level(level);
  }
}

// simulate

struct SimulateArgs {
  arena::Tick ticks = -1;
  std::string policy = "forage";
  std::string replay;
};

int cmd_simulate(const Common& common, const SimulateArgs& a) {
  const arena::RunConfig rc = load(common);
  const arena::Tick ticks = a.ticks < 0 ? rc.env.max_ticks : a.ticks;
  const arena::EpisodeSpec spec =
      arena::simulate_spec(rc.env, load_tasks(rc.train_tasks), rc.master_seed, ticks, a.policy);

  const fs::path replay_path = a.replay.empty() ? rc.output_dir / "replay.jsonl" : fs::path(a.replay);
  if (replay_path.has_parent_path()) fs::create_directories(replay_path.parent_path());
  std::ofstream replay(replay_path);
  if (!replay) throw arena::ConfigError("cannot write " + replay_path.string());

  arena::EpisodeOptions opts;
  opts.rewards = rc.rewards;
  opts.replay = &replay;
  const arena::EpisodeResult r = arena::run_episode(spec, opts);
  spdlog::info("simulated {} ticks, {} agent steps", r.ticks, r.agent_steps);
  std::cout << arena::hash_hex(r.final_hash) << '\n';
  return 0;
}

// eval

struct EvalArgs {
  std::string mode = "both";
  std::optional<std::int32_t> pve_episodes;
  std::optional<std::int32_t> pvp_episodes;
  std::optional<std::int32_t> rounds;
  std::optional<arena::Tick> ticks;
};

std::string pct(std::optional<double> v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *v;
  return s.str();
}

int cmd_eval(const Common& common, const EvalArgs& a) {
  arena::RunConfig rc = load(common);
  if (a.pve_episodes) rc.pve_episodes = *a.pve_episodes;
  if (a.pvp_episodes) rc.pvp_episodes = *a.pvp_episodes;
  if (a.rounds) rc.pvp_rounds = *a.rounds;
  if (a.ticks) rc.env.max_ticks = *a.ticks;
  rc.env.validate();
  if (rc.roster.empty()) throw arena::ConfigError("tournament.roster is empty");
  const auto tasks = load_tasks(rc.eval_tasks);

  // Roster plus the baseline if it is not already listed.
  std::vector<std::string> entrants = rc.roster;
  if (std::find(entrants.begin(), entrants.end(), rc.baseline) == entrants.end()) entrants.push_back(rc.baseline);

  const bool do_pve = a.mode == "pve" || a.mode == "both";
  const bool do_pvp = a.mode == "pvp" || a.mode == "both";

  json report = {{"mode", a.mode}, {"master_seed", rc.master_seed}, {"config", arena::to_json(rc)}};
  std::map<std::string, double> pve_rate;
  std::map<std::string, double> pvp_rate;
  std::optional<double> pvp_baseline;

  if (do_pve) {
    arena::PveConfig pc = arena::make_pve_config(rc, tasks);
    pc.jobs = common.jobs;
    json pve = json::object();
    for (const std::string& p : entrants) {
      spdlog::info("pve: {}", p);
      const arena::ScoreReport r = arena::run_pve(p, pc);
      pve_rate[p] = arena::completion_rate(r);
      pve[p] = arena::to_json(r);
    }
    report["pve"] = pve;
  }

  if (do_pvp) {
    std::vector<std::string> eligible;
    for (const std::string& p : rc.roster) {
      if (!do_pve || pve_rate.at(p) >= pve_rate.at(rc.baseline)) eligible.push_back(p);
    }
    if (eligible.empty()) throw arena::ConfigError("no policy reaches the baseline's PvE completion rate");
    arena::PvpConfig pc = arena::make_pvp_config(rc, tasks);
    pc.jobs = common.jobs;
    std::vector<std::string> slots;
    for (std::int32_t g = 0; g < pc.num_groups; ++g) {
      slots.push_back(eligible[static_cast<std::size_t>(g) % eligible.size()]);
    }
    spdlog::info("pvp: {} slots over {} policies", slots.size(), eligible.size());
    const arena::ScoreReport r = arena::run_pvp(slots, rc.baseline, pc);
    for (const auto& s : arena::merge_by_policy(r.per_policy)) pvp_rate[s.policy] = s.completion_rate();
    if (r.baseline && r.baseline->trials > 0) pvp_baseline = r.baseline->completion_rate();
    report["pvp"] = arena::to_json(r);
    report["pvp_entrants"] = eligible;
  }

  json table = json::array();
  std::cout << std::left << std::setw(16) << "policy" << std::right << std::setw(10) << "PvE%" << std::setw(10)
            << "PvP%" << '\n';
  auto row = [&](const std::string& label, std::optional<double> pve, std::optional<double> pvp) {
    std::cout << std::left << std::setw(16) << label << std::right << std::setw(10) << pct(pve) << std::setw(10)
              << pct(pvp) << '\n';
    table.push_back({{"policy", label},
                     {"pve", pve ? json(*pve) : json(nullptr)},
                     {"pvp", pvp ? json(*pvp) : json(nullptr)}});
  };
  auto lookup = [](const std::map<std::string, double>& m, const std::string& k) -> std::optional<double> {
    auto it = m.find(k);
    return it == m.end() ? std::nullopt : std::optional<double>(it->second);
  };
  for (const std::string& p : rc.roster) row(p, lookup(pve_rate, p), lookup(pvp_rate, p));
  row("baseline(" + rc.baseline + ")", lookup(pve_rate, rc.baseline), pvp_baseline);
  report["table"] = table;

  write_json(rc.output_dir / "eval_report.json", report);
  return 0;
}

// tasks

struct TasksArgs {
  std::string embed;
  bool overlap = false;
  bool pca = false;
};

int cmd_tasks(const Common& common, const TasksArgs& a) {
  const arena::RunConfig rc = load(common);
  if (a.embed.empty() && !a.overlap && !a.pca) throw arena::ConfigError("tasks needs --embed, --overlap or --pca");
  fs::create_directories(rc.output_dir);

  if (!a.embed.empty()) {
    const auto tasks = load_tasks(a.embed);
    const fs::path path = rc.output_dir / "embeddings.csv";
    std::ofstream out(path);
    out << "task_name,predicate";
    for (std::size_t d = 0; d < static_cast<std::size_t>(rc.env.task_embedding_dim); ++d) out << ",e" << d;
    out << '\n' << std::setprecision(17);
    for (const auto& t : tasks) {
      out << t.name << ',' << arena::to_string(t.predicate.kind);
      for (double v : arena::embed_task(t.source_text, static_cast<std::size_t>(rc.env.task_embedding_dim))) {
        out << ',' << v;
      }
      out << '\n';
    }
    std::cout << "embedded " << tasks.size() << " tasks -> " << path.string() << '\n';
  }

  if (a.overlap) {
    const arena::Curriculum train(load_tasks(rc.train_tasks));
    const arena::Curriculum eval(load_tasks(rc.eval_tasks));
    const double pred = arena::overlap(train, eval, arena::OverlapMode::Predicates);
    const double full = arena::overlap(train, eval, arena::OverlapMode::Full);
    std::cout << std::fixed << std::setprecision(4) << "overlap predicates " << pred << '\n'
              << "overlap full       " << full << '\n';
    std::cout.unsetf(std::ios::fixed);
    write_json(rc.output_dir / "overlap.json", {{"predicates", pred}, {"full", full}});
  }

  if (a.pca) {
    auto tasks = load_tasks(rc.train_tasks);
    const auto eval = load_tasks(rc.eval_tasks);
    tasks.insert(tasks.end(), eval.begin(), eval.end());
    std::vector<std::vector<double>> vecs;
    for (const auto& t : tasks) {
      vecs.push_back(arena::embed_task(t.source_text, static_cast<std::size_t>(rc.env.task_embedding_dim)));
    }
    const arena::PcaResult p = arena::pca_project(vecs);
    std::vector<arena::PcaRow> rows;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      rows.push_back({tasks[i].name, std::string(arena::to_string(tasks[i].predicate.kind)), p.projected[i][0],
                      p.projected[i][1]});
    }
    const fs::path path = rc.output_dir / "pca.csv";
    std::ofstream out(path);
    arena::write_pca_csv(out, rows);
    std::cout << "pca of " << rows.size() << " tasks -> " << path.string() << '\n';
  }
  return 0;
}

// bench

struct BenchArgs {
  std::int32_t episodes = 1;
  std::string policy = "forage";
  arena::Tick ticks = -1;
  bool deterministic = false;
  bool dump = false;
};

int cmd_bench(const Common& common, const BenchArgs& a) {
  if (a.episodes < 1) throw arena::ConfigError("--episodes must be >= 1");
  const arena::RunConfig rc = load(common);
  const auto tasks = load_tasks(rc.train_tasks);
  const arena::Tick ticks = a.ticks < 0 ? rc.env.max_ticks : a.ticks;

  std::int64_t steps = 0;
  std::int64_t dense_cells = 0;
  std::int64_t flat = 0;
  double seconds = 0.0;
  json per_episode = json::array();
  for (std::int32_t e = 0; e < a.episodes; ++e) {
    const std::uint64_t seed = arena::hash_combine(rc.master_seed, static_cast<std::uint64_t>(e));
    const arena::EpisodeSpec spec = arena::simulate_spec(rc.env, tasks, seed, ticks, a.policy);
    arena::EpisodeOptions opts;
    opts.rewards = rc.rewards;
    opts.collect_rollout = true;
    opts.keep_trace = true;
    const auto t0 = std::chrono::steady_clock::now();
    const arena::EpisodeResult r = arena::run_episode(spec, opts);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (a.dump) {
      fs::create_directories(rc.output_dir);
      std::ostringstream name;
      name << "batch_" << std::setw(3) << std::setfill('0') << e << ".bin";
      std::ofstream out(rc.output_dir / name.str(), std::ios::binary);
      arena::write_batch_dump(out, *r.batch);
    }
    const arena::DenseGrid grid = arena::padded_oracle(r.trace, rc.env.num_agents, r.ticks);
    const double pad_all = arena::padding_fraction(grid, 0, r.ticks);
    const double pad_last = arena::padding_fraction(grid, r.ticks - std::max<arena::Tick>(1, r.ticks / 4), r.ticks);
    const auto cells = static_cast<std::int64_t>(grid.cells.size());
    const auto n = static_cast<std::int64_t>(r.batch->size());
    steps += r.agent_steps;
    dense_cells += cells;
    flat += n;
    std::cout << "episode " << e << ": ticks " << r.ticks << ", agent steps " << r.agent_steps << ", dense cells "
              << cells << ", flat transitions " << n << std::fixed << std::setprecision(4) << ", padding "
              << pad_all << " (last quarter " << pad_last << ")\n";
    std::cout.unsetf(std::ios::fixed);
    per_episode.push_back({{"ticks", r.ticks},
                           {"agent_steps", r.agent_steps},
                           {"dense_cells", cells},
                           {"flat_transitions", n},
                           {"padding", pad_all},
                           {"padding_last_quarter", pad_last}});
  }
  std::cout << "total: agent steps " << steps << ", dense cells " << dense_cells << ", flat transitions " << flat
            << '\n';
  json report = {{"episodes", per_episode},
                 {"agent_steps", steps},
                 {"dense_cells", dense_cells},
                 {"flat_transitions", flat}};
  if (!a.deterministic) {
    const double rate = seconds > 0 ? static_cast<double>(steps) / seconds : 0.0;
    std::cout << std::fixed << std::setprecision(0) << "throughput: " << rate << " agent-steps/s\n";
    report["agent_steps_per_second"] = rate;
  }
  write_json(rc.output_dir / "bench.json", report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arena: multi-agent survival gridworld"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "RunConfig JSON (defaults built in)")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "master seed (overrides config)");
    sub->add_option("--jobs", common.jobs, "worker threads")->capture_default_str();
    sub->add_option("--out", common.out, "output directory (overrides config, default out)");
  };

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run one episode, write a JSONL replay, print the final state hash");
  add_common(s);
  s->add_option("--ticks", sim.ticks, "episode length (default env.max_ticks)");
  s->add_option("--policy", sim.policy, "policy for every agent")->capture_default_str();
  s->add_option("--replay", sim.replay, "replay path (default OUT/replay.jsonl)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "PvE/PvP tournament over the eval tasks");
  add_common(e);
  e->add_option("--mode", ev.mode, "pve, pvp or both")
      ->check(CLI::IsMember({"pve", "pvp", "both"}))
      ->capture_default_str();
  e->add_option("--pve-episodes", ev.pve_episodes, "PvE episodes per policy (default 32)");
  e->add_option("--pvp-episodes", ev.pvp_episodes, "PvP episodes per round (default 200)");
  e->add_option("--rounds", ev.rounds, "PvP rounds (default 9)");
  e->add_option("--ticks", ev.ticks, "episode length (default 1024)");

  TasksArgs ta;
  auto* t = app.add_subcommand("tasks", "task embeddings, curriculum overlap and PCA");
  add_common(t);
  t->add_option("--embed", ta.embed, "task file to embed into OUT/embeddings.csv");
  t->add_flag("--overlap", ta.overlap, "train/eval overlap in both modes");
  t->add_flag("--pca", ta.pca, "2-D PCA of train+eval embeddings into OUT/pca.csv");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "throughput and padding statistics");
  add_common(b);
  b->add_option("--episodes", be.episodes, "episodes to run")->capture_default_str();
  b->add_option("--policy", be.policy, "policy for every agent")->capture_default_str();
  b->add_option("--ticks", be.ticks, "episode length (default env.max_ticks)");
  b->add_flag("--deterministic", be.deterministic, "omit wall-clock figures");
  b->add_flag("--dump", be.dump, "write each episode's batch to OUT/batch_NNN.bin");

  CLI11_PARSE(app, argc, argv);

  try {
    configure_logging();
    if (s->parsed()) return cmd_simulate(common, sim);
    if (e->parsed()) return cmd_eval(common, ev);
    if (t->parsed()) return cmd_tasks(common, ta);
    if (b->parsed()) return cmd_bench(common, be);
  } catch (const arena::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "fatal: " << err.what() << '\n';
    return 1;
  }
  return 1;
}
