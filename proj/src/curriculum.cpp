#include "arena/curriculum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "arena/rng.hpp"

namespace arena {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

Curriculum::Curriculum(std::vector<TaskSpec> tasks) : tasks_(std::move(tasks)) {
  double total = 0.0;
  std::unordered_set<std::string> names;
  for (const auto& t : tasks_) {
    if (!(t.sampling_weight > 0.0) || !std::isfinite(t.sampling_weight)) {
      throw ConfigError("task '" + t.name + "': weight must be a positive finite number");
    }
    if (!names.insert(t.name).second) throw ConfigError("duplicate task name '" + t.name + "'");
    total += t.sampling_weight;
  }
  probabilities_.reserve(tasks_.size());
  for (const auto& t : tasks_) probabilities_.push_back(t.sampling_weight / total);
}

std::size_t Curriculum::find(std::string_view name) const {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].name == name) return i;
  }
  return tasks_.size();
}

Curriculum parse_task_file(std::string_view text) {
  std::vector<TaskSpec> tasks;
  std::unordered_set<std::string> names;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw TaskFileError(line_no, "expected 'NAME: Predicate(...)'");
    const std::string_view name = trim(line.substr(0, colon));
    if (!valid_name(name)) throw TaskFileError(line_no, "invalid task name '" + std::string(name) + "'");
    if (!names.insert(std::string(name)).second) {
      throw TaskFileError(line_no, "duplicate task name '" + std::string(name) + "'");
    }

    std::string_view rest = trim(line.substr(colon + 1));
    const auto close = rest.rfind(')');
    if (close == std::string_view::npos) throw TaskFileError(line_no, "missing ')' in predicate");
    const std::string_view pred_text = rest.substr(0, close + 1);
    const std::string_view tail = trim(rest.substr(close + 1));

    double weight = 1.0;
    if (!tail.empty()) {
      constexpr std::string_view kKey = "weight=";
      if (!tail.starts_with(kKey)) {
        throw TaskFileError(line_no, "unexpected trailing text '" + std::string(tail) + "'");
      }
      const std::string_view w = trim(tail.substr(kKey.size()));
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc() || ptr != w.data() + w.size()) {
        throw TaskFileError(line_no, "invalid weight '" + std::string(w) + "'");
      }
      if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw TaskFileError(line_no, "weight must be positive, got '" + std::string(w) + "'");
      }
    }

    try {
      tasks.push_back(TaskSpec::make(std::string(name), parse_predicate(pred_text), weight));
    } catch (const TaskFileError&) {
      throw;
    } catch (const ConfigError& e) {
      throw TaskFileError(line_no, e.what());
    }
  }
  return Curriculum(std::move(tasks));
}

Curriculum load_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_task_file(ss.str());
  } catch (const TaskFileError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string render_task_file(const Curriculum& c) {
  std::string out;
  for (const auto& t : c.tasks()) {
    out += render_task_line(t);
    out += '\n';
  }
  return out;
}

std::vector<TaskAssignment> sample_assignments(const Curriculum& curriculum, std::int32_t num_agents,
                                               std::uint64_t rng_seed) {
  if (curriculum.empty()) throw ConfigError("cannot sample from an empty curriculum");
  std::vector<double> cdf;
  cdf.reserve(curriculum.size());
  double acc = 0.0;
  for (double p : curriculum.probabilities()) cdf.push_back(acc += p);

  Rng rng(rng_seed);
  std::vector<TaskAssignment> out;
  out.reserve(static_cast<std::size_t>(std::max(num_agents, 0)));
  for (AgentId a = 0; a < num_agents; ++a) {
    const double u = rng.uniform() * acc;
    auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    idx = std::min(idx, curriculum.size() - 1);
    out.push_back(TaskAssignment{a, curriculum[idx], 0.0, false});
  }
  return out;
}

double overlap(const Curriculum& train, const Curriculum& eval, OverlapMode mode) {
  if (train.empty() || eval.empty()) throw ConfigError("overlap requires non-empty curricula");
  auto key = [mode](const TaskSpec& t) {
    std::string k(to_string(t.predicate.kind));
    if (mode == OverlapMode::Full) k += "|" + canonical_args_key(t.predicate);
    return k;
  };
  std::set<std::string> train_keys;
  for (const auto& t : train.tasks()) train_keys.insert(key(t));
  std::set<std::string> eval_keys;
  for (const auto& t : eval.tasks()) eval_keys.insert(key(t));
  const auto shared = std::count_if(eval_keys.begin(), eval_keys.end(),
                                    [&](const std::string& k) { return train_keys.contains(k); });
  return static_cast<double>(shared) / static_cast<double>(eval_keys.size());
}

}  // namespace arena
