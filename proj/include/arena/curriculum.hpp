#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arena/task.hpp"

namespace arena {

/// A parse failure carrying the 1-based line it came from.
class TaskFileError : public ConfigError {
 public:
  TaskFileError(std::size_t line, const std::string& msg)
      : ConfigError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Weighted task set. Probabilities are the weights normalized to sum 1.
class Curriculum {
 public:
  Curriculum() = default;
  /// Throws ConfigError on non-positive weights or duplicate names.
  explicit Curriculum(std::vector<TaskSpec> tasks);

  const std::vector<TaskSpec>& tasks() const noexcept { return tasks_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  std::size_t size() const noexcept { return tasks_.size(); }
  bool empty() const noexcept { return tasks_.empty(); }
  const TaskSpec& operator[](std::size_t i) const { return tasks_[i]; }

  /// Index of the task named `name`, or size() when absent.
  std::size_t find(std::string_view name) const;

 private:
  std::vector<TaskSpec> tasks_;
  std::vector<double> probabilities_;
};

/// Parses the task file format, one task per line:
///
///   # comment
///   NAME: Predicate(arg=value, ...) weight=W
///
/// `weight=W` is optional (default 1). Errors carry line numbers.
Curriculum parse_task_file(std::string_view text);
Curriculum load_task_file(const std::string& path);
std::string render_task_file(const Curriculum& c);

/// i.i.d. draws from the curriculum distribution, one per agent.
std::vector<TaskAssignment> sample_assignments(const Curriculum& curriculum, std::int32_t num_agents,
                                               std::uint64_t rng_seed);

enum class OverlapMode { Predicates, Full };

/// Fraction of distinct eval keys also present in train. Keys are predicate
/// kinds (Predicates) or predicate plus canonical argument list (Full).
double overlap(const Curriculum& train, const Curriculum& eval, OverlapMode mode);

}  // namespace arena
