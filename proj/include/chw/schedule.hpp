#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chw/common.hpp"
#include "chw/transforms.hpp"

namespace chw {

enum class TaskKind { InitialFullHaar, StageHaar };

// Where the initial full-size Haar transform runs: on a dedicated extra node,
// or on the largest scale node.
enum class InitialNodePolicy { ExtraNode, ReuseLargestNode };

enum class CostModelKind {
  HaarOpCount,   // 2*(2^s - 1) time units for a size-2^s transform
  UnitPerTask,   // 1 time unit per task
  LinearInSize,  // 2^s time units
};

struct CostModel {
  CostModelKind kind = CostModelKind::HaarOpCount;

  std::int64_t duration(std::size_t transform_size) const;
};

const char* to_string(TaskKind k);
const char* to_string(InitialNodePolicy p);
const char* to_string(CostModelKind k);
TaskKind task_kind_from_string(const std::string& s);
InitialNodePolicy policy_from_string(const std::string& s);
CostModelKind cost_model_from_string(const std::string& s);

// One Haar transform in the cascade.  The initial task has stage 0 and covers
// the whole signal; stage-r tasks cover the slices of stage_blocks(m, r).
struct TaskSpec {
  int id = 0;
  TaskKind kind = TaskKind::InitialFullHaar;
  int stage = 0;
  BlockSlice slice;
  std::size_t transform_size = 0;
};

// Scale nodes are numbered 1..m-1; node s runs all size-2^s transforms.  The
// extra node, when present, is node 0.
inline constexpr int kExtraNodeId = 0;

// The cascade as an explicit dependency graph.  Every stage task has exactly
// one prerequisite: the latest earlier task whose written slice contains its
// own slice, or the initial transform when no stage task does.
struct TaskGraph {
  int m = 0;
  InitialNodePolicy policy = InitialNodePolicy::ExtraNode;
  std::vector<TaskSpec> tasks;    // index == id; initial first, then (stage, offset) ascending
  std::vector<int> prerequisite;  // -1 for the initial task

  int node_of(const TaskSpec& t) const;
};

TaskGraph build_task_graph(int m, InitialNodePolicy policy);

struct ScheduledTask {
  int id = 0;
  TaskKind kind = TaskKind::InitialFullHaar;
  int stage = 0;
  std::size_t offset = 0;
  std::size_t size = 0;
  int node = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;

  friend bool operator==(const ScheduledTask&, const ScheduledTask&) = default;
};

struct Schedule {
  int m = 0;
  CostModelKind cost_model = CostModelKind::HaarOpCount;
  InitialNodePolicy policy = InitialNodePolicy::ExtraNode;
  bool pipelined_initial = false;
  std::vector<ScheduledTask> tasks;
  std::int64_t makespan = 0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Completion offset of the first `level` butterfly levels of the initial
// size-2^m transform, when the whole task takes `duration` time units.  Level
// completions are placed proportionally to butterfly work done, rounded up to
// whole time units, so they are exact operation counts under HaarOpCount.
std::int64_t initial_level_completion(int m, int level, std::int64_t duration);

// Deterministic list scheduler for the node-per-scale architecture: at each
// event time, every idle node starts the ready task with the lowest
// (stage, offset) pair among its size class.  With pipelined_initial, a task
// that reads the initial transform's output becomes ready as soon as the Haar
// level writing its slice completes, instead of waiting for the whole task.
Schedule simulate(const TaskGraph& graph, CostModel cost, bool pipelined_initial);

struct NodeUsage {
  int node = 0;
  std::int64_t busy = 0;
  double fraction = 0.0;
};

struct OccupancyReport {
  std::int64_t makespan = 0;
  std::vector<NodeUsage> nodes;  // ascending node id
};

OccupancyReport occupancy_report(const Schedule& s);

enum class ScheduleFormat { Json, Csv };

// JSON carries the full schedule (tasks, makespan, occupancy, and the
// configuration needed to validate it); CSV is one task per row under a
// header.  Times are exact integers in every cost model.
void export_schedule(const Schedule& s, ScheduleFormat format, std::ostream& out);
Schedule import_schedule_json(std::istream& in);

// Independent checker: re-derives the task census, node mapping, dependency
// rule (by brute containment scan), durations, and timing bounds from the
// schedule alone.  Returns human-readable violations; empty means valid.
std::vector<std::string> validate_schedule(const Schedule& s);

}  // namespace chw
