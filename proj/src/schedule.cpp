#include "chw/schedule.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "chw/errors.hpp"

namespace chw {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxGraphLevel = 24;  // 2^{m-1} tasks; keep graphs in memory

std::int64_t pow2(int e) { return std::int64_t{1} << e; }

}  // namespace

std::int64_t CostModel::duration(std::size_t transform_size) const {
  const auto n = static_cast<std::int64_t>(transform_size);
  switch (kind) {
    case CostModelKind::HaarOpCount:
      return std::max<std::int64_t>(1, 2 * (n - 1));  // a size-1 task still takes a tick
    case CostModelKind::UnitPerTask:
      return 1;
    case CostModelKind::LinearInSize:
      return n;
  }
  throw std::logic_error("CostModel::duration: bad kind");
}

const char* to_string(TaskKind k) {
  return k == TaskKind::InitialFullHaar ? "initial" : "stage";
}

const char* to_string(InitialNodePolicy p) {
  return p == InitialNodePolicy::ExtraNode ? "extra-node" : "reuse-largest-node";
}

const char* to_string(CostModelKind k) {
  switch (k) {
    case CostModelKind::HaarOpCount:
      return "haar-ops";
    case CostModelKind::UnitPerTask:
      return "unit-per-task";
    case CostModelKind::LinearInSize:
      return "linear-in-size";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "initial") return TaskKind::InitialFullHaar;
  if (s == "stage") return TaskKind::StageHaar;
  throw FormatError("unknown task kind '" + s + "'");
}

InitialNodePolicy policy_from_string(const std::string& s) {
  if (s == "extra-node") return InitialNodePolicy::ExtraNode;
  if (s == "reuse-largest-node") return InitialNodePolicy::ReuseLargestNode;
  throw FormatError("unknown initial-node policy '" + s + "'");
}

CostModelKind cost_model_from_string(const std::string& s) {
  if (s == "haar-ops") return CostModelKind::HaarOpCount;
  if (s == "unit-per-task") return CostModelKind::UnitPerTask;
  if (s == "linear-in-size") return CostModelKind::LinearInSize;
  throw FormatError("unknown cost model '" + s + "'");
}

int TaskGraph::node_of(const TaskSpec& t) const {
  if (t.kind == TaskKind::InitialFullHaar) {
    return policy == InitialNodePolicy::ExtraNode ? kExtraNodeId : m - 1;
  }
  return level_of(t.transform_size);
}

TaskGraph build_task_graph(int m, InitialNodePolicy policy) {
  if (m < 2) {
    throw std::invalid_argument("build_task_graph: m=" + std::to_string(m) +
                                " has no cascade stages (need m >= 2)");
  }
  if (m > kMaxGraphLevel) {
    throw std::invalid_argument("build_task_graph: m=" + std::to_string(m) +
                                " exceeds the graph capacity cap of " +
                                std::to_string(kMaxGraphLevel));
  }
  TaskGraph g;
  g.m = m;
  g.policy = policy;
  const std::size_t n = std::size_t{1} << m;
  const std::size_t total = n / 2;  // 1 initial + (2^{m-1} - 1) stage tasks
  g.tasks.reserve(total);
  g.prerequisite.reserve(total);

  g.tasks.push_back({0, TaskKind::InitialFullHaar, 0, {0, n}, n});
  g.prerequisite.push_back(-1);

  int id = 1;
  for (int r = 1; r <= m - 1; ++r) {
    for (const BlockSlice& s : stage_blocks(m, r)) {
      g.tasks.push_back({id, TaskKind::StageHaar, r, s, s.size});
      // The prerequisite is the latest earlier task whose written slice
      // contains this one.  Slice offsets are q·2^{m-r+1} + 2^{m-r}, so the
      // enclosing stage task, if any, is named by the second-lowest set bit
      // of the offset; clearing the bits below it gives that task's offset.
      const std::size_t low = s.offset & (~s.offset + 1);
      const std::size_t rest = s.offset ^ low;
      if (rest == 0) {
        g.prerequisite.push_back(0);
      } else {
        const std::size_t p = rest & (~rest + 1);
        const int bit = level_of(p);
        const int pre_stage = m - bit;
        const std::size_t pre_offset = (s.offset >> (bit + 1) << (bit + 1)) | p;
        const std::size_t q = pre_offset >> (m - pre_stage + 1);
        const int pre_id = static_cast<int>((std::size_t{1} << (pre_stage - 1)) + q);
        g.prerequisite.push_back(pre_id);
      }
      ++id;
    }
  }
  return g;
}

std::int64_t initial_level_completion(int m, int level, std::int64_t duration) {
  if (level < 1 || level > m) {
    throw std::invalid_argument("initial_level_completion: level " + std::to_string(level) +
                                " out of range for m=" + std::to_string(m));
  }
  // Butterfly work: level j of the full Haar transform costs 2^{m-j+1}
  // additions, so the prefix through `level` is 2^{m+1} - 2^{m-level+1}.
  const std::int64_t prefix = pow2(m + 1) - pow2(m - level + 1);
  const std::int64_t total = pow2(m + 1) - 2;
  return (duration * prefix + total - 1) / total;
}

Schedule simulate(const TaskGraph& graph, CostModel cost, bool pipelined_initial) {
  const std::size_t total = graph.tasks.size();
  std::vector<std::int64_t> duration(total);
  for (std::size_t i = 0; i < total; ++i) {
    duration[i] = cost.duration(graph.tasks[i].transform_size);
  }

  // Release times known upfront go straight into the arrival queue; releases
  // triggered by stage-task completion are pushed as the simulation runs.
  using TimedId = std::pair<std::int64_t, int>;
  std::priority_queue<TimedId, std::vector<TimedId>, std::greater<>> arrivals;
  std::priority_queue<TimedId, std::vector<TimedId>, std::greater<>> completions;
  std::vector<std::vector<int>> children(total);

  arrivals.emplace(0, 0);
  for (std::size_t i = 1; i < total; ++i) {
    const int pre = graph.prerequisite[i];
    if (pre == 0 && pipelined_initial) {
      const int level = graph.m - level_of(graph.tasks[i].slice.offset);
      arrivals.emplace(initial_level_completion(graph.m, level, duration[0]),
                       static_cast<int>(i));
    } else {
      children[pre].push_back(static_cast<int>(i));
    }
  }

  // Per-node ready set ordered by (stage, offset); node idle iff not running.
  std::map<int, std::set<std::tuple<int, std::size_t, int>>> ready;
  std::map<int, std::int64_t> running_until;

  Schedule out;
  out.m = graph.m;
  out.cost_model = cost.kind;
  out.policy = graph.policy;
  out.pipelined_initial = pipelined_initial;
  out.tasks.resize(total);

  std::size_t done = 0;
  while (done < total) {
    std::int64_t t = std::numeric_limits<std::int64_t>::max();
    if (!arrivals.empty()) t = std::min(t, arrivals.top().first);
    if (!completions.empty()) t = std::min(t, completions.top().first);
    if (t == std::numeric_limits<std::int64_t>::max()) {
      throw std::logic_error("simulate: stalled with pending tasks");
    }

    // Drain every event at time t; completions may release arrivals at t.
    bool progressed = true;
    while (progressed) {
      progressed = false;
      while (!completions.empty() && completions.top().first == t) {
        const int id = completions.top().second;
        completions.pop();
        ++done;
        for (int child : children[id]) arrivals.emplace(t, child);
        progressed = true;
      }
      while (!arrivals.empty() && arrivals.top().first == t) {
        const int id = arrivals.top().second;
        arrivals.pop();
        const TaskSpec& task = graph.tasks[id];
        ready[graph.node_of(task)].insert({task.stage, task.slice.offset, id});
        progressed = true;
      }
    }

    for (auto& [node, queue] : ready) {
      auto it = running_until.find(node);
      const bool idle = it == running_until.end() || it->second <= t;
      if (!idle || queue.empty()) continue;
      const int id = std::get<2>(*queue.begin());
      queue.erase(queue.begin());
      const TaskSpec& task = graph.tasks[id];
      const std::int64_t end = t + duration[id];
      out.tasks[id] = {task.id,   task.kind, task.stage, task.slice.offset,
                       task.slice.size, node, t,         end};
      running_until[node] = end;
      completions.emplace(end, id);
      out.makespan = std::max(out.makespan, end);
    }
  }
  return out;
}

OccupancyReport occupancy_report(const Schedule& s) {
  std::map<int, std::int64_t> busy;
  for (const ScheduledTask& t : s.tasks) busy[t.node] += t.end - t.start;
  OccupancyReport report;
  report.makespan = s.makespan;
  for (const auto& [node, b] : busy) {
    report.nodes.push_back(
        {node, b, s.makespan > 0 ? static_cast<double>(b) / static_cast<double>(s.makespan) : 0.0});
  }
  return report;
}

void export_schedule(const Schedule& s, ScheduleFormat format, std::ostream& out) {
  if (format == ScheduleFormat::Csv) {
    out << "id,kind,stage,offset,size,node,start,end\n";
    for (const ScheduledTask& t : s.tasks) {
      out << t.id << ',' << to_string(t.kind) << ',' << t.stage << ',' << t.offset << ','
          << t.size << ',' << t.node << ',' << t.start << ',' << t.end << '\n';
    }
  } else {
    Json j;
    j["m"] = s.m;
    j["cost_model"] = to_string(s.cost_model);
    j["policy"] = to_string(s.policy);
    j["pipelined_initial"] = s.pipelined_initial;
    Json tasks = Json::array();
    for (const ScheduledTask& t : s.tasks) {
      Json row;
      row["id"] = t.id;
      row["kind"] = to_string(t.kind);
      row["stage"] = t.stage;
      row["offset"] = t.offset;
      row["size"] = t.size;
      row["node"] = t.node;
      row["start"] = t.start;
      row["end"] = t.end;
      tasks.push_back(std::move(row));
    }
    j["tasks"] = std::move(tasks);
    j["makespan"] = s.makespan;
    Json occupancy;
    for (const NodeUsage& n : occupancy_report(s).nodes) {
      occupancy[std::to_string(n.node)] = n.fraction;
    }
    j["occupancy"] = std::move(occupancy);
    out << j.dump(2) << '\n';
  }
  if (!out) throw IoError("export_schedule: write failed");
}

Schedule import_schedule_json(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("schedule JSON parse error: ") + e.what());
  }
  try {
    Schedule s;
    s.m = j.at("m").get<int>();
    s.cost_model = cost_model_from_string(j.at("cost_model").get<std::string>());
    s.policy = policy_from_string(j.at("policy").get<std::string>());
    s.pipelined_initial = j.at("pipelined_initial").get<bool>();
    for (const Json& row : j.at("tasks")) {
      ScheduledTask t;
      t.id = row.at("id").get<int>();
      t.kind = task_kind_from_string(row.at("kind").get<std::string>());
      t.stage = row.at("stage").get<int>();
      t.offset = row.at("offset").get<std::size_t>();
      t.size = row.at("size").get<std::size_t>();
      t.node = row.at("node").get<int>();
      t.start = row.at("start").get<std::int64_t>();
      t.end = row.at("end").get<std::int64_t>();
      s.tasks.push_back(t);
    }
    s.makespan = j.at("makespan").get<std::int64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("schedule JSON missing or bad field: ") + e.what());
  }
}

std::vector<std::string> validate_schedule(const Schedule& s) {
  std::vector<std::string> issues;
  const auto complain = [&issues](std::string msg) { issues.push_back(std::move(msg)); };

  if (s.m < 2) {
    complain("m=" + std::to_string(s.m) + " cannot carry a cascade schedule");
    return issues;
  }
  const std::size_t n = std::size_t{1} << s.m;

  // Census: exactly one initial task over [0, 2^m) plus the stage slices.
  std::set<std::tuple<int, std::size_t, std::size_t>> expected;
  expected.insert({0, std::size_t{0}, n});
  for (int r = 1; r <= s.m - 1; ++r) {
    for (const BlockSlice& b : stage_blocks(s.m, r)) expected.insert({r, b.offset, b.size});
  }
  std::set<std::tuple<int, std::size_t, std::size_t>> seen;
  std::set<int> ids;
  for (const ScheduledTask& t : s.tasks) {
    if (!ids.insert(t.id).second) complain("duplicate task id " + std::to_string(t.id));
    if ((t.kind == TaskKind::InitialFullHaar) != (t.stage == 0)) {
      complain("task " + std::to_string(t.id) + ": kind does not match stage");
    }
    if (!seen.insert({t.stage, t.offset, t.size}).second) {
      complain("duplicate task at stage " + std::to_string(t.stage) + " offset " +
               std::to_string(t.offset));
    }
  }
  if (seen != expected) complain("task census does not match the cascade for m=" + std::to_string(s.m));
  if (!issues.empty()) return issues;  // timing checks need a sane census

  const ScheduledTask* initial = nullptr;
  for (const ScheduledTask& t : s.tasks) {
    if (t.kind == TaskKind::InitialFullHaar) initial = &t;
  }

  const CostModel cost{s.cost_model};
  const int largest_node = s.m - 1;
  for (const ScheduledTask& t : s.tasks) {
    const int expected_node = t.kind == TaskKind::InitialFullHaar
                                  ? (s.policy == InitialNodePolicy::ExtraNode ? kExtraNodeId
                                                                              : largest_node)
                                  : level_of(t.size);
    if (t.node != expected_node) {
      complain("task " + std::to_string(t.id) + ": node " + std::to_string(t.node) +
               " is not the size-class node " + std::to_string(expected_node));
    }
    if (t.start < 0) complain("task " + std::to_string(t.id) + ": negative start time");
    if (t.end - t.start != cost.duration(t.size)) {
      complain("task " + std::to_string(t.id) + ": duration " + std::to_string(t.end - t.start) +
               " does not match the cost model");
    }
  }

  // No overlap on any node.
  std::map<int, std::vector<const ScheduledTask*>> by_node;
  for (const ScheduledTask& t : s.tasks) by_node[t.node].push_back(&t);
  for (auto& [node, tasks] : by_node) {
    std::sort(tasks.begin(), tasks.end(),
              [](const ScheduledTask* a, const ScheduledTask* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < tasks.size(); ++i) {
      if (tasks[i]->start < tasks[i - 1]->end) {
        complain("node " + std::to_string(node) + ": tasks " + std::to_string(tasks[i - 1]->id) +
                 " and " + std::to_string(tasks[i]->id) + " overlap");
      }
    }
  }

  // Dependency rule, re-derived by brute containment scan: the prerequisite
  // of a stage task is the latest earlier task whose slice contains its own.
  for (const ScheduledTask& t : s.tasks) {
    if (t.kind == TaskKind::InitialFullHaar) continue;
    const ScheduledTask* pre = initial;
    for (const ScheduledTask& u : s.tasks) {
      if (u.kind == TaskKind::InitialFullHaar || u.stage >= t.stage) continue;
      if (u.offset <= t.offset && t.offset + t.size <= u.offset + u.size &&
          (pre == initial || u.stage > pre->stage)) {
        pre = &u;
      }
    }
    std::int64_t ready = 0;
    if (pre == initial) {
      ready = s.pipelined_initial
                  ? initial->start + initial_level_completion(
                                         s.m, s.m - level_of(t.offset),
                                         initial->end - initial->start)
                  : initial->end;
    } else {
      ready = pre->end;
    }
    if (t.start < ready) {
      complain("task " + std::to_string(t.id) + ": starts at " + std::to_string(t.start) +
               " before its input is ready at " + std::to_string(ready));
    }
  }

  std::int64_t max_end = 0;
  for (const ScheduledTask& t : s.tasks) max_end = std::max(max_end, t.end);
  if (s.makespan != max_end) {
    complain("makespan " + std::to_string(s.makespan) + " does not equal the last end time " +
             std::to_string(max_end));
  }
  return issues;
}

}  // namespace chw
