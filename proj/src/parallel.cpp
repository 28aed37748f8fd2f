#include "chw/parallel.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "chw/errors.hpp"
#include "chw/schedule.hpp"
#include "chw/transforms.hpp"

namespace chw {

namespace {

template <SampleValue T>
void run_pool(std::span<T> x, int workers, ScalingMode mode, OpTally* tally) {
  const int m = level_of(x.size());
  const TaskGraph graph = build_task_graph(m, InitialNodePolicy::ExtraNode);
  const std::size_t total = graph.tasks.size();

  std::vector<std::vector<int>> children(total);
  for (std::size_t i = 1; i < total; ++i) {
    children[graph.prerequisite[i]].push_back(static_cast<int>(i));
  }

  std::mutex mu;
  std::condition_variable cv;
  std::deque<int> ready{0};
  std::size_t remaining = total;
  std::vector<OpTally> local_tallies(static_cast<std::size_t>(workers));

  auto worker_loop = [&](int worker_id) {
    std::vector<T> scratch(x.size() / 2);
    OpTally* local = tally != nullptr ? &local_tallies[worker_id] : nullptr;
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return !ready.empty() || remaining == 0; });
      if (ready.empty()) return;
      const int id = ready.front();
      ready.pop_front();
      lock.unlock();

      const TaskSpec& task = graph.tasks[id];
      haar_forward_inplace(x.subspan(task.slice.offset, task.slice.size), mode, local,
                           std::span<T>(scratch));

      lock.lock();
      --remaining;
      for (int child : children[id]) ready.push_back(child);
      if (remaining == 0 || !ready.empty()) cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  try {
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop, w);
  } catch (const std::system_error& e) {
    {
      // Unblock any threads already started, then fail.
      std::lock_guard guard(mu);
      remaining = 0;
      ready.clear();
    }
    cv.notify_all();
    for (std::thread& th : pool) th.join();
    throw ResourceError(std::string("parallel_execute: cannot start worker pool: ") + e.what());
  }
  for (std::thread& th : pool) th.join();

  if (tally != nullptr) {
    for (const OpTally& local : local_tallies) {
      tally->additions += local.additions;
      tally->multiplications += local.multiplications;
    }
  }
}

}  // namespace

template <SampleValue T>
void parallel_execute_inplace(std::span<T> x, int workers, ScalingMode mode, OpTally* tally) {
  detail::require_pow2(x.size(), "parallel_execute");
  detail::require_mode<T>(mode, "parallel_execute");
  if (workers < 1) {
    throw std::invalid_argument("parallel_execute: workers must be >= 1, got " +
                                std::to_string(workers));
  }
  if (x.size() < 4 || workers == 1) {
    chw_forward_inplace(x, mode, tally);
    return;
  }
  run_pool(x, workers, mode, tally);
}

template <SampleValue T>
std::vector<T> parallel_execute(std::vector<T> x, int workers, ScalingMode mode, OpTally* tally) {
  parallel_execute_inplace(std::span<T>(x), workers, mode, tally);
  return x;
}

template void parallel_execute_inplace<std::int64_t>(std::span<std::int64_t>, int, ScalingMode,
                                                     OpTally*);
template void parallel_execute_inplace<double>(std::span<double>, int, ScalingMode, OpTally*);
template std::vector<std::int64_t> parallel_execute<std::int64_t>(std::vector<std::int64_t>, int,
                                                                  ScalingMode, OpTally*);
template std::vector<double> parallel_execute<double>(std::vector<double>, int, ScalingMode,
                                                      OpTally*);

}  // namespace chw
