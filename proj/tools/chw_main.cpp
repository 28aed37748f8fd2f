// Command-line front end: fast Walsh-Hadamard / Haar transforms over signal
// files, dense-matrix verification, cascade schedule simulation, and a small
// benchmark harness.  Diagnostics go to stderr, data to stdout.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chw/errors.hpp"
#include "chw/oracle.hpp"
#include "chw/orderings.hpp"
#include "chw/parallel.hpp"
#include "chw/schedule.hpp"
#include "chw/signal_io.hpp"
#include "chw/transforms.hpp"

namespace {

using namespace chw;

SignalFormat parse_signal_format(const std::string& s) {
  return s == "binary" ? SignalFormat::Binary : SignalFormat::Text;
}

ScalingMode parse_mode(const std::string& s) {
  return s == "orthonormal" ? ScalingMode::Orthonormal : ScalingMode::Unnormalized;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("?");
}

struct TransformOptions {
  std::string input;
  std::string output;
  std::string algo = "chw";
  std::string mode = "unnormalized";
  std::string order;
  std::string format = "text";
  bool count_ops = false;
};

template <SampleValue T>
int run_transform(const TransformOptions& o) {
  const SignalFormat fmt = parse_signal_format(o.format);
  const ScalingMode mode = parse_mode(o.mode);
  std::vector<T> x = read_signal<T>(o.input, fmt);
  const int m = level_of(x.size());

  OpTally tally;
  OpTally* tp = o.count_ops ? &tally : nullptr;

  std::string native_order = "dyadic";
  if (o.algo == "chw") {
    chw_forward_inplace(std::span<T>(x), mode, tp);
  } else if (o.algo == "fwht") {
    fwht_natural_inplace(std::span<T>(x), mode, tp);
    native_order = "natural";
  } else if (o.algo == "haar") {
    haar_forward_inplace(std::span<T>(x), mode, tp);
    native_order = "";
  } else {  // haar-walsh: input is a vector of Haar coefficients
    haar_walsh_forward_inplace(std::span<T>(x), mode, tp);
  }

  if (!o.order.empty() && o.order != native_order) {
    if (native_order.empty()) {
      throw std::invalid_argument("--order does not apply to the haar algorithm");
    }
    if (native_order == "natural") {
      x = apply_permutation(natural_to_dyadic(m), x);
      native_order = "dyadic";
    }
    if (o.order == "natural") {
      x = apply_permutation(inverse(natural_to_dyadic(m)), x);
    } else if (o.order == "sequency") {
      x = apply_permutation(dyadic_to_sequency(m), x);
    }
  }

  write_signal<T>(x, o.output, fmt);
  if (o.count_ops) {
    std::cerr << "additions=" << tally.additions << " multiplications=" << tally.multiplications
              << "\n";
  }
  return 0;
}

struct VerifyOptions {
  int m = 0;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string mode = "unnormalized";
};

int run_verify(const VerifyOptions& o) {
  if (o.m > kMaxDenseLevel) {
    throw CapacityError("verify: m=" + std::to_string(o.m) +
                        " exceeds the dense reference capacity (max " +
                        std::to_string(kMaxDenseLevel) + ")");
  }
  std::mt19937_64 rng(o.seed);
  if (parse_mode(o.mode) == ScalingMode::Unnormalized) {
    const auto h = hadamard_dyadic_dense<std::int64_t>(o.m, ScalingMode::Unnormalized);
    std::uniform_int_distribution<std::int64_t> dist(-(std::int64_t{1} << 20),
                                                     std::int64_t{1} << 20);
    std::int64_t max_disc = 0;
    int failing_trial = -1;
    for (int t = 0; t < o.trials; ++t) {
      std::vector<std::int64_t> x(std::size_t{1} << o.m);
      for (auto& v : x) v = dist(rng);
      const auto fast = chw_forward(x, ScalingMode::Unnormalized);
      const auto slow = mat_vec(h, x);
      for (std::size_t i = 0; i < fast.size(); ++i) {
        const std::int64_t d = std::abs(fast[i] - slow[i]);
        if (d > max_disc) {
          max_disc = d;
          failing_trial = t;
        }
      }
    }
    std::cout << "max_discrepancy=" << max_disc << "\n";
    if (max_disc != 0) {
      std::cerr << "verification failed: seed=" << o.seed << " trial=" << failing_trial << "\n";
      return 1;
    }
    return 0;
  }
  const auto h = hadamard_dyadic_dense<double>(o.m, ScalingMode::Orthonormal);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double max_disc = 0.0;
  int failing_trial = -1;
  for (int t = 0; t < o.trials; ++t) {
    std::vector<double> x(std::size_t{1} << o.m);
    for (auto& v : x) v = dist(rng);
    const auto fast = chw_forward(x, ScalingMode::Orthonormal);
    const auto slow = mat_vec(h, x);
    for (std::size_t i = 0; i < fast.size(); ++i) {
      const double d = std::abs(fast[i] - slow[i]);
      if (d > max_disc) {
        max_disc = d;
        failing_trial = t;
      }
    }
  }
  std::cout << "max_discrepancy=" << shortest(max_disc) << "\n";
  if (max_disc > 1e-10) {
    std::cerr << "verification failed: seed=" << o.seed << " trial=" << failing_trial << "\n";
    return 1;
  }
  return 0;
}

struct SimulateOptions {
  int m = 0;
  std::string cost = "haar-ops";
  std::string policy = "extra-node";
  bool pipelined = false;
  std::string output;
  std::string format = "json";
};

int run_simulate(const SimulateOptions& o) {
  const TaskGraph graph = build_task_graph(o.m, policy_from_string(o.policy));
  const CostModel cost{cost_model_from_string(o.cost)};
  const Schedule sched = simulate(graph, cost, o.pipelined);

  const auto issues = validate_schedule(sched);
  if (!issues.empty()) {
    for (const std::string& issue : issues) std::cerr << "invalid schedule: " << issue << "\n";
    return 1;
  }

  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw IoError("cannot open '" + o.output + "' for writing");
    export_schedule(sched, o.format == "csv" ? ScheduleFormat::Csv : ScheduleFormat::Json, out);
  }

  const OccupancyReport report = occupancy_report(sched);
  std::cout << "makespan=" << report.makespan << "\n";
  for (const NodeUsage& n : report.nodes) {
    std::cout << "node " << n.node << (n.node == kExtraNodeId ? " (extra)" : "") << " busy="
              << n.busy << " occupancy=" << shortest(n.fraction) << "\n";
  }
  return 0;
}

struct BenchOptions {
  int min_m = 8;
  int max_m = 14;
  int reps = 5;
  std::string workers = "1,2,4";
  std::uint64_t seed = 0;
};

std::vector<int> parse_worker_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int w = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), w);
    if (ec != std::errc{} || ptr != item.data() + item.size() || w < 1) {
      throw std::invalid_argument("bench: bad worker count '" + item + "'");
    }
    out.push_back(w);
  }
  if (out.empty()) throw std::invalid_argument("bench: no worker counts given");
  return out;
}

int run_bench(const BenchOptions& o) {
  if (o.min_m < 1 || o.min_m > o.max_m || o.max_m > 24) {
    throw std::invalid_argument("bench: need 1 <= min-m <= max-m <= 24");
  }
  if (o.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
  const std::vector<int> workers = parse_worker_list(o.workers);

  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::int64_t> dist(-1000, 1000);
  std::cout << "algo,n,reps,ns_per_element,additions\n";

  using Clock = std::chrono::steady_clock;
  for (int m = o.min_m; m <= o.max_m; ++m) {
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::int64_t> input(n);
    for (auto& v : input) v = dist(rng);

    const auto run_row = [&](const std::string& algo, auto&& transform) {
      // One instrumented pass for the op count, one warm-up, then timed reps
      // on fresh copies; the copy stays outside the timer.
      OpTally tally;
      std::vector<std::int64_t> buf = input;
      transform(buf, &tally);
      buf = input;
      transform(buf, nullptr);
      std::chrono::nanoseconds elapsed{0};
      for (int rep = 0; rep < o.reps; ++rep) {
        buf = input;
        const auto t0 = Clock::now();
        transform(buf, nullptr);
        elapsed += Clock::now() - t0;
      }
      const double ns_per_element =
          static_cast<double>(elapsed.count()) / (static_cast<double>(o.reps) * static_cast<double>(n));
      std::cout << algo << ',' << n << ',' << o.reps << ',' << shortest(ns_per_element) << ','
                << tally.additions << "\n";
    };

    run_row("chw", [](std::vector<std::int64_t>& buf, OpTally* t) {
      chw_forward_inplace(std::span<std::int64_t>(buf), ScalingMode::Unnormalized, t);
    });
    run_row("fwht-natural", [](std::vector<std::int64_t>& buf, OpTally* t) {
      fwht_natural_inplace(std::span<std::int64_t>(buf), ScalingMode::Unnormalized, t);
    });
    for (int w : workers) {
      run_row("parallel-w" + std::to_string(w), [w](std::vector<std::int64_t>& buf, OpTally* t) {
        parallel_execute_inplace(std::span<std::int64_t>(buf), w, ScalingMode::Unnormalized, t);
      });
    }
  }
  return 0;
}

struct GenerateOptions {
  int m = 0;
  std::string output;
  std::string format = "text";
  std::string kind = "random-int";
  std::uint64_t seed = 0;
};

int run_generate(const GenerateOptions& o) {
  if (o.m < 0 || o.m > 24) throw std::invalid_argument("generate: need 0 <= m <= 24");
  const std::size_t n = std::size_t{1} << o.m;
  const SignalFormat fmt = parse_signal_format(o.format);
  std::mt19937_64 rng(o.seed);
  if (o.kind == "random-float") {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(rng);
    write_signal<double>(x, o.output, fmt);
  } else {
    std::vector<std::int64_t> x(n, 0);
    if (o.kind == "impulse") {
      x[0] = 1;
    } else {
      std::uniform_int_distribution<std::int64_t> dist(-1000, 1000);
      for (auto& v : x) v = dist(rng);
    }
    write_signal<std::int64_t>(x, o.output, fmt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Walsh-Hadamard transforms computed as cascades of Haar wavelet transforms"};
  app.require_subcommand(1);

  TransformOptions topt;
  CLI::App* transform = app.add_subcommand("transform", "transform a signal file");
  transform->add_option("-i,--input", topt.input, "input signal file")->required();
  transform->add_option("-o,--output", topt.output, "output signal file")->required();
  transform->add_option("--algo", topt.algo, "algorithm")
      ->check(CLI::IsMember({"chw", "fwht", "haar", "haar-walsh"}));
  transform->add_option("--mode", topt.mode, "scaling mode")
      ->check(CLI::IsMember({"unnormalized", "orthonormal"}));
  transform->add_option("--order", topt.order, "output coefficient order")
      ->check(CLI::IsMember({"natural", "dyadic", "sequency"}));
  transform->add_option("--format", topt.format, "signal file format")
      ->check(CLI::IsMember({"text", "binary"}));
  transform->add_flag("--count-ops", topt.count_ops, "report operation counts on stderr");

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand("verify", "check the fast path against the dense matrix");
  verify->add_option("-m,--m", vopt.m, "signal level (length 2^m)")->required();
  verify->add_option("--trials", vopt.trials, "number of random signals")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopt.seed, "random seed");
  verify->add_option("--mode", vopt.mode, "scaling mode")
      ->check(CLI::IsMember({"unnormalized", "orthonormal"}));

  SimulateOptions sopt;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate the node-per-scale schedule");
  simulate->add_option("-m,--m", sopt.m, "signal level (length 2^m)")->required();
  simulate->add_option("--cost", sopt.cost, "task cost model")
      ->check(CLI::IsMember({"haar-ops", "unit-per-task", "linear-in-size"}));
  simulate->add_option("--policy", sopt.policy, "initial transform placement")
      ->check(CLI::IsMember({"extra-node", "reuse-largest-node"}));
  simulate->add_flag("--pipelined", sopt.pipelined,
                     "release stage tasks as initial Haar levels complete");
  simulate->add_option("-o,--output", sopt.output, "write the schedule to this file");
  simulate->add_option("--format", sopt.format, "schedule file format")
      ->check(CLI::IsMember({"json", "csv"}));

  BenchOptions bopt;
  CLI::App* bench = app.add_subcommand("bench", "time the transforms (CSV on stdout)");
  bench->add_option("--min-m", bopt.min_m, "smallest level");
  bench->add_option("--max-m", bopt.max_m, "largest level (<= 24)");
  bench->add_option("--reps", bopt.reps, "timed repetitions per row");
  bench->add_option("--workers", bopt.workers, "comma-separated worker counts");
  bench->add_option("--seed", bopt.seed, "random seed");

  GenerateOptions gopt;
  CLI::App* generate = app.add_subcommand("generate", "write a test signal");
  generate->add_option("-m,--m", gopt.m, "signal level (length 2^m)")->required();
  generate->add_option("-o,--output", gopt.output, "output signal file")->required();
  generate->add_option("--format", gopt.format, "signal file format")
      ->check(CLI::IsMember({"text", "binary"}));
  generate->add_option("--kind", gopt.kind, "signal contents")
      ->check(CLI::IsMember({"random-int", "random-float", "impulse"}));
  generate->add_option("--seed", gopt.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*transform) {
      return parse_mode(topt.mode) == ScalingMode::Unnormalized
                 ? run_transform<std::int64_t>(topt)
                 : run_transform<double>(topt);
    }
    if (*verify) return run_verify(vopt);
    if (*simulate) return run_simulate(sopt);
    if (*bench) return run_bench(bopt);
    if (*generate) return run_generate(gopt);
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
