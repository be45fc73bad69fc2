#pragma once

// Independent jobs on a thread pool, streaming statistics, result tables.
//
// A job's result depends only on the job (never on the worker or the
// completion order); failures become rows instead of disappearing.

#include "gfront/log.hpp"
#include "gfront/types.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace gfront {

/// job seed = hash64(master_seed, job_index)
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t job_index) {
  return hash64(master_seed, job_index);
}

struct Job {
  std::size_t id = 0;
  std::string flow_spec;  ///< canonical text of the flow parameters
  std::string op;         ///< travel_time | shape | compare | ...
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
};

template <class R>
struct JobOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string diagnostic;
  R value{};
};

/// Runs fn on every job with up to `parallelism` threads.  Outcome k belongs
/// to jobs[k].  An exception in fn marks that job failed; others continue.
template <class J, class Fn>
auto run_ensemble(const std::vector<J>& jobs, int parallelism, Fn&& fn)
    -> std::vector<JobOutcome<std::invoke_result_t<Fn&, const J&>>> {
  using R = std::invoke_result_t<Fn&, const J&>;
  if (jobs.empty()) throw Error("run_ensemble: no jobs");
  std::vector<JobOutcome<R>> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) {
      auto& o = out[k];
      o.index = k;
      if constexpr (requires { jobs[k].seed; }) o.seed = jobs[k].seed;
      try {
        o.value = fn(jobs[k]);
        o.ok = true;
      } catch (const std::exception& e) {
        o.diagnostic = e.what();
        log::error("job ", k, " failed: ", e.what());
      } catch (...) {
        o.diagnostic = "unknown exception";
        log::error("job ", k, " failed with an unknown exception");
      }
    }
  };
  const int n = std::max(1, std::min<int>(parallelism, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

/// Indices of jobs whose seed already appeared earlier (logged as warnings).
template <class J>
std::vector<std::size_t> duplicate_seeds(const std::vector<J>& jobs) {
  std::map<std::uint64_t, std::size_t> first;
  std::vector<std::size_t> dup;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    auto [it, fresh] = first.emplace(jobs[k].seed, k);
    if (!fresh) {
      dup.push_back(k);
      log::error("warning: job ", k, " repeats the seed of job ", it->second, "; results will coincide");
    }
  }
  return dup;
}

/// Count, mean, M2 (Welford/Chan), min, max.
struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = kInf;
  double max = -kInf;

  void add(double x);
  /// Sample variance (n − 1); 0 below two samples.
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_mean() const { return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

Aggregate merge_aggregates(const Aggregate& a, const Aggregate& b);

/// Keyed statistics; merging is key-wise.
using AggregateTable = std::map<std::string, Aggregate>;
AggregateTable merge_aggregates(const AggregateTable& a, const AggregateTable& b);

inline constexpr const char* kResultsHeader = "# gfront-results v1";

/// A CSV table with the schema header line, fixed columns and string cells.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void write(std::ostream& os) const;
  void write(const std::string& path) const;
  static ResultTable read(std::istream& is);
  static ResultTable read(const std::string& path);
};

/// Shortest text that reads back to the same double (round-trip exact).
std::string format_double(double v);

}  // namespace gfront
