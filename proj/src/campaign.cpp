// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "wet/sim.hpp"

namespace wet {

namespace {

// Welford accumulation in a fixed order.
struct Accumulator {
  long n = 0;
  real mean = 0;
  real m2 = 0;

  void add(real x) {
    ++n;
    const real d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  Stat stat() const {
    Stat s;
    s.count = n;
    s.mean = mean;
    s.stderr_mean = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0;
    return s;
  }
};

}  // namespace

CampaignSummary summarize(const SimConfig& config, Policy policy, const std::vector<BlockResult>& blocks) {
  CampaignSummary s;
  s.config = config;
  s.policy = policy;
  s.blocks = static_cast<int>(blocks.size());
  s.selection_counts.assign(config.num_ers, 0);

  Accumulator all, sel, ph, mag, t;
  long covered = 0, total = 0;
  real size_acc = 0;
  for (const auto& b : blocks) {
    all.add(b.mean_harvested());
    sel.add(b.mean_selected());
    ph.add(b.phase_error_pct.mean());
    mag.add(b.magnitude_error_pct.mean());
    t.add(b.t);
    for (bool w : b.within_epsilon) {
      covered += w ? 1 : 0;
      ++total;
    }
    if (b.solver_status != SolverStatus::optimal &&
        (b.policy == Policy::cluster_maxmin || b.policy == Policy::no_cluster_maxmin))
      ++s.nonoptimal_solves;
    if (b.rank_ratio < kRankOneThreshold) ++s.rank_warnings;
    s.flagged_estimates += b.flagged_estimates;
    for (int id : b.selected) ++s.selection_counts[id];
    size_acc += static_cast<real>(b.selected.size());
  }
  s.harvested_all = all.stat();
  s.harvested_selected = sel.stat();
  s.phase_error_pct = ph.stat();
  s.magnitude_error_pct = mag.stat();
  s.t = t.stat();
  s.epsilon_coverage = total ? static_cast<real>(covered) / total : 0;
  s.mean_selected_size = blocks.empty() ? 0 : size_acc / blocks.size();
  return s;
}

CampaignResult run_campaign(const SimConfig& config, Policy policy, int threads) {
  config.validate();
  const int count = config.blocks;
  std::vector<BlockResult> results(count);
  const int workers = std::clamp(threads, 1, count);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = run_baseline_block(config, policy, static_cast<std::uint64_t>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  CampaignResult out;
  out.summary = summarize(config, policy, results);
  out.blocks = std::move(results);
  return out;
}

CampaignResult run_campaign(const SimConfig& config, int threads) {
  return run_campaign(config, config.policy, threads);
}

FairnessReport fairness_report(const CampaignSummary& summary) {
  FairnessReport r;
  if (summary.blocks == 0) return r;
  for (long c : summary.selection_counts) r.frequencies.push_back(static_cast<real>(c) / summary.blocks);
  const auto [lo, hi] = std::minmax_element(r.frequencies.begin(), r.frequencies.end());
  r.max_min_ratio = *lo > 0 ? *hi / *lo : std::numeric_limits<real>::infinity();
  return r;
}

}  // namespace wet
