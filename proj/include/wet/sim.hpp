// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wet/config.hpp"
#include "wet/estimation.hpp"
#include "wet/robust.hpp"

namespace wet {

/// Independent random streams of one block, derived from (campaign seed, block index).
///
/// Each pipeline stage draws from its own stream, so every policy run on the
/// same block sees the same channels and the same measurement noise.
struct BlockStreams {
  Rng channels;
  Rng noise;
  Rng clustering;
  Rng beams;

  BlockStreams(std::uint64_t seed, std::uint64_t block);
};

struct BlockResult {
  std::uint64_t block = 0;
  Policy policy = Policy::cluster_maxmin;
  /// ERs the beam was designed for; empty for random-beam.
  std::vector<int> selected;
  int selected_cluster = -1;
  /// Energy harvested by every ER under the transmitted covariance and the true channel.
  VectorR harvested;
  VectorR phase_error_pct;
  VectorR magnitude_error_pct;
  /// |h_hat - h| <= epsilon, per ER.
  std::vector<bool> within_epsilon;
  real t = 0;
  real rank_ratio = 1;
  SolverStatus solver_status = SolverStatus::optimal;
  int newton_steps = 0;
  int flagged_estimates = 0;
  std::vector<std::string> warnings;

  real mean_harvested() const;
  /// Mean over `selected`; the all-ER mean when nothing was selected.
  real mean_selected() const;
};

/// Cluster-based pipeline: sample, train, estimate, cluster, pick S*, solve the
/// robust max-min problem over S*, transmit the extracted beam to all N ERs.
///
/// Uses Q = 1 when config.policy is no-cluster-maxmin.
BlockResult run_block(const SimConfig& config, std::uint64_t block);

/// Any policy, including the two max-min ones.
BlockResult run_baseline_block(const SimConfig& config, Policy policy, std::uint64_t block);

struct Stat {
  real mean = 0;
  real stderr_mean = 0;
  long count = 0;
};

struct CampaignSummary {
  SimConfig config;
  Policy policy = Policy::cluster_maxmin;
  int blocks = 0;
  Stat harvested_all;       // per-block mean over all N ERs
  Stat harvested_selected;  // per-block mean over S*
  Stat phase_error_pct;
  Stat magnitude_error_pct;
  Stat t;
  real epsilon_coverage = 0;
  int nonoptimal_solves = 0;
  int rank_warnings = 0;
  long flagged_estimates = 0;
  std::vector<long> selection_counts;
  real mean_selected_size = 0;
};

struct CampaignResult {
  CampaignSummary summary;
  std::vector<BlockResult> blocks;
};

/// Runs config.blocks blocks of `policy` on up to `threads` workers.
/// Aggregation is in block order, so the result does not depend on the thread count.
CampaignResult run_campaign(const SimConfig& config, Policy policy, int threads = 1);
CampaignResult run_campaign(const SimConfig& config, int threads = 1);

CampaignSummary summarize(const SimConfig& config, Policy policy, const std::vector<BlockResult>& blocks);

struct FairnessReport {
  std::vector<real> frequencies;  // fraction of blocks each ER was in S*
  real max_min_ratio = 0;
};

FairnessReport fairness_report(const CampaignSummary& summary);

struct EpsilonCalibration {
  real scale = 0;
  real coverage = 0;
  int trials = 0;
  /// sorted |eta| / (sigma sqrt(K/L)) samples
  std::vector<real> ratios;
};

/// Smallest c for which |h_hat - h| <= c sigma sqrt(K/L) in the requested fraction of trials.
EpsilonCalibration calibrate_epsilon(const SimConfig& config, int trials, real coverage = 0.95);

}  // namespace wet
