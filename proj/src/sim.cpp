// SPDX-License-Identifier: Apache-2.0
#include "wet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wet/clustering.hpp"
#include "wet/codebook.hpp"
#include "wet/feedback.hpp"

namespace wet {

namespace {

Rng derive(std::uint64_t seed, std::uint64_t block, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), purpose};
  return Rng(seq);
}

struct TrainingOutcome {
  std::vector<MisoChannel> channels;
  std::vector<ChannelEstimate> estimates;
};

TrainingOutcome train(const SimConfig& config, BlockStreams& streams) {
  TrainingOutcome out;
  out.channels = sample_ensemble(config.ensemble(), streams.channels);
  const TrainingSchedule schedule = build_schedule(config.num_antennas, config.num_angles, config.power);
  const NoiseModel noise{config.noise_sigma()};
  const auto reports = measure_block(out.channels, schedule, noise, streams.noise);
  out.estimates.reserve(reports.size());
  for (const auto& r : reports)
    out.estimates.push_back(assemble_estimate(r, config.power, noise, config.epsilon_scale));
  return out;
}

struct Selection {
  Clustering clustering;
  int cluster = 0;
  std::vector<int> members;
};

Selection select(const SimConfig& config, int num_clusters, const std::vector<ChannelEstimate>& est,
                 Rng& rng) {
  std::vector<PhasePoint> points;
  points.reserve(est.size());
  for (const auto& e : est) points.push_back({e.er_id, e.rel_phases});
  ClusterOptions opt = config.cluster_options();
  opt.num_clusters = num_clusters;
  Selection s;
  s.clustering = lloyd_cluster(points, opt, rng);
  s.cluster = select_cluster(s.clustering, config.scatter);
  s.members = s.clustering.members(s.cluster);
  return s;
}

real time_factor(const SimConfig& config) {
  if (config.block_minislots <= 0) return 1;
  const real training = static_cast<real>((config.num_antennas - 1) * (config.num_angles + 1));
  return std::max(real(0), 1 - training / config.block_minislots);
}

void evaluate(const SimConfig& config, const TrainingOutcome& tr, const MatrixC& cov, BlockResult& r) {
  const auto n = static_cast<Eigen::Index>(tr.channels.size());
  const real factor = time_factor(config);
  r.harvested.resize(n);
  r.phase_error_pct.resize(n);
  r.magnitude_error_pct.resize(n);
  r.within_epsilon.resize(n);
  r.flagged_estimates = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ch = tr.channels[i];
    const auto& e = tr.estimates[i];
    r.harvested[i] = factor * received_energy(effective_vector(ch), cov, config.xi);
    r.phase_error_pct[i] = phase_error_percent(e, ch);
    r.magnitude_error_pct[i] = magnitude_error_percent(e, ch);
    r.within_epsilon[i] = estimation_error_norm(e, ch) <= e.epsilon;
    if (e.flagged()) ++r.flagged_estimates;
  }
}

void maxmin(const SimConfig& config, const TrainingOutcome& tr, const std::vector<int>& members,
            BlockResult& r) {
  RobustSpec spec;
  spec.power = config.power;
  for (int id : members) spec.channels.push_back({tr.estimates[id].vector(), tr.estimates[id].epsilon});
  const CovarianceSolution sol = solve_maxmin(spec);
  r.t = sol.t;
  r.solver_status = sol.status;
  r.newton_steps = sol.newton_steps;
  r.warnings = sol.warnings;

  MatrixC used = sol.cov.entries;
  if (sol.status == SolverStatus::optimal) {
    const ExtractedBeam b = extract_beam(sol);
    r.rank_ratio = b.rank_ratio;
    if (b.rank_warning)
      r.warnings.push_back("covariance is not rank one; transmitting the full covariance");
    else
      used = outer(b.beam.entries);
  } else {
    r.warnings.push_back(std::string("solver status ") + to_string(sol.status));
  }
  evaluate(config, tr, used, r);
}

}  // namespace

BlockStreams::BlockStreams(std::uint64_t seed, std::uint64_t block)
    : channels(derive(seed, block, 1)), noise(derive(seed, block, 2)), clustering(derive(seed, block, 3)),
      beams(derive(seed, block, 4)) {}

real BlockResult::mean_harvested() const { return harvested.size() ? harvested.mean() : 0; }

real BlockResult::mean_selected() const {
  if (selected.empty()) return mean_harvested();
  real s = 0;
  for (int id : selected) s += harvested[id];
  return s / static_cast<real>(selected.size());
}

BlockResult run_block(const SimConfig& config, std::uint64_t block) {
  return run_baseline_block(config, config.policy == Policy::no_cluster_maxmin ? Policy::no_cluster_maxmin
                                                                              : Policy::cluster_maxmin,
                            block);
}

BlockResult run_baseline_block(const SimConfig& config, Policy policy, std::uint64_t block) {
  config.validate();
  BlockStreams streams(config.rng_seed, block);
  const TrainingOutcome tr = train(config, streams);
  const int n = config.num_ers;
  const int k = config.num_antennas;

  BlockResult r;
  r.block = block;
  r.policy = policy;

  switch (policy) {
    case Policy::cluster_maxmin:
    case Policy::no_cluster_maxmin: {
      const int q = policy == Policy::cluster_maxmin ? config.num_clusters : 1;
      const Selection s = select(config, q, tr.estimates, streams.clustering);
      r.selected = s.members;
      r.selected_cluster = s.cluster;
      maxmin(config, tr, s.members, r);
      return r;
    }
    case Policy::egt_selected: {
      const Selection s = select(config, config.num_clusters, tr.estimates, streams.clustering);
      r.selected = s.members;
      r.selected_cluster = s.cluster;
      VectorR phases(k);
      phases << 0, s.clustering.centroid_phases[s.cluster];
      const VectorC b = egt_beam(effective_vector(VectorR::Ones(k), phases), config.power);
      evaluate(config, tr, outer(b), r);
      return r;
    }
    case Policy::round_robin: {
      const int target = static_cast<int>(block % static_cast<std::uint64_t>(n));
      r.selected = {target};
      evaluate(config, tr, outer(mrt_beam(tr.estimates[target].vector(), config.power)), r);
      return r;
    }
    case Policy::mrt_perfect_csi: {
      const int target = static_cast<int>(block % static_cast<std::uint64_t>(n));
      r.selected = {target};
      evaluate(config, tr, outer(mrt_beam(effective_vector(tr.channels[target]), config.power)), r);
      return r;
    }
    case Policy::best_channel: {
      int best = 0;
      real bn = -1;
      for (int i = 0; i < n; ++i) {
        const real v = tr.estimates[i].vector().squaredNorm();
        if (v > bn) {
          bn = v;
          best = i;
        }
      }
      r.selected = {best};
      evaluate(config, tr, outer(mrt_beam(tr.estimates[best].vector(), config.power)), r);
      return r;
    }
    case Policy::random_beam: {
      std::uniform_real_distribution<real> phase(0, kTwoPi);
      const real a = std::sqrt(config.power / k);
      VectorC b(k);
      for (auto& x : b) x = std::polar(a, phase(streams.beams));
      evaluate(config, tr, outer(b), r);
      return r;
    }
  }
  throw UsageError("unhandled policy");
}

EpsilonCalibration calibrate_epsilon(const SimConfig& config, int trials, real coverage) {
  config.validate();
  if (trials < 1) throw ConfigError("calibration needs at least one trial");
  if (!(coverage > 0 && coverage <= 1)) throw ConfigError("coverage must lie in (0, 1]");
  const real sigma = config.noise_sigma();
  if (!(sigma > 0)) throw ConfigError("calibration needs sigma > 0");
  const real unit = epsilon_radius(1, sigma, config.num_antennas, config.num_angles);

  SimConfig one = config;
  one.num_ers = 1;
  one.num_clusters = 1;
  one.path_loss.clear();
  one.path_loss_span = 1;
  EpsilonCalibration cal;
  cal.trials = trials;
  cal.ratios.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    BlockStreams streams(config.rng_seed, static_cast<std::uint64_t>(i));
    const TrainingOutcome tr = train(one, streams);
    cal.ratios.push_back(estimation_error_norm(tr.estimates[0], tr.channels[0]) / unit);
  }
  std::sort(cal.ratios.begin(), cal.ratios.end());
  const auto idx = static_cast<std::size_t>(std::ceil(coverage * trials)) - 1;
  cal.scale = cal.ratios[std::min(idx, cal.ratios.size() - 1)];
  cal.coverage = static_cast<real>(idx + 1) / trials;
  return cal;
}

}  // namespace wet
