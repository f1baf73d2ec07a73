// SPDX-License-Identifier: Apache-2.0
//
// wetsim: campaign runner for cluster-based wireless energy transfer.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wet/io.hpp"
#include "wet/sim.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<int> blocks;
  std::string policy;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value config file");
  cmd->add_option("--seed", c.seed, "campaign seed");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--blocks", c.blocks, "number of blocks per config point");
  cmd->add_option("--policy", c.policy, "scheduler policy");
  cmd->add_option("--threads", c.threads, "worker threads")->capture_default_str();
}

wet::SimConfig base_config(const Common& c, wet::SimConfig defaults = {}) {
  wet::SimConfig cfg = c.config_path.empty() ? defaults : wet::load_config(c.config_path, defaults);
  if (c.seed) cfg.rng_seed = *c.seed;
  if (c.blocks) cfg.blocks = *c.blocks;
  if (!c.policy.empty()) cfg.policy = wet::parse_policy(c.policy);
  cfg.validate();
  return cfg;
}

std::string point_label(const wet::SimConfig& c) {
  return "K" + std::to_string(c.num_antennas) + "_N" + std::to_string(c.num_ers) + "_L" +
         std::to_string(c.num_angles) + "_Q" + std::to_string(c.num_clusters);
}

void report(const wet::LabelledCampaign& run) {
  const auto& s = run.result.summary;
  std::cout << run.label << ' ' << wet::to_string(s.policy) << ": harvested/ER " << s.harvested_all.mean
            << ", harvested/S*-member " << s.harvested_selected.mean << " (+-" << s.harvested_selected.stderr_mean
            << "), phase err " << s.phase_error_pct.mean << "%, magnitude err " << s.magnitude_error_pct.mean
            << "%\n";
}

void run_points(const std::vector<std::pair<std::string, wet::SimConfig>>& points,
                const std::vector<wet::Policy>& extra, const Common& common, nlohmann::json meta) {
  std::vector<wet::LabelledCampaign> runs;
  for (const auto& [label, cfg] : points) {
    std::vector<wet::Policy> policies{cfg.policy};
    for (auto p : extra)
      if (p != cfg.policy) policies.push_back(p);
    for (auto p : policies) {
      runs.push_back({label, wet::run_campaign(cfg, p, common.threads)});
      report(runs.back());
    }
  }
  wet::write_campaign_outputs(common.out, runs, meta);
  std::cout << "wrote " << common.out << "/summary.csv, blocks.csv, meta.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-based wireless energy transfer simulator"};
  app.require_subcommand(1);

  Common run_opts, sweep_opts, cal_opts, fig2_opts, fig3_opts;

  auto* run = app.add_subcommand("run", "run one campaign from a config file");
  add_common(run, run_opts);

  auto* sweep = app.add_subcommand("sweep", "grid over config axes");
  add_common(sweep, sweep_opts);
  std::vector<std::string> axes;
  sweep->add_option("--axis", axes, "key=v1,v2,... (repeatable)")->required();

  auto* cal = app.add_subcommand("calibrate-epsilon", "calibrate the uncertainty-radius constant");
  add_common(cal, cal_opts);
  int trials = 10000;
  double coverage = 0.95;
  cal->add_option("--trials", trials)->capture_default_str();
  cal->add_option("--coverage", coverage)->capture_default_str();

  auto* fig2 = app.add_subcommand("fig2", "estimation error and MRT/EGT energy versus feedback amount");
  add_common(fig2, fig2_opts);
  auto* fig3 = app.add_subcommand("fig3", "harvested energy versus number of clusters");
  add_common(fig3, fig3_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = base_config(run_opts);
      run_points({{point_label(cfg), cfg}}, cfg.compare, run_opts, wet::campaign_metadata(cfg));
    } else if (sweep->parsed()) {
      const auto base = base_config(sweep_opts);
      std::vector<std::pair<std::string, wet::SimConfig>> points{{"", base}};
      for (const auto& axis : axes) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos) throw wet::ConfigError("--axis expects key=v1,v2");
        const std::string key = axis.substr(0, eq);
        std::vector<std::string> values;
        std::stringstream ss(axis.substr(eq + 1));
        for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
        std::vector<std::pair<std::string, wet::SimConfig>> next;
        for (const auto& [label, cfg] : points)
          for (const auto& v : values) {
            auto c = cfg;
            wet::set_config_value(c, key, v);
            next.push_back({label + (label.empty() ? "" : "_") + key + "=" + v, c});
          }
        points = std::move(next);
      }
      for (auto& p : points) p.second.validate();
      run_points(points, base.compare, sweep_opts, wet::campaign_metadata(base));
    } else if (cal->parsed()) {
      const auto cfg = base_config(cal_opts);
      const auto res = wet::calibrate_epsilon(cfg, trials, coverage);
      std::cout << "epsilon_scale = " << res.scale << "  (coverage " << res.coverage << " over " << res.trials
                << " trials, K=" << cfg.num_antennas << " L=" << cfg.num_angles << " sigma=" << cfg.noise_sigma()
                << ")\n";
      std::filesystem::create_directories(cal_opts.out);
      std::ofstream f(std::filesystem::path(cal_opts.out) / "calibration.json");
      nlohmann::json j = wet::campaign_metadata(cfg);
      j["epsilon_scale"] = res.scale;
      j["coverage"] = res.coverage;
      j["trials"] = res.trials;
      f << j.dump(2) << '\n';
    } else if (fig2->parsed()) {
      wet::SimConfig d;
      d.num_antennas = 4;
      d.num_ers = 1;
      d.num_clusters = 1;
      d.snr_db = 20;
      const auto base = base_config(fig2_opts, d);
      std::vector<std::pair<std::string, wet::SimConfig>> points;
      for (int l : {4, 8, 12, 16, 20, 24, 28, 32}) {
        auto c = base;
        c.num_angles = l;
        points.push_back({"L" + std::to_string(l) + "_feedback" + std::to_string((c.num_antennas - 1) * (l + 1)), c});
      }
      run_points(points, {wet::Policy::mrt_perfect_csi, wet::Policy::egt_selected}, fig2_opts,
                 wet::campaign_metadata(base));
    } else if (fig3->parsed()) {
      const auto base = base_config(fig3_opts);
      std::vector<std::pair<std::string, wet::SimConfig>> points;
      for (int k : {2, 4})
        for (int n : {20, 40})
          for (int q = 1; q <= 6; ++q) {
            auto c = base;
            c.num_antennas = k;
            c.num_ers = n;
            c.num_clusters = q;
            points.push_back({point_label(c), c});
          }
      run_points(points, {}, fig3_opts, wet::campaign_metadata(base));
    }
  } catch (const std::exception& e) {
    std::cerr << "wetsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
