// SPDX-License-Identifier: Apache-2.0
#include "wet/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "wet/feedback.hpp"

namespace wet {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  f << std::setprecision(12);
  return f;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ";" : "") + std::to_string(ids[i]);
  return s;
}

}  // namespace

void write_training_csv(std::ostream& os, const std::vector<TrainingReport>& reports) {
  os << "er_id,v,l,rssi\n";
  for (const auto& r : reports) {
    for (Eigen::Index v = 0; v < r.readings.rows(); ++v)
      for (Eigen::Index l = 0; l < r.readings.cols(); ++l)
        os << r.er_id << ',' << v + 2 << ',' << l + 1 << ',' << r.readings(v, l) << '\n';
    for (Eigen::Index j = 0; j < r.reference_repeats.size(); ++j)
      os << r.er_id << ",2," << r.readings.cols() + 1 + j << ',' << r.reference_repeats[j] << '\n';
  }
}

void write_estimates_csv(std::ostream& os, const std::vector<ChannelEstimate>& estimates) {
  os << "er_id,k,magnitude,phase,epsilon,flags\n";
  for (const auto& e : estimates) {
    const VectorR ph = e.phases();
    for (int k = 0; k < e.num_antennas(); ++k) {
      std::string flags;
      if (e.clamped[k]) flags = "clamped";
      if (k > 0 && e.degenerate[k - 1]) flags += flags.empty() ? "degenerate" : "|degenerate";
      os << e.er_id << ',' << k + 1 << ',' << e.magnitudes[k] << ',' << ph[k] << ',' << e.epsilon << ','
         << flags << '\n';
    }
  }
}

void write_clustering_csv(std::ostream& os, const Clustering& c) {
  os << "er_id,cluster\n";
  for (std::size_t i = 0; i < c.assignments.size(); ++i) os << c.er_ids[i] << ',' << c.assignments[i] << '\n';
  os << "\ncluster,dim,centroid\n";
  for (int q = 0; q < c.num_clusters(); ++q)
    for (Eigen::Index d = 0; d < c.centroids[q].size(); ++d)
      os << q << ',' << d << ',' << c.centroids[q][d] << '\n';
}

nlohmann::json to_json(const CovarianceSolution& s, const ExtractedBeam* beam) {
  nlohmann::json j;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < s.cov.entries.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (Eigen::Index c = 0; c < s.cov.entries.cols(); ++c) {
      rr.push_back(s.cov.entries(r, c).real());
      ri.push_back(s.cov.entries(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  j["covariance_re"] = re;
  j["covariance_im"] = im;
  j["power_budget"] = s.cov.power_budget;
  j["t"] = s.t;
  j["duals"] = s.duals;
  j["status"] = to_string(s.status);
  j["newton_steps"] = s.newton_steps;
  j["gap"] = s.gap;
  j["dropped"] = s.dropped;
  j["warnings"] = s.warnings;
  if (beam) j["rank_ratio"] = beam->rank_ratio;
  return j;
}

void write_solution_csv(std::ostream& os, const CovarianceSolution& s, const ExtractedBeam* beam) {
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < s.cov.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < s.cov.entries.cols(); ++c)
      os << r << ',' << c << ',' << s.cov.entries(r, c).real() << ',' << s.cov.entries(r, c).imag() << '\n';
  os << "\nkey,value\n";
  os << "t," << s.t << '\n';
  for (std::size_t i = 0; i < s.duals.size(); ++i) os << "dual_" << i << ',' << s.duals[i] << '\n';
  os << "status," << to_string(s.status) << '\n';
  os << "newton_steps," << s.newton_steps << '\n';
  if (beam) os << "rank_ratio," << beam->rank_ratio << '\n';
}

nlohmann::json campaign_metadata(const SimConfig& config) {
  nlohmann::json m;
  m["schema_version"] = kCsvSchemaVersion;
  m["config"] = config_entries(config);
  m["noise_sigma"] = config.noise_sigma();
  m["modes"] = {
      {"snr_definition", "SNR_dB = 10 log10(mean pairwise RSSI / sigma), mean pairwise RSSI = (P/4)*2*E[|h|^2]"},
      {"phase_error_percent", "100 * circular |phi_hat - phi| / (2 pi), averaged over v"},
      {"magnitude_error_percent", "100 * ||h_hat| - |h|| / |h|, averaged over k"},
      {"epsilon", "c * sigma * sqrt(K / L)"},
      {"clustering_coordinates", "estimated relative phases"},
      {"clustering_metric", to_string(config.metric)},
      {"cluster_selection", to_string(config.scatter)},
      {"training_beam_power", "P/2 per beam; pairwise sqrt(P)/2 per antenna, single-antenna sqrt(P/2)"},
      {"two_antenna_reference_readings", "L"},
      {"harvested_energy_channel", "true"},
      {"training_overhead_charged", config.block_minislots > 0},
      {"rank_one_threshold", kRankOneThreshold},
      {"mrt_perfect_csi_target", "ER at index block mod N"},
      {"harvested_selected_random_beam", "mean over all ERs"},
  };
  return m;
}

std::vector<std::string> summary_columns() {
  return {"label", "policy", "K", "N", "L", "Q", "P", "snr_db", "sigma", "blocks",
          "harvested_all_mean", "harvested_all_se", "harvested_selected_mean", "harvested_selected_se",
          "phase_error_pct", "magnitude_error_pct", "t_mean", "epsilon_coverage", "mean_selected_size",
          "nonoptimal_solves", "rank_warnings", "flagged_estimates", "selection_max_min_ratio"};
}

void write_summary_header(std::ostream& os, const nlohmann::json& meta) {
  os << "# schema_version=" << kCsvSchemaVersion << '\n';
  if (meta.contains("modes"))
    for (const auto& [k, v] : meta["modes"].items()) os << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  const auto cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void write_summary_row(std::ostream& os, const CampaignSummary& s, const std::string& label) {
  const auto& c = s.config;
  const auto fair = fairness_report(s);
  os << label << ',' << to_string(s.policy) << ',' << c.num_antennas << ',' << c.num_ers << ','
     << c.num_angles << ',' << c.num_clusters << ',' << c.power << ',' << c.snr_db << ','
     << c.noise_sigma() << ',' << s.blocks << ',' << s.harvested_all.mean << ','
     << s.harvested_all.stderr_mean << ',' << s.harvested_selected.mean << ','
     << s.harvested_selected.stderr_mean << ',' << s.phase_error_pct.mean << ','
     << s.magnitude_error_pct.mean << ',' << s.t.mean << ',' << s.epsilon_coverage << ','
     << s.mean_selected_size << ',' << s.nonoptimal_solves << ',' << s.rank_warnings << ','
     << s.flagged_estimates << ',' << fair.max_min_ratio << '\n';
}

void write_blocks_header(std::ostream& os) {
  os << "# schema_version=" << kCsvSchemaVersion << '\n';
  os << "label,policy,block,er_id,selected,harvested,phase_error_pct,magnitude_error_pct,within_epsilon,"
        "t,rank_ratio,solver_status,selected_members\n";
}

void write_blocks_rows(std::ostream& os, const std::string& label, const std::vector<BlockResult>& blocks) {
  for (const auto& b : blocks) {
    const std::string members = join_ids(b.selected);
    for (Eigen::Index i = 0; i < b.harvested.size(); ++i) {
      const bool sel = std::find(b.selected.begin(), b.selected.end(), static_cast<int>(i)) != b.selected.end();
      os << label << ',' << to_string(b.policy) << ',' << b.block << ',' << i << ',' << (sel ? 1 : 0) << ','
         << b.harvested[i] << ',' << b.phase_error_pct[i] << ',' << b.magnitude_error_pct[i] << ','
         << (b.within_epsilon[i] ? 1 : 0) << ',' << b.t << ',' << b.rank_ratio << ','
         << to_string(b.solver_status) << ',' << members << '\n';
    }
  }
}

void write_campaign_outputs(const std::filesystem::path& dir, const std::vector<LabelledCampaign>& runs,
                            const nlohmann::json& meta) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  auto summary = open_out(dir / "summary.csv");
  write_summary_header(summary, meta);
  for (const auto& r : runs) write_summary_row(summary, r.result.summary, r.label);

  auto blocks = open_out(dir / "blocks.csv");
  write_blocks_header(blocks);
  for (const auto& r : runs) write_blocks_rows(blocks, r.label, r.result.blocks);

  auto m = open_out(dir / "meta.json");
  m << meta.dump(2) << '\n';
  if (!summary || !blocks || !m) throw std::runtime_error("write failure in '" + dir.string() + "'");
}

}  // namespace wet
