// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wet/clustering.hpp"
#include "wet/estimation.hpp"
#include "wet/robust.hpp"
#include "wet/sim.hpp"

namespace wet {

inline constexpr int kCsvSchemaVersion = 1;

/// er_id,v,l,rssi. Repeated single-antenna readings continue l past L+1.
void write_training_csv(std::ostream& os, const std::vector<TrainingReport>& reports);

/// er_id,k,magnitude,phase,epsilon,flags
void write_estimates_csv(std::ostream& os, const std::vector<ChannelEstimate>& estimates);

/// er_id,cluster followed by a blank line and cluster,dim,centroid
void write_clustering_csv(std::ostream& os, const Clustering& clustering);

nlohmann::json to_json(const CovarianceSolution& solution, const ExtractedBeam* beam = nullptr);
/// row,col,re,im for every covariance entry, then t, duals and diagnostics as key,value rows.
void write_solution_csv(std::ostream& os, const CovarianceSolution& solution,
                        const ExtractedBeam* beam = nullptr);

/// Design-decision modes and definitions behind a campaign.
nlohmann::json campaign_metadata(const SimConfig& config);

std::vector<std::string> summary_columns();
void write_summary_header(std::ostream& os, const nlohmann::json& meta);
void write_summary_row(std::ostream& os, const CampaignSummary& s, const std::string& label);
void write_blocks_header(std::ostream& os);
void write_blocks_rows(std::ostream& os, const std::string& label, const std::vector<BlockResult>& blocks);

/// Creates `dir` and writes summary.csv, blocks.csv and meta.json for a list of campaigns.
struct LabelledCampaign {
  std::string label;
  CampaignResult result;
};
void write_campaign_outputs(const std::filesystem::path& dir, const std::vector<LabelledCampaign>& runs,
                            const nlohmann::json& meta);

}  // namespace wet
