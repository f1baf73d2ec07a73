// SPDX-License-Identifier: Apache-2.0
#include "wet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wet/codebook.hpp"
#include "wet/feedback.hpp"

namespace wet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

real to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const real x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  return x;
}

std::string join(const std::vector<real>& xs) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

std::string fmt(real x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(Policy p) {
  switch (p) {
    case Policy::cluster_maxmin: return "cluster-maxmin";
    case Policy::no_cluster_maxmin: return "no-cluster-maxmin";
    case Policy::round_robin: return "round-robin";
    case Policy::random_beam: return "random-beam";
    case Policy::best_channel: return "best-channel";
    case Policy::egt_selected: return "egt-selected";
    case Policy::mrt_perfect_csi: return "mrt-perfect-csi";
  }
  return "unknown";
}

Policy parse_policy(const std::string& name) {
  for (Policy p : {Policy::cluster_maxmin, Policy::no_cluster_maxmin, Policy::round_robin,
                   Policy::random_beam, Policy::best_channel, Policy::egt_selected,
                   Policy::mrt_perfect_csi})
    if (name == to_string(p)) return p;
  throw ConfigError("unknown policy '" + name + "'");
}

const char* to_string(PhaseMetric m) {
  return m == PhaseMetric::euclidean ? "euclidean" : "unit-circle";
}

const char* to_string(ScatterMode m) { return m == ScatterMode::total ? "total" : "per-member"; }

void SimConfig::validate() const {
  if (num_antennas < 2) throw ConfigError("K must be >= 2");
  if (num_ers < 1) throw ConfigError("N must be >= 1");
  if (num_angles < 3) throw ConfigError("L must be >= 3");
  if (num_clusters < 1 || num_clusters > num_ers) throw ConfigError("Q must lie in [1, N]");
  if (!(power > 0)) throw ConfigError("P must be positive");
  if (!(amplitude_low > 0) || !(amplitude_high >= amplitude_low))
    throw ConfigError("amplitude bounds must satisfy 0 < low <= high");
  if (!path_loss.empty() && path_loss.size() != static_cast<std::size_t>(num_ers))
    throw ConfigError("path_loss needs exactly N entries");
  for (real m : path_loss)
    if (!(m > 0)) throw ConfigError("path_loss entries must be positive");
  if (!(path_loss_span >= 1)) throw ConfigError("path_loss_span must be >= 1");
  if (!(epsilon_scale >= 0)) throw ConfigError("epsilon_scale must be non-negative");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (blocks < 1) throw ConfigError("blocks must be >= 1");
  if (!(xi > 0)) throw ConfigError("xi must be positive");
  if (block_minislots < 0) throw ConfigError("block_minislots must be >= 0");
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite");
}

real SimConfig::noise_sigma() const {
  if (sigma >= 0) return sigma;
  return sigma_from_snr(snr_db, power, amplitude_low, amplitude_high);
}

std::vector<real> SimConfig::amplitude_multipliers() const {
  if (!path_loss.empty()) return path_loss;
  if (path_loss_span <= 1) return {};
  std::vector<real> m(num_ers, 1);
  for (int i = 0; i < num_ers && num_ers > 1; ++i)
    m[i] = std::pow(path_loss_span, -static_cast<real>(i) / (num_ers - 1));
  return m;
}

EnsembleConfig SimConfig::ensemble() const {
  EnsembleConfig e;
  e.num_antennas = num_antennas;
  e.num_ers = num_ers;
  e.amplitude_low = amplitude_low;
  e.amplitude_high = amplitude_high;
  e.rng_seed = rng_seed;
  e.path_loss = amplitude_multipliers();
  return e;
}

ClusterOptions SimConfig::cluster_options() const {
  ClusterOptions o;
  o.num_clusters = policy == Policy::no_cluster_maxmin ? 1 : num_clusters;
  o.restarts = restarts;
  o.max_iterations = max_iterations;
  o.metric = metric;
  return o;
}

void set_config_value(SimConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  if (key == "K" || key == "num_antennas") c.num_antennas = static_cast<int>(to_int(key, v));
  else if (key == "N" || key == "num_ers") c.num_ers = static_cast<int>(to_int(key, v));
  else if (key == "L" || key == "num_angles") c.num_angles = static_cast<int>(to_int(key, v));
  else if (key == "Q" || key == "num_clusters") c.num_clusters = static_cast<int>(to_int(key, v));
  else if (key == "P" || key == "power") c.power = to_real(key, v);
  else if (key == "snr_db") c.snr_db = to_real(key, v);
  else if (key == "sigma") c.sigma = to_real(key, v);
  else if (key == "amplitude_low") c.amplitude_low = to_real(key, v);
  else if (key == "amplitude_high") c.amplitude_high = to_real(key, v);
  else if (key == "path_loss") {
    c.path_loss.clear();
    for (const auto& s : split(v, ',')) c.path_loss.push_back(to_real(key, s));
  } else if (key == "path_loss_span") c.path_loss_span = to_real(key, v);
  else if (key == "epsilon_scale") c.epsilon_scale = to_real(key, v);
  else if (key == "metric") {
    if (v == "euclidean") c.metric = PhaseMetric::euclidean;
    else if (v == "unit-circle") c.metric = PhaseMetric::unit_circle;
    else throw ConfigError("metric must be euclidean or unit-circle");
  } else if (key == "scatter") {
    if (v == "total") c.scatter = ScatterMode::total;
    else if (v == "per-member") c.scatter = ScatterMode::per_member;
    else throw ConfigError("scatter must be total or per-member");
  } else if (key == "restarts") c.restarts = static_cast<int>(to_int(key, v));
  else if (key == "max_iterations") c.max_iterations = static_cast<int>(to_int(key, v));
  else if (key == "policy") c.policy = parse_policy(v);
  else if (key == "compare") {
    c.compare.clear();
    for (const auto& s : split(v, ',')) c.compare.push_back(parse_policy(s));
  } else if (key == "blocks") c.blocks = static_cast<int>(to_int(key, v));
  else if (key == "seed" || key == "rng_seed") c.rng_seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "xi") c.xi = to_real(key, v);
  else if (key == "block_minislots") c.block_minislots = static_cast<int>(to_int(key, v));
  else throw ConfigError("unknown config key '" + key + "'");
}

SimConfig parse_config(const std::string& text, SimConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
  }
  base.validate();
  return base;
}

SimConfig load_config(const std::string& path, SimConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::map<std::string, std::string> config_entries(const SimConfig& c) {
  std::map<std::string, std::string> m;
  m["num_antennas"] = std::to_string(c.num_antennas);
  m["num_ers"] = std::to_string(c.num_ers);
  m["num_angles"] = std::to_string(c.num_angles);
  m["num_clusters"] = std::to_string(c.num_clusters);
  m["power"] = fmt(c.power);
  m["snr_db"] = fmt(c.snr_db);
  m["sigma"] = fmt(c.sigma);
  m["amplitude_low"] = fmt(c.amplitude_low);
  m["amplitude_high"] = fmt(c.amplitude_high);
  m["path_loss"] = join(c.path_loss);
  m["path_loss_span"] = fmt(c.path_loss_span);
  m["epsilon_scale"] = fmt(c.epsilon_scale);
  m["metric"] = to_string(c.metric);
  m["scatter"] = to_string(c.scatter);
  m["restarts"] = std::to_string(c.restarts);
  m["max_iterations"] = std::to_string(c.max_iterations);
  m["policy"] = to_string(c.policy);
  std::string cmp;
  for (std::size_t i = 0; i < c.compare.size(); ++i) cmp += (i ? "," : "") + std::string(to_string(c.compare[i]));
  m["compare"] = cmp;
  m["blocks"] = std::to_string(c.blocks);
  m["seed"] = std::to_string(c.rng_seed);
  m["xi"] = fmt(c.xi);
  m["block_minislots"] = std::to_string(c.block_minislots);
  return m;
}

}  // namespace wet
