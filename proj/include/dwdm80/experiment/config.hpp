#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwdm80/channel/fiber.hpp"
#include "dwdm80/channel/wdm.hpp"
#include "dwdm80/experiment/links.hpp"
#include "dwdm80/metrics/ber.hpp"
#include "dwdm80/metrics/search.hpp"

namespace dwdm80::experiment {

/// Schema violation. key() is the dotted path of the offending entry,
/// e.g. "link.length_km" or "series[1].pam4.ffe.taps".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class ScenarioKind { b2b_osnr, reach_sweep, dmt_rate_82km, vsb_wdm_400g };
enum class Format { pam4, pam4_semianalytic, dmt, pdm64qam };

std::string to_string(ScenarioKind kind);
std::string to_string(Format format);
/// Sweep axis of each kind: osnr_db, length_km, osnr_db, channel_index.
std::string axis_name(ScenarioKind kind);

struct SeriesConfig {
  std::string name;
  Format format = Format::pam4;
  Pam4Link pam4;
  DmtLink dmt;
  double detuning_hz = 0.0;           // single-channel DMT carrier offset
  std::optional<channel::WdmPlan> wdm;  // vsb-wdm-400g only
  double pdm_rate_bps = 448e9;          // pdm64qam only
  std::optional<double> length_km;      // overrides link.length_km
  std::optional<double> osnr_db;        // overrides link.osnr_db
};

struct SnrProfileRequest {
  std::string series;
  double axis_value = 0.0;
};

struct Scenario {
  int schema_version = 1;
  std::string id;
  ScenarioKind kind = ScenarioKind::b2b_osnr;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::size_t bits_per_trial = 100000;
  metrics::FecThreshold hd = metrics::FecThreshold::hard_decision();
  metrics::FecThreshold sd = metrics::FecThreshold::soft_decision();
  channel::LinkSpec link;
  std::vector<double> axis_values;  // empty for vsb-wdm-400g means every channel
  std::vector<SeriesConfig> series;
  bool search_required_osnr = false;                 // b2b-osnr
  std::optional<metrics::ReachSearchOptions> search_max_reach;  // reach-sweep
  std::optional<SnrProfileRequest> snr_profile;      // DMT kinds
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the key. Missing optional keys take the documented
/// defaults (see to_json for the resolved form).
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

/// Fully resolved configuration, every default spelled out.
nlohmann::json to_json(const Scenario& s);

/// The four builtin templates, by id.
std::vector<std::string> builtin_names();
nlohmann::json builtin_template(const std::string& name);

/// Link seen by one series at one axis value.
channel::LinkSpec series_link(const Scenario& s, const SeriesConfig& series, double axis_value);

}  // namespace dwdm80::experiment
