#include "dwdm80/experiment/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "dwdm80/common/error.hpp"
#include "dwdm80/common/seed.hpp"
#include "dwdm80/metrics/analytic.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::experiment {

using nlohmann::json;

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t default_jobs() {
  const char* env = std::getenv("DWDM80_JOBS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  return (end != env && *end == '\0' && v > 0) ? static_cast<std::size_t>(v) : 1;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string limit(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string axis_key(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

struct TrialResult {
  metrics::BerResult ber;
  double margin_db = kNaN;
  int bits_per_frame = 0;
  dmt::SnrProfile snr;
  dmt::LoadingTable table;
};

bool analytic(const SeriesConfig& s) {
  return s.format == Format::pam4_semianalytic || s.format == Format::pdm64qam;
}

// Channel index of a vsb-wdm-400g point; the single-channel position otherwise.
int channel_index(const Scenario& sc, double axis_value) {
  return sc.kind == ScenarioKind::vsb_wdm_400g ? static_cast<int>(axis_value) : 0;
}

TrialResult evaluate(const Scenario& sc, const SeriesConfig& se, double axis_value,
                     const channel::LinkSpec& link, std::uint64_t seed) {
  TrialResult out;
  switch (se.format) {
    case Format::pam4:
      out.ber = pam4_trial(se.pam4, link, sc.bits_per_trial, seed);
      break;
    case Format::pam4_semianalytic:
      out.ber.ber = link.osnr_db ? metrics::pam4_dd_ber_semianalytic(*link.osnr_db, se.pam4.scheme, se.pam4.baud,
                                                                     se.pam4.baud / 2.0)
                                 : 0.0;
      break;
    case Format::pdm64qam: {
      const double baud = se.pdm_rate_bps / (2.0 * 6.0);
      out.ber.ber = link.osnr_db ? metrics::ber_mqam_awgn(64, metrics::osnr_to_snr(*link.osnr_db, baud, 2)) : 0.0;
      break;
    }
    case Format::dmt: {
      const ChannelFactory factory =
          se.wdm ? wdm_channel(link, *se.wdm, channel_index(sc, axis_value), se.dmt.modem, true,
                               derive_seed(seed, std::string_view("neighbors")))
                 : single_channel(link, se.detuning_hz);
      DmtTrial t = dmt_trial(se.dmt, factory, sc.bits_per_trial, seed);
      out.ber = t.ber;
      out.bits_per_frame = t.bits_per_frame;
      if (se.dmt.loading == DmtLoadingMode::adaptive) out.margin_db = t.loading.margin_db;
      out.snr = std::move(t.snr);
      out.table = std::move(t.loading.table);
      break;
    }
  }
  return out;
}

// BER at one search point, summed over trials. Model failures (no sync, no
// feasible loading) count as a failed point.
metrics::BerResult search_point(const Scenario& sc, const SeriesConfig& se, const channel::LinkSpec& link,
                                const std::string& key) {
  metrics::BerResult total;
  const std::size_t trials = analytic(se) ? 1 : sc.trials;
  for (std::size_t t = 0; t < trials; ++t) {
    try {
      const TrialResult r = evaluate(sc, se, 0.0, link, derive_seed(sc.seed, key + "/trial=" + std::to_string(t)));
      if (analytic(se)) return r.ber;
      total += r.ber;
    } catch (const ModelError&) {
      return metrics::make_ber(1, 1);
    }
  }
  return total;
}

struct SearchResult {
  double hd = kNaN;
  double sd = kNaN;
  std::string flag;
  std::vector<std::string> warnings;
};

SearchResult required_osnr_search(const Scenario& sc, const SeriesConfig& se) {
  SearchResult out;
  channel::LinkSpec link = series_link(sc, se, 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    const double target = pass == 0 ? sc.hd.ber_limit : sc.sd.ber_limit;
    auto ber_at = [&](double osnr) {
      link.osnr_db = osnr;
      return search_point(sc, se, link, "series=" + se.name + "/search=required_osnr/osnr=" + axis_key(osnr));
    };
    try {
      const metrics::RequiredOsnr r = metrics::required_osnr(ber_at, target);
      (pass == 0 ? out.hd : out.sd) = r.osnr_db;
      if (r.saturated) out.warnings.push_back(se.name + ": required OSNR saturated at the lower bracket edge");
    } catch (const OutOfBracket& e) {
      out.warnings.push_back(se.name + ": " + e.what());
    }
  }
  return out;
}

SearchResult max_reach_search(const Scenario& sc, const SeriesConfig& se) {
  SearchResult out;
  auto ber_at = [&](double km) {
    channel::LinkSpec link = series_link(sc, se, km);
    return search_point(sc, se, link, "series=" + se.name + "/search=max_reach/km=" + axis_key(km));
  };
  const metrics::MaxReach r = metrics::max_reach(ber_at, sc.hd, *sc.search_max_reach);
  out.hd = r.reach_km;
  out.flag = !r.passes_at_low ? "fails_at_low" : (r.non_monotone ? "non_monotone" : "ok");
  if (r.non_monotone) out.warnings.push_back(se.name + ": BER is not monotone in distance (fading)");
  if (!r.passes_at_low) out.warnings.push_back(se.name + ": fails the FEC limit at the lower bracket edge");
  return out;
}

std::vector<double> series_points(const Scenario& sc, const SeriesConfig& se) {
  if (sc.kind == ScenarioKind::vsb_wdm_400g && sc.axis_values.empty()) {
    std::vector<double> v;
    for (int i = 0; i < se.wdm->channel_count; ++i) v.push_back(i);
    return v;
  }
  return sc.axis_values;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::string> csv_columns(ScenarioKind kind) {
  std::vector<std::string> c = {"schema_version", "scenario_id", "kind",  "series",       "format",
                                "axis",           "axis_value",  "ber",   "ci95",         "errors",
                                "bits",           "fec_hd_limit", "fec_sd_limit", "pass_hd", "pass_sd"};
  switch (kind) {
    case ScenarioKind::b2b_osnr:
      c.insert(c.end(), {"required_osnr_hd_db", "required_osnr_sd_db"});
      break;
    case ScenarioKind::reach_sweep:
      c.insert(c.end(), {"osnr_db", "max_reach_hd_km", "reach_flag"});
      break;
    case ScenarioKind::dmt_rate_82km:
      c.insert(c.end(), {"length_km", "rate_gbps", "bits_per_frame", "raw_rate_gbps", "net_rate_hd_gbps",
                         "net_rate_sd_gbps", "margin_db"});
      break;
    case ScenarioKind::vsb_wdm_400g:
      c.insert(c.end(), {"length_km", "osnr_db", "channel_count", "grid_ghz", "detuning_ghz",
                         "per_channel_rate_gbps", "aggregate_raw_rate_gbps", "bits_per_frame", "margin_db"});
      break;
  }
  return c;
}

RunSummary run_scenario(Scenario sc, const RunOptions& options) {
  if (options.seed) sc.seed = *options.seed;
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);

  struct Unit {
    std::size_t series;
    std::size_t point;
    std::size_t trial;
    double axis_value;
    std::string key;
    std::uint64_t seed;
  };
  std::vector<Unit> units;
  std::vector<std::vector<double>> points(sc.series.size());
  for (std::size_t s = 0; s < sc.series.size(); ++s) {
    const auto& se = sc.series[s];
    points[s] = series_points(sc, se);
    for (std::size_t p = 0; p < points[s].size(); ++p) {
      const std::size_t trials = analytic(se) ? 1 : sc.trials;
      for (std::size_t t = 0; t < trials; ++t) {
        std::string key = "series=" + se.name + "/" + axis_name(sc.kind) + "=" + axis_key(points[s][p]) +
                          "/trial=" + std::to_string(t);
        const std::uint64_t seed = derive_seed(sc.seed, key);
        units.push_back({s, p, t, points[s][p], std::move(key), seed});
      }
    }
  }

  // Searches are independent work units alongside the trials.
  std::vector<std::size_t> search_series;
  if (sc.search_required_osnr || sc.search_max_reach) {
    for (std::size_t s = 0; s < sc.series.size(); ++s) search_series.push_back(s);
  }
  std::vector<TrialResult> trial_results(units.size());
  std::vector<SearchResult> search_results(search_series.size());
  parallel_for(search_series.size() + units.size(), jobs, [&](std::size_t i) {
    if (i < search_series.size()) {
      const auto& se = sc.series[search_series[i]];
      search_results[i] = sc.search_required_osnr ? required_osnr_search(sc, se) : max_reach_search(sc, se);
      return;
    }
    const Unit& u = units[i - search_series.size()];
    const auto& se = sc.series[u.series];
    trial_results[i - search_series.size()] =
        evaluate(sc, se, u.axis_value, series_link(sc, se, u.axis_value), u.seed);
  });

  RunSummary summary;
  for (const auto& r : search_results) summary.warnings.insert(summary.warnings.end(), r.warnings.begin(), r.warnings.end());

  // Ordered reduction over trials.
  std::ostringstream csv;
  const auto columns = csv_columns(sc.kind);
  for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
  csv << "\n";
  std::ostringstream profile;
  bool have_profile = false;

  std::size_t u = 0;
  for (std::size_t s = 0; s < sc.series.size(); ++s) {
    const auto& se = sc.series[s];
    const SearchResult* search = nullptr;
    for (std::size_t k = 0; k < search_series.size(); ++k) {
      if (search_series[k] == s) search = &search_results[k];
    }
    for (std::size_t p = 0; p < points[s].size(); ++p) {
      metrics::BerResult ber;
      double margin_sum = 0.0;
      std::size_t margins = 0;
      int bits_per_frame = 0;
      const double axis_value = points[s][p];
      const std::size_t first = u;
      for (; u < units.size() && units[u].series == s && units[u].point == p; ++u) {
        const TrialResult& r = trial_results[u];
        if (analytic(se)) {
          ber = r.ber;
        } else {
          ber += r.ber;
        }
        if (!std::isnan(r.margin_db)) {
          margin_sum += r.margin_db;
          ++margins;
        }
        bits_per_frame = r.bits_per_frame;
      }
      const double margin = margins ? margin_sum / static_cast<double>(margins) : kNaN;

      if (sc.snr_profile && sc.snr_profile->series == se.name && sc.snr_profile->axis_value == axis_value) {
        const TrialResult& r = trial_results[first];
        profile << "subcarrier_index,freq_hz,snr_db,bits_allocated,power_scale\n";
        for (std::size_t k = 0; k < r.snr.snr.size(); ++k) {
          profile << (se.dmt.modem.first_subcarrier + k) << "," << num(r.snr.frequency[k]) << ","
                  << num(10.0 * std::log10(std::max(r.snr.snr[k], 1e-30))) << "," << r.table.bits[k] << ","
                  << num(r.table.power[k]) << "\n";
        }
        have_profile = true;
      }

      const channel::LinkSpec link = series_link(sc, se, axis_value);
      csv << sc.schema_version << "," << sc.id << "," << to_string(sc.kind) << "," << se.name << ","
          << to_string(se.format) << "," << axis_name(sc.kind) << "," << num(axis_value) << "," << num(ber.ber)
          << "," << num(ber.ci95) << "," << ber.errors << "," << ber.bits << "," << limit(sc.hd.ber_limit) << ","
          << limit(sc.sd.ber_limit) << "," << (sc.hd.passes(ber.ber) ? 1 : 0) << ","
          << (sc.sd.passes(ber.ber) ? 1 : 0);
      switch (sc.kind) {
        case ScenarioKind::b2b_osnr:
          csv << "," << num(search ? search->hd : kNaN) << "," << num(search ? search->sd : kNaN);
          break;
        case ScenarioKind::reach_sweep:
          csv << "," << num(link.osnr_db ? *link.osnr_db : kNaN) << "," << num(search ? search->hd : kNaN) << ","
              << (search ? search->flag : "");
          break;
        case ScenarioKind::dmt_rate_82km: {
          const double raw = dmt::raw_rate(bits_per_frame, se.dmt.modem);
          csv << "," << num(link.length_km) << "," << num(se.dmt.rate_bps / 1e9) << "," << bits_per_frame << ","
              << num(raw / 1e9) << "," << num(sc.hd.net_rate(raw) / 1e9) << "," << num(sc.sd.net_rate(raw) / 1e9)
              << "," << num(margin);
          break;
        }
        case ScenarioKind::vsb_wdm_400g: {
          const auto& plan = *se.wdm;
          csv << "," << num(link.length_km) << "," << num(link.osnr_db ? *link.osnr_db : kNaN) << ","
              << plan.channel_count << "," << num(plan.grid_spacing / 1e9) << ","
              << num(channel::channel_detuning(plan, static_cast<int>(axis_value)) / 1e9) << ","
              << num(plan.per_channel_rate / 1e9) << "," << num(channel::aggregate_rate(plan) / 1e9) << ","
              << bits_per_frame << "," << num(margin);
          break;
        }
      }
      csv << "\n";
      ++summary.rows;
    }
  }

  json seeds = json::array();
  for (const auto& un : units) seeds.push_back({{"unit", un.key}, {"seed", un.seed}});
  json manifest = {{"tool", "dwdm80"},
                   {"version", DWDM80_VERSION},
                   {"generated_at", utc_timestamp()},
                   {"root_seed", sc.seed},
                   {"kernel_isa", simd::isa_name(simd::kernels().isa)},
                   {"config", to_json(sc)},
                   {"work_units", seeds},
                   {"warnings", summary.warnings}};

  summary.directory = options.out_dir / sc.id;
  std::filesystem::create_directories(summary.directory);
  summary.files.push_back("results.csv");
  if (have_profile) summary.files.push_back("snr_profile.csv");
  summary.files.push_back("manifest.json");
  manifest["files"] = summary.files;

  write_atomic(summary.directory / "results.csv", csv.str());
  if (have_profile) write_atomic(summary.directory / "snr_profile.csv", profile.str());
  write_atomic(summary.directory / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace dwdm80::experiment
