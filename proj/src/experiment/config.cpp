#include "dwdm80/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dwdm80::experiment {

using nlohmann::json;

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::b2b_osnr: return "b2b-osnr";
    case ScenarioKind::reach_sweep: return "reach-sweep";
    case ScenarioKind::dmt_rate_82km: return "dmt-rate-82km";
    case ScenarioKind::vsb_wdm_400g: return "vsb-wdm-400g";
  }
  return "?";
}

std::string to_string(Format format) {
  switch (format) {
    case Format::pam4: return "pam4";
    case Format::pam4_semianalytic: return "pam4_semianalytic";
    case Format::dmt: return "dmt";
    case Format::pdm64qam: return "pdm64qam";
  }
  return "?";
}

std::string axis_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::b2b_osnr:
    case ScenarioKind::dmt_rate_82km: return "osnr_db";
    case ScenarioKind::reach_sweep: return "length_km";
    case ScenarioKind::vsb_wdm_400g: return "channel_index";
  }
  return "?";
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Strict view of one JSON object: every read marks the key as known and
// finish() rejects whatever was not read.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "(root)" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  std::string key(const std::string& k) const { return join(path_, k); }

  const json& raw(const std::string& k) {
    known_.insert(k);
    if (!j_.contains(k)) throw ConfigError(key(k), "required key missing");
    return j_.at(k);
  }

  double number(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_number()) throw ConfigError(key(k), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key(k), "must be finite");
    return d;
  }
  double number(const std::string& k, double def) { return has(k) ? number(k) : def; }

  std::optional<double> optional_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return number(k);
  }

  std::uint64_t unsigned_int(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned())) {
      throw ConfigError(key(k), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t unsigned_int(const std::string& k, std::uint64_t def) { return has(k) ? unsigned_int(k) : def; }

  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    if (!v.is_boolean()) throw ConfigError(key(k), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k) {
    const json& v = raw(k);
    if (!v.is_string()) throw ConfigError(key(k), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& k, const std::string& def) { return has(k) ? string(k) : def; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!known_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

double positive(Reader& r, const std::string& k, double def) {
  const double v = r.number(k, def);
  if (!(v > 0.0)) throw ConfigError(r.key(k), "must be > 0");
  return v;
}

signal::FilterSpec parse_filter(const json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.string("kind");
  signal::FilterSpec f;
  if (kind == "bessel") {
    f = signal::FilterSpec::bessel(positive(r, "cutoff_ghz", 0.0) * 1e9,
                                   static_cast<int>(r.unsigned_int("order", 5)));
  } else if (kind == "rectangular") {
    f = signal::FilterSpec::rectangular(positive(r, "cutoff_ghz", 0.0) * 1e9);
  } else if (kind == "interleaver") {
    f = signal::FilterSpec::interleaver(positive(r, "bandwidth_ghz", 42.0) * 1e9,
                                        positive(r, "period_ghz", 100.0) * 1e9,
                                        r.number("center_ghz", 0.0) * 1e9,
                                        static_cast<int>(r.unsigned_int("order", 3)));
  } else {
    throw ConfigError(r.key("kind"), "expected bessel, rectangular or interleaver");
  }
  r.finish();
  try {
    signal::validate(f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return f;
}

json filter_json(const signal::FilterSpec& f) {
  switch (f.kind) {
    case signal::FilterKind::bessel_lowpass:
      return {{"kind", "bessel"}, {"cutoff_ghz", f.bandwidth / 1e9}, {"order", f.order}};
    case signal::FilterKind::rectangular_lowpass:
      return {{"kind", "rectangular"}, {"cutoff_ghz", f.bandwidth / 1e9}};
    case signal::FilterKind::interleaver:
      return {{"kind", "interleaver"},
              {"bandwidth_ghz", f.bandwidth / 1e9},
              {"period_ghz", f.period / 1e9},
              {"center_ghz", f.center / 1e9},
              {"order", f.order}};
  }
  return {};
}

std::optional<signal::FilterSpec> optional_filter(Reader& r, const json& parent, const std::string& k) {
  if (!r.has(k)) return std::nullopt;
  return parse_filter(parent.at(k), r.key(k));
}

json optional_filter_json(const std::optional<signal::FilterSpec>& f) {
  return f ? filter_json(*f) : json(nullptr);
}

channel::LinkSpec parse_link(const json& j, const std::string& path) {
  Reader r(j, path);
  channel::LinkSpec link;
  link.length_km = r.number("length_km", 0.0);
  if (link.length_km < 0.0) throw ConfigError(r.key("length_km"), "must be >= 0");
  link.dispersion_ps_nm_km = r.number("dispersion_ps_nm_km", 17.0);
  link.attenuation_db_km = r.number("attenuation_db_km", 0.2);
  if (link.attenuation_db_km < 0.0) throw ConfigError(r.key("attenuation_db_km"), "must be >= 0");
  link.wavelength_nm = positive(r, "wavelength_nm", 1550.0);
  link.osnr_db = r.optional_number("osnr_db");
  link.orthogonal_pol_noise = r.boolean("orthogonal_pol_noise", true);
  if (r.has("optical_filters")) {
    const json& arr = j.at("optical_filters");
    if (!arr.is_array()) throw ConfigError(r.key("optical_filters"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      link.optical_filters.push_back(parse_filter(arr[i], r.key("optical_filters") + "[" + std::to_string(i) + "]"));
    }
  }
  r.finish();
  return link;
}

json link_json(const channel::LinkSpec& l) {
  json filters = json::array();
  for (const auto& f : l.optical_filters) filters.push_back(filter_json(f));
  return {{"length_km", l.length_km},
          {"dispersion_ps_nm_km", l.dispersion_ps_nm_km},
          {"attenuation_db_km", l.attenuation_db_km},
          {"wavelength_nm", l.wavelength_nm},
          {"osnr_db", l.osnr_db ? json(*l.osnr_db) : json(nullptr)},
          {"orthogonal_pol_noise", l.orthogonal_pol_noise},
          {"optical_filters", filters}};
}

pam4::ThresholdMode parse_threshold_mode(Reader& r, const std::string& k) {
  const std::string v = r.string(k, "min_error");
  if (v == "midpoint") return pam4::ThresholdMode::midpoint;
  if (v == "gaussian_ml") return pam4::ThresholdMode::gaussian_ml;
  if (v == "min_error") return pam4::ThresholdMode::min_error;
  throw ConfigError(r.key(k), "expected midpoint, gaussian_ml or min_error");
}

std::string threshold_mode_name(pam4::ThresholdMode m) {
  switch (m) {
    case pam4::ThresholdMode::midpoint: return "midpoint";
    case pam4::ThresholdMode::gaussian_ml: return "gaussian_ml";
    case pam4::ThresholdMode::min_error: return "min_error";
  }
  return "?";
}

Pam4Link parse_pam4(const json& j, const std::string& path) {
  Reader r(j, path);
  Pam4Link p;
  const std::string spacing = r.string("spacing", "power");
  if (spacing == "field") {
    p.scheme.spacing = pam4::LevelSpacing::equidistant_field;
  } else if (spacing == "power") {
    p.scheme.spacing = pam4::LevelSpacing::equidistant_power;
  } else {
    throw ConfigError(r.key("spacing"), "expected field or power");
  }
  p.baud = positive(r, "baud_gbaud", 56.0) * 1e9;
  p.samples_per_symbol = r.unsigned_int("samples_per_symbol", 4);
  if (p.samples_per_symbol < 2) throw ConfigError(r.key("samples_per_symbol"), "must be >= 2");
  p.tx_filter = optional_filter(r, j, "tx_filter");
  p.rx_filter = optional_filter(r, j, "rx_filter");
  if (r.has("ffe")) {
    Reader f(j.at("ffe"), r.key("ffe"));
    pam4::FfeConfig c;
    c.n_taps = f.unsigned_int("taps", 13);
    if (c.n_taps % 2 == 0 || c.n_taps == 0) throw ConfigError(f.key("taps"), "must be odd");
    c.training_length = f.unsigned_int("training_symbols", 2000);
    if (c.training_length < 10 * c.n_taps) throw ConfigError(f.key("training_symbols"), "must be >= 10 * taps");
    const std::string a = f.string("adaptation", "least_squares");
    if (a == "least_squares") {
      c.adaptation = pam4::FfeAdaptation::least_squares;
    } else if (a == "lms") {
      c.adaptation = pam4::FfeAdaptation::lms;
    } else {
      throw ConfigError(f.key("adaptation"), "expected least_squares or lms");
    }
    c.lms_step = positive(f, "lms_step", 0.02);
    c.lms_epochs = f.unsigned_int("lms_epochs", 40);
    f.finish();
    p.ffe = c;
  }
  p.thresholds = parse_threshold_mode(r, "thresholds");
  p.optical_matched_filter = r.boolean("optical_matched_filter", false);
  p.training_symbols = r.unsigned_int("training_symbols", 2000);
  r.finish();
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return p;
}

json pam4_json(const Pam4Link& p) {
  json ffe = nullptr;
  if (p.ffe) {
    ffe = {{"taps", p.ffe->n_taps},
           {"training_symbols", p.ffe->training_length},
           {"adaptation", p.ffe->adaptation == pam4::FfeAdaptation::lms ? "lms" : "least_squares"},
           {"lms_step", p.ffe->lms_step},
           {"lms_epochs", p.ffe->lms_epochs}};
  }
  return {{"spacing", p.scheme.spacing == pam4::LevelSpacing::equidistant_field ? "field" : "power"},
          {"baud_gbaud", p.baud / 1e9},
          {"samples_per_symbol", p.samples_per_symbol},
          {"tx_filter", optional_filter_json(p.tx_filter)},
          {"rx_filter", optional_filter_json(p.rx_filter)},
          {"ffe", ffe},
          {"thresholds", threshold_mode_name(p.thresholds)},
          {"optical_matched_filter", p.optical_matched_filter},
          {"training_symbols", p.training_symbols}};
}

DmtLink parse_dmt(const json& j, const std::string& path, double* detuning_hz) {
  Reader r(j, path);
  DmtLink d;
  auto& m = d.modem;
  m.fft_size = r.unsigned_int("fft_size", 512);
  m.cp_len = r.unsigned_int("cp_len", 16);
  m.first_subcarrier = r.unsigned_int("first_subcarrier", 1);
  m.last_subcarrier = r.unsigned_int("last_subcarrier", 255);
  m.dac_rate = positive(r, "dac_rate_gsps", 112.0) * 1e9;
  m.clip_ratio_db = r.number("clip_ratio_db", 9.5);
  m.training_frames = r.unsigned_int("training_frames", 32);
  m.oversampling = r.unsigned_int("oversampling", 2);
  m.tx_filter = optional_filter(r, j, "tx_filter");
  m.rx_filter = optional_filter(r, j, "rx_filter");
  m.sync_floor = r.number("sync_floor", 0.05);
  const std::string loading = r.string("loading", "adaptive");
  if (loading == "uniform") {
    d.loading = DmtLoadingMode::uniform;
  } else if (loading == "adaptive") {
    d.loading = DmtLoadingMode::adaptive;
  } else {
    throw ConfigError(r.key("loading"), "expected uniform or adaptive");
  }
  d.uniform_bits = static_cast<int>(r.unsigned_int("uniform_bits", 2));
  d.rate_bps = positive(r, "rate_gbps", 112.0) * 1e9;
  d.loading_ber = r.number("loading_ber", 4e-3);
  d.probe_frames = r.unsigned_int("probe_frames", 128);
  *detuning_hz = r.number("detuning_ghz", 0.0) * 1e9;
  r.finish();
  try {
    validate(d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return d;
}

json dmt_json(const DmtLink& d, double detuning_hz) {
  const auto& m = d.modem;
  return {{"fft_size", m.fft_size},
          {"cp_len", m.cp_len},
          {"first_subcarrier", m.first_subcarrier},
          {"last_subcarrier", m.last_subcarrier},
          {"dac_rate_gsps", m.dac_rate / 1e9},
          {"clip_ratio_db", m.clip_ratio_db},
          {"training_frames", m.training_frames},
          {"oversampling", m.oversampling},
          {"tx_filter", optional_filter_json(m.tx_filter)},
          {"rx_filter", optional_filter_json(m.rx_filter)},
          {"sync_floor", m.sync_floor},
          {"loading", d.loading == DmtLoadingMode::uniform ? "uniform" : "adaptive"},
          {"uniform_bits", d.uniform_bits},
          {"rate_gbps", d.rate_bps / 1e9},
          {"loading_ber", d.loading_ber},
          {"probe_frames", d.probe_frames},
          {"detuning_ghz", detuning_hz / 1e9}};
}

channel::WdmPlan parse_wdm(const json& j, const std::string& path) {
  Reader r(j, path);
  const auto n = r.unsigned_int("channels", 8);
  if (n < 1 || n > 16) throw ConfigError(r.key("channels"), "must lie in 1..16");
  const double grid = positive(r, "grid_ghz", 50.0) * 1e9;
  const double rate = positive(r, "per_channel_rate_gbps", 56.0) * 1e9;
  const double detuning = r.number("detuning_ghz", 0.0) * 1e9;
  const double composite = positive(r, "composite_rate_gsps", 448.0) * 1e9;
  channel::WdmPlan plan = channel::WdmPlan::uniform(static_cast<int>(n), grid, rate, detuning, composite);
  if (r.has("channel_filter")) plan.channel_filter = parse_filter(j.at("channel_filter"), r.key("channel_filter"));
  plan.filter_at_mux = r.boolean("filter_at_mux", true);
  r.finish();
  try {
    channel::validate(plan);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return plan;
}

json wdm_json(const channel::WdmPlan& p) {
  return {{"channels", p.channel_count},
          {"grid_ghz", p.grid_spacing / 1e9},
          {"per_channel_rate_gbps", p.per_channel_rate / 1e9},
          {"detuning_ghz", p.detuning.empty() ? 0.0 : p.detuning.front() / 1e9},
          {"composite_rate_gsps", p.composite_rate / 1e9},
          {"channel_filter", filter_json(p.channel_filter)},
          {"filter_at_mux", p.filter_at_mux}};
}

SeriesConfig parse_series(const json& j, const std::string& path, ScenarioKind kind) {
  Reader r(j, path);
  SeriesConfig s;
  s.name = r.string("name");
  if (s.name.empty() || s.name.find_first_of(",\"\n") != std::string::npos) {
    throw ConfigError(r.key("name"), "must be non-empty without commas, quotes or newlines");
  }
  const std::string format = r.string("format");
  if (format == "pam4") {
    s.format = Format::pam4;
  } else if (format == "pam4_semianalytic") {
    s.format = Format::pam4_semianalytic;
  } else if (format == "dmt") {
    s.format = Format::dmt;
  } else if (format == "pdm64qam") {
    s.format = Format::pdm64qam;
  } else {
    throw ConfigError(r.key("format"), "expected pam4, pam4_semianalytic, dmt or pdm64qam");
  }
  if (s.format == Format::pam4 || s.format == Format::pam4_semianalytic) {
    s.pam4 = parse_pam4(r.has("pam4") ? j.at("pam4") : json::object(), r.key("pam4"));
  } else if (r.has("pam4")) {
    throw ConfigError(r.key("pam4"), "only valid for pam4 formats");
  }
  if (s.format == Format::dmt) {
    s.dmt = parse_dmt(r.has("dmt") ? j.at("dmt") : json::object(), r.key("dmt"), &s.detuning_hz);
  } else if (r.has("dmt")) {
    throw ConfigError(r.key("dmt"), "only valid for the dmt format");
  }
  if (s.format == Format::pdm64qam) {
    s.pdm_rate_bps = positive(r, "rate_gbps", 448.0) * 1e9;
  } else if (r.has("rate_gbps")) {
    throw ConfigError(r.key("rate_gbps"), "only valid for pdm64qam");
  }
  if (r.has("wdm")) {
    if (kind != ScenarioKind::vsb_wdm_400g) throw ConfigError(r.key("wdm"), "only valid for vsb-wdm-400g");
    s.wdm = parse_wdm(j.at("wdm"), r.key("wdm"));
  }
  s.length_km = r.optional_number("length_km");
  if (s.length_km && *s.length_km < 0.0) throw ConfigError(r.key("length_km"), "must be >= 0");
  s.osnr_db = r.optional_number("osnr_db");
  r.finish();

  if (kind == ScenarioKind::vsb_wdm_400g) {
    if (s.format != Format::dmt) throw ConfigError(r.key("format"), "vsb-wdm-400g series must be dmt");
    if (!s.wdm) throw ConfigError(r.key("wdm"), "required for vsb-wdm-400g");
    if (s.dmt.loading != DmtLoadingMode::adaptive) throw ConfigError(r.key("dmt.loading"), "must be adaptive");
    if (std::abs(s.dmt.rate_bps - s.wdm->per_channel_rate) > 1.0) {
      throw ConfigError(r.key("dmt.rate_gbps"), "must equal wdm.per_channel_rate_gbps");
    }
    const double channel_rate = s.dmt.modem.dac_rate * static_cast<double>(s.dmt.modem.oversampling);
    const double ratio = s.wdm->composite_rate / channel_rate;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
      throw ConfigError(r.key("wdm.composite_rate_gsps"),
                        "must be an integer multiple of dac_rate_gsps * oversampling");
    }
  }
  if (kind == ScenarioKind::dmt_rate_82km && s.format != Format::dmt) {
    throw ConfigError(r.key("format"), "dmt-rate-82km series must be dmt");
  }
  if (kind == ScenarioKind::reach_sweep && (s.format == Format::pam4_semianalytic || s.format == Format::pdm64qam)) {
    throw ConfigError(r.key("format"), "analytic formats have no reach");
  }
  return s;
}

json series_json(const SeriesConfig& s) {
  json j = {{"name", s.name}, {"format", to_string(s.format)}};
  if (s.format == Format::pam4 || s.format == Format::pam4_semianalytic) j["pam4"] = pam4_json(s.pam4);
  if (s.format == Format::dmt) j["dmt"] = dmt_json(s.dmt, s.detuning_hz);
  if (s.format == Format::pdm64qam) j["rate_gbps"] = s.pdm_rate_bps / 1e9;
  if (s.wdm) j["wdm"] = wdm_json(*s.wdm);
  j["length_km"] = s.length_km ? json(*s.length_km) : json(nullptr);
  j["osnr_db"] = s.osnr_db ? json(*s.osnr_db) : json(nullptr);
  return j;
}

ScenarioKind parse_kind(Reader& r) {
  const std::string k = r.string("kind");
  for (auto kind : {ScenarioKind::b2b_osnr, ScenarioKind::reach_sweep, ScenarioKind::dmt_rate_82km,
                    ScenarioKind::vsb_wdm_400g}) {
    if (k == to_string(kind)) return kind;
  }
  throw ConfigError(r.key("kind"), "expected b2b-osnr, reach-sweep, dmt-rate-82km or vsb-wdm-400g");
}

}  // namespace

Scenario parse_scenario(const json& j) {
  Reader r(j, "");
  Scenario s;
  s.schema_version = static_cast<int>(r.unsigned_int("schema_version", 1));
  if (s.schema_version != 1) throw ConfigError("schema_version", "only version 1 is supported");
  s.id = r.string("id");
  if (s.id.empty() || s.id.find_first_of("/\\,\"\n") != std::string::npos || s.id == "." || s.id == "..") {
    throw ConfigError("id", "must be a plain non-empty name");
  }
  s.kind = parse_kind(r);
  s.seed = r.unsigned_int("seed", 1);
  s.trials = r.unsigned_int("trials", 1);
  if (s.trials < 1) throw ConfigError("trials", "must be >= 1");
  s.bits_per_trial = r.unsigned_int("bits_per_trial", 100000);
  if (s.bits_per_trial < 1000 || s.bits_per_trial % 2 != 0) {
    throw ConfigError("bits_per_trial", "must be even and >= 1000");
  }

  if (r.has("fec")) {
    Reader f(j.at("fec"), "fec");
    s.hd.ber_limit = f.number("hd_limit", s.hd.ber_limit);
    s.sd.ber_limit = f.number("sd_limit", s.sd.ber_limit);
    s.hd.overhead = f.number("hd_overhead", s.hd.overhead);
    s.sd.overhead = f.number("sd_overhead", s.sd.overhead);
    if (!(s.hd.ber_limit > 0.0 && s.hd.ber_limit < 0.1)) throw ConfigError("fec.hd_limit", "must lie in (0, 0.1)");
    if (!(s.sd.ber_limit > 0.0 && s.sd.ber_limit < 0.1)) throw ConfigError("fec.sd_limit", "must lie in (0, 0.1)");
    if (s.hd.overhead < 0.0) throw ConfigError("fec.hd_overhead", "must be >= 0");
    if (s.sd.overhead < 0.0) throw ConfigError("fec.sd_overhead", "must be >= 0");
    f.finish();
  }

  s.link = parse_link(r.has("link") ? j.at("link") : json::object(), "link");

  {
    Reader w(r.raw("sweep"), "sweep");
    const std::string axis = w.string("axis");
    if (axis != axis_name(s.kind)) {
      throw ConfigError("sweep.axis", "must be " + axis_name(s.kind) + " for kind " + to_string(s.kind));
    }
    if (w.has("values")) {
      const json& v = j.at("sweep").at("values");
      if (!v.is_array()) throw ConfigError("sweep.values", "expected an array of numbers");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
          throw ConfigError("sweep.values[" + std::to_string(i) + "]", "expected a finite number");
        }
        s.axis_values.push_back(v[i].get<double>());
      }
    }
    w.finish();
    if (s.axis_values.empty() && s.kind != ScenarioKind::vsb_wdm_400g) {
      throw ConfigError("sweep.values", "at least one value required");
    }
    for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
      const double v = s.axis_values[i];
      const std::string key = "sweep.values[" + std::to_string(i) + "]";
      if (s.kind == ScenarioKind::reach_sweep && v < 0.0) throw ConfigError(key, "length must be >= 0");
      if (s.kind == ScenarioKind::vsb_wdm_400g && (v < 0.0 || v != std::floor(v))) {
        throw ConfigError(key, "channel index must be a non-negative integer");
      }
      for (std::size_t k = 0; k < i; ++k) {
        if (s.axis_values[k] == v) throw ConfigError(key, "duplicate sweep value");
      }
    }
  }

  const json& series = r.raw("series");
  if (!series.is_array() || series.empty()) throw ConfigError("series", "expected a non-empty array");
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string path = "series[" + std::to_string(i) + "]";
    s.series.push_back(parse_series(series[i], path, s.kind));
    for (std::size_t k = 0; k < i; ++k) {
      if (s.series[k].name == s.series[i].name) throw ConfigError(path + ".name", "duplicate series name");
    }
    if (s.kind == ScenarioKind::vsb_wdm_400g) {
      for (double v : s.axis_values) {
        if (v >= s.series[i].wdm->channel_count) {
          throw ConfigError("sweep.values", "channel index exceeds the channel count of " + path);
        }
      }
    }
  }

  if (r.has("searches")) {
    Reader q(j.at("searches"), "searches");
    s.search_required_osnr = q.boolean("required_osnr", false);
    if (s.search_required_osnr && s.kind != ScenarioKind::b2b_osnr) {
      throw ConfigError("searches.required_osnr", "only valid for b2b-osnr");
    }
    if (q.has("max_reach")) {
      if (s.kind != ScenarioKind::reach_sweep) throw ConfigError("searches.max_reach", "only valid for reach-sweep");
      Reader m(j.at("searches").at("max_reach"), "searches.max_reach");
      metrics::ReachSearchOptions o;
      o.step_km = positive(m, "step_km", 2.0);
      o.low_km = m.number("low_km", 0.0);
      if (o.low_km < 0.0) throw ConfigError("searches.max_reach.low_km", "must be >= 0");
      o.high_km = m.number("high_km", 160.0);
      if (!(o.high_km > o.low_km)) throw ConfigError("searches.max_reach.high_km", "must exceed low_km");
      o.tol_km = positive(m, "tol_km", 0.25);
      m.finish();
      s.search_max_reach = o;
    }
    q.finish();
  }

  if (r.has("snr_profile")) {
    Reader p(j.at("snr_profile"), "snr_profile");
    SnrProfileRequest req;
    req.series = p.string("series");
    req.axis_value = p.number("axis_value");
    p.finish();
    const SeriesConfig* found = nullptr;
    for (const auto& se : s.series) {
      if (se.name == req.series) found = &se;
    }
    if (!found) throw ConfigError("snr_profile.series", "no series named '" + req.series + "'");
    if (found->format != Format::dmt || found->dmt.loading != DmtLoadingMode::adaptive) {
      throw ConfigError("snr_profile.series", "must name an adaptive dmt series");
    }
    bool on_grid = false;
    for (double v : s.axis_values) on_grid = on_grid || v == req.axis_value;
    if (s.kind == ScenarioKind::vsb_wdm_400g && s.axis_values.empty()) {
      on_grid = req.axis_value >= 0.0 && req.axis_value < found->wdm->channel_count &&
                req.axis_value == std::floor(req.axis_value);
    }
    if (!on_grid) throw ConfigError("snr_profile.axis_value", "not a sweep point of the series");
    s.snr_profile = req;
  }
  r.finish();

  for (const auto& se : s.series) {
    for (double v : s.axis_values) {
      try {
        channel::validate(series_link(s, se, v));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("link", e.what());
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("(file)", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("(file)", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

json to_json(const Scenario& s) {
  json series = json::array();
  for (const auto& se : s.series) series.push_back(series_json(se));
  json j = {{"schema_version", s.schema_version},
            {"id", s.id},
            {"kind", to_string(s.kind)},
            {"seed", s.seed},
            {"trials", s.trials},
            {"bits_per_trial", s.bits_per_trial},
            {"fec",
             {{"hd_limit", s.hd.ber_limit},
              {"sd_limit", s.sd.ber_limit},
              {"hd_overhead", s.hd.overhead},
              {"sd_overhead", s.sd.overhead}}},
            {"link", link_json(s.link)},
            {"sweep", {{"axis", axis_name(s.kind)}, {"values", s.axis_values}}},
            {"series", series}};
  json searches = {{"required_osnr", s.search_required_osnr}};
  if (s.search_max_reach) {
    const auto& o = *s.search_max_reach;
    searches["max_reach"] = {{"step_km", o.step_km}, {"low_km", o.low_km}, {"high_km", o.high_km}, {"tol_km", o.tol_km}};
  }
  j["searches"] = searches;
  if (s.snr_profile) j["snr_profile"] = {{"series", s.snr_profile->series}, {"axis_value", s.snr_profile->axis_value}};
  return j;
}

channel::LinkSpec series_link(const Scenario& s, const SeriesConfig& series, double axis_value) {
  channel::LinkSpec link = s.link;
  if (series.length_km) link.length_km = *series.length_km;
  if (series.osnr_db) link.osnr_db = *series.osnr_db;
  if (s.kind == ScenarioKind::b2b_osnr || s.kind == ScenarioKind::dmt_rate_82km) link.osnr_db = axis_value;
  if (s.kind == ScenarioKind::reach_sweep) link.length_km = axis_value;
  return link;
}

std::vector<std::string> builtin_names() {
  return {"b2b-osnr", "reach-sweep", "dmt-rate-82km", "vsb-wdm-400g"};
}

namespace {

json bessel(double ghz) { return {{"kind", "bessel"}, {"cutoff_ghz", ghz}, {"order", 5}}; }

json b2b_template() {
  return json::parse(R"({
    "schema_version": 1,
    "id": "b2b-osnr",
    "kind": "b2b-osnr",
    "seed": 20160301,
    "trials": 2,
    "bits_per_trial": 40000,
    "link": {"length_km": 0},
    "sweep": {"axis": "osnr_db", "values": [16, 18, 20, 22, 24, 26, 28]},
    "series": [
      {"name": "pam4-field", "format": "pam4",
       "pam4": {"spacing": "field", "baud_gbaud": 56, "optical_matched_filter": true,
                "thresholds": "min_error", "training_symbols": 20000}},
      {"name": "pam4-power", "format": "pam4",
       "pam4": {"spacing": "power", "baud_gbaud": 56, "optical_matched_filter": true,
                "thresholds": "min_error", "training_symbols": 20000}},
      {"name": "pam4-field-semianalytic", "format": "pam4_semianalytic",
       "pam4": {"spacing": "field", "baud_gbaud": 56}},
      {"name": "pam4-power-semianalytic", "format": "pam4_semianalytic",
       "pam4": {"spacing": "power", "baud_gbaud": 56}},
      {"name": "dmt-qpsk", "format": "dmt",
       "dmt": {"loading": "uniform", "uniform_bits": 2,
               "tx_filter": {"kind": "rectangular", "cutoff_ghz": 56},
               "rx_filter": {"kind": "rectangular", "cutoff_ghz": 56}}},
      {"name": "dmt-16qam", "format": "dmt",
       "dmt": {"loading": "uniform", "uniform_bits": 4, "last_subcarrier": 127,
               "tx_filter": {"kind": "rectangular", "cutoff_ghz": 28},
               "rx_filter": {"kind": "rectangular", "cutoff_ghz": 28}}},
      {"name": "pdm-64qam", "format": "pdm64qam", "rate_gbps": 448}
    ],
    "searches": {"required_osnr": true}
  })");
}

json reach_template() {
  json j = json::parse(R"({
    "schema_version": 1,
    "id": "reach-sweep",
    "kind": "reach-sweep",
    "seed": 20160302,
    "trials": 1,
    "bits_per_trial": 30000,
    "link": {"osnr_db": 40},
    "sweep": {"axis": "length_km", "values": [0, 2, 4, 6, 8, 10, 15, 20]},
    "series": [
      {"name": "pam4-power-noffe", "format": "pam4", "pam4": {"spacing": "power", "baud_gbaud": 56}},
      {"name": "pam4-power-ffe13", "format": "pam4",
       "pam4": {"spacing": "power", "baud_gbaud": 56, "ffe": {"taps": 13, "training_symbols": 2000}}},
      {"name": "dmt-112g-blpl", "format": "dmt", "dmt": {"loading": "adaptive", "rate_gbps": 112}}
    ],
    "searches": {"max_reach": {"step_km": 2, "low_km": 0, "high_km": 40, "tol_km": 0.5}}
  })");
  for (auto& s : j["series"]) {
    auto& m = s.contains("pam4") ? s["pam4"] : s["dmt"];
    m["tx_filter"] = bessel(15);
    m["rx_filter"] = bessel(18);
  }
  return j;
}

json dmt_rate_template() {
  json j = json::parse(R"({
    "schema_version": 1,
    "id": "dmt-rate-82km",
    "kind": "dmt-rate-82km",
    "seed": 20160303,
    "trials": 1,
    "bits_per_trial": 40000,
    "link": {"length_km": 82},
    "sweep": {"axis": "osnr_db", "values": [30, 33, 36, 39]},
    "series": [
      {"name": "112g-b2b", "format": "dmt", "length_km": 0, "dmt": {"rate_gbps": 112}},
      {"name": "56g-82km", "format": "dmt", "dmt": {"rate_gbps": 56}},
      {"name": "76g-82km", "format": "dmt", "dmt": {"rate_gbps": 76}},
      {"name": "96g-82km", "format": "dmt", "dmt": {"rate_gbps": 96}}
    ],
    "snr_profile": {"series": "56g-82km", "axis_value": 36}
  })");
  for (auto& s : j["series"]) s["dmt"]["last_subcarrier"] = 127;
  return j;
}

json vsb_template() {
  return json::parse(R"({
    "schema_version": 1,
    "id": "vsb-wdm-400g",
    "kind": "vsb-wdm-400g",
    "seed": 20160304,
    "trials": 1,
    "bits_per_trial": 30000,
    "link": {"length_km": 80, "osnr_db": 35},
    "sweep": {"axis": "channel_index"},
    "series": [
      {"name": "8x56g-vsb", "format": "dmt",
       "dmt": {"rate_gbps": 56, "last_subcarrier": 127},
       "wdm": {"channels": 8, "grid_ghz": 50, "per_channel_rate_gbps": 56, "detuning_ghz": 17.5,
               "channel_filter": {"kind": "interleaver", "bandwidth_ghz": 42, "period_ghz": 100,
                                  "center_ghz": 0, "order": 3}}},
      {"name": "4x112g-dsb", "format": "dmt", "length_km": 10,
       "dmt": {"rate_gbps": 112, "last_subcarrier": 255},
       "wdm": {"channels": 4, "grid_ghz": 100, "per_channel_rate_gbps": 112, "detuning_ghz": 0,
               "channel_filter": {"kind": "interleaver", "bandwidth_ghz": 84, "period_ghz": 200,
                                  "center_ghz": 0, "order": 3}}}
    ],
    "snr_profile": {"series": "8x56g-vsb", "axis_value": 3}
  })");
}

}  // namespace

json builtin_template(const std::string& name) {
  if (name == "b2b-osnr") return b2b_template();
  if (name == "reach-sweep") return reach_template();
  if (name == "dmt-rate-82km") return dmt_rate_template();
  if (name == "vsb-wdm-400g") return vsb_template();
  throw std::invalid_argument("no builtin template named '" + name + "'");
}

}  // namespace dwdm80::experiment
