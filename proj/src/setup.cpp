#include "qpv/setup.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qpv/bundled_configs.hpp"

namespace qpv {
namespace {

using json = nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(display(), "expected an object");
  }

  double number(const std::string& key) {
    const auto* v = find(key);
    if (v == nullptr) throw ConfigError(join(key), "missing required key");
    return as_number(*v, key);
  }

  double number_or(const std::string& key, double fallback) {
    const auto* v = find(key);
    return v == nullptr ? fallback : as_number(*v, key);
  }

  double probability(const std::string& key) { return check_probability(key, number(key)); }
  double probability_or(const std::string& key, double fallback) {
    return check_probability(key, number_or(key, fallback));
  }

  std::string string_or(const std::string& key, std::string fallback) {
    const auto* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(join(key), "expected a string");
    return v->get<std::string>();
  }

  Section child(const std::string& key) {
    const auto* v = find(key);
    if (v == nullptr) throw ConfigError(join(key), "missing required key");
    return Section(*v, join(key));
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, _] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError(join(key), "unknown key");
    }
  }

 private:
  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(join(key), "expected a number");
    return v.get<double>();
  }

  double check_probability(const std::string& key, double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(join(key), "probability out of range [0, 1]: " + std::to_string(p));
    }
    return p;
  }

  std::string display() const { return path_.empty() ? "<document>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::array<const char*, 3> kBeamsplitterNames{"BS1", "BS2", "BS3"};

BeamSplitterSpec& beamsplitter(SetupConfig& c, int i) {
  return i == 0 ? c.bs1 : (i == 1 ? c.bs2 : c.bs3);
}
const BeamSplitterSpec& beamsplitter(const SetupConfig& c, int i) {
  return i == 0 ? c.bs1 : (i == 1 ? c.bs2 : c.bs3);
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

void Geometry::validate() const {
  require(v0_position_m < prover_position_m && prover_position_m < v1_position_m,
          "geometry", "positions must satisfy V0 < P < V1");
  require(signal_speed_m_per_s > 0.0 && signal_speed_m_per_s <= kSpeedOfLight,
          "geometry.signal_speed_m_per_s", "must lie in (0, c]");
  require(adversary_signal_speed_m_per_s > 0.0 &&
              adversary_signal_speed_m_per_s <= kSpeedOfLight,
          "geometry.adversary_signal_speed_m_per_s", "must lie in (0, c]");
  require(processing_time_s >= 0.0, "geometry.processing_time_s", "must be >= 0");
  require(tolerance_s >= 0.0, "geometry.tolerance_s", "must be >= 0");
  require(round_period_s > 0.0, "geometry.round_period_s", "must be > 0");
  require(v0_position_m < adversary0_position_m && adversary0_position_m < prover_position_m,
          "geometry.adversary0_position_m", "must lie strictly between V0 and P");
  require(prover_position_m < adversary1_position_m && adversary1_position_m < v1_position_m,
          "geometry.adversary1_position_m", "must lie strictly between P and V1");
}

DetectorSpec SetupConfig::detector(Detector d) const noexcept {
  const auto& ch = detectors[index_of(d)];
  return {ch.fiber * ch.relative_efficiency * detector_abs_scale, ch.dark_click_probability};
}

NetworkModel SetupConfig::network() const {
  NetworkModel n;
  for (auto arm : kArms) n.arm_transmission[index_of(arm)] = arm_transmission(arm);
  n.bs1 = bs1;
  n.bs2 = bs2;
  n.bs3 = bs3;
  for (auto d : kDetectors) n.detectors[index_of(d)] = detector(d);
  return n;
}

void SetupConfig::validate() const {
  require(source.g2 >= 0.0 && source.g2 <= 0.5, "source.g2",
          "must lie in [0, 1/2] (multi-photon model has no solution above 1/2)");
  require(source.indistinguishability >= 0.0 && source.indistinguishability <= 1.0,
          "source.indistinguishability", "must lie in [0, 1]");
  require(detector_abs_scale > 0.0 && detector_abs_scale <= 1.0, "detector_abs_scale",
          "must lie in (0, 1]");
  for (int i = 0; i < 3; ++i) {
    const auto& bs = beamsplitter(*this, i);
    const std::string key = std::string("beamsplitters.") + kBeamsplitterNames[i];
    require(bs.split_ratio_upper > 0.0 && bs.split_ratio_upper < 1.0,
            key + ".split_ratio_upper", "must lie in (0, 1)");
    require(bs.excess_transmission > 0.0 && bs.excess_transmission <= 1.0,
            key + ".excess_transmission", "must lie in (0, 1]");
  }
  for (auto d : kDetectors) {
    const auto eff = detector(d).efficiency;
    require(eff >= 0.0 && eff <= 1.0, std::string("detectors.") + label(d),
            "composed efficiency out of range [0, 1]");
  }
  geometry.validate();
}

SetupConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed document: ") + e.what());
  }

  Section root(doc, "");
  SetupConfig c;

  const double version = root.number("schema_version");
  require(version == SetupConfig::kSchemaVersion, "schema_version",
          "unsupported schema version " + std::to_string(version));

  {
    auto s = root.child("source");
    c.source.g2 = s.probability("g2");
    c.source.indistinguishability = s.probability("indistinguishability");
    c.source.brightness = s.probability_or("brightness", 1.0);
    const auto model = s.string_or("pair_overlap_model", "visibility");
    try {
      c.source.pair_model = pair_overlap_model_from_string(model);
    } catch (const DomainError& e) {
      throw ConfigError(s.join("pair_overlap_model"), e.what());
    }
    s.finish();
  }
  {
    auto arms = root.child("arms");
    for (auto arm : kArms) {
      auto a = arms.child(std::string(label(arm)));
      auto& dst = c.arms[index_of(arm)];
      dst.switch_transmission = a.probability("switch");
      dst.delay_stage = a.probability("delay_stage");
      dst.polarization_modulator = a.probability("polarization_modulator");
      dst.fiber = a.probability("fiber");
      a.finish();
    }
    arms.finish();
  }
  {
    auto bss = root.child("beamsplitters");
    for (int i = 0; i < 3; ++i) {
      auto b = bss.child(kBeamsplitterNames[i]);
      auto& dst = beamsplitter(c, i);
      dst.split_ratio_upper = b.probability("split_ratio_upper");
      dst.excess_transmission = b.probability("excess_transmission");
      b.finish();
    }
    bss.finish();
  }
  {
    auto dets = root.child("detectors");
    for (auto d : kDetectors) {
      auto s = dets.child(std::string(1, label(d)));
      auto& dst = c.detectors[index_of(d)];
      dst.fiber = s.probability("fiber");
      dst.relative_efficiency = s.probability("relative_efficiency");
      dst.dark_click_probability = s.probability_or("dark_click_probability", 0.0);
      s.finish();
    }
    dets.finish();
  }
  c.detector_abs_scale = root.probability_or("detector_abs_scale", 0.30);
  if (root.has("geometry")) {
    auto g = root.child("geometry");
    auto& dst = c.geometry;
    const Geometry defaults;
    dst.v0_position_m = g.number_or("v0_position_m", defaults.v0_position_m);
    dst.prover_position_m = g.number_or("prover_position_m", defaults.prover_position_m);
    dst.v1_position_m = g.number_or("v1_position_m", defaults.v1_position_m);
    dst.signal_speed_m_per_s = g.number_or("signal_speed_m_per_s", defaults.signal_speed_m_per_s);
    dst.processing_time_s = g.number_or("processing_time_s", defaults.processing_time_s);
    dst.tolerance_s = g.number_or("tolerance_s", defaults.tolerance_s);
    dst.round_period_s = g.number_or("round_period_s", defaults.round_period_s);
    dst.adversary0_position_m =
        g.number_or("adversary0_position_m", 0.5 * (dst.v0_position_m + dst.prover_position_m));
    dst.adversary1_position_m =
        g.number_or("adversary1_position_m", 0.5 * (dst.prover_position_m + dst.v1_position_m));
    dst.adversary_signal_speed_m_per_s =
        g.number_or("adversary_signal_speed_m_per_s", dst.signal_speed_m_per_s);
    g.finish();
  }
  root.finish();
  c.validate();
  return c;
}

std::string_view bundled_config(std::string_view name) {
  if (name == "paper_setup") return kPaperSetupJson;
  if (name == "ideal_setup") return kIdealSetupJson;
  return {};
}

SetupConfig load_config_file(const std::string& path_or_name) {
  if (auto text = bundled_config(path_or_name); !text.empty()) return load_config(text);
  std::ifstream in(path_or_name);
  if (!in) throw ConfigError(path_or_name, "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::string serialize(const SetupConfig& c) {
  json doc;
  doc["schema_version"] = SetupConfig::kSchemaVersion;
  doc["source"] = {{"g2", c.source.g2},
                   {"indistinguishability", c.source.indistinguishability},
                   {"brightness", c.source.brightness},
                   {"pair_overlap_model", std::string(to_string(c.source.pair_model))}};
  for (auto arm : kArms) {
    const auto& a = c.arms[index_of(arm)];
    doc["arms"][std::string(label(arm))] = {{"switch", a.switch_transmission},
                                            {"delay_stage", a.delay_stage},
                                            {"polarization_modulator", a.polarization_modulator},
                                            {"fiber", a.fiber}};
  }
  for (int i = 0; i < 3; ++i) {
    const auto& bs = beamsplitter(c, i);
    doc["beamsplitters"][kBeamsplitterNames[i]] = {
        {"split_ratio_upper", bs.split_ratio_upper},
        {"excess_transmission", bs.excess_transmission}};
  }
  for (auto d : kDetectors) {
    const auto& ch = c.detectors[index_of(d)];
    doc["detectors"][std::string(1, label(d))] = {
        {"fiber", ch.fiber},
        {"relative_efficiency", ch.relative_efficiency},
        {"dark_click_probability", ch.dark_click_probability}};
  }
  doc["detector_abs_scale"] = c.detector_abs_scale;
  const auto& g = c.geometry;
  doc["geometry"] = {{"v0_position_m", g.v0_position_m},
                     {"prover_position_m", g.prover_position_m},
                     {"v1_position_m", g.v1_position_m},
                     {"signal_speed_m_per_s", g.signal_speed_m_per_s},
                     {"processing_time_s", g.processing_time_s},
                     {"tolerance_s", g.tolerance_s},
                     {"round_period_s", g.round_period_s},
                     {"adversary0_position_m", g.adversary0_position_m},
                     {"adversary1_position_m", g.adversary1_position_m},
                     {"adversary_signal_speed_m_per_s", g.adversary_signal_speed_m_per_s}};
  // Sorted keys give the canonical form.
  return nlohmann::json(doc).dump(2) + "\n";
}

std::string canonical_text(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end()).dump(2) + "\n";
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed document: ") + e.what());
  }
}

double path_survival(const SetupConfig& config, Arm arm, Detector detector) {
  return config.network().path_survival(arm, detector);
}

}  // namespace qpv
