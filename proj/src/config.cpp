#include "ntn/config.hpp"

#include "ntn/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace ntn {

using nlohmann::json;

namespace {

std::string join_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

const char* type_name(const json& j) {
    if (j.is_number()) return "a number";
    if (j.is_boolean()) return "a boolean";
    if (j.is_string()) return "a string";
    if (j.is_array()) return "an array";
    if (j.is_object()) return "an object";
    return "null";
}

bool same_kind(const json& base, const json& value) {
    if (base.is_null()) return true;
    if (base.is_number()) return value.is_number();
    if (base.is_array()) return value.is_array();
    return base.type() == value.type();
}

void merge_into(json& base, const json& user, const std::string& prefix) {
    if (!user.is_object()) throw ConfigError(fmt::format("'{}' must be an object", prefix.empty() ? "<root>" : prefix));
    for (const auto& [key, value] : user.items()) {
        const std::string path = join_path(prefix, key);
        if (!base.contains(key)) throw ConfigError(fmt::format("unknown key '{}'", path));
        json& slot = base[key];
        if (slot.is_object()) {
            merge_into(slot, value, path);
            continue;
        }
        if (!same_kind(slot, value))
            throw ConfigError(fmt::format("'{}' must be {}, got {}", path, type_name(slot), type_name(value)));
        slot = value;
    }
}

const json& at(const json& doc, const std::string& path) {
    const json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(key)) throw ConfigError(fmt::format("missing key '{}'", path));
        node = &(*node)[key];
        if (dot == std::string::npos) return *node;
        start = dot + 1;
    }
}

double number(const json& doc, const std::string& path) {
    const json& j = at(doc, path);
    if (!j.is_number()) throw ConfigError(fmt::format("'{}' must be a number", path));
    return j.get<double>();
}

double finite(const json& doc, const std::string& path) {
    const double v = number(doc, path);
    if (!std::isfinite(v)) throw ConfigError(fmt::format("'{}' must be finite", path));
    return v;
}

std::size_t count_value(const json& j, const std::string& path, std::size_t min) {
    const auto fail = [&] { return ConfigError(fmt::format("'{}' must be an integer >= {}", path, min)); };
    if (!j.is_number_integer()) throw fail();
    if (!j.is_number_unsigned() && j.get<std::int64_t>() < 0) throw fail();
    const auto v = j.get<std::uint64_t>();
    if (v < min) throw fail();
    return static_cast<std::size_t>(v);
}

std::size_t count(const json& doc, const std::string& path, std::size_t min = 0) {
    return count_value(at(doc, path), path, min);
}

std::vector<double> numbers(const json& doc, const std::string& path) {
    const json& j = at(doc, path);
    if (!j.is_array()) throw ConfigError(fmt::format("'{}' must be an array", path));
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(fmt::format("'{}[{}]' must be a number", path, i));
        out.push_back(j[i].get<double>());
    }
    return out;
}

std::vector<std::size_t> counts(const json& doc, const std::string& path, std::size_t min = 1) {
    const json& j = at(doc, path);
    if (!j.is_array()) throw ConfigError(fmt::format("'{}' must be an array", path));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(count_value(j[i], fmt::format("{}[{}]", path, i), min));
    return out;
}

json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

void apply_override(json& doc, const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(fmt::format("override '{}' must have the form key.path=value", item));
    const std::string path = item.substr(0, eq);
    json patch = parse_value(item.substr(eq + 1));
    std::size_t end = path.size();
    while (true) {
        const auto dot = path.rfind('.', end - 1);
        const std::string key = path.substr(dot == std::string::npos ? 0 : dot + 1,
                                            end - (dot == std::string::npos ? 0 : dot + 1));
        if (key.empty()) throw ConfigError(fmt::format("override '{}' has an empty key", item));
        patch = json{{key, std::move(patch)}};
        if (dot == std::string::npos) break;
        end = dot;
    }
    merge_into(doc, patch, "");
}

ElevationSigmoid sigmoid(const json& doc) {
    return {finite(doc, "channel.elevation_sigmoid.a"), finite(doc, "channel.elevation_sigmoid.b")};
}

void validate_selected(const ScenarioConfig& c) {
    switch (c.scenario) {
    case Scenario::adhoc: adhoc_config(c).validate(); break;
    case Scenario::cellfree_energy: cellfree_config(c).validate(); break;
    case Scenario::coverage: coverage_config(c).validate(); break;
    case Scenario::iab: iab_config(c).validate(); break;
    }
}

} // namespace

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::adhoc: return "adhoc";
    case Scenario::cellfree_energy: return "cellfree-energy";
    case Scenario::coverage: return "coverage";
    case Scenario::iab: return "iab";
    }
    return "?";
}

Scenario parse_scenario(const std::string& name) {
    for (auto s : {Scenario::adhoc, Scenario::cellfree_energy, Scenario::coverage, Scenario::iab})
        if (to_string(s) == name) return s;
    throw ConfigError(fmt::format("'scenario' must be one of adhoc, cellfree-energy, coverage, iab; got '{}'", name));
}

std::size_t default_trials(Scenario s) {
    switch (s) {
    case Scenario::adhoc: return 2000;
    case Scenario::cellfree_energy: return 16;
    case Scenario::coverage: return 10000;
    case Scenario::iab: return 1;
    }
    return 1;
}

json default_config() {
    std::vector<double> thresholds = CoverageConfig::default_thresholds();
    return json{
        {"scenario", nullptr},
        {"trials", nullptr},
        {"seed", 1},
        {"radio",
         {
             {"transmit_power_dbm", {{"user", 20}, {"uav", 30}, {"haps", 36}, {"satellite", 45}}},
             {"antenna_gain_dbi", {{"user", 3}, {"uav", 10}, {"haps", 30}, {"satellite", 50}}},
             {"altitude_km", {{"user", 0}, {"uav", 0.05}, {"haps", 20}, {"satellite", 550}}},
             {"carrier_frequency_ghz", {{"rf", 2}, {"mmwave", 28}}},
             {"bandwidth_mhz", {{"rf", 40}, {"mmwave", 100}}},
             {"noise_psd_dbm_hz", -174},
             {"shadowed_rician", {{"omega", 1.29}, {"b0", 0.158}, {"m", 19.4}}},
             {"nakagami_m", 2},
             {"antenna_elements", 32},
             {"packet_size_mbit", 5},
         }},
        {"channel",
         {
             {"exp_distance_beta_per_km", 0.08},
             {"olos_excess_loss_db", 20},
             {"nlos_excess_loss_db", 20},
             {"elevation_sigmoid", {{"a", 9.61}, {"b", 0.16}}},
             {"elevation_mask_deg", 10},
             {"capacity_draws", 10000},
         }},
        {"adhoc",
         {
             {"n_uav", 1000},
             {"disc_radius_km", 20},
             {"comm_range_km", 10},
             {"short_hop_half_angle_deg", 30},
             {"uav_uav_antenna_gain_dbi", 0},
             {"max_hops", 200},
             {"distances_km", {2, 5, 10, 15, 20, 25, 30}},
         }},
        {"cellfree",
         {
             {"disc_radius_km", 50},
             {"n_uav", 100},
             {"haps_counts", {4, 8, 16}},
             {"user_density_per_km2", 1},
             {"active_fraction", 0.1},
             {"sub_bands", 10},
             {"ee_grid_max_mbj", 1000},
             {"ee_grid_step_mbj", 1},
         }},
        {"coverage",
         {
             {"n_satellites", {100, 200}},
             {"n_haps", {8, 16}},
             {"disc_radius_km", 50},
             {"user_density_per_km2", 1},
             {"active_fraction", 0.1},
             {"sub_bands", 10},
             {"thresholds_db", thresholds},
             {"modes", {"direct", "relayed"}},
         }},
        {"iab",
         {
             {"disc_radius_km", 50},
             {"ring_radii_km", {12.5, 25, 37.5}},
             {"ring_counts", {4, 8, 16}},
             {"mbs_height_m", 10},
             {"grid_step_km", 1},
             {"user_density_per_km2", 1},
             {"active_fraction", 0.1},
             {"haps_enabled", true},
             {"target_rate_mbps", nullptr},
         }},
    };
}

ScenarioConfig resolve_config(json user, const std::vector<std::string>& overrides,
                              const std::optional<std::string>& scenario) {
    json doc = default_config();
    if (!user.is_null()) merge_into(doc, user, "");
    for (const auto& o : overrides) apply_override(doc, o);
    if (scenario) doc["scenario"] = *scenario;

    ScenarioConfig c;
    if (doc["scenario"].is_null()) throw ConfigError("missing scenario id: set 'scenario' or pass it on the command line");
    if (!doc["scenario"].is_string()) throw ConfigError("'scenario' must be a string");
    c.scenario = parse_scenario(doc["scenario"].get<std::string>());

    if (doc["trials"].is_null()) doc["trials"] = default_trials(c.scenario);
    c.trials = count(doc, "trials", 1);
    c.seed = count(doc, "seed", 0);
    const json& target = doc["iab"]["target_rate_mbps"];
    if (!target.is_null() && !target.is_number()) throw ConfigError("'iab.target_rate_mbps' must be a number or null");
    c.doc = std::move(doc);
    validate_selected(c);
    return c;
}

ScenarioConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides,
                           const std::optional<std::string>& scenario) {
    json user;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", file->string()));
        std::stringstream text;
        text << in.rdbuf();
        const std::string s = text.str();
        if (s.find_first_not_of(" \t\r\n") != std::string::npos) {
            try {
                user = json::parse(s);
            } catch (const json::parse_error& e) {
                throw ConfigError(fmt::format("config file '{}' is not valid JSON: {}", file->string(), e.what()));
            }
        }
    }
    return resolve_config(std::move(user), overrides, scenario);
}

std::string ScenarioConfig::echo() const { return doc.dump(); }

RadioTable radio_table(const json& doc) {
    RadioTable r;
    auto platform = [&](const std::string& name, PlatformRadio& p) {
        p.tx_power_dbm = finite(doc, "radio.transmit_power_dbm." + name);
        p.antenna_gain_dbi = finite(doc, "radio.antenna_gain_dbi." + name);
        p.altitude_m = finite(doc, "radio.altitude_km." + name) * 1e3;
        if (p.altitude_m < 0.0) throw ConfigError(fmt::format("'radio.altitude_km.{}' must be >= 0", name));
    };
    platform("user", r.user);
    platform("uav", r.uav);
    platform("haps", r.haps);
    platform("satellite", r.satellite);
    auto band = [&](const std::string& name, Band& b) {
        b.carrier_hz = finite(doc, "radio.carrier_frequency_ghz." + name) * 1e9;
        b.bandwidth_hz = finite(doc, "radio.bandwidth_mhz." + name) * 1e6;
        if (!(b.carrier_hz > 0.0)) throw ConfigError(fmt::format("'radio.carrier_frequency_ghz.{}' must be > 0", name));
        if (!(b.bandwidth_hz > 0.0)) throw ConfigError(fmt::format("'radio.bandwidth_mhz.{}' must be > 0", name));
    };
    band("rf", r.rf);
    band("mmwave", r.mmwave);
    r.noise_psd_dbm_hz = finite(doc, "radio.noise_psd_dbm_hz");
    r.shadowed_rician = {finite(doc, "radio.shadowed_rician.omega"), finite(doc, "radio.shadowed_rician.b0"),
                         finite(doc, "radio.shadowed_rician.m")};
    r.nakagami = {finite(doc, "radio.nakagami_m")};
    try {
        validate(FadingModel{r.shadowed_rician});
        validate(FadingModel{r.nakagami});
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("radio.{}", e.what()));
    }
    r.antenna_elements = static_cast<int>(count(doc, "radio.antenna_elements", 1));
    r.packet_size_bits = finite(doc, "radio.packet_size_mbit") * 1e6;
    if (!(r.packet_size_bits > 0.0)) throw ConfigError("'radio.packet_size_mbit' must be > 0");
    return r;
}

AdhocConfig adhoc_config(const ScenarioConfig& c) {
    const json& d = c.doc;
    AdhocConfig a;
    a.radio = radio_table(d);
    a.n_uav = count(d, "adhoc.n_uav");
    a.disc_radius_m = finite(d, "adhoc.disc_radius_km") * 1e3;
    a.comm_range_m = finite(d, "adhoc.comm_range_km") * 1e3;
    a.beta_per_km = finite(d, "channel.exp_distance_beta_per_km");
    a.olos_penalty_db = finite(d, "channel.olos_excess_loss_db");
    a.short_hop_half_angle_deg = finite(d, "adhoc.short_hop_half_angle_deg");
    a.uav_uav_antenna_gain_dbi = finite(d, "adhoc.uav_uav_antenna_gain_dbi");
    a.max_hops = count(d, "adhoc.max_hops", 1);
    a.capacity_draws = count(d, "channel.capacity_draws", 1);
    a.distances_km = numbers(d, "adhoc.distances_km");
    a.trials = c.trials;
    a.seed = c.seed;
    return a;
}

CellfreeConfig cellfree_config(const ScenarioConfig& c) {
    const json& d = c.doc;
    CellfreeConfig f;
    f.radio = radio_table(d);
    f.disc_radius_m = finite(d, "cellfree.disc_radius_km") * 1e3;
    f.n_uav = count(d, "cellfree.n_uav", 1);
    f.haps_counts = counts(d, "cellfree.haps_counts");
    f.user_density_per_km2 = finite(d, "cellfree.user_density_per_km2");
    f.active_fraction = finite(d, "cellfree.active_fraction");
    f.sub_bands = static_cast<int>(count(d, "cellfree.sub_bands", 1));
    f.sigmoid = sigmoid(d);
    f.nlos_excess_loss_db = finite(d, "channel.nlos_excess_loss_db");
    f.capacity_draws = count(d, "channel.capacity_draws", 1);
    f.ee_grid_max_mbj = finite(d, "cellfree.ee_grid_max_mbj");
    f.ee_grid_step_mbj = finite(d, "cellfree.ee_grid_step_mbj");
    f.trials = c.trials;
    f.seed = c.seed;
    return f;
}

CoverageConfig coverage_config(const ScenarioConfig& c) {
    const json& d = c.doc;
    CoverageConfig v;
    v.radio = radio_table(d);
    v.satellite_counts = counts(d, "coverage.n_satellites");
    v.haps_counts = counts(d, "coverage.n_haps", 0);
    v.disc_radius_m = finite(d, "coverage.disc_radius_km") * 1e3;
    v.user_density_per_km2 = finite(d, "coverage.user_density_per_km2");
    v.active_fraction = finite(d, "coverage.active_fraction");
    v.sub_bands = static_cast<int>(count(d, "coverage.sub_bands", 1));
    v.elevation_mask_deg = finite(d, "channel.elevation_mask_deg");
    v.thresholds_db = numbers(d, "coverage.thresholds_db");
    v.modes.clear();
    const json& modes = at(d, "coverage.modes");
    if (!modes.is_array()) throw ConfigError("'coverage.modes' must be an array");
    for (const auto& m : modes) {
        if (m == "direct") v.modes.push_back(CoverageMode::direct);
        else if (m == "relayed") v.modes.push_back(CoverageMode::relayed);
        else throw ConfigError(fmt::format("'coverage.modes' entries must be \"direct\" or \"relayed\", got {}", m.dump()));
    }
    v.trials = c.trials;
    v.seed = c.seed;
    return v;
}

IabConfig iab_config(const ScenarioConfig& c) {
    const json& d = c.doc;
    IabConfig b;
    b.radio = radio_table(d);
    b.disc_radius_m = finite(d, "iab.disc_radius_km") * 1e3;
    b.ring_radii_m.clear();
    for (double r : numbers(d, "iab.ring_radii_km")) b.ring_radii_m.push_back(r * 1e3);
    b.ring_counts = counts(d, "iab.ring_counts");
    b.mbs_height_m = finite(d, "iab.mbs_height_m");
    b.grid_step_m = finite(d, "iab.grid_step_km") * 1e3;
    b.user_density_per_km2 = finite(d, "iab.user_density_per_km2");
    b.active_fraction = finite(d, "iab.active_fraction");
    b.sigmoid = sigmoid(d);
    b.nlos_excess_loss_db = finite(d, "channel.nlos_excess_loss_db");
    const json& haps = at(d, "iab.haps_enabled");
    if (!haps.is_boolean()) throw ConfigError("'iab.haps_enabled' must be a boolean");
    b.haps_enabled = haps.get<bool>();
    const json& target = at(d, "iab.target_rate_mbps");
    if (!target.is_null()) b.target_rate_bps = finite(d, "iab.target_rate_mbps") * 1e6;
    b.capacity_draws = count(d, "channel.capacity_draws", 1);
    b.trials = c.trials;
    b.seed = c.seed;
    return b;
}

} // namespace ntn
