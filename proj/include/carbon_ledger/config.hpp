#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "carbon_ledger/embodied.hpp"
#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/intensity.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/token_accounting.hpp"

namespace carbon_ledger {

inline constexpr const char* kDefaultConfigFile = "carbon-ledger.json";
inline constexpr const char* kEnvCiUrl = "CARBON_LEDGER_CI_URL";
inline constexpr const char* kEnvCiZone = "CARBON_LEDGER_CI_ZONE";

// Values read from the JSON config file. Everything is optional; callers
// apply the precedence CLI flags > environment > config file > builtin.
struct Config {
    std::optional<double> input_rate;
    std::optional<double> output_rate;

    std::optional<std::string> power_preset;
    std::optional<double> cpu_watts;
    std::optional<double> mem_watts_per_gb;
    std::optional<double> memory_gb;
    std::optional<double> token_latency_s;

    std::optional<std::string> ci_zone;
    std::optional<std::string> ci_url;
    std::optional<std::string> ci_value;
    std::optional<std::string> ci_file;
    std::optional<std::string> ci_token;
    std::optional<int> ci_retries;

    std::optional<ColumnMapping> column_mapping;
};

inline Config parse_config_json(const nlohmann::json& j, const std::string& source) {
    if (!j.is_object()) throw FormatError(source + ": config root must be an object");
    Config c;

    if (j.contains("rates")) {
        const auto& r = j.at("rates");
        if (r.contains("input")) c.input_rate = r.at("input").get<double>();
        if (r.contains("output")) c.output_rate = r.at("output").get<double>();
    }
    if (j.contains("power_model")) {
        const auto& p = j.at("power_model");
        if (p.contains("preset")) c.power_preset = p.at("preset").get<std::string>();
        if (p.contains("cpu_watts")) c.cpu_watts = p.at("cpu_watts").get<double>();
        if (p.contains("mem_watts_per_gb"))
            c.mem_watts_per_gb = p.at("mem_watts_per_gb").get<double>();
        if (p.contains("memory_gb")) c.memory_gb = p.at("memory_gb").get<double>();
        if (p.contains("token_latency_s"))
            c.token_latency_s = p.at("token_latency_s").get<double>();
    }
    if (j.contains("carbon_intensity")) {
        const auto& ci = j.at("carbon_intensity");
        if (ci.contains("zone")) c.ci_zone = ci.at("zone").get<std::string>();
        if (ci.contains("url")) c.ci_url = ci.at("url").get<std::string>();
        if (ci.contains("value")) {
            const auto& v = ci.at("value");
            c.ci_value = v.is_string() ? v.get<std::string>() : v.dump();
        }
        if (ci.contains("file")) c.ci_file = ci.at("file").get<std::string>();
        if (ci.contains("token")) c.ci_token = ci.at("token").get<std::string>();
        if (ci.contains("retries")) c.ci_retries = ci.at("retries").get<int>();
    }
    if (j.contains("energy_log")) {
        const auto& e = j.at("energy_log");
        ColumnMapping m;
        if (e.contains("columns")) {
            const auto& cols = e.at("columns");
            if (cols.contains("process_name"))
                m.process_name = cols.at("process_name").get<std::string>();
            if (cols.contains("timestamp")) m.timestamp = cols.at("timestamp").get<std::string>();
            if (cols.contains("energy")) m.energy = cols.at("energy").get<std::string>();
            if (cols.contains("app_id")) m.app_id = cols.at("app_id").get<std::string>();
            if (cols.contains("interval")) m.interval = cols.at("interval").get<std::string>();
        }
        if (e.contains("energy_unit")) {
            m.energy_unit = energy_unit_from_string(e.at("energy_unit").get<std::string>());
        }
        c.column_mapping = m;
    }
    return c;
}

// Missing file is not an error; a present but malformed file is.
inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return Config{};
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw FormatError(path.string() + ": malformed JSON config");
    }
    try {
        return parse_config_json(j, path.string());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

inline std::optional<std::string> env_value(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

// The merged carbon-intensity selection after precedence is applied.
struct IntensitySelection {
    std::optional<std::string> zone;
    std::optional<std::string> url;
    std::optional<std::string> value;  // direct value, wins over providers
    std::optional<std::string> file;
    std::string token;
    int retries = 2;
};

inline IntensitySelection merge_intensity_selection(const Config& cfg,
                                                    std::optional<std::string> flag_zone,
                                                    std::optional<std::string> flag_url,
                                                    std::optional<std::string> flag_value,
                                                    std::optional<std::string> flag_file,
                                                    std::optional<std::string> flag_token = {},
                                                    std::optional<int> flag_retries = {}) {
    IntensitySelection sel;
    sel.zone = flag_zone ? flag_zone : (env_value(kEnvCiZone) ? env_value(kEnvCiZone) : cfg.ci_zone);
    sel.url = flag_url ? flag_url : (env_value(kEnvCiUrl) ? env_value(kEnvCiUrl) : cfg.ci_url);
    sel.value = flag_value ? flag_value : cfg.ci_value;
    sel.file = flag_file ? flag_file : cfg.ci_file;
    sel.token = flag_token ? *flag_token : cfg.ci_token.value_or("");
    sel.retries = flag_retries ? *flag_retries : cfg.ci_retries.value_or(2);
    return sel;
}

struct ResolvedIntensity {
    CarbonIntensityValue value;
    std::string provenance;  // for report notes and digests
};

// Direct value > file table (with builtin fallback) > remote endpoint >
// builtin table. Remote is used only when a URL was explicitly selected.
inline ResolvedIntensity resolve_intensity(const IntensitySelection& sel) {
    if (sel.value) {
        return {parse_intensity_value(*sel.value), "ci=" + *sel.value};
    }
    if (!sel.zone) {
        throw UsageError(
            "no carbon intensity configured: pass a direct value, or a zone with a "
            "builtin/file/remote provider");
    }
    const auto zone = GridZone::make(*sel.zone);
    if (sel.file) {
        const auto v = lookup_intensity(zone, FileTable{*sel.file});
        return {v, "zone=" + *sel.zone + ";file=" + *sel.file};
    }
    if (sel.url) {
        RemoteEndpoint remote{*sel.url, sel.retries, sel.token};
        const auto v = lookup_intensity(zone, IntensityProvider(remote));
        return {v, "zone=" + *sel.zone + ";url=" + *sel.url};
    }
    const auto v = lookup_intensity(zone, BuiltinTable{});
    return {v, "zone=" + *sel.zone + ";builtin"};
}

// Power model + latency after precedence (flags already folded in by the
// caller passing them as optionals).
struct EmbodiedParams {
    ServerPowerModel model;
    double token_latency_s = 0.47;
    std::string provenance;
};

inline EmbodiedParams resolve_embodied_params(const Config& cfg,
                                              std::optional<std::string> flag_preset,
                                              std::optional<double> flag_cpu_watts,
                                              std::optional<double> flag_mem_watts_per_gb,
                                              std::optional<double> flag_memory_gb,
                                              std::optional<double> flag_latency) {
    const auto preset_name = flag_preset ? flag_preset : cfg.power_preset;
    const EmbodiedPreset& base =
        preset_name ? find_preset(*preset_name) : intel_blog_2023_preset();

    const double cpu = flag_cpu_watts.value_or(cfg.cpu_watts.value_or(base.power.cpu_power.watts()));
    const double mem_w =
        flag_mem_watts_per_gb.value_or(cfg.mem_watts_per_gb.value_or(base.power.mem_watts_per_gb));
    const double mem_gb = flag_memory_gb.value_or(cfg.memory_gb.value_or(base.power.memory_gb));
    const double latency =
        flag_latency.value_or(cfg.token_latency_s.value_or(base.token_latency_s));

    EmbodiedParams out{ServerPowerModel::make(cpu, mem_w, mem_gb), latency, base.name};
    return out;
}

inline ConsumptionRateModel resolve_rates(const Config& cfg, std::optional<double> flag_input,
                                          std::optional<double> flag_output) {
    const double in = flag_input.value_or(
        cfg.input_rate.value_or(ConsumptionRateModel::kDefaultInputRate));
    const double out = flag_output.value_or(
        cfg.output_rate.value_or(ConsumptionRateModel::kDefaultOutputRate));
    return ConsumptionRateModel(in, out);
}

} // namespace carbon_ledger
