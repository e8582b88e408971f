#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "httplib.h"

#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/quantities.hpp"

namespace carbon_ledger {

struct GridZone {
    std::string zone_id;
    std::string description;

    static GridZone make(std::string id, std::string description = {}) {
        if (id.empty()) throw std::invalid_argument("zone id must be nonempty");
        return GridZone{std::move(id), std::move(description)};
    }
};

// "172", "172g/kWh", "0.172kg/kWh" and similar. A bare number means g/kWh.
inline CarbonIntensityValue parse_intensity_value(std::string_view text) {
    std::string s(text);
    std::size_t consumed = 0;
    double v = 0;
    try {
        v = std::stod(s, &consumed);
    } catch (const std::exception&) {
        throw FormatError("unparseable carbon intensity '" + s + "'");
    }
    std::string suffix = detail::lowercase(std::string_view(s).substr(consumed));
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
    double scale = 1.0;
    if (suffix.empty() || suffix == "g/kwh" || suffix == "g") {
        scale = 1.0;
    } else if (suffix == "kg/kwh" || suffix == "kg" || suffix == "kgco2e/kwh") {
        scale = 1000.0;
    } else {
        throw FormatError("unknown carbon intensity unit '" + suffix + "' in '" + s + "'");
    }
    if (v < 0) throw FormatError("carbon intensity must be non-negative: '" + s + "'");
    return CarbonIntensityValue::from_grams_per_kwh(v * scale);
}

namespace detail {

struct ZoneEntry {
    std::string zone_id;  // as declared
    double g_per_kwh;
    std::string description;
};

using ZoneTable = std::map<std::string, ZoneEntry>;  // keyed by lowercase id

inline std::string known_zones(const ZoneTable& table) {
    std::string out;
    for (const auto& [key, entry] : table) {
        if (!out.empty()) out += ", ";
        out += entry.zone_id;
    }
    return out;
}

} // namespace detail

// The builtin table carries exactly the three documented zones; anything
// else must come from a file table or a remote provider.
inline const detail::ZoneTable& builtin_intensity_table() {
    static const detail::ZoneTable table = [] {
        detail::ZoneTable t;
        t["eu-dc"] = {"EU-DC", 127.0, "Europe-based data center, 91% carbon-free energy"};
        t["east-asia-dc"] = {"EAST-ASIA-DC", 360.0,
                             "East-Asia-based data center, 28% carbon-free energy"};
        t["de-case-study"] = {"DE-CASE-STUDY", 172.0,
                              "German grid value used in the case study"};
        return t;
    }();
    return table;
}

struct BuiltinTable {};

// CSV `zone_id,g_per_kwh,description`; zones here shadow builtin ones.
struct FileTable {
    std::filesystem::path path;
};

struct RemoteEndpoint {
    std::string base_url;
    int retries = 2;
    std::string auth_token;  // sent as a Bearer header when nonempty
};

using IntensityProvider = std::variant<BuiltinTable, FileTable, RemoteEndpoint>;

inline detail::ZoneTable load_intensity_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open intensity table '" + path.string() + "'");
    detail::ZoneTable table;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    std::string err;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && detail::lowercase(line).rfind("zone_id", 0) == 0) continue;
        if (!detail::split_csv_row(line, fields, err)) {
            throw FormatError(path.string() + ": " + err + " at line " + std::to_string(line_no));
        }
        if (fields.size() < 2) {
            throw FormatError(path.string() + ": expected zone_id,g_per_kwh[,description] at line " +
                              std::to_string(line_no));
        }
        if (fields[0].empty()) {
            throw FormatError(path.string() + ": empty zone id at line " + std::to_string(line_no));
        }
        const auto value = parse_intensity_value(fields[1]);
        table[detail::lowercase(fields[0])] = {fields[0], value.grams_per_kwh(),
                                               fields.size() > 2 ? fields[2] : ""};
    }
    return table;
}

// GET {base}/carbon-intensity?zone={id}; expects a JSON body with a
// non-negative `carbonIntensity` number in g/kWh. Connection failures and
// non-2xx statuses are retried; a malformed body is not.
inline CarbonIntensityValue fetch_remote_intensity(const std::string& base_url,
                                                   const std::string& zone_id, int retries = 2,
                                                   const std::string& auth_token = {}) {
    std::string host = base_url;
    std::string prefix;
    const auto scheme_pos = host.find("://");
    if (scheme_pos == std::string::npos) {
        throw FormatError("carbon intensity URL must be absolute: '" + base_url + "'");
    }
    const auto path_pos = host.find('/', scheme_pos + 3);
    if (path_pos != std::string::npos) {
        prefix = host.substr(path_pos);
        host = host.substr(0, path_pos);
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    }

    httplib::Client client(host);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(10, 0);
    httplib::Headers headers;
    if (!auth_token.empty()) headers.emplace("Authorization", "Bearer " + auth_token);

    const std::string path =
        prefix + "/carbon-intensity?zone=" + httplib::detail::encode_query_param(zone_id);
    const int attempts = retries < 0 ? 1 : retries + 1;
    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        auto res = client.Get(path, headers);
        if (!res) {
            last_failure = "connection failed (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_failure = "HTTP status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("carbonIntensity") ||
            !body["carbonIntensity"].is_number()) {
            throw FormatError("malformed carbon intensity payload from " + base_url +
                              " for zone '" + zone_id + "'");
        }
        const double value = body["carbonIntensity"].get<double>();
        if (value < 0) {
            throw FormatError("negative carbon intensity from " + base_url + " for zone '" +
                              zone_id + "'");
        }
        return CarbonIntensityValue::from_grams_per_kwh(value);
    }
    throw TransportError("carbon intensity fetch from " + base_url + " for zone '" + zone_id +
                             "' failed after " + std::to_string(attempts) + " attempts: " +
                             last_failure,
                         attempts);
}

namespace detail {

struct RemoteCache {
    std::mutex mutex;
    std::map<std::string, double> values;  // (base|zone|hour) -> g/kWh
};

inline RemoteCache& remote_intensity_cache() {
    static RemoteCache cache;
    return cache;
}

inline std::int64_t current_hour_bucket() {
    using namespace std::chrono;
    return duration_cast<hours>(system_clock::now().time_since_epoch()).count();
}

} // namespace detail

inline void clear_intensity_cache() {
    auto& cache = detail::remote_intensity_cache();
    std::lock_guard<std::mutex> lock(cache.mutex);
    cache.values.clear();
}

// Resolves a zone's CI. File tables fall back to the builtin table for zones
// they do not declare (file > builtin); remote endpoints are used only when
// explicitly selected, with responses cached per (endpoint, zone, hour).
inline CarbonIntensityValue lookup_intensity(const GridZone& zone, const IntensityProvider& p) {
    const std::string key = detail::lowercase(zone.zone_id);

    if (std::holds_alternative<BuiltinTable>(p)) {
        const auto& table = builtin_intensity_table();
        const auto it = table.find(key);
        if (it == table.end()) {
            throw NoMatchError("unknown zone '" + zone.zone_id + "' (known zones: " +
                               detail::known_zones(table) + ")");
        }
        return CarbonIntensityValue::from_grams_per_kwh(it->second.g_per_kwh);
    }

    if (const auto* file = std::get_if<FileTable>(&p)) {
        const auto table = load_intensity_file(file->path);
        const auto it = table.find(key);
        if (it != table.end()) {
            return CarbonIntensityValue::from_grams_per_kwh(it->second.g_per_kwh);
        }
        const auto& builtin = builtin_intensity_table();
        const auto bit = builtin.find(key);
        if (bit != builtin.end()) {
            return CarbonIntensityValue::from_grams_per_kwh(bit->second.g_per_kwh);
        }
        throw NoMatchError("unknown zone '" + zone.zone_id + "' (known zones: " +
                           detail::known_zones(table) + (table.empty() ? "" : ", ") +
                           detail::known_zones(builtin) + ")");
    }

    const auto& remote = std::get<RemoteEndpoint>(p);
    auto& cache = detail::remote_intensity_cache();
    const std::string cache_key =
        remote.base_url + "|" + key + "|" + std::to_string(detail::current_hour_bucket());
    {
        std::lock_guard<std::mutex> lock(cache.mutex);
        const auto it = cache.values.find(cache_key);
        if (it != cache.values.end()) {
            return CarbonIntensityValue::from_grams_per_kwh(it->second);
        }
    }
    const auto value =
        fetch_remote_intensity(remote.base_url, zone.zone_id, remote.retries, remote.auth_token);
    {
        std::lock_guard<std::mutex> lock(cache.mutex);
        cache.values[cache_key] = value.grams_per_kwh();
    }
    return value;
}

} // namespace carbon_ledger
