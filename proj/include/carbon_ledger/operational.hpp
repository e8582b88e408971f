#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/quantities.hpp"
#include "carbon_ledger/token_accounting.hpp"

namespace carbon_ledger {

// --- timestamps ---------------------------------------------------------------

// UTC instant with nanosecond resolution. Offsets in the input are
// normalized away at parse time.
struct Instant {
    std::int64_t epoch_s = 0;
    std::int32_t nanos = 0;

    friend bool operator==(const Instant& a, const Instant& b) noexcept {
        return a.epoch_s == b.epoch_s && a.nanos == b.nanos;
    }
    friend bool operator<(const Instant& a, const Instant& b) noexcept {
        return a.epoch_s != b.epoch_s ? a.epoch_s < b.epoch_s : a.nanos < b.nanos;
    }
    friend bool operator<=(const Instant& a, const Instant& b) noexcept { return !(b < a); }
};

namespace detail {

// Howard Hinnant's civil-date algorithms.
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const auto yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

inline unsigned days_in_month(int y, unsigned m) noexcept {
    static constexpr unsigned base[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return base[m - 1];
}

inline bool parse_uint_fixed(std::string_view s, std::size_t& pos, int digits, int& out) noexcept {
    if (pos + static_cast<std::size_t>(digits) > s.size()) return false;
    int v = 0;
    for (int i = 0; i < digits; ++i) {
        const char c = s[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(digits);
    out = v;
    return true;
}

} // namespace detail

// Accepts "YYYY-MM-DD[T ]HH:MM:SS[.fraction][Z|+HH:MM|-HH:MM|+HHMM|-HHMM]".
// A missing zone designator means UTC.
inline std::optional<Instant> parse_instant(std::string_view s) {
    using namespace detail;
    std::size_t pos = 0;
    int year, month, day, hour, min, sec;
    if (!parse_uint_fixed(s, pos, 4, year)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!parse_uint_fixed(s, pos, 2, month)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!parse_uint_fixed(s, pos, 2, day)) return std::nullopt;
    if (pos >= s.size() || (s[pos] != 'T' && s[pos] != ' ')) return std::nullopt;
    ++pos;
    if (!parse_uint_fixed(s, pos, 2, hour)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!parse_uint_fixed(s, pos, 2, min)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!parse_uint_fixed(s, pos, 2, sec)) return std::nullopt;

    if (month < 1 || month > 12 || day < 1 ||
        static_cast<unsigned>(day) > days_in_month(year, static_cast<unsigned>(month)) ||
        hour > 23 || min > 59 || sec > 60) {
        return std::nullopt;
    }

    std::int32_t nanos = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::int64_t frac = 0;
        int digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            if (digits < 9) {
                frac = frac * 10 + (s[pos] - '0');
                ++digits;
            }
            ++pos;
        }
        if (digits == 0) return std::nullopt;
        while (digits < 9) {
            frac *= 10;
            ++digits;
        }
        nanos = static_cast<std::int32_t>(frac);
    }

    std::int64_t offset_s = 0;
    if (pos < s.size()) {
        const char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            int oh, om = 0;
            if (!parse_uint_fixed(s, pos, 2, oh)) return std::nullopt;
            if (pos < s.size() && s[pos] == ':') ++pos;
            if (pos < s.size() && !parse_uint_fixed(s, pos, 2, om)) return std::nullopt;
            if (oh > 23 || om > 59) return std::nullopt;
            offset_s = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
        } else {
            return std::nullopt;
        }
    }
    if (pos != s.size()) return std::nullopt;

    const std::int64_t days = detail::days_from_civil(year, static_cast<unsigned>(month),
                                                      static_cast<unsigned>(day));
    return Instant{days * 86400 + hour * 3600 + min * 60 + sec - offset_s, nanos};
}

inline Instant instant_now() {
    using namespace std::chrono;
    const auto now = system_clock::now().time_since_epoch();
    const auto secs = duration_cast<seconds>(now);
    const auto ns = duration_cast<nanoseconds>(now - secs);
    return Instant{secs.count(), static_cast<std::int32_t>(ns.count())};
}

// Canonical rendering: UTC with 'Z', fraction printed only when nonzero and
// with trailing zeros trimmed.
inline std::string render_instant(const Instant& t) {
    std::int64_t days = t.epoch_s / 86400;
    std::int64_t rem = t.epoch_s % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y;
    unsigned m, d;
    detail::civil_from_days(days, y, m, d);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem % 3600 / 60),
                  static_cast<long long>(rem % 60));
    std::string out(buf);
    if (t.nanos != 0) {
        char frac[16];
        std::snprintf(frac, sizeof(frac), ".%09d", t.nanos);
        std::string f(frac);
        while (f.back() == '0') f.pop_back();
        out.insert(out.size() - 1, f);
    }
    return out;
}

// --- records and logs ---------------------------------------------------------

// One monitoring interval of one process. Energy is integer millijoules per
// the canonical log schema.
struct EnergyRecord {
    std::string process_name;
    std::optional<std::string> app_id;
    Instant timestamp;
    double interval_s = 60.0;
    std::int64_t energy_mj = 0;
};

struct EnergyLog {
    std::vector<EnergyRecord> records;  // nondecreasing timestamp order
    std::string source_path;
};

enum class ParseMode { Strict, Lenient };

enum class EnergyUnit { Microjoules, Millijoules, Joules };

inline EnergyUnit energy_unit_from_string(std::string_view s) {
    if (s == "uJ" || s == "\xc2\xb5J" || s == "microjoules") return EnergyUnit::Microjoules;
    if (s == "mJ" || s == "millijoules") return EnergyUnit::Millijoules;
    if (s == "J" || s == "joules") return EnergyUnit::Joules;
    throw FormatError("unknown energy unit '" + std::string(s) + "' (expected uJ, mJ or J)");
}

// Adapts vendor column names and units onto the canonical schema. The
// defaults are the canonical schema itself.
struct ColumnMapping {
    std::string process_name = "ProcessName";
    std::string timestamp = "TimeStamp";
    std::string energy = "TotalEnergyConsumption";
    std::string app_id = "AppId";
    std::string interval = "IntervalSeconds";
    EnergyUnit energy_unit = EnergyUnit::Millijoules;
};

struct RowSkip {
    std::size_t line = 0;
    std::string reason;
};

struct ParseOutcome {
    EnergyLog log;
    std::vector<RowSkip> skipped;  // populated in lenient mode only
};

namespace detail {

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// RFC-4180 style field split; fields must not contain line breaks.
inline bool split_csv_row(const std::string& line, std::vector<std::string>& fields,
                          std::string& err) {
    fields.clear();
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty()) {
                err = "unexpected quote inside unquoted field";
                return false;
            }
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        err = "unterminated quoted field";
        return false;
    }
    fields.push_back(std::move(cur));
    return true;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline bool parse_int64(std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    errno = 0;
    char* end = nullptr;
    std::string tmp(s);
    const long long v = std::strtoll(tmp.c_str(), &end, 10);
    if (errno == ERANGE || end != tmp.c_str() + tmp.size()) return false;
    out = v;
    return true;
}

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    std::string tmp(s);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (errno == ERANGE || end != tmp.c_str() + tmp.size()) return false;
    out = v;
    return true;
}

// Canonical interval rendering: whole numbers bare, fractions trimmed.
inline std::string format_interval(double v) {
    if (v == static_cast<double>(static_cast<std::int64_t>(v))) {
        return std::to_string(static_cast<std::int64_t>(v));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

} // namespace detail

// Streaming single-pass parse. Header is validated against the mapping;
// row-level problems abort with a line number in strict mode and are
// skipped (and counted) in lenient mode. Records come out sorted by
// timestamp.
inline ParseOutcome parse_energy_log_stream(std::istream& in, const std::string& source_path,
                                            ParseMode mode = ParseMode::Strict,
                                            const ColumnMapping& mapping = {}) {
    ParseOutcome out;
    out.log.source_path = source_path;

    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(source_path + ": empty file (missing header)");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xef\xbb\xbf") == 0) line.erase(0, 3);

    std::vector<std::string> header;
    std::string err;
    if (!detail::split_csv_row(line, header, err)) {
        throw FormatError(source_path + ": malformed header: " + err);
    }

    auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        const std::string want = detail::lowercase(name);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (detail::lowercase(header[i]) == want) return i;
        }
        return std::nullopt;
    };

    const auto col_name = find_col(mapping.process_name);
    const auto col_time = find_col(mapping.timestamp);
    const auto col_energy = find_col(mapping.energy);
    const auto col_app = find_col(mapping.app_id);
    const auto col_interval = find_col(mapping.interval);
    const std::pair<const std::optional<std::size_t>*, const std::string*> required_cols[] = {
        {&col_name, &mapping.process_name},
        {&col_time, &mapping.timestamp},
        {&col_energy, &mapping.energy}};
    for (const auto& [col, name] : required_cols) {
        if (!col->has_value()) {
            throw FormatError(source_path + ": missing required column '" + *name + "'");
        }
    }

    std::vector<std::string> fields;
    std::size_t line_no = 1;
    auto row_problem = [&](const std::string& reason) {
        if (mode == ParseMode::Strict) {
            throw FormatError(source_path + ": " + reason + " at line " +
                              std::to_string(line_no));
        }
        out.skipped.push_back({line_no, reason});
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        if (!detail::split_csv_row(line, fields, err)) {
            row_problem("malformed row (" + err + ")");
            continue;
        }
        if (fields.size() != header.size()) {
            row_problem("expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
            continue;
        }

        EnergyRecord rec;
        rec.process_name = fields[*col_name];
        if (rec.process_name.empty()) {
            row_problem("empty process name");
            continue;
        }

        const auto ts = parse_instant(fields[*col_time]);
        if (!ts) {
            row_problem("unparseable timestamp '" + fields[*col_time] + "'");
            continue;
        }
        rec.timestamp = *ts;

        const std::string& energy_field = fields[*col_energy];
        if (mapping.energy_unit == EnergyUnit::Millijoules) {
            std::int64_t mj = 0;
            if (!detail::parse_int64(energy_field, mj)) {
                row_problem("unparseable energy '" + energy_field + "'");
                continue;
            }
            if (mj < 0) {
                row_problem("negative energy");
                continue;
            }
            rec.energy_mj = mj;
        } else {
            double v = 0;
            if (!detail::parse_double(energy_field, v)) {
                row_problem("unparseable energy '" + energy_field + "'");
                continue;
            }
            if (v < 0) {
                row_problem("negative energy");
                continue;
            }
            rec.energy_mj = std::llround(mapping.energy_unit == EnergyUnit::Microjoules
                                             ? v / 1000.0
                                             : v * 1000.0);
        }

        if (col_app && !fields[*col_app].empty()) rec.app_id = fields[*col_app];

        if (col_interval && !fields[*col_interval].empty()) {
            double iv = 0;
            if (!detail::parse_double(fields[*col_interval], iv)) {
                row_problem("unparseable interval '" + fields[*col_interval] + "'");
                continue;
            }
            if (!(iv > 0.0) || iv > 60.0) {
                row_problem("interval out of range (0, 60]");
                continue;
            }
            rec.interval_s = iv;
        }

        out.log.records.push_back(std::move(rec));
    }

    std::stable_sort(out.log.records.begin(), out.log.records.end(),
                     [](const EnergyRecord& a, const EnergyRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    return out;
}

inline ParseOutcome parse_energy_log(const std::filesystem::path& path,
                                     ParseMode mode = ParseMode::Strict,
                                     const ColumnMapping& mapping = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open energy log '" + path.string() + "'");
    }
    return parse_energy_log_stream(in, path.string(), mode, mapping);
}

// Canonical CSV form: fixed header and column order, UTC timestamps, LF line
// endings. parse(serialize(log)) reproduces the same bytes on re-serialize.
inline std::string serialize_energy_log(const EnergyLog& log) {
    std::string out = "ProcessName,AppId,TimeStamp,IntervalSeconds,TotalEnergyConsumption\n";
    for (const auto& r : log.records) {
        out += detail::csv_escape(r.process_name);
        out += ',';
        if (r.app_id) out += detail::csv_escape(*r.app_id);
        out += ',';
        out += render_instant(r.timestamp);
        out += ',';
        out += detail::format_interval(r.interval_s);
        out += ',';
        out += std::to_string(r.energy_mj);
        out += '\n';
    }
    return out;
}

// --- process filtering and attribution -----------------------------------------

// Case-insensitive exact process name; a glob when the pattern contains
// '*' or '?'.
class ProcessFilter {
public:
    explicit ProcessFilter(std::string pattern) : pattern_(std::move(pattern)) {
        if (pattern_.empty()) {
            throw std::invalid_argument("process filter pattern must be nonempty");
        }
        lower_ = detail::lowercase(pattern_);
        is_glob_ = pattern_.find_first_of("*?") != std::string::npos;
    }

    const std::string& pattern() const noexcept { return pattern_; }

    bool matches(std::string_view process_name) const {
        const std::string name = detail::lowercase(process_name);
        if (is_glob_) return carbon_ledger::detail::segment_match(lower_, name);
        return name == lower_;
    }

private:
    std::string pattern_;
    std::string lower_;
    bool is_glob_ = false;
};

struct EnergySum {
    EnergyQuantity energy;
    std::size_t matched_records = 0;
    std::int64_t total_millijoules = 0;  // exact integer sum

    bool no_match() const noexcept { return matched_records == 0; }
};

// Sums TotalEnergyConsumption over matching records. Duplicate rows for the
// same interval are summed, matching monitors that emit one row per hardware
// sub-component. A zero-match outcome is distinct from a zero-energy sum.
inline EnergySum sum_process_energy(const EnergyLog& log, const ProcessFilter& f) {
    std::int64_t total_mj = 0;
    std::size_t matched = 0;
    for (const auto& r : log.records) {
        if (f.matches(r.process_name)) {
            total_mj += r.energy_mj;
            ++matched;
        }
    }
    return EnergySum{EnergyQuantity::from_millijoules(static_cast<double>(total_mj)), matched,
                     total_mj};
}

// As above, restricted to records whose interval overlaps [begin, end].
inline EnergySum sum_process_energy_window(const EnergyLog& log, const ProcessFilter& f,
                                           const Instant& begin, const Instant& end) {
    std::int64_t total_mj = 0;
    std::size_t matched = 0;
    for (const auto& r : log.records) {
        if (!f.matches(r.process_name)) continue;
        Instant rec_end = r.timestamp;
        rec_end.epoch_s += static_cast<std::int64_t>(r.interval_s) + 1;
        if (r.timestamp <= end && begin <= rec_end) {
            total_mj += r.energy_mj;
            ++matched;
        }
    }
    return EnergySum{EnergyQuantity::from_millijoules(static_cast<double>(total_mj)), matched,
                     total_mj};
}

inline EnergyQuantity require_match(const EnergySum& sum, const ProcessFilter& f,
                                    const EnergyLog& log) {
    if (sum.no_match()) {
        throw NoMatchError("no records in '" + log.source_path + "' match process filter '" +
                           f.pattern() + "'");
    }
    return sum.energy;
}

inline CarbonQuantity operational_carbon(const EnergyQuantity& e, const CarbonIntensityValue& ci) {
    return carbon_from_energy(e, ci);
}

} // namespace carbon_ledger
