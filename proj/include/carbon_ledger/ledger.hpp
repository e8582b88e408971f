#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <unistd.h>

#include "carbon_ledger/embodied.hpp"
#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/quantities.hpp"

namespace carbon_ledger {

enum class LedgerKind { Embodied, Operational };

inline const char* to_string(LedgerKind k) noexcept {
    return k == LedgerKind::Embodied ? "embodied" : "operational";
}

// One append-only session record: the energy/carbon fragment of a report
// plus bookkeeping. Entries are never rewritten.
struct LedgerEntry {
    std::string timestamp;  // ISO-8601
    LedgerKind kind = LedgerKind::Embodied;
    std::string label;
    EnergyQuantity energy;
    CarbonQuantity carbon;
    std::optional<std::uint64_t> tokens;  // embodied entries only

    nlohmann::json to_json() const {
        nlohmann::json j{{"timestamp", timestamp},
                         {"kind", to_string(kind)},
                         {"label", label},
                         {"energy_j", energy.joules()},
                         {"carbon_g", carbon.grams()}};
        if (tokens) j["tokens"] = *tokens;
        return j;
    }

    static LedgerEntry from_json(const nlohmann::json& j) {
        LedgerEntry e;
        e.timestamp = j.at("timestamp").get<std::string>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "embodied") {
            e.kind = LedgerKind::Embodied;
        } else if (kind == "operational") {
            e.kind = LedgerKind::Operational;
        } else {
            throw FormatError("unknown ledger entry kind '" + kind + "'");
        }
        e.label = j.value("label", "");
        e.energy = EnergyQuantity::from_joules(j.at("energy_j").get<double>());
        e.carbon = CarbonQuantity::from_grams(j.at("carbon_g").get<double>());
        if (j.contains("tokens")) e.tokens = j["tokens"].get<std::uint64_t>();
        return e;
    }
};

struct LedgerProblem {
    std::size_t line = 0;
    std::string reason;
};

struct LedgerContents {
    std::vector<LedgerEntry> entries;
    std::vector<LedgerProblem> problems;
};

// Reads every parseable JSON line; corrupt lines (including a truncated
// trailing half-line) are reported with their line number, not fatal.
inline LedgerContents read_ledger(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open ledger '" + path.string() + "'");
    LedgerContents contents;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            contents.problems.push_back({line_no, "unparseable JSON line"});
            continue;
        }
        try {
            contents.entries.push_back(LedgerEntry::from_json(j));
        } catch (const std::exception& e) {
            contents.problems.push_back({line_no, e.what()});
        }
    }
    return contents;
}

// Appends one entry as a single JSON line in one write() call, creating the
// file if needed. If the existing file lacks a trailing newline the entry is
// still written on a fresh line; the prior bytes are never touched. Returns
// the number of well-formed entries now in the file.
inline std::size_t append_ledger(const std::filesystem::path& path, const LedgerEntry& entry) {
    std::string payload = entry.to_json().dump();
    payload += '\n';

    const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644);
    if (fd < 0) {
        throw IoError("cannot open ledger '" + path.string() + "' for append: " +
                      std::strerror(errno));
    }
    // A trailing half-line would otherwise merge with this entry.
    const off_t size = ::lseek(fd, 0, SEEK_END);
    if (size > 0) {
        char last = '\n';
        if (::pread(fd, &last, 1, size - 1) == 1 && last != '\n') {
            payload.insert(payload.begin(), '\n');
        }
    }
    const ssize_t written = ::write(fd, payload.data(), payload.size());
    const int write_errno = errno;
    ::close(fd);
    if (written != static_cast<ssize_t>(payload.size())) {
        throw IoError("short write to ledger '" + path.string() + "': " +
                      std::strerror(write_errno));
    }
    return read_ledger(path).entries.size();
}

struct LedgerSums {
    EnergyQuantity embodied_energy;
    CarbonQuantity embodied_carbon;
    EnergyQuantity operational_energy;
    CarbonQuantity operational_carbon;
};

inline LedgerSums sum_ledger(const std::vector<LedgerEntry>& entries) {
    LedgerSums s;
    for (const auto& e : entries) {
        if (e.kind == LedgerKind::Embodied) {
            s.embodied_energy += e.energy;
            s.embodied_carbon += e.carbon;
        } else {
            s.operational_energy += e.energy;
            s.operational_carbon += e.carbon;
        }
    }
    return s;
}

inline std::vector<EmbodiedSession> ledger_embodied_sessions(
    const std::vector<LedgerEntry>& entries) {
    std::vector<EmbodiedSession> sessions;
    for (const auto& e : entries) {
        if (e.kind != LedgerKind::Embodied) continue;
        EmbodiedSession s;
        s.timestamp = e.timestamp;
        s.energy = e.energy;
        s.carbon = e.carbon;
        s.label = e.label;
        if (e.tokens) s.profile.token_count = *e.tokens;
        sessions.push_back(std::move(s));
    }
    return sessions;
}

} // namespace carbon_ledger
