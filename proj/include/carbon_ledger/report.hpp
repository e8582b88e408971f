#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/metrics_harness.hpp"
#include "carbon_ledger/quantities.hpp"

namespace carbon_ledger {

// --- input digest -----------------------------------------------------------

// FNV-1a 64-bit over a canonical description of the inputs. Stability across
// runs is the point; this is not a security hash.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

// --- footprint report ---------------------------------------------------------

// The LLMaaS footprint summary: both energies, the CI they were weighted
// with, and the three carbon figures. Carbons are always derived from the
// unrounded energies; renderers round at the last moment.
struct FootprintReport {
    EnergyQuantity embodied_energy;
    EnergyQuantity operational_energy;
    CarbonIntensityValue carbon_intensity;
    CarbonQuantity embodied_carbon;
    CarbonQuantity operational_carbon;
    CarbonQuantity total_carbon;
    std::string inputs_digest;
    std::vector<std::string> notes;
};

inline FootprintReport build_report(const EnergyQuantity& embodied,
                                    const EnergyQuantity& operational,
                                    const CarbonIntensityValue& ci,
                                    std::vector<std::string> notes = {},
                                    const std::string& digest_material = {}) {
    FootprintReport r;
    r.embodied_energy = embodied;
    r.operational_energy = operational;
    r.carbon_intensity = ci;
    r.embodied_carbon = carbon_from_energy(embodied, ci);
    r.operational_carbon = carbon_from_energy(operational, ci);
    r.total_carbon = add_carbon(r.embodied_carbon, r.operational_carbon);
    r.notes = std::move(notes);
    std::string material = digest_material;
    if (material.empty()) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "emb_j=%.17g;op_j=%.17g;ci_g_kwh=%.17g",
                      embodied.joules(), operational.joules(), ci.grams_per_kwh());
        material = buf;
    }
    r.inputs_digest = digest_hex(material);
    return r;
}

// Checks the derived-field invariants at 1e-9 relative; used on reports that
// arrive from outside (parsed JSON) rather than from build_report.
inline bool verify_report(const FootprintReport& r, double rel_tol = 1e-9) {
    auto close = [rel_tol](double a, double b) {
        const double scale = std::max({std::fabs(a), std::fabs(b), 1e-30});
        return std::fabs(a - b) <= rel_tol * scale;
    };
    return close(r.embodied_carbon.grams(),
                 carbon_from_energy(r.embodied_energy, r.carbon_intensity).grams()) &&
           close(r.operational_carbon.grams(),
                 carbon_from_energy(r.operational_energy, r.carbon_intensity).grams()) &&
           close(r.total_carbon.grams(),
                 r.embodied_carbon.grams() + r.operational_carbon.grams());
}

enum class ReportFormat { Json, Csv, Table, Markdown };

inline ReportFormat report_format_from_string(std::string_view s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "table") return ReportFormat::Table;
    if (s == "markdown") return ReportFormat::Markdown;
    throw UsageError("unknown report format '" + std::string(s) +
                     "' (expected json, csv, table or markdown)");
}

namespace detail {

struct ReportRow {
    const char* metric;
    std::string value;
    const char* unit;
};

inline std::vector<ReportRow> report_rows(const FootprintReport& r) {
    return {
        {"Embodied Energy", format_fixed_trunc(r.embodied_energy.kilowatt_hours(), 3), "kWh"},
        {"Operational Energy", format_fixed_trunc(r.operational_energy.kilowatt_hours(), 3),
         "kWh"},
        {"Carbon Intensity", format_fixed_trunc(r.carbon_intensity.kilograms_per_kwh(), 3),
         "kgCO2e/kWh"},
        {"Embodied Carbon Emissions", display_kg(r.embodied_carbon), "kgCO2e"},
        {"Operational Carbon Emissions", display_kg(r.operational_carbon), "kgCO2e"},
        {"Total Carbon Emissions (LLMaaS)", display_kg(r.total_carbon), "kgCO2e"},
    };
}

} // namespace detail

inline nlohmann::json report_to_json(const FootprintReport& r) {
    return nlohmann::json{{"embodied_energy_kwh", r.embodied_energy.kilowatt_hours()},
                          {"operational_energy_kwh", r.operational_energy.kilowatt_hours()},
                          {"carbon_intensity_g_per_kwh", r.carbon_intensity.grams_per_kwh()},
                          {"embodied_carbon_kg", r.embodied_carbon.kilograms()},
                          {"operational_carbon_kg", r.operational_carbon.kilograms()},
                          {"total_carbon_kg", r.total_carbon.kilograms()},
                          {"inputs_digest", r.inputs_digest},
                          {"notes", r.notes}};
}

inline FootprintReport report_from_json(const nlohmann::json& j) {
    FootprintReport r;
    r.embodied_energy =
        EnergyQuantity::from_kilowatt_hours(j.at("embodied_energy_kwh").get<double>());
    r.operational_energy =
        EnergyQuantity::from_kilowatt_hours(j.at("operational_energy_kwh").get<double>());
    r.carbon_intensity = CarbonIntensityValue::from_grams_per_kwh(
        j.at("carbon_intensity_g_per_kwh").get<double>());
    r.embodied_carbon = CarbonQuantity::from_kilograms(j.at("embodied_carbon_kg").get<double>());
    r.operational_carbon =
        CarbonQuantity::from_kilograms(j.at("operational_carbon_kg").get<double>());
    r.total_carbon = CarbonQuantity::from_kilograms(j.at("total_carbon_kg").get<double>());
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    for (const auto& n : j.value("notes", nlohmann::json::array())) {
        r.notes.push_back(n.get<std::string>());
    }
    return r;
}

inline FootprintReport parse_report_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError("unparseable report JSON");
    return report_from_json(j);
}

// Deterministic byte output for a given report and format. The table format
// mimics the summary-table row order; kg and kWh values are shown truncated
// to 3 decimals (the tables' convention) while JSON carries full precision.
inline std::string render_report(const FootprintReport& r, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return report_to_json(r).dump(2) + "\n";
        case ReportFormat::Csv: {
            std::string out = "metric,value,unit\n";
            for (const auto& row : detail::report_rows(r)) {
                out += std::string(row.metric) + "," + row.value + "," + row.unit + "\n";
            }
            return out;
        }
        case ReportFormat::Markdown: {
            std::string out;
            for (const auto& n : r.notes) out += "> note: " + n + "\n";
            if (!r.notes.empty()) out += "\n";
            out += "| Metric | Value |\n|---|---|\n";
            for (const auto& row : detail::report_rows(r)) {
                out += "| " + std::string(row.metric) + " | " + row.value + " " + row.unit +
                       " |\n";
            }
            return out;
        }
        case ReportFormat::Table: {
            std::string out;
            for (const auto& n : r.notes) out += "note: " + n + "\n";
            const auto rows = detail::report_rows(r);
            std::size_t width = 0;
            for (const auto& row : rows) width = std::max(width, std::strlen(row.metric));
            for (const auto& row : rows) {
                std::string line(row.metric);
                line.append(width + 2 - line.size(), ' ');
                out += line + row.value + " " + row.unit + "\n";
            }
            return out;
        }
    }
    throw UsageError("unhandled report format");
}

// --- metrics serialization ------------------------------------------------

inline nlohmann::json metrics_to_json(const SustainabilityMetrics& m) {
    nlohmann::json j;
    j["correctness"] = m.correctness
                           ? nlohmann::json{{"passed", m.correctness->passed},
                                            {"total", m.correctness->total},
                                            {"rate", m.correctness->value()}}
                           : nlohmann::json(nullptr);
    j["runtime_s"] = m.runtime_s ? nlohmann::json(*m.runtime_s) : nlohmann::json(nullptr);
    j["peak_memory_bytes"] =
        m.peak_memory_bytes ? nlohmann::json(*m.peak_memory_bytes) : nlohmann::json(nullptr);
    j["flops"] = m.flops ? nlohmann::json(*m.flops) : nlohmann::json(nullptr);
    j["energy_j"] = m.energy ? nlohmann::json(m.energy->joules()) : nlohmann::json(nullptr);
    j["notes"] = m.notes;
    return j;
}

inline nlohmann::json measured_run_to_json(const MeasuredRun& run) {
    nlohmann::json j = metrics_to_json(run.metrics);
    j["timed_out"] = run.timed_out;
    j["exit_code"] = run.exit_code ? nlohmann::json(*run.exit_code) : nlohmann::json(nullptr);
    j["term_signal"] =
        run.term_signal ? nlohmann::json(*run.term_signal) : nlohmann::json(nullptr);
    j["started_at"] = render_instant(run.started_at);
    j["ended_at"] = render_instant(run.ended_at);
    return j;
}

} // namespace carbon_ledger
