#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "carbon_ledger/embodied.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/quantities.hpp"
#include "carbon_ledger/report.hpp"
#include "carbon_ledger/token_accounting.hpp"

// Built-in fixtures for the published software-testing case study, and the
// replication run that checks the canonical pipeline against them. The
// published tables are shipped verbatim, including their internal
// inconsistencies; the replication output marks those as NOTE and the two
// documented value deltas as WARN.

namespace carbon_ledger::replication {

// One column of the published file-operations table.
struct CorpusColumn {
    const char* label;
    Direction direction;
    std::uint64_t files;
    std::uint64_t words_per_file;
    std::uint64_t tokens_per_file;
    std::int64_t cr_per_file_s;  // published seconds per file
    std::int64_t cr_total_s;     // published column total, seconds
    std::uint64_t tokens_total;  // published column token count
};

inline const std::vector<CorpusColumn>& corpus_columns() {
    static const std::vector<CorpusColumn> cols{
        {"input frontend", Direction::Input, 192, 177, 235, 94, 18073, 45184},
        {"output frontend", Direction::Output, 149, 80, 107, 128, 19072, 8533},
        {"input backend", Direction::Input, 208, 300, 400, 160, 33280, 120000},
        {"output backend", Direction::Output, 50, 150, 200, 240, 12000, 30000},
    };
    return cols;
}

// Published case-study constants.
inline constexpr std::uint64_t kTotalTokens = 203717;
inline constexpr double kTokenLatencyS = 0.47;
inline constexpr double kCpuWatts = 350.0;
inline constexpr double kMemWattsPerGb = 0.1;
inline constexpr double kMemoryGb = 60.0;
inline constexpr double kServerWatts = 356.0;
inline constexpr double kPublishedEmbodiedKwh = 9.203;
inline constexpr double kPublishedOperationalKwh = 1.131;
inline constexpr double kPublishedBackendKwh = 1.1314;
inline constexpr double kCaseStudyCiGramsPerKwh = 172.0;

// Energy-log fixtures reproducing the published operational totals
// (446000 mJ frontend, 4190500000 mJ backend).
inline const char* frontend_fixture_csv() {
    return "ProcessName,AppId,TimeStamp,IntervalSeconds,TotalEnergyConsumption\n"
           "frontend-tests.exe,,2024-03-01T10:00:00Z,60,100000\n"
           "frontend-tests.exe,,2024-03-01T10:01:00Z,60,200000\n"
           "frontend-tests.exe,,2024-03-01T10:02:00Z,60,146000\n";
}

inline const char* backend_fixture_csv() {
    return "ProcessName,AppId,TimeStamp,IntervalSeconds,TotalEnergyConsumption\n"
           "backend-tests.exe,,2024-03-01T11:00:00Z,60,2000000000\n"
           "backend-tests.exe,,2024-03-01T11:01:00Z,60,2000000000\n"
           "backend-tests.exe,,2024-03-01T11:02:00Z,60,190500000\n";
}

struct ReplicationReport {
    std::string text;
    int pass = 0;
    int note = 0;
    int warn = 0;
    int fail = 0;

    bool ok() const noexcept { return fail == 0; }
};

namespace detail {

class Lines {
public:
    explicit Lines(ReplicationReport& r) : r_(r) {}

    void section(const std::string& title) { r_.text += title + "\n"; }
    void pass(const std::string& msg) {
        r_.text += "  PASS  " + msg + "\n";
        ++r_.pass;
    }
    void note(const std::string& msg) {
        r_.text += "  NOTE  " + msg + "\n";
        ++r_.note;
    }
    void warn(const std::string& msg) {
        r_.text += "  WARN  " + msg + "\n";
        ++r_.warn;
    }
    void check(bool ok, const std::string& msg) {
        if (ok) {
            pass(msg);
        } else {
            r_.text += "  FAIL  " + msg + "\n";
            ++r_.fail;
        }
    }

private:
    ReplicationReport& r_;
};

} // namespace detail

// Runs every built-in fixture through the canonical pipeline. Output is a
// pure function of the fixtures: byte-identical on every run.
inline ReplicationReport replicate_paper() {
    ReplicationReport rep;
    detail::Lines out(rep);
    const ConsumptionRateModel rates;

    out.section("consumption rates (seconds/token)");
    out.check(rates.input_rate() == 0.4 && rates.output_rate() == 1.2,
              "input 0.4 s/token, output 1.2 s/token");

    out.section("file operations: per-file consumption");
    for (const auto& c : corpus_columns()) {
        const auto cu = consumption_seconds(c.tokens_per_file, c.direction, rates);
        std::ostringstream msg;
        msg << c.label << ": " << c.tokens_per_file << " tokens/file -> "
            << cu.whole_seconds() << " s/file (published " << c.cr_per_file_s << ")";
        out.check(cu.whole_seconds() == c.cr_per_file_s, msg.str());
    }

    out.section("file operations: words -> tokens (4/3 ratio, half-up)");
    for (const auto& c : corpus_columns()) {
        const auto tokens = words_to_tokens(c.words_per_file);
        const auto delta = tokens >= c.tokens_per_file ? tokens - c.tokens_per_file
                                                       : c.tokens_per_file - tokens;
        std::ostringstream msg;
        msg << c.label << ": " << c.words_per_file << " words -> " << tokens
            << " tokens (published " << c.tokens_per_file
            << (delta == 0 ? ")" : ", within +/-1)");
        out.check(delta <= 1, msg.str());
    }

    out.section("file operations: column consumption totals");
    for (const auto& c : corpus_columns()) {
        const auto cu = consumption_seconds(c.tokens_total, c.direction, rates);
        std::ostringstream msg;
        msg << c.label << ": " << c.tokens_total << " tokens -> " << cu.whole_seconds()
            << " s truncated";
        if (cu.whole_seconds() == c.cr_total_s) {
            msg << " (published " << c.cr_total_s << ")";
            out.pass(msg.str());
        } else {
            msg << "; published " << c.cr_total_s << " = " << c.files << " files x "
                << c.cr_per_file_s << " s/file";
            out.note(msg.str());
        }
    }

    out.section("token ledger");
    {
        TokenLedger ledger;
        for (const auto& c : corpus_columns()) {
            ledger.add(CorpusStats::with_measured_tokens(c.files, c.files * c.words_per_file,
                                                         c.tokens_total, c.direction, c.label));
        }
        const auto totals = ledger_totals(ledger, rates);
        std::ostringstream msg;
        msg << "45184 + 8533 + 120000 + 30000 = " << totals.tokens << " tokens (published "
            << kTotalTokens << ")";
        out.check(totals.tokens == kTotalTokens, msg.str());
    }

    out.section("embodied inference energy");
    {
        const auto model = ServerPowerModel::make(kCpuWatts, kMemWattsPerGb, kMemoryGb);
        const auto watts = server_power(model).watts();
        out.check(watts == kServerWatts,
                  "server power 350 W + 0.1 W/GB x 60 GB = " +
                      format_trimmed(watts, 3) + " W (published 356)");

        const auto profile = InferenceProfile::make(kTokenLatencyS, kTotalTokens);
        const auto energy = embodied_energy(model, profile);
        std::ostringstream msg;
        msg << "formula energy 356 W x 0.47 s x 203717 tokens = "
            << format_fixed_trunc(energy.kilowatt_hours(), 3)
            << " kWh; published summary lists " << format_fixed(kPublishedEmbodiedKwh, 3)
            << " kWh (delta "
            << format_fixed((energy.kilowatt_hours() - kPublishedEmbodiedKwh) /
                                kPublishedEmbodiedKwh * 100.0,
                            1)
            << "%)";
        out.warn(msg.str());
    }

    out.section("operational energy fixtures");
    {
        std::istringstream fe(frontend_fixture_csv());
        const auto fe_log = parse_energy_log_stream(fe, "frontend-fixture");
        const auto fe_sum = sum_process_energy(fe_log.log, ProcessFilter("frontend-tests.exe"));
        std::ostringstream msg;
        msg << "frontend: " << fe_sum.matched_records << " records -> "
            << format_trimmed(fe_sum.energy.kilojoules(), 3) << " kJ = "
            << format_fixed(fe_sum.energy.kilowatt_hours(), 6)
            << " kWh (published 0.446 kJ, displayed as 0.0001 kWh)";
        out.check(fe_sum.energy.kilojoules() == 0.446, msg.str());

        std::istringstream be(backend_fixture_csv());
        const auto be_log = parse_energy_log_stream(be, "backend-fixture");
        const auto be_sum = sum_process_energy(be_log.log, ProcessFilter("backend-tests.exe"));
        std::ostringstream msg2;
        msg2 << "backend: " << be_sum.matched_records << " records -> "
             << format_trimmed(be_sum.energy.kilojoules(), 3)
             << " kJ (published 4190.5)";
        out.check(be_sum.energy.kilojoules() == 4190.5, msg2.str());

        std::ostringstream msg3;
        msg3 << "backend: 4190.5 kJ = " << format_fixed_trunc(be_sum.energy.kilowatt_hours(), 3)
             << " kWh; published table lists " << format_fixed(kPublishedBackendKwh, 4)
             << " kWh for the same row";
        out.warn(msg3.str());
    }

    out.section("footprint summary");
    {
        const auto report = build_report(
            EnergyQuantity::from_kilowatt_hours(kPublishedEmbodiedKwh),
            EnergyQuantity::from_kilowatt_hours(kPublishedOperationalKwh),
            CarbonIntensityValue::from_grams_per_kwh(kCaseStudyCiGramsPerKwh));
        out.check(display_kg(report.embodied_carbon) == "1.582",
                  "embodied carbon " + display_kg(report.embodied_carbon) +
                      " kgCO2e (published 1.582)");
        out.check(display_kg(report.operational_carbon) == "0.194",
                  "operational carbon " + display_kg(report.operational_carbon) +
                      " kgCO2e (published 0.194)");
        out.check(display_kg(report.total_carbon) == "1.777",
                  "total carbon " + display_kg(report.total_carbon) +
                      " kgCO2e (published 1.777), summed before rounding");
    }

    std::ostringstream tail;
    tail << "\nchecks: " << rep.pass << " pass, " << rep.note << " note, " << rep.warn
         << " warn, " << rep.fail << " fail\n";
    rep.text += tail.str();
    return rep;
}

} // namespace carbon_ledger::replication
