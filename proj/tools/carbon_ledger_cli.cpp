// carbon-ledger: carbon-footprint accounting for LLM-assisted development.
//
// Subcommands map onto the pipeline stages: scan (token counts),
// estimate-embodied (inference energy/carbon), ingest-energy (process energy
// logs), measure (run a command under measurement), intensity (grid CI
// lookup), report (assemble the footprint summary) and replicate-paper
// (check the built-in case-study fixtures).
//
// Exit codes: 0 success, 1 usage error, 2 input/format error,
// 3 no-match/empty result, 4 remote-provider failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "carbon_ledger/config.hpp"
#include "carbon_ledger/embodied.hpp"
#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/intensity.hpp"
#include "carbon_ledger/ledger.hpp"
#include "carbon_ledger/metrics_harness.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/quantities.hpp"
#include "carbon_ledger/replication.hpp"
#include "carbon_ledger/report.hpp"
#include "carbon_ledger/token_accounting.hpp"

namespace {

using namespace carbon_ledger;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kNoMatch = 3;
constexpr int kRemote = 4;

std::string file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Shared carbon-intensity flags; every consuming subcommand exposes the same
// group.
struct CiFlags {
    std::optional<std::string> zone;
    std::optional<std::string> value;
    std::optional<std::string> url;
    std::optional<std::string> file;
    std::optional<std::string> token;
    std::optional<int> retries;

    void attach(CLI::App* cmd) {
        cmd->add_option("--zone", zone, "grid zone id (builtin: EU-DC, EAST-ASIA-DC, DE-CASE-STUDY)");
        cmd->add_option("--ci", value, "direct carbon intensity, e.g. 172 or 0.172kg/kWh");
        cmd->add_option("--ci-url", url, "remote intensity endpoint base URL");
        cmd->add_option("--ci-file", file, "CSV intensity table (zone_id,g_per_kwh,description)");
        cmd->add_option("--ci-token", token, "bearer token for the remote endpoint");
        cmd->add_option("--ci-retries", retries, "remote retry count")->check(CLI::NonNegativeNumber);
    }

    ResolvedIntensity resolve(const Config& cfg) const {
        return resolve_intensity(
            merge_intensity_selection(cfg, zone, url, value, file, token, retries));
    }

    bool any_flag() const {
        return zone || value || url || file;
    }
};

struct ScanOptions {
    std::string root;
    std::vector<std::string> globs;
    std::string direction;
    std::string label;
    std::optional<std::uint64_t> measured_tokens;
    std::optional<double> input_rate;
    std::optional<double> output_rate;
    bool json = false;
};

int run_scan(const ScanOptions& opt, const Config& cfg) {
    const auto dir = direction_from_string(opt.direction);
    const auto rates = resolve_rates(cfg, opt.input_rate, opt.output_rate);
    auto result = scan_corpus(opt.root, opt.globs, dir, opt.label);
    std::string token_source = "estimated";
    if (opt.measured_tokens) {
        result.stats = CorpusStats::with_measured_tokens(
            result.stats.file_count, result.stats.total_words, *opt.measured_tokens, dir,
            result.stats.label);
        token_source = "measured";
    }
    const auto cu = consumption_seconds(result.stats.total_tokens, dir, rates);

    if (opt.json) {
        nlohmann::json j{{"label", result.stats.label},
                         {"direction", to_string(dir)},
                         {"file_count", result.stats.file_count},
                         {"total_words", result.stats.total_words},
                         {"total_tokens", result.stats.total_tokens},
                         {"token_source", token_source},
                         {"cu_seconds", cu.seconds()},
                         {"skipped", nlohmann::json::array()}};
        for (const auto& s : result.skipped) {
            j["skipped"].push_back({{"path", s.path}, {"reason", s.reason}});
        }
        std::cout << j.dump(2) << "\n";
        return kOk;
    }

    std::cout << "corpus: " << result.stats.label << " (" << to_string(dir) << ")\n"
              << "files: " << result.stats.file_count << "\n"
              << "words: " << result.stats.total_words << "\n"
              << "tokens: " << result.stats.total_tokens << " (" << token_source << ")\n"
              << "consumption: " << format_trimmed(cu.seconds(), 3) << " CU-seconds @ "
              << format_trimmed(rates.input_rate(), 9) << "/"
              << format_trimmed(rates.output_rate(), 9) << " s/token\n";
    for (const auto& s : result.skipped) {
        std::cerr << "warning: skipped " << s.path << " (" << s.reason << ")\n";
    }
    return kOk;
}

struct EmbodiedOptions {
    std::uint64_t tokens = 0;
    std::optional<std::string> preset;
    std::optional<double> cpu_watts;
    std::optional<double> mem_watts_per_gb;
    std::optional<double> memory_gb;
    std::optional<double> token_latency_s;
    CiFlags ci;
    std::string label = "session";
    std::optional<std::string> ledger_path;
    bool json = false;
};

int run_estimate_embodied(const EmbodiedOptions& opt, const Config& cfg) {
    const auto params = resolve_embodied_params(cfg, opt.preset, opt.cpu_watts,
                                                opt.mem_watts_per_gb, opt.memory_gb,
                                                opt.token_latency_s);
    const auto profile = InferenceProfile::make(params.token_latency_s, opt.tokens);
    const auto power = server_power(params.model);
    const auto energy = embodied_energy(params.model, profile);
    const auto ci = opt.ci.resolve(cfg);
    const auto carbon = embodied_carbon(energy, ci.value);

    std::optional<std::size_t> ledger_count;
    if (opt.ledger_path) {
        LedgerEntry entry{render_instant(instant_now()), LedgerKind::Embodied, opt.label, energy,
                          carbon, opt.tokens};
        ledger_count = append_ledger(*opt.ledger_path, entry);
    }

    if (opt.json) {
        nlohmann::json j{{"server_watts", power.watts()},
                         {"token_latency_s", params.token_latency_s},
                         {"tokens", opt.tokens},
                         {"energy_j", energy.joules()},
                         {"energy_kwh", energy.kilowatt_hours()},
                         {"ci_g_per_kwh", ci.value.grams_per_kwh()},
                         {"carbon_g", carbon.grams()},
                         {"carbon_kg", carbon.kilograms()},
                         {"label", opt.label}};
        if (ledger_count) j["ledger_entries"] = *ledger_count;
        std::cout << j.dump(2) << "\n";
        return kOk;
    }

    std::cout << "server power: " << format_trimmed(power.watts(), 3) << " W\n"
              << "token latency: " << format_trimmed(params.token_latency_s, 6) << " s\n"
              << "tokens: " << opt.tokens << "\n"
              << "embodied energy: " << format_trimmed(energy.joules(), 3) << " J ("
              << format_fixed(energy.kilowatt_hours(), 6) << " kWh)\n"
              << "carbon intensity: " << format_trimmed(ci.value.grams_per_kwh(), 6)
              << " g/kWh\n"
              << "embodied carbon: " << format_trimmed(carbon.grams(), 6) << " g ("
              << display_kg(carbon) << " kg)\n";
    if (ledger_count) {
        std::cout << "ledger: " << *opt.ledger_path << " now holds " << *ledger_count
                  << " entries\n";
    }
    return kOk;
}

struct IngestOptions {
    std::string log_path;
    std::string process;
    bool lenient = false;
    CiFlags ci;
    std::optional<std::string> window_start;
    std::optional<std::string> window_end;
    std::string label = "operational";
    std::optional<std::string> ledger_path;
    bool json = false;
};

int run_ingest_energy(const IngestOptions& opt, const Config& cfg) {
    const ColumnMapping mapping = cfg.column_mapping.value_or(ColumnMapping{});
    const auto outcome = parse_energy_log(
        opt.log_path, opt.lenient ? ParseMode::Lenient : ParseMode::Strict, mapping);
    const ProcessFilter filter(opt.process);

    EnergySum sum;
    if (opt.window_start || opt.window_end) {
        if (!opt.window_start || !opt.window_end) {
            throw UsageError("--window-start and --window-end must be given together");
        }
        const auto begin = parse_instant(*opt.window_start);
        const auto end = parse_instant(*opt.window_end);
        if (!begin || !end) throw FormatError("unparseable window timestamp");
        sum = sum_process_energy_window(outcome.log, filter, *begin, *end);
    } else {
        sum = sum_process_energy(outcome.log, filter);
    }
    const auto energy = require_match(sum, filter, outcome.log);

    std::optional<ResolvedIntensity> ci;
    if (opt.ci.any_flag() || cfg.ci_zone || cfg.ci_value || env_value(kEnvCiZone)) {
        ci = opt.ci.resolve(cfg);
    }
    std::optional<CarbonQuantity> carbon;
    if (ci) carbon = operational_carbon(energy, ci->value);

    std::optional<std::size_t> ledger_count;
    if (opt.ledger_path) {
        if (!carbon) {
            throw UsageError("appending to the ledger requires a carbon intensity");
        }
        LedgerEntry entry{render_instant(instant_now()), LedgerKind::Operational, opt.label,
                          energy, *carbon, std::nullopt};
        ledger_count = append_ledger(*opt.ledger_path, entry);
    }

    if (opt.json) {
        nlohmann::json j{{"log", outcome.log.source_path},
                         {"records", outcome.log.records.size()},
                         {"rows_skipped", nlohmann::json::array()},
                         {"matched_records", sum.matched_records},
                         {"energy_mj", sum.total_millijoules},
                         {"energy_kj", energy.kilojoules()},
                         {"energy_kwh", energy.kilowatt_hours()}};
        for (const auto& s : outcome.skipped) {
            j["rows_skipped"].push_back({{"line", s.line}, {"reason", s.reason}});
        }
        if (ci) {
            j["ci_g_per_kwh"] = ci->value.grams_per_kwh();
            j["carbon_g"] = carbon->grams();
            j["carbon_kg"] = carbon->kilograms();
        }
        if (ledger_count) j["ledger_entries"] = *ledger_count;
        std::cout << j.dump(2) << "\n";
        return kOk;
    }

    std::cout << "log: " << outcome.log.source_path << " (" << outcome.log.records.size()
              << " records";
    if (!outcome.skipped.empty()) std::cout << ", " << outcome.skipped.size() << " rows skipped";
    std::cout << ")\n"
              << "matched: " << sum.matched_records << " records for '" << opt.process << "'\n"
              << "operational energy: " << sum.total_millijoules << " mJ ("
              << format_trimmed(energy.kilojoules(), 6) << " kJ, "
              << format_fixed(energy.kilowatt_hours(), 6) << " kWh)\n";
    if (carbon) {
        std::cout << "carbon intensity: " << format_trimmed(ci->value.grams_per_kwh(), 6)
                  << " g/kWh\n"
                  << "operational carbon: " << format_trimmed(carbon->grams(), 6) << " g ("
                  << display_kg(*carbon) << " kg)\n";
    }
    if (ledger_count) {
        std::cout << "ledger: " << *opt.ledger_path << " now holds " << *ledger_count
                  << " entries\n";
    }
    for (const auto& s : outcome.skipped) {
        std::cerr << "warning: line " << s.line << " skipped (" << s.reason << ")\n";
    }
    return kOk;
}

struct MeasureOptions {
    std::vector<std::string> command;
    std::string workdir = ".";
    double timeout_s = 3600.0;
    bool no_correctness = false;
    bool no_runtime = false;
    bool no_memory = false;
    std::optional<std::uint64_t> passed;
    std::optional<std::uint64_t> total;
    std::optional<std::string> test_report;
    std::optional<std::uint64_t> flops;
    std::optional<std::string> energy_log;
    std::optional<std::string> energy_process;
    bool json = false;
};

int run_measure(const MeasureOptions& opt, const Config& cfg) {
    MetricSelection sel;
    sel.correctness = !opt.no_correctness;
    sel.runtime = !opt.no_runtime;
    sel.memory = !opt.no_memory;
    sel.flops = opt.flops.has_value();
    sel.energy = opt.energy_log.has_value();

    auto run = run_measured(opt.command, opt.workdir, opt.timeout_s, sel);

    if (opt.passed.has_value() != opt.total.has_value()) {
        throw UsageError("--passed and --total must be given together");
    }
    if (sel.correctness) {
        if (opt.passed) {
            run.metrics.correctness = pass_rate(*opt.passed, *opt.total);
            run.metrics.notes.push_back("correctness overridden by --passed/--total");
        } else if (opt.test_report) {
            run.metrics.correctness = parse_test_report(*opt.test_report);
            run.metrics.notes.push_back("correctness taken from test report");
        }
    }
    if (opt.flops) run.metrics.flops = *opt.flops;

    if (opt.energy_log) {
        const ColumnMapping mapping = cfg.column_mapping.value_or(ColumnMapping{});
        const auto outcome = parse_energy_log(*opt.energy_log, ParseMode::Strict, mapping);
        const std::string process =
            opt.energy_process.value_or(std::filesystem::path(opt.command[0]).filename().string());
        const ProcessFilter filter(process);
        const auto sum =
            sum_process_energy_window(outcome.log, filter, run.started_at, run.ended_at);
        if (sum.no_match()) {
            run.metrics.notes.push_back("no energy records matched process '" + process +
                                        "' in the run window");
        } else {
            run.metrics = attach_energy(run.metrics, sum.energy);
        }
    }

    if (opt.json) {
        std::cout << measured_run_to_json(run).dump(2) << "\n";
        return kOk;
    }

    if (run.metrics.runtime_s) {
        std::cout << "runtime: " << format_fixed(*run.metrics.runtime_s, 3) << " s\n";
    }
    if (run.metrics.peak_memory_bytes) {
        std::cout << "peak memory: " << *run.metrics.peak_memory_bytes << " bytes\n";
    }
    if (run.metrics.correctness) {
        std::cout << "correctness: " << run.metrics.correctness->passed << "/"
                  << run.metrics.correctness->total << " ("
                  << format_trimmed(run.metrics.correctness->value() * 100.0, 2) << "%)\n";
    }
    if (run.metrics.flops) std::cout << "flops: " << *run.metrics.flops << "\n";
    if (run.metrics.energy) {
        std::cout << "energy: " << format_trimmed(run.metrics.energy->joules(), 3) << " J\n";
    }
    if (run.exit_code) std::cout << "exit code: " << *run.exit_code << "\n";
    if (run.term_signal) std::cout << "terminated by signal: " << *run.term_signal << "\n";
    if (run.timed_out) std::cout << "timed out: yes\n";
    for (const auto& n : run.metrics.notes) std::cout << "note: " << n << "\n";
    return kOk;
}

struct IntensityOptions {
    CiFlags ci;
    bool json = false;
};

int run_intensity(const IntensityOptions& opt, const Config& cfg) {
    const auto resolved = opt.ci.resolve(cfg);
    if (opt.json) {
        nlohmann::json j{{"g_per_kwh", resolved.value.grams_per_kwh()},
                         {"source", resolved.provenance}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << "carbon intensity: " << format_trimmed(resolved.value.grams_per_kwh(), 6)
              << " g/kWh (" << resolved.provenance << ")\n";
    return kOk;
}

struct ReportOptions {
    std::optional<double> embodied_kwh;
    std::optional<double> embodied_j;
    std::optional<double> operational_kwh;
    std::optional<double> operational_j;
    std::optional<std::string> from_ledger;
    CiFlags ci;
    std::vector<std::string> notes;
    std::string format = "table";
};

int run_report(const ReportOptions& opt, const Config& cfg) {
    const auto ci = opt.ci.resolve(cfg);

    EnergyQuantity embodied, operational;
    std::vector<std::string> notes = opt.notes;
    std::string material;

    if (opt.from_ledger) {
        if (opt.embodied_kwh || opt.embodied_j || opt.operational_kwh || opt.operational_j) {
            throw UsageError("--from-ledger excludes direct energy flags");
        }
        const auto contents = read_ledger(*opt.from_ledger);
        for (const auto& p : contents.problems) {
            std::cerr << "warning: " << *opt.from_ledger << ":" << p.line << ": " << p.reason
                      << "\n";
        }
        const auto sums = sum_ledger(contents.entries);
        embodied = sums.embodied_energy;
        operational = sums.operational_energy;
        notes.push_back("energies summed from " + std::to_string(contents.entries.size()) +
                        " ledger entries; carbons recomputed at the given intensity");
        material = "ledger_fnv=" + digest_hex(file_bytes(*opt.from_ledger));
    } else {
        if (opt.embodied_kwh && opt.embodied_j) {
            throw UsageError("give embodied energy in kWh or J, not both");
        }
        if (opt.operational_kwh && opt.operational_j) {
            throw UsageError("give operational energy in kWh or J, not both");
        }
        if (opt.embodied_kwh) embodied = EnergyQuantity::from_kilowatt_hours(*opt.embodied_kwh);
        if (opt.embodied_j) embodied = EnergyQuantity::from_joules(*opt.embodied_j);
        if (opt.operational_kwh) {
            operational = EnergyQuantity::from_kilowatt_hours(*opt.operational_kwh);
        }
        if (opt.operational_j) operational = EnergyQuantity::from_joules(*opt.operational_j);
    }

    char buf[200];
    std::snprintf(buf, sizeof(buf), "emb_j=%.17g;op_j=%.17g;ci_g_kwh=%.17g;src=%s;%s",
                  embodied.joules(), operational.joules(), ci.value.grams_per_kwh(),
                  ci.provenance.c_str(), material.c_str());
    const auto report = build_report(embodied, operational, ci.value, std::move(notes), buf);
    std::cout << render_report(report, report_format_from_string(opt.format));
    return kOk;
}

int run_replicate_paper() {
    const auto rep = replication::replicate_paper();
    std::cout << rep.text;
    return rep.ok() ? kOk : kInput;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carbon-ledger: embodied + operational carbon accounting for AI-assisted "
                 "software development"};
    app.require_subcommand(1);
    std::string config_path = kDefaultConfigFile;
    app.add_option("--config", config_path, "JSON config file")->capture_default_str();

    ScanOptions scan_opt;
    auto* scan = app.add_subcommand("scan", "count words and estimate tokens for a corpus");
    scan->add_option("--root", scan_opt.root, "directory to scan")->required();
    scan->add_option("--glob", scan_opt.globs, "include glob(s), e.g. '**/*.ts'");
    scan->add_option("--direction", scan_opt.direction, "input or output")->required();
    scan->add_option("--label", scan_opt.label, "corpus label");
    scan->add_option("--tokens", scan_opt.measured_tokens,
                     "directly measured token count, bypassing the 4/3 estimator");
    scan->add_option("--input-rate", scan_opt.input_rate, "CU-seconds per input token");
    scan->add_option("--output-rate", scan_opt.output_rate, "CU-seconds per output token");
    scan->add_flag("--json", scan_opt.json, "JSON output");

    EmbodiedOptions emb_opt;
    auto* emb = app.add_subcommand("estimate-embodied",
                                   "embodied inference energy and carbon from token counts");
    emb->add_option("--tokens", emb_opt.tokens, "total tokens processed during inference")
        ->required();
    emb->add_option("--preset", emb_opt.preset, "power-model preset (intel-blog-2023)");
    emb->add_option("--cpu-watts", emb_opt.cpu_watts, "CPU power draw, W");
    emb->add_option("--mem-watts-per-gb", emb_opt.mem_watts_per_gb, "memory power draw, W/GB");
    emb->add_option("--memory-gb", emb_opt.memory_gb, "memory in use, GB");
    emb->add_option("--token-latency", emb_opt.token_latency_s, "seconds per token");
    emb->add_option("--label", emb_opt.label, "session label")->capture_default_str();
    emb->add_option("--ledger", emb_opt.ledger_path, "append this session to a JSONL ledger");
    emb->add_flag("--json", emb_opt.json, "JSON output");
    emb_opt.ci.attach(emb);

    IngestOptions ing_opt;
    auto* ing = app.add_subcommand("ingest-energy",
                                   "sum per-process energy from a monitor CSV log");
    ing->add_option("--log", ing_opt.log_path, "energy log CSV")->required();
    ing->add_option("--process", ing_opt.process, "process name or glob")->required();
    ing->add_flag("--lenient", ing_opt.lenient, "skip and count bad rows instead of aborting");
    ing->add_option("--window-start", ing_opt.window_start, "restrict to records from this time");
    ing->add_option("--window-end", ing_opt.window_end, "restrict to records up to this time");
    ing->add_option("--label", ing_opt.label, "ledger label")->capture_default_str();
    ing->add_option("--ledger", ing_opt.ledger_path, "append the result to a JSONL ledger");
    ing->add_flag("--json", ing_opt.json, "JSON output");
    ing_opt.ci.attach(ing);

    MeasureOptions meas_opt;
    auto* meas = app.add_subcommand("measure", "run a command and record sustainability metrics");
    meas->add_option("command", meas_opt.command, "command and arguments (after --)")
        ->required();
    meas->add_option("--workdir", meas_opt.workdir, "working directory")->capture_default_str();
    meas->add_option("--timeout", meas_opt.timeout_s, "timeout in seconds")
        ->capture_default_str();
    meas->add_flag("--no-correctness", meas_opt.no_correctness, "disable the correctness metric");
    meas->add_flag("--no-runtime", meas_opt.no_runtime, "disable the runtime metric");
    meas->add_flag("--no-memory", meas_opt.no_memory, "disable the memory metric");
    meas->add_option("--passed", meas_opt.passed, "passed test count (with --total)");
    meas->add_option("--total", meas_opt.total, "total test count (with --passed)");
    meas->add_option("--test-report", meas_opt.test_report,
                     "pass/total file ('passed,total' or JUnit XML)");
    meas->add_option("--flops", meas_opt.flops, "externally measured FLOP count");
    meas->add_option("--energy-log", meas_opt.energy_log,
                     "energy CSV to join by process and time window");
    meas->add_option("--energy-process", meas_opt.energy_process,
                     "process name for the energy join (default: command basename)");
    meas->add_flag("--json", meas_opt.json, "JSON output");

    IntensityOptions int_opt;
    auto* inten = app.add_subcommand("intensity", "resolve a grid carbon-intensity value");
    inten->add_flag("--json", int_opt.json, "JSON output");
    int_opt.ci.attach(inten);

    ReportOptions rep_opt;
    auto* rep = app.add_subcommand("report", "assemble and render the LLMaaS footprint report");
    rep->add_option("--embodied-kwh", rep_opt.embodied_kwh, "embodied energy, kWh");
    rep->add_option("--embodied-j", rep_opt.embodied_j, "embodied energy, J");
    rep->add_option("--operational-kwh", rep_opt.operational_kwh, "operational energy, kWh");
    rep->add_option("--operational-j", rep_opt.operational_j, "operational energy, J");
    rep->add_option("--from-ledger", rep_opt.from_ledger, "sum energies from a JSONL ledger");
    rep->add_option("--note", rep_opt.notes, "extra note line(s) for the report");
    rep->add_option("--format", rep_opt.format, "json, csv, table or markdown")
        ->capture_default_str();
    rep_opt.ci.attach(rep);

    auto* replicate = app.add_subcommand(
        "replicate-paper", "run the built-in case-study fixtures and print matches/deltas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const auto cfg = load_config(config_path);
        if (*scan) return run_scan(scan_opt, cfg);
        if (*emb) return run_estimate_embodied(emb_opt, cfg);
        if (*ing) return run_ingest_energy(ing_opt, cfg);
        if (*meas) return run_measure(meas_opt, cfg);
        if (*inten) return run_intensity(int_opt, cfg);
        if (*rep) return run_report(rep_opt, cfg);
        if (*replicate) return run_replicate_paper();
        std::cerr << "error: no subcommand selected\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NoMatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNoMatch;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRemote;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const LaunchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
}
