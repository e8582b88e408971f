#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "carbon_ledger/embodied.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/quantities.hpp"
#include "carbon_ledger/report.hpp"
#include "carbon_ledger/token_accounting.hpp"

using namespace carbon_ledger;

namespace {

constexpr int kCases = 1000;

bool rel_close(double a, double b, double tol) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) <= tol * scale;
}

} // namespace

TEST_CASE("property: carbon_from_energy is bilinear") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> energy(0.0, 1e10);
    std::uniform_real_distribution<double> intensity(0.0, 5000.0);
    std::uniform_real_distribution<double> scale(0.0, 1000.0);
    for (int i = 0; i < kCases; ++i) {
        const double e = energy(rng);
        const double ci = intensity(rng);
        const double k = scale(rng);
        const auto base =
            carbon_from_energy(EnergyQuantity::from_joules(e),
                               CarbonIntensityValue::from_grams_per_kwh(ci));
        const auto scaled_e =
            carbon_from_energy(EnergyQuantity::from_joules(k * e),
                               CarbonIntensityValue::from_grams_per_kwh(ci));
        const auto scaled_ci =
            carbon_from_energy(EnergyQuantity::from_joules(e),
                               CarbonIntensityValue::from_grams_per_kwh(k * ci));
        REQUIRE(rel_close(scaled_e.grams(), k * base.grams(), 1e-12));
        REQUIRE(rel_close(scaled_ci.grams(), k * base.grams(), 1e-12));
    }
}

TEST_CASE("property: add_carbon commutes and associates") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> grams(0.0, 1e8);
    for (int i = 0; i < kCases; ++i) {
        const auto a = CarbonQuantity::from_grams(grams(rng));
        const auto b = CarbonQuantity::from_grams(grams(rng));
        const auto c = CarbonQuantity::from_grams(grams(rng));
        REQUIRE(add_carbon(a, b).grams() == add_carbon(b, a).grams());
        REQUIRE(rel_close(add_carbon(add_carbon(a, b), c).grams(),
                          add_carbon(a, add_carbon(b, c)).grams(), 1e-12));
    }
}

TEST_CASE("property: unit conversions round-trip within 1e-9") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> joules(0.0, 1e12);
    std::uniform_real_distribution<double> kwh(0.0, 1e5);
    for (int i = 0; i < kCases; ++i) {
        const double j = joules(rng);
        REQUIRE(rel_close(kwh_to_joules(joules_to_kwh(EnergyQuantity::from_joules(j))).joules(),
                          j, 1e-9));
        const double k = kwh(rng);
        REQUIRE(rel_close(
            joules_to_kwh(EnergyQuantity::from_kilowatt_hours(k)), k, 1e-9));
        REQUIRE(rel_close(EnergyQuantity::from_kilojoules(j / 1000.0).joules(), j, 1e-9));
        REQUIRE(rel_close(EnergyQuantity::from_millijoules(j).joules(), j / 1000.0, 1e-9));
    }
}

TEST_CASE("property: consumption_seconds is exactly additive in tokens") {
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<std::uint64_t> tokens(0, 10'000'000);
    std::uniform_int_distribution<std::int64_t> rate_nanos(0, 5'000'000'000);
    for (int i = 0; i < kCases; ++i) {
        const ConsumptionRateModel m(static_cast<double>(rate_nanos(rng)) / 1e9,
                                     static_cast<double>(rate_nanos(rng)) / 1e9);
        const auto d = (i % 2 == 0) ? Direction::Input : Direction::Output;
        const auto a = tokens(rng);
        const auto b = tokens(rng);
        const auto whole = consumption_seconds(a + b, d, m);
        const auto parts = consumption_seconds(a, d, m) + consumption_seconds(b, d, m);
        REQUIRE(whole.nanos() == parts.nanos());
    }
}

TEST_CASE("property: words_to_tokens is monotone and tracks 4/3 within half a token") {
    std::mt19937_64 rng(46);
    std::uniform_int_distribution<std::uint64_t> words(0, 1'000'000'000);
    for (int i = 0; i < kCases; ++i) {
        std::uint64_t a = words(rng);
        std::uint64_t b = words(rng);
        if (a > b) std::swap(a, b);
        const auto fa = words_to_tokens(a);
        const auto fb = words_to_tokens(b);
        REQUIRE(fa <= fb);
        // |f(w) - 4w/3| <= 0.5  <=>  |3 f(w) - 4w| <= 1 in exact integers.
        const auto diff = 3 * static_cast<std::int64_t>(fa) - 4 * static_cast<std::int64_t>(a);
        REQUIRE(std::llabs(diff) <= 1);
    }
}

TEST_CASE("property: embodied_energy is additive over token partitions") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> cpu(0.0, 500.0);
    std::uniform_real_distribution<double> mem_w(0.0, 1.0);
    std::uniform_real_distribution<double> mem_gb(0.0, 256.0);
    std::uniform_real_distribution<double> latency(0.01, 2.0);
    std::uniform_int_distribution<std::uint64_t> tokens(0, 1'000'000);
    std::uniform_int_distribution<int> nparts(2, 5);
    for (int i = 0; i < kCases; ++i) {
        const auto model = ServerPowerModel::make(cpu(rng), mem_w(rng), mem_gb(rng));
        const double t = latency(rng);
        const auto n = tokens(rng);

        const int parts = nparts(rng);
        std::vector<std::uint64_t> split(static_cast<std::size_t>(parts), 0);
        std::uniform_int_distribution<std::uint64_t> pick(0, n);
        std::vector<std::uint64_t> cuts{0, n};
        for (int p = 1; p < parts; ++p) cuts.push_back(pick(rng));
        std::sort(cuts.begin(), cuts.end());

        double sum = 0.0;
        for (std::size_t c = 1; c < cuts.size(); ++c) {
            sum += embodied_energy(model, InferenceProfile::make(t, cuts[c] - cuts[c - 1]))
                       .joules();
        }
        const double whole = embodied_energy(model, InferenceProfile::make(t, n)).joules();
        REQUIRE(rel_close(sum, whole, 1e-12));

        // Linearity in token count: doubling N doubles the energy.
        const double doubled =
            embodied_energy(model, InferenceProfile::make(t, 2 * n)).joules();
        REQUIRE(rel_close(doubled, 2.0 * whole, 1e-12));
    }
}

TEST_CASE("property: ledger totals distribute over concatenation") {
    std::mt19937_64 rng(48);
    std::uniform_int_distribution<std::uint64_t> tokens(0, 500'000);
    std::uniform_int_distribution<std::uint64_t> files(1, 500);
    std::uniform_int_distribution<int> entries(0, 6);
    const ConsumptionRateModel m;
    for (int i = 0; i < kCases; ++i) {
        TokenLedger a, b, both;
        for (int k = entries(rng); k > 0; --k) {
            const auto s = CorpusStats::with_measured_tokens(
                files(rng), 0, tokens(rng), k % 2 ? Direction::Input : Direction::Output);
            a.add(s);
            both.add(s);
        }
        for (int k = entries(rng); k > 0; --k) {
            const auto s = CorpusStats::with_measured_tokens(
                files(rng), 0, tokens(rng), k % 2 ? Direction::Input : Direction::Output);
            b.add(s);
            both.add(s);
        }
        const auto ta = ledger_totals(a, m);
        const auto tb = ledger_totals(b, m);
        const auto tboth = ledger_totals(both, m);
        REQUIRE(tboth.tokens == ta.tokens + tb.tokens);
        REQUIRE(tboth.cu_seconds.nanos() == (ta.cu_seconds + tb.cu_seconds).nanos());
    }
}

namespace {

EnergyLog random_log(std::mt19937_64& rng) {
    static const char* names[] = {"alpha.exe", "beta.exe", "other.bin", "odd,name",
                                  "quo\"ted"};
    std::uniform_int_distribution<int> rows(0, 8);
    std::uniform_int_distribution<std::size_t> name_idx(0, std::size(names) - 1);
    std::uniform_int_distribution<std::int64_t> epoch(0, 4'000'000'000LL);
    std::uniform_int_distribution<std::int32_t> nanos(0, 999'999'999);
    std::uniform_int_distribution<std::int64_t> energy(0, 1'000'000'000'000LL);
    std::uniform_real_distribution<double> interval(0.5, 60.0);
    std::uniform_int_distribution<int> coin(0, 3);

    EnergyLog log;
    log.source_path = "generated";
    const int n = rows(rng);
    for (int i = 0; i < n; ++i) {
        EnergyRecord r;
        r.process_name = names[name_idx(rng)];
        if (coin(rng) == 0) r.app_id = "app-" + std::to_string(i);
        r.timestamp = Instant{epoch(rng), coin(rng) == 0 ? nanos(rng) : 0};
        r.interval_s = coin(rng) == 0 ? 60.0 : interval(rng);
        r.energy_mj = energy(rng);
        log.records.push_back(std::move(r));
    }
    std::stable_sort(log.records.begin(), log.records.end(),
                     [](const EnergyRecord& a, const EnergyRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    return log;
}

} // namespace

TEST_CASE("property: energy log serialize -> parse -> serialize is byte-identical") {
    std::mt19937_64 rng(49);
    for (int i = 0; i < kCases; ++i) {
        const auto log = random_log(rng);
        const auto bytes = serialize_energy_log(log);
        std::istringstream in(bytes);
        const auto parsed = parse_energy_log_stream(in, "generated");
        REQUIRE(parsed.skipped.empty());
        REQUIRE(serialize_energy_log(parsed.log) == bytes);
    }
}

TEST_CASE("property: disjoint filters partition the energy sum") {
    std::mt19937_64 rng(50);
    for (int i = 0; i < kCases; ++i) {
        const auto log = random_log(rng);
        const ProcessFilter fa("alpha.exe");
        const ProcessFilter fb("beta.exe");
        const ProcessFilter either("*.exe");  // exactly the union of the two
        const auto sa = sum_process_energy(log, fa);
        const auto sb = sum_process_energy(log, fb);
        const auto su = sum_process_energy(log, either);
        REQUIRE(su.matched_records == sa.matched_records + sb.matched_records);
        // Exact at the integer level; the derived quantity within float slack.
        REQUIRE(su.total_millijoules == sa.total_millijoules + sb.total_millijoules);
        REQUIRE(rel_close(su.energy.joules(), sa.energy.joules() + sb.energy.joules(), 1e-12));

        // Test-side oracle: re-derive both sides by direct iteration.
        std::int64_t oracle_a = 0, oracle_b = 0, oracle_u = 0;
        for (const auto& r : log.records) {
            if (fa.matches(r.process_name)) oracle_a += r.energy_mj;
            if (fb.matches(r.process_name)) oracle_b += r.energy_mj;
            if (either.matches(r.process_name)) oracle_u += r.energy_mj;
        }
        REQUIRE(oracle_u == oracle_a + oracle_b);
        REQUIRE(su.total_millijoules == oracle_u);
    }
}

TEST_CASE("property: energy sums ignore record order") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < kCases; ++i) {
        auto log = random_log(rng);
        const auto before = sum_process_energy(log, ProcessFilter("*"));
        std::shuffle(log.records.begin(), log.records.end(), rng);
        const auto after = sum_process_energy(log, ProcessFilter("*"));
        REQUIRE(before.total_millijoules == after.total_millijoules);
        REQUIRE(before.energy.joules() == after.energy.joules());
        REQUIRE(before.matched_records == after.matched_records);
    }
}

TEST_CASE("property: report JSON render -> parse -> render is byte-identical") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> kwh(0.0, 1e4);
    std::uniform_real_distribution<double> ci(0.0, 3000.0);
    std::uniform_int_distribution<int> with_note(0, 1);
    for (int i = 0; i < kCases; ++i) {
        auto r = build_report(EnergyQuantity::from_kilowatt_hours(kwh(rng)),
                              EnergyQuantity::from_kilowatt_hours(kwh(rng)),
                              CarbonIntensityValue::from_grams_per_kwh(ci(rng)));
        if (with_note(rng)) r.notes.push_back("note-" + std::to_string(i));
        const auto bytes = render_report(r, ReportFormat::Json);
        const auto reparsed = parse_report_json(bytes);
        REQUIRE(render_report(reparsed, ReportFormat::Json) == bytes);
        REQUIRE(verify_report(reparsed, 1e-9));
    }
}

TEST_CASE("property: strict parse fails exactly when lenient parsing skips rows") {
    std::mt19937_64 rng(54);
    std::uniform_int_distribution<int> rows(0, 6);
    std::uniform_int_distribution<int> corrupt(0, 5);  // ~1/6 of rows are bad
    for (int i = 0; i < kCases; ++i) {
        std::string csv = "ProcessName,TimeStamp,TotalEnergyConsumption\n";
        const int n = rows(rng);
        for (int r = 0; r < n; ++r) {
            switch (corrupt(rng)) {
                case 0: csv += "suite.exe,2024-03-01T10:00:00Z,-5\n"; break;  // negative
                case 1: csv += "suite.exe,not-a-time,5\n"; break;             // bad timestamp
                case 2: csv += "suite.exe,2024-03-01T10:00:00Z,5,extra\n"; break;
                default: csv += "suite.exe,2024-03-01T10:0" + std::to_string(r % 10) +
                                ":00Z,100\n";
            }
        }
        std::istringstream lenient_in(csv);
        const auto lenient =
            parse_energy_log_stream(lenient_in, "gen", ParseMode::Lenient);

        std::istringstream strict_in(csv);
        bool strict_failed = false;
        try {
            parse_energy_log_stream(strict_in, "gen", ParseMode::Strict);
        } catch (const FormatError&) {
            strict_failed = true;
        }
        REQUIRE(strict_failed == !lenient.skipped.empty());
        REQUIRE(lenient.log.records.size() + lenient.skipped.size() ==
                static_cast<std::size_t>(n));
    }
}

TEST_CASE("property: pass_rate stays exact in integer arithmetic") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<std::uint64_t> total(1, 1'000'000);
    for (int i = 0; i < kCases; ++i) {
        const auto t = total(rng);
        std::uniform_int_distribution<std::uint64_t> passed(0, t);
        const auto p = passed(rng);
        const auto r = pass_rate(p, t);
        REQUIRE(r.passed == p);
        REQUIRE(r.total == t);
        REQUIRE(r.value() * static_cast<double>(t) ==
                Catch::Approx(static_cast<double>(p)).epsilon(1e-12));
    }
}
