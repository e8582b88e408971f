#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <signal.h>

#include "carbon_ledger/metrics_harness.hpp"

using namespace carbon_ledger;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

} // namespace

TEST_CASE("pass_rate is an exact rational") {
    CHECK(pass_rate(25, 50).value() == 0.5);
    CHECK(pass_rate(149, 149).value() == 1.0);
    CHECK(pass_rate(0, 1).value() == 0.0);
    CHECK_THROWS_AS(pass_rate(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(pass_rate(0, 0), std::invalid_argument);
}

TEST_CASE("metric selection requires at least one metric") {
    MetricSelection none{false, false, false, false, false};
    CHECK_THROWS_AS(none.validate(), std::invalid_argument);
    CHECK_NOTHROW(MetricSelection{}.validate());
}

TEST_CASE("run_measured: sleeping command") {
    const auto run = run_measured({"sleep", "0.2"}, ".", 30.0);
    REQUIRE(run.metrics.runtime_s);
    CHECK(*run.metrics.runtime_s >= 0.2);
    CHECK(*run.metrics.runtime_s <= 5.2);
    REQUIRE(run.metrics.correctness);
    CHECK(run.metrics.correctness->passed == 1);
    CHECK(run.metrics.correctness->total == 1);
    CHECK_FALSE(run.timed_out);
    REQUIRE(run.exit_code);
    CHECK(*run.exit_code == 0);
    // Never-measured metrics stay absent, not zero.
    CHECK_FALSE(run.metrics.flops);
    CHECK_FALSE(run.metrics.energy);
}

TEST_CASE("run_measured: nonzero exit means 0/1 correctness") {
    const auto run = run_measured({"sh", "-c", "exit 3"}, ".", 10.0);
    REQUIRE(run.metrics.correctness);
    CHECK(run.metrics.correctness->passed == 0);
    CHECK(run.metrics.correctness->total == 1);
    REQUIRE(run.exit_code);
    CHECK(*run.exit_code == 3);
}

TEST_CASE("run_measured: disabled metrics are not-measured") {
    MetricSelection sel;
    sel.runtime = false;
    sel.memory = false;
    const auto run = run_measured({"true"}, ".", 10.0, sel);
    CHECK_FALSE(run.metrics.runtime_s);
    CHECK_FALSE(run.metrics.peak_memory_bytes);
    CHECK(run.metrics.correctness);
}

TEST_CASE("run_measured: spawn failure is a launch error") {
    CHECK_THROWS_AS(run_measured({"/no/such/binary-xyz"}, ".", 5.0), LaunchError);
    CHECK_THROWS_AS(run_measured({"true"}, "/no/such/workdir", 5.0), LaunchError);
    CHECK_THROWS_AS(run_measured({}, ".", 5.0), std::invalid_argument);
    CHECK_THROWS_AS(run_measured({"true"}, ".", 0.0), std::invalid_argument);
}

TEST_CASE("run_measured: timeout kills the whole process group") {
    // The child spawns a grandchild; both must be gone afterwards.
    const auto run = run_measured({"sh", "-c", "sleep 30 & sleep 30"}, ".", 0.4);
    CHECK(run.timed_out);
    REQUIRE(run.metrics.runtime_s);
    CHECK(*run.metrics.runtime_s >= 0.4);
    REQUIRE(run.metrics.correctness);
    CHECK(run.metrics.correctness->passed == 0);
    CHECK(run.process_group > 0);
    // No process of the measured tree survives the call.
    errno = 0;
    CHECK(::kill(-run.process_group, 0) == -1);
    CHECK(errno == ESRCH);
    REQUIRE_FALSE(run.metrics.notes.empty());
    CHECK(run.metrics.notes[0].find("timed out") != std::string::npos);
}

TEST_CASE("run_measured: no orphan after a normal exit either") {
    const auto run = run_measured({"true"}, ".", 10.0);
    errno = 0;
    CHECK(::kill(-run.process_group, 0) == -1);
    CHECK(errno == ESRCH);
}

TEST_CASE("run_measured: peak memory sees a 100 MB allocation") {
    const char* fixture = std::getenv("CARBON_LEDGER_ALLOC_TOUCH");
    if (fixture == nullptr) {
        WARN("CARBON_LEDGER_ALLOC_TOUCH not set (run via ctest); skipping");
        return;
    }
    const auto run = run_measured({fixture, "100"}, ".", 30.0);
    REQUIRE(run.metrics.peak_memory_bytes);
    CHECK(*run.metrics.peak_memory_bytes >= 100'000'000ull);
    REQUIRE(run.exit_code);
    CHECK(*run.exit_code == 0);
}

TEST_CASE("attach_energy sets the measured state and notes replacements") {
    SustainabilityMetrics m;
    const auto with = attach_energy(m, EnergyQuantity::from_kilojoules(0.446));
    REQUIRE(with.energy);
    CHECK(with.energy->kilojoules() == Catch::Approx(0.446).epsilon(1e-12));
    CHECK(with.notes.empty());

    const auto replaced = attach_energy(with, EnergyQuantity::from_joules(10.0));
    REQUIRE(replaced.energy);
    CHECK(replaced.energy->joules() == 10.0);
    REQUIRE(replaced.notes.size() == 1);
    CHECK(replaced.notes[0].find("replaced") != std::string::npos);

    // Measured zero is distinct from not-measured.
    const auto zero = attach_energy(m, EnergyQuantity::from_joules(0.0));
    REQUIRE(zero.energy);
    CHECK(zero.energy->joules() == 0.0);
}

TEST_CASE("test-report override: plain pass/total pair") {
    const auto p1 = write_temp("report_pair.txt", "25,50\n");
    const auto r1 = parse_test_report(p1);
    CHECK(r1.passed == 25);
    CHECK(r1.total == 50);

    const auto p2 = write_temp("report_slash.txt", "149/149");
    CHECK(parse_test_report(p2).value() == 1.0);

    const auto bad = write_temp("report_bad.txt", "51,50");
    CHECK_THROWS_AS(parse_test_report(bad), FormatError);
    const auto empty = write_temp("report_empty.txt", "  \n");
    CHECK_THROWS_AS(parse_test_report(empty), FormatError);
    const auto trailing = write_temp("report_trailing.txt", "1,2 extra");
    CHECK_THROWS_AS(parse_test_report(trailing), FormatError);
    CHECK_THROWS_AS(parse_test_report("/no/such/report.txt"), IoError);
}

TEST_CASE("test-report override: JUnit-style XML counts") {
    const auto p = write_temp("report_junit.xml",
                              "<?xml version=\"1.0\"?>\n"
                              "<testsuite name=\"backend\" tests=\"50\" failures=\"20\" "
                              "errors=\"5\" skipped=\"0\"></testsuite>\n");
    const auto r = parse_test_report(p);
    CHECK(r.passed == 25);
    CHECK(r.total == 50);

    const auto agg = write_temp("report_junit_agg.xml",
                                "<testsuites tests=\"149\" failures=\"0\">\n"
                                "  <testsuite tests=\"100\" failures=\"0\"/>\n"
                                "  <testsuite tests=\"49\" failures=\"0\"/>\n"
                                "</testsuites>\n");
    const auto ra = parse_test_report(agg);
    CHECK(ra.passed == 149);
    CHECK(ra.total == 149);

    const auto nocount = write_temp("report_junit_bad.xml", "<testsuite name=\"x\"/>");
    CHECK_THROWS_AS(parse_test_report(nocount), FormatError);
}
