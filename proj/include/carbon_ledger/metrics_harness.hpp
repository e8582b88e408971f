#pragma once

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/operational.hpp"
#include "carbon_ledger/quantities.hpp"

namespace carbon_ledger {

// Exact pass ratio; kept as integers so pass_rate(a, b) * b == a holds in
// integer arithmetic.
struct PassRatio {
    std::uint64_t passed = 0;
    std::uint64_t total = 1;

    double value() const noexcept {
        return static_cast<double>(passed) / static_cast<double>(total);
    }
};

inline PassRatio pass_rate(std::uint64_t passed, std::uint64_t total) {
    if (total == 0) throw std::invalid_argument("pass_rate: total must be positive");
    if (passed > total) throw std::invalid_argument("pass_rate: passed exceeds total");
    return PassRatio{passed, total};
}

// The five operational sustainability metrics. Every field carries an
// explicit measured/not-measured state; a disabled or unavailable metric is
// absent, never zero.
struct SustainabilityMetrics {
    std::optional<PassRatio> correctness;
    std::optional<double> runtime_s;
    std::optional<std::uint64_t> peak_memory_bytes;
    std::optional<std::uint64_t> flops;  // externally supplied only
    std::optional<EnergyQuantity> energy;  // joined from an energy log
    std::vector<std::string> notes;
};

struct MetricSelection {
    bool correctness = true;
    bool runtime = true;
    bool memory = true;
    bool flops = false;
    bool energy = false;

    void validate() const {
        if (!(correctness || runtime || memory || flops || energy)) {
            throw std::invalid_argument("at least one metric must be enabled");
        }
    }
};

// Returns a copy of `m` with the energy metric set. Replacing an existing
// measurement leaves a provenance note.
inline SustainabilityMetrics attach_energy(SustainabilityMetrics m, const EnergyQuantity& e) {
    if (m.energy) {
        m.notes.push_back("energy replaced (was " + format_fixed(m.energy->joules(), 3) + " J)");
    }
    m.energy = e;
    return m;
}

// Result of one supervised run. The child (and its whole process group) has
// already been reaped when this is returned; the group id is kept for audit.
struct MeasuredRun {
    SustainabilityMetrics metrics;
    bool timed_out = false;
    std::optional<int> exit_code;
    std::optional<int> term_signal;
    Instant started_at;
    Instant ended_at;
    pid_t process_group = -1;
};

namespace detail {

// Sum of resident set sizes over all processes in the given process group.
inline std::uint64_t group_rss_bytes(pid_t pgid) {
    namespace fs = std::filesystem;
    static const long page = sysconf(_SC_PAGESIZE);
    std::uint64_t total = 0;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator("/proc", ec)) {
        const std::string name = entry.path().filename().string();
        if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;

        std::ifstream stat(entry.path() / "stat");
        if (!stat) continue;
        std::string content;
        std::getline(stat, content);
        const auto paren = content.rfind(')');
        if (paren == std::string::npos) continue;
        std::istringstream rest(content.substr(paren + 1));
        std::string state;
        long ppid = 0, pgrp = 0;
        if (!(rest >> state >> ppid >> pgrp)) continue;
        if (pgrp != pgid) continue;

        std::ifstream statm(entry.path() / "statm");
        std::uint64_t size_pages = 0, rss_pages = 0;
        if (statm >> size_pages >> rss_pages) {
            total += rss_pages * static_cast<std::uint64_t>(page);
        }
    }
    return total;
}

inline bool group_alive(pid_t pgid) {
    return ::kill(-pgid, 0) == 0 || errno == EPERM;
}

// SIGKILL the group and wait (bounded) for every member to disappear.
inline void kill_group_and_drain(pid_t pgid) {
    if (::kill(-pgid, SIGKILL) != 0 && errno == ESRCH) return;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
    while (group_alive(pgid) && std::chrono::steady_clock::now() < deadline) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
}

} // namespace detail

// Runs `command` in its own process group under `workdir` and records the
// enabled metrics. Wall time spans spawn to exit; peak memory is the larger
// of the 50 Hz group RSS samples and the kernel's post-exit accounting.
// On timeout the group is SIGKILLed and the result is flagged timed-out with
// the metrics gathered so far. No process of the measured tree survives the
// call.
inline MeasuredRun run_measured(const std::vector<std::string>& command,
                                const std::filesystem::path& workdir, double timeout_s,
                                const MetricSelection& sel = {}) {
    sel.validate();
    if (command.empty()) throw std::invalid_argument("command must be nonempty");
    if (!(timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
    std::error_code ec;
    if (!std::filesystem::is_directory(workdir, ec)) {
        throw LaunchError("working directory '" + workdir.string() + "' does not exist");
    }

    std::vector<char*> argv;
    argv.reserve(command.size() + 1);
    for (const auto& arg : command) argv.push_back(const_cast<char*>(arg.c_str()));
    argv.push_back(nullptr);

    int err_pipe[2];
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
        throw LaunchError(std::string("pipe2: ") + std::strerror(errno));
    }

    const auto wall_start = std::chrono::steady_clock::now();
    const Instant started_at = instant_now();

    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(err_pipe[0]);
        ::close(err_pipe[1]);
        throw LaunchError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (::chdir(workdir.c_str()) != 0) {
            const int e = errno;
            (void)!::write(err_pipe[1], &e, sizeof(e));
            ::_exit(127);
        }
        ::execvp(argv[0], argv.data());
        const int e = errno;
        (void)!::write(err_pipe[1], &e, sizeof(e));
        ::_exit(127);
    }

    ::setpgid(pid, pid);  // also done in the child; whoever runs first wins
    ::close(err_pipe[1]);
    int child_errno = 0;
    const ssize_t got = ::read(err_pipe[0], &child_errno, sizeof(child_errno));
    ::close(err_pipe[0]);
    if (got == static_cast<ssize_t>(sizeof(child_errno))) {
        int status = 0;
        ::waitpid(pid, &status, 0);
        throw LaunchError("cannot launch '" + command[0] + "': " + std::strerror(child_errno));
    }

    const auto deadline = wall_start + std::chrono::duration<double>(timeout_s);
    std::uint64_t sampled_peak = 0;
    bool timed_out = false;

    siginfo_t info;
    for (;;) {
        std::memset(&info, 0, sizeof(info));
        const int rc = ::waitid(P_PID, static_cast<id_t>(pid), &info,
                                WEXITED | WNOHANG | WNOWAIT);
        if (rc == 0 && info.si_pid == pid) break;  // exited, still reapable
        if (rc != 0 && errno != EINTR) break;

        if (sel.memory) {
            sampled_peak = std::max(sampled_peak, detail::group_rss_bytes(pid));
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            timed_out = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }

    struct rusage ru {};
    int status = 0;
    const pid_t reaped = ::wait4(pid, &status, 0, &ru);
    const auto wall_end = std::chrono::steady_clock::now();
    const Instant ended_at = instant_now();

    // The direct child is reaped; sweep any surviving group members.
    detail::kill_group_and_drain(pid);

    MeasuredRun run;
    run.timed_out = timed_out;
    run.started_at = started_at;
    run.ended_at = ended_at;
    run.process_group = pid;
    if (reaped == pid) {
        if (WIFEXITED(status)) run.exit_code = WEXITSTATUS(status);
        if (WIFSIGNALED(status)) run.term_signal = WTERMSIG(status);
    } else {
        run.metrics.notes.push_back("child status unavailable");
    }

    if (sel.runtime) {
        run.metrics.runtime_s =
            std::chrono::duration<double>(wall_end - wall_start).count();
    }
    if (sel.memory) {
        const auto accounted = static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;  // KiB on Linux
        run.metrics.peak_memory_bytes = std::max(sampled_peak, accounted);
    }
    if (sel.correctness) {
        const bool ok = !timed_out && run.exit_code && *run.exit_code == 0;
        run.metrics.correctness = pass_rate(ok ? 1 : 0, 1);
    }
    if (timed_out) {
        run.metrics.notes.push_back("timed out after " + format_fixed(timeout_s, 3) + " s");
    }
    return run;
}

// --- test-report overrides ------------------------------------------------

namespace detail {

inline std::optional<std::uint64_t> xml_attr_sum(const std::string& xml, const std::string& attr) {
    std::uint64_t sum = 0;
    bool found = false;
    const std::string needle = " " + attr + "=\"";  // attributes are space-separated
    std::size_t pos = 0;
    while ((pos = xml.find(needle, pos)) != std::string::npos) {
        pos += needle.size();
        const auto end = xml.find('"', pos);
        if (end == std::string::npos) break;
        try {
            sum += std::stoull(xml.substr(pos, end - pos));
            found = true;
        } catch (const std::exception&) {
            return std::nullopt;
        }
        pos = end + 1;
    }
    if (!found) return std::nullopt;
    return sum;
}

} // namespace detail

// Reads a pass/total pair from a structured test report: either a plain
// text file with two integers ("passed,total", also '/' or whitespace
// separated) or a JUnit-style XML with tests/failures/errors counts.
inline PassRatio parse_test_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open test report '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();

    const auto first = content.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw FormatError(path.string() + ": empty test report");
    }

    if (content[first] == '<') {
        // Prefer the <testsuites> aggregate when present to avoid double
        // counting its child <testsuite> elements.
        const auto agg_start = content.find("<testsuites");
        std::string scope = content;
        if (agg_start != std::string::npos) {
            const auto agg_end = content.find('>', agg_start);
            if (agg_end == std::string::npos) {
                throw FormatError(path.string() + ": malformed XML test report");
            }
            scope = content.substr(agg_start, agg_end - agg_start + 1);
        }
        const auto tests = detail::xml_attr_sum(scope, "tests");
        if (!tests) {
            throw FormatError(path.string() + ": XML test report lacks a tests count");
        }
        const auto failures = detail::xml_attr_sum(scope, "failures").value_or(0);
        const auto errors = detail::xml_attr_sum(scope, "errors").value_or(0);
        const auto skipped = detail::xml_attr_sum(scope, "skipped").value_or(0);
        if (failures + errors + skipped > *tests) {
            throw FormatError(path.string() + ": inconsistent XML test counts");
        }
        const std::uint64_t total = *tests - skipped;
        if (total == 0) throw FormatError(path.string() + ": no executed tests in report");
        return pass_rate(total - failures - errors, total);
    }

    for (char& c : content) {
        if (c == ',' || c == '/') c = ' ';
    }
    std::istringstream is(content);
    long long passed = -1, total = -1;
    if (!(is >> passed >> total) || passed < 0 || total <= 0) {
        throw FormatError(path.string() + ": expected 'passed,total' integer pair");
    }
    std::string trailing;
    if (is >> trailing) {
        throw FormatError(path.string() + ": trailing content after pass/total pair");
    }
    if (passed > total) {
        throw FormatError(path.string() + ": passed exceeds total");
    }
    return pass_rate(static_cast<std::uint64_t>(passed), static_cast<std::uint64_t>(total));
}

} // namespace carbon_ledger
