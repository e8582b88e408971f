#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_ledger/errors.hpp"

namespace carbon_ledger {

enum class Direction { Input, Output };

inline const char* to_string(Direction d) noexcept {
    return d == Direction::Input ? "input" : "output";
}

inline Direction direction_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "input") return Direction::Input;
    if (lower == "output") return Direction::Output;
    throw FormatError("unknown direction '" + std::string(s) + "' (expected input or output)");
}

// Capacity-Unit seconds kept as exact decimal fixed point (integer
// nanoseconds), so partition sums are exact integer sums rather than
// accumulated float rounding.
class CuSeconds {
public:
    CuSeconds() = default;
    static CuSeconds from_nanos(std::int64_t n) { return CuSeconds(n); }

    std::int64_t nanos() const noexcept { return nanos_; }
    double seconds() const noexcept { return static_cast<double>(nanos_) / 1e9; }
    // Truncated whole seconds, the convention of the per-file rate tables.
    std::int64_t whole_seconds() const noexcept { return nanos_ / 1'000'000'000; }

    CuSeconds& operator+=(CuSeconds o) noexcept {
        nanos_ += o.nanos_;
        return *this;
    }
    friend CuSeconds operator+(CuSeconds a, CuSeconds b) noexcept { return a += b; }
    friend bool operator==(CuSeconds a, CuSeconds b) noexcept { return a.nanos_ == b.nanos_; }

private:
    explicit CuSeconds(std::int64_t n) : nanos_(n) {}
    std::int64_t nanos_ = 0;
};

// Seconds of capacity-unit time per token, one rate per direction.
// Rates are quantized to whole nanoseconds per token at construction.
class ConsumptionRateModel {
public:
    static constexpr double kDefaultInputRate = 0.4;
    static constexpr double kDefaultOutputRate = 1.2;

    ConsumptionRateModel() : ConsumptionRateModel(kDefaultInputRate, kDefaultOutputRate) {}
    ConsumptionRateModel(double input_rate, double output_rate)
        : input_nanos_(rate_to_nanos(input_rate, "input rate")),
          output_nanos_(rate_to_nanos(output_rate, "output rate")) {}

    double input_rate() const noexcept { return static_cast<double>(input_nanos_) / 1e9; }
    double output_rate() const noexcept { return static_cast<double>(output_nanos_) / 1e9; }
    std::int64_t rate_nanos(Direction d) const noexcept {
        return d == Direction::Input ? input_nanos_ : output_nanos_;
    }

private:
    static std::int64_t rate_to_nanos(double rate, const char* what) {
        if (!(rate >= 0.0) || rate > 9e9) {
            throw std::invalid_argument(std::string(what) + " must be a non-negative rate");
        }
        return std::llround(rate * 1e9);
    }

    std::int64_t input_nanos_;
    std::int64_t output_nanos_;
};

// 1000 tokens ~ 750 words, i.e. 4/3 tokens per word, rounded half up.
// Pure integer arithmetic: round(4w/3) rounds up exactly when 4w mod 3 == 2.
inline std::uint64_t words_to_tokens(std::uint64_t words) {
    if (words > UINT64_MAX / 4) {
        throw std::overflow_error("word count too large for token estimation");
    }
    const std::uint64_t n = 4 * words;
    return n / 3 + (n % 3 == 2 ? 1 : 0);
}

// Token and word totals for one corpus (one column of the file-operations
// table).
struct CorpusStats {
    std::uint64_t file_count = 0;
    std::uint64_t total_words = 0;
    std::uint64_t total_tokens = 0;
    Direction direction = Direction::Input;
    std::string label;

    // Tokens derived from the word count via the fixed 4/3 ratio.
    static CorpusStats from_words(std::uint64_t files, std::uint64_t words, Direction d,
                                  std::string label = {}) {
        check(files, words);
        return CorpusStats{files, words, words_to_tokens(words), d, std::move(label)};
    }

    // Tokens supplied from a direct measurement, bypassing the estimator.
    static CorpusStats with_measured_tokens(std::uint64_t files, std::uint64_t words,
                                            std::uint64_t tokens, Direction d,
                                            std::string label = {}) {
        check(files, words);
        return CorpusStats{files, words, tokens, d, std::move(label)};
    }

private:
    static void check(std::uint64_t files, std::uint64_t words) {
        if (files == 0 && words != 0) {
            throw std::invalid_argument("a corpus with zero files cannot contain words");
        }
    }
};

struct TokenLedger {
    std::vector<CorpusStats> entries;

    void add(CorpusStats s) { entries.push_back(std::move(s)); }
};

inline CuSeconds consumption_seconds(std::uint64_t tokens, Direction d,
                                     const ConsumptionRateModel& m) {
    const std::int64_t rate = m.rate_nanos(d);
    if (rate == 0 || tokens == 0) return CuSeconds::from_nanos(0);
    if (tokens > static_cast<std::uint64_t>(INT64_MAX / rate)) {
        throw std::overflow_error("consumption seconds overflow");
    }
    return CuSeconds::from_nanos(static_cast<std::int64_t>(tokens) * rate);
}

struct LedgerTotals {
    std::uint64_t tokens = 0;
    CuSeconds cu_seconds;
};

inline LedgerTotals ledger_totals(const TokenLedger& ledger, const ConsumptionRateModel& m) {
    LedgerTotals t;
    for (const auto& e : ledger.entries) {
        t.tokens += e.total_tokens;
        t.cu_seconds += consumption_seconds(e.total_tokens, e.direction, m);
    }
    return t;
}

// --- corpus scanning --------------------------------------------------------

namespace detail {

// Single path segment match with '*' and '?' (never crossing '/').
inline bool segment_match(std::string_view pat, std::string_view seg) {
    std::size_t p = 0, s = 0, star = std::string_view::npos, mark = 0;
    while (s < seg.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == seg[s])) {
            ++p;
            ++s;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

inline std::vector<std::string_view> split_segments(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto slash = s.find('/', start);
        if (slash == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, slash - start));
        start = slash + 1;
    }
    return out;
}

inline bool segments_match(const std::vector<std::string_view>& pat, std::size_t pi,
                           const std::vector<std::string_view>& path, std::size_t si) {
    if (pi == pat.size()) return si == path.size();
    if (pat[pi] == "**") {
        for (std::size_t skip = si; skip <= path.size(); ++skip) {
            if (segments_match(pat, pi + 1, path, skip)) return true;
        }
        return false;
    }
    if (si == path.size()) return false;
    return segment_match(pat[pi], path[si]) && segments_match(pat, pi + 1, path, si + 1);
}

} // namespace detail

// Glob match over '/'-separated relative paths. '*' and '?' stay within one
// segment; '**' spans any number of segments.
inline bool glob_match(std::string_view pattern, std::string_view path) {
    const auto pat = detail::split_segments(pattern);
    const auto segs = detail::split_segments(path);
    return detail::segments_match(pat, 0, segs, 0);
}

struct ScanSkip {
    std::string path;
    std::string reason;
};

struct ScanResult {
    CorpusStats stats;
    std::vector<ScanSkip> skipped;
};

namespace detail {

// Words are maximal runs of non-whitespace bytes. Returns false when the
// file looks binary (NUL byte) or cannot be read.
inline bool count_words_in_file(const std::filesystem::path& p, std::uint64_t& words,
                                std::string& reason) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        reason = "unreadable";
        return false;
    }
    std::uint64_t n = 0;
    bool in_word = false;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            const unsigned char c = static_cast<unsigned char>(buf[i]);
            if (c == '\0') {
                reason = "binary content (NUL byte)";
                return false;
            }
            if (std::isspace(c)) {
                in_word = false;
            } else if (!in_word) {
                in_word = true;
                ++n;
            }
        }
        if (in.eof()) break;
    }
    words = n;
    return true;
}

} // namespace detail

// Walks `root` recursively, counts words in every regular file matching any
// of `include_globs` (empty list matches everything), and derives tokens via
// words_to_tokens. Files that are unreadable or look binary are skipped and
// reported in the result's skip list. The matched file list is sorted before
// processing, so traversal order never affects the outcome.
inline ScanResult scan_corpus(const std::filesystem::path& root,
                              const std::vector<std::string>& include_globs, Direction direction,
                              std::string label = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
        throw IoError("cannot scan '" + root.string() + "': not a readable directory");
    }

    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) {
        throw IoError("cannot scan '" + root.string() + "': " + ec.message());
    }
    for (const auto& entry : it) {
        if (!entry.is_regular_file(ec)) continue;
        const std::string rel = fs::relative(entry.path(), root, ec).generic_string();
        if (ec) continue;
        const bool matched = include_globs.empty() ||
                             std::any_of(include_globs.begin(), include_globs.end(),
                                         [&](const std::string& g) { return glob_match(g, rel); });
        if (matched) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    ScanResult result;
    std::uint64_t file_count = 0;
    std::uint64_t total_words = 0;
    for (const auto& f : files) {
        std::uint64_t words = 0;
        std::string reason;
        if (!detail::count_words_in_file(f, words, reason)) {
            result.skipped.push_back({fs::relative(f, root).generic_string(), reason});
            continue;
        }
        ++file_count;
        total_words += words;
    }
    if (label.empty()) label = root.filename().string();
    result.stats = CorpusStats::from_words(file_count, total_words, direction, std::move(label));
    return result;
}

} // namespace carbon_ledger
