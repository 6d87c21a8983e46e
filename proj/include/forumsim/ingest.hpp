#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forumsim/record.hpp"

namespace forumsim {

// Parse/validation failure; the message carries the offending line number.
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadOptions {
    char delimiter = '\t';  // '\t' or ','
};

struct LoadReport {
    std::int64_t n_rows = 0;
    std::int64_t n_threads = 0;
    std::int64_t n_users = 0;
    // thread key as it appeared in the file -> row count, in sorted key order
    std::vector<std::pair<std::string, std::int64_t>> rows_per_thread;
};

// Reads a delimiter-separated post log: header row naming the columns
// (thread_id, post_index, author_id, valence; extras such as timestamps
// are ignored), then one post per row. Lines starting with '#' and blank
// lines are skipped. Rows are sorted by (thread key, post_index); thread
// and author keys are interned to dense ids in sorted/first-seen order,
// so any row order of the same file yields identical records.
std::vector<ForumRecord> load_log(std::istream& in, const LoadOptions& options,
                                  LoadReport* report = nullptr);
std::vector<ForumRecord> load_log(const std::string& path, const LoadOptions& options,
                                  LoadReport* report = nullptr);

// A maximal run of consecutive posts alternating strictly between two
// distinct authors; runs of length >= 4 qualify as quarrels.
struct QuarrelRun {
    std::int64_t start = 0;  // offset within the thread's rows
    std::int64_t length = 0;
};

struct QuarrelScan {
    std::int64_t quarrel_post_count = 0;
    std::vector<QuarrelRun> runs;
};

// rows must be one thread's records ordered by post_index. Scans left to
// right, taking maximal qualifying runs greedily; a post belongs to at
// most one run.
QuarrelScan detect_quarrels(std::span<const ForumRecord> thread_rows);

// Convenience: total quarrel-post share over a (thread_id, post_index)-
// sorted log, applying detect_quarrels per thread.
double quarrel_share(std::span<const ForumRecord> records);

}  // namespace forumsim
