#include "forumsim/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace forumsim {

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

[[noreturn]] void fail(std::int64_t line, const std::string& what) {
    throw IngestError("line " + std::to_string(line) + ": " + what);
}

struct RawRow {
    std::string thread_key;
    std::int32_t post_index;
    std::string author_key;
    Valence valence;
    std::int64_t line;
};

}  // namespace

std::vector<ForumRecord> load_log(std::istream& in, const LoadOptions& options,
                                  LoadReport* report) {
    std::vector<RawRow> rows;
    std::string line;
    std::int64_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        auto fields = split(v, options.delimiter);
        for (auto& f : fields) f = trim(f);
        if (!header_seen) {
            static constexpr std::string_view expected[4] = {"thread_id", "post_index",
                                                             "author_id", "valence"};
            if (fields.size() < 4)
                fail(line_no, "header must name at least 4 columns (wrong delimiter?)");
            for (int i = 0; i < 4; ++i)
                if (!iequals(fields[static_cast<std::size_t>(i)], expected[i]))
                    fail(line_no, "expected header column '" + std::string(expected[i]) +
                                      "', got '" + std::string(fields[static_cast<std::size_t>(i)]) +
                                      "' (wrong delimiter?)");
            header_seen = true;
            continue;
        }
        if (fields.size() < 4) fail(line_no, "row has fewer than 4 columns");
        RawRow row;
        row.thread_key = std::string(fields[0]);
        row.author_key = std::string(fields[2]);
        row.line = line_no;
        {
            const auto f = fields[1];
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), row.post_index);
            if (ec != std::errc() || p != f.data() + f.size() || row.post_index < 0)
                fail(line_no, "post_index must be a non-negative integer, got '" +
                                  std::string(f) + "'");
        }
        {
            const auto f = fields[3];
            long long e = 0;
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), e);
            if (ec != std::errc() || p != f.data() + f.size() || e < -1 || e > 1)
                fail(line_no, "valence must be -1, 0 or 1, got '" + std::string(f) + "'");
            row.valence = valence_from_int(e);
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw IngestError("empty log: no header row found");

    std::stable_sort(rows.begin(), rows.end(), [](const RawRow& a, const RawRow& b) {
        return std::tie(a.thread_key, a.post_index) < std::tie(b.thread_key, b.post_index);
    });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].thread_key == rows[i - 1].thread_key &&
            rows[i].post_index == rows[i - 1].post_index)
            fail(rows[i].line, "duplicate (thread_id, post_index) key: (" +
                                   rows[i].thread_key + ", " +
                                   std::to_string(rows[i].post_index) + ")");

    // post_index must run contiguously from 0, or from 1 when the source
    // row is absent.
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].thread_key == rows[i].thread_key) ++j;
        const std::int32_t start = rows[i].post_index;
        if (start > 1)
            fail(rows[i].line, "thread '" + rows[i].thread_key +
                                   "' must start at post_index 0 or 1, got " +
                                   std::to_string(start));
        for (std::size_t k = i; k < j; ++k)
            if (rows[k].post_index != start + static_cast<std::int32_t>(k - i))
                fail(rows[k].line, "thread '" + rows[k].thread_key +
                                       "' has a gap: expected post_index " +
                                       std::to_string(start + static_cast<std::int32_t>(k - i)) +
                                       ", got " + std::to_string(rows[k].post_index));
        i = j;
    }

    std::unordered_map<std::string, std::int64_t> author_ids;
    std::vector<ForumRecord> records;
    records.reserve(rows.size());
    std::int64_t thread_id = -1;
    const std::string* prev_key = nullptr;
    if (report) *report = LoadReport{};
    for (const RawRow& row : rows) {
        if (prev_key == nullptr || row.thread_key != *prev_key) {
            ++thread_id;
            prev_key = &row.thread_key;
            if (report) report->rows_per_thread.emplace_back(row.thread_key, 0);
        }
        const auto [it, inserted] =
            author_ids.try_emplace(row.author_key, static_cast<std::int64_t>(author_ids.size()));
        records.push_back({thread_id, row.post_index, it->second, row.valence});
        if (report) report->rows_per_thread.back().second++;
    }
    if (report) {
        report->n_rows = static_cast<std::int64_t>(records.size());
        report->n_threads = thread_id + 1;
        report->n_users = static_cast<std::int64_t>(author_ids.size());
    }
    return records;
}

std::vector<ForumRecord> load_log(const std::string& path, const LoadOptions& options,
                                  LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path + "'");
    return load_log(in, options, report);
}

QuarrelScan detect_quarrels(std::span<const ForumRecord> thread_rows) {
    QuarrelScan scan;
    const std::int64_t n = static_cast<std::int64_t>(thread_rows.size());
    std::int64_t i = 0;
    while (i + 1 < n) {
        const std::int64_t a = thread_rows[static_cast<std::size_t>(i)].author_id;
        const std::int64_t b = thread_rows[static_cast<std::size_t>(i + 1)].author_id;
        if (a == b) {
            ++i;
            continue;
        }
        std::int64_t len = 2;
        while (i + len < n &&
               thread_rows[static_cast<std::size_t>(i + len)].author_id ==
                   (len % 2 == 0 ? a : b))
            ++len;
        if (len >= 4) {
            scan.runs.push_back({i, len});
            scan.quarrel_post_count += len;
            i += len;
        } else {
            ++i;
        }
    }
    return scan;
}

double quarrel_share(std::span<const ForumRecord> records) {
    if (records.empty()) return 0.0;
    std::int64_t quarrel_posts = 0;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].thread_id == records[i].thread_id) ++j;
        quarrel_posts += detect_quarrels(records.subspan(i, j - i)).quarrel_post_count;
        i = j;
    }
    return static_cast<double>(quarrel_posts) / static_cast<double>(records.size());
}

}  // namespace forumsim
