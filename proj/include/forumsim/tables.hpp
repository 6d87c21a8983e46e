#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "forumsim/record.hpp"
#include "forumsim/stats.hpp"
#include "forumsim/sweep.hpp"

namespace forumsim {

struct TableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every emitted file opens with `# run=<id>\tseed=<seed>` so outputs are
// traceable to the run that produced them.
struct RunStamp {
    std::string run_id;
    std::uint64_t seed = 0;
};

std::string format_number(double v);

void write_histogram(std::ostream& out, const RunStamp& stamp, const Histogram& hist);
void write_curve(std::ostream& out, const RunStamp& stamp,
                 std::span<const CurvePoint> curve, const std::string& x_name,
                 const std::string& y_name);
void write_named_values(std::ostream& out, const RunStamp& stamp,
                        std::span<const std::pair<std::string, double>> rows);
void write_records(std::ostream& out, const RunStamp& stamp,
                   std::span<const ForumRecord> records);
void write_distribution(std::ostream& out, const RunStamp& stamp,
                        std::span<const double> values);  // 0.1-wide bins over [-1,1]
void write_activity_emotion(std::ostream& out, const RunStamp& stamp,
                            const ActivityEmotionBars& bars);
void write_sweep_report(std::ostream& out, const RunStamp& stamp, const SweepReport& report);
void write_sweep_curve(std::ostream& out, const RunStamp& stamp, const SweepCell& cell);

// Generic two-or-more-column numeric table, as written by the functions
// above ('#' lines skipped, first content line = header).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

// Rebuilds a histogram from a table with x/density/count (and optionally
// lo/hi) columns, e.g. to re-fit an emitted table.
Histogram histogram_from_table(const Table& table);

}  // namespace forumsim
