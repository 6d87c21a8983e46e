#include "forumsim/tables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace forumsim {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

namespace {

void stamp_line(std::ostream& out, const RunStamp& stamp) {
    out << "# run=" << stamp.run_id << "\tseed=" << stamp.seed << "\n";
}

}  // namespace

void write_histogram(std::ostream& out, const RunStamp& stamp, const Histogram& hist) {
    stamp_line(out, stamp);
    out << "x\tdensity\tcount\tlo\thi\n";
    for (const HistogramBin& b : hist.bins)
        out << format_number(b.center) << '\t' << format_number(b.density) << '\t' << b.count
            << '\t' << format_number(b.lo) << '\t' << format_number(b.hi) << "\n";
}

void write_curve(std::ostream& out, const RunStamp& stamp, std::span<const CurvePoint> curve,
                 const std::string& x_name, const std::string& y_name) {
    stamp_line(out, stamp);
    out << x_name << '\t' << y_name << "\tcount\n";
    for (const CurvePoint& p : curve)
        out << format_number(p.x) << '\t' << format_number(p.y) << '\t' << p.count << "\n";
}

void write_named_values(std::ostream& out, const RunStamp& stamp,
                        std::span<const std::pair<std::string, double>> rows) {
    stamp_line(out, stamp);
    out << "name\tvalue\n";
    for (const auto& [name, value] : rows) out << name << '\t' << format_number(value) << "\n";
}

void write_records(std::ostream& out, const RunStamp& stamp,
                   std::span<const ForumRecord> records) {
    stamp_line(out, stamp);
    out << "thread_id\tpost_index\tauthor_id\tvalence\n";
    for (const ForumRecord& r : records)
        out << r.thread_id << '\t' << r.post_index << '\t' << r.author_id << '\t'
            << to_int(r.valence) << "\n";
}

void write_distribution(std::ostream& out, const RunStamp& stamp,
                        std::span<const double> values) {
    std::vector<std::int64_t> counts(20, 0);
    for (double v : values) {
        int idx = static_cast<int>(std::floor((v + 1.0) / 0.1));
        if (idx < 0) idx = 0;
        if (idx > 19) idx = 19;
        counts[static_cast<std::size_t>(idx)]++;
    }
    stamp_line(out, stamp);
    out << "e\tprobability\tcount\n";
    const double n = static_cast<double>(values.size());
    for (int k = 0; k < 20; ++k)
        out << format_number(-0.95 + 0.1 * k) << '\t'
            << format_number(n > 0 ? static_cast<double>(counts[static_cast<std::size_t>(k)]) / n
                                   : 0.0)
            << '\t' << counts[static_cast<std::size_t>(k)] << "\n";
}

void write_activity_emotion(std::ostream& out, const RunStamp& stamp,
                            const ActivityEmotionBars& bars) {
    stamp_line(out, stamp);
    out << "e\tmean_activity\tn_users\tmean_activity_shuffled\tn_users_shuffled\n";
    for (std::size_t k = 0; k < bars.bin_center.size(); ++k)
        out << format_number(bars.bin_center[k]) << '\t'
            << format_number(bars.mean_activity[k]) << '\t' << bars.n_users[k] << '\t'
            << format_number(bars.mean_activity_shuffled[k]) << '\t'
            << bars.n_users_shuffled[k] << "\n";
}

void write_sweep_report(std::ostream& out, const RunStamp& stamp, const SweepReport& report) {
    stamp_line(out, stamp);
    out << "cell";
    for (const auto& [name, value] : report.cells.empty()
                                         ? std::vector<std::pair<std::string, double>>{}
                                         : report.cells.front().settings)
        out << '\t' << name;
    out << "\tpos\tpos_sd\tneu\tneu_sd\tneg\tneg_sd\tposts\tposts_sd"
           "\tquarrel_fraction\tquarrel_fraction_sd\tmean_valence\tmean_valence_sd"
           "\tpeak_L\tpeak_L_sd\tpeak_e\tpeak_e_sd\tpeaks_found\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const SweepCell& c = report.cells[i];
        out << i;
        for (const auto& [name, value] : c.settings) out << '\t' << format_number(value);
        auto pair = [&](const SweepValue& v) {
            out << '\t' << format_number(v.mean) << '\t' << format_number(v.sd);
        };
        pair(c.ratio_positive);
        pair(c.ratio_neutral);
        pair(c.ratio_negative);
        pair(c.total_posts);
        pair(c.quarrel_fraction);
        pair(c.mean_valence);
        pair(c.peak_location);
        pair(c.peak_value);
        out << '\t' << c.peaks_found << "\n";
    }
}

void write_sweep_curve(std::ostream& out, const RunStamp& stamp, const SweepCell& cell) {
    stamp_line(out, stamp);
    out << "L\te_mean\te_sd\treplicates\n";
    for (const SweepCurvePoint& p : cell.curve)
        out << format_number(p.x) << '\t' << format_number(p.e.mean) << '\t'
            << format_number(p.e.sd) << '\t' << p.replicates << "\n";
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string field;
        if (!header_seen) {
            while (std::getline(ss, field, '\t')) t.columns.push_back(field);
            if (t.columns.size() < 2)
                throw TableError("table header must have at least 2 columns");
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, field, '\t')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw TableError("line " + std::to_string(line_no) +
                                 ": cannot parse number '" + field + "'");
            }
        }
        if (row.size() != t.columns.size())
            throw TableError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.columns.size()) + " fields");
        t.rows.push_back(std::move(row));
    }
    if (!header_seen) throw TableError("empty table");
    return t;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableError("cannot open '" + path + "'");
    return read_table(in);
}

Histogram histogram_from_table(const Table& table) {
    const int cx = table.column("x");
    const int cd = table.column("density");
    const int cc = table.column("count");
    const int clo = table.column("lo");
    const int chi = table.column("hi");
    if (cx < 0 || cd < 0)
        throw TableError("histogram table needs 'x' and 'density' columns");
    Histogram h;
    h.kind = Histogram::Kind::logarithmic;
    for (const auto& row : table.rows) {
        HistogramBin b;
        b.center = row[static_cast<std::size_t>(cx)];
        b.density = row[static_cast<std::size_t>(cd)];
        b.count = cc >= 0 ? static_cast<std::int64_t>(row[static_cast<std::size_t>(cc)]) : 1;
        b.lo = clo >= 0 ? row[static_cast<std::size_t>(clo)] : b.center;
        b.hi = chi >= 0 ? row[static_cast<std::size_t>(chi)] : b.center + 1.0;
        h.bins.push_back(b);
        h.total += b.count;
    }
    if (h.bins.empty()) throw TableError("histogram table has no rows");
    return h;
}

}  // namespace forumsim
