#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "forumsim/ingest.hpp"
#include "oracles.hpp"

using namespace forumsim;

namespace {

std::vector<ForumRecord> load(const std::string& text, char delim = '\t') {
    std::istringstream in(text);
    LoadOptions opts;
    opts.delimiter = delim;
    return load_log(in, opts);
}

std::vector<ForumRecord> rows_from_authors(const std::vector<int>& authors) {
    std::vector<ForumRecord> rows;
    for (std::size_t i = 0; i < authors.size(); ++i)
        rows.push_back({1, static_cast<std::int32_t>(i), authors[i], Valence::neutral});
    return rows;
}

}  // namespace

TEST_CASE("well-formed 4-row file loads sorted") {
    const auto records = load(
        "thread_id\tpost_index\tauthor_id\tvalence\n"
        "t2\t1\tbob\t-1\n"
        "t1\t2\tbob\t1\n"
        "t1\t1\talice\t0\n"
        "t2\t2\talice\t-1\n");
    REQUIRE(records.size() == 4);
    // t1 sorts before t2; authors interned in sorted-row order
    CHECK(records[0].thread_id == 0);
    CHECK(records[0].post_index == 1);
    CHECK(records[0].author_id == 0);  // alice
    CHECK(records[1].author_id == 1);  // bob
    CHECK(records[2].thread_id == 1);
    CHECK(records[2].valence == Valence::negative);
}

TEST_CASE("row order does not matter: shuffled file gives identical records") {
    const std::string header = "thread_id\tpost_index\tauthor_id\tvalence\n";
    const std::string sorted_body =
        "a\t1\tu1\t1\na\t2\tu2\t-1\nb\t1\tu2\t0\nb\t2\tu3\t-1\n";
    const std::string shuffled_body =
        "b\t2\tu3\t-1\na\t2\tu2\t-1\nb\t1\tu2\t0\na\t1\tu1\t1\n";
    CHECK(load(header + sorted_body) == load(header + shuffled_body));
}

TEST_CASE("comma delimiter and ignored extra timestamp column") {
    const auto records = load(
        "thread_id,post_index,author_id,valence,timestamp\n"
        "t,0,u,1,2009-06-01T12:00:00\n"
        "t,1,v,-1,2009-06-01T12:05:00\n",
        ',');
    REQUIRE(records.size() == 2);
    CHECK(records[0].post_index == 0);
    CHECK(records[1].valence == Valence::negative);
}

TEST_CASE("valence outside {-1,0,1} is rejected with the line number") {
    const std::string text =
        "thread_id\tpost_index\tauthor_id\tvalence\n"
        "t\t1\tu\t1\n"
        "t\t2\tu\t2\n";
    CHECK_THROWS_WITH_AS(load(text), doctest::Contains("line 3"), IngestError);
}

TEST_CASE("duplicate (thread, post_index) is rejected") {
    const std::string text =
        "thread_id\tpost_index\tauthor_id\tvalence\n"
        "t\t1\tu\t1\n"
        "t\t1\tv\t0\n";
    CHECK_THROWS_WITH_AS(load(text), doctest::Contains("duplicate"), IngestError);
}

TEST_CASE("post_index gaps and bad starts are rejected") {
    CHECK_THROWS_WITH_AS(load("thread_id\tpost_index\tauthor_id\tvalence\n"
                              "t\t1\tu\t0\n"
                              "t\t3\tv\t0\n"),
                         doctest::Contains("gap"), IngestError);
    CHECK_THROWS_WITH_AS(load("thread_id\tpost_index\tauthor_id\tvalence\n"
                              "t\t2\tu\t0\n"),
                         doctest::Contains("start"), IngestError);
}

TEST_CASE("missing or wrong header is rejected") {
    CHECK_THROWS_AS(load(""), IngestError);
    CHECK_THROWS_WITH_AS(load("thread\tindex\tauthor\te\nt\t1\tu\t0\n"),
                         doctest::Contains("header"), IngestError);
    // comma file parsed as tab -> header mismatch mentioning the delimiter
    CHECK_THROWS_WITH_AS(load("thread_id,post_index,author_id,valence\nt,1,u,0\n"),
                         doctest::Contains("delimiter"), IngestError);
}

TEST_CASE("comment lines and blank lines are skipped") {
    const auto records = load(
        "# run=deadbeef\tseed=7\n"
        "\n"
        "thread_id\tpost_index\tauthor_id\tvalence\n"
        "# interior comment\n"
        "t\t1\tu\t-1\n");
    REQUIRE(records.size() == 1);
}

TEST_CASE("detect_quarrels: abab is one 4-post run") {
    const auto scan = detect_quarrels(rows_from_authors({0, 1, 0, 1}));
    REQUIRE(scan.runs.size() == 1);
    CHECK(scan.runs[0].start == 0);
    CHECK(scan.runs[0].length == 4);
    CHECK(scan.quarrel_post_count == 4);
}

TEST_CASE("detect_quarrels: aba prefix does not qualify, acacac does") {
    // authors a,b,a,c,a,c,a,c -> the only qualifying run starts at 2
    const auto scan = detect_quarrels(rows_from_authors({0, 1, 0, 2, 0, 2, 0, 2}));
    const auto oracle = testing::quarrel_oracle({0, 1, 0, 2, 0, 2, 0, 2});
    REQUIRE(scan.runs.size() == oracle.size());
    CHECK(scan.runs[0].start == oracle[0].start);
    CHECK(scan.runs[0].length == oracle[0].length);
    CHECK(scan.runs[0].start == 2);
    CHECK(scan.runs[0].length == 6);
}

TEST_CASE("detect_quarrels: short threads and single authors give zero") {
    CHECK(detect_quarrels(rows_from_authors({0, 1, 0})).quarrel_post_count == 0);
    CHECK(detect_quarrels(rows_from_authors({0, 0, 0, 0, 0})).quarrel_post_count == 0);
    CHECK(detect_quarrels(rows_from_authors({})).quarrel_post_count == 0);
}

TEST_CASE("detect_quarrels is invariant under author relabeling") {
    const std::vector<int> base = {0, 1, 0, 1, 2, 1, 2, 1, 2, 0};
    std::vector<int> relabeled;
    for (int a : base) relabeled.push_back((a * 7 + 3) % 11);
    const auto s1 = detect_quarrels(rows_from_authors(base));
    const auto s2 = detect_quarrels(rows_from_authors(relabeled));
    REQUIRE(s1.runs.size() == s2.runs.size());
    for (std::size_t i = 0; i < s1.runs.size(); ++i) {
        CHECK(s1.runs[i].start == s2.runs[i].start);
        CHECK(s1.runs[i].length == s2.runs[i].length);
    }
}

TEST_CASE("greedy scanner equals the brute-force oracle (exhaustive, length <= 9)") {
    for (int n = 1; n <= 9; ++n) {
        const int total = static_cast<int>(std::pow(3, n));
        for (int code = 0; code < total; ++code) {
            std::vector<int> authors(static_cast<std::size_t>(n));
            int c = code;
            for (int i = 0; i < n; ++i) {
                authors[static_cast<std::size_t>(i)] = c % 3;
                c /= 3;
            }
            const auto scan = detect_quarrels(rows_from_authors(authors));
            const auto oracle = testing::quarrel_oracle(authors);
            REQUIRE(scan.runs.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                REQUIRE(scan.runs[i].start == oracle[i].start);
                REQUIRE(scan.runs[i].length == oracle[i].length);
            }
        }
    }
}

TEST_CASE("quarrel_share aggregates per thread") {
    // thread 1: abab (4 of 5 posts in a run); thread 2: no run (3 posts)
    std::vector<ForumRecord> records;
    for (auto [idx, author] : std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 1}})
        records.push_back({1, idx, author, Valence::neutral});
    for (auto [idx, author] : std::vector<std::pair<int, int>>{{0, 5}, {1, 5}, {2, 6}})
        records.push_back({2, idx, author, Valence::neutral});
    CHECK(quarrel_share(records) == doctest::Approx(4.0 / 8.0));
}
