#include <doctest.h>

#include <algorithm>
#include <random>

#include "warenav/metrics.hpp"

using namespace warenav;

namespace {

RunRecord run(int t, double d, double big_d, int c, int f, int w, const std::string& scene = "s",
              std::size_t pair = 0) {
    RunRecord r;
    r.scene = scene;
    r.pair_index = pair;
    r.steps = t;
    r.d_final = d;
    r.d_init = big_d;
    r.collisions = c;
    r.forwards = f;
    r.warnings = w;
    return r;
}

// Worked by hand, δ = 20:
//   run  T   d    D    C F  W   success  progress  C/F   W/T
//   a    70  30   100  2 8  7   0        0.70      0.25  0.1
//   b    12  10   200  0 0  0   1        0.95      0     0
//   c    30  20   50   5 5  30  1        0.60      1     1
//   d    1   120  100  0 1  0   0        -0.20     0     0
std::vector<RunRecord> hand_fixture() {
    return {run(70, 30, 100, 2, 8, 7, "s", 0), run(12, 10, 200, 0, 0, 0, "s", 1), run(30, 20, 50, 5, 5, 30, "t", 0),
            run(1, 120, 100, 0, 1, 0, "t", 1)};
}

}  // namespace

TEST_CASE("metric examples") {
    const std::vector<RunRecord> two{run(10, 10, 50, 0, 0, 0), run(10, 30, 50, 0, 0, 0)};
    CHECK(compute_sr(two, 20) == 0.5);
    const std::vector<RunRecord> zero{run(5, 0, 50, 0, 0, 0), run(5, 0, 60, 0, 0, 0)};
    CHECK(compute_sr(zero, 20) == 1.0);
    const std::vector<RunRecord> edge{run(5, 20, 50, 0, 0, 0)};
    CHECK(compute_sr(edge, 20) == 1.0);

    CHECK(compute_dr(std::vector{run(5, 30, 100, 0, 0, 0)}) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(compute_dr(std::vector{run(5, 130, 100, 0, 0, 0)}) < 0);
    CHECK(compute_dr(std::vector{run(5, 100, 100, 0, 0, 0)}) == 0.0);

    CHECK(compute_as(std::vector{run(70, 1, 2, 0, 0, 0), run(30, 1, 2, 0, 0, 0)}) == 50.0);
    CHECK(compute_as(std::vector{run(70, 1, 2, 0, 0, 0), run(70, 1, 2, 0, 0, 0)}) == 70.0);
    CHECK(compute_as(std::vector{run(1, 1, 2, 0, 0, 0)}) == 1.0);

    CHECK(compute_cr(std::vector{run(10, 1, 2, 2, 8, 0)}) == 0.25);
    CHECK(compute_cr(std::vector{run(10, 1, 2, 0, 0, 0)}) == 0.0);
    CHECK(compute_cr(std::vector{run(10, 1, 2, 6, 6, 0)}) == 1.0);

    CHECK(compute_wr(std::vector{run(70, 1, 2, 0, 0, 7)}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(compute_wr(std::vector{run(70, 1, 2, 0, 0, 0)}) == 0.0);
    CHECK(compute_wr(std::vector{run(9, 1, 2, 0, 0, 9)}) == 1.0);
}

TEST_CASE("metric errors") {
    const std::vector<RunRecord> none;
    CHECK_THROWS_AS(compute_sr(none, 20), MetricError);
    CHECK_THROWS_AS(compute_dr(none), MetricError);
    CHECK_THROWS_AS(compute_as(none), MetricError);
    CHECK_THROWS_AS(compute_cr(none), MetricError);
    CHECK_THROWS_AS(compute_wr(none), MetricError);
    CHECK_THROWS_AS(compute_dr(std::vector{run(5, 0, 0, 0, 0, 0)}), MetricError);
    CHECK_THROWS_AS(compute_wr(std::vector{run(0, 0, 10, 0, 0, 0)}), MetricError);
    CHECK_THROWS_AS(run(5, 0, 10, 3, 2, 0).check(), std::logic_error);
    CHECK_THROWS_AS(run(5, 0, 10, 0, 6, 0).check(), std::logic_error);
    CHECK_THROWS_AS(run(5, 0, 10, 0, 0, 6).check(), std::logic_error);
    CHECK_NOTHROW(run(5, 0, 10, 2, 5, 5).check());
}

TEST_CASE("hand-built fixture matches hand computation") {
    const auto runs = hand_fixture();
    CHECK(std::abs(compute_sr(runs, 20) - 0.5) < 1e-9);
    CHECK(std::abs(compute_dr(runs) - 0.5125) < 1e-9);
    CHECK(std::abs(compute_as(runs) - 28.25) < 1e-9);
    CHECK(std::abs(compute_cr(runs) - 0.3125) < 1e-9);
    CHECK(std::abs(compute_wr(runs) - 0.275) < 1e-9);

    const std::vector<ModelRuns> models{{"m", runs, 0}};
    const BenchReport report = aggregate_report(models, 20);
    REQUIRE(report.rows.size() == 1);
    const ReportRow& row = report.rows[0];
    CHECK(std::abs(row.sr - 0.5) < 1e-9);
    CHECK(std::abs(row.dr - 0.5125) < 1e-9);
    CHECK(std::abs(row.as - 28.25) < 1e-9);
    CHECK(std::abs(row.cr - 0.3125) < 1e-9);
    CHECK(std::abs(row.wr - 0.275) < 1e-9);
    CHECK(row.n == 4);
    CHECK(format_report_csv(report) == "model,sr,dr,as,cr,wr,n,delta\nm,50.00,51.25,28.25,31.25,27.50,4,20\n");
}

TEST_CASE("aggregate_report rows and matrix checks") {
    const auto runs = hand_fixture();
    const std::vector<ModelRuns> same{{"a", runs, 0}, {"b", runs, 0}};
    const BenchReport report = aggregate_report(same, 20);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].model == "a");
    CHECK(report.rows[1].model == "b");
    ReportRow renamed = report.rows[1];
    renamed.model = "a";
    CHECK(renamed == report.rows[0]);

    auto missing = runs;
    missing.pop_back();
    const std::vector<ModelRuns> mismatched{{"a", runs, 0}, {"b", missing, 0}};
    try {
        aggregate_report(mismatched, 20);
        FAIL("expected MatrixMismatch");
    } catch (const MatrixMismatch& e) {
        CHECK(std::string(e.what()).find("b lacks (t, pair 1)") != std::string::npos);
    }

    const std::string table = format_report_table(report);
    CHECK(table.find("SR") < table.find("DR"));
    CHECK(table.find("AS") < table.find("CR"));
    CHECK(table.find("CR") < table.find("WR"));
    CHECK(table.find("delta = 20 px") != std::string::npos);
}

TEST_CASE("metric properties over random run sets") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> steps(1, 70);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RunRecord> runs;
        const int n = 1 + trial % 12;
        for (int i = 0; i < n; ++i) {
            const int t = steps(rng);
            const int f = static_cast<int>(unit(rng) * t);
            const int c = static_cast<int>(unit(rng) * f);
            const int w = static_cast<int>(unit(rng) * t);
            const double big_d = 20 + unit(rng) * 800;
            runs.push_back(run(t, unit(rng) * big_d, big_d, c, f, w, "s", i));
        }
        for (double v : {compute_sr(runs, 20), compute_dr(runs), compute_cr(runs), compute_wr(runs)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(compute_as(runs) <= 70.0);

        double prev = 0.0;
        for (double delta = 0; delta <= 900; delta += 37.5) {
            const double sr = compute_sr(runs, delta);
            CHECK(sr >= prev);
            prev = sr;
        }

        auto shuffled = runs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        // Summation order changes can move the last ulp.
        CHECK(compute_sr(shuffled, 20) == doctest::Approx(compute_sr(runs, 20)).epsilon(1e-12));
        CHECK(compute_dr(shuffled) == doctest::Approx(compute_dr(runs)).epsilon(1e-12));
        CHECK(compute_as(shuffled) == doctest::Approx(compute_as(runs)).epsilon(1e-12));
        CHECK(compute_cr(shuffled) == doctest::Approx(compute_cr(runs)).epsilon(1e-12));
        CHECK(compute_wr(shuffled) == doctest::Approx(compute_wr(runs)).epsilon(1e-12));
    }
}

TEST_CASE("termination strings round-trip") {
    for (auto t : {Termination::StopAction, Termination::StepCap, Termination::Aborted})
        CHECK(termination_from_string(to_string(t)) == t);
    CHECK_FALSE(termination_from_string("crashed").has_value());
}

TEST_CASE("aggregate_completed scores each model over its own completed runs") {
    const auto runs = hand_fixture();
    auto partial = runs;
    partial.pop_back();
    const std::vector<ModelRuns> models{{"full", runs, 4}, {"partial", partial, 4}, {"dead", {}, 4}};
    CHECK_THROWS_AS(aggregate_report(models, 20), MatrixMismatch);
    const BenchReport r = aggregate_completed(models, 20);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].model == "partial");
    CHECK(r.rows[1].n == 3);
    CHECK(r.rows[1].attempted == 4);
    CHECK(r.rows[1].as == doctest::Approx((70 + 12 + 30) / 3.0));
    CHECK(format_report_table(r).find("(3/4 complete)") != std::string::npos);

    const std::vector<ModelRuns> complete{{"a", runs, 4}, {"b", runs, 0}};
    CHECK(aggregate_completed(complete, 20) == aggregate_report(complete, 20));
}
