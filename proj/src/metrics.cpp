#include "warenav/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

namespace warenav {

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::StopAction: return "stop_action";
        case Termination::StepCap: return "step_cap";
        case Termination::Aborted: return "aborted";
    }
    return "?";
}

std::optional<Termination> termination_from_string(std::string_view s) {
    for (auto t : {Termination::StopAction, Termination::StepCap, Termination::Aborted})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

void RunRecord::check() const {
    if (steps < 0 || collisions < 0 || forwards < 0 || warnings < 0)
        throw std::logic_error(fmt::format("{}#{}: negative counter", scene, pair_index));
    if (collisions > forwards || forwards > steps)
        throw std::logic_error(fmt::format("{}#{}: expected C <= F <= T, got C={} F={} T={}", scene, pair_index,
                                           collisions, forwards, steps));
    if (warnings > steps)
        throw std::logic_error(fmt::format("{}#{}: expected W <= T, got W={} T={}", scene, pair_index, warnings, steps));
}

namespace {

void require_runs(std::span<const RunRecord> runs) {
    if (runs.empty()) throw MetricError("metric over an empty run set");
}

template <typename F>
double mean_of(std::span<const RunRecord> runs, F term) {
    require_runs(runs);
    double sum = 0.0;
    for (const auto& r : runs) sum += term(r);
    return sum / static_cast<double>(runs.size());
}

}  // namespace

double compute_sr(std::span<const RunRecord> runs, double delta) {
    return mean_of(runs, [delta](const RunRecord& r) { return r.d_final <= delta ? 1.0 : 0.0; });
}

double compute_dr(std::span<const RunRecord> runs) {
    return mean_of(runs, [](const RunRecord& r) {
        if (!(r.d_init > 0))
            throw MetricError(fmt::format("{}#{}: initial distance must be positive", r.scene, r.pair_index));
        return (r.d_init - r.d_final) / r.d_init;
    });
}

double compute_as(std::span<const RunRecord> runs) {
    return mean_of(runs, [](const RunRecord& r) { return static_cast<double>(r.steps); });
}

double compute_cr(std::span<const RunRecord> runs) {
    return mean_of(runs, [](const RunRecord& r) {
        return r.forwards == 0 ? 0.0 : static_cast<double>(r.collisions) / r.forwards;
    });
}

double compute_wr(std::span<const RunRecord> runs) {
    return mean_of(runs, [](const RunRecord& r) {
        if (r.steps <= 0) throw MetricError(fmt::format("{}#{}: run has zero steps", r.scene, r.pair_index));
        return static_cast<double>(r.warnings) / r.steps;
    });
}

BenchReport aggregate_report(std::span<const ModelRuns> models, double delta) {
    using Cell = std::pair<std::string, std::size_t>;
    auto cells_of = [](const ModelRuns& m) {
        std::set<Cell> cells;
        for (const auto& r : m.runs) cells.emplace(r.scene, r.pair_index);
        return cells;
    };
    std::set<Cell> all;
    for (const auto& m : models) {
        const auto c = cells_of(m);
        all.insert(c.begin(), c.end());
    }
    std::vector<std::string> problems;
    for (const auto& m : models) {
        const auto c = cells_of(m);
        for (const auto& cell : all)
            if (!c.contains(cell)) problems.push_back(fmt::format("{} lacks ({}, pair {})", m.model, cell.first, cell.second));
    }
    if (!problems.empty()) {
        std::string msg = "run matrix mismatch:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw MatrixMismatch(msg);
    }

    BenchReport report;
    report.delta = delta;
    for (const auto& m : models) {
        for (const auto& r : m.runs) r.check();
        ReportRow row;
        row.model = m.model;
        row.n = m.runs.size();
        row.attempted = std::max(m.attempted, m.runs.size());
        if (!m.runs.empty()) {
            row.sr = compute_sr(m.runs, delta);
            row.dr = compute_dr(m.runs);
            row.as = compute_as(m.runs);
            row.cr = compute_cr(m.runs);
            row.wr = compute_wr(m.runs);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

BenchReport aggregate_completed(std::span<const ModelRuns> models, double delta) {
    const bool complete = std::all_of(models.begin(), models.end(), [](const ModelRuns& m) {
        return m.attempted == 0 || m.attempted == m.runs.size();
    });
    if (complete) return aggregate_report(models, delta);
    BenchReport report;
    report.delta = delta;
    for (const auto& m : models) {
        if (m.runs.empty()) continue;
        const ModelRuns one[] = {m};
        report.rows.push_back(aggregate_report(one, delta).rows.front());
    }
    return report;
}

std::string format_report_table(const BenchReport& report) {
    std::size_t width = 5;
    for (const auto& r : report.rows) width = std::max(width, r.model.size());
    std::string out = fmt::format("{:<{}}  {:>7}  {:>7}  {:>6}  {:>7}  {:>7}  {:>5}\n", "model", width, "SR%", "DR%",
                                  "AS", "CR%", "WR%", "N");
    for (const auto& r : report.rows) {
        out += fmt::format("{:<{}}  {:>7.2f}  {:>7.2f}  {:>6.2f}  {:>7.2f}  {:>7.2f}  {:>5}", r.model, width,
                           r.sr * 100, r.dr * 100, r.as, r.cr * 100, r.wr * 100, r.n);
        if (r.n != r.attempted) out += fmt::format("  ({}/{} complete)", r.n, r.attempted);
        out += "\n";
    }
    out += fmt::format("delta = {} px\n", report.delta);
    return out;
}

std::string format_report_csv(const BenchReport& report) {
    std::string out = "model,sr,dr,as,cr,wr,n,delta\n";
    for (const auto& r : report.rows)
        out += fmt::format("{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{},{}\n", r.model, r.sr * 100, r.dr * 100, r.as,
                           r.cr * 100, r.wr * 100, r.n, report.delta);
    return out;
}

}  // namespace warenav
