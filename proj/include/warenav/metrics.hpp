#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace warenav {

enum class Termination { StopAction, StepCap, Aborted };
std::string_view to_string(Termination t);
std::optional<Termination> termination_from_string(std::string_view s);

struct RunRecord {
    std::string scene;
    std::size_t pair_index = 0;
    int steps = 0;           // T
    double d_final = 0.0;    // d
    double d_init = 0.0;     // D
    int collisions = 0;      // C
    int forwards = 0;        // F
    int warnings = 0;        // W
    Termination terminated_by = Termination::StepCap;

    /// Throws std::logic_error unless C <= F <= T and W <= T.
    void check() const;
    bool operator==(const RunRecord&) const = default;
};

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double compute_sr(std::span<const RunRecord> runs, double delta);
double compute_dr(std::span<const RunRecord> runs);
double compute_as(std::span<const RunRecord> runs);
double compute_cr(std::span<const RunRecord> runs);
double compute_wr(std::span<const RunRecord> runs);

struct ModelRuns {
    std::string model;
    std::vector<RunRecord> runs;
    /// Cells attempted, including aborted ones; 0 means runs.size().
    std::size_t attempted = 0;
};

struct ReportRow {
    std::string model;
    double sr = 0, dr = 0, as = 0, cr = 0, wr = 0;  // ratios; AS in steps
    std::size_t n = 0;
    std::size_t attempted = 0;

    bool operator==(const ReportRow&) const = default;
};

struct BenchReport {
    std::vector<ReportRow> rows;
    double delta = 0.0;

    bool operator==(const BenchReport&) const = default;
};

/// Thrown when models do not cover the same (scene, pair) cells.
class MatrixMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One row per model, in input order. Every model must cover the same cells.
BenchReport aggregate_report(std::span<const ModelRuns> models, double delta);
/// Like aggregate_report when every attempted cell completed. Otherwise each
/// row covers that model's own completed runs, and models with none are left out.
BenchReport aggregate_completed(std::span<const ModelRuns> models, double delta);

std::string format_report_table(const BenchReport& report);
/// Header `model,sr,dr,as,cr,wr,n,delta`; ratios as percentages with 2 decimals.
std::string format_report_csv(const BenchReport& report);

}  // namespace warenav
