#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace lexrel {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Prediction is positive iff score >= threshold (the boundary counts as
/// positive). Throws on length mismatch or empty input.
ConfusionMatrix confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold);

/// A metric with a zero denominator is undefined, which is distinct from 0
/// and serializes as null.
struct Prf {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

Prf prf(const ConfusionMatrix& cm);

/// Matthews correlation coefficient; 0 by convention when any factor of the
/// denominator is zero.
double mcc(const ConfusionMatrix& cm);

/// Rank-based (Mann-Whitney) AUC with midrank handling of ties; equals the
/// trapezoidal ROC area. Throws PreconditionError unless both classes are
/// present.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Positive-class metrics of one evaluation. Undefined metrics stay unset;
/// auc is unset when the labels are single-class.
struct EvalReport {
    std::string task;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> mcc;
    std::optional<double> auc;
    double threshold = 0.5;
    std::uint64_t n = 0;

    nlohmann::json to_json() const;
    /// Row of (task, precision, recall, f1, mcc, auc, threshold, n);
    /// undefined metrics serialize empty.
    std::string to_csv_row() const;
    static std::string csv_header();
};

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold,
                    const std::string& task);

/// Per-metric change in percentage points (treatment - baseline), matching
/// the paper's "Change" arithmetic: 0.769 -> 0.866 is +9.7. A change is
/// undefined when either side's metric is undefined.
struct DeltaReport {
    EvalReport baseline;
    EvalReport treatment;
    std::optional<double> d_precision;
    std::optional<double> d_recall;
    std::optional<double> d_f1;
    std::optional<double> d_mcc;
    std::optional<double> d_auc;

    nlohmann::json to_json() const;
    /// CSV rows (metric, baseline, treatment, change), one per metric.
    std::string to_csv() const;
};

/// Requires matching task name and threshold.
DeltaReport compare(const EvalReport& baseline, const EvalReport& treatment);

} // namespace lexrel
