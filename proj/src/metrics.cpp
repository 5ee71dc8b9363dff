#include "lexrel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexrel/errors.hpp"

namespace lexrel {

ConfusionMatrix confusion(std::span<const double> scores, std::span<const int> labels,
                          double threshold) {
    if (scores.size() != labels.size())
        throw PreconditionError("confusion: scores and labels differ in length");
    if (scores.empty()) throw PreconditionError("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        const bool truth = labels[i] == 1;
        if (pred && truth) ++cm.tp;
        else if (pred && !truth) ++cm.fp;
        else if (!pred && truth) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

Prf prf(const ConfusionMatrix& cm) {
    Prf out;
    if (cm.tp + cm.fp > 0)
        out.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0)
        out.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (out.precision && out.recall && *out.precision + *out.recall > 0.0)
        out.f1 = 2.0 * *out.precision * *out.recall / (*out.precision + *out.recall);
    return out;
}

double mcc(const ConfusionMatrix& cm) {
    const double tp = static_cast<double>(cm.tp);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double tn = static_cast<double>(cm.tn);
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw PreconditionError("auc: scores and labels differ in length");
    const std::size_t n = scores.size();
    std::uint64_t pos = 0;
    for (int y : labels) pos += (y == 1);
    const std::uint64_t neg = n - pos;
    if (pos == 0 || neg == 0) throw PreconditionError("auc: both classes must be present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks: tied scores share the average of their 1-based rank range.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double p = static_cast<double>(pos);
    return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> pp_change(const std::optional<double>& base,
                                const std::optional<double>& treat) {
    if (!base || !treat) return std::nullopt;
    return (*treat - *base) * 100.0;
}

} // namespace

nlohmann::json EvalReport::to_json() const {
    return {{"task", task},
            {"precision", opt_json(precision)},
            {"recall", opt_json(recall)},
            {"f1", opt_json(f1)},
            {"mcc", opt_json(mcc)},
            {"auc", opt_json(auc)},
            {"threshold", threshold},
            {"n", n}};
}

std::string EvalReport::csv_header() {
    return "task,precision,recall,f1,mcc,auc,threshold,n";
}

std::string EvalReport::to_csv_row() const {
    std::ostringstream out;
    out.precision(17);
    out << task << ',';
    auto cell = [&](const std::optional<double>& v) {
        if (v) out << *v;
        out << ',';
    };
    cell(precision);
    cell(recall);
    cell(f1);
    cell(mcc);
    cell(auc);
    out << threshold << ',' << n;
    return out.str();
}

EvalReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold,
                    const std::string& task) {
    const ConfusionMatrix cm = confusion(scores, labels, threshold);
    const Prf p = prf(cm);
    EvalReport report;
    report.task = task;
    report.precision = p.precision;
    report.recall = p.recall;
    report.f1 = p.f1;
    report.mcc = mcc(cm);
    report.threshold = threshold;
    report.n = cm.total();
    bool has_pos = false, has_neg = false;
    for (int y : labels) (y == 1 ? has_pos : has_neg) = true;
    if (has_pos && has_neg) report.auc = auc(scores, labels);
    return report;
}

nlohmann::json DeltaReport::to_json() const {
    return {{"baseline", baseline.to_json()},
            {"treatment", treatment.to_json()},
            {"change", {{"precision", opt_json(d_precision)},
                        {"recall", opt_json(d_recall)},
                        {"f1", opt_json(d_f1)},
                        {"mcc", opt_json(d_mcc)},
                        {"auc", opt_json(d_auc)}}}};
}

std::string DeltaReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "metric,baseline,treatment,change\n";
    auto row = [&](const char* name, const std::optional<double>& b,
                   const std::optional<double>& t, const std::optional<double>& d) {
        out << name << ',';
        if (b) out << *b;
        out << ',';
        if (t) out << *t;
        out << ',';
        if (d) out << *d;
        out << '\n';
    };
    row("precision", baseline.precision, treatment.precision, d_precision);
    row("recall", baseline.recall, treatment.recall, d_recall);
    row("f1", baseline.f1, treatment.f1, d_f1);
    row("mcc", baseline.mcc, treatment.mcc, d_mcc);
    row("auc", baseline.auc, treatment.auc, d_auc);
    return out.str();
}

DeltaReport compare(const EvalReport& baseline, const EvalReport& treatment) {
    if (baseline.task != treatment.task)
        throw PreconditionError("compare: reports are for different tasks ('" + baseline.task +
                                "' vs '" + treatment.task + "')");
    if (baseline.threshold != treatment.threshold)
        throw PreconditionError("compare: reports use different thresholds");
    DeltaReport d;
    d.baseline = baseline;
    d.treatment = treatment;
    d.d_precision = pp_change(baseline.precision, treatment.precision);
    d.d_recall = pp_change(baseline.recall, treatment.recall);
    d.d_f1 = pp_change(baseline.f1, treatment.f1);
    d.d_mcc = pp_change(baseline.mcc, treatment.mcc);
    d.d_auc = pp_change(baseline.auc, treatment.auc);
    return d;
}

} // namespace lexrel
