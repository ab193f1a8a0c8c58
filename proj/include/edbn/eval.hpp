#ifndef EDBN_EVAL_HPP
#define EDBN_EVAL_HPP

#include <algorithm>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "edbn/detail/text.hpp"
#include "edbn/detect.hpp"
#include "edbn/error.hpp"
#include "edbn/model.hpp"
#include "edbn/synth.hpp"

namespace edbn {

/// Lower score = more anomalous. Anomalous is the positive class.
struct LabeledScore {
    std::string trace_id;
    double score = 0.0;
    Label label = Label::normal;
};

struct PRPoint {
    double recall = 0.0;
    double precision = 0.0;
    double threshold = 0.0;  ///< traces scoring <= threshold are flagged
};

namespace detail {

inline std::pair<std::size_t, std::size_t> class_counts(std::span<const LabeledScore> s) {
    std::size_t pos = 0;
    for (const auto& x : s) pos += x.label == Label::anomalous;
    const std::size_t neg = s.size() - pos;
    if (pos == 0 || neg == 0) throw ArgumentError("evaluation needs both normal and anomalous traces");
    return {pos, neg};
}

inline std::vector<LabeledScore> sorted_ascending(std::span<const LabeledScore> s) {
    std::vector<LabeledScore> v(s.begin(), s.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
    return v;
}

}  // namespace detail

/// ROC AUC via the Mann-Whitney statistic with midranks: the probability that
/// an anomalous trace scores below a normal one, ties counting one half.
inline double auc(std::span<const LabeledScore> scores) {
    const auto [pos, neg] = detail::class_counts(scores);
    const auto v = detail::sorted_ascending(scores);
    double rank_sum = 0.0;  // of anomalous traces, 1-based midranks
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j].score == v[i].score) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (v[t].label == Label::anomalous) rank_sum += midrank;
        i = j;
    }
    const double p = static_cast<double>(pos), n = static_cast<double>(neg);
    const double anomalous_above = rank_sum - p * (p + 1.0) / 2.0;
    return (p * n - anomalous_above) / (p * n);
}

/// One point per distinct score, sweeping thresholds upward. Thresholds that
/// flag no anomalous trace yet are skipped, so precision stays in (0, 1].
inline std::vector<PRPoint> precision_recall(std::span<const LabeledScore> scores) {
    const auto [pos, neg] = detail::class_counts(scores);
    const auto v = detail::sorted_ascending(scores);
    std::vector<PRPoint> out;
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j].score == v[i].score) {
            (v[j].label == Label::anomalous ? tp : fp) += 1;
            ++j;
        }
        if (tp > 0)
            out.push_back({static_cast<double>(tp) / static_cast<double>(pos),
                           static_cast<double>(tp) / static_cast<double>(tp + fp), v[i].score});
        i = j;
    }
    return out;
}

struct EvalReport {
    double auc = 0.0;
    std::vector<PRPoint> pr_curve;
    std::size_t n_normal = 0;
    std::size_t n_anomalous = 0;
    std::vector<LabeledScore> scores;  ///< in ranking order
};

inline EvalReport evaluate_scores(std::vector<LabeledScore> scores) {
    EvalReport r;
    const auto [pos, neg] = detail::class_counts(scores);
    r.n_anomalous = pos;
    r.n_normal = neg;
    r.auc = auc(scores);
    r.pr_curve = precision_recall(scores);
    r.scores = std::move(scores);
    return r;
}

/// Scores `test` with `model` and evaluates against `labels`.
inline EvalReport evaluate_model(const EDBNModel& model, const EventLog& test, const std::map<std::string, Label>& labels) {
    std::vector<LabeledScore> scores;
    for (const auto& ts : rank_traces(model, test)) {
        auto it = labels.find(ts.trace_id);
        if (it == labels.end()) throw ArgumentError("no label for trace '" + ts.trace_id + "'");
        scores.push_back({ts.trace_id, ts.score(), it->second});
    }
    return evaluate_scores(std::move(scores));
}

/// Learns on `train`, scores the labeled test log.
inline EvalReport run_experiment(const EventLog& train, const LabeledLog& test, const LearnOptions& opts = {}) {
    if (train.traces.empty() || test.log.traces.empty()) throw ArgumentError("empty training or test log");
    const auto model = learn_edbn(train, opts);
    return evaluate_model(model, test.log, test.labels);
}

inline void write_report(std::ostream& os, const EvalReport& r) {
    os << "auc: " << detail::format_fixed(r.auc, 6) << '\n';
    os << "normal traces: " << r.n_normal << '\n';
    os << "anomalous traces: " << r.n_anomalous << '\n';
    os << "pr points: " << r.pr_curve.size() << '\n';
    os << "\nrank,trace_id,score,label\n";
    for (std::size_t i = 0; i < r.scores.size(); ++i)
        os << (i + 1) << ',' << r.scores[i].trace_id << ',' << detail::format_double(r.scores[i].score) << ','
           << to_string(r.scores[i].label) << '\n';
}

/// Delimited curve file for external plotting.
inline void write_curve(std::ostream& os, const EvalReport& r, char delim = ',') {
    os << "recall" << delim << "precision" << delim << "threshold\n";
    for (const auto& p : r.pr_curve)
        os << detail::format_double(p.recall) << delim << detail::format_double(p.precision) << delim
           << detail::format_double(p.threshold) << '\n';
}

}  // namespace edbn

#endif
