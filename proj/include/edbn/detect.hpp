#ifndef EDBN_DETECT_HPP
#define EDBN_DETECT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "edbn/error.hpp"
#include "edbn/event_log.hpp"
#include "edbn/model.hpp"

namespace edbn {

struct EventBreakdown {
    std::string event_id;
    double log_probability = 0.0;
    std::vector<Factor> factors;
};

/// Normalized trace score with its full factor decomposition.
struct TraceScore {
    std::string trace_id;
    double log_score = 0.0;  ///< mean log event probability; -inf for a zero score
    std::size_t event_count = 0;
    std::size_t zero_factors = 0;
    std::vector<std::string> attributes;  ///< names the factors refer to
    std::vector<EventBreakdown> events;

    /// n-th root of the trace probability.
    double score() const { return std::exp(log_score); }
};

/// Scores the events seen so far; n is the prefix length.
inline TraceScore score_prefix(const EDBNModel& m, std::span<const Event> events, const std::string& trace_id = {}) {
    if (events.empty()) throw ArgumentError("cannot score an empty trace");
    TraceScore ts;
    ts.trace_id = trace_id;
    ts.event_count = events.size();
    ts.attributes = m.schema.names;
    double total = 0.0;
    for (auto& row : k_context_rows(events, m.attribute_count(), m.k, trace_id)) {
        auto ep = event_probability(m, row);
        total += ep.log_probability;
        for (const auto& f : ep.factors)
            if (f.value <= 0.0) ++ts.zero_factors;
        ts.events.push_back({std::move(row.event_id), ep.log_probability, std::move(ep.factors)});
    }
    ts.log_score = total / static_cast<double>(events.size());
    return ts;
}

inline TraceScore score_trace(const EDBNModel& m, const Trace& t) { return score_prefix(m, t.events, t.trace_id); }

/// Ranking order: lower score first; among zero scores more zero factors
/// first; then trace id.
inline bool ranks_before(const TraceScore& a, const TraceScore& b) {
    if (a.log_score != b.log_score) return a.log_score < b.log_score;
    if (std::isinf(a.log_score) && a.zero_factors != b.zero_factors) return a.zero_factors > b.zero_factors;
    return a.trace_id < b.trace_id;
}

using Ranking = std::vector<TraceScore>;

/// Scores every trace (optionally on several threads) and sorts ascending.
inline Ranking rank_traces(const EDBNModel& m, const EventLog& log, unsigned threads = 0) {
    if (log.schema.names != m.schema.names) throw ArgumentError("log attributes do not match the model");
    Ranking out(log.traces.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, log.traces.size() / 64)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = score_trace(m, log.traces[i]);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < out.size(); i += threads) out[i] = score_trace(m, log.traces[i]);
            });
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

struct Explanation {
    std::string event_id;
    std::string attribute;
    FactorKind kind = FactorKind::value;
    std::string source;  ///< FD source variable, empty otherwise
    double contribution = 1.0;
};

/// The `top_n` smallest factors of a trace, ascending; equal factors keep
/// (event, attribute, factor) order.
inline std::vector<Explanation> explain(const TraceScore& ts, std::size_t top_n) {
    if (top_n == 0) throw ArgumentError("top_n must be at least 1");
    std::vector<Explanation> all;
    for (const auto& ev : ts.events)
        for (const auto& f : ev.factors)
            all.push_back({ev.event_id, ts.attributes.at(f.attribute), f.kind,
                           f.source ? variable_name(ts.attributes, *f.source) : std::string{}, f.value});
    std::stable_sort(all.begin(), all.end(),
                     [](const Explanation& a, const Explanation& b) { return a.contribution < b.contribution; });
    if (all.size() > top_n) all.resize(top_n);
    return all;
}

}  // namespace edbn

#endif
