#ifndef EDBN_FD_HPP
#define EDBN_FD_HPP

#include <map>
#include <string>
#include <vector>

#include "edbn/error.hpp"
#include "edbn/event_log.hpp"
#include "edbn/rational.hpp"
#include "edbn/stats.hpp"

namespace edbn {

/// Functional dependency source -> target; target is always in slice 0.
struct FDEdge {
    Variable source;
    Variable target;
    double strength = 1.0;  ///< U(target | source) on the training rows

    bool operator==(const FDEdge& o) const { return source == o.source && target == o.target; }
};

/// Mapping function of an FD plus its violation rate.
struct FDMapping {
    FDEdge edge;
    std::map<std::string, std::string> map;  ///< seen non-padding source value -> target value
    Rational violation;                      ///< violating rows / all rows

    double violation_rate() const { return violation.value(); }
};

/// All edges Y -> X with X in slice 0, Y any other variable, and
/// U(X | Y) strictly above `threshold`. Ordered by target attribute, then
/// source in canonical variable order.
inline std::vector<FDEdge> discover_fds(const KContextLog& ctx, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ArgumentError("FD threshold must lie in (0, 1]");
    if (ctx.size() == 0) throw ArgumentError("empty k-context log");
    std::vector<FDEdge> out;
    const std::size_t n = ctx.attributes().size();
    for (std::size_t a = 0; a < n; ++a) {
        const Variable target{a, 0};
        const auto target_col = ctx.column(target);
        for (auto src : ctx.variables()) {
            if (src == target) continue;
            const double u = uncertainty_coefficient(target_col, ctx.column(src));
            if (u > threshold) out.push_back({src, target, u});
        }
    }
    return out;
}

/// Majority-vote mapping (ties to the lexicographically smallest target) and
/// the row-level violation rate. Rows with a padding source are skipped.
inline FDMapping build_mapping(const KContextLog& ctx, const FDEdge& edge) {
    const auto src = ctx.column(edge.source);
    const auto tgt = ctx.column(edge.target);
    std::map<std::uint32_t, std::map<std::uint32_t, std::size_t>> co;
    for (std::size_t r = 0; r < ctx.size(); ++r)
        if (src[r] != 0) ++co[src[r]][tgt[r]];

    FDMapping m;
    m.edge = edge;
    std::size_t violations = 0;
    for (const auto& [s, targets] : co) {
        std::uint32_t best = 0;
        std::size_t best_count = 0, row_total = 0;
        for (const auto& [t, c] : targets) {
            row_total += c;
            if (c > best_count ||
                (c == best_count && ctx.decode(edge.target.attribute, t) < ctx.decode(edge.target.attribute, best))) {
                best = t;
                best_count = c;
            }
        }
        violations += row_total - best_count;
        m.map.emplace(ctx.decode(edge.source.attribute, s), ctx.decode(edge.target.attribute, best));
    }
    m.violation = make_rational(violations, ctx.size());
    return m;
}

/// FDM(y | x): 1 - violation when the mapping agrees or x was never seen as a
/// source value (padding included), violation otherwise.
inline double fdm_probability(const FDMapping& m, const std::string& x, const std::string& y) {
    auto it = m.map.find(x);
    if (it == m.map.end() || it->second == y) return 1.0 - m.violation_rate();
    return m.violation_rate();
}

}  // namespace edbn

#endif
