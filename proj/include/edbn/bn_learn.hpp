#ifndef EDBN_BN_LEARN_HPP
#define EDBN_BN_LEARN_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "edbn/error.hpp"
#include "edbn/event_log.hpp"
#include "edbn/fd.hpp"
#include "edbn/stats.hpp"

namespace edbn {

struct DirectedEdge {
    Variable from;
    Variable to;

    auto operator<=>(const DirectedEdge&) const = default;
};

struct StructureConstraints {
    std::set<DirectedEdge> blacklist;
    std::set<DirectedEdge> whitelist;
};

/// Dependency graph over k-context variables. `edges` holds every edge,
/// `functional` the subset that are FD edges; only the remaining
/// (conditional) edges define CPT parents and none may lie on a cycle.
struct DAG {
    std::vector<Variable> vertices;
    std::set<DirectedEdge> edges;
    std::set<DirectedEdge> functional;

    bool is_functional(const DirectedEdge& e) const { return functional.count(e) > 0; }

    /// Conditional parents of `child` in canonical variable order (slice k first).
    std::vector<Variable> parents(Variable child) const {
        std::vector<Variable> out;
        for (const auto& e : edges)
            if (e.to == child && !is_functional(e)) out.push_back(e.from);
        std::sort(out.begin(), out.end(), [](Variable a, Variable b) {
            return a.slice != b.slice ? a.slice > b.slice : a.attribute < b.attribute;
        });
        return out;
    }

    std::vector<DirectedEdge> conditional_edges() const {
        std::vector<DirectedEdge> out;
        for (const auto& e : edges)
            if (!is_functional(e)) out.push_back(e);
        return out;
    }

    /// Whether `to` can be reached from `from` along any edges.
    bool reaches(Variable from, Variable to) const {
        std::map<Variable, std::vector<Variable>> out;
        for (const auto& e : edges) out[e.from].push_back(e.to);
        std::set<Variable> seen{from};
        std::vector<Variable> stack{from};
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            for (auto w : out[v])
                if (seen.insert(w).second) stack.push_back(w);
        }
        return false;
    }

    /// No cycle runs through a conditional edge. Cycles made only of FD
    /// edges (mutual dependencies such as id <-> name) are allowed.
    bool is_acyclic() const {
        for (const auto& e : conditional_edges())
            if (reaches(e.to, e.from)) return false;
        return true;
    }
};

/// Blacklist: every edge into a history slice. Whitelist: the FD edges.
inline StructureConstraints make_constraints(const std::vector<Variable>& variables, const std::vector<FDEdge>& fds) {
    StructureConstraints c;
    for (auto to : variables) {
        if (to.slice == 0) continue;
        for (auto from : variables)
            if (from != to) c.blacklist.insert({from, to});
    }
    for (const auto& fd : fds) {
        DirectedEdge e{fd.source, fd.target};
        if (c.blacklist.count(e)) throw Error("internal: FD edge into a history slice");
        c.whitelist.insert(e);
    }
    return c;
}

struct StructureSearchOptions {
    double tolerance = 1e-9;  ///< minimum score gain for a move to count
};

namespace detail {

inline std::size_t distinct_codes(std::span<const std::uint32_t> col) {
    std::vector<bool> seen;
    std::size_t n = 0;
    for (auto c : col) {
        if (c >= seen.size()) seen.resize(c + 1, false);
        if (!seen[c]) {
            seen[c] = true;
            ++n;
        }
    }
    return n;
}

/// Dense id per distinct parent configuration, row by row.
inline std::vector<std::uint32_t> configuration_ids(const KContextLog& ctx, const std::vector<Variable>& parents) {
    const std::size_t n = ctx.size();
    std::vector<std::uint32_t> cfg(n, 0);
    std::uint64_t n_cfg = 1;
    for (auto p : parents) {
        const auto col = ctx.column(p);
        const std::uint64_t radix = ctx.code_count(p.attribute);
        std::vector<std::uint32_t> next(n);
        std::uint32_t assigned = 0;
        if (n_cfg * radix <= 4 * n + 4096) {
            std::vector<std::int64_t> slot(n_cfg * radix, -1);
            for (std::size_t i = 0; i < n; ++i) {
                auto& s = slot[cfg[i] * radix + col[i]];
                if (s < 0) s = assigned++;
                next[i] = static_cast<std::uint32_t>(s);
            }
        } else {
            std::unordered_map<std::uint64_t, std::uint32_t> slot;
            slot.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                auto [it, inserted] = slot.try_emplace(cfg[i] * radix + col[i], assigned);
                if (inserted) ++assigned;
                next[i] = it->second;
            }
        }
        cfg = std::move(next);
        n_cfg = assigned;
    }
    return cfg;
}

}  // namespace detail

/// Decomposable AIC family term: LL(child | parents) - (|child|-1) * prod |parent|,
/// domain sizes taken over the k-context rows.
class AicScorer {
public:
    explicit AicScorer(const KContextLog& ctx) : ctx_(ctx) {
        for (auto v : ctx.variables()) arity_[v] = detail::distinct_codes(ctx.column(v));
    }

    double family(Variable child, std::vector<Variable> parents) {
        std::sort(parents.begin(), parents.end());
        auto key = std::make_pair(child, parents);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        const double n = static_cast<double>(ctx_.size());
        double ll = 0.0;
        if (parents.empty()) {
            ll = -n * entropy(ctx_.column(child));
        } else {
            const auto cfg = detail::configuration_ids(ctx_, parents);
            ll = -n * conditional_entropy(ctx_.column(child), cfg);
        }
        double params = static_cast<double>(arity_.at(child)) - 1.0;
        for (auto p : parents) params *= static_cast<double>(arity_.at(p));
        const double score = ll - params;
        cache_.emplace(std::move(key), score);
        return score;
    }

    std::size_t arity(Variable v) const { return arity_.at(v); }

private:
    const KContextLog& ctx_;
    std::map<Variable, std::size_t> arity_;
    std::map<std::pair<Variable, std::vector<Variable>>, double> cache_;
};

/// Total AIC of the conditional part of `dag` (sum of slice-0 family terms).
inline double aic_score(const KContextLog& ctx, const DAG& dag) {
    AicScorer scorer(ctx);
    double total = 0.0;
    for (auto v : ctx.variables())
        if (v.slice == 0) total += scorer.family(v, dag.parents(v));
    return total;
}

/// Greedy first-improvement hill climbing over single-edge additions and
/// deletions, starting from the whitelist. Whitelist edges are fixed and
/// count as functional; they never enter a family score.
inline DAG learn_structure(const KContextLog& ctx, const StructureConstraints& constraints,
                           const StructureSearchOptions& opts = {}) {
    if (ctx.size() == 0) throw ArgumentError("empty k-context log");
    for (const auto& e : constraints.whitelist)
        if (constraints.blacklist.count(e)) throw ArgumentError("edge both blacklisted and whitelisted");

    DAG dag;
    dag.vertices = ctx.variables();
    dag.edges = constraints.whitelist;
    dag.functional = constraints.whitelist;

    std::vector<DirectedEdge> candidates;
    for (auto from : ctx.variables())
        for (auto to : ctx.variables()) {
            DirectedEdge e{from, to};
            if (from == to || constraints.blacklist.count(e) || constraints.whitelist.count(e)) continue;
            candidates.push_back(e);
        }
    std::sort(candidates.begin(), candidates.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        return std::tie(a.from.slice, a.from.attribute, a.to.attribute, a.to.slice) <
               std::tie(b.from.slice, b.from.attribute, b.to.attribute, b.to.slice);
    });

    AicScorer scorer(ctx);
    std::map<Variable, std::vector<Variable>> parents;
    for (auto v : ctx.variables()) parents[v] = {};

    for (;;) {
        bool moved = false;
        for (const auto& e : candidates) {
            auto& current = parents[e.to];
            const bool present = dag.edges.count(e) > 0;
            std::vector<Variable> proposal = current;
            if (present) {
                std::erase(proposal, e.from);
            } else {
                proposal.push_back(e.from);
            }
            const double gain = scorer.family(e.to, proposal) - scorer.family(e.to, current);
            if (gain <= opts.tolerance) continue;
            if (present) {
                dag.edges.erase(e);
            } else {
                if (dag.reaches(e.to, e.from)) continue;
                dag.edges.insert(e);
            }
            current = std::move(proposal);
            moved = true;
            break;
        }
        if (!moved) break;
    }
    return dag;
}

/// Empirical conditional distribution of one slice-0 attribute.
struct CPT {
    struct Row {
        std::size_t total = 0;
        std::map<std::string, std::size_t> counts;
    };

    Variable child;
    std::vector<Variable> parents;
    std::map<ValueTuple, Row> rows;  ///< keyed by parent values in `parents` order

    bool has_configuration(const ValueTuple& parent_values) const { return rows.count(parent_values) > 0; }

    /// P(x | parent_values); 0 for an unseen configuration or value.
    double probability(const std::string& x, const ValueTuple& parent_values) const {
        auto r = rows.find(parent_values);
        if (r == rows.end()) return 0.0;
        auto c = r->second.counts.find(x);
        if (c == r->second.counts.end()) return 0.0;
        return static_cast<double>(c->second) / static_cast<double>(r->second.total);
    }
};

/// One maximum-likelihood CPT per slice-0 attribute; parents are the DAG's
/// conditional parents with any FD edge removed.
inline std::vector<CPT> fit_cpts(const KContextLog& ctx, const DAG& dag, const std::vector<FDEdge>& fds = {}) {
    std::vector<CPT> out;
    for (std::size_t a = 0; a < ctx.attributes().size(); ++a) {
        CPT cpt;
        cpt.child = {a, 0};
        for (auto p : dag.parents(cpt.child)) {
            const bool is_fd = std::any_of(fds.begin(), fds.end(),
                                           [&](const FDEdge& f) { return f.source == p && f.target == cpt.child; });
            if (!is_fd) cpt.parents.push_back(p);
        }
        const auto child_col = ctx.column(cpt.child);
        std::vector<std::span<const std::uint32_t>> cols;
        for (auto p : cpt.parents) cols.push_back(ctx.column(p));

        std::map<std::vector<std::uint32_t>, std::map<std::uint32_t, std::size_t>> coded;
        std::vector<std::uint32_t> key(cols.size());
        for (std::size_t r = 0; r < ctx.size(); ++r) {
            for (std::size_t i = 0; i < cols.size(); ++i) key[i] = cols[i][r];
            ++coded[key][child_col[r]];
        }
        for (const auto& [k, counts] : coded) {
            ValueTuple pv;
            for (std::size_t i = 0; i < k.size(); ++i) pv.push_back(ctx.decode(cpt.parents[i].attribute, k[i]));
            auto& row = cpt.rows[pv];
            for (const auto& [x, c] : counts) {
                row.counts[ctx.decode(a, x)] += c;
                row.total += c;
            }
        }
        out.push_back(std::move(cpt));
    }
    return out;
}

}  // namespace edbn

#endif
