#ifndef EDBN_MODEL_HPP
#define EDBN_MODEL_HPP

#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edbn/bn_learn.hpp"
#include "edbn/error.hpp"
#include "edbn/event_log.hpp"
#include "edbn/fd.hpp"
#include "edbn/rational.hpp"

namespace edbn {

/// Learned extended DBN: structure, CPTs, FD mappings and the three rate
/// tables. Immutable once built; scoring only reads it.
struct EDBNModel {
    std::size_t k = 1;
    AttributeSchema schema;
    DAG dag;
    std::vector<FDMapping> fd_mappings;
    std::vector<CPT> cpts;                                ///< one per attribute, schema order
    std::vector<Rational> new_value;                      ///< per attribute
    std::vector<Rational> new_relation;                   ///< per attribute; 0 when parentless
    std::vector<std::set<std::string>> value_domains;     ///< training a_dom per attribute
    std::size_t training_event_count = 0;

    std::size_t attribute_count() const { return schema.names.size(); }

    /// FD mappings whose target is `attribute`, in stored order.
    std::vector<const FDMapping*> fds_into(std::size_t attribute) const {
        std::vector<const FDMapping*> out;
        for (const auto& m : fd_mappings)
            if (m.edge.target.attribute == attribute) out.push_back(&m);
        return out;
    }

    std::string variable(Variable v) const { return variable_name(schema.names, v); }
};

struct LearnOptions {
    std::size_t k = 1;
    double fd_threshold = 0.99;
};

/// Fits parameters and rates for a fixed structure: `conditional` edges
/// become CPT parents, `fds` become mappings.
inline EDBNModel fit_edbn(const EventLog& log, const KContextLog& ctx, const DAG& dag, const std::vector<FDEdge>& fds) {
    EDBNModel m;
    m.k = ctx.k();
    m.schema = log.schema;
    m.dag = dag;
    m.training_event_count = ctx.size();
    const std::uint64_t total = ctx.size();

    for (const auto& fd : fds) m.fd_mappings.push_back(build_mapping(ctx, fd));
    m.cpts = fit_cpts(ctx, dag, fds);

    for (std::size_t a = 0; a < m.attribute_count(); ++a) {
        std::set<std::string> dom;
        for (auto code : ctx.column(Variable{a, 0})) dom.insert(ctx.decode(a, code));
        m.new_value.push_back(make_rational(dom.size(), total));
        m.value_domains.push_back(std::move(dom));
        const auto& cpt = m.cpts[a];
        m.new_relation.push_back(make_rational(cpt.parents.empty() ? 0 : cpt.rows.size(), total));
    }
    return m;
}

/// Fits a model for an imposed structure, bypassing structure search.
inline EDBNModel fit_edbn(const EventLog& log, std::size_t k, const std::vector<DirectedEdge>& conditional,
                          const std::vector<FDEdge>& fds) {
    if (log.event_count() == 0) throw ArgumentError("empty log");
    const auto ctx = build_k_context(log, k);
    DAG dag;
    dag.vertices = ctx.variables();
    for (const auto& e : conditional) {
        ctx.index_of(e.from);
        ctx.index_of(e.to);
        dag.edges.insert(e);
    }
    for (const auto& f : fds) {
        dag.edges.insert({f.source, f.target});
        dag.functional.insert({f.source, f.target});
    }
    if (!dag.is_acyclic()) throw ArgumentError("imposed structure is cyclic");
    return fit_edbn(log, ctx, dag, fds);
}

/// Full learning pipeline: k-context, FD discovery, constraints, greedy AIC
/// search, CPTs and rates.
inline EDBNModel learn_edbn(const EventLog& log, const LearnOptions& opts = {}) {
    if (log.event_count() == 0) throw ArgumentError("empty log");
    const auto ctx = build_k_context(log, opts.k);
    const auto fds = discover_fds(ctx, opts.fd_threshold);
    const auto constraints = make_constraints(ctx.variables(), fds);
    const auto dag = learn_structure(ctx, constraints);
    return fit_edbn(log, ctx, dag, fds);
}

/// value_A(x): 1 - new_value(A) for a seen value, new_value(A) otherwise.
inline double value_probability(const EDBNModel& m, std::size_t attribute, const std::string& x) {
    const double nv = m.new_value.at(attribute).value();
    return m.value_domains.at(attribute).count(x) ? 1.0 - nv : nv;
}

inline double value_probability(const EDBNModel& m, const std::string& attribute, const std::string& x) {
    return value_probability(m, m.schema.index_of(attribute), x);
}

/// Relation(x | parents): new_relation(A) for an unseen parent combination,
/// (1 - new_relation(A)) * CPT(x | parents) otherwise, 1 without parents.
inline double relation_probability(const EDBNModel& m, std::size_t attribute, const std::string& x,
                                   const ValueTuple& parent_values) {
    const auto& cpt = m.cpts.at(attribute);
    if (cpt.parents.empty()) return 1.0;
    if (parent_values.size() != cpt.parents.size()) throw ArgumentError("parent tuple arity mismatch");
    const double nr = m.new_relation.at(attribute).value();
    if (!cpt.has_configuration(parent_values)) return nr;
    return (1.0 - nr) * cpt.probability(x, parent_values);
}

inline double relation_probability(const EDBNModel& m, const std::string& attribute, const std::string& x,
                                   const ValueTuple& parent_values) {
    return relation_probability(m, m.schema.index_of(attribute), x, parent_values);
}

enum class FactorKind { value, relation, functional };

inline const char* to_string(FactorKind k) {
    switch (k) {
        case FactorKind::value: return "value";
        case FactorKind::relation: return "relation";
        case FactorKind::functional: return "fd";
    }
    return "?";
}

struct Factor {
    std::size_t attribute = 0;
    FactorKind kind = FactorKind::value;
    std::optional<Variable> source;  ///< FD source variable for functional factors
    double value = 1.0;
};

struct EventProbability {
    double log_probability = 0.0;  ///< -inf for an exact zero
    std::vector<Factor> factors;

    double probability() const { return std::exp(log_probability); }
};

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

/// Product over attributes of value * relation * prod FDM, with every factor
/// listed in attribute order.
inline EventProbability event_probability(const EDBNModel& m, const KContextRow& row) {
    const std::size_t n = m.attribute_count();
    if (row.values.size() != n * (m.k + 1)) throw ArgumentError("k-context row does not match the model");
    auto at = [&](Variable v) -> const std::string& { return row.values[context_index(n, m.k, v)]; };

    EventProbability ep;
    for (std::size_t a = 0; a < n; ++a) {
        const std::string& x = at({a, 0});
        ep.factors.push_back({a, FactorKind::value, std::nullopt, value_probability(m, a, x)});

        const auto& cpt = m.cpts[a];
        if (!cpt.parents.empty()) {
            ValueTuple pv;
            pv.reserve(cpt.parents.size());
            for (auto p : cpt.parents) pv.push_back(at(p));
            ep.factors.push_back({a, FactorKind::relation, std::nullopt, relation_probability(m, a, x, pv)});
        }
        for (const auto& fd : m.fd_mappings)
            if (fd.edge.target.attribute == a)
                ep.factors.push_back({a, FactorKind::functional, fd.edge.source, fdm_probability(fd, at(fd.edge.source), x)});
    }
    for (const auto& f : ep.factors) ep.log_probability += safe_log(f.value);
    return ep;
}

/// Log of the joint probability of a trace (history from the trace itself).
inline double trace_log_probability(const EDBNModel& m, std::span<const Event> events) {
    if (events.empty()) throw ArgumentError("empty trace");
    double lp = 0.0;
    for (const auto& row : k_context_rows(events, m.attribute_count(), m.k)) lp += event_probability(m, row).log_probability;
    return lp;
}

inline double trace_probability(const EDBNModel& m, const Trace& t) { return std::exp(trace_log_probability(m, t.events)); }

// ---------------------------------------------------------------------------
// Model file: a JSON document, strict schema, rates stored as [num, den].

inline constexpr const char* kModelFormat = "edbn-model";
inline constexpr int kModelVersion = 1;

namespace detail {

using nlohmann::json;

inline json variable_json(const EDBNModel& m, Variable v) {
    return json{{"attribute", m.schema.names.at(v.attribute)}, {"slice", v.slice}};
}

inline json rational_json(const Rational& r) { return json::array({r.num, r.den}); }

class ModelReader {
public:
    explicit ModelReader(const EDBNModel& m) : m_(m) {}

    static void expect_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
        if (!j.is_object()) throw LoadError(std::string(what) + ": expected an object");
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) throw LoadError(std::string(what) + ": unknown field '" + k + "'");
        for (const char* k : keys)
            if (!j.contains(k)) throw LoadError(std::string(what) + ": missing field '" + k + "'");
    }

    Variable variable(const json& j) const {
        expect_keys(j, {"attribute", "slice"}, "variable");
        const auto attr = m_.schema.find(j.at("attribute").get<std::string>());
        const auto slice = j.at("slice").get<std::size_t>();
        if (!attr || slice > m_.k) throw LoadError("variable outside the model");
        return {*attr, slice};
    }

    static Rational rational(const json& j) {
        if (!j.is_array() || j.size() != 2) throw LoadError("rate must be [numerator, denominator]");
        Rational r{j[0].get<std::uint64_t>(), j[1].get<std::uint64_t>()};
        if (r.den == 0 || r.num > r.den) throw LoadError("rate outside [0, 1]");
        return r;
    }

private:
    const EDBNModel& m_;
};

}  // namespace detail

inline void save_model(std::ostream& os, const EDBNModel& m) {
    using nlohmann::json;
    using detail::variable_json;

    json schema{{"attributes", m.schema.names}, {"trace_id_column", m.schema.trace_id_column}};
    schema["event_order_column"] = m.schema.event_order_column ? json(*m.schema.event_order_column) : json(nullptr);
    schema["event_id_column"] = m.schema.event_id_column ? json(*m.schema.event_id_column) : json(nullptr);

    json edges = json::array();
    for (const auto& e : m.dag.conditional_edges())
        edges.push_back({{"from", variable_json(m, e.from)}, {"to", variable_json(m, e.to)}});

    json fds = json::array();
    for (const auto& f : m.fd_mappings) {
        json mapping = json::array();
        for (const auto& [x, y] : f.map) mapping.push_back({x, y});
        fds.push_back({{"source", variable_json(m, f.edge.source)},
                       {"target", variable_json(m, f.edge.target)},
                       {"strength", f.edge.strength},
                       {"violation", detail::rational_json(f.violation)},
                       {"mapping", mapping}});
    }

    json attrs = json::array();
    for (std::size_t a = 0; a < m.attribute_count(); ++a) {
        const auto& cpt = m.cpts[a];
        json parents = json::array();
        for (auto p : cpt.parents) parents.push_back(variable_json(m, p));
        json rows = json::array();
        for (const auto& [pv, row] : cpt.rows) {
            json counts = json::array();
            for (const auto& [x, c] : row.counts) counts.push_back({x, c});
            rows.push_back({{"parents", pv}, {"total", row.total}, {"counts", counts}});
        }
        attrs.push_back({{"name", m.schema.names[a]},
                         {"new_value", detail::rational_json(m.new_value[a])},
                         {"new_relation", detail::rational_json(m.new_relation[a])},
                         {"domain", m.value_domains[a]},
                         {"cpt", {{"parents", parents}, {"rows", rows}}}});
    }

    json doc{{"format", kModelFormat},
             {"version", kModelVersion},
             {"k", m.k},
             {"schema", schema},
             {"training_event_count", m.training_event_count},
             {"edges", edges},
             {"functional_dependencies", fds},
             {"attributes", attrs}};
    os << doc.dump(1) << '\n';
}

inline EDBNModel load_model(std::istream& is) {
    using nlohmann::json;
    using detail::ModelReader;
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& e) {
        throw LoadError(std::string("corrupt model file: ") + e.what());
    }

    try {
        ModelReader::expect_keys(doc, {"format", "version", "k", "schema", "training_event_count", "edges",
                                       "functional_dependencies", "attributes"},
                                 "model");
        if (doc.at("format") != kModelFormat) throw LoadError("not an eDBN model file");
        if (doc.at("version") != kModelVersion)
            throw LoadError("unsupported model version " + doc.at("version").dump());

        EDBNModel m;
        m.k = doc.at("k").get<std::size_t>();
        if (m.k == 0) throw LoadError("k must be at least 1");
        const auto& s = doc.at("schema");
        ModelReader::expect_keys(s, {"attributes", "trace_id_column", "event_order_column", "event_id_column"}, "schema");
        m.schema.names = s.at("attributes").get<std::vector<std::string>>();
        m.schema.trace_id_column = s.at("trace_id_column").get<std::string>();
        if (!s.at("event_order_column").is_null()) m.schema.event_order_column = s.at("event_order_column").get<std::string>();
        if (!s.at("event_id_column").is_null()) m.schema.event_id_column = s.at("event_id_column").get<std::string>();
        try {
            m.schema.validate();
        } catch (const ArgumentError& e) {
            throw LoadError(std::string("invalid schema: ") + e.what());
        }
        m.training_event_count = doc.at("training_event_count").get<std::size_t>();
        if (m.training_event_count == 0) throw LoadError("training_event_count must be positive");

        ModelReader rd(m);
        m.dag.vertices = context_variables(m.attribute_count(), m.k);

        for (const auto& e : doc.at("edges")) {
            ModelReader::expect_keys(e, {"from", "to"}, "edge");
            m.dag.edges.insert({rd.variable(e.at("from")), rd.variable(e.at("to"))});
        }
        for (const auto& f : doc.at("functional_dependencies")) {
            ModelReader::expect_keys(f, {"source", "target", "strength", "violation", "mapping"}, "functional dependency");
            FDMapping fm;
            fm.edge = {rd.variable(f.at("source")), rd.variable(f.at("target")), f.at("strength").get<double>()};
            if (fm.edge.target.slice != 0) throw LoadError("FD target outside slice 0");
            fm.violation = ModelReader::rational(f.at("violation"));
            for (const auto& pair : f.at("mapping")) {
                if (!pair.is_array() || pair.size() != 2) throw LoadError("FD mapping entries must be pairs");
                if (!fm.map.emplace(pair[0].get<std::string>(), pair[1].get<std::string>()).second)
                    throw LoadError("FD mapping has a repeated source value");
            }
            DirectedEdge de{fm.edge.source, fm.edge.target};
            m.dag.edges.insert(de);
            m.dag.functional.insert(de);
            m.fd_mappings.push_back(std::move(fm));
        }

        const auto& attrs = doc.at("attributes");
        if (!attrs.is_array() || attrs.size() != m.attribute_count())
            throw LoadError("expected one entry per attribute");
        for (std::size_t a = 0; a < m.attribute_count(); ++a) {
            const auto& j = attrs[a];
            ModelReader::expect_keys(j, {"name", "new_value", "new_relation", "domain", "cpt"}, "attribute");
            if (j.at("name") != m.schema.names[a]) throw LoadError("attribute entries out of schema order");
            m.new_value.push_back(ModelReader::rational(j.at("new_value")));
            m.new_relation.push_back(ModelReader::rational(j.at("new_relation")));
            const auto dom = j.at("domain").get<std::vector<std::string>>();
            m.value_domains.emplace_back(dom.begin(), dom.end());

            const auto& c = j.at("cpt");
            ModelReader::expect_keys(c, {"parents", "rows"}, "cpt");
            CPT cpt;
            cpt.child = {a, 0};
            for (const auto& p : c.at("parents")) cpt.parents.push_back(rd.variable(p));
            if (cpt.parents != m.dag.parents(cpt.child)) throw LoadError("CPT parents disagree with the graph");
            for (const auto& r : c.at("rows")) {
                ModelReader::expect_keys(r, {"parents", "total", "counts"}, "cpt row");
                auto pv = r.at("parents").get<ValueTuple>();
                if (pv.size() != cpt.parents.size()) throw LoadError("CPT row arity mismatch");
                CPT::Row row;
                row.total = r.at("total").get<std::size_t>();
                std::size_t sum = 0;
                for (const auto& xc : r.at("counts")) {
                    if (!xc.is_array() || xc.size() != 2) throw LoadError("CPT counts must be pairs");
                    const auto cnt = xc[1].get<std::size_t>();
                    row.counts[xc[0].get<std::string>()] = cnt;
                    sum += cnt;
                }
                if (sum != row.total || row.total == 0) throw LoadError("CPT row counts do not sum to total");
                cpt.rows.emplace(std::move(pv), std::move(row));
            }
            if (cpt.rows.empty()) throw LoadError("CPT without rows");
            m.cpts.push_back(std::move(cpt));
        }
        if (!m.dag.is_acyclic()) throw LoadError("conditional edges form a cycle");
        return m;
    } catch (const json::exception& e) {
        throw LoadError(std::string("malformed model file: ") + e.what());
    }
}

}  // namespace edbn

#endif
