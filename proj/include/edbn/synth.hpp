#ifndef EDBN_SYNTH_HPP
#define EDBN_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edbn/error.hpp"
#include "edbn/event_log.hpp"
#include "edbn/random.hpp"

namespace edbn {

/// How one generated attribute obtains its value.
struct AttributeRule {
    enum class Kind { constant, uniform, derived, by_activity };
    enum class Scope { event, trace };

    std::string name;
    Kind kind = Kind::uniform;
    Scope scope = Scope::event;
    std::vector<std::string> values;                          ///< constant: one value; uniform: the pool
    std::string source;                                       ///< derived: source attribute
    std::map<std::string, std::string> mapping;               ///< derived: source value -> value
    std::map<std::string, std::vector<std::string>> pools;    ///< by_activity: activity -> pool
};

struct Transition {
    std::string from;
    std::string to;
    double weight = 1.0;
    std::map<std::string, std::string> when;  ///< guards on trace-scoped attributes
};

/// Activity graph plus attribute rules. The activity is always the first
/// generated attribute, named "Activity".
struct ProcessModel {
    std::string name;
    std::vector<std::string> activities;
    std::string start;
    std::string end;
    std::vector<Transition> transitions;
    std::vector<AttributeRule> attributes;
    std::size_t max_events = 200;

    std::vector<std::string> attribute_names() const {
        std::vector<std::string> out{"Activity"};
        for (const auto& a : attributes) out.push_back(a.name);
        return out;
    }

    /// Throws ArgumentError on unknown names, cyclic derivations or an end
    /// activity unreachable from the start.
    void validate() const {
        std::set<std::string> acts(activities.begin(), activities.end());
        if (acts.size() != activities.size()) throw ArgumentError("duplicate activity");
        if (!acts.count(start) || !acts.count(end)) throw ArgumentError("start/end must be listed activities");
        for (const auto& t : transitions) {
            if (!acts.count(t.from) || !acts.count(t.to))
                throw ArgumentError("transition " + t.from + " -> " + t.to + " uses an unknown activity");
            if (!(t.weight > 0)) throw ArgumentError("transition weights must be positive");
        }

        std::map<std::string, AttributeRule::Scope> known{{"Activity", AttributeRule::Scope::event}};
        for (const auto& a : attributes) {
            if (a.name.empty() || known.count(a.name)) throw ArgumentError("bad or duplicate attribute '" + a.name + "'");
            switch (a.kind) {
                case AttributeRule::Kind::constant:
                    if (a.values.size() != 1) throw ArgumentError(a.name + ": constant needs exactly one value");
                    break;
                case AttributeRule::Kind::uniform:
                    if (a.values.empty()) throw ArgumentError(a.name + ": empty pool");
                    break;
                case AttributeRule::Kind::derived:
                    if (!known.count(a.source))
                        throw ArgumentError(a.name + ": derived from '" + a.source + "', which is not defined earlier");
                    if (a.mapping.empty()) throw ArgumentError(a.name + ": empty mapping");
                    break;
                case AttributeRule::Kind::by_activity:
                    for (const auto& [act, pool] : a.pools) {
                        if (!acts.count(act)) throw ArgumentError(a.name + ": pool for unknown activity " + act);
                        if (pool.empty()) throw ArgumentError(a.name + ": empty pool for " + act);
                    }
                    for (const auto& act : activities)
                        if (!a.pools.count(act)) throw ArgumentError(a.name + ": no pool for activity " + act);
                    break;
            }
            if (a.scope == AttributeRule::Scope::trace && a.kind == AttributeRule::Kind::by_activity)
                throw ArgumentError(a.name + ": activity-conditioned attributes are event scoped");
            known.emplace(a.name, a.scope);
        }
        for (const auto& t : transitions)
            for (const auto& [attr, v] : t.when) {
                auto it = known.find(attr);
                if (it == known.end() || it->second != AttributeRule::Scope::trace)
                    throw ArgumentError("guard on '" + attr + "', which is not a trace-scoped attribute");
            }

        std::set<std::string> seen{start};
        std::vector<std::string> frontier{start};
        while (!frontier.empty()) {
            auto a = frontier.back();
            frontier.pop_back();
            for (const auto& t : transitions)
                if (t.from == a && seen.insert(t.to).second) frontier.push_back(t.to);
        }
        if (!seen.count(end)) throw ArgumentError("end activity unreachable from start");
    }
};

namespace detail {

using nlohmann::json;

inline AttributeRule parse_rule(const json& j) {
    AttributeRule r;
    r.name = j.at("name").get<std::string>();
    const auto rule = j.at("rule").get<std::string>();
    if (rule == "constant") {
        r.kind = AttributeRule::Kind::constant;
        r.values = {j.at("value").get<std::string>()};
    } else if (rule == "uniform") {
        r.kind = AttributeRule::Kind::uniform;
        r.values = j.at("values").get<std::vector<std::string>>();
    } else if (rule == "derived") {
        r.kind = AttributeRule::Kind::derived;
        r.source = j.at("from").get<std::string>();
        r.mapping = j.at("mapping").get<std::map<std::string, std::string>>();
    } else if (rule == "by_activity") {
        r.kind = AttributeRule::Kind::by_activity;
        r.pools = j.at("pools").get<std::map<std::string, std::vector<std::string>>>();
    } else {
        throw LoadError("attribute '" + r.name + "': unknown rule '" + rule + "'");
    }
    const auto scope = j.value("scope", std::string("event"));
    if (scope == "trace") {
        r.scope = AttributeRule::Scope::trace;
    } else if (scope != "event") {
        throw LoadError("attribute '" + r.name + "': unknown scope '" + scope + "'");
    }
    return r;
}

}  // namespace detail

/// Reads a process model from its JSON configuration.
inline ProcessModel parse_process_model(std::istream& in) {
    using nlohmann::json;
    ProcessModel m;
    try {
        const json j = json::parse(in);
        m.name = j.value("name", std::string("process"));
        m.activities = j.at("activities").get<std::vector<std::string>>();
        m.start = j.at("start").get<std::string>();
        m.end = j.at("end").get<std::string>();
        m.max_events = j.value("max_events", std::size_t{200});
        for (const auto& t : j.at("transitions")) {
            Transition tr;
            tr.from = t.at("from").get<std::string>();
            tr.to = t.at("to").get<std::string>();
            tr.weight = t.value("weight", 1.0);
            if (t.contains("when")) tr.when = t.at("when").get<std::map<std::string, std::string>>();
            m.transitions.push_back(std::move(tr));
        }
        for (const auto& a : j.at("attributes")) m.attributes.push_back(detail::parse_rule(a));
    } catch (const json::exception& e) {
        throw LoadError(std::string("malformed process model: ") + e.what());
    }
    try {
        m.validate();
    } catch (const ArgumentError& e) {
        throw LoadError(std::string("invalid process model: ") + e.what());
    }
    return m;
}

inline ProcessModel read_process_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_process_model(in);
}

/// Schema of generated logs.
inline AttributeSchema generated_schema(const ProcessModel& m) {
    AttributeSchema s;
    s.names = m.attribute_names();
    s.trace_id_column = "trace_id";
    s.event_id_column = "event_id";
    return s;
}

inline std::string generated_trace_id(std::size_t index) {
    std::string digits = std::to_string(index);
    return "T" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

/// One trace per index; trace i draws from derive_seed(seed, i) only.
inline EventLog generate(const ProcessModel& m, std::size_t n_traces, std::uint64_t seed) {
    if (n_traces == 0) throw ArgumentError("n_traces must be at least 1");
    m.validate();
    EventLog log;
    log.schema = generated_schema(m);
    const std::size_t n_attr = m.attributes.size();

    for (std::size_t ti = 0; ti < n_traces; ++ti) {
        SplitMix64 rng(derive_seed(seed, ti));
        Trace t;
        t.trace_id = generated_trace_id(ti);

        std::map<std::string, std::string> trace_values;
        for (const auto& a : m.attributes) {
            if (a.scope != AttributeRule::Scope::trace) continue;
            switch (a.kind) {
                case AttributeRule::Kind::constant: trace_values[a.name] = a.values[0]; break;
                case AttributeRule::Kind::uniform: trace_values[a.name] = a.values[rng.below(a.values.size())]; break;
                case AttributeRule::Kind::derived: {
                    auto src = trace_values.find(a.source);
                    if (src == trace_values.end())
                        throw ArgumentError(a.name + ": trace-scoped derivation needs a trace-scoped source");
                    auto it = a.mapping.find(src->second);
                    if (it == a.mapping.end()) throw ArgumentError(a.name + ": no mapping for '" + src->second + "'");
                    trace_values[a.name] = it->second;
                    break;
                }
                case AttributeRule::Kind::by_activity: break;
            }
        }

        std::string activity = m.start;
        for (;;) {
            if (t.events.size() >= m.max_events) throw Error("trace exceeded max_events; does the walk reach the end?");
            Event ev;
            ev.id = t.trace_id + "-" + std::to_string(t.events.size() + 1);
            ev.values.reserve(n_attr + 1);
            ev.values.push_back(activity);
            std::map<std::string, std::string> current{{"Activity", activity}};
            for (const auto& a : m.attributes) {
                std::string v;
                if (a.scope == AttributeRule::Scope::trace) {
                    v = trace_values.at(a.name);
                } else {
                    switch (a.kind) {
                        case AttributeRule::Kind::constant: v = a.values[0]; break;
                        case AttributeRule::Kind::uniform: v = a.values[rng.below(a.values.size())]; break;
                        case AttributeRule::Kind::derived: {
                            const auto& src = current.at(a.source);
                            auto it = a.mapping.find(src);
                            if (it == a.mapping.end()) throw ArgumentError(a.name + ": no mapping for '" + src + "'");
                            v = it->second;
                            break;
                        }
                        case AttributeRule::Kind::by_activity: {
                            const auto& pool = a.pools.at(activity);
                            v = pool[rng.below(pool.size())];
                            break;
                        }
                    }
                }
                current[a.name] = v;
                ev.values.push_back(std::move(v));
            }
            t.events.push_back(std::move(ev));
            if (activity == m.end) break;

            std::vector<const Transition*> options;
            std::vector<double> weights;
            for (const auto& tr : m.transitions) {
                if (tr.from != activity) continue;
                const bool ok = std::all_of(tr.when.begin(), tr.when.end(),
                                            [&](const auto& g) { return trace_values.at(g.first) == g.second; });
                if (ok) {
                    options.push_back(&tr);
                    weights.push_back(tr.weight);
                }
            }
            if (options.empty()) throw Error("generation stuck at activity '" + activity + "'");
            activity = options[rng.weighted(weights)]->to;
        }
        log.traces.push_back(std::move(t));
    }
    return log;
}

enum class Label { normal, anomalous };

inline const char* to_string(Label l) { return l == Label::normal ? "normal" : "anomalous"; }

struct LabeledLog {
    EventLog log;
    std::map<std::string, Label> labels;
    std::map<std::string, std::vector<std::string>> anomaly_details;  ///< trace id -> applied mutations
};

namespace detail {

/// Applies one mutation of the given kind; returns its description, or
/// nullopt when it cannot apply to this trace.
inline std::optional<std::string> mutate(Trace& t, int kind, SplitMix64& rng, const AttributeSchema& schema,
                                         const std::vector<std::vector<std::string>>& domains,
                                         std::size_t& fresh_counter) {
    auto& ev = t.events;
    switch (kind) {
        case 0: {  // swap two adjacent events with different descriptions
            std::vector<std::size_t> spots;
            for (std::size_t i = 0; i + 1 < ev.size(); ++i)
                if (ev[i].values != ev[i + 1].values) spots.push_back(i);
            if (spots.empty()) return std::nullopt;
            const auto i = spots[rng.below(spots.size())];
            std::swap(ev[i], ev[i + 1]);
            return "swap events " + std::to_string(i + 1) + " and " + std::to_string(i + 2);
        }
        case 1: {  // delete
            if (ev.size() < 2) return std::nullopt;
            const auto i = rng.below(ev.size());
            std::string d = "delete event " + ev[i].id;
            ev.erase(ev.begin() + static_cast<std::ptrdiff_t>(i));
            return d;
        }
        case 2: {  // duplicate at a random position
            const auto i = rng.below(ev.size());
            const auto pos = rng.below(ev.size() + 1);
            Event copy = ev[i];
            std::string id = copy.id + "~dup";
            for (std::size_t n = 2; std::any_of(ev.begin(), ev.end(), [&](const Event& e) { return e.id == id; }); ++n)
                id = copy.id + "~dup" + std::to_string(n);
            copy.id = id;
            std::string d = "duplicate event " + ev[i].id + " at position " + std::to_string(pos + 1);
            ev.insert(ev.begin() + static_cast<std::ptrdiff_t>(pos), std::move(copy));
            return d;
        }
        case 3: {  // replace with another seen value
            std::vector<std::size_t> attrs;
            for (std::size_t a = 0; a < domains.size(); ++a)
                if (domains[a].size() >= 2) attrs.push_back(a);
            if (attrs.empty()) return std::nullopt;
            const auto a = attrs[rng.below(attrs.size())];
            auto& e = ev[rng.below(ev.size())];
            std::vector<const std::string*> others;
            for (const auto& v : domains[a])
                if (v != e.values[a]) others.push_back(&v);
            const auto& nv = *others[rng.below(others.size())];
            std::string d = "replace " + schema.names[a] + " of event " + e.id + ": " + e.values[a] + " -> " + nv;
            e.values[a] = nv;
            return d;
        }
        default: {  // replace with a value never seen in the log
            const auto a = rng.below(domains.size());
            auto& e = ev[rng.below(ev.size())];
            std::string nv;
            do {
                nv = "unseen-" + std::to_string(++fresh_counter);
            } while (std::binary_search(domains[a].begin(), domains[a].end(), nv));
            std::string d = "new value for " + schema.names[a] + " of event " + e.id + ": " + e.values[a] + " -> " + nv;
            e.values[a] = nv;
            return d;
        }
    }
}

}  // namespace detail

/// Number of traces selected for mutation: ceil(fraction * n), guarded
/// against floating error just above an integer.
inline std::size_t anomaly_count(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

/// Mutates a uniformly drawn ceil(fraction * |traces|) subset with 1-3
/// mutations each (swap adjacent, delete, duplicate, replace with another
/// seen value, replace with an unseen value).
inline LabeledLog inject_anomalies(const EventLog& log, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ArgumentError("fraction must lie in [0, 1]");
    if (fraction > 0.0 && log.traces.empty()) throw ArgumentError("cannot inject anomalies into an empty log");

    LabeledLog out;
    out.log = log;
    for (const auto& t : log.traces) out.labels[t.trace_id] = Label::normal;

    const std::size_t n = log.traces.size();
    const std::size_t count = std::min(n, anomaly_count(fraction, n));
    if (count == 0) return out;

    std::vector<std::vector<std::string>> domains(log.schema.names.size());
    {
        std::vector<std::set<std::string>> sets(domains.size());
        for (const auto& t : log.traces)
            for (const auto& e : t.events)
                for (std::size_t a = 0; a < sets.size(); ++a) sets[a].insert(e.values[a]);
        for (std::size_t a = 0; a < sets.size(); ++a) domains[a].assign(sets[a].begin(), sets[a].end());
    }

    SplitMix64 pick(derive_seed(seed, 0xA11CE));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < count; ++i) std::swap(order[i], order[i + pick.below(n - i)]);
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(chosen.begin(), chosen.end());

    std::size_t fresh_counter = 0;
    for (auto ti : chosen) {
        SplitMix64 rng(derive_seed(seed, ti));
        Trace& t = out.log.traces[ti];
        const Trace original = t;
        auto& details = out.anomaly_details[t.trace_id];
        const auto mutations = 1 + rng.below(3);
        for (std::size_t m = 0; m < mutations; ++m) {
            for (;;) {
                const int kind = static_cast<int>(rng.below(5));
                if (auto d = detail::mutate(t, kind, rng, log.schema, domains, fresh_counter)) {
                    details.push_back(std::move(*d));
                    break;
                }
            }
        }
        if (t == original) {
            auto d = detail::mutate(t, 4, rng, log.schema, domains, fresh_counter);
            details.push_back(std::move(*d));
        }
        out.labels[t.trace_id] = Label::anomalous;
    }
    return out;
}

/// Labels file: trace_id,label,mutations (mutations joined with "; ").
inline void write_labels(std::ostream& os, const LabeledLog& ll, char delim = ',') {
    detail::write_record(os, {"trace_id", "label", "mutations"}, delim);
    for (const auto& t : ll.log.traces) {
        std::string muts;
        if (auto it = ll.anomaly_details.find(t.trace_id); it != ll.anomaly_details.end())
            for (const auto& d : it->second) muts += (muts.empty() ? "" : "; ") + d;
        detail::write_record(os, {t.trace_id, to_string(ll.labels.at(t.trace_id)), muts}, delim);
    }
}

/// Reads a labels file back into a trace id -> label map.
inline std::map<std::string, Label> read_labels(std::istream& in, char delim = ',') {
    std::map<std::string, Label> out;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        auto f = detail::split_record(line, delim);
        if (!f || f->size() < 2) throw ParseError("malformed labels row", line_no);
        if (header) {
            header = false;
            if ((*f)[0] == "trace_id") continue;
        }
        Label l;
        if ((*f)[1] == "normal") {
            l = Label::normal;
        } else if ((*f)[1] == "anomalous") {
            l = Label::anomalous;
        } else {
            throw ParseError("unknown label '" + (*f)[1] + "'", line_no);
        }
        if (!out.emplace((*f)[0], l).second) throw ParseError("duplicate trace id '" + (*f)[0] + "'", line_no);
    }
    if (out.empty()) throw ParseError("empty labels file", 0);
    return out;
}

}  // namespace edbn

#endif
