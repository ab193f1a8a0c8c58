#ifndef EDBN_EVENT_LOG_HPP
#define EDBN_EVENT_LOG_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "edbn/detail/text.hpp"
#include "edbn/error.hpp"

namespace edbn {

/// Padding value for history slots that precede the start of a trace.
/// Reserved: logs containing it are rejected at ingestion.
inline constexpr std::string_view kNoneToken = "__NONE__";

/// Which input columns are modeled, and which carry trace id / order / event id.
struct AttributeSchema {
    std::vector<std::string> names;
    std::string trace_id_column;
    std::optional<std::string> event_order_column;
    std::optional<std::string> event_id_column;

    void validate() const {
        if (names.empty()) throw ArgumentError("schema has no attributes");
        if (trace_id_column.empty()) throw ArgumentError("schema has no trace id column");
        std::set<std::string_view> seen;
        for (const auto& n : names) {
            if (n.empty()) throw ArgumentError("attribute names must be non-empty");
            if (!seen.insert(n).second) throw ArgumentError("duplicate attribute name '" + n + "'");
            if (n == trace_id_column) throw ArgumentError("trace id column '" + n + "' cannot be a modeled attribute");
        }
    }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) return std::nullopt;
        return static_cast<std::size_t>(it - names.begin());
    }

    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw ArgumentError("unknown attribute '" + std::string(name) + "'");
    }

    bool operator==(const AttributeSchema&) const = default;
};

struct Event {
    std::string id;
    std::vector<std::string> values;  ///< one per schema attribute

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string trace_id;
    std::vector<Event> events;

    bool operator==(const Trace&) const = default;
};

struct EventLog {
    AttributeSchema schema;
    std::vector<Trace> traces;

    std::size_t event_count() const {
        std::size_t n = 0;
        for (const auto& t : traces) n += t.events.size();
        return n;
    }

    /// Checks the structural invariants; throws ArgumentError.
    void validate() const {
        schema.validate();
        std::set<std::string_view> trace_ids;
        for (const auto& t : traces) {
            if (t.events.empty()) throw ArgumentError("trace '" + t.trace_id + "' has no events");
            if (!trace_ids.insert(t.trace_id).second) throw ArgumentError("duplicate trace id '" + t.trace_id + "'");
            std::set<std::string_view> ids;
            for (const auto& e : t.events) {
                if (e.values.size() != schema.names.size())
                    throw ArgumentError("event '" + e.id + "' does not match the schema");
                if (!ids.insert(e.id).second)
                    throw ArgumentError("duplicate event id '" + e.id + "' in trace '" + t.trace_id + "'");
                for (const auto& v : e.values)
                    if (v == kNoneToken) throw ArgumentError("reserved value " + std::string(kNoneToken) + " in log");
            }
        }
    }

    bool operator==(const EventLog&) const = default;
};

struct ParseOptions {
    char delimiter = ',';
    bool header = true;
    /// Column names for headerless input. Defaults to "1", "2", ... when empty.
    std::vector<std::string> column_names;
};

namespace detail {

inline bool all_numeric(const std::vector<std::string>& keys) {
    return std::all_of(keys.begin(), keys.end(), [](const std::string& s) { return parse_double(s).has_value(); });
}

}  // namespace detail

/// Reads delimited text into traces. Rows are grouped by trace id (first-seen
/// order of ids); within a trace, events follow the order column when the
/// schema names one, file order otherwise. Events without an id column get
/// "<trace>#<position>" identifiers.
inline EventLog parse_log(std::istream& in, const AttributeSchema& schema, const ParseOptions& opts = {}) {
    schema.validate();

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> columns = opts.column_names;

    auto next_nonblank = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++line_no;
            if (!out.empty() && out.back() == '\r') out.pop_back();
            if (!detail::trim(out).empty()) return true;
        }
        return false;
    };

    if (opts.header) {
        if (!next_nonblank(line)) throw ParseError("empty log", 0);
        auto fields = detail::split_record(line, opts.delimiter);
        if (!fields) throw ParseError("unterminated quote in header", line_no);
        columns = std::move(*fields);
    }

    struct Pending {
        std::vector<std::string> keys;
        std::vector<Event> events;
    };
    std::vector<std::string> trace_order;
    std::unordered_map<std::string, Pending> pending;

    std::vector<std::size_t> attr_cols;
    std::size_t trace_col = 0;
    std::optional<std::size_t> order_col, id_col;
    bool resolved = false;

    auto resolve = [&](std::size_t width) {
        if (columns.empty())
            for (std::size_t i = 0; i < width; ++i) columns.push_back(std::to_string(i + 1));
        auto col = [&](const std::string& name) -> std::size_t {
            auto it = std::find(columns.begin(), columns.end(), name);
            if (it == columns.end()) throw ParseError("missing column '" + name + "'", opts.header ? 1 : 0);
            return static_cast<std::size_t>(it - columns.begin());
        };
        for (const auto& n : schema.names) attr_cols.push_back(col(n));
        trace_col = col(schema.trace_id_column);
        if (schema.event_order_column) order_col = col(*schema.event_order_column);
        if (schema.event_id_column) id_col = col(*schema.event_id_column);
        resolved = true;
    };

    while (next_nonblank(line)) {
        auto fields = detail::split_record(line, opts.delimiter);
        if (!fields) throw ParseError("unterminated quote", line_no);
        if (!resolved) resolve(fields->size());
        if (fields->size() != columns.size())
            throw ParseError("expected " + std::to_string(columns.size()) + " fields, got " +
                                 std::to_string(fields->size()),
                             line_no);
        const std::string& tid = (*fields)[trace_col];
        if (tid.empty()) throw ParseError("missing trace id", line_no);

        Event ev;
        ev.values.reserve(attr_cols.size());
        for (auto c : attr_cols) {
            if ((*fields)[c] == kNoneToken)
                throw ParseError("reserved value " + std::string(kNoneToken) + " in column '" + columns[c] + "'",
                                 line_no);
            ev.values.push_back((*fields)[c]);
        }
        if (id_col) {
            ev.id = (*fields)[*id_col];
            if (ev.id.empty()) throw ParseError("missing event id", line_no);
        }

        auto [it, inserted] = pending.try_emplace(tid);
        if (inserted) trace_order.push_back(tid);
        it->second.keys.push_back(order_col ? (*fields)[*order_col] : std::string{});
        it->second.events.push_back(std::move(ev));
    }

    if (trace_order.empty()) throw ParseError("empty log", 0);

    EventLog log;
    log.schema = schema;
    log.traces.reserve(trace_order.size());
    for (const auto& tid : trace_order) {
        auto& p = pending.at(tid);
        Trace t;
        t.trace_id = tid;
        if (order_col) {
            std::vector<std::size_t> idx(p.events.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            if (detail::all_numeric(p.keys)) {
                std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
                    return *detail::parse_double(p.keys[a]) < *detail::parse_double(p.keys[b]);
                });
            } else {
                std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p.keys[a] < p.keys[b]; });
            }
            for (auto i : idx) t.events.push_back(std::move(p.events[i]));
        } else {
            t.events = std::move(p.events);
        }
        if (!id_col)
            for (std::size_t i = 0; i < t.events.size(); ++i) t.events[i].id = tid + "#" + std::to_string(i + 1);
        log.traces.push_back(std::move(t));
    }
    log.validate();
    return log;
}

inline EventLog read_log_file(const std::string& path, const AttributeSchema& schema, const ParseOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_log(in, schema, opts);
}

/// Writes the log with a header: trace id, [event id], [order], attributes.
/// The order column, when present in the schema, is rewritten as the
/// 0-based position within the trace.
inline void write_log(std::ostream& os, const EventLog& log, char delim = ',') {
    const auto& s = log.schema;
    std::vector<std::string> header{s.trace_id_column};
    if (s.event_id_column) header.push_back(*s.event_id_column);
    if (s.event_order_column) header.push_back(*s.event_order_column);
    header.insert(header.end(), s.names.begin(), s.names.end());
    detail::write_record(os, header, delim);

    std::vector<std::string> row;
    for (const auto& t : log.traces) {
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            const auto& e = t.events[i];
            row.clear();
            row.push_back(t.trace_id);
            if (s.event_id_column) row.push_back(e.id);
            if (s.event_order_column) row.push_back(std::to_string(i));
            row.insert(row.end(), e.values.begin(), e.values.end());
            detail::write_record(os, row, delim);
        }
    }
}

/// An attribute at a time slice: slice 0 is the current event, slice l the
/// l-th predecessor.
struct Variable {
    std::size_t attribute = 0;
    std::size_t slice = 0;

    auto operator<=>(const Variable&) const = default;
};

inline std::string variable_name(const std::vector<std::string>& attributes, Variable v) {
    return attributes.at(v.attribute) + "_" + std::to_string(v.slice);
}

/// Variables of a k-context in canonical order: slices k, ..., 1, 0; schema
/// order within a slice.
inline std::vector<Variable> context_variables(std::size_t n_attributes, std::size_t k) {
    std::vector<Variable> vars;
    vars.reserve(n_attributes * (k + 1));
    for (std::size_t s = k + 1; s-- > 0;)
        for (std::size_t a = 0; a < n_attributes; ++a) vars.push_back({a, s});
    return vars;
}

inline std::size_t context_index(std::size_t n_attributes, std::size_t k, Variable v) {
    return (k - v.slice) * n_attributes + v.attribute;
}

struct KContextRow {
    std::vector<std::string> values;  ///< ordered as context_variables()
    std::string event_id;
    std::string trace_id;
};

/// k-context rows for a sequence of events treated as one trace.
inline std::vector<KContextRow> k_context_rows(std::span<const Event> events, std::size_t n_attributes, std::size_t k,
                                               const std::string& trace_id = {}) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    std::vector<KContextRow> rows;
    rows.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        KContextRow r;
        r.event_id = events[i].id;
        r.trace_id = trace_id;
        r.values.reserve(n_attributes * (k + 1));
        for (std::size_t s = k + 1; s-- > 0;) {
            for (std::size_t a = 0; a < n_attributes; ++a)
                r.values.push_back(s <= i ? events[i - s].values.at(a) : std::string(kNoneToken));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Column-oriented k-context log. Values are dictionary-encoded per attribute
/// (shared across slices); code 0 is the padding token.
class KContextLog {
public:
    static KContextLog build(const EventLog& log, std::size_t k) {
        if (k == 0) throw ArgumentError("k must be at least 1");
        KContextLog ctx;
        ctx.k_ = k;
        ctx.attributes_ = log.schema.names;
        const std::size_t n = ctx.attributes_.size();
        ctx.variables_ = context_variables(n, k);
        ctx.dictionaries_.assign(n, std::vector<std::string>{std::string(kNoneToken)});
        std::vector<std::unordered_map<std::string, std::uint32_t>> index(n);

        const std::size_t rows = log.event_count();
        ctx.columns_.assign(ctx.variables_.size(), {});
        for (auto& c : ctx.columns_) c.reserve(rows);
        ctx.event_ids_.reserve(rows);
        ctx.trace_ids_.reserve(rows);

        std::vector<std::uint32_t> codes;
        for (const auto& t : log.traces) {
            codes.clear();
            for (const auto& e : t.events) {
                for (std::size_t a = 0; a < n; ++a) {
                    const auto& v = e.values.at(a);
                    auto [it, inserted] = index[a].try_emplace(v, static_cast<std::uint32_t>(ctx.dictionaries_[a].size()));
                    if (inserted) ctx.dictionaries_[a].push_back(v);
                    codes.push_back(it->second);
                }
            }
            for (std::size_t i = 0; i < t.events.size(); ++i) {
                for (std::size_t s = 0; s <= k; ++s) {
                    for (std::size_t a = 0; a < n; ++a) {
                        const std::uint32_t code = s <= i ? codes[(i - s) * n + a] : 0;
                        ctx.columns_[context_index(n, k, {a, s})].push_back(code);
                    }
                }
                ctx.event_ids_.push_back(t.events[i].id);
                ctx.trace_ids_.push_back(t.trace_id);
            }
        }
        return ctx;
    }

    std::size_t k() const { return k_; }
    std::size_t size() const { return event_ids_.size(); }
    const std::vector<std::string>& attributes() const { return attributes_; }
    const std::vector<Variable>& variables() const { return variables_; }

    std::size_t index_of(Variable v) const {
        if (v.attribute >= attributes_.size() || v.slice > k_) throw ArgumentError("variable outside the k-context");
        return context_index(attributes_.size(), k_, v);
    }

    /// Parses "<Attr>_<slice>".
    Variable parse_variable(std::string_view name) const {
        auto us = name.rfind('_');
        if (us != std::string_view::npos) {
            std::size_t slice = 0;
            auto tail = name.substr(us + 1);
            auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), slice);
            if (ec == std::errc{} && p == tail.data() + tail.size() && !tail.empty()) {
                auto attr = std::find(attributes_.begin(), attributes_.end(), name.substr(0, us));
                if (attr != attributes_.end() && slice <= k_)
                    return {static_cast<std::size_t>(attr - attributes_.begin()), slice};
            }
        }
        throw ArgumentError("unknown variable '" + std::string(name) + "'");
    }

    std::string name(Variable v) const { return variable_name(attributes_, v); }

    std::span<const std::uint32_t> column(std::size_t var) const { return columns_.at(var); }
    std::span<const std::uint32_t> column(Variable v) const { return columns_[index_of(v)]; }

    /// Dictionary size for an attribute, including the padding code.
    std::size_t code_count(std::size_t attribute) const { return dictionaries_.at(attribute).size(); }

    const std::string& decode(std::size_t attribute, std::uint32_t code) const {
        return dictionaries_.at(attribute).at(code);
    }

    const std::string& value(std::size_t row, Variable v) const { return decode(v.attribute, column(v)[row]); }

    const std::string& event_id(std::size_t row) const { return event_ids_.at(row); }
    const std::string& trace_id(std::size_t row) const { return trace_ids_.at(row); }

    KContextRow row(std::size_t i) const {
        KContextRow r;
        r.event_id = event_ids_.at(i);
        r.trace_id = trace_ids_.at(i);
        r.values.reserve(variables_.size());
        for (std::size_t v = 0; v < variables_.size(); ++v)
            r.values.push_back(decode(variables_[v].attribute, columns_[v][i]));
        return r;
    }

private:
    std::size_t k_ = 0;
    std::vector<std::string> attributes_;
    std::vector<Variable> variables_;
    std::vector<std::vector<std::string>> dictionaries_;
    std::vector<std::vector<std::uint32_t>> columns_;
    std::vector<std::string> event_ids_;
    std::vector<std::string> trace_ids_;
};

inline KContextLog build_k_context(const EventLog& log, std::size_t k) { return KContextLog::build(log, k); }

using ValueTuple = std::vector<std::string>;

/// a_dom over schema attributes of an EventLog.
inline std::set<ValueTuple> active_domain(const EventLog& log, const std::vector<std::string>& attributes) {
    if (attributes.empty()) throw ArgumentError("active_domain needs at least one attribute");
    std::vector<std::size_t> idx;
    for (const auto& a : attributes) idx.push_back(log.schema.index_of(a));
    std::set<ValueTuple> out;
    ValueTuple tuple(idx.size());
    for (const auto& t : log.traces)
        for (const auto& e : t.events) {
            for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = e.values[idx[i]];
            out.insert(tuple);
        }
    return out;
}

/// a_dom over k-context variables; the padding token is included where it occurs.
inline std::set<ValueTuple> active_domain(const KContextLog& ctx, const std::vector<Variable>& vars) {
    if (vars.empty()) throw ArgumentError("active_domain needs at least one variable");
    std::vector<std::span<const std::uint32_t>> cols;
    for (auto v : vars) cols.push_back(ctx.column(v));
    std::set<std::vector<std::uint32_t>> coded;
    std::vector<std::uint32_t> key(vars.size());
    for (std::size_t r = 0; r < ctx.size(); ++r) {
        for (std::size_t i = 0; i < cols.size(); ++i) key[i] = cols[i][r];
        coded.insert(key);
    }
    std::set<ValueTuple> out;
    for (const auto& c : coded) {
        ValueTuple t;
        for (std::size_t i = 0; i < c.size(); ++i) t.push_back(ctx.decode(vars[i].attribute, c[i]));
        out.insert(std::move(t));
    }
    return out;
}

inline std::set<ValueTuple> active_domain(const KContextLog& ctx, const std::vector<std::string>& variable_names) {
    std::vector<Variable> vars;
    for (const auto& n : variable_names) vars.push_back(ctx.parse_variable(n));
    return active_domain(ctx, vars);
}

/// Delimited export with columns "<Attr>_<slice>" in canonical variable order.
inline void write_k_context(std::ostream& os, const KContextLog& ctx, char delim = ',') {
    std::vector<std::string> fields;
    for (auto v : ctx.variables()) fields.push_back(ctx.name(v));
    detail::write_record(os, fields, delim);
    for (std::size_t r = 0; r < ctx.size(); ++r) {
        fields.clear();
        for (auto v : ctx.variables()) fields.push_back(ctx.value(r, v));
        detail::write_record(os, fields, delim);
    }
}

}  // namespace edbn

#endif
