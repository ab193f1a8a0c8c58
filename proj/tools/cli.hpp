#ifndef EDBN_TOOLS_CLI_HPP
#define EDBN_TOOLS_CLI_HPP

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "third_party/CLI11.hpp"

#include "edbn/edbn.hpp"

namespace edbn::cli {

/// Options shared by every subcommand.
struct RunConfig {
    std::string log_path;
    std::string model_path;
    std::string out_path;
    std::string train_path;
    std::string labels_path;
    std::string curve_path;
    std::string trace_col = "trace_id";
    std::string id_col;
    std::string order_col;
    std::string attrs;
    std::string delimiter = ",";
    std::string trace_filter;
    bool header = true;
    std::size_t k = 1;
    double fd_threshold = 0.99;
    std::uint64_t seed = 1;
    double fraction = 0.0;
    std::size_t traces = 1000;
    std::size_t explain = 0;
};

/// Error tagged with the pipeline stage that raised it.
struct StageError : Error {
    StageError(std::string stage, const std::string& what) : Error(what), stage(std::move(stage)) {}
    std::string stage;
};

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

inline char delimiter_char(const std::string& d) {
    if (d == "\\t" || d == "tab" || d == "\t") return '\t';
    if (d.size() != 1) throw ArgumentError("delimiter must be a single character");
    return d[0];
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    return f;
}

/// Writes to --out when given, otherwise to `fallback`.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) file_ = std::make_unique<std::ofstream>(open_out(path));
        os_ = file_ ? file_.get() : &fallback;
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

inline std::vector<std::string> header_columns(const std::string& path, char delim) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line))
        if (!detail::trim(line).empty()) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) throw ParseError("empty log", 0);
    auto cols = detail::split_record(line, delim);
    if (!cols) throw ParseError("unterminated quote in header", 1);
    return *cols;
}

/// Schema from the flags. Without --attrs every column other than the trace,
/// id and order columns is modeled (header required). "event_id" is picked up
/// as the id column when present and --id-col is not given.
inline AttributeSchema schema_from(const RunConfig& c) {
    AttributeSchema s;
    s.trace_id_column = c.trace_col;
    if (!c.order_col.empty()) s.event_order_column = c.order_col;
    std::vector<std::string> cols;
    if (c.header) cols = header_columns(c.log_path, delimiter_char(c.delimiter));
    if (!c.id_col.empty()) {
        s.event_id_column = c.id_col;
    } else if (std::find(cols.begin(), cols.end(), "event_id") != cols.end()) {
        s.event_id_column = "event_id";
    }
    if (!c.attrs.empty()) {
        s.names = detail::split_list(c.attrs);
    } else {
        if (!c.header) throw ArgumentError("--attrs is required for headerless input");
        for (const auto& col : cols)
            if (col != s.trace_id_column && col != s.event_id_column && col != s.event_order_column)
                s.names.push_back(col);
    }
    s.validate();
    return s;
}

inline ParseOptions parse_options(const RunConfig& c) {
    ParseOptions o;
    o.delimiter = delimiter_char(c.delimiter);
    o.header = c.header;
    return o;
}

inline EDBNModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_model(in);
}

inline void print_model_summary(std::ostream& os, const EDBNModel& m) {
    os << "k: " << m.k << "\n";
    os << "variables: " << m.attribute_count() * (m.k + 1) << "\n";
    os << "training events: " << m.training_event_count << "\n";
    os << "functional dependencies:\n";
    for (const auto& f : m.fd_mappings)
        os << "  " << m.variable(f.edge.source) << " -> " << m.variable(f.edge.target)
           << "  U=" << detail::format_fixed(f.edge.strength, 6) << "  violation=" << f.violation.num << "/"
           << f.violation.den << "\n";
    os << "conditional edges:\n";
    for (const auto& e : m.dag.conditional_edges()) os << "  " << m.variable(e.from) << " -> " << m.variable(e.to) << "\n";
    os << "rates (new_value, new_relation):\n";
    for (std::size_t a = 0; a < m.attribute_count(); ++a)
        os << "  " << m.schema.names[a] << ": " << m.new_value[a].num << "/" << m.new_value[a].den << ", "
           << m.new_relation[a].num << "/" << m.new_relation[a].den << "\n";
}

inline void write_ranking(std::ostream& os, const Ranking& ranking, std::size_t explain_n) {
    os << "trace_id,score,event_count\n";
    for (const auto& ts : ranking)
        detail::write_record(os, {ts.trace_id, detail::format_double(ts.score()), std::to_string(ts.event_count)}, ',');
    if (explain_n == 0) return;
    os << "\n# explanations\n";
    os << "trace_id,event_id,attribute,factor,source,contribution\n";
    for (const auto& ts : ranking)
        for (const auto& e : explain(ts, explain_n))
            detail::write_record(os,
                                 {ts.trace_id, e.event_id, e.attribute, to_string(e.kind), e.source,
                                  detail::format_double(e.contribution)},
                                 ',');
}

inline int cmd_train(const RunConfig& c, std::ostream& out) {
    const auto schema = stage("schema", [&] { return schema_from(c); });
    const auto log = stage("parse", [&] { return read_log_file(c.log_path, schema, parse_options(c)); });
    const auto model = stage("learn", [&] { return learn_edbn(log, {c.k, c.fd_threshold}); });
    stage("write", [&] {
        auto f = open_out(c.model_path);
        save_model(f, model);
        if (!f) throw Error("failed writing '" + c.model_path + "'");
        return 0;
    });
    print_model_summary(out, model);
    return 0;
}

inline EventLog read_scoring_log(const RunConfig& c, const EDBNModel& model) {
    return stage("parse", [&] { return read_log_file(c.log_path, model.schema, parse_options(c)); });
}

inline int cmd_score(const RunConfig& c, std::ostream& out) {
    const auto model = stage("load", [&] { return read_model(c.model_path); });
    const auto log = read_scoring_log(c, model);
    const auto ranking = stage("score", [&] { return rank_traces(model, log); });
    Output o(c.out_path, out);
    write_ranking(o.stream(), ranking, c.explain);
    return 0;
}

inline int cmd_explain(const RunConfig& c, std::ostream& out) {
    const auto model = stage("load", [&] { return read_model(c.model_path); });
    const auto log = read_scoring_log(c, model);
    const std::size_t top = c.explain == 0 ? 5 : c.explain;
    Output o(c.out_path, out);
    auto& os = o.stream();
    os << "trace_id,score,event_id,attribute,factor,source,contribution\n";
    bool found = false;
    for (const auto& ts : stage("score", [&] { return rank_traces(model, log); })) {
        if (!c.trace_filter.empty() && ts.trace_id != c.trace_filter) continue;
        found = true;
        for (const auto& e : explain(ts, top))
            detail::write_record(os,
                                 {ts.trace_id, detail::format_double(ts.score()), e.event_id, e.attribute,
                                  to_string(e.kind), e.source, detail::format_double(e.contribution)},
                                 ',');
    }
    if (!found) throw StageError("score", "no trace '" + c.trace_filter + "' in the log");
    return 0;
}

inline int cmd_generate(const RunConfig& c, std::ostream& out) {
    const auto pm = stage("model", [&] {
        return c.model_path.empty() ? default_shipping_model() : read_process_model_file(c.model_path);
    });
    const auto clean = stage("generate", [&] { return generate(pm, c.traces, c.seed); });
    const auto labeled = stage("inject", [&] { return inject_anomalies(clean, c.fraction, c.seed); });
    stage("write", [&] {
        auto f = open_out(c.out_path);
        write_log(f, labeled.log, delimiter_char(c.delimiter));
        if (!c.labels_path.empty()) {
            auto l = open_out(c.labels_path);
            write_labels(l, labeled, delimiter_char(c.delimiter));
        }
        return 0;
    });
    std::size_t anomalous = 0;
    for (const auto& [id, l] : labeled.labels) anomalous += l == Label::anomalous;
    out << "traces: " << labeled.log.traces.size() << "\n";
    out << "events: " << labeled.log.event_count() << "\n";
    out << "anomalous: " << anomalous << "\n";
    return 0;
}

inline int cmd_evaluate(const RunConfig& c, std::ostream& out) {
    EDBNModel model;
    if (!c.model_path.empty()) {
        model = stage("load", [&] { return read_model(c.model_path); });
    } else {
        RunConfig tc = c;
        tc.log_path = c.train_path;
        const auto schema = stage("schema", [&] { return schema_from(tc); });
        const auto train = stage("parse", [&] { return read_log_file(c.train_path, schema, parse_options(c)); });
        model = stage("learn", [&] { return learn_edbn(train, {c.k, c.fd_threshold}); });
    }
    const auto test = read_scoring_log(c, model);
    const auto labels = stage("labels", [&] {
        std::ifstream in(c.labels_path);
        if (!in) throw Error("cannot open '" + c.labels_path + "'");
        return read_labels(in, delimiter_char(c.delimiter));
    });
    const auto report = stage("evaluate", [&] { return evaluate_model(model, test, labels); });
    if (!c.out_path.empty()) {
        auto f = open_out(c.out_path);
        write_report(f, report);
    }
    if (!c.curve_path.empty()) {
        auto f = open_out(c.curve_path);
        write_curve(f, report);
    }
    out << "auc: " << detail::format_fixed(report.auc, 6) << "\n";
    out << "normal: " << report.n_normal << "\n";
    out << "anomalous: " << report.n_anomalous << "\n";
    return 0;
}

inline int cmd_context(const RunConfig& c, std::ostream& out) {
    const auto schema = stage("schema", [&] { return schema_from(c); });
    const auto log = stage("parse", [&] { return read_log_file(c.log_path, schema, parse_options(c)); });
    const auto ctx = stage("context", [&] { return build_k_context(log, c.k); });
    Output o(c.out_path, out);
    write_k_context(o.stream(), ctx, delimiter_char(c.delimiter));
    return 0;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anomaly detection in multi-attribute event logs with extended dynamic Bayesian networks", "edbn"};
    app.require_subcommand(1);
    RunConfig c;

    auto log_opts = [&](CLI::App* s, bool log_required) {
        auto* o = s->add_option("--log", c.log_path, "Event log (delimited text)");
        if (log_required) o->required()->check(CLI::ExistingFile);
        s->add_option("--delimiter", c.delimiter, "Field delimiter (',' or 'tab')")->capture_default_str();
        s->add_flag("--header,!--no-header", c.header, "Input has a header row")->capture_default_str();
    };
    auto schema_opts = [&](CLI::App* s) {
        s->add_option("--trace-col", c.trace_col, "Trace id column")->capture_default_str();
        s->add_option("--attrs", c.attrs, "Comma-separated modeled columns (default: all others)");
        s->add_option("--id-col", c.id_col, "Event id column");
        s->add_option("--order-col", c.order_col, "Column ordering events within a trace");
    };
    auto learn_opts = [&](CLI::App* s) {
        s->add_option("--k", c.k, "History length")->capture_default_str()->check(CLI::PositiveNumber);
        s->add_option("--fd-threshold", c.fd_threshold, "Uncertainty-coefficient threshold for FDs")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
    };

    auto* train = app.add_subcommand("train", "Learn a model from a log");
    log_opts(train, true);
    schema_opts(train);
    learn_opts(train);
    train->add_option("--model", c.model_path, "Model file to write")->required();

    auto* score = app.add_subcommand("score", "Rank the traces of a log by anomaly score");
    log_opts(score, true);
    score->add_option("--model", c.model_path, "Trained model file")->required()->check(CLI::ExistingFile);
    score->add_option("--out", c.out_path, "Ranking output (default: stdout)");
    score->add_option("--explain", c.explain, "Append the N smallest factors per trace");

    auto* expl = app.add_subcommand("explain", "Smallest score factors per trace");
    log_opts(expl, true);
    expl->add_option("--model", c.model_path, "Trained model file")->required()->check(CLI::ExistingFile);
    expl->add_option("--explain", c.explain, "Factors per trace (default 5)");
    expl->add_option("--trace", c.trace_filter, "Only this trace");
    expl->add_option("--out", c.out_path, "Output (default: stdout)");

    auto* gen = app.add_subcommand("generate", "Generate a synthetic labeled log");
    gen->add_option("--model", c.model_path, "Process model JSON (default: built-in shipping model)")
        ->check(CLI::ExistingFile);
    gen->add_option("--traces", c.traces, "Number of traces")->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    gen->add_option("--fraction", c.fraction, "Fraction of anomalous traces")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", c.out_path, "Log file to write")->required();
    gen->add_option("--labels", c.labels_path, "Labels file to write");
    gen->add_option("--delimiter", c.delimiter, "Field delimiter")->capture_default_str();

    auto* ev = app.add_subcommand("evaluate", "AUC and precision/recall on a labeled log");
    log_opts(ev, true);
    schema_opts(ev);
    learn_opts(ev);
    auto* ev_model = ev->add_option("--model", c.model_path, "Trained model file")->check(CLI::ExistingFile);
    auto* ev_train = ev->add_option("--train", c.train_path, "Training log (learn instead of --model)")
                         ->check(CLI::ExistingFile);
    ev_model->excludes(ev_train);
    ev->add_option("--labels", c.labels_path, "Labels file")->required()->check(CLI::ExistingFile);
    ev->add_option("--out", c.out_path, "Report file");
    ev->add_option("--curve", c.curve_path, "Precision/recall curve file");

    auto* ctx = app.add_subcommand("context", "Export the k-context log");
    log_opts(ctx, true);
    schema_opts(ctx);
    ctx->add_option("--k", c.k, "History length")->capture_default_str()->check(CLI::PositiveNumber);
    ctx->add_option("--out", c.out_path, "Output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*train) return cmd_train(c, out);
        if (*score) return cmd_score(c, out);
        if (*expl) return cmd_explain(c, out);
        if (*gen) return cmd_generate(c, out);
        if (*ev) {
            if (c.model_path.empty() && c.train_path.empty()) throw StageError("usage", "evaluate needs --model or --train");
            return cmd_evaluate(c, out);
        }
        if (*ctx) return cmd_context(c, out);
    } catch (const StageError& e) {
        err << "edbn: " << e.stage << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "edbn: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace edbn::cli

#endif
