#ifndef EDBN_TESTS_FIXTURES_HPP
#define EDBN_TESTS_FIXTURES_HPP

#include <sstream>
#include <string>

#include "edbn/edbn.hpp"

namespace edbn::test {

inline std::string data_path(const std::string& name) { return std::string(EDBN_DATA_DIR) + "/" + name; }

/// Permission-request log; Time and ID are not modeled.
inline AttributeSchema permission_schema() {
    AttributeSchema s;
    s.names = {"Type", "Activity", "UserID", "UserName", "UserRole"};
    s.trace_id_column = "tID";
    s.event_id_column = "ID";
    return s;
}

inline EventLog permission_normal() { return read_log_file(data_path("permission_normal.csv"), permission_schema()); }
inline EventLog permission_full() { return read_log_file(data_path("permission_full.csv"), permission_schema()); }

inline EventLog parse_text(const std::string& text, const AttributeSchema& schema, ParseOptions opts = {}) {
    std::istringstream in(text);
    return parse_log(in, schema, opts);
}

inline const Trace& trace_by_id(const EventLog& log, const std::string& id) {
    for (const auto& t : log.traces)
        if (t.trace_id == id) return t;
    throw ArgumentError("no trace " + id);
}

/// Hand-drawn reference structure, slice 0 = current event:
/// Activity_1 -> Activity_0 and Activity_0 -> UserRole_0 conditional; FDs
/// into Type from Activity_0 and Activity_1; UserID <-> UserName;
/// UserID, UserName -> UserRole.
inline EDBNModel reference_model(const EventLog& log) {
    const auto& s = log.schema;
    const auto type = s.index_of("Type"), act = s.index_of("Activity"), id = s.index_of("UserID"),
               name = s.index_of("UserName"), role = s.index_of("UserRole");
    std::vector<DirectedEdge> cond{{{act, 1}, {act, 0}}, {{act, 0}, {role, 0}}};
    std::vector<FDEdge> fds{{{act, 0}, {type, 0}, 1.0},  {{act, 1}, {type, 0}, 1.0},
                            {{name, 0}, {id, 0}, 1.0},   {{id, 0}, {name, 0}, 1.0},   {{id, 0}, {role, 0}, 1.0},
                            {{name, 0}, {role, 0}, 1.0}};
    return fit_edbn(log, 1, cond, fds);
}

}  // namespace edbn::test

#endif
