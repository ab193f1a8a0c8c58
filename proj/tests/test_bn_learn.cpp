#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace edbn;

namespace {

// A alternates within each trace; N is independent noise.
EventLog alternating_log(std::size_t traces, std::size_t len, std::uint64_t seed) {
    EventLog log;
    log.schema = {{"A", "N"}, "t", {}, {}};
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < traces; ++t) {
        Trace tr;
        tr.trace_id = std::to_string(t);
        for (std::size_t i = 0; i < len; ++i)
            tr.events.push_back({std::to_string(i), {i % 2 ? "b" : "a", "n" + std::to_string(rng.below(3))}});
        log.traces.push_back(std::move(tr));
    }
    return log;
}

}  // namespace

TEST(Constraints, BlacklistCoversHistorySlices) {
    const auto vars = context_variables(5, 1);
    const auto c = make_constraints(vars, {});
    EXPECT_EQ(c.blacklist.size(), 45u);
    for (const auto& e : c.blacklist) EXPECT_GT(e.to.slice, 0u);
    EXPECT_TRUE(c.whitelist.empty());
}

TEST(Constraints, BlacklistForDeeperContext) {
    // 3 history slices of 2 attributes, each with 8 - 1 candidate sources
    EXPECT_EQ(make_constraints(context_variables(2, 3), {}).blacklist.size(), 6u * 7u);
}

TEST(Constraints, WhitelistIsTheFds) {
    const auto ctx = build_k_context(test::permission_normal(), 1);
    const auto fds = discover_fds(ctx, 0.99);
    const auto c = make_constraints(ctx.variables(), fds);
    EXPECT_EQ(c.whitelist.size(), fds.size());
    for (const auto& f : fds) EXPECT_TRUE(c.whitelist.count({f.source, f.target}));
}

TEST(Dag, ParentsExcludeFunctionalEdges) {
    DAG d;
    d.vertices = context_variables(2, 1);
    d.edges = {{{0, 1}, {0, 0}}, {{1, 0}, {0, 0}}};
    d.functional = {{{1, 0}, {0, 0}}};
    EXPECT_EQ(d.parents({0, 0}), (std::vector<Variable>{{0, 1}}));
    EXPECT_EQ(d.conditional_edges().size(), 1u);
}

TEST(Dag, CycleDetectionAllowsMutualFdsOnly) {
    DAG d;
    d.vertices = context_variables(2, 1);
    d.edges = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
    EXPECT_FALSE(d.is_acyclic());
    d.functional = d.edges;
    EXPECT_TRUE(d.is_acyclic());
    // a conditional edge reversing an FD closes a cycle
    d.functional.erase(DirectedEdge{{1, 0}, {0, 0}});
    EXPECT_FALSE(d.is_acyclic());
}

TEST(LearnStructure, NeverReversesAnFd) {
    const auto ctx = build_k_context(test::permission_normal(), 1);
    const auto fds = discover_fds(ctx, 0.99);
    const auto dag = learn_structure(ctx, make_constraints(ctx.variables(), fds));
    for (const auto& f : fds) EXPECT_FALSE(dag.edges.count({f.target, f.source}) && !dag.is_functional({f.target, f.source}));
}

TEST(Aic, FamilyScoreByHand) {
    AttributeSchema s{{"X", "Y"}, "t", {}, {}};
    const auto log = test::parse_text("t,X,Y\n1,a,p\n2,a,p\n3,b,q\n4,b,p\n", s);
    const auto ctx = build_k_context(log, 1);
    AicScorer sc(ctx);
    const Variable x{0, 0}, y{1, 0};
    // LL(X) = 4 * -ln 2, params 1
    EXPECT_NEAR(sc.family(x, {}), -4 * std::log(2.0) - 1.0, 1e-12);
    // given Y: p -> {a,a,b}, q -> {b}; LL = 2 ln(2/3) + ln(1/3); params 1 * 2
    EXPECT_NEAR(sc.family(x, {y}), 2 * std::log(2.0 / 3.0) + std::log(1.0 / 3.0) - 2.0, 1e-12);
    EXPECT_EQ(sc.arity(Variable{0, 1}), 1u);  // padding only
}

TEST(LearnStructure, FindsAlternationIgnoresNoise) {
    const auto log = alternating_log(60, 20, 7);
    const auto ctx = build_k_context(log, 1);
    const auto dag = learn_structure(ctx, make_constraints(ctx.variables(), {}));
    const Variable a0{0, 0}, a1{0, 1}, n1{1, 1};
    EXPECT_EQ(dag.parents(a0), std::vector<Variable>{a1});
    for (const auto& e : dag.edges) EXPECT_FALSE(e.from == n1 && e.to == a0);
    EXPECT_TRUE(dag.is_acyclic());
}

TEST(LearnStructure, RespectsConstraintsAndIsDeterministic) {
    const auto ctx = build_k_context(test::permission_normal(), 1);
    const auto fds = discover_fds(ctx, 0.99);
    const auto c = make_constraints(ctx.variables(), fds);
    const auto d1 = learn_structure(ctx, c);
    const auto d2 = learn_structure(ctx, c);
    EXPECT_EQ(d1.edges, d2.edges);
    for (const auto& w : c.whitelist) EXPECT_TRUE(d1.edges.count(w));
    for (const auto& e : d1.edges) {
        EXPECT_EQ(e.to.slice, 0u);
        EXPECT_FALSE(c.blacklist.count(e));
    }
    EXPECT_TRUE(d1.is_acyclic());
}

TEST(LearnStructure, HillClimbingNeverLowersScore) {
    const auto log = alternating_log(30, 10, 3);
    const auto ctx = build_k_context(log, 1);
    DAG empty;
    empty.vertices = ctx.variables();
    const auto dag = learn_structure(ctx, make_constraints(ctx.variables(), {}));
    EXPECT_GE(aic_score(ctx, dag), aic_score(ctx, empty));
}

TEST(LearnStructure, ConflictingConstraintsRejected) {
    const auto ctx = build_k_context(test::permission_normal(), 1);
    StructureConstraints c;
    c.blacklist.insert(DirectedEdge{{0, 0}, {1, 0}});
    c.whitelist.insert(DirectedEdge{{0, 0}, {1, 0}});
    EXPECT_THROW(learn_structure(ctx, c), ArgumentError);
}

TEST(Cpt, PermissionUserRoleGivenActivity) {
    const auto log = test::permission_normal();
    const auto m = test::reference_model(log);
    const auto& cpt = m.cpts[log.schema.index_of("UserRole")];
    ASSERT_EQ(cpt.parents.size(), 1u);
    EXPECT_EQ(cpt.rows.size(), 6u);
    EXPECT_EQ(cpt.probability("employee", {"Create Request"}), 1.0);
    EXPECT_DOUBLE_EQ(cpt.probability("manager", {"Approved"}), 0.5);
    EXPECT_EQ(cpt.probability("employee", {"Unknown"}), 0.0);
    // FD targets without conditional parents have empty CPT parent lists
    EXPECT_TRUE(m.cpts[log.schema.index_of("Type")].parents.empty());
}
