#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace edbn;

namespace {

struct Cli : ::testing::Test {
    fs::path dir;
    std::string out, err;

    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / ("edbn_cli_" + std::string(info->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "edbn");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream o, e;
        const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
        out = o.str();
        err = e.str();
        return rc;
    }

    int train_permission() {
        return run({"train", "--log", test::data_path("permission_normal.csv"), "--trace-col", "tID", "--id-col", "ID",
                    "--attrs", "Type,Activity,UserID,UserName,UserRole", "--model", path("m.json")});
    }
};

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

}  // namespace

TEST_F(Cli, TrainPrintsSummaryAndWritesModel) {
    ASSERT_EQ(train_permission(), 0) << err;
    EXPECT_TRUE(fs::exists(path("m.json")));
    EXPECT_NE(out.find("UserID_0 -> UserRole_0"), std::string::npos);
    EXPECT_NE(out.find("UserRole: 3/15"), std::string::npos);
}

TEST_F(Cli, ScoreRanksTrace4First) {
    ASSERT_EQ(train_permission(), 0) << err;
    ASSERT_EQ(run({"score", "--log", test::data_path("permission_full.csv"), "--model", path("m.json"), "--explain", "1"}), 0)
        << err;
    const auto l = lines(out);
    ASSERT_GE(l.size(), 5u);
    EXPECT_EQ(l[0], "trace_id,score,event_count");
    EXPECT_EQ(l[1], "4,0,5");
    EXPECT_NE(out.find("4,12,UserRole,fd,UserID_0,0"), std::string::npos);
}

TEST_F(Cli, ExplainSingleTrace) {
    ASSERT_EQ(train_permission(), 0) << err;
    ASSERT_EQ(run({"explain", "--log", test::data_path("permission_full.csv"), "--model", path("m.json"), "--trace", "4",
                   "--explain", "1"}),
              0)
        << err;
    const auto l = lines(out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[1], "4,0,12,UserRole,fd,UserID_0,0");
    EXPECT_EQ(run({"explain", "--log", test::data_path("permission_full.csv"), "--model", path("m.json"), "--trace", "99"}), 1);
    EXPECT_NE(err.find("edbn: score:"), std::string::npos);
}

TEST_F(Cli, GenerateTrainEvaluate) {
    ASSERT_EQ(run({"generate", "--traces", "400", "--seed", "3", "--fraction", "0", "--out", path("train.csv")}), 0) << err;
    ASSERT_EQ(run({"generate", "--traces", "100", "--seed", "4", "--fraction", "0.1", "--out", path("test.csv"), "--labels",
                   path("labels.csv")}),
              0)
        << err;
    EXPECT_NE(out.find("anomalous: 10"), std::string::npos);
    ASSERT_EQ(run({"train", "--log", path("train.csv"), "--model", path("m.json")}), 0) << err;
    ASSERT_EQ(run({"evaluate", "--log", path("test.csv"), "--model", path("m.json"), "--labels", path("labels.csv"),
                   "--out", path("report.txt"), "--curve", path("curve.csv")}),
              0)
        << err;
    EXPECT_NE(out.find("auc: "), std::string::npos);
    EXPECT_NE(out.find("anomalous: 10"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("report.txt")));
    EXPECT_TRUE(fs::exists(path("curve.csv")));
    ASSERT_EQ(run({"evaluate", "--log", path("test.csv"), "--train", path("train.csv"), "--labels", path("labels.csv")}), 0)
        << err;
}

TEST_F(Cli, ContextExport) {
    ASSERT_EQ(run({"context", "--log", test::data_path("permission_normal.csv"), "--trace-col", "tID", "--id-col", "ID",
                   "--attrs", "Type,Activity,UserID,UserName,UserRole", "--k", "2"}),
              0)
        << err;
    const auto l = lines(out);
    EXPECT_EQ(l.size(), 16u);
    EXPECT_EQ(l[0].substr(0, 7), "Type_2,");
}

TEST_F(Cli, MalformedLogReportsStage) {
    {
        std::ofstream f(path("bad.csv"));
        f << "trace_id,A\n1,x\n1\n";
    }
    EXPECT_EQ(run({"train", "--log", path("bad.csv"), "--model", path("m.json")}), 1);
    EXPECT_NE(err.find("edbn: parse: "), std::string::npos);
    EXPECT_NE(err.find("line 3"), std::string::npos);
}

TEST_F(Cli, CorruptModelReportsLoadStage) {
    {
        std::ofstream f(path("m.json"));
        f << "{\"format\":\"edbn-model\"";
    }
    EXPECT_EQ(run({"score", "--log", test::data_path("permission_full.csv"), "--model", path("m.json")}), 1);
    EXPECT_NE(err.find("edbn: load: "), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_NE(run({}), 0);
    EXPECT_NE(run({"train", "--model", path("m.json")}), 0);
    EXPECT_NE(run({"train", "--log", test::data_path("permission_normal.csv"), "--model", path("m.json"), "--k", "0"}), 0);
    EXPECT_EQ(run({"evaluate", "--log", test::data_path("permission_full.csv"), "--labels", test::data_path("permission_full.csv")}), 1);
}

TEST_F(Cli, EmptyLogFailsAtParse) {
    { std::ofstream f(path("empty.csv")); }
    EXPECT_EQ(run({"train", "--log", path("empty.csv"), "--attrs", "A", "--model", path("m.json")}), 1);
    EXPECT_NE(err.find("empty log"), std::string::npos);
}

TEST_F(Cli, TwoSliceModelHasFifteenVariables) {
    ASSERT_EQ(run({"train", "--log", test::data_path("permission_normal.csv"), "--trace-col", "tID", "--id-col", "ID",
                   "--attrs", "Type,Activity,UserID,UserName,UserRole", "--k", "2", "--model", path("m.json")}),
              0)
        << err;
    EXPECT_NE(out.find("variables: 15"), std::string::npos);
}

TEST_F(Cli, TrainingLogScoresPositive) {
    ASSERT_EQ(train_permission(), 0) << err;
    ASSERT_EQ(run({"score", "--log", test::data_path("permission_normal.csv"), "--model", path("m.json")}), 0) << err;
    const auto l = lines(out);
    ASSERT_EQ(l.size(), 4u);
    for (std::size_t i = 1; i < l.size(); ++i) {
        const auto score = std::stod(l[i].substr(l[i].find(',') + 1));
        EXPECT_GT(score, 0.0) << l[i];
    }
}

TEST_F(Cli, SchemaMismatchFails) {
    ASSERT_EQ(train_permission(), 0) << err;
    ASSERT_EQ(run({"generate", "--traces", "5", "--out", path("other.csv")}), 0) << err;
    EXPECT_EQ(run({"score", "--log", path("other.csv"), "--model", path("m.json")}), 1);
}

TEST_F(Cli, GenerateOnePercentAndEvaluate) {
    ASSERT_EQ(run({"generate", "--traces", "1000", "--seed", "7", "--fraction", "0.01", "--out", path("test.csv"),
                   "--labels", path("labels.csv")}),
              0)
        << err;
    std::ifstream lf(path("labels.csv"));
    const auto labels = read_labels(lf);
    std::size_t anomalous = 0;
    for (const auto& [id, l] : labels) anomalous += l == Label::anomalous;
    EXPECT_EQ(anomalous, 10u);

    ASSERT_EQ(run({"generate", "--traces", "2000", "--seed", "8", "--fraction", "0", "--out", path("train.csv")}), 0);
    ASSERT_EQ(run({"evaluate", "--log", path("test.csv"), "--train", path("train.csv"), "--labels", path("labels.csv")}), 0)
        << err;
    const auto pos = out.find("auc: ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GE(std::stod(out.substr(pos + 5)), 0.95) << out;
}

TEST_F(Cli, SingleClassLabelsFail) {
    ASSERT_EQ(run({"generate", "--traces", "20", "--fraction", "0", "--out", path("log.csv"), "--labels",
                   path("labels.csv")}),
              0);
    EXPECT_EQ(run({"evaluate", "--log", path("log.csv"), "--train", path("log.csv"), "--labels", path("labels.csv")}), 1);
    EXPECT_NE(err.find("edbn: evaluate:"), std::string::npos);
}

TEST_F(Cli, OutputsAreByteIdenticalAcrossRuns) {
    auto slurp = [](const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    for (const char* name : {"a", "b"}) {
        const std::string n(name);
        ASSERT_EQ(run({"generate", "--traces", "200", "--seed", "5", "--fraction", "0.1", "--out", path(n + ".csv"),
                       "--labels", path(n + ".labels")}),
                  0);
        ASSERT_EQ(run({"train", "--log", path(n + ".csv"), "--model", path(n + ".json")}), 0) << err;
        ASSERT_EQ(run({"score", "--log", path(n + ".csv"), "--model", path(n + ".json"), "--explain", "2", "--out",
                       path(n + ".rank")}),
                  0);
    }
    for (const char* ext : {".csv", ".labels", ".json", ".rank"})
        EXPECT_EQ(slurp(path(std::string("a") + ext)), slurp(path(std::string("b") + ext))) << ext;
}

TEST_F(Cli, RangeChecksOnFlags) {
    EXPECT_NE(run({"generate", "--traces", "5", "--fraction", "1.5", "--out", path("x.csv")}), 0);
    EXPECT_NE(run({"train", "--log", test::data_path("permission_normal.csv"), "--trace-col", "tID", "--model", path("m.json"),
                   "--fd-threshold", "0"}),
              0);
}
