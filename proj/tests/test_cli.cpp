#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "repcause/cli.hpp"

using namespace repcause;

namespace {

std::string fixture(const std::string& name) { return std::string(REPCAUSE_FIXTURES) + "/" + name; }

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("repcause_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST(Cli, CausesTableForExampleOne) {
    auto r = cli({"causes", "--semantics", "tuple", fixture("example1.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_EQ(r.out,
              "query: q :- S(X), R(X,Y), S(Y)?\n"
              "tid  tuple       responsibility  counterfactual  contingency sets\n"
              "6    S(6;a3)     1               yes             {}\n"
              "1    R(1;a4,a3)  1/2             no              {3}\n"
              "3    R(3;a3,a3)  1/2             no              {1} {4}\n"
              "4    S(4;a4)     1/2             no              {3}\n"
              "most responsible: 6\n");
}

TEST(Cli, CardinalityNullRepairOfExampleSix) {
    auto r = cli({"repairs", "--semantics", "null", "--minimality", "cardinality", fixture("example6.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("1 repair\n"), std::string::npos);
    EXPECT_NE(r.out.find("delta {S[5;1]}"), std::string::npos);
    EXPECT_NE(r.out.find("S(5;null)"), std::string::npos);
}

TEST(Cli, CausesUnderInclusionDependency) {
    auto r = cli({"causes", "--ics", fixture("courses.cdl"), "--query", "Q2", "--answer", "john"});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("4    Course(4;com08,john)  1/3"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("8    Course(8;com01,john)  1/3"), std::string::npos) << r.out;
}

TEST(Cli, ResponsibilityOmitsContingencies) {
    auto r = cli({"responsibility", fixture("example5.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_EQ(r.out.find("contingency"), std::string::npos);
    EXPECT_NE(r.out.find("most responsible: 1, 2, 3, 5"), std::string::npos) << r.out;
}

TEST(Cli, RepairsOfExampleThree) {
    auto r = cli({"repairs", fixture("example1.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("3 repairs"), std::string::npos);
    EXPECT_NE(r.out.find("repair 1: removed {6}"), std::string::npos);
    EXPECT_NE(r.out.find("repair 3: removed {3,4}"), std::string::npos);
}

TEST(Cli, HardIcRepairThroughQuery) {
    auto r = cli({"repairs", "--ics", fixture("courses.cdl"), "--query", "Q2", "--answer", "john"});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("removed {1,4,8}"), std::string::npos) << r.out;
}

TEST(Cli, NullCausesListPositionsAndTuples) {
    auto r = cli({"causes", "--semantics", "null", fixture("example7.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_NE(r.out.find("S[2;1]    a3     1               yes"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("R[3;1]    a3     1/3"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("tuple-level causes"), std::string::npos);
    EXPECT_EQ(r.out.find("R[3;2]"), std::string::npos);
}

TEST(Cli, EvalListsAnswers) {
    auto r = cli({"eval", fixture("courses.cdl")});
    ASSERT_EQ(r.code, exit_ok) << r.err;
    EXPECT_EQ(r.out, "Q1: 3 answers\n  (john)\n  (kevin)\n  (patrick)\n"
                     "Q2: 4 answers\n  (eli)\n  (john)\n  (kevin)\n  (patrick)\n");
    auto b = cli({"eval", fixture("courses.cdl"), "--query", "Q1", "--answer", "eli"});
    EXPECT_EQ(b.out, "Q1: false\n");
}

TEST(Cli, EmitAndCheck) {
    auto e = cli({"emit-asp", fixture("example1.cdl"), "--include", "causes,cau_cont"});
    ASSERT_EQ(e.code, exit_ok) << e.err;
    EXPECT_NE(e.out.find("cause(T) :- S_a(T,X,d)."), std::string::npos);

    auto c = cli({"check", fixture("example1.cdl"), "--models", fixture("ex3_models.txt")});
    EXPECT_EQ(c.code, exit_ok) << c.err;
    EXPECT_NE(c.out.find("bijection: yes"), std::string::npos);

    auto n = cli({"check", "--semantics", "null", fixture("example12.cdl"), "--models",
                  fixture("ex12_null_models.txt")});
    EXPECT_EQ(n.code, exit_ok) << n.err;
}

TEST(Cli, CheckMismatchExitCode) {
    auto path = temp_file("one_model.txt", "{S_a(6,a3,d)}\n");
    auto r = cli({"check", fixture("example1.cdl"), "--models", path});
    EXPECT_EQ(r.code, exit_mismatch);
    EXPECT_NE(r.out.find("bijection: no"), std::string::npos);
}

TEST(Cli, ParseErrorExitCode) {
    auto path = temp_file("bad.cdl", "R(1;a).\nR(2;a,b).\n");
    auto r = cli({"repairs", path});
    EXPECT_EQ(r.code, exit_parse);
    EXPECT_NE(r.err.find("2:"), std::string::npos) << r.err;

    auto m = temp_file("bad_models.txt", "{S_a(6,a3,d)} garbage");
    EXPECT_EQ(cli({"check", fixture("example1.cdl"), "--models", m}).code, exit_parse);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, exit_usage);
    EXPECT_EQ(cli({"frobnicate", fixture("example1.cdl")}).code, exit_usage);
    EXPECT_EQ(cli({"repairs", "/nonexistent/file.cdl"}).code, exit_usage);
    EXPECT_EQ(cli({"repairs", "--semantics", "fuzzy", fixture("example1.cdl")}).code, exit_usage);
    EXPECT_EQ(cli({"check", fixture("example1.cdl")}).code, exit_usage);
    EXPECT_EQ(cli({"causes", "--ics", "--semantics", "null", fixture("courses.cdl")}).code, exit_usage);
    EXPECT_EQ(cli({"causes", fixture("courses.cdl"), "--answer", "john"}).code, exit_usage);
    EXPECT_EQ(cli({"causes", fixture("courses.cdl"), "--query", "Q2"}).code, exit_usage);
    EXPECT_EQ(cli({"causes", fixture("courses.cdl"), "--query", "Q9"}).code, exit_usage);
    EXPECT_EQ(cli({"causes", fixture("courses.cdl"), "--query", "Q2", "--answer", "a,b"}).code, exit_usage);
    EXPECT_EQ(cli({"causes", fixture("fd.cdl")}).code, exit_usage);  // no query in the file
    EXPECT_EQ(cli({"emit-asp", fixture("example1.cdl"), "--include", "pre-rho"}).code, exit_usage);
    EXPECT_EQ(cli({"emit-asp", fixture("example1.cdl"), "--include", "everything"}).code, exit_usage);
}

TEST(Cli, HelpExitsCleanly) {
    auto r = cli({"--help"});
    EXPECT_EQ(r.code, exit_ok);
    EXPECT_NE(r.out.find("--semantics"), std::string::npos);
}

TEST(Cli, EnvironmentSetsFlagsAndFlagsWin) {
    ::setenv("REPCAUSE_FORMAT", "json", 1);
    auto env = cli({"repairs", fixture("example1.cdl")});
    auto flag = cli({"repairs", "--format", "text", fixture("example1.cdl")});
    ::unsetenv("REPCAUSE_FORMAT");
    EXPECT_EQ(env.out.front(), '{');
    EXPECT_EQ(flag.out.rfind("3 repairs", 0), 0u);
}

TEST(Cli, JsonSchema) {
    auto r = cli({"causes", "--format", "json", fixture("example1.cdl")});
    ASSERT_EQ(r.code, exit_ok);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["query"], "q :- S(X), R(X,Y), S(Y)?");
    ASSERT_EQ(j["causes"].size(), 4u);
    EXPECT_EQ(j["causes"][0]["id"], 6);
    EXPECT_EQ(j["causes"][0]["responsibility"]["num"], 1);
    EXPECT_EQ(j["causes"][0]["responsibility"]["den"], 1);
    EXPECT_EQ(j["causes"][0]["counterfactual"], true);
    EXPECT_EQ(j["causes"][0]["contingency_sets"], nlohmann::json::parse("[[]]"));
    EXPECT_EQ(j["causes"][1]["responsibility"]["den"], 2);
    EXPECT_EQ(j["causes"][2]["contingency_sets"], nlohmann::json::parse("[[1],[4]]"));

    auto n = cli({"repairs", "--format", "json", "--semantics", "null", fixture("example7.cdl")});
    auto jn = nlohmann::json::parse(n.out);
    ASSERT_EQ(jn["repairs"].size(), 2u);
    EXPECT_EQ(jn["repairs"][0]["delta"], nlohmann::json::parse(R"(["S[2;1]"])"));
    EXPECT_TRUE(jn["repairs"][0]["tuples"][1]["values"][0].is_null() ||
                jn["repairs"][0]["tuples"][4]["values"][0].is_null());

    auto t = cli({"repairs", "--format", "json", fixture("example1.cdl")});
    auto jt = nlohmann::json::parse(t.out);
    EXPECT_EQ(jt["repairs"][1]["removed"], nlohmann::json::parse("[1,3]"));
    EXPECT_EQ(jt["repairs"][1]["tuples"][0]["relation"], "R");
}

TEST(Cli, JsonRoundTrips) {
    for (const char* cmd : {"repairs", "causes", "responsibility", "eval"}) {
        auto r = cli({cmd, "--format", "json", fixture("example2.cdl")});
        ASSERT_EQ(r.code, exit_ok) << cmd;
        EXPECT_EQ(nlohmann::ordered_json::parse(r.out).dump(2) + "\n", r.out) << cmd;
    }
}

TEST(Cli, Deterministic) {
    for (const char* f : {"example1.cdl", "example6.cdl", "courses.cdl"}) {
        auto a = cli({"causes", "--semantics", "null", fixture(f), "--format", "json"});
        auto b = cli({"causes", "--semantics", "null", fixture(f), "--format", "json"});
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(RenderReport, Formatting) {
    Report rep;
    rep.command = Command::causes;
    CauseEntry c;
    c.tid = 1;
    c.tuple = Tuple{"R", 1, {Constant::symbol("a")}};
    c.responsibility = Rational(1, 2);
    c.contingency_sets = {TidSet{}};
    rep.causes.push_back(c);
    rep.most_responsible = {"1"};
    auto text = render_report(rep, OutputFormat::text);
    EXPECT_NE(text.find("1/2"), std::string::npos);
    EXPECT_NE(text.find("{}"), std::string::npos);

    Report nr;
    nr.command = Command::repairs;
    nr.semantics = Semantics::null;
    nr.repairs.push_back({std::nullopt, UpdateSet{{"R", 3, 2}, {"R", 2, 1}}, {}});
    EXPECT_NE(render_report(nr, OutputFormat::text).find("R[2;1], R[3;2]"), std::string::npos);
}
