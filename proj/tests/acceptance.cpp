// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "properties.hpp"
#include "repcause/asp_emit.hpp"
#include "repcause/cli.hpp"
#include "repcause/null_causes.hpp"
#include "repcause/null_repairs.hpp"
#include "repcause/qlang.hpp"
#include "repcause/tuple_causes.hpp"
#include "repcause/tuple_repairs.hpp"

using namespace repcause;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string fixture_path(const std::string& name) { return std::string(REPCAUSE_FIXTURES) + "/" + name; }
Problem fixture(const std::string& name) { return parse_problem(slurp(fixture_path(name))); }
std::string golden(const std::string& name) { return slurp(std::string(REPCAUSE_GOLDEN) + "/" + name); }

// Collects mismatches for one criterion.
struct Check {
    std::vector<std::string> problems;

    template <class A, class B>
    void eq(const A& got, const B& want, const std::string& what) {
        if (!(got == want)) problems.push_back(what);
    }
    void that(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
};

// Tuples named by content, e.g. "R(a4,a3)", so criteria do not depend on tids.
std::string label(const Tuple& t) {
    std::string s = t.relation + "(";
    for (std::size_t i = 0; i < t.values.size(); ++i) s += (i ? "," : "") + t.values[i].to_string();
    return s + ")";
}

std::set<std::string> labels(const Instance& d) {
    std::set<std::string> out;
    for (const auto& [tid, t] : d.tuples()) out.insert(label(t));
    return out;
}

std::map<std::string, Rational> cause_rho(const Instance& d, const std::vector<TupleCauseReport>& cs) {
    std::map<std::string, Rational> out;
    for (const auto& c : cs) out[label(d.at(c.tid))] = c.responsibility;
    return out;
}

std::set<TidSet> removed(const std::vector<RepairRecord>& rs) {
    std::set<TidSet> out;
    for (const auto& r : rs) out.insert(r.removed);
    return out;
}

std::set<UpdateSet> deltas(const std::vector<NullRepairRecord>& rs) {
    std::set<UpdateSet> out;
    for (const auto& r : rs) out.insert(r.delta);
    return out;
}

PositionRef pos(const char* rel, Tid tid, std::size_t i) { return {rel, tid, i}; }

Rational r(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

void example_one(Check& c) {
    auto p = fixture("example1.cdl");
    c.eq(cause_rho(p.instance, actual_causes(p.instance, p.queries[0])),
         std::map<std::string, Rational>{{"S(a3)", r(1)}, {"R(a4,a3)", r(1, 2)}, {"R(a3,a3)", r(1, 2)}, {"S(a4)", r(1, 2)}},
         "causes and responsibilities");
    std::set<std::set<std::string>> s_removed;
    for (const auto& rep : s_repairs(p.instance, p.dcs)) {
        std::set<std::string> gone;
        for (Tid t : rep.removed) gone.insert(label(p.instance.at(t)));
        s_removed.insert(gone);
    }
    c.eq(s_removed,
         std::set<std::set<std::string>>{{"S(a3)"}, {"R(a4,a3)", "R(a3,a3)"}, {"R(a3,a3)", "S(a4)"}},
         "S-repair removed-sets");
    auto cr = c_repairs(p.instance, p.dcs);
    c.that(cr.size() == 1 && cr[0].removed.size() == 1 && label(p.instance.at(*cr[0].removed.begin())) == "S(a3)",
           "unique C-repair removes S(a3)");
}

void example_two(Check& c) {
    auto p = fixture("example2.cdl");
    const auto& q = p.queries[0];
    auto rho = cause_rho(p.instance, actual_causes(p.instance, q));
    std::set<std::string> causes;
    for (const auto& [l, v] : rho) causes.insert(l);
    c.eq(causes, std::set<std::string>{"P(a)", "Q(a,b)", "R(a,c)"}, "causes");
    c.that(rho.count("P(a)") && rho.at("P(a)") == r(1), "rho(P(a)) = 1");
    std::set<std::string> most;
    for (Tid t : most_responsible_causes(p.instance, q)) most.insert(label(p.instance.at(t)));
    c.eq(most, std::set<std::string>{"P(a)"}, "P(a) most responsible");
    std::set<std::set<std::string>> reps;
    for (const auto& rep : s_repairs(p.instance, p.dcs)) reps.insert(labels(rep.repair));
    c.eq(reps, std::set<std::set<std::string>>{{"P(e)", "P(a)"}, {"P(e)", "Q(a,b)", "R(a,c)"}}, "S-repairs");
    auto cr = c_repairs(p.instance, p.dcs);
    c.that(cr.size() == 1 && labels(cr[0].repair) == std::set<std::string>{"P(e)", "Q(a,b)", "R(a,c)"},
           "unique C-repair");
}

void example_five(Check& c) {
    auto p = fixture("example5.cdl");
    c.eq(conflict_hypergraph(p.instance, p.dcs).edges, std::set<TidSet>{{2, 5}, {2, 3, 4}, {1, 3}}, "hyperedges");
    c.eq(s_repairs(p.instance, p.dcs).size(), 4u, "four S-repairs");
    auto cr = c_repairs(p.instance, p.dcs);
    c.eq(cr.size(), 3u, "three C-repairs");
    for (const auto& rep : cr) c.eq(rep.removed.size(), 2u, "C-repairs remove two tuples");
    auto rho = cause_rho(p.instance, actual_causes(p.instance, p.queries[0]));
    c.that(rho.count("A(a)") && rho.at("A(a)") == r(1, 2), "rho(A(1;a)) = 1/2");
}

void example_six(Check& c) {
    auto p = fixture("example6.cdl");
    std::set<UpdateSet> listed{
        {pos("S", 5, 1)},
        {pos("R", 2, 1), pos("R", 3, 2)},
        {pos("R", 2, 1), pos("S", 6, 1)},
        {pos("R", 2, 2), pos("R", 3, 2)},
        {pos("R", 2, 2), pos("R", 3, 1)},
        {pos("R", 2, 2), pos("S", 6, 1)},
    };
    auto got = deltas(null_repairs(p.instance, p.dcs));
    if (got != listed) {
        std::string extra;
        for (const auto& d : got)
            if (!listed.count(d)) extra += " {" + to_string(d) + "}";
        c.problems.push_back("exactly six null-repairs with the listed deltas (got " + std::to_string(got.size()) +
                             ", unlisted:" + extra + ")");
    }
    c.eq(deltas(cardinality_null_repairs(p.instance, p.dcs)), std::set<UpdateSet>{{pos("S", 5, 1)}},
         "unique cardinality null-repair");
    NullCauseAnalysis a(p.instance, p.queries[0]);
    Rational attr(0), tuple(0);
    for (const auto& x : a.attr_causes())
        if (x.position == pos("R", 2, 1)) attr = x.responsibility;
    for (const auto& x : a.tuple_null_causes())
        if (x.tid == 2) tuple = x.responsibility;
    c.eq(attr, r(1, 2), "attribute responsibility of R[2;1]");
    c.eq(tuple, r(1, 2), "tuple responsibility of tid 2");
}

void example_seven(Check& c) {
    auto p = fixture("example7.cdl");
    std::multiset<std::size_t> sizes;
    for (const auto& d : deltas(null_repairs(p.instance, p.dcs))) sizes.insert(d.size());
    c.eq(sizes, std::multiset<std::size_t>{1, 3}, "two null-repairs of sizes 3 and 1");
    std::map<PositionRef, AttrCauseReport> by_pos;
    for (const auto& x : attr_causes(p.instance, p.queries[0])) by_pos[x.position] = x;
    auto rho = [&](const PositionRef& at) { return by_pos.count(at) ? by_pos.at(at).responsibility : r(0); };
    for (Tid t : {3, 4, 5}) {
        c.eq(rho(pos("R", t, 1)), r(1, 3), "rho R[" + std::to_string(t) + ";1] = 1/3");
        c.eq(rho(pos("R", t, 2)), r(0), "rho R[" + std::to_string(t) + ";2] = 0");
    }
    c.that(by_pos.count(pos("S", 2, 1)) && by_pos.at(pos("S", 2, 1)).counterfactual, "S[2;1] counterfactual");
}

void example_twelve(Check& c) {
    auto p = fixture("example12.cdl");
    auto reps = null_repairs(p.instance, p.dcs);
    std::set<std::set<std::string>> got;
    for (const auto& rep : reps) got.insert(labels(rep.repair));
    c.eq(got, std::set<std::set<std::string>>{{"P(1,null)", "R(2,1)"}, {"P(1,2)", "R(null,1)"}}, "two null-repairs");
    const auto& d = p.instance;
    Tid ptid = d.relation_tids("P").front(), rtid = d.relation_tids("R").front();
    UpdateSet three{pos("P", ptid, 1), pos("P", ptid, 2), pos("R", rtid, 1)};
    auto candidate = apply_update(three, d);
    c.that(is_consistent(candidate, p.dcs), "three-change candidate is consistent");
    c.that(!deltas(reps).count(three), "three-change candidate rejected");
}

void inclusion_dependencies(Check& c) {
    auto p = fixture("courses.cdl");
    auto john = [&](const char* name) { return bind_answer(p.query(name), {Constant::symbol("john")}); };
    auto by_tid = [](const std::vector<TupleCauseReport>& cs) {
        std::map<Tid, TupleCauseReport> out;
        for (const auto& x : cs) out[x.tid] = x;
        return out;
    };
    auto plain = by_tid(actual_causes(p.instance, john("Q2")));
    c.that(plain.count(4) && plain.at(4).responsibility == r(1, 2), "without the dependency rho(4) = 1/2");
    c.that(plain.count(8) && plain.at(8).responsibility == r(1, 2), "without the dependency rho(8) = 1/2");
    auto with = by_tid(actual_causes_under_ics(p.instance, john("Q2"), p.ids));
    c.that(with.count(4) && with.at(4).responsibility == r(1, 3), "with the dependency rho(4) = 1/3");
    c.that(with.count(8) && with.at(8).responsibility == r(1, 3), "with the dependency rho(8) = 1/3");
    auto q1 = by_tid(actual_causes_under_ics(p.instance, john("Q1"), p.ids));
    c.that(q1.count(1) && q1.at(1).counterfactual, "tid 1 counterfactual for Q1");
    auto hard = s_repairs_under_hard_ics(p.instance, negate_query_to_dc(john("Q2")), p.ids);
    c.eq(removed(hard), std::set<TidSet>{{1, 4, 8}}, "hard-IC repair removes {1,4,8}");
}

void oracle_equivalence(Check& c) {
    auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(2024);
    const int n = 500;
    oracle::GenLimits tuple_lim;
    tuple_lim.exogenous = true;
    oracle::GenLimits null_lim;
    null_lim.max_positions = 12;
    for (int i = 0; i < n && c.problems.empty(); ++i) {
        if (auto f = props::check_causes(oracle::random_problem(rng, tuple_lim)))
            c.problems.push_back("causes, instance " + std::to_string(i) + ": " + *f);
        if (auto f = props::check_null_repairs(oracle::random_problem(rng, null_lim)))
            c.problems.push_back("null repairs, instance " + std::to_string(i) + ": " + *f);
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.that(secs <= 60, "runtime " + std::to_string(secs) + " s exceeds 60 s");
}

void golden_emission(Check& c) {
    auto emit = [](const Problem& p, Semantics sem) {
        EmitOptions o;
        o.semantics = sem;
        return emit_program(p.instance, p.dcs, o).text;
    };
    auto contains = [](const std::string& program, const std::string& fragment) {
        auto a = canonical_statements(program), b = canonical_statements(fragment);
        return std::includes(a.begin(), a.end(), b.begin(), b.end());
    };
    auto p3 = fixture("example1.cdl");
    auto p5 = fixture("example5.cdl");
    auto p7 = fixture("example7.cdl");
    auto p12 = fixture("example12.cdl");
    c.that(equivalent_programs(emit(p3, Semantics::tuple), golden("ex3_repair.dlv")), "example 3 program");
    c.that(equivalent_programs(emit(p5, Semantics::tuple), golden("ex5_repair.dlv")), "example 5 program");
    EmitOptions causes;
    causes.include = {Extension::causes, Extension::cau_cont};
    c.that(contains(emit_program(p5.instance, p5.dcs, causes).text, golden("ex5_causes_partial.dlv")),
           "example 5 cause rules");
    c.that(equivalent_programs(emit(p7, Semantics::null), golden("ex7_null.dlv")), "example 7 program");
    c.that(equivalent_programs(emit(p12, Semantics::null), golden("ex12_null.dlv")), "example 12 program");

    auto m3 = verify_model_correspondence(p3.instance, p3.dcs, slurp(fixture_path("ex3_models.txt")), Semantics::tuple);
    c.that(m3.bijection && m3.models == 3 && m3.repairs == 3, "example 3: 3 models to 3 S-repairs");
    auto m14 =
        verify_model_correspondence(p12.instance, p12.dcs, slurp(fixture_path("ex12_null_models.txt")), Semantics::null);
    c.that(m14.bijection && m14.models == 2 && m14.repairs == 2, "example 14: 2 models to 2 null-repairs");
}

void determinism(Check& c) {
    std::vector<std::vector<std::string>> runs;
    for (const auto& entry : std::filesystem::directory_iterator(REPCAUSE_FIXTURES)) {
        if (entry.path().extension() != ".cdl") continue;
        std::string file = entry.path().string();
        std::vector<std::string> extra;
        if (entry.path().filename() == "courses.cdl") extra = {"--query", "Q2", "--answer", "john"};
        for (const char* cmd : {"repairs", "causes", "responsibility", "emit-asp", "eval"})
            for (const char* sem : {"tuple", "null"})
                for (const char* fmt : {"text", "json"}) {
                    std::vector<std::string> args{cmd, file, "--semantics", sem, "--format", fmt};
                    args.insert(args.end(), extra.begin(), extra.end());
                    runs.push_back(args);
                }
    }
    const std::vector<std::pair<std::string, std::string>> checks{
        {"example1.cdl", "ex3_models.txt"}, {"example2.cdl", "ex2_models.txt"},
        {"example5.cdl", "ex5_models.txt"}, {"example12.cdl", "ex12_null_models.txt"},
        {"example7.cdl", "ex7_null_models.txt"}, {"example6.cdl", "ex6_null_models.txt"}};
    for (const auto& [problem, models] : checks) {
        std::string sem = models.find("null") != std::string::npos ? "null" : "tuple";
        runs.push_back({"check", fixture_path(problem), "--models", fixture_path(models), "--semantics", sem});
    }

    std::size_t succeeded = 0;
    for (const auto& args : runs) {
        std::ostringstream out1, err1, out2, err2;
        int code1 = run_cli(args, out1, err1);
        int code2 = run_cli(args, out2, err2);
        if (code1 == exit_ok) ++succeeded;
        if (code1 != code2 || out1.str() != out2.str() || err1.str() != err2.str()) {
            std::string cmd;
            for (const auto& a : args) cmd += " " + a;
            c.problems.push_back("output differs between runs:" + cmd);
        }
    }
    c.that(succeeded * 2 > runs.size(), "most runs should succeed (" + std::to_string(succeeded) + "/" +
                                             std::to_string(runs.size()) + ")");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"Example 1/3: causes, S-repairs, C-repair", example_one},
        {"Example 2/4: union query causes and repairs", example_two},
        {"Example 5: hypergraph, repairs, responsibility", example_five},
        {"Example 6: null-repairs and null responsibilities", example_six},
        {"Examples 7/8: null-repairs and attribute causes", example_seven},
        {"Examples 12/14: minimal null-repairs", example_twelve},
        {"Inclusion dependencies: responsibilities and hard-IC repair", inclusion_dependencies},
        {"Oracle equivalence on random instances", oracle_equivalence},
        {"Golden ASP emission and model correspondence", golden_emission},
        {"Determinism of CLI output", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.problems.push_back(std::string("exception: ") + e.what());
        }
        std::cout << (c.problems.empty() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << "\n";
        for (const auto& what : c.problems) std::cout << "    " << what << "\n";
        if (!c.problems.empty()) ++failed;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
