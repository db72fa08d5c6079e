#include "repcause/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "repcause/null_causes.hpp"
#include "repcause/null_repairs.hpp"
#include "repcause/qlang.hpp"

namespace repcause {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* command_name(Command c) {
    switch (c) {
    case Command::repairs: return "repairs";
    case Command::causes: return "causes";
    case Command::responsibility: return "responsibility";
    case Command::emit_asp: return "emit-asp";
    case Command::check: return "check";
    case Command::eval: return "eval";
    }
    return "";
}

const char* semantics_name(Semantics s) { return s == Semantics::tuple ? "tuple" : "null"; }

// Answer components typed the way the grammar would read them.
Constant parse_answer_value(const std::string& text) {
    if (text == "null") return Constant::null();
    if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') && text.back() == text.front())
        return Constant::symbol(text.substr(1, text.size() - 2));
    std::size_t i = (!text.empty() && text[0] == '-') ? 1 : 0;
    bool digits = i < text.size() &&
                  std::all_of(text.begin() + static_cast<long>(i), text.end(),
                              [](char ch) { return ch >= '0' && ch <= '9'; });
    if (digits) {
        try {
            return Constant::integer(std::stoll(text));
        } catch (const std::out_of_range&) {
            throw UsageError("answer value out of range: " + text);
        }
    }
    return Constant::symbol(text);
}

// The query named by --query (or the file's first one), bound to --answer.
std::optional<QuerySpec> selected_query(const Problem& problem, const RunConfig& config, bool required) {
    const QuerySpec* q = nullptr;
    if (config.query_name) {
        try {
            q = &problem.query(*config.query_name);
        } catch (const EvalError&) {
            throw UsageError("no query named " + *config.query_name);
        }
    } else if (!problem.queries.empty()) {
        q = &problem.queries.front();
    } else if (required) {
        throw UsageError("the input declares no query");
    } else {
        return std::nullopt;
    }
    if (config.answer.empty()) return *q;
    std::vector<Constant> answer;
    for (const auto& a : config.answer) answer.push_back(parse_answer_value(a));
    if (answer.size() != q->head.size())
        throw UsageError("query " + q->name + " has " + std::to_string(q->head.size()) +
                         " answer variables, --answer gives " + std::to_string(answer.size()));
    return bind_answer(*q, answer);
}

QuerySpec boolean_query(const Problem& problem, const RunConfig& config) {
    QuerySpec q = *selected_query(problem, config, true);
    if (!q.is_boolean())
        throw UsageError("query " + q.name + " is open; pass --answer with a ground answer");
    return q;
}

// Constraints to repair: κ(Q) for an explicitly named query, else the file's DCs.
std::vector<DenialConstraint> repair_constraints(const Problem& problem, const RunConfig& config) {
    if (config.query_name) return negate_query_to_dc(boolean_query(problem, config));
    return problem.dcs;
}

std::vector<Tuple> tuples_of(const Instance& instance) {
    std::vector<Tuple> out;
    for (const Tuple* t : instance.canonical_order()) out.push_back(*t);
    return out;
}

void fill_repairs(Report& report, const Problem& problem, const RunConfig& config) {
    auto dcs = repair_constraints(problem, config);
    if (config.semantics == Semantics::null) {
        auto records = config.minimality == Minimality::cardinality
                           ? cardinality_null_repairs(problem.instance, dcs)
                           : null_repairs(problem.instance, dcs);
        for (auto& r : records) report.repairs.push_back({std::nullopt, r.delta, tuples_of(r.repair)});
        return;
    }
    std::vector<RepairRecord> records;
    if (config.ics_enabled) {
        if (config.minimality == Minimality::cardinality)
            throw UsageError("--minimality cardinality is not available with --ics");
        records = s_repairs_under_hard_ics(problem.instance, dcs, problem.ids);
    } else if (config.minimality == Minimality::cardinality) {
        records = c_repairs(problem.instance, dcs);
    } else {
        records = s_repairs(problem.instance, dcs);
    }
    for (auto& r : records) report.repairs.push_back({r.removed, std::nullopt, tuples_of(r.repair)});
}

void fill_causes(Report& report, const Problem& problem, const RunConfig& config) {
    QuerySpec q = boolean_query(problem, config);
    report.query = render(q);
    const Instance& inst = problem.instance;

    if (config.semantics == Semantics::tuple) {
        auto causes = config.ics_enabled ? actual_causes_under_ics(inst, q, problem.ids, config.caps)
                                         : actual_causes(inst, q, config.caps);
        for (auto& c : causes) {
            CauseEntry e;
            e.tid = c.tid;
            e.tuple = inst.at(c.tid);
            e.responsibility = c.responsibility;
            e.counterfactual = c.counterfactual;
            e.contingency_sets = std::move(c.contingency_sets);
            e.contingency_truncated = c.contingency_truncated;
            report.causes.push_back(std::move(e));
        }
        if (!report.causes.empty()) {
            Rational top = report.causes.front().responsibility;
            for (const auto& c : report.causes)
                if (c.responsibility == top) report.most_responsible.push_back(std::to_string(*c.tid));
        }
        return;
    }

    NullCauseAnalysis analysis(inst, q);
    auto attrs = analysis.attr_causes();
    for (auto& a : attrs) {
        CauseEntry e;
        e.position = a.position;
        e.tuple = inst.at(a.position.tid);
        e.value = a.original_value;
        e.responsibility = a.responsibility;
        e.counterfactual = a.counterfactual;
        for (auto d : a.deltas) {
            d.erase(a.position);
            e.contingency_updates.push_back(std::move(d));
        }
        std::sort(e.contingency_updates.begin(), e.contingency_updates.end(),
                  [](const UpdateSet& x, const UpdateSet& y) {
                      return x.size() != y.size() ? x.size() < y.size() : x < y;
                  });
        if (config.caps.max_contingency_size) {
            auto limit = *config.caps.max_contingency_size;
            auto before = e.contingency_updates.size();
            std::erase_if(e.contingency_updates, [&](const UpdateSet& u) { return u.size() > limit; });
            e.contingency_truncated = e.contingency_updates.size() != before;
        }
        if (config.caps.max_contingency_sets &&
            e.contingency_updates.size() > *config.caps.max_contingency_sets) {
            e.contingency_updates.resize(*config.caps.max_contingency_sets);
            e.contingency_truncated = true;
        }
        report.causes.push_back(std::move(e));
    }
    if (!attrs.empty()) {
        Rational top = attrs.front().responsibility;
        for (const auto& a : attrs)
            if (a.responsibility == top) report.most_responsible.push_back(a.position.to_string());
    }
    for (auto& t : analysis.tuple_null_causes()) {
        CauseEntry e;
        e.tid = t.tid;
        e.tuple = inst.at(t.tid);
        e.responsibility = t.responsibility;
        e.counterfactual = t.counterfactual;
        report.causes.push_back(std::move(e));
    }
}

void fill_eval(Report& report, const Problem& problem, const RunConfig& config) {
    std::vector<QuerySpec> queries;
    if (config.query_name || !config.answer.empty())
        queries.push_back(*selected_query(problem, config, true));
    else
        queries = problem.queries;
    for (const auto& q : queries) {
        QueryAnswers qa;
        qa.name = q.name;
        qa.boolean = q.is_boolean();
        if (qa.boolean) {
            qa.holds = eval_bcq(problem.instance, q);
        } else {
            auto answers = eval_open(problem.instance, q);
            qa.answers.assign(answers.begin(), answers.end());
            qa.holds = !qa.answers.empty();
        }
        report.evaluations.push_back(std::move(qa));
    }
}

// --- rendering ---------------------------------------------------------------

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string braces(const UpdateSet& u) { return "{" + to_string(u) + "}"; }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string contingency_text(const CauseEntry& c) {
    std::vector<std::string> parts;
    for (const auto& s : c.contingency_sets) parts.push_back(to_string(s));
    for (const auto& u : c.contingency_updates) parts.push_back(braces(u));
    std::string text = parts.empty() ? "-" : join(parts, " ");
    if (c.contingency_truncated) text += " ...";
    return text;
}

// Left-aligned columns separated by two spaces; no trailing blanks.
void write_table(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], row[i].size());
        }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << line << '\n';
    }
}

void render_repairs_text(std::ostream& os, const Report& r) {
    os << r.repairs.size() << (r.repairs.size() == 1 ? " repair" : " repairs") << '\n';
    std::size_t n = 0;
    for (const auto& rep : r.repairs) {
        os << '\n' << "repair " << ++n << ": ";
        if (rep.removed) os << "removed " << to_string(*rep.removed);
        if (rep.delta) os << "delta " << braces(*rep.delta);
        os << '\n';
        for (const auto& t : rep.tuples) os << "  " << to_string(t) << '\n';
    }
}

void render_causes_text(std::ostream& os, const Report& r) {
    bool full = r.command == Command::causes;
    if (r.query) os << "query: " << *r.query << '\n';
    if (r.causes.empty()) {
        os << "no causes\n";
        return;
    }
    std::vector<std::vector<std::string>> attr_rows, tuple_rows;
    for (const auto& c : r.causes) {
        if (c.position) {
            std::vector<std::string> row{c.position->to_string(), c.value->to_string(), to_string(c.responsibility)};
            if (full) {
                row.push_back(yes_no(c.counterfactual));
                row.push_back(contingency_text(c));
            }
            attr_rows.push_back(std::move(row));
        } else {
            std::vector<std::string> row{std::to_string(*c.tid), to_string(*c.tuple), to_string(c.responsibility)};
            if (full) {
                row.push_back(yes_no(c.counterfactual));
                if (r.semantics == Semantics::tuple) row.push_back(contingency_text(c));
            }
            tuple_rows.push_back(std::move(row));
        }
    }
    if (!attr_rows.empty()) {
        std::vector<std::string> head{"position", "value", "responsibility"};
        if (full) {
            head.push_back("counterfactual");
            head.push_back("contingency updates");
        }
        attr_rows.insert(attr_rows.begin(), head);
        write_table(os, attr_rows);
    }
    if (!tuple_rows.empty()) {
        if (!attr_rows.empty()) os << "\ntuple-level causes\n";
        std::vector<std::string> head{"tid", "tuple", "responsibility"};
        if (full) {
            head.push_back("counterfactual");
            if (r.semantics == Semantics::tuple) head.push_back("contingency sets");
        }
        tuple_rows.insert(tuple_rows.begin(), head);
        write_table(os, tuple_rows);
    }
    os << "most responsible: " << join(r.most_responsible, ", ") << '\n';
}

std::string answer_text(const std::vector<Constant>& a) {
    std::vector<std::string> parts;
    for (const auto& v : a) parts.push_back(v.to_string());
    return "(" + join(parts, ", ") + ")";
}

void render_eval_text(std::ostream& os, const Report& r) {
    for (const auto& e : r.evaluations) {
        if (e.boolean) {
            os << e.name << ": " << (e.holds ? "true" : "false") << '\n';
            continue;
        }
        os << e.name << ": " << e.answers.size() << (e.answers.size() == 1 ? " answer" : " answers") << '\n';
        for (const auto& a : e.answers) os << "  " << answer_text(a) << '\n';
    }
}

std::string index_list(const std::vector<std::size_t>& v) {
    std::vector<std::string> parts;
    for (auto i : v) parts.push_back(std::to_string(i + 1));
    return parts.empty() ? "-" : join(parts, ", ");
}

void render_check_text(std::ostream& os, const Report& r) {
    const auto& c = *r.correspondence;
    os << "models: " << c.models << '\n'
       << "repairs: " << c.repairs << (c.compared_cardinality ? " (cardinality)" : "") << '\n';
    for (const auto& [m, rep] : c.matched) os << "model " << m + 1 << " = repair " << rep + 1 << '\n';
    os << "unmatched models: " << index_list(c.unmatched_models) << '\n'
       << "unmatched repairs: " << index_list(c.unmatched_repairs) << '\n'
       << "bijection: " << yes_no(c.bijection) << '\n';
}

ordered_json constant_json(const Constant& c) {
    if (c.is_null()) return nullptr;
    if (c.is_integer()) return c.as_integer();
    return c.as_symbol();
}

ordered_json tuple_json(const Tuple& t) {
    ordered_json values = ordered_json::array();
    for (const auto& v : t.values) values.push_back(constant_json(v));
    return ordered_json{{"id", t.tid}, {"relation", t.relation}, {"values", values}};
}

ordered_json rational_json(const Rational& r) {
    return ordered_json{{"num", r.numerator()}, {"den", r.denominator()}};
}

ordered_json update_json(const UpdateSet& u) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : u) arr.push_back(p.to_string());
    return arr;
}

ordered_json report_json(const Report& r) {
    ordered_json j;
    j["command"] = command_name(r.command);
    j["semantics"] = semantics_name(r.semantics);
    j["query"] = r.query ? ordered_json(*r.query) : ordered_json(nullptr);
    switch (r.command) {
    case Command::repairs: {
        ordered_json reps = ordered_json::array();
        for (const auto& rep : r.repairs) {
            ordered_json e;
            if (rep.removed) e["removed"] = *rep.removed;
            if (rep.delta) e["delta"] = update_json(*rep.delta);
            ordered_json tuples = ordered_json::array();
            for (const auto& t : rep.tuples) tuples.push_back(tuple_json(t));
            e["tuples"] = tuples;
            reps.push_back(e);
        }
        j["repairs"] = reps;
        break;
    }
    case Command::causes:
    case Command::responsibility: {
        ordered_json causes = ordered_json::array();
        for (const auto& c : r.causes) {
            ordered_json e;
            if (c.position) {
                e["position"] = c.position->to_string();
                e["value"] = constant_json(*c.value);
            } else {
                e["id"] = *c.tid;
                e["tuple"] = tuple_json(*c.tuple);
            }
            e["responsibility"] = rational_json(c.responsibility);
            e["counterfactual"] = c.counterfactual;
            if (r.command == Command::causes) {
                ordered_json sets = ordered_json::array();
                for (const auto& s : c.contingency_sets) sets.push_back(s);
                for (const auto& u : c.contingency_updates) sets.push_back(update_json(u));
                e["contingency_sets"] = sets;
                e["contingency_truncated"] = c.contingency_truncated;
            }
            causes.push_back(e);
        }
        j["causes"] = causes;
        j["most_responsible"] = r.most_responsible;
        break;
    }
    case Command::eval: {
        ordered_json evals = ordered_json::array();
        for (const auto& e : r.evaluations) {
            ordered_json q{{"name", e.name}, {"boolean", e.boolean}, {"holds", e.holds}};
            if (!e.boolean) {
                ordered_json answers = ordered_json::array();
                for (const auto& a : e.answers) {
                    ordered_json row = ordered_json::array();
                    for (const auto& v : a) row.push_back(constant_json(v));
                    answers.push_back(row);
                }
                q["answers"] = answers;
            }
            evals.push_back(q);
        }
        j["evaluations"] = evals;
        break;
    }
    case Command::check: {
        const auto& c = *r.correspondence;
        ordered_json matched = ordered_json::array();
        for (const auto& [m, rep] : c.matched) matched.push_back({{"model", m + 1}, {"repair", rep + 1}});
        auto one_based = [](const std::vector<std::size_t>& v) {
            ordered_json arr = ordered_json::array();
            for (auto i : v) arr.push_back(i + 1);
            return arr;
        };
        j["models"] = c.models;
        j["repairs"] = c.repairs;
        j["compared_cardinality"] = c.compared_cardinality;
        j["matched"] = matched;
        j["unmatched_models"] = one_based(c.unmatched_models);
        j["unmatched_repairs"] = one_based(c.unmatched_repairs);
        j["bijection"] = c.bijection;
        break;
    }
    case Command::emit_asp:
        j["program"] = r.program;
        break;
    }
    return j;
}

void validate_config(const RunConfig& config) {
    if (config.input_path.empty()) throw UsageError("missing input file");
    if (config.ics_enabled && config.semantics != Semantics::tuple)
        throw UsageError("--ics requires --semantics tuple");
    if (config.command == Command::check && !config.models_path)
        throw UsageError("check requires --models PATH");
    if (!config.answer.empty() && !config.query_name)
        throw UsageError("--answer requires --query");
}

} // namespace

std::string render_report(const Report& report, OutputFormat format) {
    if (format == OutputFormat::json) return report_json(report).dump(2) + "\n";
    std::ostringstream os;
    switch (report.command) {
    case Command::repairs: render_repairs_text(os, report); break;
    case Command::causes:
    case Command::responsibility: render_causes_text(os, report); break;
    case Command::eval: render_eval_text(os, report); break;
    case Command::check: render_check_text(os, report); break;
    case Command::emit_asp: os << report.program; break;
    }
    return os.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate_config(config);
        Problem problem = parse_problem(read_file(config.input_path));
        Report report;
        report.command = config.command;
        report.semantics = config.semantics;
        switch (config.command) {
        case Command::repairs:
            if (config.query_name) report.query = render(boolean_query(problem, config));
            fill_repairs(report, problem, config);
            break;
        case Command::causes:
        case Command::responsibility:
            fill_causes(report, problem, config);
            break;
        case Command::eval:
            fill_eval(report, problem, config);
            break;
        case Command::emit_asp: {
            EmitOptions options;
            options.semantics = config.semantics;
            options.flavor = config.flavor;
            options.include = config.include;
            options.maxint = config.maxint;
            report.program = emit_program(problem.instance, repair_constraints(problem, config), options).text;
            break;
        }
        case Command::check:
            report.correspondence = verify_model_correspondence(
                problem.instance, repair_constraints(problem, config), read_file(*config.models_path),
                config.semantics);
            break;
        }
        out << render_report(report, config.format);
        if (report.correspondence && !report.correspondence->bijection) return exit_mismatch;
        return exit_ok;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Repairs, causes and responsibilities for relational instances under denial constraints"};
    app.name("repcause");
    RunConfig config;

    const std::map<std::string, Command> commands{
        {"repairs", Command::repairs}, {"causes", Command::causes},
        {"responsibility", Command::responsibility}, {"emit-asp", Command::emit_asp},
        {"check", Command::check}, {"eval", Command::eval}};
    const std::map<std::string, Semantics> semantics{{"tuple", Semantics::tuple}, {"null", Semantics::null}};
    const std::map<std::string, Minimality> minimality{{"subset", Minimality::subset},
                                                       {"cardinality", Minimality::cardinality}};
    const std::map<std::string, OutputFormat> formats{{"text", OutputFormat::text}, {"json", OutputFormat::json}};
    const std::map<std::string, Flavor> flavors{{"disjunctive", Flavor::disjunctive},
                                                {"non-disjunctive", Flavor::non_disjunctive}};
    const std::map<std::string, Extension> extensions{
        {"causes", Extension::causes}, {"cau-cont", Extension::cau_cont},
        {"contingency-sets", Extension::contingency_sets}, {"pre-rho", Extension::pre_rho},
        {"weak-constraints", Extension::weak_constraints}};

    std::size_t max_sets = 0, max_size = 0;
    std::vector<std::string> include;
    std::string models_path, query_name;

    app.add_option("command", config.command, "repairs | causes | responsibility | emit-asp | check | eval")
        ->required()
        ->transform(CLI::CheckedTransformer(commands, CLI::ignore_case));
    app.add_option("input", config.input_path, "problem file")->required();
    app.add_option("--semantics", config.semantics, "tuple | null")
        ->transform(CLI::CheckedTransformer(semantics, CLI::ignore_case))
        ->envname("REPCAUSE_SEMANTICS");
    app.add_option("--minimality", config.minimality, "subset | cardinality")
        ->transform(CLI::CheckedTransformer(minimality, CLI::ignore_case))
        ->envname("REPCAUSE_MINIMALITY");
    app.add_flag("--ics", config.ics_enabled, "honour the inclusion dependencies of the input")
        ->envname("REPCAUSE_ICS");
    app.add_option("--format", config.format, "text | json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->envname("REPCAUSE_FORMAT");
    auto* sets_opt = app.add_option("--max-contingency-sets", max_sets, "report at most N contingency sets per cause")
                         ->envname("REPCAUSE_MAX_CONTINGENCY_SETS");
    auto* size_opt = app.add_option("--max-contingency-size", max_size, "omit contingency sets larger than N")
                         ->envname("REPCAUSE_MAX_CONTINGENCY_SIZE");
    auto* query_opt = app.add_option("--query", query_name, "query to analyse (default: the first one)")
                          ->envname("REPCAUSE_QUERY");
    app.add_option("--answer", config.answer, "ground answer for an open query, comma separated")
        ->delimiter(',')
        ->envname("REPCAUSE_ANSWER");
    auto* models_opt = app.add_option("--models", models_path, "solver output to check")->envname("REPCAUSE_MODELS");
    app.add_option("--flavor", config.flavor, "disjunctive | non-disjunctive")
        ->transform(CLI::CheckedTransformer(flavors, CLI::ignore_case))
        ->envname("REPCAUSE_FLAVOR");
    app.add_option("--include", include,
                   "program extensions: causes, cau-cont, contingency-sets, pre-rho, weak-constraints")
        ->delimiter(',')
        ->transform([](std::string name) {
            std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) {
                return ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
            });
            return name;
        })
        ->check(CLI::IsMember(extensions))
        ->envname("REPCAUSE_INCLUDE");
    app.add_option("--maxint", config.maxint, "integer bound for pre-rho programs")->envname("REPCAUSE_MAXINT");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*sets_opt) config.caps.max_contingency_sets = max_sets;
    if (*size_opt) config.caps.max_contingency_size = max_size;
    if (*query_opt) config.query_name = query_name;
    if (*models_opt) config.models_path = models_path;
    for (const auto& name : include) config.include.insert(extensions.at(name));
    return run(config, out, err);
}

} // namespace repcause
