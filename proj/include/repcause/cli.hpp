#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "repcause/asp_emit.hpp"
#include "repcause/error.hpp"
#include "repcause/rational.hpp"
#include "repcause/relmodel.hpp"
#include "repcause/tuple_causes.hpp"
#include "repcause/tuple_repairs.hpp"

namespace repcause {

enum class Command { repairs, causes, responsibility, emit_asp, check, eval };
enum class OutputFormat { text, json };

// Exit statuses of run().
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_parse = 2;
inline constexpr int exit_mismatch = 3;  // check: models and repairs differ

struct RunConfig {
    Command command = Command::repairs;
    Semantics semantics = Semantics::tuple;
    Minimality minimality = Minimality::subset;
    bool ics_enabled = false;
    OutputFormat format = OutputFormat::text;
    CauseOptions caps;
    std::string input_path;
    std::optional<std::string> models_path;  // solver output for check
    std::optional<std::string> query_name;
    std::vector<std::string> answer;         // ground answer for an open query
    Flavor flavor = Flavor::non_disjunctive;
    std::set<Extension> include;
    long maxint = 100;
};

/// Usage errors found in a RunConfig (bad flag combination, missing path).
class UsageError : public Error {
public:
    using Error::Error;
};

// --- reports ---------------------------------------------------------------

struct RepairEntry {
    std::optional<TidSet> removed;    // tuple semantics
    std::optional<UpdateSet> delta;   // null semantics
    std::vector<Tuple> tuples;
};

struct CauseEntry {
    std::optional<Tid> tid;                // tuple cause (either semantics)
    std::optional<PositionRef> position;   // attribute cause
    std::optional<Tuple> tuple;
    std::optional<Constant> value;
    Rational responsibility{0};
    bool counterfactual = false;
    std::vector<TidSet> contingency_sets;
    std::vector<UpdateSet> contingency_updates;
    bool contingency_truncated = false;
};

struct QueryAnswers {
    std::string name;
    bool boolean = true;
    bool holds = false;
    std::vector<std::vector<Constant>> answers;
};

struct Report {
    Command command = Command::repairs;
    Semantics semantics = Semantics::tuple;
    std::optional<std::string> query;       // rendered query under analysis
    std::vector<RepairEntry> repairs;
    std::vector<CauseEntry> causes;
    std::vector<std::string> most_responsible;
    std::vector<QueryAnswers> evaluations;
    std::optional<CorrespondenceReport> correspondence;
    std::string program;                    // emit-asp
};

/// Deterministic rendering: rationals as "p/q", sets sorted, "{}" for the
/// empty set, deltas as "R[2;1], R[3;2]". JSON keys appear in a fixed order.
std::string render_report(const Report& report, OutputFormat format);

/// Loads the input, runs the command and writes the rendered report to
/// `out`, diagnostics to `err`. Returns one of the exit statuses above.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses command-line arguments (without the program name) and calls run.
/// Every flag can also be set through a REPCAUSE_* environment variable;
/// command-line values take precedence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace repcause
