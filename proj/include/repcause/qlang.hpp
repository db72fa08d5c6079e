#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "repcause/relmodel.hpp"

namespace repcause {

struct Variable {
    std::string name;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Term = std::variant<Variable, Constant>;

struct BodyAtom {
    std::string relation;
    std::vector<Term> terms;
    friend bool operator==(const BodyAtom&, const BodyAtom&) = default;
};

enum class BuiltinOp { eq, ne, lt, le, gt, ge };

struct BuiltinAtom {
    BuiltinOp op = BuiltinOp::eq;
    Term left;
    Term right;
    friend bool operator==(const BuiltinAtom&, const BuiltinAtom&) = default;
};

struct ConjunctiveBody {
    std::vector<BodyAtom> atoms;
    std::vector<BuiltinAtom> builtins;
    friend bool operator==(const ConjunctiveBody&, const ConjunctiveBody&) = default;
};

/// ← body: no combination of tuples may satisfy the body.
struct DenialConstraint {
    ConjunctiveBody body;
    friend bool operator==(const DenialConstraint&, const DenialConstraint&) = default;
};

/// A UCQ; one disjunct makes it a CQ. An empty head makes it Boolean.
struct QuerySpec {
    std::string name;
    std::vector<Variable> head;
    std::vector<ConjunctiveBody> disjuncts;

    bool is_boolean() const { return head.empty(); }
    friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// premise → ∃ conclusion; variables shared by both atoms must agree.
struct InclusionDependency {
    BodyAtom premise;
    BodyAtom conclusion;

    /// Variables occurring in both atoms.
    std::set<std::string> shared_variables() const;
    friend bool operator==(const InclusionDependency&, const InclusionDependency&) = default;
};

struct Problem {
    Instance instance;
    std::vector<DenialConstraint> dcs;
    std::vector<QuerySpec> queries;
    std::vector<InclusionDependency> ids;

    /// Throws EvalError when no query has that name.
    const QuerySpec& query(std::string_view name) const;
    friend bool operator==(const Problem&, const Problem&) = default;
};

/// One satisfying assignment of a denial-constraint body.
struct ViolationWitness {
    struct Binding {
        Constant value;
        std::set<PositionRef> positions;  // where the variable is read
        friend bool operator==(const Binding&, const Binding&) = default;
    };

    std::size_t dc_index = 0;
    TidSet tids;
    std::map<std::string, Binding> binding;
    /// Positions whose replacement by null falsifies this assignment: those
    /// read by a repeated variable, by a variable used in a builtin, or
    /// matched against a constant.
    std::set<PositionRef> critical_positions;

    friend bool operator==(const ViolationWitness&, const ViolationWitness&) = default;
};

std::string to_string(BuiltinOp op);
std::string to_string(const Term& term);

/// Variables of a body in order of first occurrence (atoms first, then builtins).
std::vector<std::string> variables_of(const ConjunctiveBody& body);

/// (atom index, 1-based position) pairs whose nulling falsifies any assignment
/// of the body: repeated variables, variables used in builtins, constants.
std::set<std::pair<std::size_t, std::size_t>> critical_term_positions(const ConjunctiveBody& body);

// --- parsing and rendering -------------------------------------------------

/// Parses facts, denial constraints, queries and inclusion dependencies.
/// Throws ParseError (with line/column) on syntax, arity, safety or builtin errors.
Problem parse_problem(std::string_view text);

std::string render(const ConjunctiveBody& body);
std::string render(const DenialConstraint& dc);
std::string render(const QuerySpec& query);
std::string render(const InclusionDependency& id);
/// Text in the input grammar; parse_problem(render_problem(p)) == p.
std::string render_problem(const Problem& problem);

// --- evaluation ------------------------------------------------------------

/// True iff some disjunct has a satisfying assignment. Joins and builtins never
/// hold through null; a variable occurring once in the atoms may bind null.
/// Throws EvalError for open queries or order comparisons across constant types.
bool eval_bcq(const Instance& instance, const QuerySpec& query);

/// Answers of an open query (a Boolean query yields {()} when true).
std::set<std::vector<Constant>> eval_open(const Instance& instance, const QuerySpec& query);

/// Q[ā]: the head variables replaced by the answer constants.
QuerySpec bind_answer(const QuerySpec& query, const std::vector<Constant>& answer);

/// κ(Q): one denial constraint per disjunct. Throws EvalError for open queries.
std::vector<DenialConstraint> negate_query_to_dc(const QuerySpec& query);

std::vector<ViolationWitness> violations(const Instance& instance,
                                         const std::vector<DenialConstraint>& dcs);

bool is_consistent(const Instance& instance, const std::vector<DenialConstraint>& dcs);

bool satisfies_ids(const Instance& instance, const std::vector<InclusionDependency>& ids);

/// Tids of premise tuples that currently lack a witnessing conclusion tuple.
TidSet unwitnessed_premises(const Instance& instance, const std::vector<InclusionDependency>& ids);

} // namespace repcause
