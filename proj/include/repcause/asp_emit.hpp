#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repcause/qlang.hpp"
#include "repcause/relmodel.hpp"

namespace repcause {

enum class Semantics { tuple, null };
enum class Flavor { disjunctive, non_disjunctive };
enum class Extension { causes, cau_cont, contingency_sets, pre_rho, weak_constraints };
enum class Dialect { core_asp, set_extended_asp };

struct EmitOptions {
    Semantics semantics = Semantics::tuple;
    Flavor flavor = Flavor::non_disjunctive;
    std::set<Extension> include;
    long maxint = 100;
};

struct ProgramText {
    std::string text;
    Dialect dialect = Dialect::core_asp;
};

/// Throws EmitError for option combinations the emitters cannot honour:
/// contingency sets or pre-rho without cau_cont and causes, maxint below
/// the tuple count + 1, or tuple-only extensions under null semantics.
void validate(const EmitOptions& options, const Instance& instance);

/// Repair program for tuple deletions: facts, repair rules annotated d,
/// persistence rules annotated s, and the requested extensions.
ProgramText emit_tuple_repair_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                      const EmitOptions& options);

/// Repair program for null updates with annotations u, fu, t, s and,
/// with Extension::causes, the attribute-cause rules.
ProgramText emit_null_repair_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                     const EmitOptions& options);

/// Dispatches on options.semantics.
ProgramText emit_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                         const EmitOptions& options);

/// One canonical string per statement, sorted: comments and layout removed,
/// head disjuncts and body literals put in a fixed order, variables renamed
/// by first occurrence. Two programs that differ only in those respects
/// yield equal results.
std::vector<std::string> canonical_statements(std::string_view program);

bool equivalent_programs(std::string_view a, std::string_view b);

// --- solver output ---------------------------------------------------------

struct ModelAtom {
    std::string predicate;
    std::vector<std::string> args;  // raw argument text
};

struct StableModel {
    std::vector<ModelAtom> atoms;
    bool best = false;  // printed as "Best model:"
};

/// Parses brace-delimited models, optionally preceded by "Best model:" and
/// followed by "Cost ([Weight:Level]): <...>" lines. Throws ParseError.
std::vector<StableModel> parse_models(std::string_view text);

struct CorrespondenceReport {
    std::size_t models = 0;
    std::size_t repairs = 0;
    bool compared_cardinality = false;                      // "Best model" output
    std::vector<std::pair<std::size_t, std::size_t>> matched;  // (model, repair)
    std::vector<std::size_t> unmatched_models;
    std::vector<std::size_t> unmatched_repairs;
    bool bijection = false;
};

/// Reads a repair off each model (s-annotated atoms of the DC relations) and
/// matches the models one-to-one against the engine's repairs; C-repairs or
/// cardinality null-repairs when the output consists of best models.
CorrespondenceReport verify_model_correspondence(const Instance& instance,
                                                 const std::vector<DenialConstraint>& dcs,
                                                 std::string_view models_text, Semantics semantics);

} // namespace repcause
