#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "repcause/qlang.hpp"
#include "repcause/rational.hpp"
#include "repcause/relmodel.hpp"

namespace repcause {

struct TupleCauseReport {
    Tid tid = 0;
    bool counterfactual = false;
    /// ⊆-minimal contingency sets, sorted by size then tids; possibly capped.
    std::vector<TidSet> contingency_sets;
    bool contingency_truncated = false;
    Rational responsibility{0};
};

/// Limits on the reported contingency sets. Responsibilities are computed
/// before the caps are applied and never depend on them.
struct CauseOptions {
    std::optional<std::size_t> max_contingency_sets;
    std::optional<std::size_t> max_contingency_size;
};

/// Actual causes of a Boolean UCQ from the S-repairs of κ(Q) restricted to
/// endogenous tuples. Empty when the query is false. Ordered by decreasing
/// responsibility, then tid.
std::vector<TupleCauseReport> actual_causes(const Instance& instance, const QuerySpec& query,
                                            const CauseOptions& options = {});

/// Causes of maximum responsibility: the tids removed by some C-repair.
std::vector<Tid> most_responsible_causes(const Instance& instance, const QuerySpec& query);

/// Direct search over every subset of endogenous tuples. Throws LimitError
/// above 20 endogenous tuples.
std::vector<TupleCauseReport> causes_oracle(const Instance& instance, const QuerySpec& query,
                                            const CauseOptions& options = {});

/// Causes whose contingency sets keep the inclusion dependencies satisfied
/// both before and after removing the cause. Requires instance ⊨ ids
/// (EvalError otherwise); exhaustive, so LimitError above 20 endogenous tuples.
std::vector<TupleCauseReport> actual_causes_under_ics(const Instance& instance, const QuerySpec& query,
                                                      const std::vector<InclusionDependency>& ids,
                                                      const CauseOptions& options = {});

} // namespace repcause
