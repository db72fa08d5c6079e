#pragma once

#include <vector>

#include "repcause/qlang.hpp"
#include "repcause/relmodel.hpp"
#include "repcause/tuple_repairs.hpp"

namespace repcause {

struct NullRepairRecord {
    Instance repair;
    UpdateSet delta;
    Minimality kind = Minimality::subset;
};

/// Deltas of all null-based repairs, sorted by size then positions.
/// Candidate changes are the critical positions of current violations;
/// violations are recomputed on every partial update.
std::vector<UpdateSet> null_repair_deltas(const Instance& instance,
                                          const std::vector<DenialConstraint>& dcs);

std::vector<NullRepairRecord> null_repairs(const Instance& instance,
                                           const std::vector<DenialConstraint>& dcs);

/// The null-based repairs with the fewest changed positions.
std::vector<NullRepairRecord> cardinality_null_repairs(const Instance& instance,
                                                       const std::vector<DenialConstraint>& dcs);

/// Exhaustive search over all subsets of non-null positions. Throws
/// LimitError above 20 positions.
std::vector<NullRepairRecord> null_repairs_oracle(const Instance& instance,
                                                  const std::vector<DenialConstraint>& dcs);

} // namespace repcause
