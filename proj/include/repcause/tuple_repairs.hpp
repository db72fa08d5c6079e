#pragma once

#include <set>
#include <vector>

#include "repcause/qlang.hpp"
#include "repcause/relmodel.hpp"

namespace repcause {

enum class Minimality { subset, cardinality };

/// Vertices are the instance's tids; edges the tid sets of DC violations.
struct ConflictHypergraph {
    TidSet vertices;
    std::set<TidSet> edges;
};

struct RepairRecord {
    Instance repair;
    TidSet removed;
    Minimality kind = Minimality::subset;
};

struct RepairOptions {
    /// Only endogenous tuples may be deleted. A violation made purely of
    /// exogenous tuples then admits no repair at all.
    bool endogenous_only = false;
};

ConflictHypergraph conflict_hypergraph(const Instance& instance,
                                       const std::vector<DenialConstraint>& dcs);

/// Minimal transversals of the given edges, sorted by size then tids.
std::vector<TidSet> minimal_hitting_sets(const std::set<TidSet>& edges);

/// Removed sets of all S-repairs (complements of minimal hitting sets).
std::vector<TidSet> s_repair_diffs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                   const RepairOptions& options = {});

std::vector<RepairRecord> s_repairs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                    const RepairOptions& options = {});

/// The S-repairs that delete the fewest tuples.
std::vector<RepairRecord> c_repairs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                    const RepairOptions& options = {});

/// Removed sets of S-repairs (or C-repairs) that contain `tid`.
std::vector<TidSet> diff_sets(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                              Tid tid, Minimality mode, const RepairOptions& options = {});

/// Maximal subinstances satisfying both the DCs and the inclusion
/// dependencies, repairing ID violations by deleting premise tuples.
std::vector<RepairRecord> s_repairs_under_hard_ics(const Instance& instance,
                                                   const std::vector<DenialConstraint>& dcs,
                                                   const std::vector<InclusionDependency>& ids);

} // namespace repcause
