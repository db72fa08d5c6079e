#pragma once

#include <optional>
#include <set>
#include <vector>

#include "repcause/qlang.hpp"
#include "repcause/rational.hpp"
#include "repcause/relmodel.hpp"

namespace repcause {

struct AttrCauseReport {
    PositionRef position;
    Constant original_value;
    bool counterfactual = false;
    Rational responsibility{0};
    /// Null-repair deltas of κ(Q) containing the position.
    std::vector<UpdateSet> deltas;
};

struct TupleNullCauseReport {
    Tid tid = 0;
    /// Responsibility 1: some single-position delta touches the tuple.
    bool counterfactual = false;
    Rational responsibility{0};
    /// Positions of this tuple occurring in some delta.
    std::set<PositionRef> witness_positions;
};

/// Null-based causes of a Boolean UCQ. The null-repairs of κ(Q) are computed
/// once at construction and shared by all queries on the object.
class NullCauseAnalysis {
public:
    NullCauseAnalysis(Instance instance, QuerySpec query);

    bool query_holds() const { return holds_; }
    const Instance& instance() const { return instance_; }
    /// Deltas of the null-repairs of κ(Q) (the single empty delta when Q is false).
    const std::vector<UpdateSet>& deltas() const { return deltas_; }

    std::vector<UpdateSet> diff_null(const PositionRef& position) const;

    /// Ordered by decreasing responsibility, then position.
    std::vector<AttrCauseReport> attr_causes() const;
    /// Ordered by decreasing responsibility, then tid.
    std::vector<TupleNullCauseReport> tuple_null_causes() const;

private:
    Instance instance_;
    QuerySpec query_;
    bool holds_ = false;
    std::vector<UpdateSet> deltas_;
};

std::vector<UpdateSet> diff_null(const Instance& instance, const QuerySpec& query,
                                 const PositionRef& position);
std::vector<AttrCauseReport> attr_causes(const Instance& instance, const QuerySpec& query);
std::vector<TupleNullCauseReport> tuple_null_causes(const Instance& instance, const QuerySpec& query);

/// D ⊨ Q and {position}∘D ⊭ Q.
bool is_counterfactual_attr_cause(const Instance& instance, const QuerySpec& query,
                                  const PositionRef& position);

/// A smallest update U not touching the position such that the position is a
/// counterfactual cause in U∘D, found by search over non-null positions in
/// increasing size. Throws LimitError above 20 non-null positions.
std::optional<UpdateSet> find_actual_cause_update(const Instance& instance, const QuerySpec& query,
                                                  const PositionRef& position);

bool is_actual_attr_cause(const Instance& instance, const QuerySpec& query,
                          const PositionRef& position);

} // namespace repcause
