#include "repcause/null_causes.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "repcause/error.hpp"
#include "repcause/null_repairs.hpp"

namespace repcause {

namespace {

constexpr std::size_t max_exhaustive = 20;

Rational inverse(std::size_t n) { return Rational(1, static_cast<std::int64_t>(n)); }

} // namespace

NullCauseAnalysis::NullCauseAnalysis(Instance instance, QuerySpec query)
    : instance_(std::move(instance)), query_(std::move(query)) {
    holds_ = eval_bcq(instance_, query_);
    deltas_ = holds_ ? null_repair_deltas(instance_, negate_query_to_dc(query_))
                     : std::vector<UpdateSet>{UpdateSet{}};
}

std::vector<UpdateSet> NullCauseAnalysis::diff_null(const PositionRef& position) const {
    std::vector<UpdateSet> out;
    for (const auto& d : deltas_) {
        if (d.count(position)) out.push_back(d);
    }
    return out;
}

std::vector<AttrCauseReport> NullCauseAnalysis::attr_causes() const {
    std::map<PositionRef, AttrCauseReport> found;
    for (const auto& d : deltas_) {
        for (const auto& p : d) {
            auto& r = found[p];
            r.position = p;
            r.original_value = value_at(instance_, p);
            r.deltas.push_back(d);
            r.responsibility = std::max(r.responsibility, inverse(d.size()));
            if (d.size() == 1) r.counterfactual = true;
        }
    }
    std::vector<AttrCauseReport> out;
    for (auto& [p, r] : found) out.push_back(std::move(r));
    std::stable_sort(out.begin(), out.end(), [](const AttrCauseReport& a, const AttrCauseReport& b) {
        return a.responsibility > b.responsibility;
    });
    return out;
}

std::vector<TupleNullCauseReport> NullCauseAnalysis::tuple_null_causes() const {
    std::map<Tid, TupleNullCauseReport> found;
    for (const auto& d : deltas_) {
        for (const auto& p : d) {
            auto& r = found[p.tid];
            r.tid = p.tid;
            r.witness_positions.insert(p);
            r.responsibility = std::max(r.responsibility, inverse(d.size()));
            if (d.size() == 1) r.counterfactual = true;
        }
    }
    std::vector<TupleNullCauseReport> out;
    for (auto& [t, r] : found) out.push_back(std::move(r));
    std::stable_sort(out.begin(), out.end(), [](const TupleNullCauseReport& a, const TupleNullCauseReport& b) {
        return a.responsibility > b.responsibility;
    });
    return out;
}

std::vector<UpdateSet> diff_null(const Instance& instance, const QuerySpec& query,
                                 const PositionRef& position) {
    return NullCauseAnalysis(instance, query).diff_null(position);
}

std::vector<AttrCauseReport> attr_causes(const Instance& instance, const QuerySpec& query) {
    return NullCauseAnalysis(instance, query).attr_causes();
}

std::vector<TupleNullCauseReport> tuple_null_causes(const Instance& instance, const QuerySpec& query) {
    return NullCauseAnalysis(instance, query).tuple_null_causes();
}

bool is_counterfactual_attr_cause(const Instance& instance, const QuerySpec& query,
                                  const PositionRef& position) {
    if (value_at(instance, position).is_null()) return false;
    return eval_bcq(instance, query) && !eval_bcq(apply_update({position}, instance), query);
}

std::optional<UpdateSet> find_actual_cause_update(const Instance& instance, const QuerySpec& query,
                                                  const PositionRef& position) {
    if (value_at(instance, position).is_null() || !eval_bcq(instance, query)) return std::nullopt;
    std::vector<PositionRef> others;
    for (const auto& p : non_null_positions(instance)) {
        if (p != position) others.push_back(p);
    }
    if (others.size() > max_exhaustive) {
        throw LimitError("exhaustive update search over " + std::to_string(others.size()) +
                         " positions exceeds the limit of " + std::to_string(max_exhaustive));
    }
    const std::size_t n = others.size();
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k <= n; ++k) {
        // all k-subsets in lexicographic order
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        for (;;) {
            UpdateSet u;
            for (auto i : idx) u.insert(others[i]);
            Instance base = apply_update(u, instance);
            if (eval_bcq(base, query) && !eval_bcq(apply_update({position}, base), query)) return u;
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::nullopt;
}

bool is_actual_attr_cause(const Instance& instance, const QuerySpec& query,
                          const PositionRef& position) {
    return find_actual_cause_update(instance, query, position).has_value();
}

} // namespace repcause
