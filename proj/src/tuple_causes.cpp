#include "repcause/tuple_causes.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>

#include "repcause/error.hpp"
#include "repcause/tuple_repairs.hpp"

namespace repcause {

namespace {

constexpr std::size_t max_exhaustive = 20;

bool set_order(const TidSet& a, const TidSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

TupleCauseReport make_report(Tid tid, std::vector<TidSet> sets, const CauseOptions& options) {
    std::sort(sets.begin(), sets.end(), set_order);
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    TupleCauseReport r;
    r.tid = tid;
    r.counterfactual = sets.front().empty();
    r.responsibility = Rational(1, static_cast<std::int64_t>(sets.front().size() + 1));
    for (auto& s : sets) {
        if (options.max_contingency_size && s.size() > *options.max_contingency_size) {
            r.contingency_truncated = true;
            continue;
        }
        if (options.max_contingency_sets && r.contingency_sets.size() >= *options.max_contingency_sets) {
            r.contingency_truncated = true;
            break;
        }
        r.contingency_sets.push_back(std::move(s));
    }
    return r;
}

std::vector<TupleCauseReport> finish(std::map<Tid, std::vector<TidSet>> sets, const CauseOptions& options) {
    std::vector<TupleCauseReport> out;
    for (auto& [tid, s] : sets) out.push_back(make_report(tid, std::move(s), options));
    std::stable_sort(out.begin(), out.end(), [](const TupleCauseReport& a, const TupleCauseReport& b) {
        return a.responsibility > b.responsibility;
    });
    return out;
}

// Exhaustive search over subsets of the endogenous tuples. `admissible`
// filters the intermediate instances (used for the inclusion dependencies).
template <class Admissible>
std::vector<TupleCauseReport> brute_force(const Instance& instance, const QuerySpec& query,
                                          const CauseOptions& options, Admissible&& admissible) {
    const TidSet endo_set = instance.endogenous_tids();
    std::vector<Tid> endo(endo_set.begin(), endo_set.end());
    if (endo.size() > max_exhaustive) {
        throw LimitError("exhaustive cause search over " + std::to_string(endo.size()) +
                         " endogenous tuples exceeds the limit of " + std::to_string(max_exhaustive));
    }
    const std::uint32_t n = static_cast<std::uint32_t>(endo.size());
    const std::uint32_t full = 1u << n;
    auto to_set = [&](std::uint32_t mask) {
        TidSet s;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) s.insert(endo[i]);
        }
        return s;
    };
    std::vector<char> sat(full), ok(full);
    for (std::uint32_t m = 0; m < full; ++m) {
        Instance rest = delete_tuples(instance, to_set(m));
        ok[m] = admissible(rest);
        sat[m] = ok[m] && eval_bcq(rest, query);
    }
    std::vector<std::uint32_t> by_size(full);
    for (std::uint32_t m = 0; m < full; ++m) by_size[m] = m;
    std::stable_sort(by_size.begin(), by_size.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::popcount(a) < std::popcount(b);
    });

    std::map<Tid, std::vector<TidSet>> found;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << i;
        std::vector<std::uint32_t> minimal;
        for (std::uint32_t g : by_size) {
            if (g & bit) continue;
            if (!sat[g] || !ok[g | bit] || sat[g | bit]) continue;
            bool has_smaller = std::any_of(minimal.begin(), minimal.end(),
                                           [&](std::uint32_t m) { return (m & g) == m; });
            if (!has_smaller) minimal.push_back(g);
        }
        for (auto m : minimal) found[endo[i]].push_back(to_set(m));
    }
    return finish(std::move(found), options);
}

} // namespace

std::vector<TupleCauseReport> actual_causes(const Instance& instance, const QuerySpec& query,
                                            const CauseOptions& options) {
    if (!eval_bcq(instance, query)) return {};
    RepairOptions ro;
    ro.endogenous_only = true;
    std::map<Tid, std::vector<TidSet>> found;
    for (const auto& d : s_repair_diffs(instance, negate_query_to_dc(query), ro)) {
        for (Tid t : d) {
            TidSet rest = d;
            rest.erase(t);
            found[t].push_back(std::move(rest));
        }
    }
    return finish(std::move(found), options);
}

std::vector<Tid> most_responsible_causes(const Instance& instance, const QuerySpec& query) {
    if (!eval_bcq(instance, query)) return {};
    RepairOptions ro;
    ro.endogenous_only = true;
    TidSet out;
    for (const auto& r : c_repairs(instance, negate_query_to_dc(query), ro)) {
        out.insert(r.removed.begin(), r.removed.end());
    }
    return {out.begin(), out.end()};
}

std::vector<TupleCauseReport> causes_oracle(const Instance& instance, const QuerySpec& query,
                                            const CauseOptions& options) {
    if (!query.is_boolean()) throw EvalError("query " + query.name + " is not Boolean");
    return brute_force(instance, query, options, [](const Instance&) { return true; });
}

std::vector<TupleCauseReport> actual_causes_under_ics(const Instance& instance, const QuerySpec& query,
                                                      const std::vector<InclusionDependency>& ids,
                                                      const CauseOptions& options) {
    if (ids.empty()) return actual_causes(instance, query, options);
    if (!satisfies_ids(instance, ids)) {
        throw EvalError("the instance violates the inclusion dependencies");
    }
    if (!eval_bcq(instance, query)) return {};
    return brute_force(instance, query, options,
                       [&](const Instance& rest) { return satisfies_ids(rest, ids); });
}

} // namespace repcause
