#include "repcause/null_repairs.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "repcause/error.hpp"
#include "repcause/hitting_sets.hpp"

namespace repcause {

namespace {

constexpr std::size_t max_exhaustive = 20;

std::vector<NullRepairRecord> records(const Instance& instance, const std::vector<UpdateSet>& deltas,
                                      Minimality kind) {
    std::vector<NullRepairRecord> out;
    for (const auto& d : deltas) out.push_back({apply_update(d, instance), d, kind});
    return out;
}

} // namespace

std::vector<UpdateSet> null_repair_deltas(const Instance& instance,
                                          const std::vector<DenialConstraint>& dcs) {
    using Pos = PositionRef;
    auto unhit = [&](const std::vector<Pos>& chosen) {
        Instance updated = apply_update(UpdateSet(chosen.begin(), chosen.end()), instance);
        std::set<std::vector<Pos>> edges;
        for (const auto& w : violations(updated, dcs)) {
            edges.emplace(w.critical_positions.begin(), w.critical_positions.end());
        }
        return std::vector<std::vector<Pos>>(edges.begin(), edges.end());
    };
    std::vector<UpdateSet> out;
    for (const auto& t : minimal_transversals<Pos>(unhit)) out.emplace_back(t.begin(), t.end());
    return out;
}

std::vector<NullRepairRecord> null_repairs(const Instance& instance,
                                           const std::vector<DenialConstraint>& dcs) {
    return records(instance, null_repair_deltas(instance, dcs), Minimality::subset);
}

std::vector<NullRepairRecord> cardinality_null_repairs(const Instance& instance,
                                                       const std::vector<DenialConstraint>& dcs) {
    auto deltas = null_repair_deltas(instance, dcs);
    if (!deltas.empty()) {
        std::size_t best = deltas.front().size();  // sorted by size
        deltas.erase(std::remove_if(deltas.begin(), deltas.end(),
                                    [&](const UpdateSet& d) { return d.size() != best; }),
                     deltas.end());
    }
    return records(instance, deltas, Minimality::cardinality);
}

std::vector<NullRepairRecord> null_repairs_oracle(const Instance& instance,
                                                  const std::vector<DenialConstraint>& dcs) {
    auto positions = non_null_positions(instance);
    if (positions.size() > max_exhaustive) {
        throw LimitError("exhaustive null-repair search over " + std::to_string(positions.size()) +
                         " positions exceeds the limit of " + std::to_string(max_exhaustive));
    }
    const std::uint32_t n = static_cast<std::uint32_t>(positions.size());
    std::vector<std::uint32_t> masks(1u << n);
    for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::popcount(a) < std::popcount(b);
    });
    std::vector<std::uint32_t> minimal;
    std::vector<UpdateSet> deltas;
    for (auto m : masks) {
        if (std::any_of(minimal.begin(), minimal.end(), [&](std::uint32_t k) { return (k & m) == k; })) {
            continue;
        }
        UpdateSet u;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (m & (1u << i)) u.insert(positions[i]);
        }
        if (is_consistent(apply_update(u, instance), dcs)) {
            minimal.push_back(m);
            deltas.push_back(std::move(u));
        }
    }
    std::sort(deltas.begin(), deltas.end(), [](const UpdateSet& a, const UpdateSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return records(instance, deltas, Minimality::subset);
}

} // namespace repcause
