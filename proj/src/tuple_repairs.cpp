#include "repcause/tuple_repairs.hpp"

#include <algorithm>

#include "repcause/hitting_sets.hpp"

namespace repcause {

namespace {

std::vector<RepairRecord> records(const Instance& instance, const std::vector<TidSet>& diffs,
                                  Minimality kind) {
    std::vector<RepairRecord> out;
    for (const auto& d : diffs) out.push_back({delete_tuples(instance, d), d, kind});
    return out;
}

std::vector<TidSet> minimum_only(std::vector<TidSet> diffs) {
    if (diffs.empty()) return diffs;
    std::size_t best = diffs.front().size();
    for (const auto& d : diffs) best = std::min(best, d.size());
    diffs.erase(std::remove_if(diffs.begin(), diffs.end(), [&](const TidSet& d) { return d.size() != best; }),
                diffs.end());
    return diffs;
}

bool diff_order(const TidSet& a, const TidSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

} // namespace

ConflictHypergraph conflict_hypergraph(const Instance& instance,
                                       const std::vector<DenialConstraint>& dcs) {
    ConflictHypergraph g;
    g.vertices = instance.tids();
    for (const auto& w : violations(instance, dcs)) g.edges.insert(w.tids);
    return g;
}

std::vector<TidSet> minimal_hitting_sets(const std::set<TidSet>& edges) {
    std::vector<std::vector<Tid>> es;
    for (const auto& e : edges) es.emplace_back(e.begin(), e.end());
    auto sets = minimal_transversals<Tid>(
        [&](const std::vector<Tid>& chosen) { return unhit_edges(es, chosen); });
    std::vector<TidSet> out;
    for (const auto& s : sets) out.emplace_back(s.begin(), s.end());
    return out;
}

std::vector<TidSet> s_repair_diffs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                   const RepairOptions& options) {
    auto g = conflict_hypergraph(instance, dcs);
    if (options.endogenous_only) {
        std::set<TidSet> kept;
        for (const auto& e : g.edges) {
            TidSet r;
            for (Tid t : e) {
                if (instance.at(t).endogenous) r.insert(t);
            }
            kept.insert(std::move(r));
        }
        g.edges = std::move(kept);
    }
    return minimal_hitting_sets(g.edges);
}

std::vector<RepairRecord> s_repairs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                    const RepairOptions& options) {
    return records(instance, s_repair_diffs(instance, dcs, options), Minimality::subset);
}

std::vector<RepairRecord> c_repairs(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                    const RepairOptions& options) {
    return records(instance, minimum_only(s_repair_diffs(instance, dcs, options)), Minimality::cardinality);
}

std::vector<TidSet> diff_sets(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                              Tid tid, Minimality mode, const RepairOptions& options) {
    auto diffs = s_repair_diffs(instance, dcs, options);
    if (mode == Minimality::cardinality) diffs = minimum_only(std::move(diffs));
    std::vector<TidSet> out;
    for (auto& d : diffs) {
        if (d.count(tid)) out.push_back(std::move(d));
    }
    return out;
}

std::vector<RepairRecord> s_repairs_under_hard_ics(const Instance& instance,
                                                   const std::vector<DenialConstraint>& dcs,
                                                   const std::vector<InclusionDependency>& ids) {
    // Every repair's removed set contains a minimal hitting set H of the DC
    // hypergraph, and then also the cascade closure of H: premise tuples left
    // without a witness have to go as well. So the minimal closures are exactly
    // the repairs.
    std::set<TidSet> closures;
    for (const auto& h : s_repair_diffs(instance, dcs)) {
        TidSet removed = h;
        for (;;) {
            auto orphans = unwitnessed_premises(delete_tuples(instance, removed), ids);
            if (orphans.empty()) break;
            removed.insert(orphans.begin(), orphans.end());
        }
        closures.insert(std::move(removed));
    }
    std::vector<TidSet> minimal;
    for (const auto& c : closures) {
        bool dominated = false;
        for (const auto& o : closures) {
            if (o != c && std::includes(c.begin(), c.end(), o.begin(), o.end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(c);
    }
    std::sort(minimal.begin(), minimal.end(), diff_order);
    return records(instance, minimal, Minimality::subset);
}

} // namespace repcause
