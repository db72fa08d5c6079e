#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace repcause {

/// Enumerates all minimal transversals of a hypergraph given only through a
/// callback: unhit(chosen) returns the edges that `chosen` does not intersect
/// (an empty edge can never be hit). Sets are sorted vectors.
///
/// Branches on the unhit edge with the fewest usable vertices; branch i takes
/// the i-th vertex and forbids the earlier ones, so no set is reached twice.
/// Results are sorted by size, then lexicographically.
template <class V, class Unhit>
std::vector<std::vector<V>> minimal_transversals(Unhit&& unhit) {
    using Set = std::vector<V>;
    std::vector<Set> found;
    Set chosen;
    Set forbidden;

    auto is_minimal = [&](const Set& t) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            Set rest;
            rest.reserve(t.size() - 1);
            for (std::size_t j = 0; j < t.size(); ++j) {
                if (j != i) rest.push_back(t[j]);
            }
            if (unhit(rest).empty()) return false;
        }
        return true;
    };

    auto search = [&](auto& self) -> void {
        std::vector<Set> edges = unhit(chosen);
        if (edges.empty()) {
            if (is_minimal(chosen)) found.push_back(chosen);
            return;
        }
        Set best;
        bool have = false;
        for (const auto& e : edges) {
            Set usable;
            for (const auto& v : e) {
                if (!std::binary_search(forbidden.begin(), forbidden.end(), v)) usable.push_back(v);
            }
            if (usable.empty()) return;
            if (!have || usable.size() < best.size()) {
                best = std::move(usable);
                have = true;
            }
        }
        Set saved_forbidden = forbidden;
        for (const auto& v : best) {
            chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), v), v);
            self(self);
            chosen.erase(std::lower_bound(chosen.begin(), chosen.end(), v));
            forbidden.insert(std::lower_bound(forbidden.begin(), forbidden.end(), v), v);
        }
        forbidden = std::move(saved_forbidden);
    };
    search(search);

    std::sort(found.begin(), found.end(), [](const Set& a, const Set& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return found;
}

/// Edges of a fixed hypergraph that do not meet `chosen`.
template <class V>
std::vector<std::vector<V>> unhit_edges(const std::vector<std::vector<V>>& edges,
                                        const std::vector<V>& chosen) {
    std::vector<std::vector<V>> out;
    for (const auto& e : edges) {
        bool hit = false;
        for (const auto& v : e) {
            if (std::binary_search(chosen.begin(), chosen.end(), v)) {
                hit = true;
                break;
            }
        }
        if (!hit) out.push_back(e);
    }
    return out;
}

} // namespace repcause
