#pragma once

// Small integer max-flow and bipartite matching used by the network and matroid layers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace netcode {

/// Edmonds-Karp max-flow on an explicit residual graph. Sized for desk-scale instances.
class FlowGraph {
public:
    explicit FlowGraph(std::size_t nodes) : adj_(nodes) {}

    std::size_t add_node() {
        adj_.emplace_back();
        return adj_.size() - 1;
    }

    /// Adds arc u->v; returns an arc handle usable with `flow_on`.
    std::size_t add_arc(std::size_t u, std::size_t v, int capacity) {
        const std::size_t id = arcs_.size();
        arcs_.push_back({v, capacity});
        adj_[u].push_back(id);
        arcs_.push_back({u, 0});
        adj_[v].push_back(id + 1);
        return id;
    }

    [[nodiscard]] std::size_t size() const noexcept { return adj_.size(); }

    /// Flow currently carried by the arc returned from `add_arc`.
    [[nodiscard]] int flow_on(std::size_t arc) const { return arcs_[arc ^ 1].capacity; }

    int max_flow(std::size_t source, std::size_t sink, int limit = std::numeric_limits<int>::max()) {
        if (source == sink) return 0;
        int total = 0;
        std::vector<std::size_t> parent_arc(adj_.size());
        while (total < limit) {
            std::vector<bool> seen(adj_.size(), false);
            std::queue<std::size_t> frontier;
            frontier.push(source);
            seen[source] = true;
            while (!frontier.empty() && !seen[sink]) {
                const auto u = frontier.front();
                frontier.pop();
                for (auto id : adj_[u]) {
                    const auto& arc = arcs_[id];
                    if (arc.capacity > 0 && !seen[arc.to]) {
                        seen[arc.to] = true;
                        parent_arc[arc.to] = id;
                        frontier.push(arc.to);
                    }
                }
            }
            if (!seen[sink]) break;
            int push = limit - total;
            for (auto v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to)
                push = std::min(push, arcs_[parent_arc[v]].capacity);
            for (auto v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to) {
                arcs_[parent_arc[v]].capacity -= push;
                arcs_[parent_arc[v] ^ 1].capacity += push;
            }
            total += push;
        }
        return total;
    }

private:
    struct Arc {
        std::size_t to;
        int capacity;
    };
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
};

/// Maximum bipartite matching (augmenting paths). `adjacency[l]` lists right vertices of left vertex l.
/// Only left vertices with `active[l]` participate; an empty `active` means all.
inline std::size_t max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adjacency,
                                          std::size_t right_count, const std::vector<bool>& active = {}) {
    std::vector<std::size_t> match_right(right_count, SIZE_MAX);
    std::size_t size = 0;
    std::vector<bool> visited;
    auto augment = [&](auto&& self, std::size_t l) -> bool {
        for (auto r : adjacency[l]) {
            if (visited[r]) continue;
            visited[r] = true;
            if (match_right[r] == SIZE_MAX || self(self, match_right[r])) {
                match_right[r] = l;
                return true;
            }
        }
        return false;
    };
    for (std::size_t l = 0; l < adjacency.size(); ++l) {
        if (!active.empty() && !active[l]) continue;
        visited.assign(right_count, false);
        if (augment(augment, l)) ++size;
    }
    return size;
}

}  // namespace netcode
