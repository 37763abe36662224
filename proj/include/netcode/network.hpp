#pragma once

// Acyclic multicast networks: unit-capacity links, a single source with omega
// imaginary input links, and an ordered receiver list.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netcode/error.hpp"
#include "netcode/flow.hpp"

namespace netcode {

/// Reserved prefix of generated imaginary link ids ("$imag1", "$imag2", ...).
inline constexpr std::string_view kImaginaryPrefix = "$imag";

struct Link {
    std::string id;
    std::optional<std::string> tail;  // nullopt marks an imaginary source input
    std::string head;

    [[nodiscard]] bool imaginary() const noexcept { return !tail.has_value(); }
    friend bool operator==(const Link&, const Link&) = default;
};

class MulticastNetwork {
public:
    /// Builds and validates a network. `links` are the real links in document order;
    /// the imaginary links are generated and placed first.
    static MulticastNetwork create(std::size_t dimension, std::vector<std::string> nodes, std::vector<Link> links,
                                   std::string source, std::vector<std::string> receivers) {
        MulticastNetwork n;
        if (dimension == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
        n.dimension_ = dimension;
        n.nodes_ = std::move(nodes);
        for (std::size_t i = 0; i < n.nodes_.size(); ++i) {
            if (n.nodes_[i].empty()) throw Error(ErrorCode::InvalidArgument, "empty node id");
            if (!n.node_lookup_.emplace(n.nodes_[i], i).second)
                throw Error(ErrorCode::InvalidArgument, "duplicate node '" + n.nodes_[i] + "'");
        }
        auto lookup_node = [&](const std::string& id, const char* what) {
            auto it = n.node_lookup_.find(id);
            if (it == n.node_lookup_.end())
                throw Error(ErrorCode::DanglingReference, std::string(what) + " '" + id + "'");
            return it->second;
        };
        n.source_ = lookup_node(source, "source");
        if (receivers.empty()) throw Error(ErrorCode::InvalidArgument, "no receivers");
        for (const auto& r : receivers) {
            const auto idx = lookup_node(r, "receiver");
            if (idx == n.source_) throw Error(ErrorCode::InvalidArgument, "receiver equals source");
            if (std::find(n.receivers_.begin(), n.receivers_.end(), idx) != n.receivers_.end())
                throw Error(ErrorCode::InvalidArgument, "duplicate receiver '" + r + "'");
            n.receivers_.push_back(idx);
        }

        for (std::size_t i = 1; i <= dimension; ++i)
            n.links_.push_back({std::string(kImaginaryPrefix) + std::to_string(i), std::nullopt, source});
        for (auto& l : links) {
            if (l.imaginary()) throw Error(ErrorCode::InvalidArgument, "link '" + l.id + "' has no tail");
            if (l.id.empty()) throw Error(ErrorCode::InvalidArgument, "empty link id");
            if (l.id.starts_with(kImaginaryPrefix))
                throw Error(ErrorCode::InvalidArgument, "link id '" + l.id + "' uses the reserved imaginary prefix");
            n.links_.push_back(std::move(l));
        }

        n.in_.assign(n.nodes_.size(), {});
        n.out_.assign(n.nodes_.size(), {});
        for (std::size_t i = 0; i < n.links_.size(); ++i) {
            const auto& l = n.links_[i];
            if (!n.link_lookup_.emplace(l.id, i).second) throw Error(ErrorCode::DuplicateLink, l.id);
            const auto head = lookup_node(l.head, "head of link");
            std::optional<std::size_t> tail;
            if (l.tail) {
                tail = lookup_node(*l.tail, "tail of link");
                if (head == n.source_)
                    throw Error(ErrorCode::InvalidArgument, "link '" + l.id + "' enters the source");
                n.out_[*tail].push_back(i);
            }
            n.in_[head].push_back(i);
            n.tail_.push_back(tail);
            n.head_.push_back(head);
        }
        n.topo_ = n.compute_topological_order();
        for (std::size_t e = 0; e < n.links_.size(); ++e) {
            if (!n.tail_[e]) continue;
            for (auto d : n.in_[*n.tail_[e]]) n.pairs_.emplace_back(d, e);
        }
        std::sort(n.pairs_.begin(), n.pairs_.end());
        return n;
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }
    [[nodiscard]] std::size_t source() const noexcept { return source_; }
    [[nodiscard]] const std::string& source_id() const { return nodes_[source_]; }
    [[nodiscard]] const std::vector<std::size_t>& receivers() const noexcept { return receivers_; }

    [[nodiscard]] std::vector<std::string> receiver_ids() const {
        std::vector<std::string> out;
        for (auto r : receivers_) out.push_back(nodes_[r]);
        return out;
    }

    [[nodiscard]] std::size_t node_index(std::string_view id) const {
        auto it = node_lookup_.find(std::string(id));
        if (it == node_lookup_.end()) throw Error(ErrorCode::UnknownNode, std::string(id));
        return it->second;
    }
    [[nodiscard]] bool has_node(std::string_view id) const { return node_lookup_.contains(std::string(id)); }

    [[nodiscard]] std::size_t link_index(std::string_view id) const {
        auto it = link_lookup_.find(std::string(id));
        if (it == link_lookup_.end()) throw Error(ErrorCode::InvalidArgument, "unknown link '" + std::string(id) + "'");
        return it->second;
    }
    [[nodiscard]] bool has_link(std::string_view id) const { return link_lookup_.contains(std::string(id)); }

    [[nodiscard]] bool is_imaginary(std::size_t link) const { return !tail_[link].has_value(); }
    [[nodiscard]] std::optional<std::size_t> tail(std::size_t link) const { return tail_[link]; }
    [[nodiscard]] std::size_t head(std::size_t link) const { return head_[link]; }
    [[nodiscard]] const std::vector<std::size_t>& in_links(std::size_t node) const { return in_[node]; }
    [[nodiscard]] const std::vector<std::size_t>& out_links(std::size_t node) const { return out_[node]; }

    /// Imaginary links occupy indices [0, dimension).
    [[nodiscard]] std::vector<std::size_t> imaginary_links() const {
        std::vector<std::size_t> out(dimension_);
        for (std::size_t i = 0; i < dimension_; ++i) out[i] = i;
        return out;
    }
    [[nodiscard]] std::vector<std::size_t> real_links() const {
        std::vector<std::size_t> out;
        for (std::size_t i = dimension_; i < links_.size(); ++i) out.push_back(i);
        return out;
    }

    [[nodiscard]] const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

    /// Adjacent pairs (d, e) with d in In(t), e in Out(t), sorted by (d, e) link index.
    [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& adjacent_pairs() const noexcept {
        return pairs_;
    }

    /// Links ordered so every link follows all links entering its tail node.
    [[nodiscard]] std::vector<std::size_t> links_upstream_first() const {
        std::vector<std::size_t> order = imaginary_links();
        for (auto node : topo_)
            for (auto e : out_[node]) order.push_back(e);
        return order;
    }

    friend bool operator==(const MulticastNetwork& a, const MulticastNetwork& b) {
        return a.dimension_ == b.dimension_ && a.nodes_ == b.nodes_ && a.links_ == b.links_ &&
               a.source_ == b.source_ && a.receivers_ == b.receivers_;
    }

private:
    MulticastNetwork() = default;

    std::vector<std::size_t> compute_topological_order() const {
        std::vector<std::size_t> indegree(nodes_.size(), 0);
        for (std::size_t e = 0; e < links_.size(); ++e)
            if (tail_[e]) ++indegree[head_[e]];
        // Smallest ready node first keeps the order deterministic.
        std::set<std::size_t> ready;
        for (std::size_t v = 0; v < nodes_.size(); ++v)
            if (indegree[v] == 0) ready.insert(v);
        std::vector<std::size_t> order;
        while (!ready.empty()) {
            const auto v = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(v);
            for (auto e : out_[v])
                if (--indegree[head_[e]] == 0) ready.insert(head_[e]);
        }
        if (order.size() != nodes_.size()) {
            std::string culprit;
            for (std::size_t v = 0; v < nodes_.size(); ++v)
                if (indegree[v] > 0) {
                    culprit = nodes_[v];
                    break;
                }
            throw Error(ErrorCode::CycleDetected, "through node '" + culprit + "'");
        }
        return order;
    }

    std::size_t dimension_ = 0;
    std::vector<std::string> nodes_;
    std::vector<Link> links_;
    std::size_t source_ = 0;
    std::vector<std::size_t> receivers_;
    std::unordered_map<std::string, std::size_t> node_lookup_;
    std::unordered_map<std::string, std::size_t> link_lookup_;
    std::vector<std::optional<std::size_t>> tail_;
    std::vector<std::size_t> head_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::size_t> topo_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// omega edge-disjoint paths to one receiver. Each path is a sequence of link indices
/// starting at an imaginary link (path i starts at imaginary link i) and ending in In(receiver).
struct PathSet {
    std::size_t receiver = 0;
    std::vector<std::vector<std::size_t>> paths;

    /// Real links used by the paths (the set E_i), ascending by link index.
    [[nodiscard]] std::vector<std::size_t> edge_union(const MulticastNetwork& n) const {
        std::vector<std::size_t> out;
        for (const auto& p : paths)
            for (auto e : p)
                if (!n.is_imaginary(e)) out.push_back(e);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// The first real link of every path (the source cut e_1, ..., e_omega), in path order.
    [[nodiscard]] std::vector<std::size_t> source_cut(const MulticastNetwork& n) const {
        std::vector<std::size_t> out;
        for (const auto& p : paths)
            for (auto e : p)
                if (!n.is_imaginary(e)) {
                    out.push_back(e);
                    break;
                }
        return out;
    }
};

namespace detail {

// Flow graph whose node i is network node i plus a virtual super source at index nodes().size().
// Arc handles are returned per link; links listed in `removed` are left out.
struct NetworkFlow {
    FlowGraph graph;
    std::size_t super_source;
    std::vector<std::size_t> arc_of_link;

    NetworkFlow(const MulticastNetwork& n, int source_supply, const std::vector<bool>& removed)
        : graph(n.nodes().size() + 1), super_source(n.nodes().size()), arc_of_link(n.links().size(), SIZE_MAX) {
        for (std::size_t e = n.dimension(); e < n.links().size(); ++e) {
            if (!removed.empty() && removed[e]) continue;
            arc_of_link[e] = graph.add_arc(*n.tail(e), n.head(e), 1);
        }
        if (source_supply > 0) graph.add_arc(super_source, n.source(), source_supply);
    }
};

}  // namespace detail

/// Maximum number of edge-disjoint paths from the imaginary links into In(t).
inline std::size_t maxflow(const MulticastNetwork& n, std::size_t t) {
    if (t == n.source()) throw Error(ErrorCode::InvalidArgument, "maxflow of the source is undefined");
    detail::NetworkFlow flow(n, static_cast<int>(n.dimension()), {});
    return static_cast<std::size_t>(flow.graph.max_flow(flow.super_source, t));
}

inline std::size_t maxflow(const MulticastNetwork& n, std::string_view node) { return maxflow(n, n.node_index(node)); }

/// Non-source nodes whose maxflow reaches the dimension; the nodes a linear multicast must serve.
inline std::vector<std::size_t> full_flow_nodes(const MulticastNetwork& n) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n.nodes().size(); ++v)
        if (v != n.source() && maxflow(n, v) >= n.dimension()) out.push_back(v);
    return out;
}

/// omega edge-disjoint paths to t, lexicographically smallest (by link index sequence,
/// path 1 first) among all choices. Throws MaxflowDeficit when maxflow(t) < omega.
inline PathSet edge_disjoint_paths(const MulticastNetwork& n, std::size_t t) {
    const std::size_t omega = n.dimension();
    const std::size_t flow = maxflow(n, t);
    if (flow < omega)
        throw Error(ErrorCode::MaxflowDeficit,
                    "node '" + n.nodes()[t] + "' has maxflow " + std::to_string(flow) + " < " + std::to_string(omega));

    std::vector<bool> used(n.links().size(), false);
    PathSet result;
    result.receiver = t;

    // With `current` as the head of the partial path i, can the remaining demand still be met?
    auto feasible = [&](std::size_t path_index, std::size_t current) {
        const int others = static_cast<int>(omega - path_index - 1);
        detail::NetworkFlow f(n, others, used);
        const std::size_t injector = f.graph.add_node();
        f.graph.add_arc(injector, f.super_source, others);
        f.graph.add_arc(injector, current, 1);
        return f.graph.max_flow(injector, t) == others + 1;
    };

    for (std::size_t i = 0; i < omega; ++i) {
        std::vector<std::size_t> path{i};
        std::size_t current = n.source();
        while (current != t) {
            bool advanced = false;
            for (auto e : n.out_links(current)) {
                if (used[e]) continue;
                used[e] = true;
                if (feasible(i, n.head(e))) {
                    path.push_back(e);
                    current = n.head(e);
                    advanced = true;
                    break;
                }
                used[e] = false;
            }
            if (!advanced) throw Error(ErrorCode::MaxflowDeficit, "path extraction stalled at '" + n.nodes()[current] + "'");
        }
        result.paths.push_back(std::move(path));
    }
    return result;
}

inline PathSet edge_disjoint_paths(const MulticastNetwork& n, std::string_view node) {
    return edge_disjoint_paths(n, n.node_index(node));
}

/// One PathSet per receiver, in receiver order.
inline std::vector<PathSet> receiver_paths(const MulticastNetwork& n) {
    std::vector<PathSet> out;
    for (auto r : n.receivers()) out.push_back(edge_disjoint_paths(n, r));
    return out;
}

/// When |Out(s)| > omega, moves the imaginary links onto a new super source s' joined to s
/// by omega real links; otherwise returns the network unchanged.
inline MulticastNetwork augment_super_source(const MulticastNetwork& n) {
    const std::size_t omega = n.dimension();
    if (n.out_links(n.source()).size() <= omega) return n;

    std::string super = n.source_id() + "'";
    while (n.has_node(super)) super += "'";
    std::vector<std::string> nodes{super};
    nodes.insert(nodes.end(), n.nodes().begin(), n.nodes().end());

    std::vector<Link> links;
    for (std::size_t i = 1; i <= omega; ++i) {
        std::string id = super + std::to_string(i);
        while (n.has_link(id)) id += "_";
        links.push_back({id, super, n.source_id()});
    }
    for (auto e : n.real_links()) links.push_back(n.links()[e]);
    return MulticastNetwork::create(omega, std::move(nodes), std::move(links), super, n.receiver_ids());
}

}  // namespace netcode
