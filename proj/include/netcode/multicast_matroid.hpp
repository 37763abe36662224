#pragma once

// Per-receiver strict gammoids built from edge-disjoint path systems, and the multicast
// matroid obtained from the first receiver's gammoid by successive parallel extensions.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "netcode/code.hpp"
#include "netcode/error.hpp"
#include "netcode/flow.hpp"
#include "netcode/matroid.hpp"
#include "netcode/network.hpp"

namespace netcode {

/// Bipartite graph H(S, T, E) of one receiver's path system. S holds every real path link, T the
/// path links other than the source cut, and E the self pairs (e, e^) plus (e, succ(e)^) along paths.
struct ReceiverBipartite {
    std::size_t receiver = 0;
    std::vector<std::size_t> S;                              // link indices, ascending
    std::vector<std::size_t> T;                              // link indices, ascending
    std::vector<std::pair<std::size_t, std::size_t>> E;      // (link in S, link in T)
};

namespace detail {

// Real-link successor along the receiver's paths: link -> (path index, next link).
inline std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> path_successors(
    const MulticastNetwork& n, const PathSet& paths) {
    std::unordered_map<std::size_t, std::pair<std::size_t, std::size_t>> succ;
    for (std::size_t p = 0; p < paths.paths.size(); ++p) {
        const auto& path = paths.paths[p];
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
            if (!n.is_imaginary(path[k])) succ[path[k]] = {p, path[k + 1]};
    }
    return succ;
}

inline void check_path_set(const MulticastNetwork& n, const PathSet& paths) {
    if (paths.paths.size() != n.dimension())
        throw Error(ErrorCode::InvalidArgument, "path set must hold one path per source symbol");
    std::unordered_set<std::size_t> seen;
    for (const auto& p : paths.paths) {
        if (p.size() < 2 || !n.is_imaginary(p.front()) || n.head(p.back()) != paths.receiver)
            throw Error(ErrorCode::InvalidArgument, "path does not lead from an imaginary link to the receiver");
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!seen.insert(p[k]).second) throw Error(ErrorCode::InvalidArgument, "paths are not edge-disjoint");
            if (k > 0 && n.tail(p[k]) != n.head(p[k - 1]))
                throw Error(ErrorCode::InvalidArgument, "consecutive path links are not adjacent");
        }
    }
}

}  // namespace detail

inline ReceiverBipartite build_bipartite_H(const MulticastNetwork& n, const PathSet& paths) {
    detail::check_path_set(n, paths);
    ReceiverBipartite h;
    h.receiver = paths.receiver;
    h.S = paths.edge_union(n);
    const auto cut = paths.source_cut(n);
    for (auto e : h.S)
        if (std::find(cut.begin(), cut.end(), e) == cut.end()) h.T.push_back(e);
    for (auto e : h.T) h.E.emplace_back(e, e);
    for (const auto& [e, next] : detail::path_successors(n, paths)) h.E.emplace_back(e, next.second);
    std::sort(h.E.begin(), h.E.end());
    return h;
}

/// Ground-labelled matroid on E_i whose bases are the omega-sets reachable from the source by
/// edge-disjoint paths: the dual of the transversal matroid of H.
inline Matroid receiver_gammoid(const MulticastNetwork& n, const PathSet& paths) {
    const auto h = build_bipartite_H(n, paths);
    BipartiteSystem sys;
    std::unordered_map<std::size_t, std::size_t> s_index;
    for (auto e : h.S) {
        s_index[e] = sys.left.size();
        sys.left.push_back(n.links()[e].id);
    }
    std::unordered_map<std::size_t, std::size_t> t_index;
    for (auto e : h.T) {
        t_index[e] = sys.family.size();
        sys.family.emplace_back();
    }
    for (const auto& [s, t] : h.E) sys.family[t_index.at(t)].push_back(s_index.at(s));
    return dual(transversal_matroid(sys));
}

/// Direct check that the links in X (indices into the network, all in E_i) are reached by |X|
/// edge-disjoint paths from the source through the receiver's path system. Each link of X absorbs
/// one unit of flow and forwards nothing.
inline bool gammoid_direct_oracle(const MulticastNetwork& n, const PathSet& paths, const std::vector<std::size_t>& x) {
    const auto edges = paths.edge_union(n);
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < edges.size(); ++i) local[edges[i]] = i;
    std::vector<bool> in_x(edges.size(), false);
    for (auto e : x) {
        auto it = local.find(e);
        if (it == local.end()) throw Error(ErrorCode::InvalidArgument, "link outside the receiver's path edges");
        in_x[it->second] = true;
    }
    const std::size_t m = edges.size();
    const std::size_t source = 2 * m;
    const std::size_t sink = 2 * m + 1;
    FlowGraph g(2 * m + 2);
    for (std::size_t i = 0; i < m; ++i) {
        g.add_arc(2 * i, 2 * i + 1, 1);
        if (in_x[i]) g.add_arc(2 * i + 1, sink, 1);
    }
    for (auto e : paths.source_cut(n)) g.add_arc(source, 2 * local.at(e), 1);
    for (const auto& [e, next] : detail::path_successors(n, paths)) {
        const auto a = local.at(e);
        if (!in_x[a]) g.add_arc(2 * a + 1, 2 * local.at(next.second), 1);
    }
    const auto count = static_cast<std::size_t>(std::count(in_x.begin(), in_x.end(), true));
    return static_cast<std::size_t>(g.max_flow(source, sink)) == count;
}

/// One basis-generating move: receiver j's path `path` carries `removed` into `added`.
struct ExtensionStep {
    std::size_t receiver = 0;  // position in the receiver list
    std::size_t path = 0;
    std::string removed;
    std::string added;
    ElementSet from;
    ElementSet to;
};

struct MulticastMatroid {
    Matroid matroid;                     // ground: real links in network order
    std::vector<ExtensionStep> provenance;
    std::vector<ElementSet> surplus;     // bases not belonging to any receiver gammoid
};

/// Starts from the first receiver's gammoid bases and, for each later receiver in order, closes the
/// family under the moves (B - e) + succ(e) where succ(e) follows e on one of that receiver's paths.
/// Links touched by no move are loops.
inline MulticastMatroid build_multicast_matroid(const MulticastNetwork& n, const std::vector<PathSet>& all_paths,
                                                const EnumerationBudget& budget = {}) {
    if (all_paths.size() != n.receivers().size())
        throw Error(ErrorCode::InvalidArgument, "inconsistent receiver order: one path set per receiver required");
    for (std::size_t i = 0; i < all_paths.size(); ++i)
        if (all_paths[i].receiver != n.receivers()[i])
            throw Error(ErrorCode::InvalidArgument, "inconsistent receiver order at position " + std::to_string(i));

    const auto real = n.real_links();
    if (real.size() > 64) throw Error(ErrorCode::BudgetExceeded, "more than 64 links");
    std::vector<std::string> ground;
    for (auto e : real) ground.push_back(n.links()[e].id);
    auto ground_of = [&](std::size_t link) { return link - n.dimension(); };

    auto gammoid_masks = [&](const PathSet& paths) {
        const Matroid g = receiver_gammoid(n, paths);
        std::vector<std::uint64_t> out;
        for (const auto& b : g.bases(budget)) {
            std::uint64_t m = 0;
            for (auto e : b) m |= std::uint64_t{1} << ground_of(n.link_index(g.label(e)));
            out.push_back(m);
        }
        return out;
    };

    std::vector<std::uint64_t> family = gammoid_masks(all_paths.front());
    std::unordered_set<std::uint64_t> seen(family.begin(), family.end());
    std::vector<ExtensionStep> provenance;

    for (std::size_t j = 1; j < all_paths.size(); ++j) {
        const auto succ = detail::path_successors(n, all_paths[j]);
        std::deque<std::uint64_t> work(family.begin(), family.end());
        while (!work.empty()) {
            const std::uint64_t b = work.front();
            work.pop_front();
            for (auto e : Matroid::from_mask(b)) {
                auto it = succ.find(e + n.dimension());
                if (it == succ.end()) continue;
                const std::uint64_t y = std::uint64_t{1} << ground_of(it->second.second);
                if (b & y) continue;
                const std::uint64_t next = (b & ~(std::uint64_t{1} << e)) | y;
                if (!seen.insert(next).second) continue;
                if (seen.size() > budget.max_bases)
                    throw Error(ErrorCode::BudgetExceeded, "multicast matroid exceeds " +
                                                               std::to_string(budget.max_bases) + " bases");
                family.push_back(next);
                work.push_back(next);
                provenance.push_back({j, it->second.first, ground[e], ground[ground_of(it->second.second)],
                                      Matroid::from_mask(b), Matroid::from_mask(next)});
            }
        }
    }

    std::unordered_set<std::uint64_t> receiver_family;
    for (const auto& p : all_paths)
        for (auto m : gammoid_masks(p)) receiver_family.insert(m);
    std::sort(family.begin(), family.end(),
              [](std::uint64_t a, std::uint64_t b) { return Matroid::from_mask(a) < Matroid::from_mask(b); });
    std::vector<ElementSet> bases;
    std::vector<ElementSet> surplus;
    for (auto m : family) {
        bases.push_back(Matroid::from_mask(m));
        if (!receiver_family.contains(m)) surplus.push_back(bases.back());
    }
    return {Matroid::from_bases(std::move(ground), std::move(bases)), std::move(provenance), std::move(surplus)};
}

struct RepresentationVerdict {
    bool ok = true;
    std::optional<std::vector<std::string>> witness;  // a basis whose kernels are dependent
    explicit operator bool() const noexcept { return ok; }
};

/// Every basis of `gammoid` (labelled by link ids) must map to linearly independent kernel columns.
inline RepresentationVerdict verify_representation(const LinearCode& code, const Matroid& gammoid,
                                                   const EnumerationBudget& budget = {}) {
    const auto& n = code.network();
    std::vector<std::size_t> column(gammoid.size());
    for (std::size_t i = 0; i < gammoid.size(); ++i) column[i] = n.link_index(gammoid.label(i));
    for (const auto& b : gammoid.bases(budget)) {
        std::vector<std::size_t> cols;
        for (auto e : b) cols.push_back(column[e]);
        if (code.global().matrix.column_rank(cols) != cols.size()) return {false, gammoid.labels(b)};
    }
    return {};
}

inline bool is_multicast_matroid_base_orderable(const MulticastMatroid& mm, const EnumerationBudget& budget = {}) {
    return is_base_orderable(mm.matroid, budget).ok;
}

}  // namespace netcode
