#pragma once

// Scalar linear network codes: local kernels k_{d,e}, the global kernels f_e they
// induce, multicast verification, and code construction.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "netcode/error.hpp"
#include "netcode/field.hpp"
#include "netcode/linalg.hpp"
#include "netcode/matroid.hpp"
#include "netcode/network.hpp"

namespace netcode {

/// One value per adjacent pair, aligned with `MulticastNetwork::adjacent_pairs()`.
struct LocalKernels {
    Field field;
    std::vector<Field::Value> values;

    static LocalKernels zeros(const MulticastNetwork& n, Field field) {
        return {std::move(field), std::vector<Field::Value>(n.adjacent_pairs().size(), 0)};
    }
    static LocalKernels constant(const MulticastNetwork& n, Field field, Field::Value v) {
        return {std::move(field), std::vector<Field::Value>(n.adjacent_pairs().size(), v)};
    }

    friend bool operator==(const LocalKernels& a, const LocalKernels& b) {
        return a.field == b.field && a.values == b.values;
    }
};

/// omega x |links| matrix; column e is f_e, columns in network link order.
struct GlobalKernelMatrix {
    FieldMatrix matrix;
    std::vector<std::string> labels;

    [[nodiscard]] const Field& field() const { return matrix.field(); }
    friend bool operator==(const GlobalKernelMatrix&, const GlobalKernelMatrix&) = default;
};

inline std::vector<std::string> link_labels(const MulticastNetwork& n) {
    std::vector<std::string> out;
    for (const auto& l : n.links()) out.push_back(l.id);
    return out;
}

/// Applies f_e = sum_{d in In(t)} k_{d,e} f_d with the imaginary links as the standard basis,
/// visiting links in `link_order` (must list every link after all links entering its tail).
inline GlobalKernelMatrix compute_global_kernels(const MulticastNetwork& n, const LocalKernels& local,
                                                 const std::vector<std::size_t>& link_order) {
    if (local.values.size() != n.adjacent_pairs().size())
        throw Error(ErrorCode::InvalidArgument, "local kernel count does not match adjacent pairs");
    const Field& f = local.field;
    const std::size_t omega = n.dimension();
    FieldMatrix g(f, omega, n.links().size());
    std::vector<std::vector<std::pair<std::size_t, Field::Value>>> incoming(n.links().size());
    for (std::size_t i = 0; i < n.adjacent_pairs().size(); ++i) {
        const auto [d, e] = n.adjacent_pairs()[i];
        if (!f.contains(local.values[i])) throw Error(ErrorCode::InvalidArgument, "kernel value outside field");
        if (local.values[i] != 0) incoming[e].emplace_back(d, local.values[i]);
    }
    std::vector<bool> done(n.links().size(), false);
    for (auto e : link_order) {
        if (n.is_imaginary(e)) {
            g(e, e) = f.one();
        } else {
            for (auto [d, k] : incoming[e]) {
                if (!done[d]) throw Error(ErrorCode::InvalidArgument, "link order is not upstream-to-downstream");
                for (std::size_t r = 0; r < omega; ++r) g(r, e) = f.add(g(r, e), f.mul(k, g(r, d)));
            }
        }
        done[e] = true;
    }
    if (std::find(done.begin(), done.end(), false) != done.end())
        throw Error(ErrorCode::InvalidArgument, "link order omits links");
    return {std::move(g), link_labels(n)};
}

inline GlobalKernelMatrix compute_global_kernels(const MulticastNetwork& n, const LocalKernels& local) {
    return compute_global_kernels(n, local, n.links_upstream_first());
}

class LinearCode {
public:
    LinearCode(std::shared_ptr<const MulticastNetwork> network, LocalKernels local)
        : network_(std::move(network)), local_(std::move(local)), global_(compute_global_kernels(*network_, local_)) {}

    LinearCode(const MulticastNetwork& network, LocalKernels local)
        : LinearCode(std::make_shared<const MulticastNetwork>(network), std::move(local)) {}

    [[nodiscard]] const MulticastNetwork& network() const noexcept { return *network_; }
    [[nodiscard]] const std::shared_ptr<const MulticastNetwork>& network_ptr() const noexcept { return network_; }
    [[nodiscard]] const LocalKernels& local() const noexcept { return local_; }
    [[nodiscard]] const GlobalKernelMatrix& global() const noexcept { return global_; }
    [[nodiscard]] const Field& field() const noexcept { return local_.field; }

    /// k_{d,e} for the adjacent pair (d, e); zero when (d, e) is not adjacent.
    [[nodiscard]] Field::Value kernel(std::size_t d, std::size_t e) const {
        const auto& pairs = network_->adjacent_pairs();
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(d, e));
        if (it == pairs.end() || *it != std::make_pair(d, e)) return 0;
        return local_.values[static_cast<std::size_t>(it - pairs.begin())];
    }

private:
    std::shared_ptr<const MulticastNetwork> network_;
    LocalKernels local_;
    GlobalKernelMatrix global_;
};

/// dim V_t: rank of the global kernels entering t.
inline std::size_t subspace_dim(const LinearCode& code, std::size_t t) {
    const auto& n = code.network();
    if (t >= n.nodes().size()) throw Error(ErrorCode::UnknownNode, std::to_string(t));
    if (t == n.source()) throw Error(ErrorCode::InvalidArgument, "subspace of the source");
    return code.global().matrix.column_rank(n.in_links(t));
}

inline std::size_t subspace_dim(const LinearCode& code, std::string_view node) {
    return subspace_dim(code, code.network().node_index(node));
}

struct MulticastVerdict {
    bool ok = true;
    std::vector<std::string> failing;  // node ids with dim V_t < omega
    explicit operator bool() const noexcept { return ok; }
};

/// Checks dim V_t = omega at each of `targets` (normally `full_flow_nodes`).
inline MulticastVerdict verify_multicast(const LinearCode& code, const std::vector<std::size_t>& targets) {
    MulticastVerdict verdict;
    const auto& n = code.network();
    for (auto t : targets)
        if (subspace_dim(code, t) < n.dimension()) {
            verdict.ok = false;
            verdict.failing.push_back(n.nodes()[t]);
        }
    return verdict;
}

/// Linear multicast check over every non-source node with maxflow >= omega.
inline MulticastVerdict verify_multicast(const LinearCode& code) {
    return verify_multicast(code, full_flow_nodes(code.network()));
}

/// Whether every non-imaginary column lies in the span of its tail node's input columns and the
/// imaginary columns are the standard basis.
inline bool is_realizable(const MulticastNetwork& n, const GlobalKernelMatrix& g) {
    const auto& m = g.matrix;
    if (m.rows() != n.dimension() || m.cols() != n.links().size()) return false;
    for (std::size_t e = 0; e < n.dimension(); ++e)
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (m(r, e) != (r == e ? 1u : 0u)) return false;
    for (auto e : n.real_links()) {
        const auto column = m.column(e);
        if (!is_consistent(m.select_columns(n.in_links(*n.tail(e))), column)) return false;
    }
    return true;
}

/// Recovers local kernels for prescribed global kernels, solving f_e = sum k_{d,e} f_d node by node and taking
/// the lexicographically smallest solution per link. Throws RecoveryInfeasible naming the node.
inline LocalKernels recover_local_kernels(const MulticastNetwork& n, const GlobalKernelMatrix& g) {
    const Field& f = g.field();
    const auto& m = g.matrix;
    if (m.rows() != n.dimension() || m.cols() != n.links().size())
        throw Error(ErrorCode::InvalidArgument, "global kernel matrix shape does not match network");
    for (std::size_t e = 0; e < n.dimension(); ++e)
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (m(r, e) != (r == e ? 1u : 0u))
                throw Error(ErrorCode::RecoveryInfeasible, "imaginary columns are not the standard basis at '" +
                                                               n.source_id() + "'");
    LocalKernels local = LocalKernels::zeros(n, f);
    const auto& pairs = n.adjacent_pairs();
    for (auto node : n.topological_order()) {
        const auto& inputs = n.in_links(node);
        const FieldMatrix a = m.select_columns(inputs);
        for (auto e : n.out_links(node)) {
            const auto column = m.column(e);
            auto solution = solve_lexicographic(a, column);
            if (!solution)
                throw Error(ErrorCode::RecoveryInfeasible,
                            "node '" + n.nodes()[node] + "' cannot produce link '" + n.links()[e].id + "'");
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(inputs[i], e));
                local.values[static_cast<std::size_t>(it - pairs.begin())] = (*solution)[i];
            }
        }
    }
    return local;
}

struct SearchStatistics {
    std::uint64_t assignments_tried = 0;
    std::uint64_t search_space = 0;
};

/// Exhaustive search for the lexicographically first local-kernel assignment (pairs in adjacent-pair
/// order, first pair most significant) that is a linear multicast. Returns nullopt if none exists.
inline std::optional<LinearCode> brute_force_solve(const MulticastNetwork& n, const Field& field,
                                                   double budget_bits = 24.0, SearchStatistics* stats = nullptr) {
    const std::size_t pairs = n.adjacent_pairs().size();
    const double bits = static_cast<double>(pairs) * std::log2(static_cast<double>(field.order()));
    if (bits > budget_bits + 1e-9)
        throw Error(ErrorCode::BudgetExceeded, std::to_string(pairs) + " adjacent pairs over GF(" + field.to_string() +
                                                   ") need " + std::to_string(bits) + " bits");
    auto network = std::make_shared<const MulticastNetwork>(n);
    const auto targets = full_flow_nodes(n);
    const auto order = n.links_upstream_first();
    const std::size_t omega = n.dimension();
    const std::uint32_t q = field.order();

    SearchStatistics local_stats;
    local_stats.search_space = 1;
    for (std::size_t i = 0; i < pairs; ++i) local_stats.search_space *= q;

    LocalKernels kernels = LocalKernels::zeros(n, field);
    while (true) {
        ++local_stats.assignments_tried;
        const auto g = compute_global_kernels(n, kernels, order);
        bool ok = true;
        for (auto t : targets)
            if (g.matrix.column_rank(n.in_links(t)) < omega) {
                ok = false;
                break;
            }
        if (ok) {
            if (stats) *stats = local_stats;
            return LinearCode(network, kernels);
        }
        // Odometer: the last pair varies fastest.
        std::size_t i = pairs;
        while (i > 0) {
            --i;
            if (++kernels.values[i] < q) break;
            kernels.values[i] = 0;
            if (i == 0) {
                if (stats) *stats = local_stats;
                return std::nullopt;
            }
        }
        if (pairs == 0) {
            if (stats) *stats = local_stats;
            return std::nullopt;
        }
    }
}

/// Deterministic Jaggi-Sanders style construction. Every non-source node with maxflow >= omega is
/// served (receivers first); per link, the lexicographically first coefficient vector over its path
/// predecessors that keeps every affected frontier invertible is taken.
inline LinearCode jaggi_sanders_construct(const MulticastNetwork& n, const Field& field) {
    const std::size_t omega = n.dimension();
    if (field.order() <= n.receivers().size())
        throw Error(ErrorCode::FieldTooSmall, "GF(" + field.to_string() + ") with " +
                                                  std::to_string(n.receivers().size()) + " receivers needs q > |T|");
    std::vector<std::size_t> sinks = n.receivers();
    for (auto v : full_flow_nodes(n))
        if (std::find(sinks.begin(), sinks.end(), v) == sinks.end()) sinks.push_back(v);

    std::vector<PathSet> paths;
    for (auto t : sinks) paths.push_back(edge_disjoint_paths(n, t));

    // uses[e] = (sink, path, predecessor link) for every path through e
    struct Use {
        std::size_t sink, path, pred;
    };
    std::vector<std::vector<Use>> uses(n.links().size());
    for (std::size_t s = 0; s < paths.size(); ++s)
        for (std::size_t j = 0; j < omega; ++j) {
            const auto& p = paths[s].paths[j];
            for (std::size_t k = 1; k < p.size(); ++k) uses[p[k]].push_back({s, j, p[k - 1]});
        }

    FieldMatrix g(field, omega, n.links().size());
    for (std::size_t i = 0; i < omega; ++i) g(i, i) = field.one();
    std::vector<std::vector<std::size_t>> frontier(sinks.size(), n.imaginary_links());
    LocalKernels local = LocalKernels::zeros(n, field);
    const auto& pairs = n.adjacent_pairs();

    for (auto e : n.links_upstream_first()) {
        if (n.is_imaginary(e) || uses[e].empty()) continue;
        std::vector<std::size_t> preds;
        for (const auto& u : uses[e])
            if (std::find(preds.begin(), preds.end(), u.pred) == preds.end()) preds.push_back(u.pred);
        std::sort(preds.begin(), preds.end());

        std::vector<Field::Value> coeffs(preds.size(), 0);
        bool found = false;
        while (true) {
            // advance odometer (skips the all-zero vector on first step)
            std::size_t i = coeffs.size();
            bool wrapped = true;
            while (i > 0) {
                --i;
                if (++coeffs[i] < field.order()) {
                    wrapped = false;
                    break;
                }
                coeffs[i] = 0;
            }
            if (wrapped) break;
            std::vector<Field::Value> fe(omega, 0);
            for (std::size_t k = 0; k < preds.size(); ++k)
                for (std::size_t r = 0; r < omega; ++r) fe[r] = field.add(fe[r], field.mul(coeffs[k], g(r, preds[k])));
            bool ok = true;
            for (const auto& u : uses[e]) {
                FieldMatrix c = g.select_columns(frontier[u.sink]);
                c.set_column(u.path, fe);
                if (c.rank() < omega) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                g.set_column(e, fe);
                found = true;
                break;
            }
        }
        if (!found)
            throw Error(ErrorCode::FieldTooSmall,
                        "no admissible coefficients for link '" + n.links()[e].id + "' over GF(" + field.to_string() + ")");
        for (std::size_t k = 0; k < preds.size(); ++k) {
            auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(preds[k], e));
            local.values[static_cast<std::size_t>(it - pairs.begin())] = coeffs[k];
        }
        for (const auto& u : uses[e]) frontier[u.sink][u.path] = e;
    }
    LinearCode code(n, std::move(local));
    if (!verify_multicast(code))
        throw Error(ErrorCode::FieldTooSmall, "construction did not yield a linear multicast");
    return code;
}

/// Vector matroid of the global kernel matrix: edge sets whose kernels are linearly independent.
inline Matroid induced_matroid(const LinearCode& code) {
    return vector_matroid(code.global().matrix, code.global().labels);
}

}  // namespace netcode
