#pragma once

// Seeded generators for property suites. Draws use plain modulo reduction of mt19937_64
// output so sequences are identical across standard libraries.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netcode/field_lift.hpp"
#include "netcode/network.hpp"

namespace netcode {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform-ish integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    bool coin(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::mt19937_64 engine_;
};

struct RandomNetworkParams {
    std::size_t dimension = 2;
    std::size_t min_nodes = 4;
    std::size_t max_nodes = 7;
    std::size_t min_links = 5;
    std::size_t max_links = 11;
    std::size_t max_receivers = 3;
    std::size_t attempts = 200;
};

/// Random acyclic multigraph on nodes n0 (source) .. n{N-1}, links only from lower to higher
/// index. Receivers are drawn from nodes with maxflow >= omega. Returns nullopt if no draw in
/// `attempts` yields at least one receiver.
inline std::optional<MulticastNetwork> random_network(SeededRng& rng, const RandomNetworkParams& p = {}) {
    for (std::size_t attempt = 0; attempt < p.attempts; ++attempt) {
        const std::size_t count = rng.between(p.min_nodes, p.max_nodes);
        std::vector<std::string> nodes;
        for (std::size_t i = 0; i < count; ++i) nodes.push_back("n" + std::to_string(i));
        const std::size_t m = rng.between(p.min_links, p.max_links);
        std::vector<Link> links;
        for (std::size_t i = 0; i < m; ++i) {
            // bias toward short hops so paths stay interesting
            const std::size_t tail = rng.below(count - 1);
            const std::size_t span = std::min<std::size_t>(count - 1 - tail, 3);
            const std::size_t head = tail + 1 + rng.below(span);
            links.push_back({"e" + std::to_string(i + 1), nodes[tail], nodes[head]});
        }
        auto probe = MulticastNetwork::create(p.dimension, nodes, links, nodes[0], {nodes[count - 1]});
        std::vector<std::string> eligible;
        for (std::size_t v = 1; v < count; ++v)
            if (maxflow(probe, v) >= p.dimension) eligible.push_back(nodes[v]);
        if (eligible.empty()) continue;
        std::vector<std::string> receivers;
        const std::size_t want = rng.between(1, std::min(p.max_receivers, eligible.size()));
        while (receivers.size() < want) {
            const auto& pick = eligible[rng.below(eligible.size())];
            if (std::find(receivers.begin(), receivers.end(), pick) == receivers.end()) receivers.push_back(pick);
        }
        return MulticastNetwork::create(p.dimension, std::move(nodes), std::move(links), "n0", std::move(receivers));
    }
    return std::nullopt;
}

/// rows x cols matrix with at most one +1 and at most one -1 per column.
inline SignedMatrix random_incidence_like(SeededRng& rng, std::size_t rows, std::size_t cols) {
    SignedMatrix s(rows, numbered_labels(cols, "c"));
    for (std::size_t c = 0; c < cols; ++c) {
        const auto kind = rng.below(4);  // 0 empty, 1 single +1, 2 single -1, 3 pair
        const std::size_t a = rng.below(rows);
        if (kind == 1) s(a, c) = 1;
        if (kind == 2) s(a, c) = -1;
        if (kind == 3 && rows > 1) {
            std::size_t b = rng.below(rows - 1);
            if (b >= a) ++b;
            s(a, c) = 1;
            s(b, c) = -1;
        }
    }
    return s;
}

/// Random (0, +-1) matrix with at least one column breaking the one-(+1)-one-(-1) rule.
inline SignedMatrix random_violating(SeededRng& rng, std::size_t rows, std::size_t cols) {
    SignedMatrix s(rows, numbered_labels(cols, "c"));
    for (auto& v : s.entries) v = static_cast<int>(rng.below(3)) - 1;
    const std::size_t c = rng.below(cols);
    const int sign = rng.coin(1, 2) ? 1 : -1;
    for (std::size_t r = 0; r < rows; ++r) s(r, c) = 0;
    const std::size_t a = rng.below(rows);
    std::size_t b = rng.below(rows - 1);
    if (b >= a) ++b;
    s(a, c) = sign;
    s(b, c) = sign;
    return s;
}

}  // namespace netcode
