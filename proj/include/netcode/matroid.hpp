#pragma once

// Matroids given by an independence oracle over a labelled ground set, with on-demand
// basis enumeration for small instances.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "netcode/error.hpp"
#include "netcode/flow.hpp"
#include "netcode/linalg.hpp"

namespace netcode {

/// Sorted indices into a matroid's ground set.
using ElementSet = std::vector<std::size_t>;

struct EnumerationBudget {
    std::size_t max_ground = 20;
    std::size_t max_bases = 50'000;
};

class Matroid {
public:
    using Oracle = std::function<bool(const ElementSet&)>;

    Matroid(std::vector<std::string> ground, Oracle independent) : state_(std::make_shared<State>()) {
        state_->ground = std::move(ground);
        for (std::size_t i = 0; i < state_->ground.size(); ++i)
            if (!state_->lookup.emplace(state_->ground[i], i).second)
                throw Error(ErrorCode::InvalidArgument, "duplicate ground element '" + state_->ground[i] + "'");
        state_->oracle = std::move(independent);
        ElementSet all(state_->ground.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        state_->rank = rank(all);
    }

    /// Matroid given extensionally by its bases (all of equal size; ground at most 64 elements).
    static Matroid from_bases(std::vector<std::string> ground, std::vector<ElementSet> bases) {
        if (ground.size() > 64) throw Error(ErrorCode::BudgetExceeded, "extensional matroids hold at most 64 elements");
        if (bases.empty()) throw Error(ErrorCode::InvalidArgument, "a matroid has at least one basis");
        std::vector<std::uint64_t> masks;
        for (auto& b : bases) {
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
            if (b.size() != bases.front().size()) throw Error(ErrorCode::InvalidArgument, "bases differ in size");
            std::uint64_t m = 0;
            for (auto e : b) {
                if (e >= ground.size()) throw Error(ErrorCode::InvalidArgument, "basis element outside ground set");
                m |= std::uint64_t{1} << e;
            }
            masks.push_back(m);
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        auto oracle = [masks](const ElementSet& x) {
            std::uint64_t m = 0;
            for (auto e : x) m |= std::uint64_t{1} << e;
            return std::any_of(masks.begin(), masks.end(), [m](std::uint64_t b) { return (b & m) == m; });
        };
        Matroid out(std::move(ground), oracle);
        std::sort(bases.begin(), bases.end());
        bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
        out.state_->bases = std::move(bases);
        return out;
    }

    [[nodiscard]] const std::vector<std::string>& ground() const noexcept { return state_->ground; }
    [[nodiscard]] std::size_t size() const noexcept { return state_->ground.size(); }
    [[nodiscard]] const std::string& label(std::size_t i) const { return state_->ground.at(i); }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view id) const {
        auto it = state_->lookup.find(std::string(id));
        if (it == state_->lookup.end()) return std::nullopt;
        return it->second;
    }

    /// Sorted index set for the given labels; throws for labels outside the ground set.
    [[nodiscard]] ElementSet subset(const std::vector<std::string>& ids) const {
        ElementSet out;
        for (const auto& id : ids) {
            auto i = index_of(id);
            if (!i) throw Error(ErrorCode::InvalidArgument, "element '" + id + "' outside ground set");
            out.push_back(*i);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    [[nodiscard]] std::vector<std::string> labels(const ElementSet& x) const {
        std::vector<std::string> out;
        for (auto e : x) out.push_back(label(e));
        return out;
    }

    [[nodiscard]] bool is_independent(ElementSet x) const {
        normalize(x);
        return state_->oracle(x);
    }

    [[nodiscard]] std::size_t rank(ElementSet x) const {
        normalize(x);
        ElementSet acc;
        for (auto e : x) {
            acc.push_back(e);
            if (!state_->oracle(acc)) acc.pop_back();
        }
        return acc.size();
    }

    [[nodiscard]] std::size_t rank() const noexcept { return state_->rank; }

    [[nodiscard]] bool is_basis(ElementSet x) const {
        normalize(x);
        return x.size() == state_->rank && state_->oracle(x);
    }

    /// All bases, lexicographically sorted; materialized once and shared by copies.
    [[nodiscard]] const std::vector<ElementSet>& bases(const EnumerationBudget& budget = {}) const {
        std::lock_guard lock(state_->mutex);
        if (state_->bases) return *state_->bases;
        if (size() > budget.max_ground || size() > 64)
            throw Error(ErrorCode::BudgetExceeded,
                        "ground set of " + std::to_string(size()) + " elements exceeds " + std::to_string(budget.max_ground));
        std::vector<ElementSet> out;
        ElementSet current;
        const std::size_t r = state_->rank;
        auto extend = [&](auto&& self, std::size_t from) -> void {
            if (current.size() == r) {
                if (out.size() >= budget.max_bases)
                    throw Error(ErrorCode::BudgetExceeded, "more than " + std::to_string(budget.max_bases) + " bases");
                out.push_back(current);
                return;
            }
            for (std::size_t e = from; e + (r - current.size()) <= size(); ++e) {
                current.push_back(e);
                if (state_->oracle(current)) self(self, e + 1);
                current.pop_back();
            }
        };
        extend(extend, 0);
        state_->bases = std::move(out);
        return *state_->bases;
    }

    /// Bases as bit masks (ground <= 64).
    [[nodiscard]] std::vector<std::uint64_t> basis_masks(const EnumerationBudget& budget = {}) const {
        std::vector<std::uint64_t> out;
        for (const auto& b : bases(budget)) out.push_back(to_mask(b));
        return out;
    }

    static std::uint64_t to_mask(const ElementSet& x) {
        std::uint64_t m = 0;
        for (auto e : x) m |= std::uint64_t{1} << e;
        return m;
    }
    static ElementSet from_mask(std::uint64_t m) {
        ElementSet out;
        while (m) {
            out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
            m &= m - 1;
        }
        return out;
    }

private:
    struct State {
        std::vector<std::string> ground;
        std::unordered_map<std::string, std::size_t> lookup;
        Oracle oracle;
        std::size_t rank = 0;
        std::mutex mutex;
        std::optional<std::vector<ElementSet>> bases;
    };

    void normalize(ElementSet& x) const {
        std::sort(x.begin(), x.end());
        x.erase(std::unique(x.begin(), x.end()), x.end());
        if (!x.empty() && x.back() >= size())
            throw Error(ErrorCode::InvalidArgument, "element " + std::to_string(x.back()) + " outside ground set");
    }

    std::shared_ptr<State> state_;
};

inline std::vector<std::string> numbered_labels(std::size_t n, std::string_view prefix = "") {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
    return out;
}

inline Matroid uniform_matroid(std::size_t r, std::vector<std::string> ground) {
    return Matroid(std::move(ground), [r](const ElementSet& x) { return x.size() <= r; });
}

inline Matroid free_matroid(std::vector<std::string> ground) {
    const auto n = ground.size();
    return uniform_matroid(n, std::move(ground));
}

/// Column matroid of a matrix over a finite field.
inline Matroid vector_matroid(const FieldMatrix& columns, std::vector<std::string> labels) {
    if (labels.size() != columns.cols()) throw Error(ErrorCode::InvalidArgument, "one label per column required");
    return Matroid(std::move(labels), [columns](const ElementSet& x) { return columns.column_rank(x) == x.size(); });
}

/// X independent in M* iff E - X spans M.
inline Matroid dual(const Matroid& m) {
    return Matroid(m.ground(), [m](const ElementSet& x) {
        ElementSet rest;
        std::size_t j = 0;
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (j < x.size() && x[j] == e) {
                ++j;
                continue;
            }
            rest.push_back(e);
        }
        return m.rank(rest) == m.rank();
    });
}

/// Restriction M | subset, keeping the order given by `subset`.
inline Matroid restrict_to(const Matroid& m, const ElementSet& subset) {
    return Matroid(m.labels(subset), [m, subset](const ElementSet& x) {
        ElementSet mapped;
        for (auto e : x) mapped.push_back(subset[e]);
        return m.is_independent(mapped);
    });
}

/// Set family (A_j : j in J) over a labelled set S.
struct BipartiteSystem {
    std::vector<std::string> left;                 // S
    std::vector<std::vector<std::size_t>> family;  // A_j as indices into `left`
};

/// Partial transversals of the family, decided by bipartite matching of X into J.
inline Matroid transversal_matroid(const BipartiteSystem& sys) {
    for (const auto& a : sys.family)
        for (auto s : a)
            if (s >= sys.left.size()) throw Error(ErrorCode::InvalidArgument, "family member outside S");
    std::vector<std::vector<std::size_t>> adjacency(sys.left.size());
    for (std::size_t j = 0; j < sys.family.size(); ++j)
        for (auto s : sys.family[j]) adjacency[s].push_back(j);
    const std::size_t m = sys.family.size();
    return Matroid(sys.left, [adjacency, m](const ElementSet& x) {
        if (x.size() > m) return false;
        std::vector<bool> active(adjacency.size(), false);
        for (auto e : x) active[e] = true;
        return max_bipartite_matching(adjacency, m, active) == x.size();
    });
}

/// Digraph with a target set B; X is independent when it links into B by node-disjoint paths.
struct LinkageInstance {
    std::vector<std::string> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    std::vector<std::size_t> targets;
};

inline Matroid strict_gammoid(const LinkageInstance& inst) {
    const std::size_t n = inst.nodes.size();
    for (const auto& [u, v] : inst.arcs)
        if (u >= n || v >= n) throw Error(ErrorCode::InvalidArgument, "arc endpoint outside node set");
    for (auto b : inst.targets)
        if (b >= n) throw Error(ErrorCode::InvalidArgument, "target outside node set");
    return Matroid(inst.nodes, [inst, n](const ElementSet& x) {
        // node v -> (in = 2v, out = 2v+1); source 2n, sink 2n+1
        FlowGraph g(2 * n + 2);
        for (std::size_t v = 0; v < n; ++v) g.add_arc(2 * v, 2 * v + 1, 1);
        for (const auto& [u, v] : inst.arcs) g.add_arc(2 * u + 1, 2 * v, 1);
        for (auto b : inst.targets) g.add_arc(2 * b + 1, 2 * n + 1, 1);
        for (auto e : x) g.add_arc(2 * n, 2 * e, 1);
        return static_cast<std::size_t>(g.max_flow(2 * n, 2 * n + 1)) == x.size();
    });
}

namespace detail {

inline std::vector<std::string> extended_ground(const Matroid& m, const std::string& x, const std::string& y) {
    if (!m.index_of(x)) throw Error(ErrorCode::InvalidArgument, "element '" + x + "' absent");
    if (m.index_of(y)) throw Error(ErrorCode::InvalidArgument, "element '" + y + "' already present");
    auto ground = m.ground();
    ground.push_back(y);
    return ground;
}

}  // namespace detail

/// Bases B + y, and B + x for bases B not containing x.
inline Matroid series_extension(const Matroid& m, const std::string& x, const std::string& y,
                                const EnumerationBudget& budget = {}) {
    auto ground = detail::extended_ground(m, x, y);
    const std::size_t xi = *m.index_of(x);
    const std::size_t yi = m.size();
    std::vector<ElementSet> out;
    for (const auto& b : m.bases(budget)) {
        auto with_y = b;
        with_y.push_back(yi);
        out.push_back(with_y);
        if (!std::binary_search(b.begin(), b.end(), xi)) {
            auto with_x = b;
            with_x.push_back(xi);
            out.push_back(with_x);
        }
    }
    return Matroid::from_bases(std::move(ground), std::move(out));
}

/// Bases B, and (B - x) + y for bases B containing x.
inline Matroid parallel_extension(const Matroid& m, const std::string& x, const std::string& y,
                                  const EnumerationBudget& budget = {}) {
    auto ground = detail::extended_ground(m, x, y);
    const std::size_t xi = *m.index_of(x);
    const std::size_t yi = m.size();
    std::vector<ElementSet> out;
    for (const auto& b : m.bases(budget)) {
        out.push_back(b);
        if (std::binary_search(b.begin(), b.end(), xi)) {
            ElementSet swapped;
            for (auto e : b)
                if (e != xi) swapped.push_back(e);
            swapped.push_back(yi);
            out.push_back(swapped);
        }
    }
    return Matroid::from_bases(std::move(ground), std::move(out));
}

struct BaseOrderVerdict {
    bool ok = true;
    std::optional<std::pair<ElementSet, ElementSet>> failing_pair;
    explicit operator bool() const noexcept { return ok; }
};

/// Base-orderability: every basis pair admits an exchange ordering, i.e. a perfect matching in the
/// bipartite graph joining x in B1 to y in B2 when both B1 - x + y and B2 - y + x are bases.
inline BaseOrderVerdict is_base_orderable(const Matroid& m, const EnumerationBudget& budget = {}) {
    const auto masks = m.basis_masks(budget);
    const std::unordered_set<std::uint64_t> lookup(masks.begin(), masks.end());
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = i + 1; j < masks.size(); ++j) {
            const auto b1 = Matroid::from_mask(masks[i]);
            const auto b2 = Matroid::from_mask(masks[j]);
            std::vector<std::vector<std::size_t>> adjacency(b1.size());
            for (std::size_t a = 0; a < b1.size(); ++a)
                for (std::size_t b = 0; b < b2.size(); ++b) {
                    const std::uint64_t x = std::uint64_t{1} << b1[a];
                    const std::uint64_t y = std::uint64_t{1} << b2[b];
                    if (lookup.contains((masks[i] & ~x) | y) && lookup.contains((masks[j] & ~y) | x))
                        adjacency[a].push_back(b);
                }
            if (max_bipartite_matching(adjacency, b2.size()) != b1.size())
                return {false, std::make_pair(b1, b2)};
        }
    return {};
}

/// Extensional equality: same ground labels and identical basis families.
inline bool matroids_equal(const Matroid& a, const Matroid& b, const EnumerationBudget& budget = {}) {
    auto ga = a.ground();
    auto gb = b.ground();
    std::sort(ga.begin(), ga.end());
    std::sort(gb.begin(), gb.end());
    if (ga != gb) throw Error(ErrorCode::InvalidArgument, "ground sets differ");
    if (a.rank() != b.rank()) return false;
    std::vector<std::size_t> to_a(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) to_a[i] = *a.index_of(b.label(i));
    std::vector<std::uint64_t> mapped;
    for (const auto& basis : b.bases(budget)) {
        std::uint64_t m = 0;
        for (auto e : basis) m |= std::uint64_t{1} << to_a[e];
        mapped.push_back(m);
    }
    auto own = a.basis_masks(budget);
    std::sort(mapped.begin(), mapped.end());
    std::sort(own.begin(), own.end());
    return own == mapped;
}

}  // namespace netcode
