#include <gtest/gtest.h>

#include <set>

#include "netcode/io.hpp"
#include "netcode/multicast_matroid.hpp"
#include "netcode/random_network.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using netcode::Matroid;
using Family = std::set<std::set<std::string>>;

namespace {

Family family(const Matroid& m) {
    Family out;
    for (const auto& b : m.bases()) {
        const auto l = m.labels(b);
        out.emplace(l.begin(), l.end());
    }
    return out;
}

Family family(const Matroid& m, const std::vector<netcode::ElementSet>& sets) {
    Family out;
    for (const auto& b : sets) {
        const auto l = m.labels(b);
        out.emplace(l.begin(), l.end());
    }
    return out;
}

const Family kB1{{"e1", "e2"}, {"e1", "e4"}, {"e1", "e6"}, {"e1", "e8"},
                 {"e5", "e2"}, {"e5", "e4"}, {"e5", "e6"}, {"e5", "e8"}};
const Family kB2{{"e1", "e2"}, {"e3", "e2"}, {"e6", "e2"}, {"e9", "e2"},
                 {"e1", "e7"}, {"e3", "e7"}, {"e6", "e7"}, {"e9", "e7"}};
// The printed basis list of the multicast matroid (15 pairs).
const Family kPrinted{{"e1", "e2"}, {"e1", "e4"}, {"e1", "e6"}, {"e1", "e8"}, {"e5", "e2"},
                      {"e5", "e4"}, {"e5", "e6"}, {"e5", "e8"}, {"e3", "e2"}, {"e6", "e2"},
                      {"e9", "e2"}, {"e1", "e7"}, {"e3", "e7"}, {"e6", "e7"}, {"e9", "e7"}};
// Bases the closure adds beyond the printed list.
const Family kSurplus{{"e3", "e4"}, {"e4", "e6"}, {"e4", "e9"}, {"e3", "e6"}, {"e1", "e9"}, {"e3", "e9"},
                      {"e6", "e9"}, {"e3", "e8"}, {"e6", "e8"}, {"e8", "e9"}, {"e5", "e7"}, {"e5", "e9"}};

std::vector<std::size_t> links(const netcode::MulticastNetwork& n, const std::vector<std::string>& ids) {
    std::vector<std::size_t> out;
    for (const auto& id : ids) out.push_back(n.link_index(id));
    return out;
}

netcode::LinearCode xor_code() {
    return netcode::io::load_code(fixtures::data_path("butterfly_xor_code.json"), fixtures::butterfly());
}

}  // namespace

TEST(MulticastMatroid, BipartiteGraphShape) {
    const auto n = fixtures::butterfly();
    const auto h = netcode::build_bipartite_H(n, netcode::edge_disjoint_paths(n, "T1"));
    EXPECT_EQ(h.S.size(), 6u);
    EXPECT_EQ(h.T.size(), 4u);
    // 4 self pairs + 4 successor pairs (e1->e5, e2->e4, e4->e6, e6->e8)
    EXPECT_EQ(h.E.size(), 8u);
    EXPECT_TRUE(std::find(h.E.begin(), h.E.end(), std::make_pair(n.link_index("e2"), n.link_index("e4"))) != h.E.end());

    const auto p = fixtures::parallel_pair();
    const auto hp = netcode::build_bipartite_H(p, netcode::edge_disjoint_paths(p, "t"));
    EXPECT_EQ(hp.S.size(), 2u);
    EXPECT_TRUE(hp.T.empty());
    EXPECT_TRUE(hp.E.empty());
}

TEST(MulticastMatroid, ReceiverGammoidsMatchExample) {
    const auto n = fixtures::butterfly();
    const auto paths = netcode::receiver_paths(n);
    const auto g1 = netcode::receiver_gammoid(n, paths[0]);
    const auto g2 = netcode::receiver_gammoid(n, paths[1]);
    EXPECT_EQ(family(g1), kB1);
    EXPECT_EQ(family(g2), kB2);
    EXPECT_EQ(g1.ground(), (std::vector<std::string>{"e1", "e2", "e4", "e5", "e6", "e8"}));
    for (const auto& ps : paths) {
        const auto g = netcode::receiver_gammoid(n, ps);
        EXPECT_TRUE(g.is_basis(*g.index_of("e1") < *g.index_of("e2") ? netcode::ElementSet{*g.index_of("e1"), *g.index_of("e2")}
                                                                       : netcode::ElementSet{*g.index_of("e2"), *g.index_of("e1")}));
    }
}

TEST(MulticastMatroid, DirectOracleOnButterfly) {
    const auto n = fixtures::butterfly();
    const auto p1 = netcode::edge_disjoint_paths(n, "T1");
    EXPECT_TRUE(netcode::gammoid_direct_oracle(n, p1, links(n, {"e1", "e2"})));
    EXPECT_FALSE(netcode::gammoid_direct_oracle(n, p1, links(n, {"e2", "e4"})));  // e4 follows e2
    const auto e1 = p1.edge_union(n);
    for (std::size_t i = 0; i < e1.size(); ++i)
        for (std::size_t j = i + 1; j < e1.size(); ++j) {
            const std::set<std::string> pair{n.links()[e1[i]].id, n.links()[e1[j]].id};
            EXPECT_EQ(netcode::gammoid_direct_oracle(n, p1, {e1[i], e1[j]}), kB1.contains(pair));
        }
}

TEST(MulticastMatroid, ClosureContainsPrintedBasesAndPinsSurplus) {
    const auto n = fixtures::butterfly();
    const auto mm = netcode::build_multicast_matroid(n, netcode::receiver_paths(n));
    const auto all = family(mm.matroid);
    for (const auto& b : kPrinted) EXPECT_TRUE(all.contains(b)) << *b.begin() << "," << *b.rbegin();
    Family golden = kPrinted;
    golden.insert(kSurplus.begin(), kSurplus.end());
    EXPECT_EQ(all, golden);
    EXPECT_EQ(all.size(), 27u);
    EXPECT_EQ(family(mm.matroid, mm.surplus), kSurplus);
    EXPECT_EQ(mm.matroid.rank(), 2u);
    EXPECT_EQ(mm.matroid.size(), 9u);
    // every added basis has a recorded step
    EXPECT_EQ(mm.provenance.size(), all.size() - kB1.size());
    for (const auto& step : mm.provenance) EXPECT_EQ(step.receiver, 1u);
}

TEST(MulticastMatroid, PrintedListAloneIsNotAMatroid) {
    // {e4,e5} and {e3,e7} violate basis exchange inside the 15 printed pairs
    const std::set<std::string> a{"e4", "e5"}, b{"e3", "e7"};
    bool exchange = false;
    for (const auto& y : b) {
        std::set<std::string> c{"e4", y};
        if (kPrinted.contains(c)) exchange = true;
    }
    EXPECT_TRUE(kPrinted.contains(a));
    EXPECT_TRUE(kPrinted.contains(b));
    EXPECT_FALSE(exchange);
}

TEST(MulticastMatroid, SingleReceiverEqualsItsGammoid) {
    const auto n = netcode::MulticastNetwork::create(
        2, {"s", "a", "b", "t"}, {{"l1", "s", "a"}, {"l2", "s", "b"}, {"l3", "a", "t"}, {"l4", "b", "t"}, {"l5", "a", "b"}},
        "s", {"t"});
    const auto paths = netcode::receiver_paths(n);
    const auto mm = netcode::build_multicast_matroid(n, paths);
    const auto g = netcode::receiver_gammoid(n, paths[0]);
    EXPECT_TRUE(mm.provenance.empty());
    EXPECT_TRUE(netcode::matroids_equal(netcode::restrict_to(mm.matroid, mm.matroid.subset(g.ground())), g));
    // l5 lies on no path, so it is a loop
    EXPECT_FALSE(mm.matroid.is_independent(mm.matroid.subset({"l5"})));
    EXPECT_TRUE(netcode::is_multicast_matroid_base_orderable(mm));
}

TEST(MulticastMatroid, ReceiverOrderChecked) {
    const auto n = fixtures::butterfly();
    auto paths = netcode::receiver_paths(n);
    std::swap(paths[0], paths[1]);
    EXPECT_THROW((void)netcode::build_multicast_matroid(n, paths), netcode::Error);
    paths.pop_back();
    EXPECT_THROW((void)netcode::build_multicast_matroid(n, paths), netcode::Error);
}

TEST(MulticastMatroid, RepresentationChecks) {
    const auto n = fixtures::butterfly();
    const auto paths = netcode::receiver_paths(n);
    const auto code = xor_code();
    EXPECT_TRUE(netcode::verify_representation(code, netcode::receiver_gammoid(n, paths[0])));
    EXPECT_TRUE(netcode::verify_representation(code, netcode::receiver_gammoid(n, paths[1])));

    // Against the closure, the XOR code is dependent on some surplus pairs (e.g. e6, e9 share (1,1)).
    const auto mm = netcode::build_multicast_matroid(n, paths);
    const auto verdict = netcode::verify_representation(code, mm.matroid);
    EXPECT_FALSE(verdict);
    ASSERT_TRUE(verdict.witness);
    const std::set<std::string> witness(verdict.witness->begin(), verdict.witness->end());
    EXPECT_TRUE(kSurplus.contains(witness));
    // every printed basis is independent under the XOR code
    for (const auto& b : kPrinted) {
        std::vector<std::string> ids(b.begin(), b.end());
        EXPECT_EQ(code.global().matrix.column_rank(links(n, ids)), 2u);
    }

    // routing-only: w forwards e3 alone, T1 then sees (1,0) twice
    auto local = code.local();
    const auto& pairs = n.adjacent_pairs();
    const std::pair<std::size_t, std::size_t> e4e6{n.link_index("e4"), n.link_index("e6")};
    local.values[static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), e4e6) - pairs.begin())] = 0;
    const netcode::LinearCode routing(n, local);
    const auto bad = netcode::verify_representation(routing, netcode::receiver_gammoid(n, paths[0]));
    EXPECT_FALSE(bad);
    ASSERT_TRUE(bad.witness);
    std::vector<std::size_t> cols = links(n, *bad.witness);
    EXPECT_LT(routing.global().matrix.column_rank(cols), 2u);
}

// A valid solution can leave a path link idle when a parallel link carries its symbol.
// The gammoid basis through the idle link is then dependent but is not a cut.
TEST(MulticastMatroid, SolutionMayMissBasisThatIsNotACut) {
    const auto n = fixtures::load("parallel_bypass.json");
    const auto code = netcode::brute_force_solve(n, netcode::Field::prime(2));
    ASSERT_TRUE(code);
    EXPECT_TRUE(netcode::verify_multicast(*code));
    const auto paths = netcode::receiver_paths(n);
    const auto verdict = netcode::verify_representation(*code, netcode::receiver_gammoid(n, paths[0]));
    EXPECT_FALSE(verdict);
    ASSERT_TRUE(verdict.witness);
    EXPECT_EQ(std::set<std::string>(verdict.witness->begin(), verdict.witness->end()),
              (std::set<std::string>{"e1", "e3"}));
    const std::vector<std::size_t> idle{n.link_index("e1")};
    EXPECT_EQ(code->global().matrix.column_rank(idle), 0u);
    EXPECT_EQ(netcode::maxflow(netcode::MulticastNetwork::create(2, n.nodes(), {{"e2", "n0", "n2"}, {"e4", "n2", "n3"}},
                                                                 "n0", {"n3"}),
                               "n3"),
              1u);
}

TEST(MulticastMatroid, BaseOrderable) {
    const auto n = fixtures::butterfly();
    const auto paths = netcode::receiver_paths(n);
    const auto mm = netcode::build_multicast_matroid(n, paths);
    EXPECT_TRUE(netcode::is_multicast_matroid_base_orderable(mm));
    EXPECT_TRUE(oracle::base_orderable_by_bijections(mm.matroid));
    for (const auto& p : paths) EXPECT_TRUE(netcode::is_base_orderable(netcode::receiver_gammoid(n, p)));
}

TEST(MulticastMatroid, TransversalDualMatchesDirectOracleOnRandomNetworks) {
    netcode::SeededRng rng(77);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const auto n = netcode::random_network(rng);
        if (!n) continue;
        for (const auto& ps : netcode::receiver_paths(*n)) {
            const auto g = netcode::receiver_gammoid(*n, ps);
            const auto edges = ps.edge_union(*n);
            ASSERT_EQ(g.size(), edges.size());
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
                std::vector<std::size_t> x;
                netcode::ElementSet local;
                for (std::size_t i = 0; i < edges.size(); ++i)
                    if ((mask >> i) & 1) {
                        x.push_back(edges[i]);
                        local.push_back(i);
                    }
                const bool direct = netcode::gammoid_direct_oracle(*n, ps, x);
                ASSERT_EQ(g.is_independent(local), direct);
                ASSERT_EQ(oracle::linkable_by_search(*n, ps, x), direct);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(MulticastMatroid, RandomClosuresAreBaseOrderableMatroids) {
    netcode::SeededRng rng(123);
    netcode::RandomNetworkParams p;
    p.max_receivers = 3;
    int built = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = netcode::random_network(rng, p);
        if (!n) continue;
        const auto mm = netcode::build_multicast_matroid(*n, netcode::receiver_paths(*n));
        EXPECT_EQ(mm.matroid.rank(), n->dimension());
        // basis exchange over every pair of bases
        const auto& bases = mm.matroid.bases();
        for (const auto& a : bases)
            for (const auto& b : bases)
                for (auto x : a) {
                    if (std::binary_search(b.begin(), b.end(), x)) continue;
                    bool ok = false;
                    for (auto y : b) {
                        if (std::binary_search(a.begin(), a.end(), y)) continue;
                        auto c = a;
                        std::erase(c, x);
                        c.push_back(y);
                        if (mm.matroid.is_basis(c)) ok = true;
                    }
                    ASSERT_TRUE(ok);
                }
        EXPECT_TRUE(netcode::is_multicast_matroid_base_orderable(mm));
        ++built;
    }
    EXPECT_GT(built, 20);
}
