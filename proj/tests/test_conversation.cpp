#include <doctest.h>

#include "convo/conversation.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace convo;
using namespace convo::testfix;

namespace {

// One-round protocol where Alice announces her type.
ConversationProtocol alice_reveal(int num_types_a, int num_types_b) {
    ConversationProtocol c;
    for (int i = 0; i < num_types_a; ++i) c.types_a.push_back("A" + std::to_string(i));
    for (int i = 0; i < num_types_b; ++i) c.types_b.push_back("B" + std::to_string(i));
    RoundSignals rs;
    rs.alice = c.types_a;
    rs.bob = {"ok"};
    c.rounds.push_back(rs);
    std::vector<std::vector<Rational>> reveal(num_types_a,
                                              std::vector<Rational>(num_types_a, Rational(0)));
    for (int i = 0; i < num_types_a; ++i) reveal[i][i] = 1;
    c.alice_kernel[{}] = reveal;
    for (int i = 0; i < num_types_a; ++i)
        c.bob_kernel[{i}] = std::vector<std::vector<Rational>>(num_types_b, {rat(1)});
    return c;
}

ConversationProtocol zero_rounds(int na, int nb) {
    ConversationProtocol c;
    for (int i = 0; i < na; ++i) c.types_a.push_back("A" + std::to_string(i));
    for (int i = 0; i < nb; ++i) c.types_b.push_back("B" + std::to_string(i));
    return c;
}

}  // namespace

TEST_CASE("reach matrices evolve by diagonal scaling") {
    Belief pa = half_half();
    Belief pb = make_belief({rat(3, 5), rat(2, 5)});
    auto c = alice_reveal(2, 2);

    CHECK(reach_matrix(c, {}, pa, pb).m ==
          std::vector<std::vector<Rational>>{{rat(3, 10), rat(1, 5)}, {rat(3, 10), rat(1, 5)}});
    CHECK(reach_matrix(c, {0}, pa, pb).m ==
          std::vector<std::vector<Rational>>{{rat(3, 10), rat(1, 5)}, {rat(0), rat(0)}});

    auto [qa, qb] = posteriors_at(c, {0}, pa, pb);
    CHECK(qa == make_belief({rat(1), rat(0)}));
    CHECK(qb == pb);
    CHECK_THROWS_AS(posteriors_at(c, {0, 0, 1}, pa, pb), DomainError);
}

TEST_CASE("simulating the two-round walk fixture") {
    auto c = two_way_conversation();
    validate(c);
    auto leaves = simulate(c, half_half(), half_half());
    REQUIRE(leaves.size() == 8);
    Rational total = 0;
    for (const auto& leaf : leaves) total += leaf.prob;
    CHECK(total == rat(1));

    // spot probabilities along the walk
    auto [qa1, qb1] = posteriors_at(c, {0}, half_half(), half_half());
    CHECK(qb1 == half_half());
    CHECK(qa1 == make_belief({rat(1, 4), rat(3, 4)}));

    auto [qa2, qb2] = posteriors_at(c, {1, 1}, half_half(), half_half());
    CHECK(qb2 == make_belief({rat(9, 10), rat(1, 10)}));
    CHECK(qa2 == make_belief({rat(3, 4), rat(1, 4)}));

    // the (up, right, up) branch ends at (q_B, q_A) = (9/10, 1) with mass 1/8
    auto [qa3, qb3] = posteriors_at(c, {1, 1, 1, 0}, half_half(), half_half());
    CHECK(qb3 == make_belief({rat(9, 10), rat(1, 10)}));
    CHECK(qa3 == make_belief({rat(1), rat(0)}));
    Rational mass_at_top = 0;
    for (const auto& leaf : leaves)
        if (leaf.history[0] == 1 && leaf.history[1] == 1 && leaf.history[2] == 1)
            mass_at_top += leaf.prob;
    CHECK(mass_at_top == rat(1, 8));
}

TEST_CASE("simulate trivial protocols") {
    auto empty = zero_rounds(2, 2);
    auto leaves = simulate(empty, half_half(), half_half());
    REQUIRE(leaves.size() == 1);
    CHECK(leaves[0].history.empty());
    CHECK(leaves[0].prob == rat(1));

    auto reveal = alice_reveal(2, 2);
    auto rleaves = simulate(reveal, half_half(), half_half());
    REQUIRE(rleaves.size() == 2);
    CHECK(rleaves[0].prob == rat(1, 2));
    CHECK(rleaves[1].prob == rat(1, 2));
}

TEST_CASE("transcript budget is a hard error") {
    auto c = two_way_conversation();
    CHECK_THROWS_AS(simulate(c, half_half(), half_half(), 3), BudgetError);
}

TEST_CASE("missing kernel entries are detected") {
    auto c = alice_reveal(2, 2);
    c.bob_kernel.erase(History{0});
    CHECK_THROWS_AS(simulate(c, half_half(), half_half()), DomainError);
}

TEST_CASE("induced joint posterior distribution of the walk fixture") {
    auto c = two_way_conversation();
    auto j = induced_joint_posterior(c, half_half(), half_half());
    validate(j);

    // support contains (q_B, q_A) = ((9/10,1/10), (1,0)) with weight 1/8
    Rational mass = 0;
    for (const auto& atom : j.atoms)
        if (atom.q_b == make_belief({rat(9, 10), rat(1, 10)}) &&
            atom.q_a == make_belief({rat(1), rat(0)}))
            mass += atom.prob;
    CHECK(mass == rat(1, 8));

    // uninformative and revealing protocols
    auto empty_j = induced_joint_posterior(zero_rounds(2, 2), half_half(), half_half());
    REQUIRE(empty_j.atoms.size() == 4);
    for (const auto& atom : empty_j.atoms) {
        CHECK(atom.q_a == half_half());
        CHECK(atom.q_b == half_half());
    }
    auto reveal_j = induced_joint_posterior(alice_reveal(2, 2), half_half(), half_half());
    for (const auto& atom : reveal_j.atoms) {
        CHECK(atom.q_b == half_half());
        CHECK(atom.q_a[atom.type_a] == rat(1));
    }
}

TEST_CASE("dimartingale audit of the walk fixture") {
    auto c = two_way_conversation();
    auto [trace, report] = dimartingale_audit(c, half_half(), half_half());
    CHECK(report.pass);
    REQUIRE(!trace.nodes.empty());
    // root carries the full final-pair law; the root q_A splits 1/2 - 1/2
    const auto& root = trace.nodes[0];
    Rational gsum = 0;
    for (const auto& g : root.gamma) gsum += g;
    CHECK(gsum == rat(1));
    CHECK(root.q_a == half_half());
    CHECK(root.q_b == half_half());
}

TEST_CASE("one-round revelation by both sides collapses gamma after round 1") {
    ConversationProtocol c;
    c.types_a = {"A0", "A1"};
    c.types_b = {"B0", "B1"};
    c.rounds = {{{"a0", "a1"}, {"b0", "b1"}}};
    c.alice_kernel[{}] = {{rat(1), rat(0)}, {rat(0), rat(1)}};
    for (int a = 0; a < 2; ++a)
        c.bob_kernel[{a}] = {{rat(1), rat(0)}, {rat(0), rat(1)}};
    auto [trace, report] = dimartingale_audit(c, half_half(), half_half());
    CHECK(report.pass);
    for (const auto& node : trace.nodes) {
        if (node.history.size() != 2) continue;
        int ones = 0;
        for (const auto& g : node.gamma)
            if (g == rat(1)) ++ones;
        CHECK(ones == 1);  // point mass at the revealed pair
    }
}

TEST_CASE("random conversations satisfy the structural invariants") {
    oracle::Rng rng(51);
    for (int trial = 0; trial < 60; ++trial) {
        int na = oracle::rand_int(rng, 1, 3), nb = oracle::rand_int(rng, 1, 3);
        Belief pa = oracle::rand_belief(rng, na, false);
        Belief pb = oracle::rand_belief(rng, nb, false);
        auto c = oracle::rand_conversation(rng, na, nb, 3);
        auto leaves = simulate(c, pa, pb);

        // probabilities sum to one; the normalized reach matrix is exactly
        // the product of its marginals at every leaf
        Rational total = 0;
        for (const auto& leaf : leaves) {
            total += leaf.prob;
            auto norm = leaf.reach.normalized();
            auto f = product_factorize(norm);
            CHECK(f.has_value());
        }
        CHECK(total == rat(1));

        // conservation: children reach matrices sum to the parent's
        auto [trace, report] = dimartingale_audit(c, pa, pb);
        CHECK(report.pass);

        // the induced distribution satisfies the factorization condition
        auto j = induced_joint_posterior(c, pa, pb);
        validate(j);
        ObserverPosterior marginal = zero_posterior(na, nb);
        for (const auto& atom : j.atoms) marginal.m[atom.type_a][atom.type_b] += atom.prob;
        CHECK(marginal == outer_product(pa, pb));
    }
}

TEST_CASE("children reach matrices sum to the parent entrywise") {
    oracle::Rng rng(52);
    for (int trial = 0; trial < 25; ++trial) {
        auto c = oracle::rand_conversation(rng, 2, 2, 2);
        Belief pa = oracle::rand_belief(rng, 2, false);
        Belief pb = oracle::rand_belief(rng, 2, false);
        // walk every positive-probability prefix
        auto walk = [&](auto&& self, const History& h) -> void {
            ReachMatrix m = reach_matrix(c, h, pa, pb);
            if (m.is_zero()) return;
            size_t len = h.size();
            if (len == 2 * (size_t)c.num_rounds()) return;
            bool alice = len % 2 == 0;
            int round = (int)(len / 2);
            int count = alice ? (int)c.rounds[round].alice.size()
                              : (int)c.rounds[round].bob.size();
            ObserverPosterior sum = zero_posterior(2, 2);
            for (int s = 0; s < count; ++s) {
                History child = h;
                child.push_back(s);
                ReachMatrix cm = reach_matrix(c, child, pa, pb);
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) sum.m[x][y] += cm.m[x][y];
                self(self, child);
            }
            CHECK(sum.m == m.m);
        };
        walk(walk, {});
    }
}
