#include <doctest.h>

#include "convo/feasibility.hpp"
#include "convo/mediator.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace convo;
using namespace convo::testfix;

namespace {

JointPosteriorDistribution dec_distribution() {
    Game g = mediator_dec_game();
    return induced_joint_posterior(mediator_dec_protocol(), g.prior_a, g.prior_b);
}

JointPosteriorDistribution prior_point_mass(const Belief& pa, const Belief& pb) {
    return product_distribution({{pb, pa, rat(1)}}, pa.size(), pb.size());
}

}  // namespace

TEST_CASE("product condition separates conversations from mediators") {
    CHECK_FALSE(check_product_condition(dec_distribution()));
    CHECK(check_product_condition(si_distribution()));
    CHECK(check_product_condition(imp_distribution()));

    oracle::Rng rng(81);
    for (int trial = 0; trial < 30; ++trial) {
        int na = oracle::rand_int(rng, 1, 3), nb = oracle::rand_int(rng, 1, 3);
        Belief pa = oracle::rand_belief(rng, na, false);
        Belief pb = oracle::rand_belief(rng, nb, false);
        auto c = oracle::rand_conversation(rng, na, nb, 2);
        CHECK(check_product_condition(induced_joint_posterior(c, pa, pb)));
    }
}

TEST_CASE("mediator feasibility of the decomposition distribution") {
    Game g = mediator_dec_game();
    auto verdict = check_mediator_feasibility(dec_distribution(), g.prior_a, g.prior_b);
    REQUIRE(verdict.status == FeasStatus::Feasible);
    REQUIRE(verdict.observer_family.has_value());
    CHECK(mean_posterior(*verdict.observer_family) == outer_product(g.prior_a, g.prior_b));
    // the reconstructed family regenerates the exact same atoms
    auto again = joint_from_observer(*verdict.observer_family, g.prior_a, g.prior_b);
    auto target = dec_distribution();
    REQUIRE(again.atoms.size() == target.atoms.size());
    for (size_t i = 0; i < target.atoms.size(); ++i)
        CHECK(again.atoms[i].prob == target.atoms[i].prob);
}

TEST_CASE("the matched-beliefs pair is infeasible by its mean") {
    auto verdict = check_mediator_feasibility(imp_distribution(), half_half(), half_half());
    REQUIRE(verdict.status == FeasStatus::Infeasible);
    REQUIRE(verdict.mean_certificate.has_value());
    CHECK(*verdict.mean_certificate ==
          ObserverPosterior{{{rat(5, 16), rat(3, 16)}, {rat(3, 16), rat(5, 16)}}});
}

TEST_CASE("point mass at the prior is mediator feasible") {
    auto verdict = check_mediator_feasibility(prior_point_mass(half_half(), half_half()),
                                              half_half(), half_half());
    CHECK(verdict.status == FeasStatus::Feasible);
}

TEST_CASE("mediator-induced distributions are always mediator feasible") {
    oracle::Rng rng(82);
    for (int trial = 0; trial < 30; ++trial) {
        int na = oracle::rand_int(rng, 1, 3), nb = oracle::rand_int(rng, 1, 3);
        Belief pa = oracle::rand_belief(rng, na, false);
        Belief pb = oracle::rand_belief(rng, nb, false);
        auto p = oracle::rand_mediator(rng, na, nb, 3);
        auto j = induced_joint_posterior(p, pa, pb);
        auto verdict = check_mediator_feasibility(j, pa, pb);
        CHECK(verdict.status == FeasStatus::Feasible);
    }
}

TEST_CASE("hand witness for the four-point target verifies at two rounds") {
    auto j = si_distribution();
    auto w = si_witness();
    CHECK(verify_witness(j, w, 2, half_half(), half_half()));
    CHECK_FALSE(verify_witness(j, w, 1, half_half(), half_half()));  // needs both rounds

    // perturbing one z entry breaks a convex identity
    auto bad = w;
    bad.root.point.z[0] = rat(14, 48);
    CHECK_FALSE(verify_witness(j, bad, 2, half_half(), half_half()));

    // wrong priors are rejected at the root
    CHECK_FALSE(verify_witness(j, w, 2, make_belief({rat(2, 5), rat(3, 5)}), half_half()));
}

TEST_CASE("single-leaf witness certifies the prior point mass") {
    Belief pa = half_half(), pb = make_belief({rat(3, 5), rat(2, 5)});
    auto j = prior_point_mass(pa, pb);
    SplitWitness w;
    w.support = {{pb, pa}};
    w.root.kind = SplitKind::Leaf;
    w.root.point = {pb, pa, {rat(1)}};
    CHECK(verify_witness(j, w, 0, pa, pb));
}

TEST_CASE("searching finds the four-point witness at depth two") {
    auto j = si_distribution();
    auto verdict = search_witness(j, 2, half_half(), half_half());
    REQUIRE(verdict.status == FeasStatus::Feasible);
    REQUIRE(verdict.witness.has_value());
    CHECK(verify_witness(j, *verdict.witness, 2, half_half(), half_half()));

    // the reconstructed conversation induces the target exactly
    auto c = witness_to_conversation(*verdict.witness, half_half(), half_half());
    auto induced = induced_joint_posterior(c, half_half(), half_half());
    REQUIRE(induced.atoms.size() == j.atoms.size());
    for (size_t i = 0; i < j.atoms.size(); ++i) {
        CHECK(induced.atoms[i].prob == j.atoms[i].prob);
        CHECK(induced.atoms[i].q_b == j.atoms[i].q_b);
        CHECK(induced.atoms[i].q_a == j.atoms[i].q_a);
    }
}

TEST_CASE("search returns the mediator certificate when types correlate") {
    Game g = mediator_dec_game();
    auto verdict = search_witness(dec_distribution(), 3, g.prior_a, g.prior_b);
    CHECK(verdict.status == FeasStatus::Infeasible);
    CHECK(verdict.detail.find("factorize") != std::string::npos);
}

TEST_CASE("search flags the infeasible pair by its mean") {
    auto verdict = search_witness(imp_distribution(), 3, half_half(), half_half());
    CHECK(verdict.status == FeasStatus::Infeasible);
    REQUIRE(verdict.mean_certificate.has_value());
    CHECK(*verdict.mean_certificate ==
          ObserverPosterior{{{rat(5, 16), rat(3, 16)}, {rat(3, 16), rat(5, 16)}}});
}

TEST_CASE("prior point mass is feasible at depth zero") {
    Belief pa = half_half(), pb = make_belief({rat(3, 5), rat(2, 5)});
    auto verdict = search_witness(prior_point_mass(pa, pb), 0, pa, pb);
    REQUIRE(verdict.status == FeasStatus::Feasible);
    CHECK(verdict.witness->root.kind == SplitKind::Leaf);
    auto c = witness_to_conversation(*verdict.witness, pa, pb);
    CHECK(c.num_rounds() == 0);
}

TEST_CASE("witness reversal reproduces the walk fixture's distribution") {
    auto c = two_way_conversation();
    auto j = induced_joint_posterior(c, half_half(), half_half());
    auto verdict = search_witness(j, 2, half_half(), half_half());
    REQUIRE(verdict.status == FeasStatus::Feasible);
    auto rebuilt = witness_to_conversation(*verdict.witness, half_half(), half_half());
    CHECK(rebuilt.num_rounds() <= 2);
    auto induced = induced_joint_posterior(rebuilt, half_half(), half_half());
    REQUIRE(induced.atoms.size() == j.atoms.size());
    for (size_t i = 0; i < j.atoms.size(); ++i) {
        CHECK(induced.atoms[i].prob == j.atoms[i].prob);
        CHECK(induced.atoms[i].q_b == j.atoms[i].q_b);
        CHECK(induced.atoms[i].q_a == j.atoms[i].q_a);
    }
}

TEST_CASE("one-round conversations are recovered with the default grid") {
    oracle::Rng rng(83);
    int found = 0;
    for (int trial = 0; trial < 25; ++trial) {
        int na = oracle::rand_int(rng, 2, 3), nb = oracle::rand_int(rng, 2, 3);
        Belief pa = oracle::rand_belief(rng, na, false);
        Belief pb = oracle::rand_belief(rng, nb, false);
        ConversationProtocol c = oracle::rand_conversation(rng, na, nb, 1, 2);
        auto j = induced_joint_posterior(c, pa, pb);
        auto verdict = search_witness(j, 1, pa, pb);
        REQUIRE(verdict.status == FeasStatus::Feasible);
        auto rebuilt = witness_to_conversation(*verdict.witness, pa, pb);
        auto induced = induced_joint_posterior(rebuilt, pa, pb);
        REQUIRE(induced.atoms.size() == j.atoms.size());
        for (size_t i = 0; i < j.atoms.size(); ++i)
            CHECK(induced.atoms[i].prob == j.atoms[i].prob);
        ++found;
    }
    CHECK(found == 25);
}

TEST_CASE("two-round conversations are recovered given their interior beliefs") {
    oracle::Rng rng(84);
    for (int trial = 0; trial < 10; ++trial) {
        Belief pa = oracle::rand_belief(rng, 2, false);
        Belief pb = oracle::rand_belief(rng, 2, false);
        ConversationProtocol c = oracle::rand_conversation(rng, 2, 2, 2, 2);
        auto j = induced_joint_posterior(c, pa, pb);

        // hand the searcher every belief the protocol actually visits
        WitnessSearchOptions opts;
        auto walk = [&](auto&& self, const History& h) -> void {
            ReachMatrix m = reach_matrix(c, h, pa, pb);
            if (m.is_zero()) return;
            auto [qa, qb] = posteriors_at(c, h, pa, pb);
            opts.grid_q_a.push_back(qa);
            opts.grid_q_b.push_back(qb);
            if (h.size() == 2 * (size_t)c.num_rounds()) return;
            bool alice = h.size() % 2 == 0;
            int round = (int)(h.size() / 2);
            int count = alice ? (int)c.rounds[round].alice.size()
                              : (int)c.rounds[round].bob.size();
            for (int s = 0; s < count; ++s) {
                History child = h;
                child.push_back(s);
                self(self, child);
            }
        };
        walk(walk, {});

        auto verdict = search_witness(j, c.num_rounds(), pa, pb, opts);
        REQUIRE(verdict.status == FeasStatus::Feasible);
        auto rebuilt = witness_to_conversation(*verdict.witness, pa, pb);
        auto induced = induced_joint_posterior(rebuilt, pa, pb);
        REQUIRE(induced.atoms.size() == j.atoms.size());
        for (size_t i = 0; i < j.atoms.size(); ++i)
            CHECK(induced.atoms[i].prob == j.atoms[i].prob);
    }
}

TEST_CASE("exhausted budgets surface as unknown") {
    auto j = si_distribution();
    WitnessSearchOptions opts;
    opts.budget = 3;
    auto verdict = search_witness(j, 2, half_half(), half_half(), opts);
    CHECK(verdict.status == FeasStatus::Unknown);
}
