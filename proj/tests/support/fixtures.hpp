#pragma once

#include "convo/conversation.hpp"
#include "convo/feasibility.hpp"
#include "convo/game.hpp"
#include "convo/mediator.hpp"

namespace convo::testfix {

// Two-round conversation on symmetric H/L types and uniform priors.  The
// belief walk: Alice splits q_A to 1/4 or 3/4; Bob splits q_B to {0, 3/4}
// after "down" and to {3/10, 9/10} after "up"; Alice then splits q_A to
// {0, 1} at (up, right) and randomizes uninformatively elsewhere, so every
// transcript has full length and there are 8 leaves.
inline ConversationProtocol two_way_conversation() {
    ConversationProtocol c;
    c.types_a = {"H", "L"};
    c.types_b = {"H", "L"};
    c.rounds = {{{"down", "up"}, {"left", "right"}}, {{"down", "up"}, {"end"}}};
    c.alice_kernel[{}] = {{rat(1, 4), rat(3, 4)}, {rat(3, 4), rat(1, 4)}};
    c.bob_kernel[{0}] = {{rat(0), rat(1)}, {rat(2, 3), rat(1, 3)}};
    c.bob_kernel[{1}] = {{rat(2, 5), rat(3, 5)}, {rat(14, 15), rat(1, 15)}};
    for (History h : {History{0, 0}, History{0, 1}, History{1, 0}})
        c.alice_kernel[h] = {{rat(1, 4), rat(3, 4)}, {rat(1, 4), rat(3, 4)}};
    c.alice_kernel[{1, 1}] = {{rat(0), rat(1)}, {rat(1), rat(0)}};
    for (int a1 = 0; a1 < 2; ++a1)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int a2 = 0; a2 < 2; ++a2) c.bob_kernel[{a1, b1, a2}] = {{rat(1)}, {rat(1)}};
    return c;
}

inline Belief half_half() { return make_belief({rat(1, 2), rat(1, 2)}); }

// One-action placeholder game carrying the two-way fixture's type spaces.
inline Game two_way_game() {
    Game g;
    g.types_a = {"H", "L"};
    g.types_b = {"H", "L"};
    g.actions = {"act"};
    g.prior_a = half_half();
    g.prior_b = half_half();
    g.util_a = {{{rat(0)}, {rat(0)}}, {{rat(0)}, {rat(0)}}};
    g.util_b = {{{rat(0)}, {rat(0)}}, {{rat(0)}, {rat(0)}}};
    g.tie_break = {0};
    return g;
}

// The employer-candidate mediator: reveal the candidate fully to Prog
// employers, partially to Comm employers.
inline MediatorProtocol table_signal_mediator() {
    MediatorProtocol p;
    p.types_a = {"Prog", "Comm"};
    p.types_b = {"Prog", "Comm"};
    p.signals = {"s1", "s2"};
    p.kernel = {{{rat(0), rat(1)}, {rat(1), rat(0)}},
                {{rat(2, 3), rat(1, 3)}, {rat(1), rat(0)}}};
    return p;
}

// H/L game shell for the mediator-decomposition example: P(A=H)=1/2,
// P(B=H)=3/5.
inline Game mediator_dec_game() {
    Game g;
    g.types_a = {"H", "L"};
    g.types_b = {"H", "L"};
    g.actions = {"act"};
    g.prior_a = half_half();
    g.prior_b = make_belief({rat(3, 5), rat(2, 5)});
    g.util_a = {{{rat(0)}, {rat(0)}}, {{rat(0)}, {rat(0)}}};
    g.util_b = {{{rat(0)}, {rat(0)}}, {{rat(0)}, {rat(0)}}};
    g.tie_break = {0};
    return g;
}

inline MediatorProtocol mediator_dec_protocol() {
    MediatorProtocol p;
    p.types_a = {"H", "L"};
    p.types_b = {"H", "L"};
    p.signals = {"s1", "s2"};
    p.kernel = {{{rat(0), rat(1)}, {rat(1), rat(0)}},
                {{rat(2, 3), rat(1, 3)}, {rat(1), rat(0)}}};
    return p;
}

// Joint posterior distribution with product-consistent atoms at the given
// (q_B, q_A) support points.
inline JointPosteriorDistribution product_distribution(
    const std::vector<std::tuple<Belief, Belief, Rational>>& pairs, int na, int nb) {
    JointPosteriorDistribution j;
    j.num_types_a = na;
    j.num_types_b = nb;
    for (const auto& [qb, qa, prob] : pairs)
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                Rational p = prob * qa[x] * qb[y];
                if (!p.is_zero()) j.atoms.push_back({x, y, qb, qa, p});
            }
    canonicalize(j);
    return j;
}

inline Belief b2(long long num, long long den) {
    return make_belief({rat(num, den), rat(den - num, den)});
}

// Four-point feasible target on uniform priors: support (q_B(H), q_A(H)) in
// {(1/4,0), (1/4,1), (1,3/4), (3/4,1/4)} with weights 13/48, 5/16, 1/6, 1/4.
inline JointPosteriorDistribution si_distribution() {
    return product_distribution({{b2(1, 4), b2(0, 1), rat(13, 48)},
                                 {b2(1, 4), b2(1, 1), rat(5, 16)},
                                 {b2(1, 1), b2(3, 4), rat(1, 6)},
                                 {b2(3, 4), b2(1, 4), rat(1, 4)}},
                                2, 2);
}

// The hand decomposition of the four-point target: Alice splits q_A to
// {1/4, 3/4}, Bob splits q_B, Alice finishes {0, 1}.
inline SplitWitness si_witness() {
    auto zvec = [](std::initializer_list<Rational> v) { return std::vector<Rational>(v); };
    SplitWitness w;
    w.support = {{b2(1, 4), b2(0, 1)},
                 {b2(1, 4), b2(1, 1)},
                 {b2(3, 4), b2(1, 4)},
                 {b2(1, 1), b2(3, 4)}};

    SplitNode leaf1{{b2(1, 4), b2(0, 1), zvec({rat(1), rat(0), rat(0), rat(0)})}};
    SplitNode leaf2{{b2(1, 4), b2(1, 1), zvec({rat(0), rat(1), rat(0), rat(0)})}};
    SplitNode leaf4{{b2(3, 4), b2(1, 4), zvec({rat(0), rat(0), rat(1), rat(0)})}};
    SplitNode leaf3{{b2(1, 1), b2(3, 4), zvec({rat(0), rat(0), rat(0), rat(1)})}};

    SplitNode n3{{b2(1, 4), b2(1, 4), zvec({rat(3, 4), rat(1, 4), rat(0), rat(0)})},
                 SplitKind::ASplit,
                 {rat(3, 4), rat(1, 4)},
                 {leaf1, leaf2}};
    SplitNode n4{{b2(1, 4), b2(3, 4), zvec({rat(1, 4), rat(3, 4), rat(0), rat(0)})},
                 SplitKind::ASplit,
                 {rat(1, 4), rat(3, 4)},
                 {leaf1, leaf2}};
    SplitNode n1{{b2(1, 2), b2(1, 4), zvec({rat(3, 8), rat(1, 8), rat(1, 2), rat(0)})},
                 SplitKind::BSplit,
                 {rat(1, 2), rat(1, 2)},
                 {n3, leaf4}};
    SplitNode n2{{b2(1, 2), b2(3, 4), zvec({rat(1, 6), rat(1, 2), rat(0), rat(1, 3)})},
                 SplitKind::BSplit,
                 {rat(2, 3), rat(1, 3)},
                 {n4, leaf3}};
    w.root = SplitNode{
        {b2(1, 2), b2(1, 2), zvec({rat(13, 48), rat(5, 16), rat(1, 4), rat(1, 6)})},
        SplitKind::ASplit,
        {rat(1, 2), rat(1, 2)},
        {n1, n2}};
    return w;
}

// The mean-preserving but infeasible pair: both players at 3/4 together or
// both at 1/4 together, uniform priors.
inline JointPosteriorDistribution imp_distribution() {
    return product_distribution(
        {{b2(3, 4), b2(3, 4), rat(1, 2)}, {b2(1, 4), b2(1, 4), rat(1, 2)}}, 2, 2);
}

}  // namespace convo::testfix
