#pragma once

#include <map>
#include <string>
#include <vector>

#include "convo/belief.hpp"

namespace convo {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transcript prefix as alternating signal indices (a1, b1, a2, b2, ...).
// Odd length means Alice has just moved and Bob's reply is pending.
using History = std::vector<int>;

struct RoundSignals {
    std::vector<std::string> alice, bob;
};

// Round-by-round signaling kernels, stored extensionally per reachable
// history so protocols serialize and replay exactly.
struct ConversationProtocol {
    std::vector<std::string> types_a, types_b;
    std::vector<RoundSignals> rounds;
    std::map<History, std::vector<std::vector<Rational>>> alice_kernel;  // key: even-length history
    std::map<History, std::vector<std::vector<Rational>>> bob_kernel;    // key: odd-length history

    int num_rounds() const { return (int)rounds.size(); }
    int num_types_a() const { return (int)types_a.size(); }
    int num_types_b() const { return (int)types_b.size(); }
};

// Unnormalized joint probability of (theta_A, theta_B, history).
struct ReachMatrix {
    std::vector<std::vector<Rational>> m;  // [type_a][type_b]

    Rational total() const;
    bool is_zero() const { return total().is_zero(); }
    ObserverPosterior normalized() const;
};

constexpr long kDefaultTranscriptBudget = 100000;

ReachMatrix reach_matrix(const ConversationProtocol& c, const History& h,
                         const Belief& prior_a, const Belief& prior_b);

// (q_A, q_B) at a positive-probability history.
std::pair<Belief, Belief> posteriors_at(const ConversationProtocol& c, const History& h,
                                        const Belief& prior_a, const Belief& prior_b);

struct TranscriptLeaf {
    History history;
    Rational prob;
    ReachMatrix reach;
};

// Exhaustive enumeration of positive-probability complete transcripts, in
// canonical (lexicographic signal index) order.
std::vector<TranscriptLeaf> simulate(const ConversationProtocol& c, const Belief& prior_a,
                                     const Belief& prior_b,
                                     long budget = kDefaultTranscriptBudget);

JointPosteriorDistribution induced_joint_posterior(const ConversationProtocol& c,
                                                   const Belief& prior_a, const Belief& prior_b,
                                                   long budget = kDefaultTranscriptBudget);

struct TraceNode {
    History history;
    int parent = -1;                 // index into nodes; -1 at the root
    Rational prob;                   // unconditional reach probability
    Rational edge_prob;              // conditional on the parent
    Belief q_a, q_b;
    std::vector<Rational> gamma;     // conditional law of the final belief pair
};

struct DimartingaleTrace {
    std::vector<std::pair<Belief, Belief>> final_pairs;  // (q_B, q_A), canonical order
    std::vector<TraceNode> nodes;                         // preorder, root first
};

struct DimartingaleReport {
    bool pass = true;
    std::vector<std::string> issues;
};

// Verifies that (q_A, q_B, gamma) moves one coordinate at a time and is a
// martingale across every move.
std::pair<DimartingaleTrace, DimartingaleReport> dimartingale_audit(
    const ConversationProtocol& c, const Belief& prior_a, const Belief& prior_b,
    long budget = kDefaultTranscriptBudget);

void validate(const ConversationProtocol& c);

// Dotted signal-name form of a transcript, "" for the empty history.
std::string history_label(const ConversationProtocol& c, const History& h);

}  // namespace convo
