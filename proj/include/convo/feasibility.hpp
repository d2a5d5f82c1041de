#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convo/belief.hpp"
#include "convo/conversation.hpp"

namespace convo {

// One node value of the alternating convex-decomposition certificate:
// a belief pair plus a distribution z over the target's (q_B, q_A) support.
struct SplitPoint {
    Belief q_b, q_a;
    std::vector<Rational> z;
};

enum class SplitKind { Leaf, ASplit, BSplit };

// A-split children share q_B (Alice signals, q_A decomposes);
// B-split children share q_A.
struct SplitNode {
    SplitPoint point;
    SplitKind kind = SplitKind::Leaf;
    std::vector<Rational> weights;
    std::vector<SplitNode> children;
};

struct SplitWitness {
    std::vector<std::pair<Belief, Belief>> support;  // base points (q_B, q_A)
    SplitNode root;
};

enum class FeasStatus { Feasible, Infeasible, Unknown };

struct FeasibilityVerdict {
    FeasStatus status = FeasStatus::Unknown;
    std::string detail;  // violated necessary condition, or budget/grid note
    std::optional<SplitWitness> witness;
    std::optional<std::vector<std::pair<Rational, ObserverPosterior>>> observer_family;
    std::optional<ObserverPosterior> mean_certificate;
};

// Condition: P(theta_A, theta_B | q_B, q_A) = q_A(theta_A) * q_B(theta_B).
// Necessary for conversations, not for mediator protocols.
bool check_product_condition(const JointPosteriorDistribution& j);

// Decides whether some family of observer posteriors reproduces the atoms
// with the correct mean.  Feasible verdicts carry the reconstructed family.
FeasibilityVerdict check_mediator_feasibility(const JointPosteriorDistribution& j,
                                              const Belief& prior_a, const Belief& prior_b,
                                              long budget = 200000);

bool verify_witness(const JointPosteriorDistribution& j, const SplitWitness& w, int rounds,
                    const Belief& prior_a, const Belief& prior_b);

struct WitnessSearchOptions {
    long budget = 50000;           // stored intermediate points
    std::vector<Belief> grid_q_b;  // extra intermediate coordinates
    std::vector<Belief> grid_q_a;
};

// Depth-bounded search for a split witness with intermediate coordinates on
// a finite grid (target support plus priors plus user additions).  Grid
// or budget exhaustion yields Unknown, never a false Infeasible.
FeasibilityVerdict search_witness(const JointPosteriorDistribution& j, int rounds,
                                  const Belief& prior_a, const Belief& prior_b,
                                  const WitnessSearchOptions& opts = {});

// Reverses a verified witness into a conversation whose induced joint
// posterior distribution is exactly the witnessed one.
ConversationProtocol witness_to_conversation(const SplitWitness& w, const Belief& prior_a,
                                             const Belief& prior_b);

}  // namespace convo
