#pragma once

#include <string>
#include <vector>

#include "convo/belief.hpp"
#include "convo/conversation.hpp"

namespace convo {

// Single public signal from a trusted third party who sees both types.
struct MediatorProtocol {
    std::vector<std::string> types_a, types_b;
    std::vector<std::string> signals;
    std::vector<std::vector<std::vector<Rational>>> kernel;  // [type_a][type_b][signal]

    int num_types_a() const { return (int)types_a.size(); }
    int num_types_b() const { return (int)types_b.size(); }
    int num_signals() const { return (int)signals.size(); }
};

void validate(const MediatorProtocol& p);

struct SignalOutcome {
    int signal = 0;
    Rational prob;
    ObserverPosterior posterior;
};

std::vector<SignalOutcome> induced_observer_distribution(const MediatorProtocol& p,
                                                         const Belief& prior_a,
                                                         const Belief& prior_b);

JointPosteriorDistribution induced_joint_posterior(const MediatorProtocol& p,
                                                   const Belief& prior_a, const Belief& prior_b);

// Inverts a target family of observer posteriors into a signaling kernel;
// rows for zero-prior type pairs are uniform.
MediatorProtocol construct_from_posterior_family(
    const std::vector<std::pair<Rational, ObserverPosterior>>& targets, const Belief& prior_a,
    const Belief& prior_b);

// Publishes the whole transcript as the mediator's signal; the induced joint
// posterior distribution is unchanged.
MediatorProtocol conversation_to_mediator(const ConversationProtocol& c, const Belief& prior_a,
                                          const Belief& prior_b,
                                          long budget = kDefaultTranscriptBudget);

}  // namespace convo
