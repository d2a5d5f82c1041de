#pragma once

#include <string>
#include <vector>

#include "convo/conversation.hpp"
#include "convo/game.hpp"
#include "convo/mediator.hpp"

namespace convo {

enum class IRNotion { ExAnte, Interim, ExPost, NonCommittedInterim };

std::string ir_notion_name(IRNotion n);

struct IRViolation {
    std::string context;  // Bob type / transcript / node
    Rational lhs, rhs;    // violated means lhs < rhs exactly
};

struct IRReport {
    IRNotion notion = IRNotion::ExAnte;
    bool pass = true;
    std::vector<IRViolation> violations;
    std::vector<int> no_comm_actions;        // r^0 per Alice type
    Rational baseline_ex_ante;               // Bob's no-communication value
    std::vector<Rational> baseline_per_type;  // per Bob type
};

// Public outcome family shared by both protocol classes: one entry per
// positive-probability signal/transcript.
struct ProtocolOutcomes {
    std::vector<std::string> labels;
    std::vector<std::pair<Rational, ObserverPosterior>> family;
};

ProtocolOutcomes outcomes_of(const Game& g, const MediatorProtocol& p);
ProtocolOutcomes outcomes_of(const Game& g, const ConversationProtocol& c,
                             long budget = kDefaultTranscriptBudget);

IRReport exante_ir(const Game& g, const JointPosteriorDistribution& j);
IRReport interim_ir(const Game& g, const JointPosteriorDistribution& j);
IRReport expost_ir(const Game& g, const ProtocolOutcomes& outcomes);

IRReport exante_ir(const Game& g, const MediatorProtocol& p);
IRReport exante_ir(const Game& g, const ConversationProtocol& c,
                   long budget = kDefaultTranscriptBudget);
IRReport interim_ir(const Game& g, const MediatorProtocol& p);
IRReport interim_ir(const Game& g, const ConversationProtocol& c,
                    long budget = kDefaultTranscriptBudget);
IRReport expost_ir(const Game& g, const MediatorProtocol& p);
IRReport expost_ir(const Game& g, const ConversationProtocol& c,
                   long budget = kDefaultTranscriptBudget);

// Continue-vs-quit comparison at every positive-probability node; quitting
// means Alice best-responds to her current belief immediately.
IRReport noncommitted_interim_ir(const Game& g, const ConversationProtocol& c,
                                 long budget = kDefaultTranscriptBudget);
// Mediator protocols have no mid-protocol node to quit at.
IRReport noncommitted_interim_ir(const Game& g, const MediatorProtocol& p);

// The action taker never loses from communication; this re-checks all four
// notions from Alice's side (used by property tests).
IRReport alice_auto_ir(const Game& g, const ConversationProtocol& c,
                       long budget = kDefaultTranscriptBudget);
IRReport alice_auto_ir(const Game& g, const MediatorProtocol& p);

// Per-type quit values at every node, shared with the repeated-game module.
struct NodeQuitValue {
    History history;
    int type_b;
    Rational value;
};
std::vector<NodeQuitValue> node_quit_values(const Game& g, const ConversationProtocol& c,
                                            long budget = kDefaultTranscriptBudget);

}  // namespace convo
