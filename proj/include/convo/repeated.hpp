#pragma once

#include "convo/conversation.hpp"
#include "convo/game.hpp"
#include "convo/ir.hpp"

namespace convo {

enum class Punishment { ZeroFuture, NoCommFuture };

// Discounted infinite repetition of a base game, audited over a truncated
// horizon; stationarity supplies the tail in closed form.
struct RepeatedSpec {
    Game base;
    ConversationProtocol protocol;
    Rational delta;  // discount, 0 <= delta < 1
    Punishment punishment = Punishment::ZeroFuture;
    int horizon = 2;
};

// Bob's committed expected value of one protocol copy (u*_B).
Rational committed_value(const Game& g, const ConversationProtocol& c,
                         long budget = kDefaultTranscriptBudget);

// Best payoff Bob can grab by stopping at some node (u-bar_B): max over
// positive-probability nodes and surviving types of the quit value.
Rational quit_ceiling(const Game& g, const ConversationProtocol& c,
                      long budget = kDefaultTranscriptBudget);

// delta* = 1 - u*_B / u-bar_B under ZeroFuture semantics, clamped to [0, 1);
// requires u*_B > 0.
Rational delta_threshold(const Game& g, const ConversationProtocol& c,
                         long budget = kDefaultTranscriptBudget);

// Continue-vs-quit at every node of the first `horizon` copies.  Continuing
// is worth the committed stream u*_B/(1-delta) measured from the copy start;
// quitting pays the node quit value plus the punishment stream.
IRReport audit_repeated_ir(const RepeatedSpec& spec, long budget = kDefaultTranscriptBudget);

// Bob's discounted value when he never quits: u*_B/(1-delta), assembled from
// the truncated copies plus the stationary tail.
Rational committed_super_value(const RepeatedSpec& spec,
                               long budget = kDefaultTranscriptBudget);

}  // namespace convo
