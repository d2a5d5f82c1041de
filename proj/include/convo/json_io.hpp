#pragma once

#include <optional>
#include <string>

#include "convo/design.hpp"
#include "convo/feasibility.hpp"
#include "convo/game.hpp"
#include "convo/ir.hpp"

namespace convo {

// JSON documents: top-level "schema" and "version" fields, every number a
// canonical rational string.  Serialization is canonical (sorted keys, fixed
// layout) so load -> save -> load is byte-stable.

Game game_from_json(const std::string& text);
std::string game_to_json(const Game& g);

// A protocol document holds either a mediator or a conversation.
struct LoadedProtocol {
    std::optional<MediatorProtocol> mediator;
    std::optional<ConversationProtocol> conversation;
};
LoadedProtocol protocol_from_json(const std::string& text);
std::string mediator_to_json(const MediatorProtocol& p);
std::string conversation_to_json(const ConversationProtocol& c);

struct DistributionDocument {
    std::vector<std::string> types_a, types_b;
    JointPosteriorDistribution dist;
};
DistributionDocument distribution_from_json(const std::string& text);
std::string distribution_to_json(const DistributionDocument& doc);

SplitWitness witness_from_json(const std::string& text);
std::string witness_to_json(const SplitWitness& w);

// {"schema": "objective", "values": [ta][tb][r]} against a given game.
ObjectiveTensor objective_from_json(const std::string& text, const Game& g);

std::string ir_report_to_json(const IRReport& report);
std::string feasibility_verdict_to_json(const FeasibilityVerdict& verdict);
std::string scheme_to_json(const RecommendationScheme& s, const Game& g);
std::string pareto_to_json(const std::vector<ParetoPoint>& points);
std::string pareto_to_csv(const std::vector<ParetoPoint>& points);

}  // namespace convo
