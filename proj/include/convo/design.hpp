#pragma once

#include <vector>

#include "convo/conversation.hpp"
#include "convo/game.hpp"
#include "convo/mediator.hpp"

namespace convo {

enum class IRConstraint { None, ExAnte, Interim };

using ObjectiveTensor = std::vector<std::vector<std::vector<Rational>>>;  // (ta, tb, r)

ObjectiveTensor welfare_objective(const Game& g);
ObjectiveTensor alice_objective(const Game& g);
ObjectiveTensor bob_objective(const Game& g);

struct DesignProblem {
    Game game;
    IRConstraint ir = IRConstraint::None;
    ObjectiveTensor objective;
};

// x[ta][r][tb] = P(theta_A, recommended action, theta_B).
struct RecommendationScheme {
    std::vector<std::vector<std::vector<Rational>>> x;
};

void validate_scheme(const RecommendationScheme& s, const Game& g);

struct DesignResult {
    Rational value;
    RecommendationScheme scheme;
};

// Exact LP over obedient recommendation schemes with the selected IR rows;
// the uninformative scheme is always feasible.
DesignResult optimize(const DesignProblem& p);

MediatorProtocol scheme_to_mediator(const RecommendationScheme& s, const Game& g);

// Alice reveals her type, then Bob splits her belief to the scheme's
// per-type posterior family.
ConversationProtocol scheme_to_one_round_conversation(const RecommendationScheme& s,
                                                      const Game& g);

struct ParetoPoint {
    Rational lambda, e_ua, e_ub;
};

// Weighted-sum scalarization; ties at a given weight resolve toward Alice so
// the sweep is monotone.
std::vector<ParetoPoint> pareto_frontier(const Game& g, IRConstraint ir,
                                         const std::vector<Rational>& weights);

enum class SearchFilter { ExPost, NonCommitted };

struct ConversationSearchResult {
    Rational best_value;
    ConversationProtocol best;
    bool budget_exhausted = false;
};

// Exhaustive enumeration of conversations whose moves split the current
// belief across a finite grid, filtered by the chosen IR notion.  The result
// is a lower bound on the constrained optimum within the search class.
ConversationSearchResult search_expost_conversation(const Game& g, const ObjectiveTensor& u,
                                                    SearchFilter filter, int max_rounds,
                                                    int branching,
                                                    const std::vector<Belief>& grid_b,
                                                    const std::vector<Belief>& grid_a,
                                                    long budget = 100000);

}  // namespace convo
