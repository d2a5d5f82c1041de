#pragma once

#include <functional>
#include <string>
#include <vector>

#include "convo/belief.hpp"
#include "convo/rational.hpp"

namespace convo {

// Base game: Alice is the only action taker.  util_a is indexed
// (type_a, type_b, action); util_b is indexed (type_b, type_a, action).
struct Game {
    std::vector<std::string> types_a, types_b, actions;
    Belief prior_a, prior_b;
    std::vector<std::vector<std::vector<Rational>>> util_a;
    std::vector<std::vector<std::vector<Rational>>> util_b;
    std::vector<int> tie_break;  // action indices, most preferred first

    int num_types_a() const { return (int)types_a.size(); }
    int num_types_b() const { return (int)types_b.size(); }
    int num_actions() const { return (int)actions.size(); }

    const Rational& ua(int ta, int tb, int r) const { return util_a[ta][tb][r]; }
    const Rational& ub(int tb, int ta, int r) const { return util_b[tb][ta][r]; }

    int type_a_index(const std::string& label) const;
    int type_b_index(const std::string& label) const;
    int action_index(const std::string& label) const;
};

void validate(const Game& g);

// argmax_r E_{theta_B ~ belief_b} u_A(type_a, theta_B, r), ties by g.tie_break.
int best_response(const Game& g, int type_a, const Belief& belief_b);

Rational expected_ua(const Game& g, int type_a, const Belief& belief_b, int action);
Rational expected_ub(const Game& g, int type_b, const Belief& belief_a,
                     const std::function<int(int)>& action_of_type_a);

// Alice's play per type absent any communication.
std::vector<int> no_comm_profile(const Game& g);

Game builtin_employer_candidate();

// Bilateral trade on finite value grids; prices are the union of both grids.
Game builtin_bilateral_trade(const std::vector<Rational>& value_grid_a,
                             const std::vector<Rational>& value_grid_b,
                             const Belief& prior_a, const Belief& prior_b);

// Reduction of a two-player Stackelberg game: Bob's reply is folded into the
// utility tables.  g_a is indexed (r_a, r_b, type_a), g_b (r_a, r_b, type_b);
// bob_tie_break orders Bob's actions, most preferred first.
Game from_stackelberg(const std::vector<std::vector<std::vector<Rational>>>& g_a,
                      const std::vector<std::vector<std::vector<Rational>>>& g_b,
                      const std::vector<std::string>& actions_a,
                      const std::vector<std::string>& actions_b,
                      const std::vector<std::string>& types_a,
                      const std::vector<std::string>& types_b,
                      const Belief& prior_a, const Belief& prior_b,
                      const std::vector<int>& bob_tie_break);

}  // namespace convo
