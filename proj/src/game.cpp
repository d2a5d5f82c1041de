#include "convo/game.hpp"

#include <algorithm>
#include <set>

namespace convo {

namespace {

int label_index(const std::vector<std::string>& labels, const std::string& label,
                const char* what) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw DomainError(std::string("unknown ") + what + ": " + label);
    return (int)(it - labels.begin());
}

}  // namespace

int Game::type_a_index(const std::string& label) const {
    return label_index(types_a, label, "Alice type");
}
int Game::type_b_index(const std::string& label) const {
    return label_index(types_b, label, "Bob type");
}
int Game::action_index(const std::string& label) const {
    return label_index(actions, label, "action");
}

void validate(const Game& g) {
    if (g.types_a.empty() || g.types_b.empty() || g.actions.empty())
        throw DomainError("type spaces and action set must be nonempty");
    if (g.prior_a.size() != g.num_types_a() || g.prior_b.size() != g.num_types_b())
        throw DomainError("prior dimension mismatch");
    if (!is_distribution(g.prior_a.w) || !is_distribution(g.prior_b.w))
        throw DomainError("priors must be distributions");
    auto check_tensor = [&](const auto& t, int d0, int d1, const char* name) {
        if ((int)t.size() != d0) throw DomainError(std::string(name) + " table has wrong shape");
        for (const auto& mid : t) {
            if ((int)mid.size() != d1) throw DomainError(std::string(name) + " table has wrong shape");
            for (const auto& row : mid)
                if ((int)row.size() != g.num_actions())
                    throw DomainError(std::string(name) + " table has wrong shape");
        }
    };
    check_tensor(g.util_a, g.num_types_a(), g.num_types_b(), "utilA");
    check_tensor(g.util_b, g.num_types_b(), g.num_types_a(), "utilB");
    if ((int)g.tie_break.size() != g.num_actions())
        throw DomainError("tieBreak must order every action");
    std::set<int> seen(g.tie_break.begin(), g.tie_break.end());
    if ((int)seen.size() != g.num_actions() || *seen.begin() != 0 ||
        *seen.rbegin() != g.num_actions() - 1)
        throw DomainError("tieBreak must be a permutation of the actions");
}

Rational expected_ua(const Game& g, int type_a, const Belief& belief_b, int action) {
    Rational v = 0;
    for (int y = 0; y < g.num_types_b(); ++y) v += belief_b[y] * g.ua(type_a, y, action);
    return v;
}

Rational expected_ub(const Game& g, int type_b, const Belief& belief_a,
                     const std::function<int(int)>& action_of_type_a) {
    Rational v = 0;
    for (int x = 0; x < g.num_types_a(); ++x)
        v += belief_a[x] * g.ub(type_b, x, action_of_type_a(x));
    return v;
}

int best_response(const Game& g, int type_a, const Belief& belief_b) {
    if (type_a < 0 || type_a >= g.num_types_a()) throw DomainError("unknown Alice type index");
    if (belief_b.size() != g.num_types_b() || !is_distribution(belief_b.w))
        throw DomainError("belief over Bob's types expected");
    int best = -1;
    Rational best_value;
    for (int r : g.tie_break) {
        Rational v = expected_ua(g, type_a, belief_b, r);
        if (best < 0 || v > best_value) {
            best = r;
            best_value = v;
        }
    }
    return best;
}

std::vector<int> no_comm_profile(const Game& g) {
    std::vector<int> profile(g.num_types_a());
    for (int x = 0; x < g.num_types_a(); ++x) profile[x] = best_response(g, x, g.prior_b);
    return profile;
}

Game builtin_employer_candidate() {
    Game g;
    g.types_a = {"Prog", "Comm"};
    g.types_b = {"Prog", "Comm"};
    g.actions = {"hire", "not_hire"};
    g.prior_a = make_belief({rat(1, 2), rat(1, 2)});
    g.prior_b = make_belief({rat(3, 5), rat(2, 5)});
    g.util_a = {{{rat(10), rat(0)}, {rat(-10), rat(0)}},
                {{rat(-1), rat(0)}, {rat(1), rat(0)}}};
    // The candidate just wants the job, whoever the employer is.
    auto row = std::vector<Rational>{rat(2), rat(0)};
    g.util_b = {{row, row}, {row, row}};
    g.tie_break = {0, 1};  // hire first: ties go the candidate's way
    return g;
}

Game builtin_bilateral_trade(const std::vector<Rational>& value_grid_a,
                             const std::vector<Rational>& value_grid_b,
                             const Belief& prior_a, const Belief& prior_b) {
    if (value_grid_a.empty() || value_grid_b.empty())
        throw DomainError("value grids must be nonempty");
    for (const auto& v : value_grid_a)
        if (v < 0 || v > 1) throw DomainError("seller value outside [0,1]");
    for (const auto& v : value_grid_b)
        if (v < 0 || v > 1) throw DomainError("buyer value outside [0,1]");

    std::set<Rational> price_set(value_grid_b.begin(), value_grid_b.end());
    price_set.insert(value_grid_a.begin(), value_grid_a.end());
    std::vector<Rational> prices(price_set.begin(), price_set.end());

    Game g;
    for (const auto& v : value_grid_a) g.types_a.push_back(rational_str(v));
    for (const auto& v : value_grid_b) g.types_b.push_back(rational_str(v));
    for (const auto& p : prices) g.actions.push_back(rational_str(p));
    g.prior_a = prior_a;
    g.prior_b = prior_b;
    if (prior_a.size() != (int)value_grid_a.size() || prior_b.size() != (int)value_grid_b.size())
        throw DomainError("prior dimension mismatch");

    const int na = (int)value_grid_a.size(), nb = (int)value_grid_b.size(),
              nr = (int)prices.size();
    g.util_a.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(nr)));
    g.util_b.assign(nb, std::vector<std::vector<Rational>>(na, std::vector<Rational>(nr)));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            for (int r = 0; r < nr; ++r) {
                bool trades = prices[r] <= value_grid_b[y];
                g.util_a[x][y][r] = trades ? prices[r] - value_grid_a[x] : Rational(0);
                g.util_b[y][x][r] = trades ? value_grid_b[y] - prices[r] : Rational(0);
            }
    g.tie_break.resize(nr);
    for (int r = 0; r < nr; ++r) g.tie_break[r] = r;  // ascending price
    return g;
}

Game from_stackelberg(const std::vector<std::vector<std::vector<Rational>>>& g_a,
                      const std::vector<std::vector<std::vector<Rational>>>& g_b,
                      const std::vector<std::string>& actions_a,
                      const std::vector<std::string>& actions_b,
                      const std::vector<std::string>& types_a,
                      const std::vector<std::string>& types_b,
                      const Belief& prior_a, const Belief& prior_b,
                      const std::vector<int>& bob_tie_break) {
    const int nra = (int)actions_a.size(), nrb = (int)actions_b.size();
    const int na = (int)types_a.size(), nb = (int)types_b.size();
    if (nra == 0 || nrb == 0) throw DomainError("action sets must be nonempty");

    // Bob's best reply per (Alice action, Bob type).
    std::vector<std::vector<int>> reply(nra, std::vector<int>(nb));
    for (int ra = 0; ra < nra; ++ra)
        for (int y = 0; y < nb; ++y) {
            int best = -1;
            Rational best_value;
            for (int rb : bob_tie_break) {
                const Rational& v = g_b[ra][rb][y];
                if (best < 0 || v > best_value) {
                    best = rb;
                    best_value = v;
                }
            }
            reply[ra][y] = best;
        }

    Game g;
    g.types_a = types_a;
    g.types_b = types_b;
    g.actions = actions_a;
    g.prior_a = prior_a;
    g.prior_b = prior_b;
    g.util_a.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(nra)));
    g.util_b.assign(nb, std::vector<std::vector<Rational>>(na, std::vector<Rational>(nra)));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            for (int ra = 0; ra < nra; ++ra) {
                int rb = reply[ra][y];
                g.util_a[x][y][ra] = g_a[ra][rb][x];
                g.util_b[y][x][ra] = g_b[ra][rb][y];
            }
    g.tie_break.resize(nra);
    for (int r = 0; r < nra; ++r) g.tie_break[r] = r;
    return g;
}

}  // namespace convo
