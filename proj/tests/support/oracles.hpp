#pragma once

#include <random>

#include "convo/conversation.hpp"
#include "convo/design.hpp"
#include "convo/game.hpp"
#include "convo/linprog.hpp"
#include "convo/mediator.hpp"

namespace convo::oracle {

// Independent LP oracle: exhaustive basic-solution enumeration over the
// standard form.  Only supports all-nonnegative variables (which keeps the
// feasible region pointed, so optima sit on vertices).
struct OracleResult {
    LPStatus status = LPStatus::Infeasible;
    Rational value;
};

inline OracleResult oracle_solve(const LinearProgram& lp) {
    for (bool nn : lp.nonneg)
        if (!nn) throw std::logic_error("oracle handles nonnegative variables only");

    // Standard form columns: structural vars then one slack per inequality.
    const int n0 = lp.num_vars;
    int n = n0;
    std::vector<int> slack(lp.constraints.size(), -1);
    for (size_t i = 0; i < lp.constraints.size(); ++i)
        if (lp.constraints[i].rel != Relation::Equal) slack[i] = n++;

    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (size_t i = 0; i < lp.constraints.size(); ++i) {
        std::vector<Rational> row(n, Rational(0));
        for (int j = 0; j < n0; ++j) row[j] = lp.constraints[i].coeffs[j];
        if (slack[i] >= 0)
            row[slack[i]] = lp.constraints[i].rel == Relation::LessEq ? 1 : -1;
        rows.push_back(std::move(row));
        rhs.push_back(lp.constraints[i].rhs);
    }

    // Drop equality rows that are linear combinations of earlier ones (only
    // equality rows can repeat; a fresh slack column keeps every inequality
    // row independent).  Rows dependent on the left side but not the right
    // stay and correctly render every basis infeasible.
    {
        std::vector<std::vector<Rational>> pruned_rows;
        std::vector<Rational> pruned_rhs;
        std::vector<std::vector<Rational>> acc;
        auto independent = [&](std::vector<Rational> cand) {
            for (const auto& base : acc) {
                int lead = -1;
                for (int c = 0; c <= n; ++c)
                    if (!base[c].is_zero()) {
                        lead = c;
                        break;
                    }
                if (lead < 0 || cand[lead].is_zero()) continue;
                Rational f = cand[lead] / base[lead];
                for (int c = 0; c <= n; ++c) cand[c] -= f * base[c];
            }
            for (int c = 0; c <= n; ++c)
                if (!cand[c].is_zero()) {
                    acc.push_back(std::move(cand));
                    return true;
                }
            return false;
        };
        for (size_t i = 0; i < rows.size(); ++i) {
            if (slack[i] < 0) {
                auto cand = rows[i];
                cand.push_back(rhs[i]);
                if (!independent(std::move(cand))) continue;
            }
            pruned_rows.push_back(rows[i]);
            pruned_rhs.push_back(rhs[i]);
        }
        rows = std::move(pruned_rows);
        rhs = std::move(pruned_rhs);
    }

    const int m = (int)rows.size();
    if (m > n) return {LPStatus::Infeasible, Rational(0)};

    std::vector<Rational> cost(n, Rational(0));
    for (int j = 0; j < n0; ++j) cost[j] = lp.objective[j];

    bool any_feasible = false, unbounded = false;
    Rational best;

    std::vector<int> basis;
    auto try_basis = [&]() {
        // Eliminate [B | A | b] so the basis columns become the identity.
        std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + 1));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) t[i][j] = rows[i][j];
            t[i][n] = rhs[i];
        }
        for (int k = 0; k < m; ++k) {
            int col = basis[k], sel = -1;
            for (int r = k; r < m; ++r)
                if (!t[r][col].is_zero()) {
                    sel = r;
                    break;
                }
            if (sel < 0) return;  // singular basis
            std::swap(t[sel], t[k]);
            Rational inv = 1 / t[k][col];
            for (auto& v : t[k]) v *= inv;
            for (int r = 0; r < m; ++r) {
                if (r == k || t[r][col].is_zero()) continue;
                Rational f = t[r][col];
                for (int c = 0; c <= n; ++c) t[r][c] -= f * t[k][c];
            }
        }
        std::vector<Rational> x(n, Rational(0));
        for (int k = 0; k < m; ++k) {
            if (t[k][n] < 0) return;  // infeasible basic solution
            x[basis[k]] = t[k][n];
        }
        Rational value = 0;
        for (int j = 0; j < n; ++j) value += cost[j] * x[j];
        if (!any_feasible || value > best) best = value;
        any_feasible = true;

        // Unboundedness certificate: improving nonbasic direction that never
        // drives a basic variable negative.
        std::vector<char> in_basis(n, 0);
        for (int b : basis) in_basis[b] = 1;
        for (int j = 0; j < n; ++j) {
            if (in_basis[j]) continue;
            Rational red = cost[j];
            bool escapes = true;
            for (int k = 0; k < m; ++k) {
                red -= cost[basis[k]] * t[k][j];
                if (t[k][j] > 0) escapes = false;
            }
            if (escapes && red > 0) unbounded = true;
        }
    };
    auto enumerate = [&](auto&& self, int start) -> void {
        if ((int)basis.size() == m) {
            try_basis();
            return;
        }
        for (int j = start; j < n; ++j) {
            basis.push_back(j);
            self(self, j + 1);
            basis.pop_back();
        }
    };
    enumerate(enumerate, 0);

    if (!any_feasible) return {LPStatus::Infeasible, Rational(0)};
    if (unbounded) return {LPStatus::Unbounded, Rational(0)};
    return {LPStatus::Optimal, best};
}

// Independent design oracle: rebuilds the recommendation LP from first
// principles (its own variable order and row assembly) and solves it by
// exhaustive basis enumeration, never touching the production simplex.
inline OracleResult design_oracle(const Game& g, IRConstraint ir, const ObjectiveTensor& u) {
    const int na = g.num_types_a(), nb = g.num_types_b(), nr = g.num_actions();
    auto var = [&](int x, int y, int r) { return (x * nb + y) * nr + r; };

    // no-communication play, derived directly from the tables
    std::vector<int> r0(na);
    for (int x = 0; x < na; ++x) {
        int best = -1;
        Rational best_value;
        for (int r : g.tie_break) {
            Rational v = 0;
            for (int y = 0; y < nb; ++y) v += g.prior_b[y] * g.ua(x, y, r);
            if (best < 0 || v > best_value) {
                best = r;
                best_value = v;
            }
        }
        r0[x] = best;
    }

    LinearProgram lp;
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            for (int r = 0; r < nr; ++r) lp.add_var(u[x][y][r]);
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            std::vector<Rational> row(lp.num_vars, Rational(0));
            for (int r = 0; r < nr; ++r) row[var(x, y, r)] = 1;
            lp.add_constraint(std::move(row), Relation::Equal, g.prior_a[x] * g.prior_b[y]);
        }
    for (int x = 0; x < na; ++x)
        for (int r = 0; r < nr; ++r)
            for (int r2 = 0; r2 < nr; ++r2) {
                if (r == r2) continue;
                std::vector<Rational> row(lp.num_vars, Rational(0));
                for (int y = 0; y < nb; ++y)
                    row[var(x, y, r)] = g.ua(x, y, r) - g.ua(x, y, r2);
                lp.add_constraint(std::move(row), Relation::GreaterEq, Rational(0));
            }
    if (ir == IRConstraint::ExAnte) {
        std::vector<Rational> row(lp.num_vars, Rational(0));
        Rational rhs = 0;
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                for (int r = 0; r < nr; ++r) row[var(x, y, r)] = g.ub(y, x, r);
                rhs += g.prior_a[x] * g.prior_b[y] * g.ub(y, x, r0[x]);
            }
        lp.add_constraint(std::move(row), Relation::GreaterEq, rhs);
    } else if (ir == IRConstraint::Interim) {
        for (int y = 0; y < nb; ++y) {
            std::vector<Rational> row(lp.num_vars, Rational(0));
            Rational rhs = 0;
            for (int x = 0; x < na; ++x) {
                for (int r = 0; r < nr; ++r) row[var(x, y, r)] = g.ub(y, x, r);
                rhs += g.prior_b[y] * g.prior_a[x] * g.ub(y, x, r0[x]);
            }
            lp.add_constraint(std::move(row), Relation::GreaterEq, rhs);
        }
    }
    return oracle_solve(lp);
}

// Independent welfare/utility evaluation of a mediator protocol by direct
// enumeration over (theta_A, theta_B, signal): per (theta_A, signal) the
// oracle recomputes Alice's posterior and best reply from scratch.
struct MediatorValues {
    Rational e_ua, e_ub;
};

inline MediatorValues mediator_values_oracle(const Game& g, const MediatorProtocol& p) {
    const int na = g.num_types_a(), nb = g.num_types_b(), ns = p.num_signals();
    MediatorValues out{Rational(0), Rational(0)};
    for (int x = 0; x < na; ++x)
        for (int s = 0; s < ns; ++s) {
            // P(theta_B = y, s | theta_A = x)
            std::vector<Rational> joint(nb);
            Rational ps = 0;
            for (int y = 0; y < nb; ++y) {
                joint[y] = g.prior_b[y] * p.kernel[x][y][s];
                ps += joint[y];
            }
            if (ps.is_zero()) continue;
            int best = -1;
            Rational best_value;
            for (int r : g.tie_break) {
                Rational v = 0;
                for (int y = 0; y < nb; ++y) v += joint[y] * g.ua(x, y, r);
                if (best < 0 || v > best_value) {
                    best = r;
                    best_value = v;
                }
            }
            for (int y = 0; y < nb; ++y) {
                Rational mass = g.prior_a[x] * joint[y];
                out.e_ua += mass * g.ua(x, y, best);
                out.e_ub += mass * g.ub(y, x, best);
            }
        }
    return out;
}

// ---- deterministic random instances ----

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
    return lo + (int)(rng() % (unsigned long long)(hi - lo + 1));
}

inline Rational rand_rational(Rng& rng, int max_abs_num, int max_den) {
    return Rational(rand_int(rng, -max_abs_num, max_abs_num), rand_int(rng, 1, max_den));
}

inline Belief rand_belief(Rng& rng, int n, bool allow_zeros) {
    std::vector<Rational> w(n);
    Rational sum = 0;
    for (;;) {
        sum = 0;
        for (int i = 0; i < n; ++i) {
            int v = allow_zeros ? rand_int(rng, 0, 4) : rand_int(rng, 1, 5);
            w[i] = v;
            sum += v;
        }
        if (!sum.is_zero()) break;
    }
    for (auto& v : w) v /= sum;
    return make_belief(std::move(w));
}

inline Game rand_game(Rng& rng, int max_types = 3, int max_actions = 3) {
    Game g;
    int na = rand_int(rng, 1, max_types), nb = rand_int(rng, 1, max_types),
        nr = rand_int(rng, 1, max_actions);
    for (int i = 0; i < na; ++i) g.types_a.push_back("A" + std::to_string(i));
    for (int i = 0; i < nb; ++i) g.types_b.push_back("B" + std::to_string(i));
    for (int i = 0; i < nr; ++i) g.actions.push_back("r" + std::to_string(i));
    g.prior_a = rand_belief(rng, na, false);
    g.prior_b = rand_belief(rng, nb, false);
    g.util_a.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(nr)));
    g.util_b.assign(nb, std::vector<std::vector<Rational>>(na, std::vector<Rational>(nr)));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            for (int r = 0; r < nr; ++r) {
                g.util_a[x][y][r] = rand_rational(rng, 3, 2);
                g.util_b[y][x][r] = rand_rational(rng, 3, 2);
            }
    g.tie_break.resize(nr);
    for (int r = 0; r < nr; ++r) g.tie_break[r] = r;
    return g;
}

inline ConversationProtocol rand_conversation(Rng& rng, int num_types_a, int num_types_b,
                                              int max_rounds, int max_signals = 3) {
    ConversationProtocol c;
    for (int i = 0; i < num_types_a; ++i) c.types_a.push_back("A" + std::to_string(i));
    for (int i = 0; i < num_types_b; ++i) c.types_b.push_back("B" + std::to_string(i));
    int rounds = rand_int(rng, 0, max_rounds);
    for (int t = 0; t < rounds; ++t) {
        RoundSignals rs;
        int ka = rand_int(rng, 1, max_signals), kb = rand_int(rng, 1, max_signals);
        for (int i = 0; i < ka; ++i) rs.alice.push_back("a" + std::to_string(i));
        for (int i = 0; i < kb; ++i) rs.bob.push_back("b" + std::to_string(i));
        c.rounds.push_back(std::move(rs));
    }
    // fill kernels along every structurally possible history
    auto fill = [&](auto&& self, History& h) -> void {
        size_t len = h.size();
        if (len == 2 * (size_t)rounds) return;
        bool alice = len % 2 == 0;
        int round = (int)(len / 2);
        int signals = alice ? (int)c.rounds[round].alice.size()
                            : (int)c.rounds[round].bob.size();
        int types = alice ? num_types_a : num_types_b;
        std::vector<std::vector<Rational>> rows;
        for (int t = 0; t < types; ++t) rows.push_back(rand_belief(rng, signals, true).w);
        (alice ? c.alice_kernel : c.bob_kernel)[h] = std::move(rows);
        for (int s = 0; s < signals; ++s) {
            h.push_back(s);
            self(self, h);
            h.pop_back();
        }
    };
    History h;
    fill(fill, h);
    return c;
}

inline MediatorProtocol rand_mediator(Rng& rng, int num_types_a, int num_types_b,
                                      int max_signals = 4) {
    MediatorProtocol p;
    for (int i = 0; i < num_types_a; ++i) p.types_a.push_back("A" + std::to_string(i));
    for (int i = 0; i < num_types_b; ++i) p.types_b.push_back("B" + std::to_string(i));
    int ns = rand_int(rng, 1, max_signals);
    for (int s = 0; s < ns; ++s) p.signals.push_back("s" + std::to_string(s + 1));
    p.kernel.assign(num_types_a, std::vector<std::vector<Rational>>(num_types_b));
    for (int x = 0; x < num_types_a; ++x)
        for (int y = 0; y < num_types_b; ++y)
            p.kernel[x][y] = rand_belief(rng, ns, true).w;
    return p;
}

}  // namespace convo::oracle
