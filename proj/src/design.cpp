#include "convo/design.hpp"

#include <algorithm>
#include <map>

#include "convo/linprog.hpp"

namespace convo {

namespace {

Rational per_type_no_comm_value(const Game& g, const std::vector<int>& r0, int y) {
    Rational v = 0;
    for (int x = 0; x < g.num_types_a(); ++x) v += g.prior_a[x] * g.ub(y, x, r0[x]);
    return v;
}

ObjectiveTensor blank_objective(const Game& g) {
    return ObjectiveTensor(g.num_types_a(),
                           std::vector<std::vector<Rational>>(
                               g.num_types_b(), std::vector<Rational>(g.num_actions())));
}

}  // namespace

ObjectiveTensor welfare_objective(const Game& g) {
    auto u = blank_objective(g);
    for (int x = 0; x < g.num_types_a(); ++x)
        for (int y = 0; y < g.num_types_b(); ++y)
            for (int r = 0; r < g.num_actions(); ++r) u[x][y][r] = g.ua(x, y, r) + g.ub(y, x, r);
    return u;
}

ObjectiveTensor alice_objective(const Game& g) {
    auto u = blank_objective(g);
    for (int x = 0; x < g.num_types_a(); ++x)
        for (int y = 0; y < g.num_types_b(); ++y)
            for (int r = 0; r < g.num_actions(); ++r) u[x][y][r] = g.ua(x, y, r);
    return u;
}

ObjectiveTensor bob_objective(const Game& g) {
    auto u = blank_objective(g);
    for (int x = 0; x < g.num_types_a(); ++x)
        for (int y = 0; y < g.num_types_b(); ++y)
            for (int r = 0; r < g.num_actions(); ++r) u[x][y][r] = g.ub(y, x, r);
    return u;
}

void validate_scheme(const RecommendationScheme& s, const Game& g) {
    const int na = g.num_types_a(), nb = g.num_types_b(), nr = g.num_actions();
    if ((int)s.x.size() != na) throw DomainError("scheme shape mismatch");
    for (const auto& mid : s.x) {
        if ((int)mid.size() != nr) throw DomainError("scheme shape mismatch");
        for (const auto& row : mid)
            if ((int)row.size() != nb) throw DomainError("scheme shape mismatch");
    }
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            Rational sum = 0;
            for (int r = 0; r < nr; ++r) {
                if (s.x[x][r][y] < 0) throw DomainError("scheme entries must be nonnegative");
                sum += s.x[x][r][y];
            }
            if (sum != g.prior_a[x] * g.prior_b[y])
                throw DomainError("scheme marginal does not match the prior product");
        }
}

namespace {

struct SchemeLP {
    LinearProgram lp;
    int na, nb, nr;

    int var(int ta, int r, int tb) const { return (ta * nr + r) * nb + tb; }

    SchemeLP(const Game& g, IRConstraint ir, const ObjectiveTensor& u) {
        na = g.num_types_a();
        nb = g.num_types_b();
        nr = g.num_actions();
        for (int x = 0; x < na; ++x)
            for (int r = 0; r < nr; ++r)
                for (int y = 0; y < nb; ++y) lp.add_var(u[x][y][r]);

        // feasibility: sum_r x(ta, r, tb) = P(ta) P(tb)
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                std::vector<Rational> row(lp.num_vars, Rational(0));
                for (int r = 0; r < nr; ++r) row[var(x, r, y)] = 1;
                lp.add_constraint(std::move(row), Relation::Equal, g.prior_a[x] * g.prior_b[y]);
            }
        // obedience: the recommended action beats every deviation
        for (int x = 0; x < na; ++x)
            for (int r = 0; r < nr; ++r)
                for (int r2 = 0; r2 < nr; ++r2) {
                    if (r2 == r) continue;
                    std::vector<Rational> row(lp.num_vars, Rational(0));
                    for (int y = 0; y < nb; ++y)
                        row[var(x, r, y)] = g.ua(x, y, r) - g.ua(x, y, r2);
                    lp.add_constraint(std::move(row), Relation::GreaterEq, Rational(0));
                }
        auto r0 = no_comm_profile(g);
        if (ir == IRConstraint::ExAnte) {
            std::vector<Rational> row(lp.num_vars, Rational(0));
            Rational rhs = 0;
            for (int x = 0; x < na; ++x)
                for (int y = 0; y < nb; ++y) {
                    for (int r = 0; r < nr; ++r) row[var(x, r, y)] = g.ub(y, x, r);
                    rhs += g.prior_a[x] * g.prior_b[y] * g.ub(y, x, r0[x]);
                }
            lp.add_constraint(std::move(row), Relation::GreaterEq, rhs);
        } else if (ir == IRConstraint::Interim) {
            for (int y = 0; y < nb; ++y) {
                std::vector<Rational> row(lp.num_vars, Rational(0));
                for (int x = 0; x < na; ++x)
                    for (int r = 0; r < nr; ++r) row[var(x, r, y)] = g.ub(y, x, r);
                lp.add_constraint(std::move(row), Relation::GreaterEq,
                                  g.prior_b[y] * per_type_no_comm_value(g, r0, y));
            }
        }
    }

    RecommendationScheme scheme_of(const std::vector<Rational>& point) const {
        RecommendationScheme s;
        s.x.assign(na, std::vector<std::vector<Rational>>(nr, std::vector<Rational>(nb)));
        for (int x = 0; x < na; ++x)
            for (int r = 0; r < nr; ++r)
                for (int y = 0; y < nb; ++y) s.x[x][r][y] = point[var(x, r, y)];
        return s;
    }
};

}  // namespace

DesignResult optimize(const DesignProblem& p) {
    validate(p.game);
    SchemeLP builder(p.game, p.ir, p.objective);
    LPSolution sol = lp_solve(builder.lp);
    if (sol.status != LPStatus::Optimal)
        throw DomainError("design LP unsolvable; the uninformative scheme should be feasible");
    DesignResult result{sol.value, builder.scheme_of(sol.point)};
    validate_scheme(result.scheme, p.game);
    return result;
}

MediatorProtocol scheme_to_mediator(const RecommendationScheme& s, const Game& g) {
    validate_scheme(s, g);
    const int na = g.num_types_a(), nb = g.num_types_b(), nr = g.num_actions();
    MediatorProtocol p;
    p.types_a = g.types_a;
    p.types_b = g.types_b;
    p.signals = g.actions;
    p.kernel.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(nr)));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            Rational cell = g.prior_a[x] * g.prior_b[y];
            for (int r = 0; r < nr; ++r) {
                if (cell.is_zero()) {
                    if (!s.x[x][r][y].is_zero())
                        throw DomainError("scheme puts weight on a zero-prior type pair");
                    p.kernel[x][y][r] = Rational(1) / nr;
                } else {
                    p.kernel[x][y][r] = s.x[x][r][y] / cell;
                }
            }
        }
    validate(p);
    return p;
}

ConversationProtocol scheme_to_one_round_conversation(const RecommendationScheme& s,
                                                      const Game& g) {
    validate_scheme(s, g);
    const int na = g.num_types_a(), nb = g.num_types_b(), nr = g.num_actions();

    // Per Alice type: P(q_B | theta_A) over distinct normalized rows of x.
    std::vector<std::map<std::vector<Rational>, Rational>> family(na);
    for (int x = 0; x < na; ++x) {
        if (g.prior_a[x].is_zero()) continue;
        for (int r = 0; r < nr; ++r) {
            Rational mass = 0;
            for (int y = 0; y < nb; ++y) mass += s.x[x][r][y];
            if (mass.is_zero()) continue;
            std::vector<Rational> q(nb);
            for (int y = 0; y < nb; ++y) {
                q[y] = s.x[x][r][y] / mass;
                if (!q[y].is_zero() && g.prior_b[y].is_zero())
                    throw DomainError("scheme posterior hits a zero-prior Bob type");
            }
            family[x][q] += mass / g.prior_a[x];
        }
    }

    std::vector<std::vector<Rational>> signals;
    for (const auto& fam : family)
        for (const auto& [q, prob] : fam)
            if (std::find(signals.begin(), signals.end(), q) == signals.end())
                signals.push_back(q);
    std::sort(signals.begin(), signals.end());

    ConversationProtocol c;
    c.types_a = g.types_a;
    c.types_b = g.types_b;
    c.rounds.resize(1);
    c.rounds[0].alice = g.types_a;  // full revelation
    for (const auto& q : signals) {
        std::string label = "b(";
        for (int y = 0; y < nb; ++y) label += std::string(y ? "," : "") + rational_str(q[y]);
        c.rounds[0].bob.push_back(label + ")");
    }
    if (c.rounds[0].bob.empty()) c.rounds[0].bob.push_back("b()");

    std::vector<std::vector<Rational>> reveal(na, std::vector<Rational>(na, Rational(0)));
    for (int x = 0; x < na; ++x) reveal[x][x] = 1;
    c.alice_kernel[{}] = reveal;

    // Bob sends b_q with probability P(q | theta_A) q(theta_B) / P(theta_B).
    for (int x = 0; x < na; ++x) {
        std::vector<std::vector<Rational>> rows(
            nb, std::vector<Rational>(c.rounds[0].bob.size(), Rational(0)));
        bool degenerate = g.prior_a[x].is_zero() || family[x].empty();
        for (int y = 0; y < nb; ++y) {
            if (degenerate || g.prior_b[y].is_zero()) {
                rows[y][0] = 1;
                continue;
            }
            for (size_t k = 0; k < signals.size(); ++k) {
                auto it = family[x].find(signals[k]);
                if (it == family[x].end()) continue;
                rows[y][k] = it->second * signals[k][y] / g.prior_b[y];
            }
        }
        c.bob_kernel[{x}] = std::move(rows);
    }
    validate(c);
    return c;
}

std::vector<ParetoPoint> pareto_frontier(const Game& g, IRConstraint ir,
                                         const std::vector<Rational>& weights) {
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0 || weights[i] > 1) throw DomainError("weights must lie in [0,1]");
        if (i > 0 && weights[i] < weights[i - 1]) throw DomainError("weights must be sorted");
    }
    std::vector<ParetoPoint> out;
    for (const auto& lambda : weights) {
        auto u = blank_objective(g);
        for (int x = 0; x < g.num_types_a(); ++x)
            for (int y = 0; y < g.num_types_b(); ++y)
                for (int r = 0; r < g.num_actions(); ++r)
                    u[x][y][r] = lambda * g.ua(x, y, r) + (1 - lambda) * g.ub(y, x, r);
        SchemeLP first(g, ir, u);
        LPSolution opt = lp_solve(first.lp);
        if (opt.status != LPStatus::Optimal) throw DomainError("frontier LP unsolvable");

        // Among optima, prefer Alice; keeps the sweep monotone.
        SchemeLP second(g, ir, alice_objective(g));
        {
            std::vector<Rational> row(second.lp.num_vars, Rational(0));
            for (int x = 0; x < g.num_types_a(); ++x)
                for (int r = 0; r < g.num_actions(); ++r)
                    for (int y = 0; y < g.num_types_b(); ++y)
                        row[second.var(x, r, y)] = u[x][y][r];
            second.lp.add_constraint(std::move(row), Relation::Equal, opt.value);
        }
        LPSolution refined = lp_solve(second.lp);
        if (refined.status != LPStatus::Optimal) throw DomainError("frontier LP unsolvable");
        RecommendationScheme s = second.scheme_of(refined.point);
        Rational ea = 0, eb = 0;
        for (int x = 0; x < g.num_types_a(); ++x)
            for (int r = 0; r < g.num_actions(); ++r)
                for (int y = 0; y < g.num_types_b(); ++y) {
                    ea += s.x[x][r][y] * g.ua(x, y, r);
                    eb += s.x[x][r][y] * g.ub(y, x, r);
                }
        out.push_back({lambda, ea, eb});
    }
    return out;
}

namespace {

// ---- bounded search over grid-split conversations ----

struct PlanNode {
    Belief q_b, q_a;
    std::vector<std::pair<Rational, PlanNode>> children;  // one level per slot
};

struct DpElem {
    Rational value;              // E[u | node] with Alice best-responding at the end
    std::vector<Rational> cont;  // continue-value per Bob type, conditional on the node
    int option = -1;
    std::vector<int> child_elems;
};

struct SplitOption {
    std::vector<int> members;  // grid indices of the mover's belief
    std::vector<Rational> weights;
};

// Unique strictly-positive convex weights placing `target` in the hull of
// the chosen columns; empty when none.
std::vector<Rational> convex_weights(const std::vector<const std::vector<Rational>*>& cols,
                                     const std::vector<Rational>& target) {
    const int k = (int)cols.size();
    const int rows = (int)target.size() + 1;
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1, Rational(0)));
    for (int i = 0; i < (int)target.size(); ++i) {
        for (int l = 0; l < k; ++l) a[i][l] = (*cols[l])[i];
        a[i][k] = target[i];
    }
    for (int l = 0; l < k; ++l) a[rows - 1][l] = 1;
    a[rows - 1][k] = 1;
    int rank = 0;
    std::vector<int> piv;
    for (int col = 0; col < k && rank < rows; ++col) {
        int sel = -1;
        for (int r = rank; r < rows; ++r)
            if (!a[r][col].is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(a[sel], a[rank]);
        Rational inv = 1 / a[rank][col];
        for (auto& v : a[rank]) v *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][col].is_zero()) continue;
            Rational f = a[r][col];
            for (int cc = col; cc <= k; ++cc) a[r][cc] -= f * a[rank][cc];
        }
        piv.push_back(col);
        ++rank;
    }
    if (rank < k) return {};
    for (int r = rank; r < rows; ++r)
        if (!a[r][k].is_zero()) return {};
    std::vector<Rational> mu(k);
    for (int r = 0; r < rank; ++r) mu[piv[r]] = a[r][k];
    for (const auto& v : mu)
        if (v <= 0) return {};
    return mu;
}

struct Searcher {
    const Game& g;
    const ObjectiveTensor& u;
    SearchFilter filter;
    int max_rounds, branching;
    std::vector<Belief> grid_b, grid_a;
    long budget;
    long work = 0;
    bool exhausted = false;
    std::vector<int> r0;

    std::map<std::tuple<int, int, int>, std::vector<DpElem>> memo;
    std::map<std::tuple<int, int, int>, std::vector<SplitOption>> options_memo;

    Rational leaf_value(const Belief& qb, const Belief& qa) const {
        Rational v = 0;
        for (int x = 0; x < g.num_types_a(); ++x) {
            if (qa[x].is_zero()) continue;
            int r = best_response(g, x, qb);
            for (int y = 0; y < g.num_types_b(); ++y) v += qa[x] * qb[y] * u[x][y][r];
        }
        return v;
    }

    // Also Bob's value per type when Alice acts now on (qb, qa).
    std::vector<Rational> bob_values_now(const Belief& qb, const Belief& qa) const {
        std::vector<Rational> vals(g.num_types_b(), Rational(0));
        for (int y = 0; y < g.num_types_b(); ++y) {
            if (qb[y].is_zero()) continue;
            for (int x = 0; x < g.num_types_a(); ++x) {
                if (qa[x].is_zero()) continue;
                vals[y] += qa[x] * g.ub(y, x, best_response(g, x, qb));
            }
        }
        return vals;
    }

    bool leaf_expost_ok(const Belief& qb, const Belief& qa) const {
        for (int y = 0; y < g.num_types_b(); ++y) {
            if (qb[y].is_zero()) continue;
            Rational lhs = 0, rhs = 0;
            for (int x = 0; x < g.num_types_a(); ++x) {
                if (qa[x].is_zero()) continue;
                lhs += qa[x] * g.ub(y, x, best_response(g, x, qb));
                rhs += qa[x] * g.ub(y, x, r0[x]);
            }
            if (lhs < rhs) return false;
        }
        return true;
    }

    const std::vector<SplitOption>& split_options(int slot, int ib, int ia) {
        auto key = std::make_tuple(slot, ib, ia);
        auto it = options_memo.find(key);
        if (it != options_memo.end()) return it->second;
        bool alice_slot = slot % 2 == 0;
        const auto& grid = alice_slot ? grid_a : grid_b;
        const Belief& current = alice_slot ? grid_a[ia] : grid_b[ib];
        std::vector<SplitOption> opts;
        opts.push_back({{alice_slot ? ia : ib}, {Rational(1)}});  // stay silent
        std::vector<int> subset;
        auto recurse = [&](auto&& self, int start, int want) -> void {
            if ((int)subset.size() == want) {
                ++work;
                std::vector<const std::vector<Rational>*> cols;
                for (int s : subset) cols.push_back(&grid[s].w);
                auto mu = convex_weights(cols, current.w);
                if (!mu.empty()) opts.push_back({subset, std::move(mu)});
                return;
            }
            for (int p = start; p < (int)grid.size(); ++p) {
                subset.push_back(p);
                self(self, p + 1, want);
                subset.pop_back();
            }
        };
        for (int want = 2; want <= std::min(branching, (int)current.size()); ++want)
            recurse(recurse, 0, want);
        return options_memo.emplace(key, std::move(opts)).first->second;
    }

    static void pareto_insert(std::vector<DpElem>& set, DpElem elem) {
        for (const auto& e : set) {
            bool dominates = e.value >= elem.value;
            for (size_t i = 0; i < elem.cont.size() && dominates; ++i)
                dominates = e.cont[i] >= elem.cont[i];
            if (dominates) return;
        }
        std::erase_if(set, [&](const DpElem& e) {
            bool dominated = elem.value >= e.value;
            for (size_t i = 0; i < e.cont.size() && dominated; ++i)
                dominated = elem.cont[i] >= e.cont[i];
            return dominated;
        });
        set.push_back(std::move(elem));
    }

    const std::vector<DpElem>& solve(int slot, int ib, int ia) {
        auto key = std::make_tuple(slot, ib, ia);
        auto found = memo.find(key);
        if (found != memo.end()) return found->second;

        std::vector<DpElem> result;
        const Belief& qb = grid_b[ib];
        const Belief& qa = grid_a[ia];
        if (slot == 2 * max_rounds) {
            if (filter != SearchFilter::ExPost || leaf_expost_ok(qb, qa)) {
                DpElem e;
                e.value = leaf_value(qb, qa);
                e.cont = bob_values_now(qb, qa);
                result.push_back(std::move(e));
            }
            return memo.emplace(key, std::move(result)).first->second;
        }

        bool alice_slot = slot % 2 == 0;
        auto quit = bob_values_now(qb, qa);
        const auto& opts = split_options(slot, ib, ia);
        for (int oi = 0; oi < (int)opts.size(); ++oi) {
            if (work > budget) {
                exhausted = true;
                break;
            }
            const auto& opt = opts[oi];
            std::vector<const std::vector<DpElem>*> child_sets;
            bool dead = false;
            for (int member : opt.members) {
                const auto& set =
                    solve(slot + 1, alice_slot ? ib : member, alice_slot ? member : ia);
                if (set.empty()) {
                    dead = true;
                    break;
                }
                child_sets.push_back(&set);
            }
            if (dead) continue;

            std::vector<int> pick(opt.members.size(), 0);
            for (;;) {
                ++work;
                DpElem e;
                e.option = oi;
                e.child_elems.assign(pick.begin(), pick.end());
                e.value = 0;
                e.cont.assign(g.num_types_b(), Rational(0));
                for (size_t k = 0; k < opt.members.size(); ++k) {
                    const DpElem& ce = (*child_sets[k])[pick[k]];
                    e.value += opt.weights[k] * ce.value;
                    for (int y = 0; y < g.num_types_b(); ++y) {
                        if (qb[y].is_zero()) continue;
                        if (alice_slot) {
                            e.cont[y] += opt.weights[k] * ce.cont[y];
                        } else {
                            const Rational& cy = grid_b[opt.members[k]][y];
                            if (cy.is_zero()) continue;
                            e.cont[y] += opt.weights[k] * cy / qb[y] * ce.cont[y];
                        }
                    }
                }
                bool ok = true;
                if (filter == SearchFilter::NonCommitted)
                    for (int y = 0; y < g.num_types_b() && ok; ++y)
                        if (!qb[y].is_zero() && e.cont[y] < quit[y]) ok = false;
                if (ok) pareto_insert(result, std::move(e));

                int k = (int)pick.size() - 1;
                while (k >= 0 && pick[k] + 1 == (int)child_sets[k]->size()) pick[k--] = 0;
                if (k < 0) break;
                ++pick[k];
                if (work > budget) {
                    exhausted = true;
                    break;
                }
            }
        }
        return memo.emplace(key, std::move(result)).first->second;
    }

    PlanNode materialize(int slot, int ib, int ia, int elem_index) {
        PlanNode node;
        node.q_b = grid_b[ib];
        node.q_a = grid_a[ia];
        if (slot == 2 * max_rounds) return node;
        const DpElem& e = memo.at({slot, ib, ia})[elem_index];
        const auto& opt = options_memo.at({slot, ib, ia})[e.option];
        bool alice_slot = slot % 2 == 0;
        for (size_t k = 0; k < opt.members.size(); ++k) {
            int cb = alice_slot ? ib : opt.members[k];
            int ca = alice_slot ? opt.members[k] : ia;
            node.children.emplace_back(opt.weights[k],
                                       materialize(slot + 1, cb, ca, e.child_elems[k]));
        }
        return node;
    }
};

ConversationProtocol plan_to_protocol(const Game& g, const PlanNode& root, int rounds) {
    ConversationProtocol c;
    c.types_a = g.types_a;
    c.types_b = g.types_b;
    c.rounds.resize(rounds);

    std::vector<int> width(2 * rounds, 1);
    auto widths = [&](auto&& self, const PlanNode& node, int slot) -> void {
        if (slot >= 2 * rounds) return;
        width[slot] = std::max(width[slot], (int)node.children.size());
        for (const auto& [w, child] : node.children) self(self, child, slot + 1);
    };
    widths(widths, root, 0);
    for (int s = 0; s < 2 * rounds; ++s) {
        auto& names = s % 2 == 0 ? c.rounds[s / 2].alice : c.rounds[s / 2].bob;
        char who = s % 2 == 0 ? 'a' : 'b';
        for (int k = 0; k < width[s]; ++k)
            names.push_back(std::string(1, who) + std::to_string(s / 2 + 1) + "_" +
                            std::to_string(k));
    }

    auto emit = [&](auto&& self, const PlanNode& node, int slot, History& h) -> void {
        if (slot >= 2 * rounds) return;
        bool alice_slot = slot % 2 == 0;
        auto& kernel = alice_slot ? c.alice_kernel : c.bob_kernel;
        int ntypes = alice_slot ? g.num_types_a() : g.num_types_b();
        const Belief& own = alice_slot ? node.q_a : node.q_b;
        std::vector<std::vector<Rational>> rows(ntypes,
                                                std::vector<Rational>(width[slot], Rational(0)));
        for (int t = 0; t < ntypes; ++t) {
            if (own[t].is_zero()) {
                rows[t][0] = 1;
                continue;
            }
            for (size_t k = 0; k < node.children.size(); ++k) {
                const Belief& child_own =
                    alice_slot ? node.children[k].second.q_a : node.children[k].second.q_b;
                rows[t][k] = node.children[k].first * child_own[t] / own[t];
            }
        }
        kernel[h] = std::move(rows);
        for (size_t k = 0; k < node.children.size(); ++k) {
            h.push_back((int)k);
            self(self, node.children[k].second, slot + 1, h);
            h.pop_back();
        }
    };
    History h;
    emit(emit, root, 0, h);
    validate(c);
    return c;
}

}  // namespace

ConversationSearchResult search_expost_conversation(const Game& g, const ObjectiveTensor& u,
                                                    SearchFilter filter, int max_rounds,
                                                    int branching,
                                                    const std::vector<Belief>& grid_b,
                                                    const std::vector<Belief>& grid_a,
                                                    long budget) {
    validate(g);
    Searcher s{g, u, filter, max_rounds, branching, grid_b, grid_a, budget};
    s.r0 = no_comm_profile(g);
    auto add = [](std::vector<Belief>& grid, const Belief& b) {
        if (std::find(grid.begin(), grid.end(), b) == grid.end()) grid.push_back(b);
    };
    add(s.grid_b, g.prior_b);
    add(s.grid_a, g.prior_a);
    std::sort(s.grid_b.begin(), s.grid_b.end());
    std::sort(s.grid_a.begin(), s.grid_a.end());

    int root_ib =
        (int)(std::find(s.grid_b.begin(), s.grid_b.end(), g.prior_b) - s.grid_b.begin());
    int root_ia =
        (int)(std::find(s.grid_a.begin(), s.grid_a.end(), g.prior_a) - s.grid_a.begin());
    const auto& roots = s.solve(0, root_ib, root_ia);
    if (roots.empty())
        throw DomainError("search class is empty; even the silent protocol was filtered out");
    int best = 0;
    for (int i = 1; i < (int)roots.size(); ++i)
        if (roots[i].value > roots[best].value) best = i;

    ConversationSearchResult result;
    result.best_value = roots[best].value;
    PlanNode plan = s.materialize(0, root_ib, root_ia, best);
    result.best = plan_to_protocol(g, plan, max_rounds);
    result.budget_exhausted = s.exhausted;
    return result;
}

}  // namespace convo
