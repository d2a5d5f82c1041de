#include "convo/feasibility.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "convo/linprog.hpp"

namespace convo {

namespace {

using ZVec = std::vector<Rational>;

ZVec unit_vec(int n, int k) {
    ZVec v(n, Rational(0));
    v[k] = 1;
    return v;
}

ObserverPosterior type_marginal(const JointPosteriorDistribution& j) {
    ObserverPosterior t = zero_posterior(j.num_types_a, j.num_types_b);
    for (const auto& atom : j.atoms) t.m[atom.type_a][atom.type_b] += atom.prob;
    return t;
}

}  // namespace

bool check_product_condition(const JointPosteriorDistribution& j) {
    std::map<std::pair<ZVec, ZVec>, Rational> group_mass;
    for (const auto& atom : j.atoms) group_mass[{atom.q_b.w, atom.q_a.w}] += atom.prob;
    for (const auto& atom : j.atoms) {
        Rational expected = group_mass[{atom.q_b.w, atom.q_a.w}] * atom.q_a[atom.type_a] *
                            atom.q_b[atom.type_b];
        if (atom.prob != expected) return false;
    }
    return true;
}

FeasibilityVerdict check_mediator_feasibility(const JointPosteriorDistribution& j,
                                              const Belief& prior_a, const Belief& prior_b,
                                              long budget) {
    validate(j);
    const int na = j.num_types_a, nb = j.num_types_b;
    FeasibilityVerdict verdict;

    ObserverPosterior marginal = type_marginal(j);
    if (!(marginal == outer_product(prior_a, prior_b))) {
        verdict.status = FeasStatus::Infeasible;
        verdict.detail = "mean of observer posteriors does not match the prior product";
        verdict.mean_certificate = marginal;
        return verdict;
    }

    // Recorded beliefs must be consistent with the conditional type
    // distributions they claim: P(x, y, q_A) = P(y, q_A) q_A(x) and the
    // conditional expectation of the other side's belief equals the prior.
    {
        std::map<std::pair<int, ZVec>, std::vector<Rational>> by_y_qa;
        for (const auto& atom : j.atoms) {
            auto& mass = by_y_qa[{atom.type_b, atom.q_a.w}];
            mass.resize(na, Rational(0));
            mass[atom.type_a] += atom.prob;
        }
        for (const auto& [key, mass] : by_y_qa) {
            Rational total = 0;
            for (const auto& v : mass) total += v;
            for (int x = 0; x < na; ++x)
                if (mass[x] != total * key.second[x]) {
                    verdict.status = FeasStatus::Infeasible;
                    verdict.detail = "recorded q_A is inconsistent with the type distribution";
                    return verdict;
                }
        }
        std::map<std::pair<int, ZVec>, std::vector<Rational>> by_x_qb;
        for (const auto& atom : j.atoms) {
            auto& mass = by_x_qb[{atom.type_a, atom.q_b.w}];
            mass.resize(nb, Rational(0));
            mass[atom.type_b] += atom.prob;
        }
        for (const auto& [key, mass] : by_x_qb) {
            Rational total = 0;
            for (const auto& v : mass) total += v;
            for (int y = 0; y < nb; ++y)
                if (mass[y] != total * key.second[y]) {
                    verdict.status = FeasStatus::Infeasible;
                    verdict.detail = "recorded q_B is inconsistent with the type distribution";
                    return verdict;
                }
        }
        for (int x = 0; x < na; ++x) {
            std::vector<Rational> acc(nb, Rational(0));
            for (const auto& atom : j.atoms)
                if (atom.type_a == x)
                    for (int y = 0; y < nb; ++y) acc[y] += atom.prob * atom.q_b[y];
            for (int y = 0; y < nb; ++y)
                if (acc[y] != prior_a[x] * prior_b[y]) {
                    verdict.status = FeasStatus::Infeasible;
                    verdict.detail =
                        "conditional expectation of q_B given theta_A is not the prior";
                    return verdict;
                }
        }
        for (int y = 0; y < nb; ++y) {
            std::vector<Rational> acc(na, Rational(0));
            for (const auto& atom : j.atoms)
                if (atom.type_b == y)
                    for (int x = 0; x < na; ++x) acc[x] += atom.prob * atom.q_a[x];
            for (int x = 0; x < na; ++x)
                if (acc[x] != prior_b[y] * prior_a[x]) {
                    verdict.status = FeasStatus::Infeasible;
                    verdict.detail =
                        "conditional expectation of q_A given theta_B is not the prior";
                    return verdict;
                }
        }
    }

    // Product-consistent groups are themselves the observer family.
    if (check_product_condition(j)) {
        std::vector<std::pair<Rational, ObserverPosterior>> family;
        for (const auto& pm : pair_marginal(j))
            family.emplace_back(pm.prob, outer_product(pm.q_a, pm.q_b));
        verdict.status = FeasStatus::Feasible;
        verdict.observer_family = std::move(family);
        return verdict;
    }

    // General case.  A signal is a nonnegative matrix W whose row x lies
    // along some recorded q_B, column y along some recorded q_A, and whose
    // supported cells correspond to existing atoms.  Fixing those direction
    // choices (a "pattern") leaves the row/column masses coupled by
    // r_x b_x(y) = c_y a_y(x); the solution cone scales one free factor per
    // connected component.  Covering the atom masses with such rays is then
    // an exact LP.
    std::map<std::tuple<int, int, ZVec, ZVec>, int> atom_index;
    for (int i = 0; i < (int)j.atoms.size(); ++i) {
        const auto& a = j.atoms[i];
        atom_index[{a.type_a, a.type_b, a.q_b.w, a.q_a.w}] = i;
    }
    std::vector<std::vector<ZVec>> row_dirs(na), col_dirs(nb);
    {
        std::vector<std::set<ZVec>> rset(na), cset(nb);
        for (const auto& a : j.atoms) {
            rset[a.type_a].insert(a.q_b.w);
            cset[a.type_b].insert(a.q_a.w);
        }
        for (int x = 0; x < na; ++x) row_dirs[x].assign(rset[x].begin(), rset[x].end());
        for (int y = 0; y < nb; ++y) col_dirs[y].assign(cset[y].begin(), cset[y].end());
    }

    long pattern_count = 1;
    for (int x = 0; x < na && pattern_count <= budget; ++x)
        pattern_count *= (long)row_dirs[x].size() + 1;
    for (int y = 0; y < nb && pattern_count <= budget; ++y)
        pattern_count *= (long)col_dirs[y].size() + 1;
    if (pattern_count > budget) {
        verdict.status = FeasStatus::Unknown;
        verdict.detail = "pattern budget exhausted";
        return verdict;
    }

    std::set<ZVec> seen_rays;
    std::vector<ZVec> rays;  // atom coverage per unit of ray mass
    std::vector<ObserverPosterior> ray_matrices;

    std::vector<int> rpick(na, -1), cpick(nb, -1);
    auto handle_pattern = [&]() {
        const int nv = na + nb;
        std::vector<char> used(nv, 0);
        for (int x = 0; x < na; ++x) used[x] = rpick[x] >= 0;
        for (int y = 0; y < nb; ++y) used[na + y] = cpick[y] >= 0;

        auto bx = [&](int x) -> const ZVec& { return row_dirs[x][rpick[x]]; };
        auto ay = [&](int y) -> const ZVec& { return col_dirs[y][cpick[y]]; };
        auto atom_at = [&](int x, int y) -> int {
            auto it = atom_index.find({x, y, bx(x), ay(y)});
            return it == atom_index.end() ? -1 : it->second;
        };

        // Any cell that would be positive but has no matching atom (or whose
        // other side is unused) forces its row or column to zero.
        std::vector<char> zero(nv, 0);
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                bool rx = used[x] && !bx(x)[y].is_zero();
                bool cy = used[na + y] && !ay(y)[x].is_zero();
                bool allowed = rx && cy && atom_at(x, y) >= 0;
                if (!allowed) {
                    if (rx) zero[x] = 1;
                    if (cy) zero[na + y] = 1;
                }
            }

        // Components of the positive-cell graph scale independently.
        std::vector<int> comp(nv, -1);
        std::vector<Rational> scale(nv, Rational(0));
        int ncomp = 0;
        for (int seed = 0; seed < nv; ++seed) {
            if (!used[seed] || comp[seed] >= 0) continue;
            comp[seed] = ncomp;
            scale[seed] = 1;
            std::vector<int> stack{seed};
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int u = 0; u < nv; ++u) {
                    if (!used[u] || comp[u] >= 0 || (u < na) == (v < na)) continue;
                    int x = v < na ? v : u;
                    int y = (v < na ? u : v) - na;
                    const Rational& beta = bx(x)[y];
                    const Rational& alpha = ay(y)[x];
                    if (beta.is_zero() || alpha.is_zero()) continue;
                    comp[u] = ncomp;
                    scale[u] = u < na ? scale[v] * alpha / beta : scale[v] * beta / alpha;
                    stack.push_back(u);
                }
            }
            ++ncomp;
        }
        std::vector<char> dead(ncomp, 0);
        for (int v = 0; v < nv; ++v)
            if (used[v] && zero[v]) dead[comp[v]] = 1;

        for (int t = 0; t < ncomp; ++t) {
            if (dead[t]) continue;
            std::vector<Rational> r(na, Rational(0)), cc(nb, Rational(0));
            bool any_row = false;
            for (int x = 0; x < na; ++x)
                if (used[x] && comp[x] == t) {
                    r[x] = scale[x];
                    any_row = true;
                }
            for (int y = 0; y < nb; ++y)
                if (used[na + y] && comp[na + y] == t) cc[y] = scale[na + y];
            if (!any_row) continue;

            // Ratio propagation followed a spanning walk; re-check every
            // equation so inconsistent cycles are rejected.
            ZVec cover((int)j.atoms.size(), Rational(0));
            Rational mass = 0;
            bool ok = true;
            for (int x = 0; x < na && ok; ++x)
                for (int y = 0; y < nb && ok; ++y) {
                    Rational left = used[x] && comp[x] == t ? r[x] * bx(x)[y] : Rational(0);
                    Rational right =
                        used[na + y] && comp[na + y] == t ? cc[y] * ay(y)[x] : Rational(0);
                    bool both_here = used[x] && comp[x] == t && used[na + y] && comp[na + y] == t;
                    if (both_here && left != right) {
                        ok = false;
                        break;
                    }
                    if (!both_here && (!left.is_zero() || !right.is_zero())) {
                        ok = false;
                        break;
                    }
                    if (left.is_zero()) continue;
                    int ai = atom_at(x, y);
                    if (ai < 0) {
                        ok = false;
                        break;
                    }
                    cover[ai] += left;
                    mass += left;
                }
            if (!ok || mass.is_zero()) continue;
            for (auto& v : cover) v /= mass;
            if (seen_rays.insert(cover).second) {
                ObserverPosterior wmat = zero_posterior(na, nb);
                for (int x = 0; x < na; ++x)
                    if (used[x] && comp[x] == t)
                        for (int y = 0; y < nb; ++y) wmat.m[x][y] = r[x] * bx(x)[y] / mass;
                rays.push_back(std::move(cover));
                ray_matrices.push_back(std::move(wmat));
            }
        }
    };

    auto enumerate = [&](auto&& self, int pos) -> void {
        if (pos == na + nb) {
            handle_pattern();
            return;
        }
        int count = pos < na ? (int)row_dirs[pos].size() : (int)col_dirs[pos - na].size();
        for (int k = -1; k < count; ++k) {
            (pos < na ? rpick[pos] : cpick[pos - na]) = k;
            self(self, pos + 1);
        }
        (pos < na ? rpick[pos] : cpick[pos - na]) = -1;
    };
    enumerate(enumerate, 0);

    LinearProgram lp;
    for (size_t k = 0; k < rays.size(); ++k) lp.add_var(Rational(0));
    for (int i = 0; i < (int)j.atoms.size(); ++i) {
        std::vector<Rational> row(rays.size());
        for (size_t k = 0; k < rays.size(); ++k) row[k] = rays[k][i];
        lp.add_constraint(std::move(row), Relation::Equal, j.atoms[i].prob);
    }
    LPSolution sol = lp_solve(lp);
    if (sol.status != LPStatus::Optimal) {
        verdict.status = FeasStatus::Infeasible;
        verdict.detail = "atoms admit no decomposition into observer posteriors";
        return verdict;
    }
    std::map<std::vector<std::vector<Rational>>, Rational> family_acc;
    for (size_t k = 0; k < rays.size(); ++k)
        if (!sol.point[k].is_zero()) family_acc[ray_matrices[k].m] += sol.point[k];
    std::vector<std::pair<Rational, ObserverPosterior>> family;
    for (const auto& [mat, p] : family_acc) family.emplace_back(p, ObserverPosterior{mat});
    verdict.status = FeasStatus::Feasible;
    verdict.observer_family = std::move(family);
    return verdict;
}

namespace {

// Minimal alternation depths: sigma = least i with the node in S_i, tau for
// T_i.  Leaves sit in S_0 and T_0; an A-split over T_i points lands in
// S_{i+1}; a B-split over S_i points lands in T_i; and S_i is inside T_i.
struct Depths {
    int sigma = 0, tau = 0;
};

Depths witness_depths(const SplitNode& node) {
    if (node.kind == SplitKind::Leaf) return {0, 0};
    int worst = 0;
    for (const auto& child : node.children) {
        Depths d = witness_depths(child);
        worst = std::max(worst, node.kind == SplitKind::ASplit ? d.tau : d.sigma);
    }
    if (node.kind == SplitKind::ASplit) return {worst + 1, worst + 1};
    return {worst + 1, worst};
}

}  // namespace

bool verify_witness(const JointPosteriorDistribution& j, const SplitWitness& w, int rounds,
                    const Belief& prior_a, const Belief& prior_b) {
    validate(j);
    auto marginal = pair_marginal(j);
    const int m = (int)marginal.size();
    if ((int)w.support.size() != m) return false;

    std::map<std::pair<ZVec, ZVec>, int> target_pos;
    for (int i = 0; i < m; ++i) target_pos[{marginal[i].q_b.w, marginal[i].q_a.w}] = i;
    std::vector<int> to_target(m, -1);
    for (int i = 0; i < m; ++i) {
        auto it = target_pos.find({w.support[i].first.w, w.support[i].second.w});
        if (it == target_pos.end()) return false;
        to_target[i] = it->second;
    }
    if ((int)std::set<int>(to_target.begin(), to_target.end()).size() != m) return false;

    if (!(w.root.point.q_b == prior_b) || !(w.root.point.q_a == prior_a)) return false;
    if ((int)w.root.point.z.size() != m) return false;
    for (int i = 0; i < m; ++i)
        if (w.root.point.z[i] != marginal[to_target[i]].prob) return false;

    auto check = [&](auto&& self, const SplitNode& node) -> bool {
        const auto& pt = node.point;
        if ((int)pt.z.size() != m) throw DomainError("witness z dimension mismatch");
        if (!is_distribution(pt.q_b.w) || !is_distribution(pt.q_a.w) || !is_distribution(pt.z))
            return false;
        if (node.kind == SplitKind::Leaf) {
            if (!node.children.empty()) throw DomainError("witness leaf has children");
            for (int i = 0; i < m; ++i) {
                bool is_self =
                    w.support[i].first == pt.q_b && w.support[i].second == pt.q_a;
                if (pt.z[i] != Rational(is_self ? 1 : 0)) return false;
            }
            return true;
        }
        if (node.children.empty() || node.children.size() != node.weights.size())
            throw DomainError("witness split node arity mismatch");
        Rational wsum = 0;
        std::vector<Rational> eb(pt.q_b.size(), Rational(0)), ea(pt.q_a.size(), Rational(0)),
            ez(m, Rational(0));
        for (size_t k = 0; k < node.children.size(); ++k) {
            const auto& child = node.children[k];
            const Rational& wk = node.weights[k];
            if (wk <= 0) return false;
            if (node.kind == SplitKind::ASplit && !(child.point.q_b == pt.q_b)) return false;
            if (node.kind == SplitKind::BSplit && !(child.point.q_a == pt.q_a)) return false;
            wsum += wk;
            for (int i = 0; i < pt.q_b.size(); ++i) eb[i] += wk * child.point.q_b[i];
            for (int i = 0; i < pt.q_a.size(); ++i) ea[i] += wk * child.point.q_a[i];
            for (int i = 0; i < m; ++i) ez[i] += wk * child.point.z[i];
            if (!self(self, child)) return false;
        }
        if (wsum != 1) return false;
        if (eb != pt.q_b.w || ea != pt.q_a.w || ez != pt.z) return false;
        return true;
    };
    if (!check(check, w.root)) return false;
    return witness_depths(w.root).sigma <= rounds;
}

namespace {

struct CandRef {
    int level = 0, cell = 0, index = 0;
};

struct Cand {
    ZVec z;
    bool leaf = false;
    SplitKind kind = SplitKind::Leaf;
    std::vector<std::pair<Rational, CandRef>> from;
};

// Exact solve of {sum mu = 1, sum mu * col_l = target}; empty when
// inconsistent, underdetermined, or not strictly positive.
std::vector<Rational> solve_weights(const std::vector<const ZVec*>& cols, const ZVec& target) {
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
    std::vector<int> pivot_col;
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
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < k) return {};
    for (int r = rank; r < rows; ++r)
        if (!a[r][k].is_zero()) return {};
    std::vector<Rational> mu(k);
    for (int r = 0; r < rank; ++r) mu[pivot_col[r]] = a[r][k];
    for (const auto& v : mu)
        if (v <= 0) return {};
    return mu;
}

}  // namespace

FeasibilityVerdict search_witness(const JointPosteriorDistribution& j, int rounds,
                                  const Belief& prior_a, const Belief& prior_b,
                                  const WitnessSearchOptions& opts) {
    validate(j);
    if (!check_product_condition(j)) {
        FeasibilityVerdict v;
        v.status = FeasStatus::Infeasible;
        v.detail = "P(theta_A, theta_B | q_B, q_A) does not factorize as q_A * q_B";
        return v;
    }
    {
        FeasibilityVerdict med = check_mediator_feasibility(j, prior_a, prior_b);
        if (med.status == FeasStatus::Infeasible) return med;
    }

    auto marginal = pair_marginal(j);
    const int m = (int)marginal.size();
    const int na = j.num_types_a, nb = j.num_types_b;

    std::vector<Belief> grid_b, grid_a;
    auto add_grid = [](std::vector<Belief>& grid, const Belief& b) {
        if (std::find(grid.begin(), grid.end(), b) == grid.end()) grid.push_back(b);
    };
    for (const auto& pm : marginal) add_grid(grid_b, pm.q_b);
    for (const auto& pm : marginal) add_grid(grid_a, pm.q_a);
    add_grid(grid_b, prior_b);
    add_grid(grid_a, prior_a);
    for (const auto& b : opts.grid_q_b) add_grid(grid_b, b);
    for (const auto& b : opts.grid_q_a) add_grid(grid_a, b);
    std::sort(grid_b.begin(), grid_b.end());
    std::sort(grid_a.begin(), grid_a.end());
    const int gb = (int)grid_b.size(), ga = (int)grid_a.size();
    auto cell_of = [&](int ib, int ia) { return ib * ga + ia; };
    auto find_in = [](const std::vector<Belief>& grid, const Belief& b) {
        return (int)(std::find(grid.begin(), grid.end(), b) - grid.begin());
    };

    std::vector<std::vector<std::vector<Cand>>> levels;
    long stored = 0, work = 0;
    const long work_limit = opts.budget * 20;

    levels.emplace_back(gb * ga);
    for (int i = 0; i < m; ++i) {
        Cand c;
        c.z = unit_vec(m, i);
        c.leaf = true;
        Cand& placed = levels[0][cell_of(find_in(grid_b, marginal[i].q_b),
                                         find_in(grid_a, marginal[i].q_a))]
                           .emplace_back(std::move(c));
        (void)placed;
        ++stored;
    }

    FeasibilityVerdict verdict;
    auto out_of_budget = [&](const char* what) {
        verdict.status = FeasStatus::Unknown;
        verdict.detail = what;
        return verdict;
    };

    for (int level = 1; level <= 2 * rounds; ++level) {
        bool b_step = level % 2 == 1;  // odd: combine along q_B (same q_A)
        const auto& prev = levels.back();
        std::vector<std::vector<Cand>> next = prev;  // S_i in T_i in S_{i+1}

        const int fixed_count = b_step ? ga : gb;
        const int vary_count = b_step ? gb : ga;
        const int max_support = b_step ? nb : na;

        for (int f = 0; f < fixed_count; ++f) {
            struct Entry {
                const ZVec* coord;
                const ZVec* z;
                CandRef ref;
            };
            std::vector<Entry> pool;
            for (int v = 0; v < vary_count; ++v) {
                int ib = b_step ? v : f;
                int ia = b_step ? f : v;
                int cell = cell_of(ib, ia);
                for (int idx = 0; idx < (int)prev[cell].size(); ++idx)
                    pool.push_back({b_step ? &grid_b[ib].w : &grid_a[ia].w,
                                    &prev[cell][idx].z,
                                    {level - 1, cell, idx}});
            }
            if ((int)pool.size() < 2) continue;

            std::vector<int> subset;
            auto recurse = [&](auto&& self, int start, int want) -> bool {
                if ((int)subset.size() == want) {
                    if (++work > work_limit) return true;
                    std::vector<const ZVec*> coord_cols;
                    for (int s : subset) coord_cols.push_back(pool[s].coord);
                    for (int v = 0; v < vary_count; ++v) {
                        int ib = b_step ? v : f;
                        int ia = b_step ? f : v;
                        const ZVec& target = b_step ? grid_b[ib].w : grid_a[ia].w;
                        auto mu = solve_weights(coord_cols, target);
                        if (mu.empty()) continue;
                        ZVec z(m, Rational(0));
                        for (size_t s = 0; s < subset.size(); ++s)
                            for (int i = 0; i < m; ++i)
                                z[i] += mu[s] * (*pool[subset[s]].z)[i];
                        int cell = cell_of(ib, ia);
                        bool dup = false;
                        for (const auto& existing : next[cell])
                            if (existing.z == z) {
                                dup = true;
                                break;
                            }
                        if (dup) continue;
                        Cand c;
                        c.z = std::move(z);
                        c.kind = b_step ? SplitKind::BSplit : SplitKind::ASplit;
                        for (size_t s = 0; s < subset.size(); ++s)
                            c.from.emplace_back(mu[s], pool[subset[s]].ref);
                        next[cell].push_back(std::move(c));
                        if (++stored > opts.budget) return true;
                    }
                    return false;
                }
                for (int p = start; p < (int)pool.size(); ++p) {
                    subset.push_back(p);
                    if (self(self, p + 1, want)) return true;
                    subset.pop_back();
                }
                return false;
            };
            for (int want = 2; want <= max_support; ++want)
                if (recurse(recurse, 0, want)) return out_of_budget("search budget exhausted");
        }
        levels.push_back(std::move(next));
    }

    int root_cell = cell_of(find_in(grid_b, prior_b), find_in(grid_a, prior_a));
    const auto& top = levels.back()[root_cell];
    ZVec target(m);
    for (int i = 0; i < m; ++i) target[i] = marginal[i].prob;

    LinearProgram lp;
    for (size_t k = 0; k < top.size(); ++k) lp.add_var(Rational(0));
    for (int i = 0; i < m; ++i) {
        std::vector<Rational> row(top.size());
        for (size_t k = 0; k < top.size(); ++k) row[k] = top[k].z[i];
        lp.add_constraint(std::move(row), Relation::Equal, target[i]);
    }
    LPSolution sol = lp_solve(lp);
    if (sol.status != LPStatus::Optimal)
        return out_of_budget("no witness over the candidate grid at this depth");

    SplitWitness wit;
    for (const auto& pm : marginal) wit.support.emplace_back(pm.q_b, pm.q_a);

    auto materialize = [&](auto&& self, const CandRef& ref) -> SplitNode {
        const Cand& cand = levels[ref.level][ref.cell][ref.index];
        SplitNode node;
        node.point.q_b = grid_b[ref.cell / ga];
        node.point.q_a = grid_a[ref.cell % ga];
        node.point.z = cand.z;
        node.kind = cand.leaf ? SplitKind::Leaf : cand.kind;
        for (const auto& [weight, child] : cand.from) {
            node.weights.push_back(weight);
            node.children.push_back(self(self, child));
        }
        return node;
    };

    std::vector<std::pair<Rational, CandRef>> picked;
    for (size_t k = 0; k < top.size(); ++k)
        if (!sol.point[k].is_zero())
            picked.emplace_back(sol.point[k], CandRef{(int)levels.size() - 1, root_cell, (int)k});

    if (picked.size() == 1 && picked[0].first == 1) {
        wit.root = materialize(materialize, picked[0].second);
    } else {
        // Blend as an A-split over candidates sharing the root q_B; splice
        // depth-saturated A-splits so sigma stays within `rounds`.
        SplitNode root;
        root.kind = SplitKind::ASplit;
        root.point.q_b = prior_b;
        root.point.q_a = prior_a;
        root.point.z = target;
        for (const auto& [weight, ref] : picked) {
            SplitNode child = materialize(materialize, ref);
            if (child.kind == SplitKind::ASplit && witness_depths(child).sigma >= rounds &&
                rounds > 0) {
                for (size_t k = 0; k < child.children.size(); ++k) {
                    root.weights.push_back(weight * child.weights[k]);
                    root.children.push_back(child.children[k]);
                }
            } else {
                root.weights.push_back(weight);
                root.children.push_back(std::move(child));
            }
        }
        wit.root = std::move(root);
    }

    if (!verify_witness(j, wit, rounds, prior_a, prior_b))
        return out_of_budget("internal: extracted witness failed verification");
    verdict.status = FeasStatus::Feasible;
    verdict.witness = std::move(wit);
    return verdict;
}

ConversationProtocol witness_to_conversation(const SplitWitness& w, const Belief& prior_a,
                                             const Belief& prior_b) {
    const int rounds = witness_depths(w.root).sigma;
    ConversationProtocol c;
    for (int x = 0; x < prior_a.size(); ++x) c.types_a.push_back("A" + std::to_string(x));
    for (int y = 0; y < prior_b.size(); ++y) c.types_b.push_back("B" + std::to_string(y));
    c.rounds.resize(rounds);

    // Per-round signal sets are shared across branches; size each slot to the
    // widest split that lands in it.
    std::vector<int> width(2 * rounds, 1);
    auto widths = [&](auto&& self, const SplitNode& node, int slot) -> void {
        if (node.kind == SplitKind::Leaf || slot >= 2 * rounds) return;
        bool alice_slot = slot % 2 == 0;
        if ((node.kind == SplitKind::ASplit) != alice_slot) {
            self(self, node, slot + 1);
            return;
        }
        width[slot] = std::max(width[slot], (int)node.children.size());
        for (const auto& child : node.children) self(self, child, slot + 1);
    };
    widths(widths, w.root, 0);
    for (int s = 0; s < 2 * rounds; ++s) {
        auto& names = s % 2 == 0 ? c.rounds[s / 2].alice : c.rounds[s / 2].bob;
        char who = s % 2 == 0 ? 'a' : 'b';
        for (int k = 0; k < width[s]; ++k)
            names.push_back(std::string(1, who) + std::to_string(s / 2 + 1) + "_" +
                            std::to_string(k));
    }

    // Silent slots are type-independent point masses on the first signal;
    // split slots invert the belief decomposition by Bayes.
    auto emit = [&](auto&& self, const SplitNode& node, int slot, History& h) -> void {
        if (slot >= 2 * rounds) return;
        bool alice_slot = slot % 2 == 0;
        auto& kernel = alice_slot ? c.alice_kernel : c.bob_kernel;
        int ntypes = alice_slot ? prior_a.size() : prior_b.size();
        bool matches =
            node.kind != SplitKind::Leaf && (node.kind == SplitKind::ASplit) == alice_slot;
        if (!matches) {
            std::vector<std::vector<Rational>> rows(
                ntypes, std::vector<Rational>(width[slot], Rational(0)));
            for (auto& row : rows) row[0] = 1;
            kernel[h] = std::move(rows);
            h.push_back(0);
            self(self, node, slot + 1, h);
            h.pop_back();
            return;
        }
        const Belief& own = alice_slot ? node.point.q_a : node.point.q_b;
        std::vector<std::vector<Rational>> rows(ntypes,
                                                std::vector<Rational>(width[slot], Rational(0)));
        for (int t = 0; t < ntypes; ++t) {
            if (own[t].is_zero()) {
                rows[t][0] = 1;  // type inconsistent with this node
                continue;
            }
            for (size_t k = 0; k < node.children.size(); ++k) {
                const Belief& child_own =
                    alice_slot ? node.children[k].point.q_a : node.children[k].point.q_b;
                rows[t][k] = node.weights[k] * child_own[t] / own[t];
            }
        }
        kernel[h] = std::move(rows);
        for (size_t k = 0; k < node.children.size(); ++k) {
            h.push_back((int)k);
            self(self, node.children[k], slot + 1, h);
            h.pop_back();
        }
    };
    History h;
    emit(emit, w.root, 0, h);
    validate(c);
    return c;
}

}  // namespace convo
