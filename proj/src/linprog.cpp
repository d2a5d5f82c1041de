#include "convo/linprog.hpp"

#include <cassert>
#include <stdexcept>

namespace convo {

int LinearProgram::add_var(const Rational& obj_coeff, bool nonnegative) {
    objective.push_back(obj_coeff);
    nonneg.push_back(nonnegative);
    return num_vars++;
}

void LinearProgram::add_constraint(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    if ((int)coeffs.size() != num_vars)
        throw std::invalid_argument("constraint width does not match variable count");
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

// Dense tableau over equalities A x = b with x >= 0.  Reduced costs are
// recomputed per pivot; problem sizes here are small and exactness matters
// more than speed.
struct Tableau {
    int m, n;
    int n_active;                          // columns eligible to enter the basis
    std::vector<std::vector<Rational>> a;  // m rows, n cols
    std::vector<Rational> b;               // rhs, kept >= 0
    std::vector<int> basis;                // per row, basic column

    bool pivot_column(const std::vector<Rational>& cost, int& out_col) const {
        // Bland: lowest-index column with positive reduced cost.
        for (int j = 0; j < n_active; ++j) {
            Rational red = cost[j];
            for (int i = 0; i < m; ++i)
                if (!cost[basis[i]].is_zero()) red -= cost[basis[i]] * a[i][j];
            if (red > 0) {
                out_col = j;
                return true;
            }
        }
        return false;
    }

    // Returns false when the column is unbounded.
    bool pivot_row(int col, int& out_row) const {
        int row = -1;
        Rational best;
        for (int i = 0; i < m; ++i) {
            if (a[i][col] > 0) {
                Rational ratio = b[i] / a[i][col];
                if (row < 0 || ratio < best || (ratio == best && basis[i] < basis[row])) {
                    row = i;
                    best = ratio;
                }
            }
        }
        out_row = row;
        return row >= 0;
    }

    void pivot(int row, int col) {
        Rational inv = 1 / a[row][col];
        for (auto& v : a[row]) v *= inv;
        b[row] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            Rational f = a[i][col];
            for (int j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        basis[row] = col;
    }

    // Maximizes cost over the current basis; true unless unbounded.
    bool run(const std::vector<Rational>& cost) {
        for (;;) {
            int col, row;
            if (!pivot_column(cost, col)) return true;
            if (!pivot_row(col, row)) return false;
            pivot(row, col);
        }
    }

    Rational objective_value(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (int i = 0; i < m; ++i) v += cost[basis[i]] * b[i];
        return v;
    }
};

}  // namespace

LPSolution lp_solve(const LinearProgram& lp) {
    const int n0 = lp.num_vars;
    const int m = (int)lp.constraints.size();

    // Standard form: free vars split as x = p - q; inequality rows get a slack.
    std::vector<int> pos_col(n0), neg_col(n0, -1);
    int n = 0;
    for (int j = 0; j < n0; ++j) {
        pos_col[j] = n++;
        if (!lp.nonneg[j]) neg_col[j] = n++;
    }
    std::vector<int> slack_col(m, -1);
    for (int i = 0; i < m; ++i)
        if (lp.constraints[i].rel != Relation::Equal) slack_col[i] = n++;
    const int n_struct = n;
    // One artificial per row gives a trivially valid phase-1 basis.
    std::vector<int> art_col(m);
    for (int i = 0; i < m; ++i) art_col[i] = n++;

    Tableau t;
    t.m = m;
    t.n = n;
    t.n_active = n;
    t.a.assign(m, std::vector<Rational>(n, Rational(0)));
    t.b.resize(m);
    t.basis.resize(m);

    for (int i = 0; i < m; ++i) {
        const auto& row = lp.constraints[i];
        int sign = row.rhs < 0 ? -1 : 1;
        for (int j = 0; j < n0; ++j) {
            t.a[i][pos_col[j]] = sign * row.coeffs[j];
            if (neg_col[j] >= 0) t.a[i][neg_col[j]] = -sign * row.coeffs[j];
        }
        if (slack_col[i] >= 0) {
            Rational s = row.rel == Relation::LessEq ? Rational(1) : Rational(-1);
            t.a[i][slack_col[i]] = sign * s;
        }
        t.b[i] = sign * row.rhs;
        t.a[i][art_col[i]] = 1;
        t.basis[i] = art_col[i];
    }

    // Phase 1: maximize -sum(artificials).
    std::vector<Rational> phase1(n, Rational(0));
    for (int i = 0; i < m; ++i) phase1[art_col[i]] = -1;
    t.run(phase1);  // bounded below by construction
    if (!t.objective_value(phase1).is_zero()) return {LPStatus::Infeasible, Rational(0), {}};

    // Drive leftover artificials out of the basis; all-zero rows are redundant.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n_struct) continue;
        int col = -1;
        for (int j = 0; j < n_struct; ++j)
            if (!t.a[i][j].is_zero()) {
                col = j;
                break;
            }
        if (col >= 0) t.pivot(i, col);
        // else: redundant row; the artificial stays basic at value 0, harmless
        // as long as its column never re-enters.
    }

    // Phase 2: artificials may no longer enter.
    t.n_active = n_struct;
    std::vector<Rational> cost(n, Rational(0));
    for (int j = 0; j < n0; ++j) {
        cost[pos_col[j]] = lp.objective[j];
        if (neg_col[j] >= 0) cost[neg_col[j]] = -lp.objective[j];
    }
    if (!t.run(cost)) return {LPStatus::Unbounded, Rational(0), {}};

    std::vector<Rational> x(n, Rational(0));
    for (int i = 0; i < m; ++i) x[t.basis[i]] = t.b[i];
    LPSolution sol;
    sol.status = LPStatus::Optimal;
    sol.point.resize(n0);
    for (int j = 0; j < n0; ++j) {
        sol.point[j] = x[pos_col[j]];
        if (neg_col[j] >= 0) sol.point[j] -= x[neg_col[j]];
    }
    sol.value = 0;
    for (int j = 0; j < n0; ++j) sol.value += lp.objective[j] * sol.point[j];
    return sol;
}

}  // namespace convo
