#include "convo/conversation.hpp"

#include <algorithm>

namespace convo {

namespace {

int round_of(size_t history_len) { return (int)(history_len / 2); }

const std::vector<std::vector<Rational>>& kernel_rows(
    const std::map<History, std::vector<std::vector<Rational>>>& kernel, const History& h,
    const char* who) {
    auto it = kernel.find(h);
    if (it == kernel.end())
        throw DomainError(std::string(who) + " kernel missing a reachable history entry");
    return it->second;
}

void check_rows(const std::vector<std::vector<Rational>>& rows, int num_types, int num_signals,
                const char* who) {
    if ((int)rows.size() != num_types)
        throw DomainError(std::string(who) + " kernel entry must have one row per type");
    for (const auto& row : rows) {
        if ((int)row.size() != num_signals)
            throw DomainError(std::string(who) + " kernel row width mismatch");
        if (!is_distribution(row))
            throw DomainError(std::string(who) + " kernel row is not a distribution");
    }
}

ReachMatrix root_matrix(const Belief& prior_a, const Belief& prior_b) {
    ReachMatrix m;
    m.m = outer_product(prior_a, prior_b).m;
    return m;
}

ReachMatrix apply_alice(const ReachMatrix& m, const std::vector<std::vector<Rational>>& rows,
                        int signal) {
    ReachMatrix out = m;
    for (size_t x = 0; x < out.m.size(); ++x)
        for (auto& v : out.m[x]) v *= rows[x][signal];
    return out;
}

ReachMatrix apply_bob(const ReachMatrix& m, const std::vector<std::vector<Rational>>& rows,
                      int signal) {
    ReachMatrix out = m;
    for (auto& row : out.m)
        for (size_t y = 0; y < row.size(); ++y) row[y] *= rows[y][signal];
    return out;
}

std::pair<Belief, Belief> nonzero_posteriors(const ReachMatrix& m) {
    Rational total = m.total();
    std::vector<Rational> qa(m.m.size()), qb(m.m[0].size(), Rational(0));
    for (size_t x = 0; x < m.m.size(); ++x) {
        Rational row_sum = 0;
        for (size_t y = 0; y < m.m[x].size(); ++y) {
            row_sum += m.m[x][y];
            qb[y] += m.m[x][y];
        }
        qa[x] = row_sum / total;
    }
    for (auto& v : qb) v /= total;
    return {Belief{std::move(qa)}, Belief{std::move(qb)}};
}

struct Walker {
    const ConversationProtocol& c;
    long budget;
    long leaves = 0;
    std::vector<TranscriptLeaf> out;

    void walk(History& h, const ReachMatrix& m) {
        if (round_of(h.size()) == c.num_rounds() && h.size() % 2 == 0) {
            if (++leaves > budget) throw BudgetError("transcript budget exceeded");
            out.push_back({h, m.total(), m});
            return;
        }
        bool alice = h.size() % 2 == 0;
        int round = round_of(h.size());
        const auto& signals = alice ? c.rounds[round].alice : c.rounds[round].bob;
        const auto& rows = alice ? kernel_rows(c.alice_kernel, h, "Alice")
                                 : kernel_rows(c.bob_kernel, h, "Bob");
        check_rows(rows, alice ? c.num_types_a() : c.num_types_b(), (int)signals.size(),
                   alice ? "Alice" : "Bob");
        for (int s = 0; s < (int)signals.size(); ++s) {
            ReachMatrix next = alice ? apply_alice(m, rows, s) : apply_bob(m, rows, s);
            if (next.is_zero()) continue;
            h.push_back(s);
            walk(h, next);
            h.pop_back();
        }
    }
};

}  // namespace

Rational ReachMatrix::total() const {
    Rational t = 0;
    for (const auto& row : m)
        for (const auto& v : row) t += v;
    return t;
}

ObserverPosterior ReachMatrix::normalized() const {
    Rational t = total();
    if (t.is_zero()) throw DomainError("cannot normalize a zero reach matrix");
    ObserverPosterior q{m};
    for (auto& row : q.m)
        for (auto& v : row) v /= t;
    return q;
}

void validate(const ConversationProtocol& c) {
    if (c.types_a.empty() || c.types_b.empty()) throw DomainError("protocol type spaces empty");
    for (const auto& r : c.rounds)
        if (r.alice.empty() || r.bob.empty())
            throw DomainError("every round needs nonempty signal sets");
    for (const auto& [h, rows] : c.alice_kernel) {
        if (h.size() % 2 != 0 || round_of(h.size()) >= c.num_rounds())
            throw DomainError("Alice kernel keyed by a non-Alice history");
        check_rows(rows, c.num_types_a(), (int)c.rounds[round_of(h.size())].alice.size(), "Alice");
    }
    for (const auto& [h, rows] : c.bob_kernel) {
        if (h.size() % 2 != 1 || round_of(h.size()) >= c.num_rounds())
            throw DomainError("Bob kernel keyed by a non-Bob history");
        check_rows(rows, c.num_types_b(), (int)c.rounds[round_of(h.size())].bob.size(), "Bob");
    }
}

ReachMatrix reach_matrix(const ConversationProtocol& c, const History& h, const Belief& prior_a,
                         const Belief& prior_b) {
    if (round_of(h.size() + 1) > c.num_rounds())
        throw DomainError("history longer than the protocol");
    ReachMatrix m = root_matrix(prior_a, prior_b);
    History prefix;
    for (size_t i = 0; i < h.size(); ++i) {
        bool alice = i % 2 == 0;
        int round = round_of(i);
        const auto& signals = alice ? c.rounds[round].alice : c.rounds[round].bob;
        if (h[i] < 0 || h[i] >= (int)signals.size())
            throw DomainError("history signal out of range");
        if (m.is_zero()) return ReachMatrix{zero_posterior((int)m.m.size(), (int)m.m[0].size()).m};
        const auto& rows = alice ? kernel_rows(c.alice_kernel, prefix, "Alice")
                                 : kernel_rows(c.bob_kernel, prefix, "Bob");
        check_rows(rows, alice ? c.num_types_a() : c.num_types_b(), (int)signals.size(),
                   alice ? "Alice" : "Bob");
        m = alice ? apply_alice(m, rows, h[i]) : apply_bob(m, rows, h[i]);
        prefix.push_back(h[i]);
    }
    return m;
}

std::pair<Belief, Belief> posteriors_at(const ConversationProtocol& c, const History& h,
                                        const Belief& prior_a, const Belief& prior_b) {
    ReachMatrix m = reach_matrix(c, h, prior_a, prior_b);
    if (m.is_zero()) throw DomainError("zero-probability history");
    return nonzero_posteriors(m);
}

std::vector<TranscriptLeaf> simulate(const ConversationProtocol& c, const Belief& prior_a,
                                     const Belief& prior_b, long budget) {
    validate(c);
    if (prior_a.size() != c.num_types_a() || prior_b.size() != c.num_types_b())
        throw DomainError("prior dimensions do not match the protocol");
    Walker w{c, budget};
    History h;
    ReachMatrix root = root_matrix(prior_a, prior_b);
    if (!root.is_zero()) w.walk(h, root);
    return std::move(w.out);
}

JointPosteriorDistribution induced_joint_posterior(const ConversationProtocol& c,
                                                   const Belief& prior_a, const Belief& prior_b,
                                                   long budget) {
    auto leaves = simulate(c, prior_a, prior_b, budget);
    JointPosteriorDistribution j;
    j.num_types_a = c.num_types_a();
    j.num_types_b = c.num_types_b();
    for (const auto& leaf : leaves) {
        auto [qa, qb] = nonzero_posteriors(leaf.reach);
        for (int x = 0; x < j.num_types_a; ++x)
            for (int y = 0; y < j.num_types_b; ++y) {
                if (leaf.reach.m[x][y].is_zero()) continue;
                j.atoms.push_back({x, y, qb, qa, leaf.reach.m[x][y]});
            }
    }
    canonicalize(j);
    return j;
}

std::string history_label(const ConversationProtocol& c, const History& h) {
    std::string label;
    for (size_t i = 0; i < h.size(); ++i) {
        bool alice = i % 2 == 0;
        int round = (int)(i / 2);
        const auto& name =
            alice ? c.rounds[round].alice[h[i]] : c.rounds[round].bob[h[i]];
        label += (i ? "." : "") + name;
    }
    return label;
}

std::pair<DimartingaleTrace, DimartingaleReport> dimartingale_audit(
    const ConversationProtocol& c, const Belief& prior_a, const Belief& prior_b, long budget) {
    simulate(c, prior_a, prior_b, budget);  // validates and enforces the budget

    DimartingaleTrace trace;
    DimartingaleReport report;

    // First pass: collect nodes in preorder and the final belief pairs.
    struct Rec {
        int index;
        ReachMatrix m;
    };
    std::vector<ReachMatrix> mats;
    std::map<std::pair<std::vector<Rational>, std::vector<Rational>>, int> pair_index;

    std::vector<std::pair<Belief, Belief>> pairs;
    auto visit = [&](auto&& self, History& h, const ReachMatrix& m, int parent) -> void {
        auto [qa, qb] = nonzero_posteriors(m);
        TraceNode node;
        node.history = h;
        node.parent = parent;
        node.prob = m.total();
        node.edge_prob = parent < 0 ? Rational(1) : node.prob / trace.nodes[parent].prob;
        node.q_a = qa;
        node.q_b = qb;
        int index = (int)trace.nodes.size();
        trace.nodes.push_back(std::move(node));
        mats.push_back(m);
        bool complete = round_of(h.size()) == c.num_rounds() && h.size() % 2 == 0;
        if (complete) {
            auto key = std::make_pair(qb.w, qa.w);
            if (!pair_index.count(key)) {
                pair_index[key] = (int)pairs.size();
                pairs.emplace_back(qb, qa);
            }
            return;
        }
        bool alice = h.size() % 2 == 0;
        int round = round_of(h.size());
        const auto& signals = alice ? c.rounds[round].alice : c.rounds[round].bob;
        const auto& rows =
            alice ? c.alice_kernel.at(h) : c.bob_kernel.at(h);
        for (int s = 0; s < (int)signals.size(); ++s) {
            ReachMatrix next = alice ? apply_alice(m, rows, s) : apply_bob(m, rows, s);
            if (next.is_zero()) continue;
            h.push_back(s);
            self(self, h, next, index);
            h.pop_back();
        }
    };
    History root_h;
    ReachMatrix root = root_matrix(prior_a, prior_b);
    visit(visit, root_h, root, -1);

    // Canonical order for the final pair support.
    std::vector<int> order(pairs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tie(pairs[a].first.w, pairs[a].second.w) <
               std::tie(pairs[b].first.w, pairs[b].second.w);
    });
    std::vector<int> rank(pairs.size());
    for (size_t i = 0; i < order.size(); ++i) {
        rank[order[i]] = (int)i;
        trace.final_pairs.push_back(pairs[order[i]]);
    }

    // Second pass, children-after-parent order guarantees leaves are filled
    // before their ancestors when walking backwards.
    const int np = (int)trace.final_pairs.size();
    for (auto& node : trace.nodes) node.gamma.assign(np, Rational(0));
    for (int i = (int)trace.nodes.size() - 1; i >= 0; --i) {
        auto& node = trace.nodes[i];
        bool complete =
            round_of(node.history.size()) == c.num_rounds() && node.history.size() % 2 == 0;
        if (complete) {
            auto key = std::make_pair(node.q_b.w, node.q_a.w);
            node.gamma[rank[pair_index[key]]] = 1;
        }
        if (node.parent >= 0) {
            auto& parent = trace.nodes[node.parent];
            for (int p = 0; p < np; ++p) parent.gamma[p] += node.edge_prob * node.gamma[p];
        }
    }

    auto complain = [&](const std::string& what, const History& at) {
        report.pass = false;
        std::string where = "[";
        for (size_t i = 0; i < at.size(); ++i) where += (i ? "," : "") + std::to_string(at[i]);
        report.issues.push_back(what + " at history " + where + "]");
    };

    // Single-coordinate moves plus the martingale identities.
    std::vector<std::vector<int>> children(trace.nodes.size());
    for (size_t i = 1; i < trace.nodes.size(); ++i)
        children[trace.nodes[i].parent].push_back((int)i);
    for (size_t i = 0; i < trace.nodes.size(); ++i) {
        const auto& node = trace.nodes[i];
        if (node.parent >= 0) {
            const auto& parent = trace.nodes[node.parent];
            bool alice_moved = node.history.size() % 2 == 1;
            if (alice_moved && !(node.q_b == parent.q_b))
                complain("Alice's move changed q_B", node.history);
            if (!alice_moved && !(node.q_a == parent.q_a))
                complain("Bob's move changed q_A", node.history);
        }
        if (children[i].empty()) continue;
        std::vector<Rational> ea(node.q_a.size(), Rational(0)), eb(node.q_b.size(), Rational(0)),
            eg(np, Rational(0));
        Rational mass = 0;
        for (int ch : children[i]) {
            const auto& child = trace.nodes[ch];
            mass += child.edge_prob;
            for (int k = 0; k < node.q_a.size(); ++k) ea[k] += child.edge_prob * child.q_a[k];
            for (int k = 0; k < node.q_b.size(); ++k) eb[k] += child.edge_prob * child.q_b[k];
            for (int p = 0; p < np; ++p) eg[p] += child.edge_prob * child.gamma[p];
        }
        if (mass != 1) complain("children probabilities do not sum to 1", node.history);
        if (ea != node.q_a.w) complain("q_A martingale identity fails", node.history);
        if (eb != node.q_b.w) complain("q_B martingale identity fails", node.history);
        if (eg != node.gamma) complain("gamma martingale identity fails", node.history);
    }
    return {std::move(trace), std::move(report)};
}

}  // namespace convo
