#include "convo/ir.hpp"

namespace convo {

namespace {

std::vector<Rational> per_type_baselines(const Game& g, const std::vector<int>& r0) {
    std::vector<Rational> base(g.num_types_b(), Rational(0));
    for (int y = 0; y < g.num_types_b(); ++y)
        for (int x = 0; x < g.num_types_a(); ++x) base[y] += g.prior_a[x] * g.ub(y, x, r0[x]);
    return base;
}

void seed_baselines(IRReport& report, const Game& g) {
    report.no_comm_actions = no_comm_profile(g);
    report.baseline_per_type = per_type_baselines(g, report.no_comm_actions);
    report.baseline_ex_ante = 0;
    for (int y = 0; y < g.num_types_b(); ++y)
        report.baseline_ex_ante += g.prior_b[y] * report.baseline_per_type[y];
}

void record(IRReport& report, std::string context, Rational lhs, Rational rhs) {
    if (lhs < rhs) {
        report.pass = false;
        report.violations.push_back({std::move(context), std::move(lhs), std::move(rhs)});
    }
}

// Tree of positive-probability history prefixes.
struct Node {
    History history;
    int parent = -1;
    ReachMatrix reach;
    Belief q_a, q_b;
    std::vector<int> children;
    bool leaf = false;
};

std::vector<Node> build_tree(const Game& g, const ConversationProtocol& c, long budget) {
    simulate(c, g.prior_a, g.prior_b, budget);  // validation + budget enforcement
    std::vector<Node> nodes;
    auto posteriors = [](const ReachMatrix& m) {
        Rational total = m.total();
        std::vector<Rational> qa(m.m.size(), Rational(0)), qb(m.m[0].size(), Rational(0));
        for (size_t x = 0; x < m.m.size(); ++x)
            for (size_t y = 0; y < m.m[x].size(); ++y) {
                qa[x] += m.m[x][y];
                qb[y] += m.m[x][y];
            }
        for (auto& v : qa) v /= total;
        for (auto& v : qb) v /= total;
        return std::make_pair(Belief{std::move(qa)}, Belief{std::move(qb)});
    };
    auto visit = [&](auto&& self, History& h, const ReachMatrix& m, int parent) -> void {
        Node node;
        node.history = h;
        node.parent = parent;
        node.reach = m;
        auto post = posteriors(m);
        node.q_a = post.first;
        node.q_b = post.second;
        node.leaf = h.size() == 2 * (size_t)c.num_rounds();
        int index = (int)nodes.size();
        if (parent >= 0) nodes[parent].children.push_back(index);
        nodes.push_back(std::move(node));
        if (nodes[index].leaf) return;
        bool alice = h.size() % 2 == 0;
        int round = (int)(h.size() / 2);
        int count = alice ? (int)c.rounds[round].alice.size() : (int)c.rounds[round].bob.size();
        for (int s = 0; s < count; ++s) {
            h.push_back(s);
            ReachMatrix next = reach_matrix(c, h, g.prior_a, g.prior_b);
            if (!next.is_zero()) self(self, h, next, index);
            h.pop_back();
        }
    };
    History root;
    visit(visit, root, reach_matrix(c, root, g.prior_a, g.prior_b), -1);
    return nodes;
}

Rational col_mass(const ReachMatrix& m, int y) {
    Rational s = 0;
    for (const auto& row : m.m) s += row[y];
    return s;
}

Rational row_mass(const ReachMatrix& m, int x) {
    Rational s = 0;
    for (const auto& v : m.m[x]) s += v;
    return s;
}

// E[u_B(y, theta_A, r*(theta_A, q_B^final)) | theta_B = y, node], bottom-up.
std::vector<std::vector<Rational>> continue_values_b(const Game& g,
                                                     const std::vector<Node>& nodes) {
    std::vector<std::vector<Rational>> cont(nodes.size(),
                                            std::vector<Rational>(g.num_types_b(), Rational(0)));
    for (int i = (int)nodes.size() - 1; i >= 0; --i) {
        const auto& node = nodes[i];
        for (int y = 0; y < g.num_types_b(); ++y) {
            Rational my = col_mass(node.reach, y);
            if (my.is_zero()) continue;
            if (node.leaf) {
                Rational v = 0;
                for (int x = 0; x < g.num_types_a(); ++x) {
                    if (node.reach.m[x][y].is_zero()) continue;
                    int r = best_response(g, x, node.q_b);
                    v += node.reach.m[x][y] / my * g.ub(y, x, r);
                }
                cont[i][y] = v;
            } else {
                Rational v = 0;
                for (int ch : node.children) {
                    Rational cy = col_mass(nodes[ch].reach, y);
                    if (cy.is_zero()) continue;
                    v += cy / my * cont[ch][y];
                }
                cont[i][y] = v;
            }
        }
    }
    return cont;
}

Rational quit_value_b(const Game& g, const Node& node, int y) {
    Rational my = col_mass(node.reach, y);
    Rational v = 0;
    for (int x = 0; x < g.num_types_a(); ++x) {
        if (node.reach.m[x][y].is_zero()) continue;
        int r = best_response(g, x, node.q_b);
        v += node.reach.m[x][y] / my * g.ub(y, x, r);
    }
    return v;
}

std::string node_context(const Game& g, const ConversationProtocol& c, const Node& node, int y) {
    std::string label = history_label(c, node.history);
    return "node '" + (label.empty() ? std::string("(root)") : label) + "', type " +
           g.types_b[y];
}

}  // namespace

std::string ir_notion_name(IRNotion n) {
    switch (n) {
        case IRNotion::ExAnte: return "exante";
        case IRNotion::Interim: return "interim";
        case IRNotion::ExPost: return "expost";
        case IRNotion::NonCommittedInterim: return "noncommitted";
    }
    return "?";
}

ProtocolOutcomes outcomes_of(const Game& g, const MediatorProtocol& p) {
    ProtocolOutcomes out;
    for (auto& o : induced_observer_distribution(p, g.prior_a, g.prior_b)) {
        out.labels.push_back(p.signals[o.signal]);
        out.family.emplace_back(o.prob, std::move(o.posterior));
    }
    return out;
}

ProtocolOutcomes outcomes_of(const Game& g, const ConversationProtocol& c, long budget) {
    ProtocolOutcomes out;
    for (auto& leaf : simulate(c, g.prior_a, g.prior_b, budget)) {
        out.labels.push_back(history_label(c, leaf.history));
        out.family.emplace_back(leaf.prob, leaf.reach.normalized());
    }
    return out;
}

IRReport exante_ir(const Game& g, const JointPosteriorDistribution& j) {
    IRReport report;
    report.notion = IRNotion::ExAnte;
    seed_baselines(report, g);
    Rational lhs = 0;
    for (const auto& atom : j.atoms)
        lhs += atom.prob * g.ub(atom.type_b, atom.type_a, best_response(g, atom.type_a, atom.q_b));
    record(report, "ex-ante", lhs, report.baseline_ex_ante);
    return report;
}

IRReport interim_ir(const Game& g, const JointPosteriorDistribution& j) {
    IRReport report;
    report.notion = IRNotion::Interim;
    seed_baselines(report, g);
    for (int y = 0; y < g.num_types_b(); ++y) {
        if (g.prior_b[y].is_zero()) continue;
        Rational lhs = 0;
        for (const auto& atom : j.atoms) {
            if (atom.type_b != y) continue;
            lhs += atom.prob * g.ub(y, atom.type_a, best_response(g, atom.type_a, atom.q_b));
        }
        lhs /= g.prior_b[y];
        record(report, "type " + g.types_b[y], lhs, report.baseline_per_type[y]);
    }
    return report;
}

IRReport expost_ir(const Game& g, const ProtocolOutcomes& outcomes) {
    IRReport report;
    report.notion = IRNotion::ExPost;
    seed_baselines(report, g);
    for (size_t k = 0; k < outcomes.family.size(); ++k) {
        const auto& post = outcomes.family[k].second;
        for (int y = 0; y < g.num_types_b(); ++y) {
            Rational my = 0;
            for (int x = 0; x < g.num_types_a(); ++x) my += post.m[x][y];
            if (my.is_zero()) continue;  // (outcome, type) pair has probability zero
            Rational lhs = 0, rhs = 0;
            for (int x = 0; x < g.num_types_a(); ++x) {
                if (post.m[x][y].is_zero()) continue;
                Rational weight = post.m[x][y] / my;
                Belief q_b = condition_on_type(post, Side::A, x);
                lhs += weight * g.ub(y, x, best_response(g, x, q_b));
                rhs += weight * g.ub(y, x, report.no_comm_actions[x]);
            }
            record(report, "outcome '" + outcomes.labels[k] + "', type " + g.types_b[y], lhs,
                   rhs);
        }
    }
    return report;
}

IRReport exante_ir(const Game& g, const MediatorProtocol& p) {
    return exante_ir(g, induced_joint_posterior(p, g.prior_a, g.prior_b));
}
IRReport exante_ir(const Game& g, const ConversationProtocol& c, long budget) {
    return exante_ir(g, induced_joint_posterior(c, g.prior_a, g.prior_b, budget));
}
IRReport interim_ir(const Game& g, const MediatorProtocol& p) {
    return interim_ir(g, induced_joint_posterior(p, g.prior_a, g.prior_b));
}
IRReport interim_ir(const Game& g, const ConversationProtocol& c, long budget) {
    return interim_ir(g, induced_joint_posterior(c, g.prior_a, g.prior_b, budget));
}
IRReport expost_ir(const Game& g, const MediatorProtocol& p) {
    return expost_ir(g, outcomes_of(g, p));
}
IRReport expost_ir(const Game& g, const ConversationProtocol& c, long budget) {
    return expost_ir(g, outcomes_of(g, c, budget));
}

IRReport noncommitted_interim_ir(const Game& g, const ConversationProtocol& c, long budget) {
    IRReport report;
    report.notion = IRNotion::NonCommittedInterim;
    seed_baselines(report, g);
    auto nodes = build_tree(g, c, budget);
    auto cont = continue_values_b(g, nodes);
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (int y = 0; y < g.num_types_b(); ++y) {
            if (col_mass(nodes[i].reach, y).is_zero()) continue;
            record(report, node_context(g, c, nodes[i], y), cont[i][y],
                   quit_value_b(g, nodes[i], y));
        }
    }
    return report;
}

IRReport noncommitted_interim_ir(const Game& g, const MediatorProtocol& p) {
    IRReport report = interim_ir(g, p);
    report.notion = IRNotion::NonCommittedInterim;
    return report;
}

std::vector<NodeQuitValue> node_quit_values(const Game& g, const ConversationProtocol& c,
                                            long budget) {
    auto nodes = build_tree(g, c, budget);
    std::vector<NodeQuitValue> out;
    for (const auto& node : nodes)
        for (int y = 0; y < g.num_types_b(); ++y) {
            if (col_mass(node.reach, y).is_zero()) continue;
            out.push_back({node.history, y, quit_value_b(g, node, y)});
        }
    return out;
}

IRReport alice_auto_ir(const Game& g, const ConversationProtocol& c, long budget) {
    IRReport report;
    seed_baselines(report, g);
    auto r0 = report.no_comm_actions;
    auto j = induced_joint_posterior(c, g.prior_a, g.prior_b, budget);

    Rational lhs = 0, rhs = 0;
    std::vector<Rational> lhs_x(g.num_types_a(), Rational(0)),
        rhs_x(g.num_types_a(), Rational(0));
    for (const auto& atom : j.atoms) {
        int r = best_response(g, atom.type_a, atom.q_b);
        Rational gain = atom.prob * g.ua(atom.type_a, atom.type_b, r);
        Rational base = atom.prob * g.ua(atom.type_a, atom.type_b, r0[atom.type_a]);
        lhs += gain;
        rhs += base;
        lhs_x[atom.type_a] += gain;
        rhs_x[atom.type_a] += base;
    }
    record(report, "alice ex-ante", lhs, rhs);
    for (int x = 0; x < g.num_types_a(); ++x)
        record(report, "alice interim, type " + g.types_a[x], lhs_x[x], rhs_x[x]);

    auto outcomes = outcomes_of(g, c, budget);
    for (size_t k = 0; k < outcomes.family.size(); ++k) {
        const auto& post = outcomes.family[k].second;
        for (int x = 0; x < g.num_types_a(); ++x) {
            Rational mx = 0;
            for (int y = 0; y < g.num_types_b(); ++y) mx += post.m[x][y];
            if (mx.is_zero()) continue;
            Belief q_b = condition_on_type(post, Side::A, x);
            int r = best_response(g, x, q_b);
            record(report, "alice ex-post, outcome '" + outcomes.labels[k] + "'",
                   expected_ua(g, x, q_b, r), expected_ua(g, x, q_b, r0[x]));
        }
    }

    // Non-committed side: continuing (and best-responding at the end) beats
    // acting now on the current belief, at every node.
    auto nodes = build_tree(g, c, budget);
    std::vector<std::vector<Rational>> cont(nodes.size(),
                                            std::vector<Rational>(g.num_types_a(), Rational(0)));
    for (int i = (int)nodes.size() - 1; i >= 0; --i) {
        const auto& node = nodes[i];
        for (int x = 0; x < g.num_types_a(); ++x) {
            Rational mx = row_mass(node.reach, x);
            if (mx.is_zero()) continue;
            if (node.leaf) {
                cont[i][x] = expected_ua(g, x, node.q_b, best_response(g, x, node.q_b));
            } else {
                Rational v = 0;
                for (int ch : node.children) {
                    Rational cx = row_mass(nodes[ch].reach, x);
                    if (cx.is_zero()) continue;
                    v += cx / mx * cont[ch][x];
                }
                cont[i][x] = v;
            }
        }
    }
    for (size_t i = 0; i < nodes.size(); ++i)
        for (int x = 0; x < g.num_types_a(); ++x) {
            if (row_mass(nodes[i].reach, x).is_zero()) continue;
            Rational quit = expected_ua(g, x, nodes[i].q_b, best_response(g, x, nodes[i].q_b));
            record(report, "alice non-committed, type " + g.types_a[x], cont[i][x], quit);
        }
    return report;
}

IRReport alice_auto_ir(const Game& g, const MediatorProtocol& p) {
    IRReport report;
    seed_baselines(report, g);
    auto r0 = report.no_comm_actions;
    auto j = induced_joint_posterior(p, g.prior_a, g.prior_b);
    Rational lhs = 0, rhs = 0;
    for (const auto& atom : j.atoms) {
        int r = best_response(g, atom.type_a, atom.q_b);
        lhs += atom.prob * g.ua(atom.type_a, atom.type_b, r);
        rhs += atom.prob * g.ua(atom.type_a, atom.type_b, r0[atom.type_a]);
    }
    record(report, "alice ex-ante", lhs, rhs);
    auto outcomes = outcomes_of(g, p);
    for (size_t k = 0; k < outcomes.family.size(); ++k) {
        const auto& post = outcomes.family[k].second;
        for (int x = 0; x < g.num_types_a(); ++x) {
            Rational mx = 0;
            for (int y = 0; y < g.num_types_b(); ++y) mx += post.m[x][y];
            if (mx.is_zero()) continue;
            Belief q_b = condition_on_type(post, Side::A, x);
            int r = best_response(g, x, q_b);
            record(report, "alice ex-post, outcome '" + outcomes.labels[k] + "'",
                   expected_ua(g, x, q_b, r), expected_ua(g, x, q_b, r0[x]));
        }
    }
    return report;
}

}  // namespace convo
