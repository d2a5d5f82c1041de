#include "convo/repeated.hpp"

namespace convo {

Rational committed_value(const Game& g, const ConversationProtocol& c, long budget) {
    auto j = induced_joint_posterior(c, g.prior_a, g.prior_b, budget);
    Rational v = 0;
    for (const auto& atom : j.atoms)
        v += atom.prob * g.ub(atom.type_b, atom.type_a, best_response(g, atom.type_a, atom.q_b));
    return v;
}

Rational quit_ceiling(const Game& g, const ConversationProtocol& c, long budget) {
    auto quits = node_quit_values(g, c, budget);
    if (quits.empty()) throw DomainError("protocol has no reachable nodes");
    Rational best = quits.front().value;
    for (const auto& q : quits) best = std::max(best, q.value);
    return best;
}

Rational delta_threshold(const Game& g, const ConversationProtocol& c, long budget) {
    Rational u_star = committed_value(g, c, budget);
    if (u_star <= 0) throw DomainError("delta threshold needs a positive committed value");
    Rational ceiling = quit_ceiling(g, c, budget);
    if (ceiling <= u_star) return Rational(0);
    return 1 - u_star / ceiling;
}

IRReport audit_repeated_ir(const RepeatedSpec& spec, long budget) {
    const Game& g = spec.base;
    if (spec.delta < 0 || spec.delta >= 1) throw DomainError("delta must lie in [0, 1)");
    if (spec.horizon < 1) throw DomainError("horizon must be at least 1");

    IRReport report;
    report.notion = IRNotion::NonCommittedInterim;
    report.no_comm_actions = no_comm_profile(g);
    report.baseline_per_type.assign(g.num_types_b(), Rational(0));
    for (int y = 0; y < g.num_types_b(); ++y)
        for (int x = 0; x < g.num_types_a(); ++x)
            report.baseline_per_type[y] += g.prior_a[x] * g.ub(y, x, report.no_comm_actions[x]);
    report.baseline_ex_ante = 0;
    for (int y = 0; y < g.num_types_b(); ++y)
        report.baseline_ex_ante += g.prior_b[y] * report.baseline_per_type[y];

    Rational u_star = committed_value(g, spec.protocol, budget);
    Rational continue_from_copy_start = u_star / (1 - spec.delta);
    Rational punish_stream = spec.punishment == Punishment::ZeroFuture
                                 ? Rational(0)
                                 : spec.delta * report.baseline_ex_ante / (1 - spec.delta);

    auto quits = node_quit_values(g, spec.protocol, budget);
    Rational scale = 1;  // delta^(copy-1)
    for (int copy = 1; copy <= spec.horizon; ++copy) {
        for (const auto& q : quits) {
            Rational quit_total = scale * (q.value + punish_stream);
            Rational continue_total = scale * continue_from_copy_start;
            if (continue_total < quit_total) {
                report.pass = false;
                std::string where = history_label(spec.protocol, q.history);
                report.violations.push_back(
                    {"copy " + std::to_string(copy) + ", node '" +
                         (where.empty() ? std::string("(root)") : where) + "', type " +
                         g.types_b[q.type_b],
                     continue_total, quit_total});
            }
        }
        scale *= spec.delta;
    }
    return report;
}

Rational committed_super_value(const RepeatedSpec& spec, long budget) {
    Rational u_star = committed_value(spec.base, spec.protocol, budget);
    Rational sum = 0, scale = 1;
    for (int copy = 1; copy <= spec.horizon; ++copy) {
        sum += scale * u_star;
        scale *= spec.delta;
    }
    return sum + scale * u_star / (1 - spec.delta);  // stationary tail
}

}  // namespace convo
