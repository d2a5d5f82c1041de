#include "convo/mediator.hpp"

namespace convo {

void validate(const MediatorProtocol& p) {
    if (p.types_a.empty() || p.types_b.empty()) throw DomainError("protocol type spaces empty");
    if (p.signals.empty()) throw DomainError("signal set empty");
    if ((int)p.kernel.size() != p.num_types_a()) throw DomainError("kernel shape mismatch");
    for (const auto& mid : p.kernel) {
        if ((int)mid.size() != p.num_types_b()) throw DomainError("kernel shape mismatch");
        for (const auto& row : mid) {
            if ((int)row.size() != p.num_signals()) throw DomainError("kernel shape mismatch");
            if (!is_distribution(row)) throw DomainError("kernel row is not a distribution");
        }
    }
}

std::vector<SignalOutcome> induced_observer_distribution(const MediatorProtocol& p,
                                                         const Belief& prior_a,
                                                         const Belief& prior_b) {
    validate(p);
    if (prior_a.size() != p.num_types_a() || prior_b.size() != p.num_types_b())
        throw DomainError("prior dimensions do not match the protocol");
    auto parts = split_posterior(outer_product(prior_a, prior_b), p.kernel, p.num_signals());
    std::vector<SignalOutcome> out;
    for (auto& part : parts) out.push_back({part.signal, part.prob, std::move(part.posterior)});
    return out;
}

JointPosteriorDistribution induced_joint_posterior(const MediatorProtocol& p,
                                                   const Belief& prior_a, const Belief& prior_b) {
    auto outcomes = induced_observer_distribution(p, prior_a, prior_b);
    std::vector<std::pair<Rational, ObserverPosterior>> family;
    for (auto& o : outcomes) family.emplace_back(o.prob, std::move(o.posterior));
    return joint_from_observer(family, prior_a, prior_b);
}

MediatorProtocol construct_from_posterior_family(
    const std::vector<std::pair<Rational, ObserverPosterior>>& targets, const Belief& prior_a,
    const Belief& prior_b) {
    if (mean_posterior(targets) != outer_product(prior_a, prior_b))
        throw DomainError("target family mean does not match the prior product");

    const int na = prior_a.size(), nb = prior_b.size(), ns = (int)targets.size();
    MediatorProtocol p;
    for (int x = 0; x < na; ++x) p.types_a.push_back("A" + std::to_string(x));
    for (int y = 0; y < nb; ++y) p.types_b.push_back("B" + std::to_string(y));
    for (int s = 0; s < ns; ++s) p.signals.push_back("s" + std::to_string(s + 1));
    p.kernel.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(ns)));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            Rational cell = prior_a[x] * prior_b[y];
            for (int s = 0; s < ns; ++s) {
                if (cell.is_zero()) {
                    p.kernel[x][y][s] = Rational(1) / ns;  // never reached; any row works
                } else {
                    p.kernel[x][y][s] = targets[s].second.m[x][y] * targets[s].first / cell;
                }
            }
        }
    validate(p);
    return p;
}

MediatorProtocol conversation_to_mediator(const ConversationProtocol& c, const Belief& prior_a,
                                          const Belief& prior_b, long budget) {
    auto leaves = simulate(c, prior_a, prior_b, budget);
    const int na = c.num_types_a(), nb = c.num_types_b();

    MediatorProtocol p;
    p.types_a = c.types_a;
    p.types_b = c.types_b;
    const int ns = (int)leaves.size();
    p.kernel.assign(na, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(ns)));
    for (int s = 0; s < ns; ++s) {
        const auto& leaf = leaves[s];
        std::string label = history_label(c, leaf.history);
        p.signals.push_back(label.empty() ? "empty" : label);
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                Rational cell = prior_a[x] * prior_b[y];
                p.kernel[x][y][s] =
                    cell.is_zero() ? Rational(1) / ns : leaf.reach.m[x][y] / cell;
            }
    }
    validate(p);
    return p;
}

}  // namespace convo
