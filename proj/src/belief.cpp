#include "convo/belief.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace convo {

bool is_distribution(const std::vector<Rational>& w) {
    Rational sum = 0;
    for (const auto& v : w) {
        if (v < 0) return false;
        sum += v;
    }
    return sum == 1;
}

Belief make_belief(std::vector<Rational> weights) {
    if (!is_distribution(weights)) throw DomainError("belief weights must be >= 0 and sum to 1");
    return Belief{std::move(weights)};
}

Belief point_belief(int size, int index) {
    std::vector<Rational> w(size, Rational(0));
    w[index] = 1;
    return Belief{std::move(w)};
}

Rational ObserverPosterior::total() const {
    Rational t = 0;
    for (const auto& row : m)
        for (const auto& v : row) t += v;
    return t;
}

ObserverPosterior zero_posterior(int na, int nb) {
    return ObserverPosterior{std::vector<std::vector<Rational>>(na, std::vector<Rational>(nb, Rational(0)))};
}

ObserverPosterior outer_product(const Belief& a, const Belief& b) {
    ObserverPosterior q = zero_posterior(a.size(), b.size());
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y) q.m[x][y] = a[x] * b[y];
    return q;
}

void canonicalize(JointPosteriorDistribution& j) {
    std::map<std::tuple<int, int, std::vector<Rational>, std::vector<Rational>>, Rational> merged;
    for (const auto& atom : j.atoms) {
        if (atom.prob.is_zero()) continue;
        merged[{atom.type_a, atom.type_b, atom.q_b.w, atom.q_a.w}] += atom.prob;
    }
    j.atoms.clear();
    for (const auto& [key, prob] : merged) {
        const auto& [ta, tb, qb, qa] = key;
        j.atoms.push_back({ta, tb, Belief{qb}, Belief{qa}, prob});
    }
}

void validate(const JointPosteriorDistribution& j) {
    Rational sum = 0;
    for (const auto& atom : j.atoms) {
        if (atom.prob < 0) throw DomainError("atom probability negative");
        if (atom.type_a < 0 || atom.type_a >= j.num_types_a || atom.type_b < 0 ||
            atom.type_b >= j.num_types_b)
            throw DomainError("atom type index out of range");
        if (atom.q_b.size() != j.num_types_b || atom.q_a.size() != j.num_types_a)
            throw DomainError("atom belief dimension mismatch");
        if (!is_distribution(atom.q_b.w) || !is_distribution(atom.q_a.w))
            throw DomainError("atom belief is not a distribution");
        sum += atom.prob;
    }
    if (sum != 1) throw DomainError("atom probabilities must sum to 1");
}

std::vector<BeliefPairMass> pair_marginal(const JointPosteriorDistribution& j) {
    std::map<std::pair<std::vector<Rational>, std::vector<Rational>>, Rational> acc;
    for (const auto& atom : j.atoms) acc[{atom.q_b.w, atom.q_a.w}] += atom.prob;
    std::vector<BeliefPairMass> out;
    for (const auto& [key, prob] : acc)
        if (!prob.is_zero()) out.push_back({Belief{key.first}, Belief{key.second}, prob});
    return out;
}

std::vector<SplitPart> split_posterior(const ObserverPosterior& q,
                                       const std::vector<std::vector<std::vector<Rational>>>& kernel,
                                       int signal_count) {
    const int na = q.size_a(), nb = q.size_b();
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            if (!is_distribution(kernel[x][y]))
                throw DomainError("kernel row is not a distribution");

    std::vector<SplitPart> parts;
    for (int s = 0; s < signal_count; ++s) {
        ObserverPosterior post = zero_posterior(na, nb);
        Rational ps = 0;
        for (int x = 0; x < na; ++x)
            for (int y = 0; y < nb; ++y) {
                post.m[x][y] = q.m[x][y] * kernel[x][y][s];
                ps += post.m[x][y];
            }
        if (ps.is_zero()) continue;
        for (auto& row : post.m)
            for (auto& v : row) v /= ps;
        parts.push_back({s, ps, std::move(post)});
    }
    return parts;
}

ObserverPosterior mean_posterior(const std::vector<std::pair<Rational, ObserverPosterior>>& parts) {
    if (parts.empty()) throw DomainError("mean of empty posterior family");
    Rational total = 0;
    ObserverPosterior mean = zero_posterior(parts[0].second.size_a(), parts[0].second.size_b());
    for (const auto& [prob, post] : parts) {
        total += prob;
        for (int x = 0; x < mean.size_a(); ++x)
            for (int y = 0; y < mean.size_b(); ++y) mean.m[x][y] += prob * post.m[x][y];
    }
    if (total != 1) throw DomainError("family probabilities must sum to 1");
    return mean;
}

Belief condition_on_type(const ObserverPosterior& q, Side side, int type_index) {
    if (side == Side::B) {
        Rational mass = 0;
        for (int x = 0; x < q.size_a(); ++x) mass += q.m[x][type_index];
        if (mass.is_zero()) throw DomainError("conditioning on a zero-mass type");
        std::vector<Rational> w(q.size_a());
        for (int x = 0; x < q.size_a(); ++x) w[x] = q.m[x][type_index] / mass;
        return Belief{std::move(w)};
    }
    Rational mass = 0;
    for (int y = 0; y < q.size_b(); ++y) mass += q.m[type_index][y];
    if (mass.is_zero()) throw DomainError("conditioning on a zero-mass type");
    std::vector<Rational> w(q.size_b());
    for (int y = 0; y < q.size_b(); ++y) w[y] = q.m[type_index][y] / mass;
    return Belief{std::move(w)};
}

JointPosteriorDistribution joint_from_observer(
    const std::vector<std::pair<Rational, ObserverPosterior>>& dist,
    const Belief& prior_a, const Belief& prior_b) {
    if (mean_posterior(dist) != outer_product(prior_a, prior_b))
        throw DomainError("observer family mean does not match the prior product");

    JointPosteriorDistribution j;
    j.num_types_a = prior_a.size();
    j.num_types_b = prior_b.size();
    for (const auto& [prob, post] : dist) {
        for (int x = 0; x < post.size_a(); ++x)
            for (int y = 0; y < post.size_b(); ++y) {
                if (post.m[x][y].is_zero()) continue;
                JointAtom atom;
                atom.type_a = x;
                atom.type_b = y;
                atom.q_b = condition_on_type(post, Side::A, x);
                atom.q_a = condition_on_type(post, Side::B, y);
                atom.prob = prob * post.m[x][y];
                j.atoms.push_back(std::move(atom));
            }
    }
    canonicalize(j);
    return j;
}

std::optional<std::pair<Belief, Belief>> product_factorize(const ObserverPosterior& q) {
    const int na = q.size_a(), nb = q.size_b();
    std::vector<Rational> ma(na, Rational(0)), mb(nb, Rational(0));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            ma[x] += q.m[x][y];
            mb[y] += q.m[x][y];
        }
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y)
            if (q.m[x][y] != ma[x] * mb[y]) return std::nullopt;
    return std::make_pair(Belief{std::move(ma)}, Belief{std::move(mb)});
}

}  // namespace convo
