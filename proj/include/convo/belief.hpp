#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "convo/rational.hpp"

namespace convo {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distribution over one type space; weights >= 0, exact sum 1.
struct Belief {
    std::vector<Rational> w;

    int size() const { return (int)w.size(); }
    const Rational& operator[](int i) const { return w[i]; }
    bool operator==(const Belief& o) const { return w == o.w; }
    bool operator<(const Belief& o) const { return w < o.w; }
};

Belief make_belief(std::vector<Rational> weights);
Belief point_belief(int size, int index);
bool is_distribution(const std::vector<Rational>& w);

// Joint belief over both type spaces held by an outside observer.
struct ObserverPosterior {
    std::vector<std::vector<Rational>> m;  // [type_a][type_b]

    int size_a() const { return (int)m.size(); }
    int size_b() const { return m.empty() ? 0 : (int)m[0].size(); }
    Rational total() const;
    bool operator==(const ObserverPosterior& o) const { return m == o.m; }
    bool operator<(const ObserverPosterior& o) const { return m < o.m; }
};

ObserverPosterior zero_posterior(int na, int nb);
ObserverPosterior outer_product(const Belief& a, const Belief& b);

// One support point of a joint posterior distribution: realized types plus
// Alice's belief q_B about Bob and Bob's belief q_A about Alice.
struct JointAtom {
    int type_a = 0, type_b = 0;
    Belief q_b, q_a;
    Rational prob;
};

struct JointPosteriorDistribution {
    int num_types_a = 0, num_types_b = 0;
    std::vector<JointAtom> atoms;  // canonical: merged, zero-free, sorted
};

void canonicalize(JointPosteriorDistribution& j);
void validate(const JointPosteriorDistribution& j);

// Marginal P(q_B, q_A), support sorted canonically.
struct BeliefPairMass {
    Belief q_b, q_a;
    Rational prob;
};
std::vector<BeliefPairMass> pair_marginal(const JointPosteriorDistribution& j);

struct SplitPart {
    int signal = 0;
    Rational prob;
    ObserverPosterior posterior;
};

// Bayes-splits q along a signal kernel; zero-probability signals are dropped.
// kernel[ia][ib] is a distribution over `signal_count` signals.
std::vector<SplitPart> split_posterior(const ObserverPosterior& q,
                                       const std::vector<std::vector<std::vector<Rational>>>& kernel,
                                       int signal_count);

ObserverPosterior mean_posterior(const std::vector<std::pair<Rational, ObserverPosterior>>& parts);

enum class Side { A, B };

// Conditions the joint posterior on one realized type; Side::B fixes Bob's
// type and returns the belief about Alice, Side::A the other way around.
Belief condition_on_type(const ObserverPosterior& q, Side side, int type_index);

JointPosteriorDistribution joint_from_observer(
    const std::vector<std::pair<Rational, ObserverPosterior>>& dist,
    const Belief& prior_a, const Belief& prior_b);

// (marginal over A, marginal over B) when q factorizes exactly; empty otherwise.
std::optional<std::pair<Belief, Belief>> product_factorize(const ObserverPosterior& q);

}  // namespace convo
