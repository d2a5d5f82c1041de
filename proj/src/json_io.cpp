#include "convo/json_io.hpp"

#include <json.hpp>

namespace convo {

using nlohmann::json;

namespace {

struct SchemaError : DomainError {
    using DomainError::DomainError;
};

void require_schema(const json& doc, const std::string& name) {
    if (!doc.is_object()) throw SchemaError("document is not a JSON object");
    if (doc.value("schema", "") != name)
        throw SchemaError("expected schema '" + name + "', found '" +
                          doc.value("schema", std::string("<missing>")) + "'");
    if (doc.value("version", 0) != 1) throw SchemaError("unsupported document version");
}

Rational rat_of(const json& v) {
    if (!v.is_string()) throw SchemaError("numbers must be rational strings");
    return rational_parse(v.get<std::string>());
}

json rat_json(const Rational& r) { return rational_str(r); }

std::vector<Rational> rat_vec_of(const json& v) {
    if (!v.is_array()) throw SchemaError("expected an array of rationals");
    std::vector<Rational> out;
    for (const auto& e : v) out.push_back(rat_of(e));
    return out;
}

json rat_vec_json(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(rat_json(r));
    return out;
}

std::vector<std::string> labels_of(const json& v) {
    if (!v.is_array() || v.empty()) throw SchemaError("expected a nonempty label array");
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.get<std::string>());
    return out;
}

json matrix_json(const std::vector<std::vector<Rational>>& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(rat_vec_json(row));
    return out;
}

std::vector<std::vector<Rational>> matrix_of(const json& v) {
    std::vector<std::vector<Rational>> out;
    for (const auto& row : v) out.push_back(rat_vec_of(row));
    return out;
}

int index_of(const std::vector<std::string>& labels, const std::string& label,
             const char* what) {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return (int)i;
    throw SchemaError(std::string("unknown ") + what + " label: " + label);
}

}  // namespace

Game game_from_json(const std::string& text) {
    json doc = json::parse(text);
    require_schema(doc, "game");
    Game g;
    g.types_a = labels_of(doc.at("typesA"));
    g.types_b = labels_of(doc.at("typesB"));
    g.actions = labels_of(doc.at("actions"));
    g.prior_a = make_belief(rat_vec_of(doc.at("priorA")));
    g.prior_b = make_belief(rat_vec_of(doc.at("priorB")));
    for (const auto& mid : doc.at("utilA")) g.util_a.push_back(matrix_of(mid));
    for (const auto& mid : doc.at("utilB")) g.util_b.push_back(matrix_of(mid));
    for (const auto& label : doc.at("tieBreak"))
        g.tie_break.push_back(index_of(g.actions, label.get<std::string>(), "action"));
    validate(g);
    return g;
}

std::string game_to_json(const Game& g) {
    json doc;
    doc["schema"] = "game";
    doc["version"] = 1;
    doc["typesA"] = g.types_a;
    doc["typesB"] = g.types_b;
    doc["actions"] = g.actions;
    doc["priorA"] = rat_vec_json(g.prior_a.w);
    doc["priorB"] = rat_vec_json(g.prior_b.w);
    json ua = json::array(), ub = json::array();
    for (const auto& mid : g.util_a) ua.push_back(matrix_json(mid));
    for (const auto& mid : g.util_b) ub.push_back(matrix_json(mid));
    doc["utilA"] = std::move(ua);
    doc["utilB"] = std::move(ub);
    json tb = json::array();
    for (int r : g.tie_break) tb.push_back(g.actions[r]);
    doc["tieBreak"] = std::move(tb);
    return doc.dump(2) + "\n";
}

namespace {

MediatorProtocol mediator_of(const json& doc) {
    MediatorProtocol p;
    p.types_a = labels_of(doc.at("typesA"));
    p.types_b = labels_of(doc.at("typesB"));
    p.signals = labels_of(doc.at("signals"));
    for (const auto& mid : doc.at("kernel")) p.kernel.push_back(matrix_of(mid));
    validate(p);
    return p;
}

ConversationProtocol conversation_of(const json& doc) {
    ConversationProtocol c;
    c.types_a = labels_of(doc.at("typesA"));
    c.types_b = labels_of(doc.at("typesB"));
    for (const auto& round : doc.at("rounds")) {
        RoundSignals rs;
        rs.alice = labels_of(round.at("alice"));
        rs.bob = labels_of(round.at("bob"));
        c.rounds.push_back(std::move(rs));
    }
    auto history_of = [&](const json& arr) {
        History h;
        for (const auto& e : arr) {
            size_t i = h.size();
            bool alice = i % 2 == 0;
            int round = (int)(i / 2);
            if (round >= c.num_rounds()) throw SchemaError("kernel history too long");
            const auto& names = alice ? c.rounds[round].alice : c.rounds[round].bob;
            h.push_back(index_of(names, e.get<std::string>(), "signal"));
        }
        return h;
    };
    for (const auto& entry : doc.at("aliceKernel"))
        c.alice_kernel[history_of(entry.at("history"))] = matrix_of(entry.at("rows"));
    for (const auto& entry : doc.at("bobKernel"))
        c.bob_kernel[history_of(entry.at("history"))] = matrix_of(entry.at("rows"));
    validate(c);
    return c;
}

}  // namespace

LoadedProtocol protocol_from_json(const std::string& text) {
    json doc = json::parse(text);
    LoadedProtocol out;
    std::string schema = doc.value("schema", "");
    if (schema == "mediator-protocol") {
        require_schema(doc, "mediator-protocol");
        out.mediator = mediator_of(doc);
    } else if (schema == "conversation-protocol") {
        require_schema(doc, "conversation-protocol");
        out.conversation = conversation_of(doc);
    } else {
        throw SchemaError("expected a mediator-protocol or conversation-protocol document");
    }
    return out;
}

std::string mediator_to_json(const MediatorProtocol& p) {
    json doc;
    doc["schema"] = "mediator-protocol";
    doc["version"] = 1;
    doc["typesA"] = p.types_a;
    doc["typesB"] = p.types_b;
    doc["signals"] = p.signals;
    json kernel = json::array();
    for (const auto& mid : p.kernel) kernel.push_back(matrix_json(mid));
    doc["kernel"] = std::move(kernel);
    return doc.dump(2) + "\n";
}

std::string conversation_to_json(const ConversationProtocol& c) {
    json doc;
    doc["schema"] = "conversation-protocol";
    doc["version"] = 1;
    doc["typesA"] = c.types_a;
    doc["typesB"] = c.types_b;
    json rounds = json::array();
    for (const auto& r : c.rounds) rounds.push_back({{"alice", r.alice}, {"bob", r.bob}});
    doc["rounds"] = std::move(rounds);
    auto labels = [&](const History& h) {
        json arr = json::array();
        for (size_t i = 0; i < h.size(); ++i) {
            bool alice = i % 2 == 0;
            int round = (int)(i / 2);
            arr.push_back(alice ? c.rounds[round].alice[h[i]] : c.rounds[round].bob[h[i]]);
        }
        return arr;
    };
    json ak = json::array(), bk = json::array();
    for (const auto& [h, rows] : c.alice_kernel)
        ak.push_back({{"history", labels(h)}, {"rows", matrix_json(rows)}});
    for (const auto& [h, rows] : c.bob_kernel)
        bk.push_back({{"history", labels(h)}, {"rows", matrix_json(rows)}});
    doc["aliceKernel"] = std::move(ak);
    doc["bobKernel"] = std::move(bk);
    return doc.dump(2) + "\n";
}

DistributionDocument distribution_from_json(const std::string& text) {
    json doc = json::parse(text);
    require_schema(doc, "joint-posterior-distribution");
    DistributionDocument out;
    out.types_a = labels_of(doc.at("typesA"));
    out.types_b = labels_of(doc.at("typesB"));
    out.dist.num_types_a = (int)out.types_a.size();
    out.dist.num_types_b = (int)out.types_b.size();
    for (const auto& a : doc.at("atoms")) {
        JointAtom atom;
        atom.type_a = index_of(out.types_a, a.at("typeA").get<std::string>(), "typeA");
        atom.type_b = index_of(out.types_b, a.at("typeB").get<std::string>(), "typeB");
        atom.q_b = make_belief(rat_vec_of(a.at("qB")));
        atom.q_a = make_belief(rat_vec_of(a.at("qA")));
        atom.prob = rat_of(a.at("prob"));
        out.dist.atoms.push_back(std::move(atom));
    }
    canonicalize(out.dist);
    validate(out.dist);
    return out;
}

std::string distribution_to_json(const DistributionDocument& doc) {
    json out;
    out["schema"] = "joint-posterior-distribution";
    out["version"] = 1;
    out["typesA"] = doc.types_a;
    out["typesB"] = doc.types_b;
    json atoms = json::array();
    JointPosteriorDistribution canon = doc.dist;
    canonicalize(canon);
    for (const auto& a : canon.atoms)
        atoms.push_back({{"typeA", doc.types_a[a.type_a]},
                         {"typeB", doc.types_b[a.type_b]},
                         {"qB", rat_vec_json(a.q_b.w)},
                         {"qA", rat_vec_json(a.q_a.w)},
                         {"prob", rat_json(a.prob)}});
    out["atoms"] = std::move(atoms);
    return out.dump(2) + "\n";
}

namespace {

json witness_node_json(const SplitNode& node) {
    json out;
    out["qB"] = rat_vec_json(node.point.q_b.w);
    out["qA"] = rat_vec_json(node.point.q_a.w);
    out["z"] = rat_vec_json(node.point.z);
    out["kind"] = node.kind == SplitKind::Leaf ? "leaf"
                  : node.kind == SplitKind::ASplit ? "A"
                                                   : "B";
    if (node.kind != SplitKind::Leaf) {
        json children = json::array();
        for (size_t k = 0; k < node.children.size(); ++k)
            children.push_back({{"weight", rat_json(node.weights[k])},
                                {"node", witness_node_json(node.children[k])}});
        out["children"] = std::move(children);
    }
    return out;
}

SplitNode witness_node_of(const json& v) {
    SplitNode node;
    node.point.q_b = make_belief(rat_vec_of(v.at("qB")));
    node.point.q_a = make_belief(rat_vec_of(v.at("qA")));
    node.point.z = rat_vec_of(v.at("z"));
    std::string kind = v.at("kind").get<std::string>();
    if (kind == "leaf") {
        node.kind = SplitKind::Leaf;
    } else if (kind == "A" || kind == "B") {
        node.kind = kind == "A" ? SplitKind::ASplit : SplitKind::BSplit;
        for (const auto& child : v.at("children")) {
            node.weights.push_back(rat_of(child.at("weight")));
            node.children.push_back(witness_node_of(child.at("node")));
        }
    } else {
        throw SchemaError("witness node kind must be leaf, A, or B");
    }
    return node;
}

}  // namespace

SplitWitness witness_from_json(const std::string& text) {
    json doc = json::parse(text);
    require_schema(doc, "split-witness");
    SplitWitness w;
    for (const auto& pt : doc.at("support"))
        w.support.emplace_back(make_belief(rat_vec_of(pt.at("qB"))),
                               make_belief(rat_vec_of(pt.at("qA"))));
    w.root = witness_node_of(doc.at("root"));
    return w;
}

std::string witness_to_json(const SplitWitness& w) {
    json doc;
    doc["schema"] = "split-witness";
    doc["version"] = 1;
    json support = json::array();
    for (const auto& [qb, qa] : w.support)
        support.push_back({{"qB", rat_vec_json(qb.w)}, {"qA", rat_vec_json(qa.w)}});
    doc["support"] = std::move(support);
    doc["root"] = witness_node_json(w.root);
    return doc.dump(2) + "\n";
}

ObjectiveTensor objective_from_json(const std::string& text, const Game& g) {
    json doc = json::parse(text);
    require_schema(doc, "objective");
    ObjectiveTensor u;
    for (const auto& mid : doc.at("values")) u.push_back(matrix_of(mid));
    if ((int)u.size() != g.num_types_a()) throw SchemaError("objective shape mismatch");
    for (const auto& mid : u) {
        if ((int)mid.size() != g.num_types_b()) throw SchemaError("objective shape mismatch");
        for (const auto& row : mid)
            if ((int)row.size() != g.num_actions()) throw SchemaError("objective shape mismatch");
    }
    return u;
}

std::string ir_report_to_json(const IRReport& report) {
    json doc;
    doc["schema"] = "ir-report";
    doc["version"] = 1;
    doc["notion"] = ir_notion_name(report.notion);
    doc["pass"] = report.pass;
    doc["baselineExAnte"] = rat_json(report.baseline_ex_ante);
    doc["baselinePerType"] = rat_vec_json(report.baseline_per_type);
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"context", v.context},
                              {"lhs", rat_json(v.lhs)},
                              {"rhs", rat_json(v.rhs)}});
    doc["violations"] = std::move(violations);
    return doc.dump(2) + "\n";
}

std::string feasibility_verdict_to_json(const FeasibilityVerdict& verdict) {
    json doc;
    doc["schema"] = "feasibility-verdict";
    doc["version"] = 1;
    doc["status"] = verdict.status == FeasStatus::Feasible     ? "feasible"
                    : verdict.status == FeasStatus::Infeasible ? "infeasible"
                                                               : "unknown";
    doc["detail"] = verdict.detail;
    if (verdict.mean_certificate) doc["mean"] = matrix_json(verdict.mean_certificate->m);
    if (verdict.observer_family) {
        json family = json::array();
        for (const auto& [p, q] : *verdict.observer_family)
            family.push_back({{"prob", rat_json(p)}, {"posterior", matrix_json(q.m)}});
        doc["observerFamily"] = std::move(family);
    }
    return doc.dump(2) + "\n";
}

std::string scheme_to_json(const RecommendationScheme& s, const Game& g) {
    json doc;
    doc["schema"] = "recommendation-scheme";
    doc["version"] = 1;
    doc["typesA"] = g.types_a;
    doc["typesB"] = g.types_b;
    doc["actions"] = g.actions;
    json x = json::array();
    for (const auto& mid : s.x) x.push_back(matrix_json(mid));
    doc["x"] = std::move(x);
    return doc.dump(2) + "\n";
}

std::string pareto_to_json(const std::vector<ParetoPoint>& points) {
    json doc;
    doc["schema"] = "pareto-frontier";
    doc["version"] = 1;
    json arr = json::array();
    for (const auto& p : points)
        arr.push_back({{"lambda", rat_json(p.lambda)},
                       {"expectedUtilityA", rat_json(p.e_ua)},
                       {"expectedUtilityB", rat_json(p.e_ub)}});
    doc["points"] = std::move(arr);
    return doc.dump(2) + "\n";
}

std::string pareto_to_csv(const std::vector<ParetoPoint>& points) {
    std::string out = "lambda,expected_utility_a,expected_utility_b\n";
    for (const auto& p : points)
        out += rational_str(p.lambda) + "," + rational_str(p.e_ua) + "," +
               rational_str(p.e_ub) + "\n";
    return out;
}

}  // namespace convo
