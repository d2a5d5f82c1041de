#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "convo/json_io.hpp"
#include "convo/repeated.hpp"
#include "convo/svg.hpp"

namespace {

using namespace convo;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write file: " + path);
    out << text;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        spit(out_path, text);
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(rational_parse(item));
    return out;
}

void print_ir_report(const IRReport& report, bool as_json) {
    if (as_json) {
        std::cout << ir_report_to_json(report);
        return;
    }
    std::cout << "notion:   " << ir_notion_name(report.notion) << "\n";
    std::cout << "verdict:  " << (report.pass ? "pass" : "fail") << "\n";
    std::cout << "baseline: " << rational_str(report.baseline_ex_ante) << " ex-ante, "
              << rational_vec_str(report.baseline_per_type) << " per type\n";
    for (const auto& v : report.violations)
        std::cout << "violated: " << v.context << "  [" << rational_str(v.lhs) << " < "
                  << rational_str(v.rhs) << "]\n";
}

ConversationProtocol require_conversation(const LoadedProtocol& p) {
    if (!p.conversation)
        throw DomainError("this command needs a conversation-protocol document");
    return *p.conversation;
}

void check_labels(const Game& g, const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
    if (g.types_a != a || g.types_b != b)
        throw DomainError("protocol type labels do not match the game");
}

int run(int argc, char** argv) {
    CLI::App app{"exact toolkit for two-agent signaling protocols"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable reports");

    std::string game_path, protocol_path, dist_path, out_path, objective_path, notion_name,
        weights_text, grid_text, witness_path, axes_text;
    std::string objective_name = "welfare", ir_name = "none", punishment_name = "zero";
    std::string delta_text = "0";
    long budget = kDefaultTranscriptBudget;
    long search_budget = 50000;
    int rounds = 2, horizon = 2;

    auto* game_cmd = app.add_subcommand("game", "game document utilities");
    game_cmd->require_subcommand(1);
    auto* validate_cmd = game_cmd->add_subcommand("validate", "check a game document");
    validate_cmd->add_option("--game", game_path, "game JSON")->required();

    auto* simulate_cmd =
        app.add_subcommand("simulate", "enumerate a conversation's transcripts");
    simulate_cmd->add_option("--game", game_path)->required();
    simulate_cmd->add_option("--protocol", protocol_path)->required();
    simulate_cmd->add_option("--budget", budget, "transcript budget");

    auto* induce_cmd =
        app.add_subcommand("induce", "induced joint posterior distribution of a protocol");
    induce_cmd->add_option("--game", game_path)->required();
    induce_cmd->add_option("--protocol", protocol_path)->required();
    induce_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
    induce_cmd->add_option("--budget", budget, "transcript budget");

    auto* feasible_cmd =
        app.add_subcommand("feasible", "decide conversation feasibility of a distribution");
    feasible_cmd->add_option("--game", game_path)->required();
    feasible_cmd->add_option("--distribution", dist_path)->required();
    feasible_cmd->add_option("--rounds", rounds, "conversation length bound");
    feasible_cmd->add_option("--budget", search_budget, "search budget");
    feasible_cmd->add_option("--grid", grid_text,
                             "extra belief coordinates, e.g. \"3/5,1/2\" (binary types)");
    feasible_cmd->add_option("--witness-out", out_path, "write the found witness JSON here");
    feasible_cmd->add_option("--check-witness", witness_path,
                             "verify this witness instead of searching");

    auto* ir_cmd = app.add_subcommand("ir-check", "audit an individual-rationality notion");
    ir_cmd->add_option("--game", game_path)->required();
    ir_cmd->add_option("--protocol", protocol_path)->required();
    ir_cmd->add_option("--notion", notion_name, "exante|interim|expost|noncommitted")
        ->required();
    ir_cmd->add_option("--budget", budget, "transcript budget");

    auto* optimize_cmd = app.add_subcommand("optimize", "synthesize an optimal IR scheme");
    optimize_cmd->add_option("--game", game_path)->required();
    optimize_cmd->add_option("--ir", ir_name, "none|exante|interim");
    optimize_cmd->add_option("--objective", objective_name, "welfare|alice|bob|file");
    optimize_cmd->add_option("--objective-file", objective_path, "objective JSON when 'file'");
    optimize_cmd->add_option("--scheme-out", out_path, "write the scheme JSON here");

    auto* pareto_cmd = app.add_subcommand("pareto", "trace the utility frontier");
    pareto_cmd->add_option("--game", game_path)->required();
    pareto_cmd->add_option("--ir", ir_name, "none|exante|interim");
    pareto_cmd->add_option("--weights", weights_text, "sorted lambdas, e.g. \"0,1/2,1\"")
        ->required();

    auto* repeat_cmd = app.add_subcommand("repeat", "discounted repetition audit");
    repeat_cmd->add_option("--game", game_path)->required();
    repeat_cmd->add_option("--protocol", protocol_path)->required();
    repeat_cmd->add_option("--delta", delta_text, "discount factor")->required();
    repeat_cmd->add_option("--horizon", horizon, "audited copies");
    repeat_cmd->add_option("--punishment", punishment_name, "zero|nocomm");
    repeat_cmd->add_option("--budget", budget, "transcript budget");

    auto* export_cmd = app.add_subcommand("export", "figure and table exports");
    export_cmd->require_subcommand(1);
    auto* svg_cmd = export_cmd->add_subcommand("svg", "belief-walk SVG of a conversation");
    svg_cmd->add_option("--game", game_path)->required();
    svg_cmd->add_option("--protocol", protocol_path)->required();
    svg_cmd->add_option("--axes", axes_text, "plotted type labels \"BobType,AliceType\"");
    svg_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
    auto* csv_cmd = export_cmd->add_subcommand("csv", "frontier CSV");
    csv_cmd->add_option("--game", game_path)->required();
    csv_cmd->add_option("--ir", ir_name, "none|exante|interim");
    csv_cmd->add_option("--weights", weights_text)->required();
    csv_cmd->add_option("-o,--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    auto parse_ir = [&]() {
        if (ir_name == "none") return IRConstraint::None;
        if (ir_name == "exante") return IRConstraint::ExAnte;
        if (ir_name == "interim") return IRConstraint::Interim;
        throw DomainError("unknown --ir value: " + ir_name);
    };

    if (validate_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        std::cout << "ok: " << g.types_a.size() << "x" << g.types_b.size() << " types, "
                  << g.actions.size() << " actions\n";
        return kExitOk;
    }

    if (simulate_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        ConversationProtocol c = require_conversation(protocol_from_json(slurp(protocol_path)));
        check_labels(g, c.types_a, c.types_b);
        for (const auto& leaf : simulate(c, g.prior_a, g.prior_b, budget)) {
            auto [qa, qb] = posteriors_at(c, leaf.history, g.prior_a, g.prior_b);
            std::string label = history_label(c, leaf.history);
            std::cout << (label.empty() ? "(empty)" : label) << "  prob "
                      << rational_str(leaf.prob) << "  q_A " << rational_vec_str(qa.w)
                      << "  q_B " << rational_vec_str(qb.w) << "\n";
        }
        return kExitOk;
    }

    if (induce_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        LoadedProtocol p = protocol_from_json(slurp(protocol_path));
        DistributionDocument doc;
        doc.types_a = g.types_a;
        doc.types_b = g.types_b;
        if (p.mediator) {
            check_labels(g, p.mediator->types_a, p.mediator->types_b);
            doc.dist = induced_joint_posterior(*p.mediator, g.prior_a, g.prior_b);
        } else {
            check_labels(g, p.conversation->types_a, p.conversation->types_b);
            doc.dist = induced_joint_posterior(*p.conversation, g.prior_a, g.prior_b, budget);
        }
        emit(distribution_to_json(doc), out_path);
        return kExitOk;
    }

    if (feasible_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        DistributionDocument doc = distribution_from_json(slurp(dist_path));
        if (doc.types_a != g.types_a || doc.types_b != g.types_b)
            throw DomainError("distribution type labels do not match the game");

        if (!witness_path.empty()) {
            SplitWitness w = witness_from_json(slurp(witness_path));
            bool ok = verify_witness(doc.dist, w, rounds, g.prior_a, g.prior_b);
            std::cout << (ok ? "witness accepted" : "witness rejected") << "\n";
            return ok ? kExitOk : kExitViolated;
        }

        WitnessSearchOptions opts;
        opts.budget = search_budget;
        if (!grid_text.empty()) {
            if (g.num_types_a() != 2 || g.num_types_b() != 2)
                throw DomainError("--grid coordinates need binary type spaces");
            for (const auto& c : parse_rational_list(grid_text)) {
                if (c < 0 || c > 1) throw DomainError("grid coordinates must lie in [0,1]");
                opts.grid_q_b.push_back(make_belief({c, 1 - c}));
                opts.grid_q_a.push_back(make_belief({c, 1 - c}));
            }
        }
        FeasibilityVerdict verdict =
            search_witness(doc.dist, rounds, g.prior_a, g.prior_b, opts);
        if (as_json)
            std::cout << feasibility_verdict_to_json(verdict);
        else
            std::cout << (verdict.status == FeasStatus::Feasible     ? "feasible"
                          : verdict.status == FeasStatus::Infeasible ? "infeasible"
                                                                     : "unknown")
                      << (verdict.detail.empty() ? "" : ": " + verdict.detail) << "\n";
        if (verdict.status == FeasStatus::Feasible && !out_path.empty())
            spit(out_path, witness_to_json(*verdict.witness));
        if (verdict.status == FeasStatus::Feasible) return kExitOk;
        return verdict.status == FeasStatus::Infeasible ? kExitViolated : kExitBudget;
    }

    if (ir_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        LoadedProtocol p = protocol_from_json(slurp(protocol_path));
        IRReport report;
        if (p.mediator) {
            check_labels(g, p.mediator->types_a, p.mediator->types_b);
            const auto& med = *p.mediator;
            if (notion_name == "exante")
                report = exante_ir(g, med);
            else if (notion_name == "interim")
                report = interim_ir(g, med);
            else if (notion_name == "expost")
                report = expost_ir(g, med);
            else if (notion_name == "noncommitted")
                report = noncommitted_interim_ir(g, med);
            else
                throw DomainError("unknown --notion value: " + notion_name);
        } else {
            check_labels(g, p.conversation->types_a, p.conversation->types_b);
            const auto& conv = *p.conversation;
            if (notion_name == "exante")
                report = exante_ir(g, conv, budget);
            else if (notion_name == "interim")
                report = interim_ir(g, conv, budget);
            else if (notion_name == "expost")
                report = expost_ir(g, conv, budget);
            else if (notion_name == "noncommitted")
                report = noncommitted_interim_ir(g, conv, budget);
            else
                throw DomainError("unknown --notion value: " + notion_name);
        }
        print_ir_report(report, as_json);
        return report.pass ? kExitOk : kExitViolated;
    }

    if (optimize_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        DesignProblem problem;
        problem.game = g;
        problem.ir = parse_ir();
        if (objective_name == "welfare")
            problem.objective = welfare_objective(g);
        else if (objective_name == "alice")
            problem.objective = alice_objective(g);
        else if (objective_name == "bob")
            problem.objective = bob_objective(g);
        else if (objective_name == "file")
            problem.objective = objective_from_json(slurp(objective_path), g);
        else
            throw DomainError("unknown --objective value: " + objective_name);
        DesignResult result = optimize(problem);
        std::cout << rational_str(result.value) << "\n";
        if (!out_path.empty()) spit(out_path, scheme_to_json(result.scheme, g));
        return kExitOk;
    }

    if (pareto_cmd->parsed() || csv_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        auto points = pareto_frontier(g, parse_ir(), parse_rational_list(weights_text));
        if (csv_cmd->parsed())
            emit(pareto_to_csv(points), out_path);
        else if (as_json)
            std::cout << pareto_to_json(points);
        else
            for (const auto& p : points)
                std::cout << "lambda " << rational_str(p.lambda) << "  E[u_A] "
                          << rational_str(p.e_ua) << "  E[u_B] " << rational_str(p.e_ub)
                          << "\n";
        return kExitOk;
    }

    if (repeat_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        RepeatedSpec spec;
        spec.base = g;
        spec.protocol = require_conversation(protocol_from_json(slurp(protocol_path)));
        check_labels(g, spec.protocol.types_a, spec.protocol.types_b);
        spec.delta = rational_parse(delta_text);
        spec.horizon = horizon;
        if (punishment_name == "zero")
            spec.punishment = Punishment::ZeroFuture;
        else if (punishment_name == "nocomm")
            spec.punishment = Punishment::NoCommFuture;
        else
            throw DomainError("unknown --punishment value: " + punishment_name);

        Rational u_star = committed_value(g, spec.protocol, budget);
        IRReport report = audit_repeated_ir(spec, budget);
        if (!as_json) {
            std::cout << "committed value u*_B: " << rational_str(u_star) << "\n";
            std::cout << "quit ceiling:         "
                      << rational_str(quit_ceiling(g, spec.protocol, budget)) << "\n";
            if (u_star > 0)
                std::cout << "delta threshold:      "
                          << rational_str(delta_threshold(g, spec.protocol, budget)) << "\n";
            std::cout << "committed super value: "
                      << rational_str(committed_super_value(spec, budget)) << "\n";
        }
        print_ir_report(report, as_json);
        return report.pass ? kExitOk : kExitViolated;
    }

    if (svg_cmd->parsed()) {
        Game g = game_from_json(slurp(game_path));
        ConversationProtocol c = require_conversation(protocol_from_json(slurp(protocol_path)));
        check_labels(g, c.types_a, c.types_b);
        int axis_b = 0, axis_a = 0;
        if (!axes_text.empty()) {
            auto comma = axes_text.find(',');
            if (comma == std::string::npos)
                throw DomainError("--axes wants \"BobTypeLabel,AliceTypeLabel\"");
            axis_b = g.type_b_index(axes_text.substr(0, comma));
            axis_a = g.type_a_index(axes_text.substr(comma + 1));
        }
        auto [trace, report] = dimartingale_audit(c, g.prior_a, g.prior_b, budget);
        if (!report.pass) throw DomainError("protocol failed the dimartingale audit");
        emit(export_belief_walk_svg(trace, axis_b, axis_a, g.types_b[axis_b],
                                    g.types_a[axis_a]),
             out_path);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const convo::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const convo::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolated;
    }
}
