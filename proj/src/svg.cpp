#include "convo/svg.hpp"

#include <map>

namespace convo {

namespace {

const int kMargin = 60;
const int kPlot = 420;

// Fixed-point with two decimals keeps the output byte-stable.
std::string px(const Rational& unit) {
    Rational scaled = Rational(kMargin) * 100 + unit * (kPlot * 100);  // nonnegative here
    Int n = numerator(scaled), d = denominator(scaled);
    Int rounded = (2 * n + d) / (2 * d);
    Int whole = rounded / 100, frac = rounded % 100;
    std::string f = frac.str();
    if (f.size() < 2) f = "0" + f;
    return whole.str() + "." + f;
}

std::string px_x(const Rational& q) { return px(q); }
std::string px_y(const Rational& q) { return px(1 - q); }  // SVG y grows downward

}  // namespace

std::string export_belief_walk_svg(const DimartingaleTrace& trace, int axis_b, int axis_a,
                                   const std::string& axis_b_label,
                                   const std::string& axis_a_label) {
    if (trace.nodes.empty()) throw DomainError("empty trace");
    if (trace.nodes[0].q_a.size() != 2 || trace.nodes[0].q_b.size() != 2)
        throw DomainError("belief walk plots need binary type spaces on both sides");

    using Pos = std::pair<Rational, Rational>;  // (q_B(axis), q_A(axis))
    auto pos_of = [&](const TraceNode& n) -> Pos { return {n.q_b[axis_b], n.q_a[axis_a]}; };

    std::vector<Pos> points;
    auto point_id = [&](const Pos& p) {
        for (size_t i = 0; i < points.size(); ++i)
            if (points[i] == p) return (int)i;
        points.push_back(p);
        return (int)points.size() - 1;
    };

    struct EdgeAcc {
        Rational mass;      // sum of parent reach probabilities
        Rational weighted;  // sum of parent prob * edge prob
    };
    std::map<std::pair<int, int>, EdgeAcc> edges;
    for (const auto& node : trace.nodes) {
        int to = point_id(pos_of(node));
        if (node.parent < 0) continue;
        const auto& parent = trace.nodes[node.parent];
        int from = point_id(pos_of(parent));
        if (from == to) continue;  // silent move in plot coordinates
        auto& acc = edges[{from, to}];
        acc.mass += parent.prob;
        acc.weighted += parent.prob * node.edge_prob;
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 540 540\" "
           "font-family=\"monospace\" font-size=\"12\">\n";
    svg += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
           "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">"
           "<path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n";
    // axes
    svg += "<line x1=\"" + px_x(Rational(0)) + "\" y1=\"" + px_y(Rational(0)) + "\" x2=\"" +
           px_x(Rational(1)) + "\" y2=\"" + px_y(Rational(0)) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + px_x(Rational(0)) + "\" y1=\"" + px_y(Rational(0)) + "\" x2=\"" +
           px_x(Rational(0)) + "\" y2=\"" + px_y(Rational(1)) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        Rational v(t, 4);
        svg += "<text x=\"" + px_x(v) + "\" y=\"" + px_y(Rational(0)) +
               "\" dy=\"16\" text-anchor=\"middle\">" + rational_str(v) + "</text>\n";
        svg += "<text x=\"" + px_x(Rational(0)) + "\" y=\"" + px_y(v) +
               "\" dx=\"-8\" dy=\"4\" text-anchor=\"end\">" + rational_str(v) + "</text>\n";
    }
    svg += "<text x=\"" + px_x(Rational(1, 2)) + "\" y=\"" + px_y(Rational(0)) +
           "\" dy=\"38\" text-anchor=\"middle\">q_B(" + axis_b_label + ")</text>\n";
    svg += "<text x=\"" + px_x(Rational(0)) + "\" y=\"" + px_y(Rational(1)) +
           "\" dy=\"-14\" text-anchor=\"middle\">q_A(" + axis_a_label + ")</text>\n";

    for (const auto& [key, acc] : edges) {
        const Pos& a = points[key.first];
        const Pos& b = points[key.second];
        svg += "<line x1=\"" + px_x(a.first) + "\" y1=\"" + px_y(a.second) + "\" x2=\"" +
               px_x(b.first) + "\" y2=\"" + px_y(b.second) +
               "\" stroke=\"black\" marker-end=\"url(#arrow)\"/>\n";
        Rational mx = (a.first + b.first) / 2, my = (a.second + b.second) / 2;
        svg += "<text x=\"" + px_x(mx) + "\" y=\"" + px_y(my) + "\" dx=\"6\" dy=\"-4\">" +
               rational_str(acc.weighted / acc.mass) + "</text>\n";
    }
    for (size_t i = 0; i < points.size(); ++i) {
        svg += "<circle cx=\"" + px_x(points[i].first) + "\" cy=\"" + px_y(points[i].second) +
               "\" r=\"" + (i == 0 ? "5" : "3.5") + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace convo
