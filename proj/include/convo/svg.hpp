#pragma once

#include <string>

#include "convo/conversation.hpp"

namespace convo {

// Deterministic SVG of the belief walk in the (q_B(axis), q_A(axis)) square.
// Requires binary type spaces on both sides.  Moves that leave the plotted
// point unchanged are omitted; coinciding transitions merge with their
// probability-weighted average label.
std::string export_belief_walk_svg(const DimartingaleTrace& trace, int axis_b, int axis_a,
                                   const std::string& axis_b_label,
                                   const std::string& axis_a_label);

}  // namespace convo
