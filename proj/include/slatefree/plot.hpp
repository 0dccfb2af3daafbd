#ifndef SLATEFREE_PLOT_HPP
#define SLATEFREE_PLOT_HPP

#include <string>

namespace slatefree {

// Renders learning curves from a results CSV as an SVG: one curve per
// (agent, user, seed) cell, episodes on a log x-axis, smoothed returns on y.
// Deterministic bytes for a fixed input.
std::string render_learning_curves(const std::string& csv_text, int window);

void emit_plot(const std::string& csv_path, const std::string& svg_path, int window);

} // namespace slatefree

#endif
