#include "slatefree/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "slatefree/experiment.hpp"

namespace slatefree {

namespace {

struct Curve {
    std::string label;
    std::vector<double> returns;
};

std::vector<Curve> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("plot: empty CSV");
    if (line.rfind("episode,agent,user,seed,return", 0) != 0)
        throw std::runtime_error("plot: unexpected CSV header at line 1");

    std::map<std::string, std::vector<double>> by_cell;
    std::vector<std::string> order;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (fields.size() != 7)
            throw std::runtime_error("plot: malformed CSV row at line " + std::to_string(lineno));
        const std::string key = fields[1] + "/" + fields[2] + "/" + fields[3];
        double value = 0.0;
        try {
            value = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw std::runtime_error("plot: bad return value at line " + std::to_string(lineno));
        }
        auto [it, inserted] = by_cell.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(value);
    }
    if (order.empty()) throw std::runtime_error("plot: CSV contains no data rows");

    std::vector<Curve> curves;
    for (const auto& key : order) curves.push_back({key, std::move(by_cell[key])});
    return curves;
}

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string render_learning_curves(const std::string& csv_text, int window) {
    if (window < 1) throw std::runtime_error("plot: window must be >= 1");
    auto curves = parse_csv(csv_text);

    const double width = 840, height = 540;
    const double ml = 70, mr = 220, mt = 30, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double ymin = 1e300, ymax = -1e300;
    std::size_t max_len = 1;
    std::vector<std::vector<double>> smoothed;
    for (auto& c : curves) {
        auto sm = smooth(c.returns, window);
        for (double v : sm) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
        max_len = std::max(max_len, sm.size());
        smoothed.push_back(std::move(sm));
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    const double xmax_log = std::log10(static_cast<double>(max_len));

    auto xpos = [&](std::size_t episode) {
        return ml + pw * std::log10(static_cast<double>(episode)) / std::max(xmax_log, 1e-9);
    };
    auto ypos = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
           fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
           "\" y2=\"" + fmt(mt + ph) + "\"/>\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
           fmt(mt + ph) + "\"/>\n";
    svg += "</g>\n";

    // decade ticks on the log axis
    for (int d = 0; std::pow(10.0, d) <= static_cast<double>(max_len); ++d) {
        const double x = xpos(static_cast<std::size_t>(std::pow(10.0, d)));
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(x) +
               "\" y2=\"" + fmt(mt + ph + 6) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(mt + ph + 22) +
               "\" font-size=\"12\" text-anchor=\"middle\">1e" + std::to_string(d) + "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = ymin + (ymax - ymin) * i / 5.0;
        const double y = ypos(v);
        svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(y + 4) +
               "\" font-size=\"12\" text-anchor=\"end\">" + fmt(v) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\">episodes (log scale)</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& sm = smoothed[ci];
        // subsample long curves; SVG stays small, shape is preserved
        const std::size_t stride = std::max<std::size_t>(1, sm.size() / 2000);
        std::string points;
        for (std::size_t e = 0; e < sm.size(); e += stride) {
            points += fmt(xpos(e + 1)) + "," + fmt(ypos(sm[e])) + " ";
        }
        points += fmt(xpos(sm.size())) + "," + fmt(ypos(sm.back()));
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        const double ly = mt + 16 + 18.0 * static_cast<double>(ci);
        svg += "<line x1=\"" + fmt(ml + pw + 14) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
               fmt(ml + pw + 40) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(ml + pw + 46) + "\" y=\"" + fmt(ly) +
               "\" font-size=\"12\">" + curves[ci].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const std::string& csv_path, const std::string& svg_path, int window) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("plot: cannot open CSV: " + csv_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string svg = render_learning_curves(text, window); // throws before the file is touched
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw std::runtime_error("plot: cannot open output: " + svg_path);
    out << svg;
}

} // namespace slatefree
