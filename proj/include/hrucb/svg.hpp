#pragma once
// Minimal SVG line chart of mean cumulative regret per policy.

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "hrucb/harness.hpp"

namespace hrucb {

inline void write_regret_svg(const std::vector<PolicySummary>& summaries,
                             const std::string& path) {
    require(!summaries.empty(), "svg: nothing to plot");
    const int width = 860, height = 520;
    const int ml = 70, mr = 180, mt = 30, mb = 50;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    std::size_t t_max = 0;
    double y_max = 1.0;
    for (const PolicySummary& s : summaries) {
        t_max = std::max(t_max, s.mean.size());
        for (double v : s.mean) y_max = std::max(y_max, v);
    }
    require(t_max >= 2, "svg: need at least two points");

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    auto xpos = [&](double t) { return ml + plot_w * (t - 1.0) / (static_cast<double>(t_max) - 1.0); };
    auto ypos = [&](double v) { return mt + plot_h * (1.0 - v / y_max); };

    std::ofstream out(path);
    ensure(out.good(), "svg: cannot open output file");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
        << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + plot_h << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double frac = i / 4.0;
        const double tx = 1.0 + frac * (static_cast<double>(t_max) - 1.0);
        const double vy = frac * y_max;
        out << "<text x=\"" << xpos(tx) << "\" y=\"" << mt + plot_h + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << static_cast<long>(tx)
            << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << ypos(vy) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << static_cast<long>(vy) << "</text>\n";
    }
    out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">user index</text>\n";
    out << "<text x=\"18\" y=\"" << mt + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << mt + plot_h / 2 << ")\">mean cumulative pseudo-regret</text>\n";

    int color = 0;
    for (const PolicySummary& s : summaries) {
        const char* stroke = palette[color % 6];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\" points=\"";
        const std::size_t step = std::max<std::size_t>(s.mean.size() / 400, 1);
        for (std::size_t i = 0; i < s.mean.size(); i += step)
            out << xpos(static_cast<double>(i + 1)) << ',' << ypos(s.mean[i]) << ' ';
        out << xpos(static_cast<double>(s.mean.size())) << ',' << ypos(s.mean.back());
        out << "\"/>\n";
        const int ly = mt + 16 + color * 20;
        out << "<line x1=\"" << ml + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\""
            << ml + plot_w + 36 << "\" y2=\"" << ly << "\" stroke=\"" << stroke
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + plot_w + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << s.policy << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
    out.close();
    ensure(out.good(), "svg: failed writing output file");
}

}  // namespace hrucb
