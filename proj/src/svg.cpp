#include "lma/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lma {
namespace svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

std::string line_plot(const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series,
                      const std::string& x_label, const std::string& y_label) {
    const double W = 640, H = 420, ml = 70, mr = 130, mt = 20, mb = 50;
    double xmin = xs.empty() ? 0 : *std::min_element(xs.begin(), xs.end());
    double xmax = xs.empty() ? 1 : *std::max_element(xs.begin(), xs.end());
    double ymin = 1e300, ymax = -1e300;
    for (const auto& [_, ys] : series)
        for (double y : ys) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='"
        << H - mb << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fy = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x='" << ml - 8 << "' y='" << py(fy) + 4
            << "' text-anchor='end'>" << num(fy) << "</text>\n";
        double fx = xmin + (xmax - xmin) * i / 4.0;
        out << "<text x='" << px(fx) << "' y='" << H - mb + 18
            << "' text-anchor='middle'>" << num(fx) << "</text>\n";
    }
    out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 10
        << "' text-anchor='middle'>" << x_label << "</text>\n";
    out << "<text x='16' y='" << (mt + H - mb) / 2 << "' transform='rotate(-90 16 "
        << (mt + H - mb) / 2 << ")' text-anchor='middle'>" << y_label << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& [name, ys] = series[s];
        out << "<polyline fill='none' stroke='" << kPalette[s % 6] << "' stroke-width='2' points='";
        for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
            out << px(xs[i]) << "," << py(ys[i]) << " ";
        out << "'/>\n";
        out << "<text x='" << W - mr + 10 << "' y='" << mt + 16 * (s + 1) << "' fill='"
            << kPalette[s % 6] << "'>" << name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap(const std::vector<std::vector<double>>& values,
                    const std::vector<std::string>& row_names,
                    const std::vector<std::string>& col_names) {
    const double cell = 34, ml = 110, mt = 100;
    const std::size_t R = values.size(), C = R ? values[0].size() : 0;
    double vmax = 1e-12;
    for (const auto& row : values)
        for (double v : row) vmax = std::max(vmax, v);

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << ml + C * cell + 20
        << "' height='" << mt + R * cell + 20 << "' font-family='sans-serif' font-size='11'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    for (std::size_t r = 0; r < R; ++r)
        out << "<text x='" << ml - 6 << "' y='" << mt + r * cell + cell / 2 + 4
            << "' text-anchor='end'>" << row_names[r] << "</text>\n";
    for (std::size_t c = 0; c < C; ++c)
        out << "<text x='" << ml + c * cell + cell / 2 << "' y='" << mt - 8
            << "' transform='rotate(-60 " << ml + c * cell + cell / 2 << " " << mt - 8
            << ")'>" << col_names[c] << "</text>\n";
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double f = values[r][c] / vmax;
            const int shade = static_cast<int>(255 - 205 * f);
            out << "<rect x='" << ml + c * cell << "' y='" << mt + r * cell << "' width='"
                << cell << "' height='" << cell << "' fill='rgb(" << shade << "," << shade
                << ",255)' stroke='#ccc'/>\n";
            out << "<text x='" << ml + c * cell + cell / 2 << "' y='"
                << mt + r * cell + cell / 2 + 4 << "' text-anchor='middle'>"
                << values[r][c] << "</text>\n";
        }
    out << "</svg>\n";
    return out.str();
}

std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& x_label) {
    const double W = 640, bar_h = 22, ml = 220, mt = 20;
    double vmax = 1e-12;
    for (const auto& [_, v] : bars) vmax = std::max(vmax, std::abs(v));
    const double H = mt + bars.size() * bar_h + 50;

    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& [name, v] = bars[i];
        const double w = std::abs(v) / vmax * (W - ml - 60);
        out << "<text x='" << ml - 6 << "' y='" << mt + i * bar_h + bar_h / 2 + 4
            << "' text-anchor='end'>" << name << "</text>\n";
        out << "<rect x='" << ml << "' y='" << mt + i * bar_h + 3 << "' width='" << w
            << "' height='" << bar_h - 6 << "' fill='" << (v >= 0 ? "#1f77b4" : "#d62728")
            << "'/>\n";
        out << "<text x='" << ml + w + 4 << "' y='" << mt + i * bar_h + bar_h / 2 + 4
            << "'>" << v << "</text>\n";
    }
    out << "<text x='" << (ml + W) / 2 << "' y='" << H - 12 << "' text-anchor='middle'>"
        << x_label << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace svg
}  // namespace lma
