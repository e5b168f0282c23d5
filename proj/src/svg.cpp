#include "bidsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bidsim {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#4878a8", "#e49444", "#5fa052", "#c85a5a", "#8268a8", "#937860"};

}  // namespace

std::string render_bar_chart(const ChartSpec& spec) {
    std::size_t cats = spec.categories.size();
    if (cats == 0 || spec.series.empty())
        throw std::invalid_argument("chart needs at least one category and series");
    for (const ChartSeries& s : spec.series)
        if (s.values.size() != cats || s.sems.size() != cats)
            throw std::invalid_argument("series length mismatch");

    double y_max = spec.y_max;
    if (y_max <= 0) {
        for (const ChartSeries& s : spec.series)
            for (std::size_t i = 0; i < cats; ++i)
                y_max = std::max(y_max, s.values[i] + s.sems[i]);
        y_max = y_max <= 0 ? 1.0 : y_max * 1.1;
    }

    const double width = 640, height = 400;
    const double left = 60, right = 20, top = 40, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const double slot = plot_w / static_cast<double>(cats);
    const double group_w = slot * 0.8;
    const double bar_w = group_w / static_cast<double>(spec.series.size());
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           xml_escape(spec.title) + "</text>\n";
    out += "<text x=\"16\" y=\"" + num(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
           num(top + plot_h / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";

    // axes and horizontal gridlines
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(top + plot_h) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        double v = y_max * tick / 5.0, y = y_of(v);
        out += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
               num(left + plot_w) + "\" y2=\"" + num(y) + "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">" + num(v) + "</text>\n";
    }

    for (std::size_t c = 0; c < cats; ++c) {
        double gx = left + slot * (static_cast<double>(c) + 0.1);
        for (std::size_t s = 0; s < spec.series.size(); ++s) {
            double v = spec.series[s].values[c], e = spec.series[s].sems[c];
            double x = gx + bar_w * static_cast<double>(s);
            double y = y_of(std::min(v, y_max));
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w * 0.92) +
                   "\" height=\"" + num(top + plot_h - y) + "\" fill=\"" +
                   kPalette[s % 6] + "\" data-category=\"" + xml_escape(spec.categories[c]) +
                   "\" data-series=\"" + xml_escape(spec.series[s].label) + "\" data-value=\"" +
                   num(v) + "\" data-sem=\"" + num(e) + "\"/>\n";
            if (e > 0) {  // SEM whisker
                double cx = x + bar_w * 0.46;
                double y1 = y_of(std::min(v + e, y_max)), y2 = y_of(std::max(v - e, 0.0));
                out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(cx) +
                       "\" y2=\"" + num(y2) + "\" stroke=\"black\"/>\n";
                for (double yy : {y1, y2})
                    out += "<line x1=\"" + num(cx - 3) + "\" y1=\"" + num(yy) + "\" x2=\"" +
                           num(cx + 3) + "\" y2=\"" + num(yy) + "\" stroke=\"black\"/>\n";
            }
        }
        out += "<text x=\"" + num(gx + group_w / 2) + "\" y=\"" + num(top + plot_h + 16) +
               "\" text-anchor=\"middle\" font-size=\"11\">" + xml_escape(spec.categories[c]) +
               "</text>\n";
    }

    // legend
    double lx = left, ly = height - 18;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        out += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 10) +
               "\" width=\"12\" height=\"12\" fill=\"" + kPalette[s % 6] + "\"/>\n";
        out += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(ly) + "\" font-size=\"11\">" +
               xml_escape(spec.series[s].label) + "</text>\n";
        lx += 18 + 8.0 * static_cast<double>(spec.series[s].label.size()) + 16;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace bidsim
