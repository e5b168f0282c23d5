#pragma once
#include <string>
#include <vector>

namespace bidsim {

// Static grouped bar chart with SEM whiskers; no plotting dependency.
// Bar values are also embedded as data-value / data-sem attributes so tests
// and scripts can read them back without rasterizing.
struct ChartSeries {
    std::string label;
    std::vector<double> values;  // one per category
    std::vector<double> sems;    // same length; 0 = no whisker
};

struct ChartSpec {
    std::string title;
    std::string y_label;
    std::vector<std::string> categories;
    std::vector<ChartSeries> series;
    double y_max = 0.0;  // 0 = auto from data
};

std::string render_bar_chart(const ChartSpec& spec);

}  // namespace bidsim
