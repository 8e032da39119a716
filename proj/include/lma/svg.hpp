#pragma once

#include <string>
#include <vector>

namespace lma {
namespace svg {

/// One polyline per series over shared x values; axes and labels included.
std::string line_plot(const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series,
                      const std::string& x_label, const std::string& y_label);

/// Row/column annotated heatmap of non-negative values.
std::string heatmap(const std::vector<std::vector<double>>& values,
                    const std::vector<std::string>& row_names,
                    const std::vector<std::string>& col_names);

/// Horizontal bar chart, longest bar first as given.
std::string bar_chart(const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& x_label);

}  // namespace svg
}  // namespace lma
