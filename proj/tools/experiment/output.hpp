#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace circqft::experiment {

/// "%.12g"; the single numeric format used for every CSV cell.
std::string format_number(double x);

/// Writes header + rows. Cells are written verbatim, comma separated.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Static line chart, panels stacked vertically.
void write_svg(const std::filesystem::path& path, std::span<const Panel> panels);

/// Sidecar `<stem>.meta.json`: tool version, command, effective config, summary.
void write_metadata(const std::filesystem::path& path, const std::string& command, const nlohmann::json& config,
                    const nlohmann::json& summary, const std::vector<std::string>& outputs);

}  // namespace circqft::experiment
