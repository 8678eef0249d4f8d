#pragma once

#include <string>
#include <vector>

namespace exlb {

void write_text_file(const std::string& path, const std::string& content);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal standalone line chart; CSVs are the primary artifact, the SVG is a
// convenience view of the same curves.
std::string render_line_chart_svg(const std::vector<Series>& series,
                                  const std::string& title, int width = 640,
                                  int height = 420);

// One JSON record per run appended to <out_dir>/manifest.jsonl.
void append_manifest(const std::string& out_dir, const std::string& subcommand,
                     const std::string& config_summary, std::uint64_t master_seed);

} // namespace exlb
