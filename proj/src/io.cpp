#include "exlb/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exlb/errors.hpp"

namespace exlb {

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ConfigError("short write: " + path);
}

std::string render_line_chart_svg(const std::vector<Series>& series,
                                  const std::string& title, int width, int height) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ml = 60, mr = 20, mt = 36, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
       << height << "' viewBox='0 0 " << width << ' ' << height << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14' "
          "font-family='sans-serif'>"
       << title << "</text>\n";
    os << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
       << "' fill='none' stroke='#888'/>\n";
    os.precision(6);
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + t * (xmax - xmin) / 4;
        const double yv = ymin + t * (ymax - ymin) / 4;
        os << "<text x='" << px(xv) << "' y='" << height - 20
           << "' text-anchor='middle' font-size='10' font-family='sans-serif'>" << xv
           << "</text>\n";
        os << "<text x='" << ml - 6 << "' y='" << py(yv) + 3
           << "' text-anchor='end' font-size='10' font-family='sans-serif'>" << yv
           << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << colors[ci % 5] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        os << "'/>\n";
        os << "<text x='" << width - mr - 8 << "' y='" << mt + 16 + 14 * ci
           << "' text-anchor='end' font-size='11' font-family='sans-serif' fill='"
           << colors[ci % 5] << "'>" << s.name << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

void append_manifest(const std::string& out_dir, const std::string& subcommand,
                     const std::string& config_summary, std::uint64_t master_seed) {
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["config"] = config_summary;
    j["master_seed"] = master_seed;
    j["artifact_version"] = "1.0.0";
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(out_dir + "/manifest.jsonl", std::ios::app);
    if (!out) throw ConfigError("cannot append manifest in " + out_dir);
    out << j.dump() << '\n';
}

} // namespace exlb
