#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "casdlab/error.hpp"
#include "casdlab/netlist.hpp"  // format_double

namespace casdlab {

// =============================================================================
// Deterministic file outputs
// =============================================================================

/// FNV-1a 64-bit content hash, hex-encoded.
inline std::string content_hash(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("io-error", "cannot open " + path.string() + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("io-error", "cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string csv_table(const std::string& header,
                             const std::vector<std::vector<double>>& rows) {
    std::string out = header + "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

// =============================================================================
// Minimal SVG line charts
// =============================================================================

struct svg_series {
    std::string label;
    std::vector<double> x, y;
};

/// Fixed-size line chart; enough for sweep curves, deterministic output.
inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<svg_series>& series) {
    const int width = 640, height = 420;
    const int m_left = 70, m_right = 20, m_top = 40, m_bottom = 50;
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;

    auto px = [&](double x) {
        return m_left + (x - x_min) / (x_max - x_min) * (width - m_left - m_right);
    };
    auto py = [&](double y) {
        return height - m_bottom - (y - y_min) / (y_max - y_min) * (height - m_top - m_bottom);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + std::to_string(m_left) + "\" y1=\"" + std::to_string(height - m_bottom) +
           "\" x2=\"" + std::to_string(width - m_right) + "\" y2=\"" +
           std::to_string(height - m_bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + std::to_string(m_left) + "\" y1=\"" + std::to_string(m_top) +
           "\" x2=\"" + std::to_string(m_left) + "\" y2=\"" + std::to_string(height - m_bottom) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(height / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 18 " + std::to_string(height / 2) + ")\">" + y_label +
           "</text>\n";
    // range labels
    svg += "<text x=\"" + std::to_string(m_left) + "\" y=\"" + std::to_string(height - m_bottom + 16) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" + format_double(x_min) + "</text>\n";
    svg += "<text x=\"" + std::to_string(width - m_right) + "\" y=\"" +
           std::to_string(height - m_bottom + 16) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           format_double(x_max) + "</text>\n";
    svg += "<text x=\"" + std::to_string(m_left - 4) + "\" y=\"" + std::to_string(height - m_bottom) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           format_double(y_min) + "</text>\n";
    svg += "<text x=\"" + std::to_string(m_left - 4) + "\" y=\"" + std::to_string(m_top + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
           format_double(y_max) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) pts += " ";
            pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(colors[k % 5]) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + std::to_string(width - m_right - 4) + "\" y=\"" +
               std::to_string(m_top + 16 + 16 * static_cast<int>(k)) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
               colors[k % 5] + "\">" + s.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace casdlab
