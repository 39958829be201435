#include "lyapstep/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lyapstep::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_series(const std::string& label,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("SvgPlot: size mismatch");
    series_.push_back({label, xs, ys, false});
}

void SvgPlot::add_guide_line(const std::string& label, double slope, double x0, double y0) {
    series_.push_back({label, {x0, y0}, {slope, 0.0}, true});
}

std::string SvgPlot::render() const {
    auto tx = [this](double x) { return log_x_ ? std::log10(x) : x; };
    auto ty = [this](double y) { return log_y_ ? std::log10(y) : y; };
    auto usable = [this](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y)) return false;
        if (log_x_ && x <= 0.0) return false;
        if (log_y_ && y <= 0.0) return false;
        return true;
    };

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool any = false;
    for (const auto& s : series_) {
        if (s.guide) continue;
        for (std::size_t k = 0; k < s.xs.size(); ++k) {
            if (!usable(s.xs[k], s.ys[k])) continue;
            const double x = tx(s.xs[k]);
            const double y = ty(s.ys[k]);
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!any) { xmin = ymin = 0.0; xmax = ymax = 1.0; }
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
    const double xpad = 0.04 * (xmax - xmin);
    const double ypad = 0.06 * (ymax - ymin);
    xmin -= xpad; xmax += xpad;
    ymin -= ypad; ymax += ypad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kMarginTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">" << xml_escape(title_) << "</text>\n";

    // frame
    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks (5 per axis)
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double sx = px(fx);
        const double sy = py(fy);
        const double lx = log_x_ ? std::pow(10.0, fx) : fx;
        const double ly = log_y_ ? std::pow(10.0, fy) : fy;
        svg << "<line x1=\"" << sx << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << sx
            << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << sx << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(lx)
            << "</text>\n"
            << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kMarginLeft
            << "\" y2=\"" << sy << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(ly)
            << "</text>\n";
    }
    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
        << xml_escape(x_label_) << "</text>\n"
        << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
        << kMarginTop + plot_h / 2 << ")\">" << xml_escape(y_label_) << "</text>\n";

    int color = 0;
    double legend_y = kMarginTop + 14;
    for (const auto& s : series_) {
        const char* stroke = kPalette[color % 8];
        std::ostringstream pts;
        if (s.guide) {
            // line of given slope through (x0, y0) in plot coordinates
            const double slope = s.ys[0];
            const double gx0 = tx(s.xs[0]);
            const double gy0 = ty(s.xs[1]);
            pts << px(xmin) << "," << py(gy0 + slope * (xmin - gx0)) << " " << px(xmax) << ","
                << py(gy0 + slope * (xmax - gx0));
            svg << "<polyline points=\"" << pts.str()
                << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n";
        } else {
            bool first = true;
            for (std::size_t k = 0; k < s.xs.size(); ++k) {
                if (!usable(s.xs[k], s.ys[k])) continue;
                if (!first) pts << " ";
                pts << px(tx(s.xs[k])) << "," << py(ty(s.ys[k]));
                first = false;
            }
            svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << stroke
                << "\" stroke-width=\"1.5\"/>\n";
        }
        if (!s.label.empty()) {
            svg << "<line x1=\"" << kMarginLeft + plot_w - 130 << "\" y1=\"" << legend_y
                << "\" x2=\"" << kMarginLeft + plot_w - 110 << "\" y2=\"" << legend_y
                << "\" stroke=\"" << (s.guide ? "#999" : stroke) << "\""
                << (s.guide ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
                << "<text x=\"" << kMarginLeft + plot_w - 104 << "\" y=\"" << legend_y + 4
                << "\" font-size=\"12\" font-family=\"sans-serif\">" << xml_escape(s.label)
                << "</text>\n";
            legend_y += 18;
        }
        if (!s.guide) ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

void SvgPlot::write(const std::filesystem::path& path) const {
    write_text_atomic(path, render());
}

}  // namespace lyapstep::io
