#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lyapstep::io {

/// Formats with 17 significant digits so CSV round-trips are bit exact.
/// Infinities print as inf / -inf.
[[nodiscard]] std::string format_double(double x);

/// Writes via a temporary file in the same directory plus rename, so
/// readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Splits one CSV line on commas (no quoting; the emitted files never need
/// it).
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a CSV file into rows of fields; the header row is included.
[[nodiscard]] std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// Minimal static SVG line plot: polyline series on linear or logarithmic
/// axes, with ticks, labels and an optional legend.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void set_log_x(bool on) { log_x_ = on; }
    void set_log_y(bool on) { log_y_ = on; }

    /// Adds a data series; points with non-finite (or non-positive, on log
    /// axes) coordinates are skipped.
    void add_series(const std::string& label,
                    const std::vector<double>& xs,
                    const std::vector<double>& ys);

    /// Adds a straight guide line through (x0, y0) with the given slope in
    /// the plot's (possibly log-log) coordinates.
    void add_guide_line(const std::string& label, double slope, double x0, double y0);

    [[nodiscard]] std::string render() const;
    void write(const std::filesystem::path& path) const;

  private:
    struct Series {
        std::string label;
        std::vector<double> xs, ys;
        bool guide = false;
    };

    std::string title_, x_label_, y_label_;
    bool log_x_ = false, log_y_ = false;
    std::vector<Series> series_;
};

}  // namespace lyapstep::io
