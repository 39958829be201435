#include "lyapstep/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace lyapstep;
namespace fs = std::filesystem;

TEST_CASE("double formatting") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    // 17 significant digits round-trip
    const double x = 1.0 / 3.0;
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("atomic text writes and CSV reads") {
    const fs::path dir = fs::temp_directory_path() / "lyapstep_io_test";
    fs::remove_all(dir);
    const fs::path file = dir / "nested" / "data.csv";
    io::write_text_atomic(file, "a,b\n1,2\n");
    CHECK(fs::exists(file));
    CHECK_FALSE(fs::exists(file.string() + ".tmp"));

    const auto rows = io::read_csv(file);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"a", "b"});
    CHECK(rows[1] == std::vector<std::string>{"1", "2"});
    fs::remove_all(dir);
}

TEST_CASE("svg rendering") {
    io::SvgPlot plot("title", "x", "y");
    plot.set_log_x(true);
    plot.set_log_y(true);
    plot.add_series("s1", {1e-3, 1e-2, 1e-1}, {1e-6, 1e-4, 1e-2});
    plot.add_guide_line("slope 2", 2.0, 1e-3, 1e-6);
    const std::string svg = plot.render();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("slope 2") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}
