#include "gadepth/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gadepth {

namespace {

constexpr double kWidth = 760.0, kHeight = 480.0;
constexpr double kLeft = 64.0, kRight = 24.0, kTop = 40.0, kBottom = 56.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_depth_plot_svg(const DepthCurve& curve, const std::string& path,
                          const std::string& title) {
    const double x_min = curve.size_limits.front();
    const double x_max = curve.size_limits.back();
    double y_min = 1.0, y_max = 0.0;
    for (const auto& cell : curve.replicates) {
        for (const auto& rep : cell) {
            for (Fold f : {Fold::train, Fold::test, Fold::validation}) {
                y_min = std::min(y_min, rep.auc(f));
                y_max = std::max(y_max, rep.auc(f));
            }
        }
    }
    y_min = std::floor(std::min(y_min, 0.45) * 10.0) / 10.0;
    y_max = std::ceil(std::max(y_max, 0.55) * 10.0) / 10.0;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) {
        return x_max > x_min ? kLeft + (x - x_min) / (x_max - x_min) * plot_w
                             : kLeft + 0.5 * plot_w;
    };
    auto sy = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // axes and grid
    svg << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double y = y_min + (y_max - y_min) * tick / 5.0;
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(y)) << "\" x2=\""
            << kWidth - kRight << "\" y2=\"" << num(sy(y)) << "\"/>\n";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(y) + 4)
            << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333333\">" << num(y) << "</text>\n";
    }
    for (int s : curve.size_limits) {
        svg << "<text x=\"" << num(sx(s)) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333333\">" << s << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<g stroke=\"#333333\" stroke-width=\"1.5\">"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\"/>"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\"/></g>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">size limit</text>\n";
    svg << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">AUC-ROC</text>\n";

    const struct {
        Fold fold;
        const char* color;
        const char* label;
    } series[3] = {{Fold::train, "#1f77b4", "train"},
                   {Fold::test, "#2ca02c", "test"},
                   {Fold::validation, "#d62728", "validation"}};

    for (const auto& s : series) {
        svg << "<g fill=\"" << s.color << "\" fill-opacity=\"0.25\">\n";
        for (std::size_t i = 0; i < curve.size_limits.size(); ++i)
            for (const auto& rep : curve.replicates[i])
                svg << "<circle cx=\"" << num(sx(curve.size_limits[i])) << "\" cy=\""
                    << num(sy(rep.auc(s.fold))) << "\" r=\"2.2\"/>\n";
        svg << "</g>\n";

        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curve.size_limits.size(); ++i)
            svg << num(sx(curve.size_limits[i])) << ',' << num(sy(curve.mean(s.fold, i))) << ' ';
        svg << "\"/>\n";
    }

    // legend
    double ly = kTop + 10.0;
    for (const auto& s : series) {
        svg << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + 40
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>"
            << "<text x=\"" << kLeft + 46 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18.0;
    }
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gadepth
