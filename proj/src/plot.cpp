#include "itts/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "itts/csv.hpp"
#include "itts/error.hpp"

namespace itts {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 46.0;

const char* kSeriesColors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#f39c12"};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> stddev;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void emit_chart(const std::vector<Series>& series, const std::string& x_label,
                const std::string& y_label, bool bars, const std::string& out_svg,
                const std::vector<std::string>& x_tick_labels = {}) {
    double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_max = std::max(y_max, s.mean[i] + s.stddev[i]);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    y_max *= 1.05;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double v) {
        return kMarginLeft + (v - x_min) / (x_max - x_min) * plot_w;
    };
    const auto sy = [&](double v) {
        return kMarginTop + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
    };

    std::ofstream out(out_svg);
    if (!out) throw DataError("cannot write " + out_svg);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes and horizontal grid
    for (int g = 0; g <= 4; ++g) {
        const double v = y_min + (y_max - y_min) * g / 4.0;
        out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(sy(v)) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << fmt(sy(v))
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(sy(v) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    // x ticks from the first series
    if (!series.empty()) {
        for (std::size_t i = 0; i < series[0].x.size(); ++i) {
            const double v = series[0].x[i];
            const std::string label =
                i < x_tick_labels.size() ? x_tick_labels[i] : fmt(v);
            out << "<text x=\"" << fmt(sx(v)) << "\" y=\"" << kMarginTop + plot_h + 18
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
                << label << "</text>\n";
        }
    }
    out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
        << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    const double bar_w = series.empty() ? 8.0 : std::min(26.0, plot_w / (4.0 * series[0].x.size()));
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kSeriesColors[si % 5];
        if (bars) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double cx = sx(s.x[i]);
                out << "<rect x=\"" << fmt(cx - bar_w / 2) << "\" y=\"" << fmt(sy(s.mean[i]))
                    << "\" width=\"" << fmt(bar_w) << "\" height=\""
                    << fmt(sy(0.0) - sy(s.mean[i])) << "\" fill=\"" << color
                    << "\" fill-opacity=\"0.7\"/>\n";
            }
        } else {
            std::ostringstream pts;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                pts << fmt(sx(s.x[i])) << ',' << fmt(sy(s.mean[i])) << ' ';
            out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double cx = sx(s.x[i]);
            const double lo = sy(std::max(0.0, s.mean[i] - s.stddev[i]));
            const double hi = sy(s.mean[i] + s.stddev[i]);
            out << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(lo) << "\" x2=\"" << fmt(cx)
                << "\" y2=\"" << fmt(hi) << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
            out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(sy(s.mean[i]))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        out << "<rect x=\"" << kWidth - kMarginRight + 10 << "\" y=\"" << kMarginTop + 16.0 * si
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << kWidth - kMarginRight + 26 << "\" y=\"" << kMarginTop + 16.0 * si + 9
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void plot_drift_summary(const std::string& summary_csv, const std::string& out_svg) {
    std::ifstream in(summary_csv);
    if (!in) throw DataError("cannot open " + summary_csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,category,mean,std,count", 0) != 0)
        throw ParseError(1, "bad drift summary header");

    std::map<std::string, Series> by_category;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() < 5) throw ParseError(line_no, "expected >= 5 fields");
        const std::string& category = fields[1];
        if (category == "all") continue;
        Series& s = by_category[category];
        s.label = category;
        s.x.push_back(static_cast<double>(csv::parse_int(fields[0], line_no)));
        s.mean.push_back(csv::parse_double(fields[2], line_no));
        s.stddev.push_back(csv::parse_double(fields[3], line_no));
    }
    if (by_category.empty()) throw EmptyData("no drift summary rows");
    std::vector<Series> series;
    for (auto& [name, s] : by_category) series.push_back(std::move(s));
    emit_chart(series, "lookahead k", "mean cosine distance d(n,k)", false, out_svg);
}

void plot_mushra_summary(const std::string& summary_csv, const std::string& out_svg) {
    std::ifstream in(summary_csv);
    if (!in) throw DataError("cannot open " + summary_csv);
    std::string line;
    if (!std::getline(in, line) || line != "condition,mean,std,count")
        throw ParseError(1, "bad mushra summary header");

    Series s;
    s.label = "score";
    std::vector<std::string> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields");
        labels.push_back(fields[0]);
        s.x.push_back(static_cast<double>(s.x.size()));
        s.mean.push_back(csv::parse_double(fields[1], line_no));
        s.stddev.push_back(csv::parse_double(fields[2], line_no));
    }
    if (s.x.empty()) throw EmptyData("no mushra summary rows");
    emit_chart({s}, "condition", "MUSHRA score", true, out_svg, labels);
}

}  // namespace itts
