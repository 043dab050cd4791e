#include "cndisc/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace cndisc::cli {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 220.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 30.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Panel {
    double top = 0.0;
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    double px(double x) const {
        return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        const double h = kPanelHeight - kMarginTop - kMarginBottom;
        return top + kMarginTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * h;
    }
    double bottom() const { return top + kPanelHeight - kMarginBottom; }
    double upper() const { return top + kMarginTop; }
};

void widen(double& lo, double& hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi <= lo) {
        const double pad = std::max(1e-12, std::abs(lo) * 0.05 + 0.5);
        lo -= pad;
        hi += pad;
        return;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

std::string frame(const Panel& p, const std::string& title) {
    std::string s;
    s += "<g class=\"frame\">";
    s += "<rect x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(p.upper()) + "\" width=\"" +
         fmt(kWidth - kMarginLeft - kMarginRight) + "\" height=\"" + fmt(p.bottom() - p.upper()) +
         "\" fill=\"none\" stroke=\"#444\"/>";
    s += "<text x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(p.top + 20.0) + "\" font-size=\"13\">" + title + "</text>";
    s += "<text x=\"" + fmt(kMarginLeft - 5.0) + "\" y=\"" + fmt(p.upper() + 10.0) +
         "\" font-size=\"10\" text-anchor=\"end\">" + fmt_label(p.y_hi) + "</text>";
    s += "<text x=\"" + fmt(kMarginLeft - 5.0) + "\" y=\"" + fmt(p.bottom()) +
         "\" font-size=\"10\" text-anchor=\"end\">" + fmt_label(p.y_lo) + "</text>";
    s += "<text x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(p.bottom() + 14.0) + "\" font-size=\"10\">" +
         fmt_label(p.x_lo) + "</text>";
    s += "<text x=\"" + fmt(kWidth - kMarginRight) + "\" y=\"" + fmt(p.bottom() + 14.0) +
         "\" font-size=\"10\" text-anchor=\"end\">" + fmt_label(p.x_hi) + "</text>";
    s += "</g>\n";
    return s;
}

std::string polyline(const Panel& p, const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::string& cls, const std::string& colour) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(ys[i])) {
            continue;
        }
        pts += fmt(p.px(xs[i])) + "," + fmt(p.py(ys[i])) + " ";
    }
    if (!pts.empty()) {
        pts.pop_back();
    }
    return "<polyline class=\"" + cls + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.2\" points=\"" +
           pts + "\"/>\n";
}

std::string vertical(const Panel& p, double x, const std::string& cls, const std::string& colour) {
    return "<line class=\"" + cls + "\" x1=\"" + fmt(p.px(x)) + "\" x2=\"" + fmt(p.px(x)) + "\" y1=\"" +
           fmt(p.upper()) + "\" y2=\"" + fmt(p.bottom()) + "\" stroke=\"" + colour +
           "\" stroke-dasharray=\"4,3\"/>\n";
}

}  // namespace

std::string render_svg(const SampleSeries& series, const std::vector<PointDiagnostics>& profile,
                       std::span<const Knot> knots) {
    const double x_lo = series.x().front();
    const double x_hi = series.x().back();

    std::string body;

    // Panel 1: data and detected knots.
    Panel data{0.0, x_lo, x_hi};
    const auto [ymin, ymax] = std::minmax_element(series.y().begin(), series.y().end());
    data.y_lo = *ymin;
    data.y_hi = *ymax;
    widen(data.y_lo, data.y_hi);
    body += frame(data, "data and detected knots");
    body += "<g class=\"samples\" fill=\"#1f77b4\">";
    for (std::size_t i = 0; i < series.size(); ++i) {
        body += "<circle cx=\"" + fmt(data.px(series.x()[i])) + "\" cy=\"" + fmt(data.py(series.y()[i])) +
                "\" r=\"1.8\"/>";
    }
    body += "</g>\n";
    for (const Knot& k : knots) {
        body += vertical(data, k.zeta, "knot-marker", k.sign > 0 ? "#d62728" : "#1f3fd6");
    }

    std::vector<double> zeta;
    std::vector<double> delta;
    std::vector<double> ea;
    std::vector<double> efg;
    std::vector<double> ee;
    for (const auto& p : profile) {
        zeta.push_back(p.zeta);
        delta.push_back(p.delta_t);
        const auto lg = [](double v) { return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN(); };
        ea.push_back(lg(p.e_approx));
        efg.push_back(lg(p.e_combined));
        ee.push_back(lg(p.e_extrap));
    }

    // Panel 2: Taylor-coefficient difference.
    Panel dpanel{kPanelHeight, x_lo, x_hi};
    if (!delta.empty()) {
        const auto [dmin, dmax] = std::minmax_element(delta.begin(), delta.end());
        dpanel.y_lo = *dmin;
        dpanel.y_hi = *dmax;
    }
    widen(dpanel.y_lo, dpanel.y_hi);
    body += frame(dpanel, "Taylor coefficient difference");
    body += polyline(dpanel, zeta, delta, "delta-profile", "#2ca02c");
    for (const Knot& k : knots) {
        body += vertical(dpanel, k.zeta, "knot-guide", "#999");
    }

    // Panel 3: error profiles, log10.
    Panel epanel{2.0 * kPanelHeight, x_lo, x_hi};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto* v : {&ea, &efg, &ee}) {
        for (double e : *v) {
            if (std::isfinite(e)) {
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
        }
    }
    epanel.y_lo = lo;
    epanel.y_hi = hi;
    widen(epanel.y_lo, epanel.y_hi);
    body += frame(epanel, "log10 errors: approximation (grey), combined (orange), extrapolation (purple)");
    body += polyline(epanel, zeta, ea, "error-approx", "#7f7f7f");
    body += polyline(epanel, zeta, efg, "error-combined", "#ff7f0e");
    body += polyline(epanel, zeta, ee, "error-extrap", "#9467bd");
    for (const Knot& k : knots) {
        body += vertical(epanel, k.zeta, "knot-guide", "#999");
    }

    const double height = 3.0 * kPanelHeight;
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt(kWidth) + "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(height) +
           "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body +
           "</svg>\n";
}

}  // namespace cndisc::cli
