#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "slkd/textio.hpp"
#include "slkd/trainer.hpp"

namespace slkd {

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
};

// data extent padded by 5% on both ends; degenerate spans get a unit pad
inline AxisRange padded_range(double mn, double mx) {
    double span = mx - mn;
    double pad = span > 0.0 ? 0.05 * span : (std::abs(mx) > 0.0 ? 0.05 * std::abs(mx) : 1.0);
    return {mn - pad, mx + pad};
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

} // namespace detail

// Single-file static line chart. Every series is one polyline keyed by its
// own x values; one-point series degrade to a visible circle marker.
inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label, const std::vector<Series>& series) {
    require(!series.empty(), "plot: no series given");
    double mnx = 0, mxx = 0, mny = 0, mxy = 0;
    bool first = true;
    for (const Series& s : series) {
        require(!s.xs.empty() && s.xs.size() == s.ys.size(), "plot: series '" + s.label + "' is empty or ragged");
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            require(std::isfinite(s.xs[i]) && std::isfinite(s.ys[i]),
                    "plot: series '" + s.label + "' has non-finite points");
            if (first) {
                mnx = mxx = s.xs[i];
                mny = mxy = s.ys[i];
                first = false;
            } else {
                mnx = std::min(mnx, s.xs[i]);
                mxx = std::max(mxx, s.xs[i]);
                mny = std::min(mny, s.ys[i]);
                mxy = std::max(mxy, s.ys[i]);
            }
        }
    }
    const detail::AxisRange rx = detail::padded_range(mnx, mxx);
    const detail::AxisRange ry = detail::padded_range(mny, mxy);

    const int W = 880, H = 520, L = 74, R = 24, T = 48, B = 58;
    const double pw = W - L - R, ph = H - T - B;
    auto X = [&](double v) { return L + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto Y = [&](double v) { return T + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) + "\" height=\"" +
           std::to_string(H) + "\" viewBox=\"0 0 " + std::to_string(W) + " " + std::to_string(H) + "\">\n";
    svg += "<rect width=\"" + std::to_string(W) + "\" height=\"" + std::to_string(H) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(W / 2) + "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"17\" fill=\"#222\">" + detail::xml_escape(title) + "</text>\n";

    // gridlines and tick labels, 5 divisions per axis
    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        const double px = X(fx), py = Y(fy);
        svg += "<line x1=\"" + detail::fmt_tick(px) + "\" y1=\"" + std::to_string(T) + "\" x2=\"" +
               detail::fmt_tick(px) + "\" y2=\"" + std::to_string(T + static_cast<int>(ph)) +
               "\" stroke=\"#e3e3e3\"/>\n";
        svg += "<line x1=\"" + std::to_string(L) + "\" y1=\"" + detail::fmt_tick(py) + "\" x2=\"" +
               std::to_string(L + static_cast<int>(pw)) + "\" y2=\"" + detail::fmt_tick(py) +
               "\" stroke=\"#e3e3e3\"/>\n";
        svg += "<text x=\"" + detail::fmt_tick(px) + "\" y=\"" + std::to_string(H - B + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\">" +
               detail::fmt_tick(fx) + "</text>\n";
        svg += "<text x=\"" + std::to_string(L - 8) + "\" y=\"" + detail::fmt_tick(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\">" +
               detail::fmt_tick(fy) + "</text>\n";
    }
    // axes
    svg += "<rect x=\"" + std::to_string(L) + "\" y=\"" + std::to_string(T) + "\" width=\"" +
           detail::fmt_tick(pw) + "\" height=\"" + detail::fmt_tick(ph) +
           "\" fill=\"none\" stroke=\"#555\"/>\n";
    svg += "<text x=\"" + std::to_string(L + static_cast<int>(pw) / 2) + "\" y=\"" + std::to_string(H - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\">" +
           detail::xml_escape(x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(T + static_cast<int>(ph) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\" "
           "transform=\"rotate(-90 18 " + std::to_string(T + static_cast<int>(ph) / 2) + ")\">" +
           detail::xml_escape(y_label) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = detail::series_color(si);
        if (s.xs.size() >= 2) {
            std::string pts;
            for (std::size_t i = 0; i < s.xs.size(); ++i) {
                if (i) pts += " ";
                pts += detail::fmt_tick(X(s.xs[i])) + "," + detail::fmt_tick(Y(s.ys[i]));
            }
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.8\" points=\"" +
                   pts + "\"/>\n";
        }
        if (s.xs.size() <= 24)
            for (std::size_t i = 0; i < s.xs.size(); ++i)
                svg += "<circle cx=\"" + detail::fmt_tick(X(s.xs[i])) + "\" cy=\"" + detail::fmt_tick(Y(s.ys[i])) +
                       "\" r=\"3.4\" fill=\"" + std::string(color) + "\"/>\n";
    }

    // legend, top-right inside the plot
    const int lx = L + static_cast<int>(pw) - 180, ly = T + 10;
    svg += "<rect x=\"" + std::to_string(lx - 8) + "\" y=\"" + std::to_string(ly - 4) +
           "\" width=\"186\" height=\"" + std::to_string(static_cast<int>(series.size()) * 19 + 8) +
           "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#bbb\"/>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const int yy = ly + static_cast<int>(si) * 19 + 10;
        svg += "<line x1=\"" + std::to_string(lx) + "\" y1=\"" + std::to_string(yy - 4) + "\" x2=\"" +
               std::to_string(lx + 22) + "\" y2=\"" + std::to_string(yy - 4) + "\" stroke=\"" +
               detail::series_color(si) + "\" stroke-width=\"3\"/>\n";
        svg += "<text x=\"" + std::to_string(lx + 28) + "\" y=\"" + std::to_string(yy) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">" +
               detail::xml_escape(series[si].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// loss.svg and accuracy.svg, one polyline per named record, x = cumulative
// training iterations
inline void emit_plots(const std::vector<std::pair<std::string, TrainRecord>>& records,
                       const std::string& out_dir) {
    require(!records.empty(), "plot: no records given");
    std::vector<Series> loss, acc;
    for (const auto& [name, rec] : records) {
        require(!rec.rows.empty(), "plot: record '" + name + "' has no rows");
        Series ls{name, {}, {}}, as{name, {}, {}};
        for (const TrainRecordRow& w : rec.rows) {
            ls.xs.push_back(static_cast<double>(w.cum_iters));
            ls.ys.push_back(w.train_loss);
            as.xs.push_back(static_cast<double>(w.cum_iters));
            as.ys.push_back(w.test_acc);
        }
        loss.push_back(std::move(ls));
        acc.push_back(std::move(as));
    }
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/loss.svg",
                    render_line_chart("training loss", "cumulative iterations", "mean train loss", loss));
    write_text_file(out_dir + "/accuracy.svg",
                    render_line_chart("test accuracy", "cumulative iterations", "top-1 accuracy", acc));
}

} // namespace slkd
