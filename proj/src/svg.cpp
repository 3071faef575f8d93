#include "genlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace genlab {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Linear blue-white-red ramp over [-scale, scale].
std::string diverging_color(double value, double scale) {
    const double t = scale > 0.0 ? std::clamp(value / scale, -1.0, 1.0) : 0.0;
    int r = 255, g = 255, b = 255;
    if (t > 0) {
        g = static_cast<int>(std::lround(255 * (1.0 - t)));
        b = g;
    } else if (t < 0) {
        r = static_cast<int>(std::lround(255 * (1.0 + t)));
        g = r;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string svg_heatmap(const SweepResult& result) {
    const int na = static_cast<int>(result.config.grid_a.size());
    const int nb = static_cast<int>(result.config.grid_b.size());
    const double cell = 40.0;
    const double margin = 60.0;
    const double width = margin + nb * cell + 20.0;
    const double height = margin + na * cell + 20.0;

    double scale = 0.0;
    for (const auto& c : result.cells) scale = std::max(scale, std::abs(c.mean_diff));

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            const SweepCell& c = result.cells[static_cast<std::size_t>(i) * nb + j];
            out += "<rect x=\"" + num(margin + j * cell) + "\" y=\"" +
                   num(margin + i * cell) + "\" width=\"" + num(cell) +
                   "\" height=\"" + num(cell) + "\" fill=\"" +
                   diverging_color(c.mean_diff, scale) +
                   "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
        }
    }
    for (int j = 0; j < nb; ++j)
        out += "<text x=\"" + num(margin + (j + 0.5) * cell) + "\" y=\"" +
               num(margin - 8.0) +
               "\" font-size=\"9\" text-anchor=\"middle\">" +
               num(result.config.grid_b[j]) + "</text>\n";
    for (int i = 0; i < na; ++i)
        out += "<text x=\"" + num(margin - 8.0) + "\" y=\"" +
               num(margin + (i + 0.6) * cell) +
               "\" font-size=\"9\" text-anchor=\"end\">" +
               num(result.config.grid_a[i]) + "</text>\n";
    out += "<text x=\"" + num(margin) + "\" y=\"16\" font-size=\"11\">mean(L_PCA - L_SSL), scale " +
           num(scale) + "</text>\n";
    out += "</svg>\n";
    return out;
}

std::string svg_kde_overlay(
    const std::vector<std::pair<std::string, const KdeCurve*>>& curves,
    const std::vector<std::string>& colors) {
    const double width = 520.0, height = 320.0, margin = 40.0;
    double lo = 0.0, hi = 1.0, peak = 0.0;
    bool first = true;
    for (const auto& [label, curve] : curves) {
        if (curve->eval_points.size() == 0) continue;
        const double clo = curve->eval_points[0];
        const double chi = curve->eval_points[curve->eval_points.size() - 1];
        lo = first ? clo : std::min(lo, clo);
        hi = first ? chi : std::max(hi, chi);
        peak = std::max(peak, curve->densities.maxCoeff());
        first = false;
    }
    if (peak <= 0.0) peak = 1.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<line x1=\"" + num(margin) + "\" y1=\"" + num(height - margin) +
           "\" x2=\"" + num(width - margin) + "\" y2=\"" + num(height - margin) +
           "\" stroke=\"black\"/>\n";
    auto sx = [&](double x) {
        return margin + (x - lo) / (hi - lo) * (width - 2 * margin);
    };
    auto sy = [&](double y) {
        return height - margin - y / peak * (height - 2 * margin);
    };
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const KdeCurve* curve = curves[c].second;
        std::string pts;
        for (int i = 0; i < curve->eval_points.size(); ++i) {
            pts += num(sx(curve->eval_points[i])) + "," + num(sy(curve->densities[i]));
            if (i + 1 < curve->eval_points.size()) pts += " ";
        }
        const std::string& color = colors[c % colors.size()];
        out += "<polyline fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        out += "<text x=\"" + num(width - margin + 4.0) + "\" y=\"" +
               num(margin + 14.0 * static_cast<double>(c)) + "\" font-size=\"10\" fill=\"" +
               color + "\" text-anchor=\"end\">" + curves[c].first + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace genlab
