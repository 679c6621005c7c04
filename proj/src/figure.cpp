#include "oestylo/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "oestylo/error.hpp"
#include "oestylo/stats.hpp"

namespace oestylo::figure {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr const char* kFont = "Helvetica, Arial, sans-serif";

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string tick_label(double v) {
    char buf[32];
    if (std::fabs(v - std::round(v)) < 1e-9) std::snprintf(buf, sizeof buf, "%.0f", v);
    else std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 25 distinguishable colours, fixed.
const std::vector<std::string>& palette() {
    static const std::vector<std::string> colours = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
        "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7",
        "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173"};
    return colours;
}

const std::string& colour(std::size_t i) { return palette()[i % palette().size()]; }

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> ticks;
};

Axis nice_axis(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    Axis a;
    a.lo = std::floor(lo / step) * step;
    a.hi = std::ceil(hi / step) * step;
    for (double t = a.lo; t <= a.hi + step * 1e-9; t += step) a.ticks.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
    return a;
}

class Canvas {
public:
    Canvas(double w, double h) : w_(w), h_(h) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
        body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
                 "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
                 "\" fill=\"" + fill + "\"/>\n";
    }
    void circle(double x, double y, double r, const std::string& fill) {
        body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"/>\n";
    }
    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill) {
        body_ += "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += ' ';
            body_ += num(pts[i].first) + "," + num(pts[i].second);
        }
        body_ += "\" fill=\"" + fill + "\" stroke=\"none\"/>\n";
    }
    void text(double x, double y, const std::string& s, const char* anchor = "middle", double size = 12.0,
              const std::string& extra = {}) {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"" + kFont + "\" font-size=\"" +
                 num(size) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape(s) + "</text>\n";
    }
    void raw(const std::string& s) { body_ += s; }

    std::string finish() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
               num(w_) + "\" height=\"" + num(h_) + "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\">\n" +
               "<rect x=\"0\" y=\"0\" width=\"" + num(w_) + "\" height=\"" + num(h_) + "\" fill=\"#ffffff\"/>\n" +
               body_ + "</svg>\n";
    }

private:
    double w_;
    double h_;
    std::string body_;
};

struct Frame {
    Axis x, y;
    double left = kLeft, right = kWidth - kRight, top = kTop, bottom = kHeight - kBottom;

    double px(double v) const { return left + (v - x.lo) / (x.hi - x.lo) * (right - left); }
    double py(double v) const { return bottom - (v - y.lo) / (y.hi - y.lo) * (bottom - top); }
};

void draw_axes(Canvas& c, const Frame& f, const FigureSpec& spec) {
    c.line(f.left, f.bottom, f.right, f.bottom, "#000000");
    c.line(f.left, f.top, f.left, f.bottom, "#000000");
    for (double t : f.x.ticks) {
        c.line(f.px(t), f.bottom, f.px(t), f.bottom + 5, "#000000");
        c.text(f.px(t), f.bottom + 18, tick_label(t));
    }
    for (double t : f.y.ticks) {
        c.line(f.left - 5, f.py(t), f.left, f.py(t), "#000000");
        c.text(f.left - 8, f.py(t) + 4, tick_label(t), "end");
    }
    c.text((f.left + f.right) / 2, kHeight - 15, spec.x_label);
    c.text(20, (f.top + f.bottom) / 2, spec.y_label, "middle", 12.0,
           " transform=\"rotate(-90 20 " + num((f.top + f.bottom) / 2) + ")\"");
    c.text(kWidth / 2, 28, spec.title, "middle", 15.0);
    for (const auto& m : spec.markers) {
        if (m.x < f.x.lo || m.x > f.x.hi) continue;
        c.line(f.px(m.x), f.top, f.px(m.x), f.bottom, "#000000", 1.5);
        if (!m.label.empty()) c.text(f.px(m.x) + 4, f.top + 12, m.label, "start", 11.0);
    }
}

void legend(Canvas& c, const std::vector<std::string>& labels) {
    const double x = kWidth - kRight + 20;
    double y = kTop;
    const double step = std::min(18.0, (kHeight - kTop - kBottom) / std::max<std::size_t>(labels.size(), 1));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        c.rect(x, y, 10, std::max(6.0, step - 6), colour(i));
        c.text(x + 16, y + std::max(6.0, step - 6), labels[i], "start", std::min(11.0, step - 2));
        y += step;
    }
}

std::string render_scatter(const FigureSpec& spec) {
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    Frame f;
    f.x = nice_axis(xlo, xhi);
    f.y = nice_axis(ylo, yhi);
    Canvas c(kWidth, kHeight);
    draw_axes(c, f, spec);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        labels.push_back(s.label);
        for (const auto& [x, y] : s.points) c.circle(f.px(x), f.py(y), 1.6, colour(i));
        if (s.points.size() < 2) continue;
        std::vector<double> xs, ys;
        for (const auto& [x, y] : s.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
        const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
        if (*mn == *mx) continue;
        const auto fit = stats::ols_fit(xs, ys);
        c.line(f.px(*mn), f.py(fit.intercept + fit.slope * *mn), f.px(*mx), f.py(fit.intercept + fit.slope * *mx),
               "#000000", 1.2);
    }
    legend(c, labels);
    return c.finish();
}

std::string render_stacked(const FigureSpec& spec) {
    const auto& first = spec.series.front().points;
    for (const auto& s : spec.series) {
        if (s.points.size() != first.size()) throw Error("stacked area series differ in length");
        for (std::size_t i = 0; i < first.size(); ++i) {
            if (s.points[i].first != first[i].first) throw Error("stacked area series have different x values");
        }
    }
    if (first.empty()) throw Error("nothing to plot");
    Frame f;
    f.x = nice_axis(first.front().first, first.back().first);
    f.x.lo = first.front().first;
    f.x.hi = first.back().first > first.front().first ? first.back().first : first.front().first + 1.0;
    f.x.ticks.erase(std::remove_if(f.x.ticks.begin(), f.x.ticks.end(),
                                   [&](double t) { return t < f.x.lo || t > f.x.hi; }),
                    f.x.ticks.end());
    f.y.lo = 0.0;
    f.y.hi = 1.0;
    f.y.ticks = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    Canvas c(kWidth, kHeight);
    std::vector<double> lower(first.size(), 0.0);
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        labels.push_back(spec.series[s].label);
        std::vector<double> upper(first.size());
        for (std::size_t i = 0; i < first.size(); ++i) upper[i] = lower[i] + spec.series[s].points[i].second;
        std::vector<std::pair<double, double>> poly;
        if (first.size() == 1) {
            poly = {{f.left, f.py(upper[0])}, {f.right, f.py(upper[0])}, {f.right, f.py(lower[0])},
                    {f.left, f.py(lower[0])}};
        } else {
            for (std::size_t i = 0; i < first.size(); ++i) poly.emplace_back(f.px(first[i].first), f.py(upper[i]));
            for (std::size_t i = first.size(); i-- > 0;) poly.emplace_back(f.px(first[i].first), f.py(lower[i]));
        }
        c.polygon(poly, colour(s));
        lower = std::move(upper);
    }
    draw_axes(c, f, spec);
    legend(c, labels);
    return c.finish();
}

std::string render_dendrogram(const FigureSpec& spec) {
    const Tree& tree = *spec.tree;
    const int n = static_cast<int>(tree.leaves.size());
    if (n == 0) throw Error("nothing to plot");
    if (static_cast<int>(tree.merges.size()) != n - 1) throw Error("dendrogram must have leaves - 1 merges");
    const double row = 14.0;
    const double height = std::max(kHeight, kTop + kBottom + row * n);
    const double label_width = 220.0;
    const double left = label_width + 10.0;
    const double right = kWidth - 40.0;
    double max_h = 0.0;
    for (const auto& m : tree.merges) max_h = std::max(max_h, m.height);
    if (max_h <= 0.0) max_h = 1.0;
    const Axis hx = nice_axis(0.0, max_h);
    auto px = [&](double h) { return left + h / hx.hi * (right - left); };

    // Leaf order: depth-first from the root, node_a before node_b.
    std::vector<double> ypos(static_cast<std::size_t>(2 * n - 1), 0.0);
    std::vector<double> xpos(static_cast<std::size_t>(2 * n - 1), 0.0);
    std::vector<int> order;
    std::vector<int> stack{2 * n - 2};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v < n) {
            order.push_back(v);
            continue;
        }
        const auto& m = tree.merges[static_cast<std::size_t>(v - n)];
        stack.push_back(m.node_b);
        stack.push_back(m.node_a);
    }
    Canvas c(kWidth, height);
    c.text(kWidth / 2, 28, spec.title, "middle", 15.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int leaf = order[i];
        const double y = kTop + row * (static_cast<double>(i) + 0.5);
        ypos[static_cast<std::size_t>(leaf)] = y;
        xpos[static_cast<std::size_t>(leaf)] = px(0.0);
        const auto& label = tree.leaves[static_cast<std::size_t>(leaf)];
        std::string content = escape(label.base);
        for (const auto& [part, count] : label.parts) {
            content += " " + escape(part) + "<tspan baseline-shift=\"sub\" font-size=\"7.00\">" +
                       std::to_string(count) + "</tspan>";
        }
        c.raw("<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 3.5) + "\" font-family=\"" + kFont +
              "\" font-size=\"10.00\" text-anchor=\"end\">" + content + "</text>\n");
    }
    for (std::size_t i = 0; i < tree.merges.size(); ++i) {
        const auto& m = tree.merges[i];
        const auto a = static_cast<std::size_t>(m.node_a);
        const auto b = static_cast<std::size_t>(m.node_b);
        const double x = px(m.height);
        c.line(xpos[a], ypos[a], x, ypos[a], "#000000");
        c.line(xpos[b], ypos[b], x, ypos[b], "#000000");
        c.line(x, ypos[a], x, ypos[b], "#000000");
        const auto node = static_cast<std::size_t>(n) + i;
        xpos[node] = x;
        ypos[node] = 0.5 * (ypos[a] + ypos[b]);
    }
    const double axis_y = height - kBottom + 10;
    c.line(left, axis_y, right, axis_y, "#000000");
    for (double t : hx.ticks) {
        c.line(px(t), axis_y, px(t), axis_y + 5, "#000000");
        c.text(px(t), axis_y + 18, tick_label(t));
    }
    c.text((left + right) / 2, axis_y + 38, spec.x_label);
    return c.finish();
}

std::string render_sweep(const FigureSpec& spec) {
    const Grid& g = *spec.grid;
    if (g.rows.empty() || g.columns.empty()) throw Error("nothing to plot");
    if (g.cells.size() != g.rows.size()) throw Error("sweep grid row count mismatch");
    const double cell_h = 9.0;
    const double label_w = 110.0;
    const double cell_w = std::max(4.0, (kWidth - label_w - 40.0) / static_cast<double>(g.columns.size()));
    const double height = kTop + kBottom + 70 + cell_h * static_cast<double>(g.rows.size());
    const double width = label_w + 40.0 + cell_w * static_cast<double>(g.columns.size());
    Canvas c(width, height);
    c.text(width / 2, 28, spec.title, "middle", 15.0);
    static const char* kCellColours[] = {"#1f77b4", "#ff7f0e"};
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
        if (g.cells[r].size() != g.columns.size()) throw Error("sweep grid column count mismatch");
        const double y = kTop + cell_h * static_cast<double>(r);
        c.text(label_w - 6, y + cell_h - 1.5, g.rows[r], "end", 8.0);
        for (std::size_t col = 0; col < g.columns.size(); ++col) {
            const int v = g.cells[r][col];
            const std::string fill = v == 0 || v == 1 ? kCellColours[v] : "#dddddd";
            c.rect(label_w + cell_w * static_cast<double>(col), y, cell_w, cell_h, fill);
        }
    }
    const double base = kTop + cell_h * static_cast<double>(g.rows.size()) + 6;
    for (std::size_t col = 0; col < g.columns.size(); ++col) {
        const double x = label_w + cell_w * (static_cast<double>(col) + 0.5);
        c.text(x, base + 4, g.columns[col], "end", 7.0,
               " transform=\"rotate(-60 " + num(x) + " " + num(base + 4) + ")\"");
    }
    c.text(width / 2, height - 12, spec.x_label);
    return c.finish();
}

}  // namespace

std::string render_figure(const FigureSpec& spec) {
    switch (spec.kind) {
        case Kind::ScatterFit:
        case Kind::StackedArea: {
            const bool any = std::any_of(spec.series.begin(), spec.series.end(),
                                         [](const Series& s) { return !s.points.empty(); });
            if (!any) throw Error("nothing to plot");
            return spec.kind == Kind::ScatterFit ? render_scatter(spec) : render_stacked(spec);
        }
        case Kind::Dendrogram:
            if (!spec.tree) throw Error("nothing to plot");
            return render_dendrogram(spec);
        case Kind::SweepStrip:
            if (!spec.grid) throw Error("nothing to plot");
            return render_sweep(spec);
    }
    throw Error("unknown figure kind");
}

}  // namespace oestylo::figure
