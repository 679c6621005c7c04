#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oestylo::figure {

enum class Kind { ScatterFit, StackedArea, Dendrogram, SweepStrip };

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Vertical marker, e.g. a split line.
struct Marker {
    double x = 0.0;
    std::string label;
};

// Leaf caption: a base name followed by part letters with line-count
// subscripts ("beowulf A₁₅₀B₁₅₀").
struct LeafLabel {
    std::string base;
    std::vector<std::pair<std::string, int>> parts;
};

struct TreeMerge {
    int node_a = 0;
    int node_b = 0;
    double height = 0.0;
};

struct Tree {
    std::vector<LeafLabel> leaves;
    std::vector<TreeMerge> merges;  // node ids as in ngram::Dendrogram
};

// Rows x columns of categorical cells; -1 marks an absent cell.
struct Grid {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<int>> cells;
};

struct FigureSpec {
    Kind kind = Kind::ScatterFit;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Marker> markers;
    std::optional<Tree> tree;
    std::optional<Grid> grid;
};

// Deterministic SVG 1.1 document. Throws oestylo::Error("nothing to plot")
// on empty input.
std::string render_figure(const FigureSpec& spec);

}  // namespace oestylo::figure
