#pragma once

#include <vector>

#include "step_graphon.hpp"

namespace gldp {

// A step graphon whose parts carry colors in {0, ..., k-1} (the measurable
// k-coloring of [0,1] is the union of same-colored parts).
class ColoredStepGraphon {
public:
    ColoredStepGraphon(StepGraphon g, std::vector<int> colors, int k);

    const StepGraphon& graphon() const { return g_; }
    const std::vector<int>& colors() const { return colors_; }
    int k() const { return k_; }
    int color(std::size_t part) const { return colors_[part]; }

    ColoredStepGraphon permuted(const std::vector<int>& perm) const;

private:
    StepGraphon g_;
    std::vector<int> colors_;
    int k_;
};

// Exact colored cut norm d^(k): sup over subset pairs of the per-colorpair
// kernel discrepancies plus the total color-class symmetric difference.
double colored_cut_norm(const ColoredStepGraphon& x, const ColoredStepGraphon& y);

// Min of colored_cut_norm over part permutations of y; requires equal-measure
// aligned part systems, m <= 8.
double colored_cut_dist_labeled(const ColoredStepGraphon& x, const ColoredStepGraphon& y);

} // namespace gldp
