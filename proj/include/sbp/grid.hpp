#pragma once

#include <vector>

namespace sbp {

// Node distribution with two stretched cells at each end. On [0,1]:
// 0, d1 h, d h, (d+1) h, ..., 1 - d h, 1 - d1 h, 1 with d = d1 + d2.
struct Grid1D {
    std::vector<double> nodes;
    double h = 0.0;     // interior spacing on [x_l, x_r]
    double d1 = 1.0;
    double d2 = 1.0;
    double x_l = 0.0;
    double x_r = 1.0;

    int size() const { return static_cast<int>(nodes.size()); }
};

// Interior spacing of the reference grid on [0,1].
double reference_spacing(int m, double d1, double d2);

Grid1D build_grid(int m, double d1, double d2, double x_l = 0.0, double x_r = 1.0);

} // namespace sbp
