#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace wco {

using Cplx = std::complex<double>;

// A function on [0,1]^d given in expression form (evaluable at arbitrary
// points) together with the norm exponent used when measuring it on a grid.
// Expressions compose: sums, pointwise products, scalar multiples, and
// node-wise masks all yield new expressions, so a value like T^n f can be
// wrapped back into a GridFunction and evaluated exactly where needed.
struct GridFunction {
    long dim = 1;
    double p = 2.0;  // norm exponent in [1, inf]
    std::function<Cplx(const std::vector<double>&)> expr;

    static GridFunction constant(Cplx c, long dim = 1);
    // e^{2 pi i m x_coord}
    static GridFunction harmonic(long m, long dim = 1, long coord = 0);
    // indicator of the half-open box slab lo <= x_coord < hi
    static GridFunction indicator(double lo, double hi, long dim = 1, long coord = 0);

    GridFunction operator+(const GridFunction& other) const;
    GridFunction operator-(const GridFunction& other) const;
    GridFunction operator*(const GridFunction& other) const;  // pointwise
    GridFunction scaled(Cplx c) const;
    // zeroes the function where keep(x) is false
    GridFunction masked(std::function<bool(const std::vector<double>&)> keep) const;

    Cplx eval(const std::vector<double>& x) const;
    Cplx eval(double x) const;  // one-dimensional shortcut
};

// Midpoint grid: the G^dim tensor nodes ((j_1+1/2)/G, ..., (j_d+1/2)/G) in
// row-major order (last coordinate fastest).  Midpoints keep nodes away from
// 0, 1 and from dyadic interval endpoints.
std::vector<std::vector<double>> grid_nodes(long G, long dim);

// Expression values at the grid nodes, same order as grid_nodes.
std::vector<Cplx> grid_samples(const GridFunction& f, long G);

// L^p norm of sampled values under the normalized counting measure:
// (mean |f|^p)^{1/p}, or max |f| for p = inf.
double norm_of_samples(const std::vector<Cplx>& samples, double p);

// Same restricted to nodes with mask != 0; masked-out nodes contribute 0
// (restriction, not conditioning: the divisor stays the full node count).
double norm_of_samples_masked(const std::vector<Cplx>& samples, double p,
                              const std::vector<char>& mask);

double grid_norm(const GridFunction& f, long G);  // uses f.p
double grid_norm(const GridFunction& f, long G, double p);

}  // namespace wco
