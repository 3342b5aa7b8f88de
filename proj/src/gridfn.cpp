#include "wco/gridfn.hpp"

#include <cmath>

#include "wco/errors.hpp"

namespace wco {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_dims(const GridFunction& a, const GridFunction& b) {
    if (a.dim != b.dim) throw UsageError("grid functions have different dimensions");
}

void check_point(const GridFunction& f, const std::vector<double>& x) {
    if (static_cast<long>(x.size()) != f.dim) {
        throw UsageError("evaluation point has the wrong dimension");
    }
}
}  // namespace

GridFunction GridFunction::constant(Cplx c, long dim) {
    GridFunction f;
    f.dim = dim;
    f.expr = [c](const std::vector<double>&) { return c; };
    return f;
}

GridFunction GridFunction::harmonic(long m, long dim, long coord) {
    if (coord < 0 || coord >= dim) throw UsageError("harmonic coordinate out of range");
    GridFunction f;
    f.dim = dim;
    f.expr = [m, coord](const std::vector<double>& x) {
        double phase = kTwoPi * static_cast<double>(m) * x[static_cast<size_t>(coord)];
        return Cplx(std::cos(phase), std::sin(phase));
    };
    return f;
}

GridFunction GridFunction::indicator(double lo, double hi, long dim, long coord) {
    if (coord < 0 || coord >= dim) throw UsageError("indicator coordinate out of range");
    if (!(lo <= hi)) throw UsageError("indicator needs lo <= hi");
    GridFunction f;
    f.dim = dim;
    f.expr = [lo, hi, coord](const std::vector<double>& x) {
        double xc = x[static_cast<size_t>(coord)];
        return Cplx(lo <= xc && xc < hi ? 1.0 : 0.0, 0.0);
    };
    return f;
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
    check_dims(*this, other);
    GridFunction f;
    f.dim = dim;
    f.p = p;
    auto a = expr, b = other.expr;
    f.expr = [a, b](const std::vector<double>& x) { return a(x) + b(x); };
    return f;
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
    check_dims(*this, other);
    GridFunction f;
    f.dim = dim;
    f.p = p;
    auto a = expr, b = other.expr;
    f.expr = [a, b](const std::vector<double>& x) { return a(x) - b(x); };
    return f;
}

GridFunction GridFunction::operator*(const GridFunction& other) const {
    check_dims(*this, other);
    GridFunction f;
    f.dim = dim;
    f.p = p;
    auto a = expr, b = other.expr;
    f.expr = [a, b](const std::vector<double>& x) { return a(x) * b(x); };
    return f;
}

GridFunction GridFunction::scaled(Cplx c) const {
    GridFunction f;
    f.dim = dim;
    f.p = p;
    auto a = expr;
    f.expr = [a, c](const std::vector<double>& x) { return c * a(x); };
    return f;
}

GridFunction GridFunction::masked(std::function<bool(const std::vector<double>&)> keep) const {
    GridFunction f;
    f.dim = dim;
    f.p = p;
    auto a = expr;
    f.expr = [a, keep](const std::vector<double>& x) {
        return keep(x) ? a(x) : Cplx(0.0, 0.0);
    };
    return f;
}

Cplx GridFunction::eval(const std::vector<double>& x) const {
    check_point(*this, x);
    return expr(x);
}

Cplx GridFunction::eval(double x) const { return eval(std::vector<double>{x}); }

std::vector<std::vector<double>> grid_nodes(long G, long dim) {
    if (G < 1) throw UsageError("grid needs G >= 1");
    if (dim < 1) throw UsageError("grid needs dim >= 1");
    double total_d = std::pow(static_cast<double>(G), static_cast<double>(dim));
    if (total_d > 5e7) throw UsageError("grid too large");
    long total = 1;
    for (long c = 0; c < dim; ++c) total *= G;
    std::vector<std::vector<double>> nodes(static_cast<size_t>(total),
                                           std::vector<double>(static_cast<size_t>(dim)));
    for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (long c = dim - 1; c >= 0; --c) {
            long j = rem % G;
            rem /= G;
            nodes[static_cast<size_t>(idx)][static_cast<size_t>(c)] =
                (static_cast<double>(j) + 0.5) / static_cast<double>(G);
        }
    }
    return nodes;
}

std::vector<Cplx> grid_samples(const GridFunction& f, long G) {
    if (!f.expr) throw UsageError("grid function has no expression");
    auto nodes = grid_nodes(G, f.dim);
    std::vector<Cplx> out;
    out.reserve(nodes.size());
    for (const auto& x : nodes) out.push_back(f.expr(x));
    return out;
}

double norm_of_samples(const std::vector<Cplx>& samples, double p) {
    return norm_of_samples_masked(samples, p, {});
}

double norm_of_samples_masked(const std::vector<Cplx>& samples, double p,
                              const std::vector<char>& mask) {
    if (!(p >= 1.0)) throw UsageError("norm exponent must be >= 1");
    if (!mask.empty() && mask.size() != samples.size()) {
        throw UsageError("mask size does not match sample count");
    }
    if (samples.empty()) throw EmptySequence("no samples");
    if (std::isinf(p)) {
        double best = 0.0;
        for (size_t i = 0; i < samples.size(); ++i) {
            if (!mask.empty() && !mask[i]) continue;
            best = std::max(best, std::abs(samples[i]));
        }
        return best;
    }
    double acc = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        acc += std::pow(std::abs(samples[i]), p);
    }
    return std::pow(acc / static_cast<double>(samples.size()), 1.0 / p);
}

double grid_norm(const GridFunction& f, long G) { return grid_norm(f, G, f.p); }

double grid_norm(const GridFunction& f, long G, double p) {
    return norm_of_samples(grid_samples(f, G), p);
}

}  // namespace wco
