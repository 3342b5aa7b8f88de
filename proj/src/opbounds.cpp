#include "wco/opbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wco/errors.hpp"
#include "wco/orbit.hpp"

namespace wco {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_normalized(const WeightP& v) {
    if (std::fabs(spectral_radius(v).r - 1.0) > 1e-9) {
        throw UsageError("bound scans require a normalized weight (spectral radius 1)");
    }
}

void check_map_matches(const WeightP& v, const ErgodicMap& map) {
    if (v.dimension() != map.dimension()) {
        throw UsageError("weight and map have different dimensions");
    }
}

// sum over all factors of s_i (X_i + X_i'); equals ln C for a normalized
// weight and drives the n-linear term of ln U / ln L.
double log_c_sum(const WeightP& v) {
    double acc = 0.0;
    for (const auto& factors : v.coords) {
        for (const auto& fac : factors) {
            auto xx = root_contribution(fac.x0);
            acc += fac.s * (xx.first + xx.second);
        }
    }
    return acc;
}

double total_power_sum(const WeightP& v) {
    double acc = 0.0;
    for (long c = 0; c < v.dimension(); ++c) acc += v.power_sum(c);
    return acc;
}

std::vector<RotationOrbit> orbits_for(const ErgodicMap& map, unsigned bits) {
    if (map.dimension() < 1) throw UsageError("map needs at least one coordinate");
    std::vector<RotationOrbit> orbits;
    orbits.reserve(static_cast<size_t>(map.dimension()));
    for (const auto& a : map.alphas) orbits.emplace_back(a, bits);
    return orbits;
}

// Per-step log magnitudes sum_i s_i ln|pt - x_i| for one coordinate's orbit
// slice; an exact hit yields -inf for that step.
void accumulate_logs(const std::vector<double>& pts, const std::vector<WeightFactor>& factors,
                     std::vector<double>* step_logs) {
    for (size_t j = 0; j < pts.size(); ++j) {
        double acc = 0.0;
        for (const auto& fac : factors) {
            double d = std::fabs(pts[j] - fac.x0);
            acc += d == 0.0 ? -kInf : fac.s * std::log(d);
        }
        (*step_logs)[j] += acc;
    }
}

std::vector<long> sorted_distinct(const std::vector<long>& n_list) {
    std::vector<long> ns = n_list;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
}

}  // namespace

ErgodicMap ErgodicMap::rotation(IrrationalSpec a) {
    ErgodicMap m;
    m.alphas.push_back(std::move(a));
    return m;
}

ErgodicMap ErgodicMap::product(std::vector<IrrationalSpec> as) {
    if (as.empty()) throw UsageError("product map needs at least one angle");
    ErgodicMap m;
    m.alphas = std::move(as);
    return m;
}

std::vector<double> ErgodicMap::power(const std::vector<double>& x, long k, unsigned bits) const {
    if (static_cast<long>(x.size()) != dimension()) {
        throw UsageError("point has the wrong dimension");
    }
    std::vector<double> out(x.size());
    for (size_t c = 0; c < x.size(); ++c) {
        RotationOrbit orbit(alphas[c], bits);
        out[c] = orbit.point_fixed(x[c], k).to_double();
    }
    return out;
}

BeurlingWeightFn::BeurlingWeightFn(double eps) : epsilon(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw UsageError("epsilon must be positive");
}

double BeurlingWeightFn::w(double n) const {
    if (n < 0.0) throw UsageError("w is defined for n >= 0");
    if (n == 0.0) return 0.0;
    return n / std::pow(std::log(std::exp(1.0) + n), 1.0 + epsilon / 4.0);
}

double BeurlingWeightFn::wtilde(double n) const {
    if (n < 0.0) throw UsageError("wtilde is defined for n >= 0");
    if (n == 0.0) return 0.0;
    return 15.0 * n / std::pow(std::log(std::exp(1.0) + n), 1.0 + epsilon / 2.0);
}

double BeurlingWeightFn::log_C(double n, double t) const {
    if (!(t > 0.0 && t < 1.0)) throw UsageError("t must lie in (0,1)");
    return -0.2 * wtilde(n) * std::log(t);
}

double BeurlingWeightFn::summability_tail(double N) const {
    if (!(N >= 1.0)) throw UsageError("tail bound needs N >= 1");
    // sum_{n>N} w(n)/n^2 <= (1 + e/N) int_N^inf dx / ((e+x) ln^{1+eps/4}(e+x))
    return (1.0 + std::exp(1.0) / N) * (4.0 / epsilon) *
           std::pow(std::log(std::exp(1.0) + N), -epsilon / 4.0);
}

double w_over_n2_partial(const BeurlingWeightFn& wf, long N) {
    if (N < 1) throw UsageError("partial sum needs N >= 1");
    double acc = 0.0;
    for (long n = 1; n <= N; ++n) {
        double nd = static_cast<double>(n);
        acc += wf.w(nd) / (nd * nd);
    }
    return acc;
}

namespace {
template <class F>
double simpson_rec(F f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}
}  // namespace

double w_over_n2_integral(const BeurlingWeightFn& wf, double a, double b, double tol) {
    if (!(a >= 0.5 && b > a)) throw UsageError("integral needs 0.5 <= a < b");
    auto f = [&wf](double x) { return wf.w(x) / (x * x); };
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 52);
}

ExceptionalSet ExceptionalSet::one_dim(double t, std::vector<double> zeros) {
    ExceptionalSet e;
    e.t = t;
    e.zeros.push_back(std::move(zeros));
    if (!(t > 0.0 && t < 1.0)) throw UsageError("t must lie in (0,1)");
    return e;
}

ExceptionalSet ExceptionalSet::from_weight(double t, const WeightP& v) {
    validate_weight(v);
    if (!(t > 0.0 && t < 1.0)) throw UsageError("t must lie in (0,1)");
    ExceptionalSet e;
    e.t = t;
    for (const auto& factors : v.coords) {
        std::vector<double> zs;
        for (const auto& fac : factors) zs.push_back(fac.x0);
        e.zeros.push_back(std::move(zs));
    }
    return e;
}

long ExceptionalSet::zero_count() const {
    long total = 0;
    for (const auto& zs : zeros) total += static_cast<long>(zs.size());
    return total;
}

double ExceptionalSet::measure_lower_bound() const {
    const double pi = 3.14159265358979323846;
    return 1.0 - static_cast<double>(zero_count()) * t * pi * pi / 3.0;
}

namespace {
// Shared backward-orbit walk: threshold(k) gives the clearance required at
// depth k (t/n^3 for the fixed-depth set, t/k^3 for the intersection).
template <class Threshold>
bool backward_clearance(const ExceptionalSet& set, const ErgodicMap& map,
                        const std::vector<double>& x, long depth, unsigned bits,
                        Threshold threshold) {
    if (static_cast<long>(x.size()) != map.dimension()) {
        throw UsageError("point has the wrong dimension");
    }
    if (set.zeros.size() != static_cast<size_t>(map.dimension())) {
        throw UsageError("exceptional set and map have different dimensions");
    }
    if (depth < 1) throw UsageError("membership depth must be >= 1");
    for (size_t c = 0; c < x.size(); ++c) {
        if (set.zeros[c].empty()) continue;
        RotationOrbit orbit(map.alphas[c], bits);
        std::vector<double> pts = orbit.points(x[c], -depth, -1);  // k = depth .. 1
        for (long j = 0; j < depth; ++j) {
            long k = depth - j;
            double need = threshold(k);
            for (double z : set.zeros[c]) {
                if (std::fabs(pts[static_cast<size_t>(j)] - z) < need) return false;
            }
        }
    }
    return true;
}
}  // namespace

bool ExceptionalSet::member(const ErgodicMap& map, const std::vector<double>& x, long n,
                            unsigned bits) const {
    double tn = t / (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n));
    return backward_clearance(*this, map, x, n, bits, [tn](long) { return tn; });
}

bool ExceptionalSet::member_all(const ErgodicMap& map, const std::vector<double>& x, long n_max,
                                unsigned bits) const {
    double tt = t;
    return backward_clearance(*this, map, x, n_max, bits, [tt](long k) {
        double kd = static_cast<double>(k);
        return tt / (kd * kd * kd);
    });
}

unsigned required_backward_bits(long n_max, double t) {
    if (n_max < 1 || !(t > 0.0 && t < 1.0)) throw UsageError("invalid backward-orbit parameters");
    double need = 3.0 * std::log2(static_cast<double>(n_max)) + std::log2(1.0 / t) + 64.0;
    return static_cast<unsigned>(std::ceil(need));
}

Cplx apply_power(const WeightP& v, const ErgodicMap& map, long n, const GridFunction& f,
                 const std::vector<double>& x, unsigned bits) {
    validate_weight(v);
    check_map_matches(v, map);
    if (f.dim != v.dimension()) throw UsageError("function has the wrong dimension");
    if (static_cast<long>(x.size()) != v.dimension()) {
        throw UsageError("point has the wrong dimension");
    }
    std::vector<RotationOrbit> orbits = orbits_for(map, bits);

    // f evaluated at tau^n(x)
    std::vector<double> xn(x.size());
    for (size_t c = 0; c < x.size(); ++c) xn[c] = orbits[c].point_fixed(x[c], n).to_double();
    Cplx fval = f.eval(xn);
    if (n == 0) return fval;

    long m = std::labs(n);
    double log_mag = static_cast<double>(m) * std::log(v.C);
    double sign = 1.0;
    bool hit_zero = false;
    for (size_t c = 0; c < x.size(); ++c) {
        std::vector<double> pts = n > 0 ? orbits[c].points(x[c], 0, n - 1)
                                        : orbits[c].points(x[c], n, -1);
        for (double pt : pts) {
            for (const auto& fac : v.coords[c]) {
                double d = pt - fac.x0;
                if (!fac.absolute && d < 0.0) {
                    if (fac.s != std::floor(fac.s)) {
                        throw DomainError(
                            "signed factor with non-integer exponent evaluated left of its root");
                    }
                    if (std::fmod(fac.s, 2.0) == 1.0) sign = -sign;
                }
                double ad = std::fabs(d);
                if (ad == 0.0) {
                    hit_zero = true;
                } else {
                    log_mag += fac.s * std::log(ad);
                }
            }
        }
    }
    if (hit_zero) {
        if (n < 0) throw DivisionAtZero("backward orbit lands on a root of the weight");
        return Cplx(0.0, 0.0);  // forward product vanishes
    }
    double mag = std::exp(n > 0 ? log_mag : -log_mag);
    return fval * sign * mag;
}

std::vector<PowerBoundReport> forward_bound_scan(const WeightP& v, const ErgodicMap& map,
                                                 const BeurlingWeightFn& wf,
                                                 const std::vector<long>& n_list,
                                                 const std::vector<std::vector<double>>& x_grid,
                                                 unsigned bits) {
    validate_weight(v);
    check_normalized(v);
    check_map_matches(v, map);
    if (n_list.empty()) throw UsageError("empty n list");
    for (long n : n_list) {
        if (n < 1) throw UsageError("forward scan needs n >= 1");
    }
    std::vector<long> ns = sorted_distinct(n_list);
    long n_max = ns.back();
    double lnC = log_c_sum(v);
    double S = total_power_sum(v);
    std::vector<RotationOrbit> orbits = orbits_for(map, bits);

    std::vector<PowerBoundReport> reports;
    for (const auto& x : x_grid) {
        if (static_cast<long>(x.size()) != v.dimension()) {
            throw UsageError("grid point has the wrong dimension");
        }
        // one pass over the orbit, recording the cumulative log at each n
        std::vector<double> step_logs(static_cast<size_t>(n_max), 0.0);
        for (size_t c = 0; c < x.size(); ++c) {
            std::vector<double> pts = orbits[c].points(x[c], 0, n_max - 1);
            accumulate_logs(pts, v.coords[c], &step_logs);
        }
        std::vector<double> at_n(ns.size());
        double cum = 0.0;
        size_t next = 0;
        for (long k = 0; k < n_max; ++k) {
            cum += step_logs[static_cast<size_t>(k)];
            if (next < ns.size() && k + 1 == ns[next]) at_n[next++] = cum;
        }
        for (long n : n_list) {
            size_t idx = static_cast<size_t>(
                std::lower_bound(ns.begin(), ns.end(), n) - ns.begin());
            PowerBoundReport rep;
            rep.n = n;
            rep.forward = true;
            rep.value = at_n[idx] + static_cast<double>(n) * lnC;
            rep.bound = S * wf.wtilde(static_cast<double>(n));
            rep.x = x;
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

std::vector<PowerBoundReport> backward_bound_scan(const WeightP& v, const ErgodicMap& map,
                                                  const BeurlingWeightFn& wf,
                                                  const std::vector<long>& n_list, double t,
                                                  const std::vector<std::vector<double>>& x_grid,
                                                  unsigned bits) {
    validate_weight(v);
    check_normalized(v);
    check_map_matches(v, map);
    if (n_list.empty()) throw UsageError("empty n list");
    for (long n : n_list) {
        if (n < 1) throw UsageError("backward scan needs n >= 1");
    }
    if (!(t > 0.0 && t < 1.0)) throw UsageError("t must lie in (0,1)");
    std::vector<long> ns = sorted_distinct(n_list);
    long n_max = ns.back();
    if (bits == 0) bits = std::max(192u, required_backward_bits(n_max, t));
    double lnC = log_c_sum(v);
    double S = total_power_sum(v);
    double bound_scale = S * (1.0 - std::log(t) / 5.0);
    ExceptionalSet set = ExceptionalSet::from_weight(t, v);
    std::vector<RotationOrbit> orbits = orbits_for(map, bits);

    std::vector<PowerBoundReport> reports;
    for (const auto& x : x_grid) {
        if (static_cast<long>(x.size()) != v.dimension()) {
            throw UsageError("grid point has the wrong dimension");
        }
        bool in_set = set.member_all(map, x, n_max, bits);
        // pts index j corresponds to backward depth k = n_max - j
        std::vector<double> step_logs(static_cast<size_t>(n_max), 0.0);  // index k-1
        for (size_t c = 0; c < x.size(); ++c) {
            std::vector<double> pts = orbits[c].points(x[c], -n_max, -1);
            for (long j = 0; j < n_max; ++j) {
                long k = n_max - j;
                double acc = 0.0;
                for (const auto& fac : v.coords[c]) {
                    double d = std::fabs(pts[static_cast<size_t>(j)] - fac.x0);
                    if (d == 0.0) {
                        throw DivisionAtZero("backward orbit lands on a root of the weight");
                    }
                    acc += fac.s * std::log(d);
                }
                step_logs[static_cast<size_t>(k - 1)] += acc;
            }
        }
        std::vector<double> at_n(ns.size());
        double cum = 0.0;
        size_t next = 0;
        for (long k = 1; k <= n_max; ++k) {
            cum += step_logs[static_cast<size_t>(k - 1)];
            if (next < ns.size() && k == ns[next]) at_n[next++] = cum;
        }
        for (long n : n_list) {
            size_t idx = static_cast<size_t>(
                std::lower_bound(ns.begin(), ns.end(), n) - ns.begin());
            PowerBoundReport rep;
            rep.n = n;
            rep.forward = false;
            rep.value = -(static_cast<double>(n) * lnC + at_n[idx]);
            rep.bound = bound_scale * wf.wtilde(static_cast<double>(n));
            rep.x = x;
            rep.t = t;
            rep.in_E_t = in_set;
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

long compute_nt(const BeurlingWeightFn& wf, double S, double t) {
    if (!(S > 0.0)) throw UsageError("S must be positive");
    if (!(t > 0.0 && t < 1.0)) throw UsageError("t must lie in (0,1)");
    double scale = S * (1.0 - std::log(t) / 5.0);
    auto ok = [&](long n) {
        double nd = static_cast<double>(n);
        return scale * wf.wtilde(nd) <= wf.w(nd);
    };
    const long cap = 1000000000L;
    if (!ok(cap)) {
        throw OverflowError("no threshold n(t) below 1e9: the C-form bound stays active");
    }
    long lo = 2, hi = cap;  // ok is monotone: (ln(e+n))^{eps/4} increases
    if (ok(lo)) return lo;
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

MeasureEstimate exceptional_set_measure(const ExceptionalSet& set, const ErgodicMap& map,
                                        long n_max, long samples, unsigned long seed,
                                        unsigned bits) {
    if (samples < 1000) throw UsageError("measure estimate needs at least 1000 samples");
    if (n_max < 1) throw UsageError("n_max must be >= 1");
    if (bits == 0) bits = std::max(192u, required_backward_bits(n_max, set.t));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long d = map.dimension();
    long members = 0;
    std::vector<double> x(static_cast<size_t>(d));
    for (long s = 0; s < samples; ++s) {
        for (long c = 0; c < d; ++c) x[static_cast<size_t>(c)] = unif(rng);
        if (set.member_all(map, x, n_max, bits)) ++members;
    }
    MeasureEstimate est;
    est.samples = samples;
    est.members = members;
    est.estimate = static_cast<double>(members) / static_cast<double>(samples);
    est.sigma = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(samples));
    est.lower_bound = set.measure_lower_bound();
    return est;
}

double stirling_upper_log(long n) {
    if (n < 1) throw UsageError("stirling bound needs n >= 1");
    double nd = static_cast<double>(n);
    const double two_pi = 6.283185307179586476925286766559;
    return 1.0 + nd * (std::log(nd) - 1.0) + 0.5 * std::log(two_pi * nd);
}

double stirling_upper(long n) { return std::exp(stirling_upper_log(n)); }

ProductOperator product_operator(const std::vector<WeightP>& vs,
                                 const std::vector<IrrationalSpec>& alphas) {
    if (vs.empty() || vs.size() != alphas.size()) {
        throw UsageError("product operator needs matching weight and angle lists");
    }
    WeightP merged;
    merged.C = 1.0;
    for (const auto& v : vs) {
        validate_weight(v);
        if (v.dimension() != 1) {
            throw UsageError("product components must be one-dimensional");
        }
        merged.C *= v.C;
        merged.coords.push_back(v.coords[0]);
    }
    return ProductOperator{std::move(merged), ErgodicMap::product(alphas)};
}

}  // namespace wco
