#include "wco/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "wco/errors.hpp"
#include "wco/orbit.hpp"

namespace wco {

namespace {

double wrap01(double y) {
    if (y >= 1.0) return y - 1.0;
    if (y < 0.0) return y + 1.0;
    return y;
}

// Pre-validated flat view of a one-dimensional weight for the orbit loops:
// per-call validation, allocation, and pow() for small integer exponents are
// hoisted out of the million-evaluation walks.  Callers guarantee x in [0,1].
class FastWeight {
  public:
    explicit FastWeight(const WeightP& v) : C_(v.C) {
        validate_weight(v);
        if (v.dimension() != 1)
            throw UsageError("calculus: the series demonstration is one-dimensional");
        facs_ = v.coords[0];
    }

    double operator()(double x) const {
        double r = C_;
        for (const WeightFactor& f : facs_) {
            double u = x - f.x0;
            if (f.absolute) {
                u = std::fabs(u);
            } else if (u < 0.0 && f.s != std::floor(f.s)) {
                throw DomainError("signed factor with non-integer exponent evaluated left of its root");
            }
            if (f.s == 1.0)
                r *= u;
            else if (f.s == 2.0)
                r *= u * u;
            else
                r *= std::pow(u, f.s);
        }
        return r;
    }

  private:
    double C_;
    std::vector<WeightFactor> facs_;
};

// certified table frac(k*alpha) for k in [-D, D]; index k + D.  Adding a
// table entry to an exact node costs one rounding, so every orbit point a
// walk touches is accurate to a few ulp independent of depth.
std::vector<double> shift_table(const ErgodicMap& map, long D) {
    const RotationOrbit orbit(map.alphas[0]);
    return orbit.points(0.0, -D, D);
}

double certified_alpha(const ErgodicMap& map) {
    const RotationOrbit orbit(map.alphas[0]);
    return orbit.points(0.0, 1, 1)[0];
}

void check_calculus_inputs(const WeightP& v, const ErgodicMap& map, const GridFunction& f,
                           long M, double t, long grid) {
    if (map.dimension() != 1)
        throw UsageError("calculus: the series demonstration is one-dimensional");
    if (f.dim != 1) throw UsageError("calculus: function dimension must be 1");
    if (!f.expr) throw UsageError("calculus: function has no expression");
    if (M < 0) throw UsageError("calculus: need M >= 0");
    if (!(t > 0.0) || !(t < 1.0)) throw UsageError("calculus: need 0 < t < 1");
    if (grid < 2) throw UsageError("calculus: need at least 2 grid nodes");
    const double r = spectral_radius(v).r;
    if (!(std::fabs(r - 1.0) <= 1e-9))
        throw UsageError("calculus: weight must be normalized to spectral radius 1");
}

std::vector<char> mask_from_shifts(const ExceptionalSet& set, const ErgodicMap& map,
                                   const std::vector<double>& shifts, long D, long depth,
                                   long grid, unsigned bits) {
    const std::vector<double>& zeros = set.zeros.at(0);
    std::vector<double> thr(static_cast<size_t>(depth + 1), 0.0);
    for (long k = 1; k <= depth; ++k)
        thr[static_cast<size_t>(k)] =
            set.t / (static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(k));
    constexpr double kMargin = 1e-11;  // far above the few-ulp orbit error

    if (bits == 0 && depth >= 1)
        bits = std::max(192u, required_backward_bits(depth, set.t));

    std::vector<char> mask(static_cast<size_t>(grid), 0);
    std::vector<double> probe(1);
    for (long j = 0; j < grid; ++j) {
        const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        int verdict = 1;  // 1 member, 0 not, -1 escalate
        for (long k = 1; k <= depth && verdict == 1; ++k) {
            const double pt = wrap01(x + shifts[static_cast<size_t>(D - k)]);
            for (double z : zeros) {
                const double d = std::fabs(pt - z);
                const double th = thr[static_cast<size_t>(k)];
                if (d >= th + kMargin) continue;
                verdict = (d <= th - kMargin) ? 0 : -1;
                break;
            }
        }
        if (verdict == -1) {  // razor-edge clearance: decide exactly
            probe[0] = x;
            verdict = set.member_all(map, probe, depth, bits) ? 1 : 0;
        }
        mask[static_cast<size_t>(j)] = static_cast<char>(verdict);
    }
    return mask;
}

struct WalkOutput {
    std::vector<std::vector<Cplx>> snaps;  // one sample vector per checkpoint
    std::vector<char> mask;
    std::vector<double> emp_fwd, emp_bwd;  // max |orbit product| over masked nodes
    long D_emp = 0;
    bool nt_known = false;
    long n_t = 0;
    double f_norm = 0.0;
};

// One pass over the grid: for every masked node walk the orbit once,
// accumulating the forward/backward weight products incrementally and
// capturing the partial sum at each requested truncation.
WalkOutput walk_series(const BeurlingSymbol& phi, const WeightP& v, const ErgodicMap& map,
                       const GridFunction& f, const std::vector<long>& checkpoints, double t,
                       long grid) {
    const long M = checkpoints.back();
    WalkOutput out;

    double S = 0.0;
    for (long c = 0; c < static_cast<long>(v.coords.size()); ++c) S += v.power_sum(c);
    try {
        out.n_t = compute_nt(phi.weight, S, t);
        out.nt_known = true;
    } catch (const OverflowError&) {
        out.nt_known = false;  // threshold beyond reach: all-empirical tails
    }
    out.D_emp = phi.half;  // realized products tracked across the full support

    const long D = std::max(M, out.D_emp);
    const std::vector<double> shifts = shift_table(map, D);
    const ExceptionalSet set = ExceptionalSet::from_weight(t, v);
    out.mask = mask_from_shifts(set, map, shifts, D, D, grid, 0);
    const FastWeight vw(v);

    out.snaps.assign(checkpoints.size(),
                     std::vector<Cplx>(static_cast<size_t>(grid), Cplx(0.0, 0.0)));
    out.emp_fwd.assign(static_cast<size_t>(out.D_emp + 1), 0.0);
    out.emp_bwd.assign(static_cast<size_t>(out.D_emp + 1), 0.0);

    std::vector<double> buf(1);
    auto feval = [&](double y) {
        buf[0] = y;
        return f.expr(buf);
    };

    for (long j = 0; j < grid; ++j) {
        if (!out.mask[static_cast<size_t>(j)]) continue;
        const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);

        size_t ci = 0;
        Cplx acc = phi.coeff(0) * feval(x);
        while (ci < checkpoints.size() && checkpoints[ci] == 0) {
            out.snaps[ci][static_cast<size_t>(j)] = acc;
            ++ci;
        }

        double pf = 1.0, pb = 1.0;
        for (long n = 1; n <= D; ++n) {
            const double prev = wrap01(x + shifts[static_cast<size_t>(D + n - 1)]);
            pf *= vw(prev);
            const double yb = wrap01(x + shifts[static_cast<size_t>(D - n)]);
            const double wb = vw(yb);
            if (wb == 0.0) {
                if (n <= M) {
                    char msg[120];
                    std::snprintf(msg, sizeof msg,
                                  "series step -%ld from node %ld lands on a weight root", n, j);
                    throw DivisionAtZero(msg);
                }
                pb = std::numeric_limits<double>::infinity();
            } else {
                pb /= wb;
            }
            if (n <= M) {
                const Cplx cp = phi.coeff(n);
                const Cplx cm = phi.coeff(-n);
                if (cp != Cplx(0.0, 0.0)) {
                    const double yf = wrap01(x + shifts[static_cast<size_t>(D + n)]);
                    acc += cp * (pf * feval(yf));
                }
                if (cm != Cplx(0.0, 0.0)) acc += cm * (pb * feval(yb));
            }
            if (n <= out.D_emp) {
                out.emp_fwd[static_cast<size_t>(n)] =
                    std::max(out.emp_fwd[static_cast<size_t>(n)], std::fabs(pf));
                out.emp_bwd[static_cast<size_t>(n)] =
                    std::max(out.emp_bwd[static_cast<size_t>(n)], std::fabs(pb));
            }
            while (ci < checkpoints.size() && checkpoints[ci] == n) {
                out.snaps[ci][static_cast<size_t>(j)] = acc;
                ++ci;
            }
        }
    }
    out.f_norm = grid_norm(f, grid, f.p);
    return out;
}

// certified remainder of the truncated series at truncation Mi: stored
// coefficients beyond Mi are weighted by the realized orbit-product suprema,
// upgraded to the analytic e^{w(n)} bound wherever the threshold n_t has
// been reached AND that bound is not refuted by the observed suprema; the
// symbol's dropped-mass certificate enters at the boundary weight.
double tail_at(const BeurlingSymbol& phi, long Mi, const WalkOutput& w) {
    auto weight_at = [&](long n, double emp) {
        double b = emp;
        if (w.nt_known && n >= w.n_t)
            b = std::max(b, std::exp(phi.weight.w(static_cast<double>(n))));
        return b;
    };
    double sum = 0.0;
    for (long n = Mi + 1; n <= phi.half; ++n) {
        const double cp = std::abs(phi.coeff(n));
        const double cm = std::abs(phi.coeff(-n));
        if (cp == 0.0 && cm == 0.0) continue;
        sum += cp * weight_at(n, w.emp_fwd[static_cast<size_t>(n)]) +
               cm * weight_at(n, w.emp_bwd[static_cast<size_t>(n)]);
    }
    double boundary = 1.0;
    if (w.D_emp >= 1)
        boundary = std::max({weight_at(w.D_emp, w.emp_fwd[static_cast<size_t>(w.D_emp)]),
                             weight_at(w.D_emp, w.emp_bwd[static_cast<size_t>(w.D_emp)]), 1.0});
    return (sum + phi.tail_bound * boundary) * w.f_norm;
}

double masked_diff_norm(const std::vector<Cplx>& a, const std::vector<Cplx>& b,
                        const std::vector<char>& ma, const std::vector<char>& mb, double p) {
    std::vector<char> both(ma.size());
    std::vector<Cplx> diff(ma.size());
    for (size_t i = 0; i < ma.size(); ++i) {
        both[i] = static_cast<char>(ma[i] && mb[i]);
        diff[i] = both[i] ? a[i] - b[i] : Cplx(0.0, 0.0);
    }
    return norm_of_samples_masked(diff, p, both);
}

// residual of masked result vs plain samples, on the result's mask
double result_vs_samples(const CalculusResult& r, const std::vector<Cplx>& s) {
    std::vector<Cplx> diff(r.samples.size());
    for (size_t i = 0; i < diff.size(); ++i)
        diff[i] = r.mask[i] ? r.samples[i] - s[i] : Cplx(0.0, 0.0);
    return norm_of_samples_masked(diff, r.p, r.mask);
}

double stored_l1(const BeurlingSymbol& s) {
    double m = 0.0;
    for (const Cplx& c : s.coeffs) m += std::abs(c);
    return m;
}

BeurlingSymbol truncate_symbol(const BeurlingSymbol& s, long newhalf) {
    if (newhalf >= s.half) return s;
    BeurlingSymbol out;
    out.weight = s.weight;
    out.half = newhalf;
    out.coeffs.assign(static_cast<size_t>(2 * newhalf + 1), Cplx(0.0, 0.0));
    double dropped = 0.0;
    for (long n = -s.half; n <= s.half; ++n) {
        if (std::labs(n) <= newhalf)
            out.coeffs[static_cast<size_t>(n + newhalf)] = s.coeff(n);
        else
            dropped += std::abs(s.coeff(n));
    }
    out.tail_bound = s.tail_bound + dropped;
    out.has_support = s.has_support;
    out.support_center = s.support_center;
    out.support_half = s.support_half;
    return out;
}

// max |v_j| over the masked nodes (empirical commutant-factor size)
double masked_sup(const GridFunction& fn, const std::vector<char>& mask, long grid) {
    const std::vector<Cplx> s = grid_samples(fn, grid);
    double m = 0.0;
    for (size_t i = 0; i < s.size(); ++i)
        if (mask[i]) m = std::max(m, std::abs(s[i]));
    return m;
}

template <typename F>
auto stage_guard(const char* tag, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const UsageError&) {
        throw;
    } catch (const LabError& e) {
        throw LabError(std::string("stage (") + tag + "): " + e.what());
    }
}

}  // namespace

long CalculusResult::masked_count() const {
    long c = 0;
    for (char m : mask) c += (m != 0);
    return c;
}

double CalculusResult::norm() const { return norm_of_samples_masked(samples, p, mask); }

GridFunction CalculusResult::value() const {
    auto store = std::make_shared<std::vector<Cplx>>(samples);
    const long g = grid;
    GridFunction fn;
    fn.dim = 1;
    fn.p = p;
    fn.expr = [store, g](const std::vector<double>& x) {
        long j = static_cast<long>(std::floor(x.at(0) * static_cast<double>(g)));
        j = std::clamp(j, 0L, g - 1);
        return (*store)[static_cast<size_t>(j)];
    };
    return fn;
}

std::vector<char> exceptional_mask(const ExceptionalSet& set, const ErgodicMap& map, long depth,
                                   long grid, unsigned bits) {
    if (map.dimension() != 1) throw UsageError("exceptional_mask: map must be one-dimensional");
    if (depth < 1) throw UsageError("exceptional_mask: need depth >= 1");
    if (grid < 1) throw UsageError("exceptional_mask: need grid >= 1");
    const std::vector<double> shifts = shift_table(map, depth);
    return mask_from_shifts(set, map, shifts, depth, depth, grid, bits);
}

GridFunction masked_function(const GridFunction& base, std::vector<char> mask) {
    if (base.dim != 1) throw UsageError("masked_function: base must be one-dimensional");
    if (mask.empty()) throw UsageError("masked_function: mask is empty");
    auto cells = std::make_shared<std::vector<char>>(std::move(mask));
    const long g = static_cast<long>(cells->size());
    GridFunction fn = base;
    auto inner = base.expr;
    fn.expr = [cells, g, inner](const std::vector<double>& x) {
        long j = static_cast<long>(std::floor(x.at(0) * static_cast<double>(g)));
        j = std::clamp(j, 0L, g - 1);
        if (!(*cells)[static_cast<size_t>(j)]) return Cplx(0.0, 0.0);
        return inner(x);
    };
    return fn;
}

GridFunction power_function(const WeightP& v, const ErgodicMap& map, long j,
                            const GridFunction& f) {
    if (map.dimension() != 1 || f.dim != 1)
        throw UsageError("power_function: one-dimensional only");
    if (!f.expr) throw UsageError("power_function: function has no expression");
    const double alpha = certified_alpha(map);
    const FastWeight vw(v);
    GridFunction out = f;
    auto inner = f.expr;
    out.expr = [vw, alpha, j, inner](const std::vector<double>& x) {
        double y = x.at(0);
        if (!(y >= 0.0 && y <= 1.0)) throw UsageError("evaluation point leaves the unit cube");
        std::vector<double> buf(1);
        double prod = 1.0;
        if (j >= 0) {
            for (long k = 0; k < j; ++k) {
                prod *= vw(y);
                y = wrap01(y + alpha);
            }
        } else {
            for (long k = 0; k < -j; ++k) {
                y = wrap01(y - alpha);
                const double wv = vw(y);
                if (wv == 0.0)
                    throw DivisionAtZero("power_function: backward orbit hits a weight root");
                prod /= wv;
            }
        }
        buf[0] = y;
        return prod * inner(buf);
    };
    return out;
}

GridFunction series_function(const BeurlingSymbol& phi, const WeightP& v, const ErgodicMap& map,
                             const GridFunction& f, long M) {
    if (map.dimension() != 1 || f.dim != 1)
        throw UsageError("series_function: one-dimensional only");
    if (!f.expr) throw UsageError("series_function: function has no expression");
    if (M < 0) throw UsageError("series_function: need M >= 0");
    const double alpha = certified_alpha(map);
    const long Mc = std::min(M, phi.half);
    auto coeffs = std::make_shared<std::vector<Cplx>>(phi.coeffs);
    const long half = phi.half;
    const FastWeight vw(v);
    auto inner = f.expr;
    GridFunction out = f;
    out.expr = [coeffs, half, Mc, vw, alpha, inner](const std::vector<double>& x) {
        std::vector<double> buf(1);
        auto fe = [&](double y) {
            buf[0] = y;
            return inner(buf);
        };
        auto cf = [&](long n) { return (*coeffs)[static_cast<size_t>(n + half)]; };
        const double x0 = x.at(0);
        if (!(x0 >= 0.0 && x0 <= 1.0)) throw UsageError("evaluation point leaves the unit cube");
        Cplx acc = cf(0) * fe(x0);
        double pf = 1.0, pb = 1.0;
        double yf = x0, yb = x0;
        for (long n = 1; n <= Mc; ++n) {
            pf *= vw(yf);
            yf = wrap01(yf + alpha);
            yb = wrap01(yb - alpha);
            const double wb = vw(yb);
            if (wb == 0.0)
                throw DivisionAtZero("series_function: backward orbit hits a weight root");
            pb /= wb;
            const Cplx cp = cf(n), cm = cf(-n);
            if (cp != Cplx(0.0, 0.0)) acc += cp * (pf * fe(yf));
            if (cm != Cplx(0.0, 0.0)) acc += cm * (pb * fe(yb));
        }
        return acc;
    };
    return out;
}

CalculusResult apply_calculus(const BeurlingSymbol& phi, const WeightP& v, const ErgodicMap& map,
                              const GridFunction& f, long M, double t, long grid) {
    check_calculus_inputs(v, map, f, M, t, grid);
    const WalkOutput w = walk_series(phi, v, map, f, {M}, t, grid);
    CalculusResult res;
    res.samples = w.snaps[0];
    res.mask = w.mask;
    res.grid = grid;
    res.p = f.p;
    res.M = M;
    res.t = t;
    res.tail_bound = tail_at(phi, M, w);
    if (!std::isfinite(res.tail_bound))
        throw TailNotSummable("apply_calculus: remainder certificate is not finite");
    return res;
}

std::vector<double> convergence_in_measure(const BeurlingSymbol& phi, const WeightP& v,
                                           const ErgodicMap& map, const GridFunction& f,
                                           const std::vector<long>& M_list, double delta, double t,
                                           long grid) {
    if (M_list.size() < 2) throw UsageError("convergence_in_measure: need at least two truncations");
    for (size_t i = 1; i < M_list.size(); ++i)
        if (M_list[i] <= M_list[i - 1])
            throw UsageError("convergence_in_measure: truncations must increase");
    if (!(delta > 0.0)) throw UsageError("convergence_in_measure: need delta > 0");
    check_calculus_inputs(v, map, f, M_list.back(), t, grid);

    const WalkOutput w = walk_series(phi, v, map, f, M_list, t, grid);
    std::vector<double> measures;
    for (size_t i = 0; i + 1 < M_list.size(); ++i) {
        long count = 0;
        for (long j = 0; j < grid; ++j)
            if (std::abs(w.snaps[i + 1][static_cast<size_t>(j)] -
                         w.snaps[i][static_cast<size_t>(j)]) > delta)
                ++count;
        measures.push_back(static_cast<double>(count) / static_cast<double>(grid));
    }
    return measures;
}

PropertyReport property_suite(const BeurlingSymbol& phi, const BeurlingSymbol& psi,
                              const WeightP& v, const ErgodicMap& map, const GridFunction& f,
                              const std::vector<long>& commutant_J, long M, double t, long grid,
                              double cover_delta) {
    if (commutant_J.empty()) throw UsageError("property_suite: need commutant powers to test");
    if (M < 4) throw UsageError("property_suite: need M >= 4");
    check_calculus_inputs(v, map, f, M, t, grid);
    PropertyReport rep;

    // (I) norm stability and the truncation Cauchy property
    rep.probes_I = {std::max(1L, M / 4), std::max(1L, M / 2), M};
    rep.probes_I.erase(std::unique(rep.probes_I.begin(), rep.probes_I.end()), rep.probes_I.end());
    const WalkOutput wI = walk_series(phi, v, map, f, rep.probes_I, t, grid);
    for (size_t i = 0; i < rep.probes_I.size(); ++i)
        rep.norms_I.push_back(norm_of_samples_masked(wI.snaps[i], f.p, wI.mask));
    for (size_t i = 0; i + 1 < rep.probes_I.size(); ++i) {
        rep.cauchy_resid_I.push_back(
            masked_diff_norm(wI.snaps[i + 1], wI.snaps[i], wI.mask, wI.mask, f.p));
        rep.cauchy_tail_I.push_back(tail_at(phi, rep.probes_I[i], wI));
    }

    // (II) linearity in the symbol: S(phi + rho/8) - S(phi) - S(rho)/8
    BeurlingSymbol rho = BeurlingSymbol::harmonic(1, Cplx(0.7, 0.0), phi.weight);
    BeurlingSymbol combo = phi;
    combo.set_coeff(1, phi.coeff(1) + Cplx(0.7 / 8.0, 0.0));
    const CalculusResult A2 = apply_calculus(combo, v, map, f, M, t, grid);
    const CalculusResult B2 = apply_calculus(phi, v, map, f, M, t, grid);
    const CalculusResult C2 = apply_calculus(rho, v, map, f, M, t, grid);
    {
        std::vector<Cplx> combo_rhs(A2.samples.size());
        for (size_t i = 0; i < combo_rhs.size(); ++i)
            combo_rhs[i] = B2.samples[i] + C2.samples[i] / 8.0;
        std::vector<char> both(A2.mask.size());
        for (size_t i = 0; i < both.size(); ++i)
            both[i] = static_cast<char>(A2.mask[i] && B2.mask[i] && C2.mask[i]);
        rep.symbol_linearity_II = masked_diff_norm(A2.samples, combo_rhs, both, both, f.p);
    }

    // (III) linearity in the vector: S(phi, f + g/8) - S(phi,f) - S(phi,g)/8
    const GridFunction g3 = GridFunction::harmonic(2);
    const CalculusResult A3 = apply_calculus(phi, v, map, f + g3.scaled(Cplx(0.125, 0.0)), M, t, grid);
    const CalculusResult C3 = apply_calculus(phi, v, map, g3, M, t, grid);
    {
        std::vector<Cplx> rhs(A3.samples.size());
        for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = B2.samples[i] + C3.samples[i] / 8.0;
        rep.vector_linearity_III = masked_diff_norm(A3.samples, rhs, A3.mask, B2.mask, f.p);
    }

    // shared pieces: h = psi(T)f both as a result and as an expression
    const CalculusResult h_res = apply_calculus(psi, v, map, f, M, t, grid);
    rep.witness_norm_VI = h_res.norm();
    GridFunction h_fn = series_function(psi, v, map, f, M);

    // (IV) commutation with the powers of T
    for (long j : commutant_J) {
        const CalculusResult lhs =
            apply_calculus(psi, v, map, power_function(v, map, j, f), M, t, grid);
        const std::vector<Cplx> rhs = grid_samples(power_function(v, map, j, h_fn), grid);
        rep.commute_j_IV.push_back(j);
        rep.commute_resid_IV.push_back(result_vs_samples(lhs, rhs));
        const double vj_sup =
            masked_sup(power_function(v, map, j, GridFunction::constant(Cplx(1.0, 0.0))),
                       lhs.mask, grid);
        rep.commute_tail_IV.push_back(lhs.tail_bound + vj_sup * h_res.tail_bound);
    }

    // (V) multiplicativity: phi(T)(psi(T)f) vs (phi psi)(T)f
    {
        const CalculusResult lhs = apply_calculus(phi, v, map, h_fn, M, t, grid);
        const BeurlingSymbol q = symbol_product(phi, psi);
        const CalculusResult rhs =
            apply_calculus(q, v, map, f, std::min(2 * M, q.half), t, grid);
        rep.mult_resid_V = masked_diff_norm(lhs.samples, rhs.samples, lhs.mask, rhs.mask, f.p);
        rep.mult_tail_V = lhs.tail_bound + rhs.tail_bound + stored_l1(phi) * h_res.tail_bound;
    }

    // (VI) the covering identity Psi(T)(sum_k psi_k(T) f) = f
    {
        const CoverResult cov = cover_and_invert(psi, cover_delta);
        const GridFunction u_fn = series_function(cov.G, v, map, f, M);
        const BeurlingSymbol PsiM = truncate_symbol(cov.Psi, M);
        const CalculusResult lhs = apply_calculus(PsiM, v, map, u_fn, M, t, grid);
        const CalculusResult u_res = apply_calculus(cov.G, v, map, f, M, t, grid);
        rep.covering_resid_VI = result_vs_samples(lhs, grid_samples(f, grid));
        rep.covering_tail_VI = lhs.tail_bound + stored_l1(PsiM) * u_res.tail_bound +
                               cov.residual * grid_norm(f, grid, f.p);
    }
    return rep;
}

DemoConfig DemoConfig::defaults() {
    DemoConfig c;
    c.v = normalize(parse_weight("e*x"));
    return c;
}

DemoReport hyperinvariant_demo(const DemoConfig& config) {
    if (config.alpha.exactly_rational())
        throw UsageError(
            "rational rotation: every orbit is periodic, the map is not ergodic, and the "
            "composition operator already has a spectral invariant subspace; the series "
            "demonstration needs an irrational angle");
    validate_weight(config.v);
    const WeightP v = normalize(config.v);
    const ErgodicMap map = ErgodicMap::rotation(config.alpha);
    const BeurlingWeightFn wf(config.epsilon);
    if (config.M < 1 || config.grid < 2 || config.bump_trunc < 2 || config.K < 1)
        throw UsageError("demo: M, grid, bump_trunc, K must be positive");
    if (config.commutant_J.empty()) throw UsageError("demo: need commutant powers");

    DemoReport rep;

    // (a) disjointness certificate
    const BeurlingSymbol phi = stage_guard("a", [&] {
        return bump(config.phi_center, config.half_width, wf, config.K, config.bump_trunc);
    });
    const BeurlingSymbol psi = stage_guard("a", [&] {
        return bump(config.psi_center, config.half_width, wf, config.K, config.bump_trunc);
    });
    rep.product_norm = stage_guard("a", [&] { return algebra_norm(symbol_product(phi, psi)); });
    rep.stages.push_back({"disjointness", rep.product_norm <= 1e-6, rep.product_norm, 1e-6,
                          "weighted norm of the bump product"});

    // g vanishing off the clearance set, h = psi(T)g
    const ExceptionalSet set = ExceptionalSet::from_weight(config.t, v);
    const GridFunction g = stage_guard("b", [&] {
        return masked_function(GridFunction::constant(Cplx(1.0, 0.0)),
                               exceptional_mask(set, map, config.M, config.grid));
    });
    const CalculusResult h_res = stage_guard(
        "b", [&] { return apply_calculus(psi, v, map, g, config.M, config.t, config.grid); });
    rep.witness_norm = h_res.norm();
    rep.witness_tail = h_res.tail_bound;
    const double tol_b = 1e3 * h_res.tail_bound;
    rep.stages.push_back({"witness", rep.witness_norm > tol_b, rep.witness_norm, tol_b,
                          "norm of h = psi(T)g against 1000x its tail"});

    // (c) membership: phi(T)(T^j h) should vanish up to truncation.  The
    // witness here is the truncated h itself (an exactly-known function, its
    // gap to the full series is the reported witness_tail), so the residual
    // certificate is the outer truncation tail alone.  Residuals and
    // tolerance are relative to ||T^j h|| so the commutant factor's size
    // drops out.
    const GridFunction h_fn = series_function(psi, v, map, g, config.M);
    double tol_c = 0.0;
    for (long j : config.commutant_J) {
        const GridFunction fn_j = power_function(v, map, j, h_fn);
        const CalculusResult res = stage_guard("c", [&] {
            return apply_calculus(phi, v, map, fn_j, config.M, config.t, config.grid);
        });
        const double fj_norm = grid_norm(fn_j, config.grid, fn_j.p);
        if (!(fj_norm > 0.0))
            throw LabError("stage (c): commutant image of the witness is zero");
        rep.membership_resid.push_back(res.norm() / fj_norm);
        tol_c = std::max(tol_c, 1e3 * res.tail_bound / fj_norm);
    }
    rep.membership_tol = tol_c;
    bool member_ok = true;
    for (double r : rep.membership_resid) member_ok = member_ok && (r <= tol_c);
    rep.stages.push_back({"membership", member_ok,
                          *std::max_element(rep.membership_resid.begin(),
                                            rep.membership_resid.end()),
                          tol_c, "max_j ||phi(T)(T^j h)||/||T^j h|| against 1000x the tail"});

    // (d) non-triviality: a generic u is not annihilated (same relative scale)
    const GridFunction u = GridFunction::constant(Cplx(1.0, 0.0)) +
                           GridFunction::harmonic(1).scaled(Cplx(0.25, 0.0)) +
                           GridFunction::harmonic(-1).scaled(Cplx(0.25, 0.0));
    const CalculusResult d_res = stage_guard(
        "d", [&] { return apply_calculus(phi, v, map, u, config.M, config.t, config.grid); });
    rep.generic_norm = d_res.norm() / grid_norm(u, config.grid, u.p);
    rep.stages.push_back({"nontriviality", rep.generic_norm > 10.0 * tol_c, rep.generic_norm,
                          10.0 * tol_c, "||phi(T)u||/||u|| for u = 1 + cos(2 pi x)/2"});

    rep.all_passed = true;
    for (const DemoStage& s : rep.stages) rep.all_passed = rep.all_passed && s.passed;
    return rep;
}

}  // namespace wco
