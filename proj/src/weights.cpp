#include "wco/weights.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "wco/errors.hpp"
#include "wco/orbit.hpp"

namespace wco {

namespace {

bool is_integer_exponent(double s) { return std::isfinite(s) && s == std::floor(s); }

// Strict numeric literal: the whole token must be consumed.
bool parse_number(const std::string& tok, double* out) {
    if (tok.empty()) return false;
    const char* begin = tok.c_str();
    char* end = nullptr;
    double val = std::strtod(begin, &end);
    if (end != begin + tok.size()) return false;
    *out = val;
    return true;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Trim to the shortest representation that still round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

template <class F>
double adaptive_simpson(F f, double a, double m, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

// integral of ln u over [0, L], evaluated numerically after u = w^2:
//   int_0^L ln u du = int_0^sqrt(L) 4 w ln w dw
// The transformed integrand is continuous (w ln w -> 0 at 0), so plain
// adaptive Simpson converges without special endpoint handling.
double log_integral_to(double L, double tol) {
    if (L <= 0.0) return 0.0;
    auto f = [](double w) { return w == 0.0 ? 0.0 : 4.0 * w * std::log(w); };
    double a = 0.0, b = std::sqrt(L);
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

double factor_value(const WeightFactor& fac, double x) {
    double t = x - fac.x0;
    if (fac.absolute) return std::pow(std::fabs(t), fac.s);
    if (t < 0.0 && !is_integer_exponent(fac.s)) {
        throw DomainError("signed factor with non-integer exponent evaluated left of its root");
    }
    return std::pow(t, fac.s);
}

std::string factor_text(const WeightFactor& fac) {
    std::ostringstream os;
    if (fac.absolute) {
        if (fac.x0 == 0.0) {
            os << "|x|";
        } else {
            os << "|x-" << format_g(fac.x0) << "|";
        }
    } else if (fac.x0 == 0.0) {
        os << "x";
    } else {
        os << "(x-" << format_g(fac.x0) << ")";
    }
    if (fac.s != 1.0) os << "^" << format_g(fac.s);
    return os.str();
}

WeightFactor parse_factor(const std::string& tok) {
    WeightFactor fac;
    std::string body;
    size_t after = 0;
    if (tok[0] == '|') {
        size_t close = tok.find('|', 1);
        if (close == std::string::npos) throw UsageError("unterminated '|' in weight token '" + tok + "'");
        fac.absolute = true;
        body = tok.substr(1, close - 1);
        after = close + 1;
    } else if (tok[0] == '(') {
        size_t close = tok.find(')', 1);
        if (close == std::string::npos) throw UsageError("unterminated '(' in weight token '" + tok + "'");
        fac.absolute = false;
        body = tok.substr(1, close - 1);
        after = close + 1;
    } else {  // bare "x" or "x^s"
        fac.absolute = false;
        size_t caret = tok.find('^');
        body = caret == std::string::npos ? tok : tok.substr(0, caret);
        after = caret == std::string::npos ? tok.size() : caret;
    }
    body = trim(body);
    if (body == "x") {
        fac.x0 = 0.0;
    } else if (body.rfind("x-", 0) == 0) {
        if (!parse_number(trim(body.substr(2)), &fac.x0)) {
            throw UsageError("cannot parse root in weight token '" + tok + "'");
        }
    } else {
        throw UsageError("cannot parse weight token '" + tok + "'");
    }
    std::string rest = trim(tok.substr(after));
    if (!rest.empty()) {
        if (rest[0] != '^' || !parse_number(trim(rest.substr(1)), &fac.s)) {
            throw UsageError("cannot parse exponent in weight token '" + tok + "'");
        }
    }
    return fac;
}

}  // namespace

double WeightP::power_sum(long coord) const {
    double s = 0.0;
    for (const auto& fac : coords.at(static_cast<size_t>(coord))) s += fac.s;
    return s;
}

WeightP WeightP::one_dim(double C, std::vector<WeightFactor> factors) {
    WeightP v;
    v.C = C;
    v.coords.push_back(std::move(factors));
    return v;
}

void validate_weight(const WeightP& v) {
    if (!(v.C > 0.0) || !std::isfinite(v.C)) throw UsageError("weight constant must be positive and finite");
    if (v.coords.empty()) throw UsageError("weight needs at least one coordinate");
    for (const auto& factors : v.coords) {
        if (factors.empty()) throw UsageError("each coordinate needs at least one factor");
        for (const auto& fac : factors) {
            if (!(fac.s > 0.0) || !std::isfinite(fac.s)) throw UsageError("factor exponents must be positive");
            if (!(fac.x0 >= 0.0 && fac.x0 <= 1.0)) throw UsageError("factor roots must lie in [0,1]");
        }
    }
}

std::pair<double, double> root_contribution(double c) {
    double X = c == 0.0 ? 0.0 : c - c * std::log(c);
    double Xp = c == 1.0 ? 0.0 : (1.0 - c) - (1.0 - c) * std::log(1.0 - c);
    return {X, Xp};
}

double eval_weight(const WeightP& v, const std::vector<double>& x) {
    validate_weight(v);
    if (static_cast<long>(x.size()) != v.dimension()) {
        throw UsageError("evaluation point has the wrong dimension");
    }
    double result = v.C;
    for (size_t c = 0; c < v.coords.size(); ++c) {
        if (!(x[c] >= 0.0 && x[c] <= 1.0)) throw UsageError("evaluation point leaves the unit cube");
        for (const auto& fac : v.coords[c]) result *= factor_value(fac, x[c]);
    }
    return result;
}

double eval_weight(const WeightP& v, double x) { return eval_weight(v, std::vector<double>{x}); }

SpectralData spectral_radius(const WeightP& v) {
    validate_weight(v);
    SpectralData data;
    double exponent = 0.0;
    for (const auto& factors : v.coords) {
        for (const auto& fac : factors) {
            auto xx = root_contribution(fac.x0);
            data.X.push_back(xx);
            exponent -= fac.s * (xx.first + xx.second);
        }
    }
    data.r = v.C * std::exp(exponent);
    data.normalized_C = v.C / data.r;
    return data;
}

WeightP normalize(const WeightP& v) {
    SpectralData data = spectral_radius(v);
    WeightP out = v;
    out.C = data.normalized_C;
    return out;
}

double birkhoff_radius_estimate(const WeightP& v, const IrrationalSpec& alpha,
                                long N, double x0, unsigned bits) {
    validate_weight(v);
    if (v.dimension() != 1) throw UsageError("birkhoff estimate handles one-dimensional weights only");
    if (N < 1) throw UsageError("birkhoff estimate needs N >= 1");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw UsageError("starting point must lie in [0,1]");
    RotationOrbit orbit(alpha, bits);
    std::vector<double> pts = orbit.points(x0, 0, N - 1);
    double total = 0.0;
    for (double x : pts) {
        for (const auto& fac : v.coords[0]) {
            double t = std::fabs(x - fac.x0);
            if (t == 0.0) throw OrbitHitsZero("orbit point lands exactly on a weight root");
            total += fac.s * std::log(t);
        }
    }
    return v.C * std::exp(total / static_cast<double>(N));
}

double log_weight_integral(const WeightP& v, long coord, double tol) {
    validate_weight(v);
    if (coord < 0 || coord >= v.dimension()) throw UsageError("coordinate index out of range");
    double total = 0.0;
    for (const auto& fac : v.coords[static_cast<size_t>(coord)]) {
        // int_0^1 ln|x - c| dx splits at the root into two pure-log pieces.
        total += fac.s * (log_integral_to(fac.x0, tol) + log_integral_to(1.0 - fac.x0, tol));
    }
    return total;
}

WeightP parse_weight(const std::string& text) {
    WeightP v;
    v.coords.emplace_back();
    std::string input = text;
    size_t pos = 0;
    bool saw_token = false;
    while (pos <= input.size()) {
        size_t next = input.find('*', pos);
        if (next == std::string::npos) next = input.size();
        std::string tok = trim(input.substr(pos, next - pos));
        pos = next + 1;
        if (tok.empty()) {
            if (pos > input.size()) break;
            throw UsageError("empty token in weight expression '" + text + "'");
        }
        saw_token = true;
        double num = 0.0;
        if (tok == "e") {
            v.C *= std::exp(1.0);
        } else if (tok.rfind("e^", 0) == 0 && parse_number(trim(tok.substr(2)), &num)) {
            v.C *= std::exp(num);
        } else if (parse_number(tok, &num)) {
            if (!(num > 0.0)) throw UsageError("constant factors must be positive in '" + text + "'");
            v.C *= num;
        } else {
            v.coords[0].push_back(parse_factor(tok));
        }
        if (pos > input.size()) break;
    }
    if (!saw_token) throw UsageError("empty weight expression");
    validate_weight(v);
    return v;
}

std::string describe_weight(const WeightP& v) {
    std::ostringstream os;
    if (v.C != 1.0) os << format_g(v.C);
    for (size_t c = 0; c < v.coords.size(); ++c) {
        if (v.coords.size() > 1) {
            os << (os.str().empty() ? "" : " ") << "[x" << c + 1 << "]:";
        }
        for (const auto& fac : v.coords[c]) {
            if (!os.str().empty() && os.str().back() != ':') os << "*";
            os << factor_text(fac);
        }
    }
    return os.str();
}

}  // namespace wco
