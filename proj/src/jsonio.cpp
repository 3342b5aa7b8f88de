#include "wco/jsonio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wco/errors.hpp"

namespace wco {

namespace {

std::string fmt_double(double v) {
    // 17 significant digits: enough for strtod to recover the exact bits.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw UsageError("config value for " + key + " is not a number: '" + value + "'");
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw UsageError("config value for " + key + " is not an integer: '" + value + "'");
    return v;
}

}  // namespace

std::string RunConfig::to_text() const {
    std::ostringstream os;
    os << "command=" << command << '\n'
       << "alpha=" << alpha << '\n'
       << "weight=" << weight << '\n'
       << "psi=" << psi << '\n'
       << "epsilon=" << fmt_double(epsilon) << '\n'
       << "t=" << fmt_double(t) << '\n'
       << "x0=" << fmt_double(x0) << '\n'
       << "N=" << N << '\n'
       << "M=" << M << '\n'
       << "G=" << G << '\n'
       << "precision_bits=" << precision_bits << '\n'
       << "seed=" << seed << '\n'
       << "out=" << out << '\n'
       << "csv=" << csv << '\n';
    return os.str();
}

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command") cfg.command = value;
    else if (key == "alpha") cfg.alpha = value;
    else if (key == "weight") cfg.weight = value;
    else if (key == "psi") cfg.psi = value;
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "t") cfg.t = parse_double(key, value);
    else if (key == "x0") cfg.x0 = parse_double(key, value);
    else if (key == "N") cfg.N = parse_long(key, value);
    else if (key == "M") cfg.M = parse_long(key, value);
    else if (key == "G") cfg.G = parse_long(key, value);
    else if (key == "precision_bits") cfg.precision_bits = parse_long(key, value);
    else if (key == "seed") cfg.seed = parse_long(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "csv") cfg.csv = value;
    else throw UsageError("unknown config key: '" + key + "'");
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream is(text);
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) +
                             " is not key=value: '" + s + "'");
        set_config_key(base, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    return parse_config_text(read_text_file(path), std::move(base));
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    j["alpha"] = cfg.alpha;
    j["weight"] = cfg.weight;
    j["psi"] = cfg.psi;
    j["epsilon"] = cfg.epsilon;
    j["t"] = cfg.t;
    j["x0"] = cfg.x0;
    j["N"] = cfg.N;
    j["M"] = cfg.M;
    j["G"] = cfg.G;
    j["precision_bits"] = cfg.precision_bits;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    j["csv"] = cfg.csv;
    return j;
}

Json report_envelope(const RunConfig& cfg) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cfg.command;
    j["config"] = config_json(cfg);
    return j;
}

Json json_of(const DiscrepancyReport& r) {
    Json j;
    j["N"] = r.N;
    j["D_N"] = r.D_N;
    j["witness_lo"] = r.witness_lo;
    j["witness_hi"] = r.witness_hi;
    j["achieved"] = r.achieved;
    j["method"] = r.method;
    return j;
}

Json json_of(const TypeCertificate& c) {
    Json j;
    j["psi"] = c.psi.describe();
    j["Q"] = c.Q;
    j["min_product"] = c.min_product;
    j["argmin_q"] = c.argmin_q;
    j["consistent"] = c.consistent;
    j["witness_q"] = c.witness_q;
    j["violations"] = c.violations;
    j["consistent_from"] = c.consistent_from;
    return j;
}

Json json_of(const LiouvilleReport& r) {
    Json j;
    j["base"] = r.base;
    j["epsilon"] = r.epsilon;
    j["n_max"] = r.n_max;
    j["effective_n_max"] = r.effective_n_max;
    j["overflow"] = r.overflow;
    j["u"] = r.u;
    j["cond_growth"] = std::vector<bool>(r.cond_growth.begin(), r.cond_growth.end());
    j["cond_type"] = std::vector<bool>(r.cond_type.begin(), r.cond_type.end());
    j["n0"] = r.n0;
    if (r.alpha)
        j["alpha"] = r.alpha->describe();
    else
        j["alpha"] = nullptr;
    return j;
}

Json json_of(const SpectralData& s) {
    Json j;
    j["r"] = s.r;
    j["normalized_C"] = s.normalized_C;
    Json xs = Json::array();
    for (const auto& [X, Xp] : s.X) xs.push_back(Json::array({X, Xp}));
    j["X"] = std::move(xs);
    return j;
}

Json json_of(const PowerBoundReport& r) {
    Json j;
    j["n"] = r.n;
    j["forward"] = r.forward;
    j["value"] = r.value;
    j["bound"] = r.bound;
    j["margin"] = r.bound - r.value;
    j["x"] = r.x;
    j["t"] = r.t;
    j["in_E_t"] = r.in_E_t;
    return j;
}

Json json_of(const MeasureEstimate& m) {
    Json j;
    j["estimate"] = m.estimate;
    j["sigma"] = m.sigma;
    j["lower_bound"] = m.lower_bound;
    j["samples"] = m.samples;
    j["members"] = m.members;
    return j;
}

Json json_of(const DemoReport& r) {
    Json j;
    j["all_passed"] = r.all_passed;
    j["product_norm"] = r.product_norm;
    j["witness_norm"] = r.witness_norm;
    j["witness_tail"] = r.witness_tail;
    j["membership_resid"] = r.membership_resid;
    j["membership_tol"] = r.membership_tol;
    j["generic_norm"] = r.generic_norm;
    Json stages = Json::array();
    for (const auto& s : r.stages) {
        Json sj;
        sj["name"] = s.name;
        sj["passed"] = s.passed;
        sj["value"] = s.value;
        sj["tolerance"] = s.tolerance;
        sj["note"] = s.note;
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    return j;
}

Json json_of(const CalculusResult& r, bool include_samples) {
    Json j;
    j["grid"] = r.grid;
    j["p"] = r.p;
    j["M"] = r.M;
    j["t"] = r.t;
    j["norm"] = r.norm();
    j["tail_bound"] = r.tail_bound;
    j["masked_count"] = r.masked_count();
    if (include_samples) {
        Json samples = Json::array();
        for (const Cplx& c : r.samples) samples.push_back(Json::array({c.real(), c.imag()}));
        j["samples"] = std::move(samples);
        j["mask"] = std::vector<int>(r.mask.begin(), r.mask.end());
    }
    return j;
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << text;
    if (!out.good()) throw UsageError("write failed: " + path);
}

}  // namespace wco
