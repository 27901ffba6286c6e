#include "svport/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace svport {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0;
    size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct LineContext {
    const std::string& origin;
    int line_no;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << origin << ":" << line_no << ": " << msg;
        throw ParseError(os.str());
    }
};

double parse_double(const std::string& v, const LineContext& ctx) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) ctx.fail("trailing characters in number '" + v + "'");
        return x;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        ctx.fail("cannot parse number '" + v + "'");
    }
}

long long parse_int(const std::string& v, const LineContext& ctx) {
    try {
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size()) ctx.fail("trailing characters in integer '" + v + "'");
        return x;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        ctx.fail("cannot parse integer '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const LineContext& ctx) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    ctx.fail("cannot parse boolean '" + v + "'");
}

ExtendedReal parse_extended(const std::string& v, const LineContext& ctx) {
    if (v == "inf" || v == "+inf") return ExtendedReal::pos_inf();
    if (v == "-inf") return ExtendedReal::neg_inf();
    return ExtendedReal(parse_double(v, ctx));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<double> parse_vector(const std::string& v, const LineContext& ctx) {
    std::vector<double> out;
    for (const std::string& part : split(v, ',')) out.push_back(parse_double(part, ctx));
    return out;
}

std::vector<std::vector<double>> parse_matrix(const std::string& v, const LineContext& ctx) {
    std::vector<std::vector<double>> out;
    for (const std::string& row : split(v, ';')) out.push_back(parse_vector(row, ctx));
    return out;
}

void resize_factors(PcsvParams& pp, size_t n) {
    if (pp.factors.size() < n) pp.factors.resize(n);
}

void assign_factor_field(PcsvParams& pp, const std::vector<double>& vals,
                         double PcsvFactor::* field) {
    resize_factors(pp, vals.size());
    for (size_t i = 0; i < vals.size(); ++i) pp.factors[i].*field = vals[i];
}

} // namespace

StrategyKind parse_strategy_kind(const std::string& value, double& constant_value) {
    if (value == "optimal") return StrategyKind::optimal;
    if (value == "capped_merton") return StrategyKind::capped_merton;
    if (value == "capped_unconstrained") return StrategyKind::capped_unconstrained;
    if (value == "riskless") return StrategyKind::riskless;
    if (value.rfind("constant:", 0) == 0) {
        std::string num = value.substr(9);
        double x = 0.0;
        size_t used = 0;
        try {
            x = std::stod(num, &used);
        } catch (const std::exception&) {
            throw ParseError("bad constant strategy '" + value + "'");
        }
        if (used != num.size() || !std::isfinite(x)) {
            throw ParseError("bad constant strategy '" + value + "'");
        }
        constant_value = x;
        return StrategyKind::constant;
    }
    throw ParseError("unknown strategy kind '" + value + "'");
}

SweepAxis parse_sweep_axis(const std::string& value) {
    if (value == "b") return SweepAxis::b;
    if (value == "sigma") return SweepAxis::sigma;
    if (value == "kappa") return SweepAxis::kappa;
    if (value == "rho") return SweepAxis::rho;
    if (value == "alpha") return SweepAxis::alpha;
    throw ParseError("unknown sweep axis '" + value + "'");
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Scenario sc;
    sc.market.r = 0.0;
    sc.market.v0 = 1.0;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        LineContext ctx{origin, line_no};
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') ctx.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "market" && section != "constraint" && section != "sweep" &&
                section != "wel" && section != "mc" && section != "output" &&
                section != "pcsv") {
                ctx.fail("unknown section [" + section + "]");
            }
            if (section == "sweep") sc.has_sweep = true;
            if (section == "pcsv") sc.has_pcsv = true;
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) ctx.fail("expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) ctx.fail("empty key");
        if (value.empty()) ctx.fail("empty value for key '" + key + "'");
        if (section.empty()) ctx.fail("key '" + key + "' outside any section");

        if (section == "market") {
            if (key == "r") sc.market.r = parse_double(value, ctx);
            else if (key == "eta") sc.market.eta = parse_double(value, ctx);
            else if (key == "kappa") sc.market.kappa = parse_double(value, ctx);
            else if (key == "theta") sc.market.theta = parse_double(value, ctx);
            else if (key == "sigma") sc.market.sigma = parse_double(value, ctx);
            else if (key == "rho") sc.market.rho = parse_double(value, ctx);
            else if (key == "z0") sc.market.z0 = parse_double(value, ctx);
            else if (key == "b") sc.market.b = parse_double(value, ctx);
            else if (key == "T") sc.market.T = parse_double(value, ctx);
            else if (key == "v0") sc.market.v0 = parse_double(value, ctx);
            else ctx.fail("unknown key '" + key + "' in [market]");
        } else if (section == "constraint") {
            if (key == "alpha") sc.K.alpha = parse_extended(value, ctx);
            else if (key == "beta") sc.K.beta = parse_extended(value, ctx);
            else ctx.fail("unknown key '" + key + "' in [constraint]");
        } else if (section == "sweep") {
            if (key == "axis") {
                try {
                    sc.sweep_axis = parse_sweep_axis(value);
                } catch (const ParseError& e) {
                    ctx.fail(e.what());
                }
            } else if (key == "from") {
                sc.sweep_from = parse_double(value, ctx);
            } else if (key == "to") {
                sc.sweep_to = parse_double(value, ctx);
            } else if (key == "points") {
                sc.sweep_points = static_cast<int>(parse_int(value, ctx));
            } else if (key == "strategy") {
                try {
                    sc.sweep_strategy = parse_strategy_kind(value, sc.sweep_constant_value);
                } catch (const ParseError& e) {
                    ctx.fail(e.what());
                }
            } else if (key == "constant_value") {
                sc.sweep_constant_value = parse_double(value, ctx);
            } else {
                ctx.fail("unknown key '" + key + "' in [sweep]");
            }
        } else if (section == "wel") {
            if (key == "strategy") {
                try {
                    sc.wel_strategy = parse_strategy_kind(value, sc.wel_constant_value);
                } catch (const ParseError& e) {
                    ctx.fail(e.what());
                }
            } else if (key == "constant_value") {
                sc.wel_constant_value = parse_double(value, ctx);
            } else {
                ctx.fail("unknown key '" + key + "' in [wel]");
            }
        } else if (section == "mc") {
            if (key == "paths") sc.mc.paths = parse_int(value, ctx);
            else if (key == "steps_per_year") sc.mc.steps_per_year = static_cast<int>(parse_int(value, ctx));
            else if (key == "seed") sc.mc.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
            else if (key == "antithetic") sc.mc.antithetic = parse_bool(value, ctx);
            else ctx.fail("unknown key '" + key + "' in [mc]");
        } else if (section == "output") {
            if (key == "grid") sc.grid = static_cast<int>(parse_int(value, ctx));
            else ctx.fail("unknown key '" + key + "' in [output]");
        } else { // pcsv
            if (key == "d") sc.pcsv.d = static_cast<int>(parse_int(value, ctx));
            else if (key == "A") sc.pcsv.A = parse_matrix(value, ctx);
            else if (key == "eta") sc.pcsv.eta = parse_vector(value, ctx);
            else if (key == "kappa") assign_factor_field(sc.pcsv, parse_vector(value, ctx), &PcsvFactor::kappa);
            else if (key == "theta") assign_factor_field(sc.pcsv, parse_vector(value, ctx), &PcsvFactor::theta);
            else if (key == "sigma") assign_factor_field(sc.pcsv, parse_vector(value, ctx), &PcsvFactor::sigma);
            else if (key == "rho") assign_factor_field(sc.pcsv, parse_vector(value, ctx), &PcsvFactor::rho);
            else if (key == "z0") assign_factor_field(sc.pcsv, parse_vector(value, ctx), &PcsvFactor::z0);
            else if (key == "beta") sc.pcsv.beta_caps = parse_vector(value, ctx);
            else ctx.fail("unknown key '" + key + "' in [pcsv]");
        }
    }

    if (sc.grid < 2) throw ParseError(origin + ": [output] grid must be >= 2");
    if (sc.has_sweep && sc.sweep_points < 1) {
        throw ParseError(origin + ": [sweep] needs points >= 1");
    }
    if (sc.has_pcsv) {
        sc.pcsv.r = sc.market.r;
        sc.pcsv.b = sc.market.b;
        sc.pcsv.T = sc.market.T;
        sc.pcsv.v0 = sc.market.v0;
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::string fmt_g17(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace svport
