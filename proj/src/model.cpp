#include "lgk/model.hpp"

#include <cctype>
#include <numeric>

namespace lgk {

// ==== rational parsing ====

static long long parse_ll(const std::string& s, const char* what) {
    if (s.empty()) throw ParseError(std::string("empty ") + what);
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError(std::string("malformed ") + what + ": " + s);
    for (size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            throw ParseError(std::string("malformed ") + what + ": " + s);
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        throw ParseError(std::string("out of range ") + what + ": " + s);
    }
}

Rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long long num = parse_ll(text.substr(0, slash), "numerator");
        long long den = parse_ll(text.substr(slash + 1), "denominator");
        if (den == 0) throw ParseError("zero denominator: " + text);
        return Rat(num, den);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
        if (fp.empty()) throw ParseError("malformed decimal: " + text);
        bool neg = !ip.empty() && ip[0] == '-';
        if (ip.empty() || ip == "-" || ip == "+") ip += '0';
        long long whole = parse_ll(ip, "integer part");
        long long frac = parse_ll(fp, "fractional part");
        if (fp.size() > 18) throw ParseError("decimal too long: " + text);
        long long den = 1;
        for (size_t k = 0; k < fp.size(); ++k) den *= 10;
        Rat r = Rat(whole) + (neg ? -Rat(frac, den) : Rat(frac, den));
        return r;
    }
    return Rat(parse_ll(text, "integer"));
}

std::string rat_str(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

const char* regime_str(Regime r) {
    switch (r) {
        case Regime::strong: return "strong";
        case Regime::weak: return "weak";
        default: return "neither";
    }
}

// ==== derived constants ====

Rat rect_energy(int l1, int l2, const ModelParams& p) {
    if (l1 < 0 || l2 < 0) throw DomainError("rect_energy: negative side");
    if (l1 == 0 || l2 == 0) return Rat(0);
    Rat eps = p.u1 + p.u2 - p.delta;
    return p.u1 * l2 + p.u2 * l1 - eps * Rat(l1) * Rat(l2);
}

DerivedConstants derive_constants(const ModelParams& p) {
    if (p.u1 <= Rat(0) || p.u2 <= Rat(0)) throw DomainError("couplings must be positive");
    if (!(p.delta > p.u1 && p.delta < p.u1 + p.u2))
        throw DomainError("delta outside (u1, u1+u2)");

    DerivedConstants dc;
    dc.eps = p.u1 + p.u2 - p.delta;

    if (p.u1 > Rat(2) * p.u2) dc.regime = Regime::strong;
    else if (p.u2 < p.u1 && p.u1 < Rat(2) * p.u2) dc.regime = Regime::weak;
    else dc.regime = Regime::neither;
    if (p.strict && dc.regime == Regime::neither)
        throw DomainError("regime: neither (isotropic or boundary anisotropy)");

    Rat q2 = p.u2 / dc.eps;
    if (p.strict && rat_is_integer(q2))
        throw DomainError("u2/eps is an integer: critical size is ambiguous");
    dc.l2star = static_cast<int>(rat_floor(q2).numerator()) + 1;
    dc.deltafrac = Rat(dc.l2star) - q2;
    dc.l1star = static_cast<int>(rat_floor(p.u1 / dc.eps).numerator()) + 1;
    dc.lbar = static_cast<int>(rat_floor((p.u1 - p.u2) / dc.eps).numerator()) + 1;
    dc.sstar = 3 * dc.l2star - 1;
    dc.vstar = Rat(2) * p.delta - p.u1;

    // two closed forms of the communication height; they agree identically
    Rat g1 = rect_energy(2 * dc.l2star - 2, dc.l2star, p) + dc.eps * (dc.l2star - 1) + p.delta;
    Rat g2 = rect_energy(2 * dc.l2star - 1, dc.l2star - 1, p) + p.delta - p.u2 + p.u1;
    if (g1 != g2) throw DomainError("internal: gamma closed forms disagree");
    dc.gamma = g1;
    return dc;
}

// ==== configurations ====

Config Config::empty(int l0) {
    if (l0 < 1) throw DomainError("l0 must be >= 1");
    Config c;
    c.l0 = l0;
    c.side = l0 + 2;
    c.occ.assign(static_cast<size_t>(c.side) * c.side, 0);
    return c;
}

int Config::count() const {
    int n = 0;
    for (uint8_t v : occ) n += v;
    return n;
}

int Config::count_interior() const {
    int n = 0;
    for (int y = 1; y <= l0; ++y)
        for (int x = 1; x <= l0; ++x) n += occ[idx(x, y)];
    return n;
}

StandardStates standard_states(int l0) {
    StandardStates st{Config::empty(l0), Config::empty(l0)};
    for (int y = 1; y <= l0; ++y)
        for (int x = 1; x <= l0; ++x) st.all_full.set(x, y, true);
    return st;
}

Rat hamiltonian(const Config& cfg, const ModelParams& p) {
    long long hb = 0, vb = 0, n = 0;
    for (int y = 0; y < cfg.side; ++y)
        for (int x = 0; x < cfg.side; ++x) {
            if (!cfg.at(x, y)) continue;
            ++n;
            if (cfg.interior(x, y)) {
                if (cfg.interior(x + 1, y) && cfg.at(x + 1, y)) ++hb;
                if (cfg.interior(x, y + 1) && cfg.at(x, y + 1)) ++vb;
            }
        }
    return -p.u1 * hb - p.u2 * vb + p.delta * n;
}

double gibbs_weight_log(const Config& cfg, const ModelParams& p) {
    return -p.beta * rat_double(hamiltonian(cfg, p));
}

// ==== grid text ====

std::string grid_format(const Config& cfg) {
    std::string out;
    out.reserve(static_cast<size_t>(cfg.side + 1) * cfg.side);
    for (int y = cfg.side - 1; y >= 0; --y) {
        for (int x = 0; x < cfg.side; ++x) out += cfg.at(x, y) ? '#' : '.';
        out += '\n';
    }
    return out;
}

Config grid_parse(const std::string& text) {
    std::vector<std::string> rows;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty()) rows.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    if (!cur.empty()) rows.push_back(cur);
    if (rows.size() < 3) throw ParseError("grid: need at least 3 rows");
    int side = static_cast<int>(rows.size());
    Config cfg = Config::empty(side - 2);
    for (int r = 0; r < side; ++r) {
        if (static_cast<int>(rows[r].size()) != side)
            throw ParseError("grid: row " + std::to_string(r) + " has length " +
                             std::to_string(rows[r].size()) + ", expected " + std::to_string(side));
        int y = side - 1 - r;
        for (int x = 0; x < side; ++x) {
            char ch = rows[r][static_cast<size_t>(x)];
            if (ch == '#') cfg.set(x, y, true);
            else if (ch != '.') throw ParseError(std::string("grid: bad character '") + ch + "'");
        }
    }
    return cfg;
}

} // namespace lgk
