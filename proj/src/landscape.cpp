#include "lgk/landscape.hpp"
#include "lgk/error.hpp"

#include <algorithm>
#include <sstream>

namespace lgk {

// ==== rectangle configurations ====

Config make_rect_config(int l0, const RectSpec& r, int ax, int ay) {
    if (r.l1 < 0 || r.l2 < 0) throw DomainError("rectangle sides must be nonnegative");
    if (ax < 1 || ay < 1 || ax + r.l1 - 1 > l0 || ay + r.l2 - 1 > l0)
        throw DomainError("rectangle does not fit in the interior");
    Config c = Config::empty(l0);
    for (int y = ay; y < ay + r.l2; ++y)
        for (int x = ax; x < ax + r.l1; ++x) c.set(x, y, true);
    return c;
}

// ==== dominoes and standard rectangles ====

DominoRect classify_domino(int s) {
    if (s < 3) throw DomainError("semiperimeter too small for a domino rectangle");
    int rem = s % 3, n = s / 3;
    switch (rem) {
        case 0: return {{2 * n, n}, DominoKind::dom0};
        case 1: return {{2 * n, n + 1}, DominoKind::dom1};
        default: return {{2 * n + 1, n + 1}, DominoKind::dom2};
    }
}

StandardRect classify_standard(int s, const DerivedConstants& dc) {
    if (s <= dc.lbar + 2) throw DomainError("semiperimeter too small for a standard rectangle");
    int d = s - dc.lbar;
    if (d % 2 == 0) return {{(s + dc.lbar) / 2, d / 2}, StandardKind::st0, std::nullopt};
    RectSpec r{(s + dc.lbar - 1) / 2, (d + 1) / 2};
    return {r, StandardKind::st1, RectSpec{r.l1 + 1, r.l2 - 1}};
}

// ==== barriers ====

const char* barrier_kind_str(BarrierKind k) {
    switch (k) {
        case BarrierKind::add_row: return "add_row";
        case BarrierKind::add_column: return "add_column";
        case BarrierKind::remove_row: return "remove_row";
        case BarrierKind::remove_column: return "remove_column";
        case BarrierKind::row_to_column: return "row_to_column";
        default: return "column_to_row";
    }
}

Rat barrier(BarrierKind k, int l1, int l2, const ModelParams& p) {
    if (l1 < 1 || l2 < 1) throw DomainError("barrier requires sides >= 1");
    Rat eps = p.u1 + p.u2 - p.delta;
    switch (k) {
        case BarrierKind::add_row: return 2 * p.delta - p.u2;
        case BarrierKind::add_column: return 2 * p.delta - p.u1;
        case BarrierKind::remove_row: return eps * (l1 - 2) + p.u1 + p.u2;
        case BarrierKind::remove_column: return eps * (l2 - 2) + p.u1 + p.u2;
        case BarrierKind::row_to_column:
            if (l1 < l2) return p.delta;
            return p.u1 + p.u2 + eps * (l1 - l2);
        default: // column_to_row
            if (l1 > l2) return p.delta - p.u2 + p.u1;
            return p.delta - p.u2 + p.u1 + eps * (l2 - l1 + 1);
    }
}

BarrierComparison compare_barriers(int l1, int l2, const DerivedConstants& dc,
                                   const ModelParams& p) {
    if (l1 < 1 || l2 < 1) throw DomainError("barrier comparison requires sides >= 1");
    (void)p;
    if (l2 <= dc.l2star - 1 && l1 == 2 * l2 - 2)
        return {BarrierRegion::Dp, {BarrierKind::remove_column, BarrierKind::row_to_column}};
    if (l1 <= l2) return {BarrierRegion::Bp, {BarrierKind::row_to_column}};
    if (l2 <= dc.l2star - 1 && l1 > 2 * l2 - 2)
        return {BarrierRegion::Ap, {BarrierKind::remove_column}};
    if (l2 >= dc.l2star && l1 >= l2 + dc.l2star - 2)
        return {BarrierRegion::Cp, {BarrierKind::add_column}};
    return {BarrierRegion::Bp, {BarrierKind::row_to_column}};
}

// ==== membership predicates ====

namespace {

std::string geom_witness(const GeomSummary& g) {
    std::ostringstream os;
    os << "n=" << g.n << " s=" << g.s << " p1=" << g.p1 << " p2=" << g.p2
       << " v=" << g.v << " g1p=" << g.g1p << " g2p=" << g.g2p
       << " clusters=" << g.clusters;
    if (g.cl_size > 0) os << " rect=" << g.rect_w() << "x" << g.rect_h();
    return os.str();
}

} // namespace

MembershipVerdict in_B(const Config& cfg, const DerivedConstants& dc) {
    GeomSummary g = summarize(cfg);
    int pmin = std::min(g.p1, g.p2), pmax = std::max(g.p1, g.p2);
    MembershipVerdict res;
    res.reasons = geom_witness(g);
    if (g.s <= dc.sstar - 2) {
        res.member = true;
        res.rule = "clause 1";
    } else if (g.s >= dc.sstar - 1 && g.p2 <= dc.l2star - 1) {
        res.member = true;
        res.rule = "clause 2";
    } else if (g.s == dc.sstar - 1 && g.p2 >= dc.l2star && g.v >= pmin - 1) {
        res.member = true;
        res.rule = "clause 3";
    } else if (g.s >= dc.sstar && g.p2 == dc.l2star && g.v >= pmax - 1) {
        res.member = true;
        res.rule = "clause 4";
    }
    return res;
}

MembershipVerdict in_P1(const Config& cfg, const ModelParams& p, const DerivedConstants& dc) {
    GeomSummary g = summarize(cfg);
    MembershipVerdict res;
    res.reasons = geom_witness(g);
    bool ok = g.n == 0 && g.clusters == 1 && g.g1p == 0 && g.g2p == 1 &&
              g.v == 2LL * dc.l2star - 2 && g.cl_size > 0 &&
              g.rect_w() == 2 * dc.l2star - 1 && g.rect_h() == dc.l2star;
    if (ok) {
        // every member sits exactly at the saddle level
        if (hamiltonian(cfg, p) != dc.gamma)
            throw DomainError("internal: P1 member energy differs from gamma");
        res.member = true;
        res.rule = "P1";
    }
    return res;
}

MembershipVerdict in_P2(const Config& cfg, const ModelParams& p, const DerivedConstants& dc) {
    GeomSummary g = summarize(cfg);
    MembershipVerdict res;
    res.reasons = geom_witness(g);
    bool ok = g.n == 1 && g.clusters == 1 && g.monotone &&
              g.v == dc.l2star - 1 && g.cl_size > 0 &&
              g.rect_w() == 2 * dc.l2star - 2 && g.rect_h() == dc.l2star;
    if (ok) {
        if (hamiltonian(cfg, p) != dc.gamma)
            throw DomainError("internal: P2 member energy differs from gamma");
        res.member = true;
        res.rule = "P2";
    }
    return res;
}

MembershipVerdict in_P(const Config& cfg, const ModelParams& p, const DerivedConstants& dc) {
    MembershipVerdict r1 = in_P1(cfg, p, dc);
    if (r1.member) return r1;
    return in_P2(cfg, p, dc);
}

MembershipVerdict in_P_weak(const Config& cfg, const ModelParams& p, const DerivedConstants& dc) {
    MembershipVerdict res;
    if (dc.regime != Regime::weak) {
        res.rule = "not-applicable";
        res.reasons = "regime is not weak";
        return res;
    }
    int st = dc.l1star + dc.l2star - 1;
    StandardRect sr = classify_standard(st, dc);
    GeomSummary g = summarize(cfg);
    res.reasons = geom_witness(g);
    bool ok = g.n == 1 && g.clusters == 1 && g.monotone &&
              g.v == sr.rect.l2 - 1 && g.cl_size > 0 &&
              g.rect_w() == sr.rect.l1 + 1 && g.rect_h() == sr.rect.l2;
    if (ok) {
        res.member = true;
        res.rule = "P-weak";
    }
    (void)p;
    return res;
}

int gate_particle_count(const DerivedConstants& dc) {
    return 2 * dc.l2star * dc.l2star - 3 * dc.l2star + 2;
}

// ==== transition regions ====

const char* t_region_str(TRegion t) {
    switch (t) {
        case TRegion::T1: return "T1";
        case TRegion::T2: return "T2";
        case TRegion::T3: return "T3";
        default: return "outside";
    }
}

TRegion region_T(int l1, int l2, const DerivedConstants& dc, int l0) {
    if (l1 < 1 || l2 < 1) throw DomainError("region test requires sides >= 1");
    bool t1_band = l2 <= dc.l2star - 1 && 2 * l2 - 3 <= l1 && l1 <= 2 * l2;
    bool t1_extra = l1 == 2 * dc.l2star - 3 && l2 == dc.l2star;
    if (t1_band || t1_extra) return TRegion::T1;
    if (l2 == dc.l2star && l2 + dc.l2star - 2 <= l1 && l1 < l0) return TRegion::T2;
    if (l2 >= dc.l2star && l0 - 1 <= l1 && l1 <= l0) return TRegion::T3;
    return TRegion::outside;
}

// ==== proof inequality battery ====

namespace {

struct FamilyCtx {
    const ModelParams& p;
    const DerivedConstants& dc;
    int k_max;
    std::vector<InequalityFamilyResult>* out;

    // algebraic rectangle energy, tolerant of degenerate sides
    Rat hr(long long w, long long h) const {
        return p.u1 * Rat(h) + p.u2 * Rat(w) - dc.eps * Rat(w * h);
    }
};

void note_fail(InequalityFamilyResult& r, const std::string& msg) {
    if (r.pass) {
        r.pass = false;
        r.first_violation = msg;
    }
}

void finish(FamilyCtx& c, InequalityFamilyResult r) {
    if (r.checked == 0) r.applicable = false;
    c.out->push_back(std::move(r));
}

std::string kx_tag(int k, int x) {
    std::ostringstream os;
    os << "k=" << k;
    if (x != INT32_MIN) os << " x=" << x;
    return os.str();
}

// Strict exceedance family over wide shallow rectangles:
//   H(R(2*l2star + k - a, l2star - hoff)) + m*delta > gamma     for k >= kmin,
// equivalent to   lhs > eps*(c0 - c1*deltafrac + k*(deltafrac - cd)).
// The equivalent linear form is checked against the direct one as a
// transcription guard; both must agree for every k.
void family_flat(FamilyCtx& c, const char* name, int a, int hoff, int m, Rat lhs,
                 int c0, int c1, int cd, int kmin) {
    InequalityFamilyResult r;
    r.name = name;
    r.pass = true;
    long long h = c.dc.l2star - hoff;
    for (int k = kmin; k <= c.k_max; ++k) {
        long long w = 2LL * c.dc.l2star + k - a;
        if (w < 1 || h < 1) continue;
        ++r.checked;
        Rat margin = c.hr(w, h) + m * c.p.delta - c.dc.gamma;
        Rat rhs = c.dc.eps * (Rat(c0) - c1 * c.dc.deltafrac + k * (c.dc.deltafrac - cd));
        if (margin != lhs - rhs) {
            note_fail(r, kx_tag(k, INT32_MIN) + ": closed form disagrees with direct evaluation");
            continue;
        }
        if (!(margin > 0))
            note_fail(r, kx_tag(k, INT32_MIN) + ": margin " + rat_str(margin) + " <= 0");
    }
    finish(c, std::move(r));
}

// Strict exceedance family over tall rectangles:
//   H(R(2*l2star - k - x, l2star + k)) + m*delta > gamma   for k >= 0, xlo <= x <= xhi,
// equivalent to eps*k^2 + k*(u1 - u2 - eps*l2star + x*eps) + C(x) > 0 with
//   C(x) = (m-1)*u1 + (m+1)*u2 - x*u2 - (m-2)*eps + (x-3)*eps*l2star.
void family_tall(FamilyCtx& c, const char* name, int m, int xlo, int xhi) {
    InequalityFamilyResult r;
    r.name = name;
    r.pass = true;
    Rat epsL = c.dc.eps * c.dc.l2star;
    for (int k = 0; k <= c.k_max; ++k) {
        for (int x = xlo; x <= xhi; ++x) {
            long long w = 2LL * c.dc.l2star - k - x;
            long long h = c.dc.l2star + k;
            if (w < 1 || h < 1) continue;
            ++r.checked;
            Rat margin = c.hr(w, h) + m * c.p.delta - c.dc.gamma;
            Rat cx = (m - 1) * c.p.u1 + (m + 1) * c.p.u2 - x * c.p.u2 - (m - 2) * c.dc.eps +
                     (x - 3) * epsL;
            Rat quad = c.dc.eps * k * k + k * (c.p.u1 - c.p.u2 - epsL + x * c.dc.eps) + cx;
            if (margin != quad) {
                note_fail(r, kx_tag(k, x) + ": closed form disagrees with direct evaluation");
                continue;
            }
            if (!(margin > 0))
                note_fail(r, kx_tag(k, x) + ": margin " + rat_str(margin) + " <= 0");
        }
    }
    finish(c, std::move(r));
}

// Strict exceedance family over near-critical rectangles with a full vacancy
// row, x running downward from 1:
//   H(R(2*l2star - x, l2star)) + eps*(2*l2star - x - 1) + m*delta > gamma,
// equivalent to
//   (m-1)*u1 + m*u2 > eps*(m - 1 + deltafrac + x*(1 - deltafrac)).
void family_top(FamilyCtx& c, const char* name, int m) {
    InequalityFamilyResult r;
    r.name = name;
    r.pass = true;
    for (int j = 0; j <= c.k_max; ++j) {
        int x = 1 - j;
        long long w = 2LL * c.dc.l2star - x;
        ++r.checked;
        Rat margin =
            c.hr(w, c.dc.l2star) + c.dc.eps * Rat(w - 1) + m * c.p.delta - c.dc.gamma;
        Rat lhs = (m - 1) * c.p.u1 + m * c.p.u2;
        Rat rhs = c.dc.eps * (Rat(m - 1) + c.dc.deltafrac + x * (1 - c.dc.deltafrac));
        if (margin != lhs - rhs) {
            note_fail(r, kx_tag(0, x) + ": closed form disagrees with direct evaluation");
            continue;
        }
        if (!(margin > 0)) note_fail(r, kx_tag(0, x) + ": margin " + rat_str(margin) + " <= 0");
    }
    finish(c, std::move(r));
}

} // namespace

InequalityReport verify_proof_inequalities(const ModelParams& p, const DerivedConstants& dc,
                                           int k_max) {
    if (dc.regime != Regime::strong)
        throw DomainError("inequality battery requires the strong anisotropy regime");
    if (k_max < 0) throw DomainError("k_max must be nonnegative");

    InequalityReport report;
    FamilyCtx c{p, dc, k_max, &report.families};
    const int L = dc.l2star;
    const Rat eps = dc.eps, df = dc.deltafrac;

    // wide shallow circumscribed rectangles, m free particles on top
    family_flat(c, "over_gamma_flat_2fp_1", 1, 1, 2, 2 * p.u2, 1, 0, 1, 1);
    family_flat(c, "over_gamma_flat_2fp_2", 2, 1, 2, 2 * p.u2, 2, 1, 1, 0);
    family_flat(c, "over_gamma_flat_2fp_3", 3, 1, 2, 2 * p.u2, 3, 2, 1, 1);
    family_flat(c, "over_gamma_flat_2fp_4", 4, 1, 2, 2 * p.u2, 4, 3, 1, 1);
    family_flat(c, "over_gamma_flat_2fp_5", 5, 1, 2, 2 * p.u2, 5, 4, 1, 1);
    family_flat(c, "over_gamma_flat_3fp_3s", 3, 2, 3, 5 * p.u2, 7, 4, 2, 1);
    family_flat(c, "over_gamma_flat_3fp_4", 4, 1, 3, p.u1 + 3 * p.u2, 5, 3, 1, 1);
    family_flat(c, "over_gamma_flat_3fp_4s", 4, 2, 3, 5 * p.u2, 9, 5, 2, 1);
    family_flat(c, "over_gamma_flat_3fp_5", 5, 1, 3, p.u1 + 3 * p.u2, 6, 4, 1, 1);
    family_flat(c, "over_gamma_flat_4fp_5s", 5, 2, 4, p.u1 + 6 * p.u2, 12, 6, 2, 1);
    family_flat(c, "over_gamma_flat_4fp_6", 6, 1, 4, 2 * p.u1 + 4 * p.u2, 8, 5, 1, 1);

    // tall circumscribed rectangles
    family_tall(c, "over_gamma_tall_2fp", 2, 2, 4);
    family_tall(c, "over_gamma_tall_3fp", 3, 2, 5);
    family_tall(c, "over_gamma_tall_4fp", 4, 2, 6);
    family_top(c, "over_gamma_top_2fp", 2);
    family_top(c, "over_gamma_top_3fp", 3);
    family_top(c, "over_gamma_top_4fp", 4);

    // saddle-touching families: the margins vanish exactly on the gate shapes
    {
        InequalityFamilyResult r;
        r.name = "gamma_touch_fp";
        r.pass = true;
        for (int k = 0; k <= k_max; ++k) {
            long long w = 2LL * L + k - 1;
            ++r.checked;
            Rat margin = c.hr(w, L) + eps * Rat(w - 1) + p.delta - dc.gamma;
            Rat form = p.u2 - eps * (1 - k * (1 - df));
            if (margin != form) {
                note_fail(r, kx_tag(k, INT32_MIN) + ": closed form disagrees");
                continue;
            }
            if (!(margin > 0))
                note_fail(r, kx_tag(k, INT32_MIN) + ": margin " + rat_str(margin) + " <= 0");
        }
        finish(c, std::move(r));
    }
    {
        InequalityFamilyResult r;
        r.name = "gamma_eq_protuberance";
        r.pass = true;
        for (int k = 0; k <= k_max; ++k) {
            long long w = 2LL * L + k - 1;
            ++r.checked;
            Rat margin = c.hr(w, L) + eps * Rat(w - 1) + p.u1 - dc.gamma;
            Rat form = k * eps * (1 - df);
            if (margin != form) {
                note_fail(r, kx_tag(k, INT32_MIN) + ": closed form disagrees");
                continue;
            }
            bool ok = k == 0 ? margin == Rat(0) : margin > 0;
            if (!ok)
                note_fail(r, kx_tag(k, INT32_MIN) + ": margin " + rat_str(margin) +
                                 (k == 0 ? " != 0" : " <= 0"));
        }
        finish(c, std::move(r));
    }
    {
        InequalityFamilyResult r;
        r.name = "gamma_eq_tall";
        r.pass = true;
        for (int k = 0; k <= k_max; ++k) {
            long long w = 2LL * L - k - 2, h = L + k;
            if (w < 1) continue;
            ++r.checked;
            Rat margin = c.hr(w, h) + eps * Rat(h - 1) + p.delta - dc.gamma;
            Rat form = eps * k * k + k * (p.u1 - p.u2 + 3 * eps - eps * L);
            if (margin != form) {
                note_fail(r, kx_tag(k, INT32_MIN) + ": closed form disagrees");
                continue;
            }
            bool ok = k == 0 ? margin == Rat(0) : margin > 0;
            if (!ok)
                note_fail(r, kx_tag(k, INT32_MIN) + ": margin " + rat_str(margin) +
                                 (k == 0 ? " != 0" : " <= 0"));
        }
        finish(c, std::move(r));
    }
    {
        InequalityFamilyResult r;
        r.name = "gamma_touch_column";
        r.pass = true;
        r.checked = 1;
        Rat margin = c.hr(2LL * L - 1, L) + eps * Rat(2 * L - 2) + p.delta - dc.gamma;
        if (margin != p.u2 - eps)
            note_fail(r, "closed form disagrees");
        else if (!(margin > 0))
            note_fail(r, "margin " + rat_str(margin) + " <= 0");
        finish(c, std::move(r));
    }

    // domino energies along the skeleton increase with n
    {
        InequalityFamilyResult r;
        r.name = "domino_energies_increasing";
        r.pass = true;
        auto h0 = [&](int n) { return p.u1 * n + 2 * p.u2 * n - 2 * eps * n * n; };
        auto h1 = [&](int n) { return p.u1 * (n + 1) + 2 * p.u2 * n - 2 * eps * n * (n + 1); };
        auto h2 = [&](int n) {
            return p.u1 * (n + 1) + p.u2 * (2 * n + 1) - eps * (n + 1) * (2 * n + 1);
        };
        for (int n = 1; n <= L - 1; ++n) {
            ++r.checked;
            if (h0(n) != c.hr(2LL * n, n)) note_fail(r, kx_tag(n, INT32_MIN) + ": 0-dom form");
            if (h1(n) != c.hr(2LL * n, n + 1)) note_fail(r, kx_tag(n, INT32_MIN) + ": 1-dom form");
        }
        for (int n = 0; n <= L - 2; ++n) {
            ++r.checked;
            if (h2(n) != c.hr(2LL * n + 1, n + 1))
                note_fail(r, kx_tag(n, INT32_MIN) + ": 2-dom form");
        }
        for (int n = 0; n <= L - 2; ++n) {
            ++r.checked;
            if (!(h0(n + 1) > h0(n))) note_fail(r, kx_tag(n, INT32_MIN) + ": 0-dom not increasing");
            if (!(h1(n + 1) > h1(n))) note_fail(r, kx_tag(n, INT32_MIN) + ": 1-dom not increasing");
        }
        for (int n = 0; n <= L - 3; ++n) {
            ++r.checked;
            if (!(h2(n + 1) > h2(n))) note_fail(r, kx_tag(n, INT32_MIN) + ": 2-dom not increasing");
        }
        // sufficient slope condition at the last index
        ++r.checked;
        if (!(Rat(L - 1) < (p.u1 + 2 * p.u2) / (4 * eps)))
            note_fail(r, "slope condition fails at n = l2star - 1");
        finish(c, std::move(r));
    }

    // comparison chain locating the global maximum of the stage peaks
    {
        InequalityFamilyResult r;
        r.name = "peak_comparison_chain";
        r.pass = true;
        auto g0 = [&](int n) {
            return p.u1 * n + 2 * p.u2 * n - 2 * eps * n * n - eps * n + p.delta + p.u1;
        };
        for (int n = 0; n <= L - 2; ++n) {
            ++r.checked;
            if (!(g0(n + 1) > g0(n)))
                note_fail(r, kx_tag(n, INT32_MIN) + ": conveyor peaks not increasing");
        }
        ++r.checked;
        if (g0(L - 1) != dc.gamma) note_fail(r, "peak at n = l2star - 1 is not gamma");
        ++r.checked;
        if (!(c.hr(2LL * L - 2, L) + 2 * p.delta - p.u1 < dc.gamma))
            note_fail(r, "1-dom stage peak not below gamma");
        ++r.checked;
        if (!(c.hr(2LL * L - 3, L - 1) < c.hr(2LL * L - 2, L)))
            note_fail(r, "2-dom stage peak not below 1-dom stage peak");
        ++r.checked;
        if (!(p.u2 < eps * L)) note_fail(r, "column stages not decreasing in width");
        ++r.checked;
        if (!(c.hr(2LL * L - 1, L) + 2 * p.delta - p.u1 < dc.gamma))
            note_fail(r, "first column stage peak not below gamma");
        finish(c, std::move(r));
    }

    // positive growth bracket used by the quadratic families
    {
        InequalityFamilyResult r;
        r.name = "growth_bracket_positive";
        r.pass = true;
        r.checked = 2;
        Rat bracket = p.u1 - p.u2 - eps * L + 3 * eps;
        if (!(bracket > eps * (2 - df)))
            note_fail(r, "bracket " + rat_str(bracket) + " not above eps*(2 - deltafrac)");
        else if (!(eps * (2 - df) > 0))
            note_fail(r, "eps*(2 - deltafrac) not positive");
        finish(c, std::move(r));
    }

    // the two closed forms of gamma and its expanded polynomial agree
    {
        InequalityFamilyResult r;
        r.name = "gamma_closed_forms";
        r.pass = true;
        r.checked = 3;
        Rat f1 = c.hr(2LL * L - 2, L) + eps * Rat(L - 1) + p.delta;
        Rat f2 = c.hr(2LL * L - 1, L - 1) + p.delta - p.u2 + p.u1;
        Rat expanded = p.u1 * L + 2 * p.u2 * L + p.u1 - p.u2 - 2 * eps * L * L +
                       3 * eps * L - 2 * eps;
        if (f1 != dc.gamma) note_fail(r, "first closed form differs");
        if (f2 != dc.gamma) note_fail(r, "second closed form differs");
        if (expanded != dc.gamma) note_fail(r, "expanded polynomial differs");
        finish(c, std::move(r));
    }

    // large full squares have negative energy and keep decreasing
    {
        InequalityFamilyResult r;
        r.name = "full_box_negative";
        r.pass = true;
        long long L0 = rat_floor((p.u1 + p.u2) / eps).numerator() + 1;
        for (long long s = L0; s <= L0 + k_max; ++s) {
            ++r.checked;
            if (!(c.hr(s, s) < 0))
                note_fail(r, "H(R(" + std::to_string(s) + "," + std::to_string(s) + ")) >= 0");
            if (!(c.hr(s + 1, s + 1) < c.hr(s, s)))
                note_fail(r, "square energies not decreasing at side " + std::to_string(s));
        }
        finish(c, std::move(r));
    }

    for (const auto& f : report.families)
        if (f.applicable && !f.pass) report.all_pass = false;
    return report;
}

RectSpec wulff_rect(const DerivedConstants& dc) {
    return {dc.l1star, dc.l2star};
}

} // namespace lgk
