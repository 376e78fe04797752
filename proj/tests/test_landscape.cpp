#include "lgk/landscape.hpp"
#include "test_util.hpp"
#include <algorithm>
#include <vector>

using namespace lgk;

static ModelParams p_small() {
    ModelParams p;
    p.u1 = Rat(3);
    p.u2 = Rat(1);
    p.delta = Rat(18, 5);
    p.l0 = 12;
    return p;
}

static ModelParams p_paperlike() {
    ModelParams p;
    p.u1 = Rat(3);
    p.u2 = Rat(1);
    p.delta = Rat(379, 100);
    p.l0 = 40;
    return p;
}

// Set a row segment [x0, x1] at height y.
static void seg(Config& c, int y, int x0, int x1) {
    for (int x = x0; x <= x1; ++x) c.set(x, y, true);
}

// ==== rectangle placement and named families ====

static void test_rect_config() {
    Config r = make_rect_config(12, RectSpec{5, 3}, 3, 4);
    REQUIRE(r.count_interior() == 15, "cells placed");
    GeomSummary g = summarize(r);
    REQUIRE(g.rect_w() == 5 && g.rect_h() == 3 && g.v == 0, "exact rectangle");
    REQUIRE_THROWS(make_rect_config(12, RectSpec{13, 1}, 1, 1), DomainError, "too wide");
    REQUIRE_THROWS(make_rect_config(12, RectSpec{5, 3}, 9, 1), DomainError, "anchor too far right");
    REQUIRE_THROWS(make_rect_config(12, RectSpec{5, 3}, 1, 11), DomainError, "anchor too high");
    (void)make_rect_config(12, RectSpec{5, 3}, 8, 10); // tight fit is fine
}

static void test_domino_and_standard() {
    REQUIRE_THROWS(classify_domino(2), DomainError, "dominoes start at s=3");
    REQUIRE(classify_domino(3).rect == (RectSpec{2, 1}), "s=3");
    REQUIRE(classify_domino(3).kind == DominoKind::dom0, "s=3 kind");
    REQUIRE(classify_domino(6).rect == (RectSpec{4, 2}), "s=6");
    REQUIRE(classify_domino(7).rect == (RectSpec{4, 3}), "s=7");
    REQUIRE(classify_domino(7).kind == DominoKind::dom1, "s=7 kind");
    REQUIRE(classify_domino(8).rect == (RectSpec{5, 3}), "s=8");
    for (int s = 3; s <= 40; ++s) {
        RectSpec r = classify_domino(s).rect;
        REQUIRE(r.l1 + r.l2 == s, "semiperimeter preserved");
        REQUIRE(r.l1 == 2 * r.l2 || r.l1 == 2 * r.l2 - 1 || r.l1 == 2 * r.l2 - 2,
                "near-domino aspect");
    }

    DerivedConstants dc = derive_constants(p_small()); // lbar = 6
    StandardRect s10 = classify_standard(10, dc);
    REQUIRE(s10.rect == (RectSpec{8, 2}) && s10.kind == StandardKind::st0, "even split");
    REQUIRE(!s10.quasi.has_value(), "0-st has no companion");
    StandardRect s11 = classify_standard(11, dc);
    REQUIRE(s11.rect == (RectSpec{8, 3}) && s11.kind == StandardKind::st1, "odd split");
    REQUIRE(s11.quasi.has_value() && *s11.quasi == (RectSpec{9, 2}), "companion rectangle");
}

// ==== growth and shrink barriers ====

static void test_barriers() {
    ModelParams p = p_small();
    REQUIRE(barrier(BarrierKind::add_row, 5, 3, p) == Rat(31, 5), "add row");
    REQUIRE(barrier(BarrierKind::add_column, 5, 3, p) == Rat(21, 5), "add column");
    REQUIRE(barrier(BarrierKind::remove_row, 5, 3, p) == Rat(26, 5), "remove row");
    REQUIRE(barrier(BarrierKind::remove_column, 5, 3, p) == Rat(22, 5), "remove column");
    REQUIRE(barrier(BarrierKind::row_to_column, 3, 5, p) == Rat(18, 5), "row to column, tall");
    REQUIRE(barrier(BarrierKind::row_to_column, 5, 3, p) == Rat(24, 5), "row to column, wide");
    REQUIRE(barrier(BarrierKind::column_to_row, 5, 3, p) == Rat(28, 5), "column to row, wide");
    REQUIRE(barrier(BarrierKind::column_to_row, 3, 5, p) == Rat(34, 5), "column to row, tall");
    REQUIRE_THROWS(barrier(BarrierKind::add_row, 0, 3, p), DomainError, "degenerate side");

    // the strong-regime comparison chain
    DerivedConstants dc = derive_constants(p);
    REQUIRE(barrier(BarrierKind::add_column, 5, 3, p) < barrier(BarrierKind::add_row, 5, 3, p),
            "columns are the cheap growth direction");
    REQUIRE(barrier(BarrierKind::add_column, 5, 3, p) <
                barrier(BarrierKind::column_to_row, 5, 3, p),
            "growth beats reshaping for wide rectangles");
    (void)dc;
}

static void test_compare_barriers() {
    ModelParams p = p_small();
    DerivedConstants dc = derive_constants(p);

    BarrierComparison d = compare_barriers(2, 2, dc, p);
    REQUIRE(d.region == BarrierRegion::Dp, "R(2,2) is the tie point");
    REQUIRE(d.minimal.size() == 2, "two minimal mechanisms");

    REQUIRE(compare_barriers(4, 2, dc, p).region == BarrierRegion::Ap, "R(4,2) shrinks");
    REQUIRE(compare_barriers(3, 4, dc, p).region == BarrierRegion::Bp, "R(3,4) reshapes");
    REQUIRE(compare_barriers(5, 3, dc, p).region == BarrierRegion::Cp, "R(5,3) grows");

    // region tags reproduce the brute-force cheapest mechanism on the grid
    std::vector<BarrierKind> kinds = {BarrierKind::add_row,       BarrierKind::add_column,
                                      BarrierKind::remove_row,    BarrierKind::remove_column,
                                      BarrierKind::row_to_column, BarrierKind::column_to_row};
    for (int l2 = 1; l2 <= 29; ++l2)
        for (int l1 = l2 + 1; l1 <= 30; ++l1) {
            Rat best = barrier(kinds[0], l1, l2, p);
            for (BarrierKind k : kinds) {
                Rat b = barrier(k, l1, l2, p);
                if (b < best) best = b;
            }
            std::vector<BarrierKind> argmin;
            for (BarrierKind k : kinds)
                if (barrier(k, l1, l2, p) == best) argmin.push_back(k);

            BarrierComparison c = compare_barriers(l1, l2, dc, p);
            REQUIRE(c.minimal == argmin, "minimal set at R(" << l1 << "," << l2 << ")");
            BarrierRegion want = l2 <= dc.l2star - 1 ? BarrierRegion::Ap : BarrierRegion::Cp;
            REQUIRE(c.region == want, "region at R(" << l1 << "," << l2 << ")");
            bool has_rc = std::find(argmin.begin(), argmin.end(), BarrierKind::remove_column) !=
                          argmin.end();
            bool has_ac = std::find(argmin.begin(), argmin.end(), BarrierKind::add_column) !=
                          argmin.end();
            REQUIRE(want == BarrierRegion::Ap ? has_rc : has_ac,
                    "subcritical iff l2 < l2star on the wide grid");
        }
}

// ==== basin membership ====

static void test_in_B() {
    ModelParams p = p_small();
    DerivedConstants dc = derive_constants(p);

    REQUIRE(in_B(Config::empty(12), dc).rule == "clause 1", "empty state is deep in B");
    REQUIRE(in_B(make_rect_config(12, {3, 3}, 2, 2), dc).rule == "clause 1", "small square");
    REQUIRE(in_B(make_rect_config(12, {7, 2}, 2, 2), dc).rule == "clause 2", "long slab");

    // 10-cell monotone cluster with two vacancies: s = sstar-1, p2 = l2star
    Config p2cl = Config::empty(12);
    seg(p2cl, 1, 1, 4);
    seg(p2cl, 2, 1, 4);
    seg(p2cl, 3, 1, 2);
    REQUIRE(in_B(p2cl, dc).rule == "clause 3", "proto-critical cluster");

    // R(5,2) plus one protuberance on top: s = sstar, v = pmax-1
    Config prot = Config::empty(12);
    seg(prot, 1, 1, 5);
    seg(prot, 2, 1, 5);
    prot.set(3, 3, true);
    REQUIRE(in_B(prot, dc).rule == "clause 4", "slab with protuberance");
    REQUIRE(hamiltonian(prot, p) == Rat(48, 5), "clause 4 witness energy");

    REQUIRE(!in_B(make_rect_config(12, {5, 3}, 4, 4), dc).member, "critical rectangle is out");
    REQUIRE(!in_B(make_rect_config(12, {4, 3}, 4, 4), dc).member, "full 2-domino is out");
    REQUIRE(in_B(make_rect_config(12, {4, 3}, 4, 4), dc).rule.empty(), "rule only when member");
    REQUIRE(!in_B(standard_states(12).all_full, dc).member, "full state is out");
}

// ==== the gate families ====

static Config p1_member(int ax, int ay) {
    // 11 cells in a 5x3 box: full bottom row, a one-gap middle row, and a
    // two-cell top run over intact columns; one extra horizontal run total.
    Config c = Config::empty(12);
    seg(c, ay + 0, ax + 0, ax + 4);
    seg(c, ay + 1, ax + 0, ax + 1);
    seg(c, ay + 1, ax + 3, ax + 4);
    seg(c, ay + 2, ax + 3, ax + 4);
    return c;
}

static Config p2_member(int ax, int ay, int fx, int fy) {
    // 10-cell monotone cluster circumscribed by R(4,3) plus one free particle
    Config c = Config::empty(12);
    seg(c, ay + 0, ax + 0, ax + 3);
    seg(c, ay + 1, ax + 0, ax + 3);
    seg(c, ay + 2, ax + 0, ax + 1);
    c.set(fx, fy, true);
    return c;
}

static void test_gate_families() {
    ModelParams p = p_small();
    DerivedConstants dc = derive_constants(p);
    REQUIRE(gate_particle_count(dc) == 11, "2*l2star^2 - 3*l2star + 2");
    REQUIRE(wulff_rect(dc) == (RectSpec{8, 3}), "Wulff circumscription");
    REQUIRE(wulff_rect(derive_constants(p_paperlike())) == (RectSpec{15, 5}),
            "Wulff circumscription, second parameter set");

    for (auto [ax, ay] : {std::pair{1, 1}, std::pair{4, 6}, std::pair{8, 10}}) {
        Config c = p1_member(ax, ay);
        MembershipVerdict m = in_P1(c, p, dc);
        REQUIRE(m.member && m.rule == "P1", "P1 member at " << ax << "," << ay);
        REQUIRE(hamiltonian(c, p) == dc.gamma, "members sit at gamma");
        REQUIRE(summarize(c).s == dc.sstar, "P1 semiperimeter");
        REQUIRE(c.count_interior() == gate_particle_count(dc), "P1 particle count");
        REQUIRE(in_P(c, p, dc).rule == "P1", "union gate sees P1");
    }

    Config c2 = p2_member(3, 3, 10, 10);
    MembershipVerdict m2 = in_P2(c2, p, dc);
    REQUIRE(m2.member && m2.rule == "P2", "P2 member");
    REQUIRE(hamiltonian(c2, p) == dc.gamma, "P2 energy");
    REQUIRE(summarize(c2).s == dc.sstar - 1, "P2 semiperimeter");
    REQUIRE(c2.count_interior() == gate_particle_count(dc), "P2 particle count");
    REQUIRE(in_B(c2, dc).member, "P2 lies inside B");
    REQUIRE(in_P(c2, p, dc).rule == "P2", "union gate sees P2");

    // near misses
    Config no_free = p2_member(3, 3, 10, 10);
    no_free.set(10, 10, false);
    REQUIRE(!in_P2(no_free, p, dc).member, "P2 needs the free particle");
    Config extra = p1_member(4, 4);
    extra.set(10, 10, true);
    REQUIRE(!in_P1(extra, p, dc).member, "P1 forbids free particles");
    Config slab = Config::empty(12);
    seg(slab, 1, 1, 5);
    seg(slab, 2, 1, 5);
    slab.set(3, 3, true);
    REQUIRE(!in_P1(slab, p, dc).member, "protuberance shape lacks the broken row");
    REQUIRE(!in_P(Config::empty(12), p, dc).member, "empty state is not the gate");

    // weak-regime gate guard
    REQUIRE(in_P_weak(c2, p, dc).rule == "not-applicable", "weak gate needs the weak regime");
    ModelParams w;
    w.u1 = Rat(3);
    w.u2 = Rat(2);
    w.delta = Rat(47, 10);
    w.l0 = 12;
    DerivedConstants wdc = derive_constants(w);
    REQUIRE(in_P_weak(Config::empty(12), w, wdc).rule != "not-applicable",
            "weak gate evaluates in the weak regime");
}

// ==== transition tube ====

static void test_region_T() {
    DerivedConstants dc = derive_constants(p_small());
    REQUIRE(region_T(1, 1, dc, 12) == TRegion::T1, "seed rectangle");
    REQUIRE(region_T(4, 2, dc, 12) == TRegion::T1, "near-domino");
    REQUIRE(region_T(3, 3, dc, 12) == TRegion::T1, "the special square");
    REQUIRE(region_T(5, 2, dc, 12) == TRegion::outside, "too wide for the tube");
    REQUIRE(region_T(4, 3, dc, 12) == TRegion::T2, "critical strip start");
    REQUIRE(region_T(11, 3, dc, 12) == TRegion::T2, "critical strip end");
    REQUIRE(region_T(12, 3, dc, 12) == TRegion::T3, "full-width strip");
    REQUIRE(region_T(11, 5, dc, 12) == TRegion::T3, "thick full-width slab");
    REQUIRE(region_T(6, 4, dc, 12) == TRegion::outside, "between tubes");
    REQUIRE(std::string(t_region_str(TRegion::T2)) == "T2", "region text");
    REQUIRE_THROWS(region_T(0, 1, dc, 12), DomainError, "degenerate side rejected");
}

// ==== proof inequality battery ====

static void test_inequalities() {
    ModelParams p = p_small();
    DerivedConstants dc = derive_constants(p);
    InequalityReport r = verify_proof_inequalities(p, dc, 10);
    REQUIRE(r.all_pass, "battery passes on P_small");
    REQUIRE(r.families.size() == 26, "family count");
    bool found = false;
    for (const auto& f : r.families) {
        if (f.applicable) REQUIRE(f.pass, "family " << f.name);
        if (f.name == "gamma_closed_forms") found = true;
    }
    REQUIRE(found, "closed-form family present");

    ModelParams q = p_paperlike();
    REQUIRE(verify_proof_inequalities(q, derive_constants(q), 10).all_pass,
            "battery passes on P_paperlike");

    REQUIRE_THROWS(verify_proof_inequalities(p, dc, -1), DomainError, "negative k rejected");
    ModelParams w;
    w.u1 = Rat(3);
    w.u2 = Rat(2);
    w.delta = Rat(47, 10);
    w.l0 = 12;
    REQUIRE_THROWS(verify_proof_inequalities(w, derive_constants(w), 5), DomainError,
                   "battery is strong-regime only");
}

int main() {
    test_rect_config();
    test_domino_and_standard();
    test_barriers();
    test_compare_barriers();
    test_in_B();
    test_gate_families();
    test_region_T();
    test_inequalities();
    return test_summary("test_landscape");
}
