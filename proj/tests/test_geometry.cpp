#include "lgk/geometry.hpp"
#include "test_util.hpp"
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

static Config transposed(const Config& c) {
    Config t = Config::empty(c.l0);
    for (int y = 0; y < c.side; ++y)
        for (int x = 0; x < c.side; ++x) t.set(y, x, c.at(x, y));
    return t;
}

static int mask_count(const std::vector<uint8_t>& m) {
    int n = 0;
    for (uint8_t b : m) n += b != 0;
    return n;
}

// ==== free particle classification ====

static void test_free_particles() {
    Config c = Config::empty(6);
    c.set(0, 3, true);  // ring: always free
    c.set(3, 3, true);  // isolated interior: free
    c.set(5, 5, true);  // pair below: bonded
    c.set(5, 4, true);
    std::vector<Site> fp = free_particles(c);
    REQUIRE(fp.size() == 2, "two free particles");

    // an interior particle whose only neighbour is on the ring is still free
    Config d = Config::empty(6);
    d.set(1, 3, true);
    d.set(0, 3, true);
    REQUIRE(free_particles(d).size() == 2, "ring neighbours do not bind");

    // cl_mask removes exactly the free particles
    std::vector<uint8_t> m = cl_mask(c);
    REQUIRE(mask_count(m) == 2, "cl_mask keeps the bonded pair");
    REQUIRE(m[c.idx(5, 5)] && m[c.idx(5, 4)], "cl_mask sites");
    REQUIRE(mask_count(cl_mask(d)) == 0, "cl_mask of free-only state is empty");
}

// ==== descriptors on hand-built shapes ====

static void test_summarize_rectangle() {
    Config c = Config::empty(12);
    for (int y = 4; y <= 6; ++y)
        for (int x = 3; x <= 7; ++x) c.set(x, y, true);
    GeomSummary g = summarize(c);
    REQUIRE(g.n == 0, "no free particles");
    REQUIRE(g.cl_size == 15, "cluster size");
    REQUIRE(g.p1 == 5 && g.p2 == 3, "projections");
    REQUIRE(g.s == 8, "semiperimeter");
    REQUIRE(g.g1 == 5 && g.g2 == 3, "one run per active line");
    REQUIRE(g.g1p == 0 && g.g2p == 0, "no extra runs");
    REQUIRE(g.v == 0, "no vacancies");
    REQUIRE(g.clusters == 1 && g.monotone, "single monotone cluster");
    REQUIRE(g.rect_w() == 5 && g.rect_h() == 3, "circumscribed rectangle");
    REQUIRE(g.rx0 == 3 && g.ry0 == 4 && g.rx1 == 7 && g.ry1 == 6, "rectangle corners");
}

static void test_summarize_shapes() {
    // 3x3 with the centre removed: one vacancy, one extra run both ways
    Config c = Config::empty(8);
    for (int y = 2; y <= 4; ++y)
        for (int x = 2; x <= 4; ++x) c.set(x, y, true);
    c.set(3, 3, false);
    GeomSummary g = summarize(c);
    REQUIRE(g.v == 1, "one vacancy");
    REQUIRE(g.g1p == 1 && g.g2p == 1, "the hole splits one column and one row");
    REQUIRE(!g.monotone, "not monotone");
    REQUIRE(g.s == 6, "s unchanged by the hole");

    // L shape: monotone, vacancies from the bounding box
    Config l = Config::empty(8);
    for (int x = 2; x <= 5; ++x) l.set(x, 2, true);
    l.set(2, 3, true);
    GeomSummary gl = summarize(l);
    REQUIRE(gl.monotone && gl.g1p == 0 && gl.g2p == 0, "L shape is monotone");
    REQUIRE(gl.v == 3, "bounding box minus cluster");
    REQUIRE(gl.p1 == 4 && gl.p2 == 2 && gl.s == 6, "L projections");

    // two separated dominoes: clusters = 2, projections count active lines
    Config d = Config::empty(8);
    d.set(2, 2, true);
    d.set(3, 2, true);
    d.set(6, 6, true);
    d.set(7, 6, true);
    GeomSummary gd = summarize(d);
    REQUIRE(gd.clusters == 2, "two clusters");
    REQUIRE(gd.n == 0, "dominoes are not free");
    REQUIRE(gd.p1 == 4 && gd.p2 == 2, "active lines across both clusters");
    REQUIRE(connected_components(d).size() == 2, "component list");

    // free particles only: empty cluster summary
    Config f = Config::empty(8);
    f.set(4, 4, true);
    GeomSummary gf = summarize(f);
    REQUIRE(gf.n == 1 && gf.cl_size == 0, "free particle excluded from the cluster");
    REQUIRE(gf.p1 == 0 && gf.p2 == 0 && gf.s == 0 && gf.v == 0, "empty descriptors");
}

// ==== transpose and positivity properties on random states ====

static uint64_t mix(uint64_t& s) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return s >> 33;
}

static void test_random_properties() {
    ModelParams p = p_small();
    p.l0 = 6;
    ModelParams q = p;
    q.u1 = p.u2;
    q.u2 = p.u1;
    uint64_t s = 2024;
    for (int trial = 0; trial < 200; ++trial) {
        Config c = Config::empty(6);
        for (int y = 0; y < c.side; ++y)
            for (int x = 0; x < c.side; ++x)
                if (mix(s) % 10 < 3) c.set(x, y, true);
        GeomSummary g = summarize(c);
        REQUIRE(g.g1p >= 0 && g.g2p >= 0 && g.v >= 0 && g.n >= 0, "descriptors non-negative");
        REQUIRE(g.s == g.p1 + g.p2, "s = p1 + p2");
        REQUIRE(g.monotone == (g.g1p + g.g2p == 0), "monotone iff no extra runs");
        REQUIRE(g.g1p == g.g1 - g.p1 && g.g2p == g.g2 - g.p2, "run excess definition");

        Config ct = transposed(c);
        GeomSummary t = summarize(ct);
        REQUIRE(t.p1 == g.p2 && t.p2 == g.p1, "transpose swaps projections");
        REQUIRE(t.g1 == g.g2 && t.g2 == g.g1, "transpose swaps run counts");
        REQUIRE(t.g1p == g.g2p && t.g2p == g.g1p, "transpose swaps run excesses");
        REQUIRE(t.v == g.v && t.s == g.s && t.n == g.n, "transpose fixes v, s, n");

        REQUIRE(lemma7_energy(c, p) == hamiltonian(c, p), "descriptor energy identity");
        REQUIRE(lemma7_energy(ct, q) == hamiltonian(ct, q), "identity under transposition");
    }
}

// ==== the descriptor energy identity, exhaustively on a tiny box ====

static void test_lemma7_exhaustive() {
    ModelParams p = p_small();
    p.l0 = 2; // whole box is 4x4: every occupancy pattern fits in 16 bits
    for (uint32_t mask = 0; mask < (1u << 16); ++mask) {
        Config c = Config::empty(2);
        for (int i = 0; i < 16; ++i)
            if (mask & (1u << i)) c.occ[i] = 1;
        REQUIRE(lemma7_energy(c, p) == hamiltonian(c, p), "identity on mask " << mask);
    }
}

int main() {
    test_free_particles();
    test_summarize_rectangle();
    test_summarize_shapes();
    test_random_properties();
    test_lemma7_exhaustive();
    return test_summary("test_geometry");
}
