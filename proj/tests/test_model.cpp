#include "lgk/model.hpp"
#include "test_util.hpp"
#include <string>
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

// ==== rational parsing and formatting ====

static void test_rationals() {
    REQUIRE(parse_rat("18/5") == Rat(18, 5), "fraction form");
    REQUIRE(parse_rat("3.79") == Rat(379, 100), "decimal form");
    REQUIRE(parse_rat("4") == Rat(4), "integer form");
    REQUIRE(parse_rat("0.25") == Rat(1, 4), "decimal reduces");
    REQUIRE(parse_rat("-7/3") == Rat(-7, 3), "negative fraction");
    REQUIRE(parse_rat("-0.5") == Rat(-1, 2), "negative decimal");
    REQUIRE_THROWS(parse_rat("pi"), ParseError, "non-numeric rejected");
    REQUIRE_THROWS(parse_rat("1/0"), ParseError, "zero denominator rejected");
    REQUIRE_THROWS(parse_rat(""), ParseError, "empty rejected");
    REQUIRE_THROWS(parse_rat("3.4.5"), ParseError, "double dot rejected");

    REQUIRE(rat_str(Rat(37, 5)) == "37/5", "fraction text");
    REQUIRE(rat_str(Rat(8)) == "8", "integer text");
    REQUIRE(rat_str(Rat(-48, 5)) == "-48/5", "negative text");
    REQUIRE(rat_is_integer(Rat(6, 2)), "6/2 is integral");
    REQUIRE(!rat_is_integer(Rat(5, 2)), "5/2 is not integral");
    REQUIRE(rat_floor(Rat(5, 2)) == Rat(2), "floor positive");
    REQUIRE(rat_floor(Rat(-1, 2)) == Rat(-1), "floor rounds toward -inf");
    REQUIRE(rat_floor(Rat(6)) == Rat(6), "floor of integer");
    REQUIRE(rat_double(Rat(1, 4)) == 0.25, "double conversion");
}

// ==== derived constants on the two canonical parameter sets ====

static void test_constants_small() {
    DerivedConstants dc = derive_constants(p_small());
    REQUIRE(dc.regime == Regime::strong, "P_small is strong");
    REQUIRE(dc.eps == Rat(2, 5), "eps");
    REQUIRE(dc.l2star == 3, "l2star");
    REQUIRE(dc.deltafrac == Rat(1, 2), "deltafrac");
    REQUIRE(dc.l1star == 8, "l1star");
    REQUIRE(dc.lbar == 6, "lbar");
    REQUIRE(dc.sstar == 8, "sstar");
    REQUIRE(dc.gamma == Rat(63, 5), "gamma");
    REQUIRE(dc.vstar == Rat(21, 5), "vstar");
    REQUIRE(std::string(regime_str(dc.regime)) == "strong", "regime text");
}

static void test_constants_paperlike() {
    DerivedConstants dc = derive_constants(p_paperlike());
    REQUIRE(dc.regime == Regime::strong, "P_paperlike is strong");
    REQUIRE(dc.eps == Rat(21, 100), "eps");
    REQUIRE(dc.l2star == 5, "l2star");
    REQUIRE(dc.deltafrac == Rat(5, 21), "deltafrac");
    REQUIRE(dc.l1star == 15, "l1star");
    REQUIRE(dc.lbar == 10, "lbar");
    REQUIRE(dc.sstar == 14, "sstar");
    REQUIRE(dc.gamma == Rat(1923, 100), "gamma");
    REQUIRE(dc.vstar == Rat(229, 50), "vstar");
}

static void test_constants_rejections() {
    ModelParams p = p_small();
    p.delta = Rat(3); // delta <= u1: no metastable window
    REQUIRE_THROWS(derive_constants(p), DomainError, "delta at u1 rejected");
    p.delta = Rat(4); // delta >= u1 + u2: eps <= 0
    REQUIRE_THROWS(derive_constants(p), DomainError, "delta at u1+u2 rejected");
    p.delta = Rat(9, 2);
    REQUIRE_THROWS(derive_constants(p), DomainError, "delta above window rejected");

    p = p_small();
    p.u2 = Rat(0);
    REQUIRE_THROWS(derive_constants(p), DomainError, "u2 = 0 rejected");

    // boundary u1 = 2*u2 is neither strong nor weak
    p = ModelParams{};
    p.u1 = Rat(4);
    p.u2 = Rat(2);
    p.delta = Rat(49, 10); // eps = 11/10, u2/eps = 20/11 non-integer
    p.l0 = 12;
    REQUIRE_THROWS(derive_constants(p), DomainError, "isotropy boundary rejected in strict mode");
    p.strict = false;
    REQUIRE(derive_constants(p).regime == Regime::neither, "boundary allowed without strict");

    // integer u2/eps: degenerate critical droplet
    p = ModelParams{};
    p.u1 = Rat(3);
    p.u2 = Rat(2);
    p.delta = Rat(24, 5); // eps = 1/5, u2/eps = 10
    p.l0 = 12;
    REQUIRE_THROWS(derive_constants(p), DomainError, "integer u2/eps rejected in strict mode");
    p.strict = false;
    REQUIRE(derive_constants(p).regime == Regime::weak, "degenerate weak allowed without strict");

    // a clean weak-regime point passes even in strict mode
    p = ModelParams{};
    p.u1 = Rat(3);
    p.u2 = Rat(2);
    p.delta = Rat(47, 10); // eps = 3/10, u2/eps = 20/3
    p.l0 = 12;
    DerivedConstants dc = derive_constants(p);
    REQUIRE(dc.regime == Regime::weak, "weak regime recognized");
    REQUIRE(dc.l2star == 7, "weak l2star = floor(20/3)+1");
}

// ==== rectangle energies ====

static void test_rect_energy() {
    ModelParams p = p_small();
    REQUIRE(rect_energy(5, 3, p) == Rat(8), "H(R(5,3))");
    REQUIRE(rect_energy(8, 3, p) == Rat(37, 5), "H(R(8,3))");
    REQUIRE(rect_energy(1, 1, p) == Rat(18, 5), "H(R(1,1)) = delta");
    REQUIRE(rect_energy(12, 12, p) == Rat(-48, 5), "H(full interior)");
    REQUIRE(rect_energy(0, 4, p) == Rat(0), "zero side is the empty droplet");
    REQUIRE(rect_energy(4, 0, p) == Rat(0), "zero side is the empty droplet");
    REQUIRE_THROWS(rect_energy(-1, 3, p), DomainError, "negative side rejected");
    // transpose swaps the roles of the couplings
    ModelParams q = p;
    q.u1 = p.u2;
    q.u2 = p.u1;
    for (int a = 1; a <= 6; ++a)
        for (int b = 1; b <= 6; ++b)
            REQUIRE(rect_energy(a, b, p) == rect_energy(b, a, q), "rect transpose symmetry");
}

// ==== configurations and the hamiltonian ====

static Config transposed(const Config& c) {
    Config t = Config::empty(c.l0);
    for (int y = 0; y < c.side; ++y)
        for (int x = 0; x < c.side; ++x) t.set(y, x, c.at(x, y));
    return t;
}

static void test_config_basics() {
    REQUIRE_THROWS(Config::empty(0), DomainError, "empty box rejected");
    Config c = Config::empty(12);
    REQUIRE(c.side == 14, "side = l0+2");
    int ring_cells = 0, interior_cells = 0;
    for (int y = 0; y < c.side; ++y)
        for (int x = 0; x < c.side; ++x) {
            REQUIRE(c.ring(x, y) != c.interior(x, y), "ring and interior partition the box");
            if (c.ring(x, y)) ++ring_cells;
            else ++interior_cells;
        }
    REQUIRE(ring_cells == 4 * 13, "ring has 4*(l0+1) cells");
    REQUIRE(interior_cells == 144, "interior has l0^2 cells");

    c.set(3, 4, true);
    c.set(0, 0, true);
    REQUIRE(c.count() == 2 && c.count_interior() == 1, "counts split ring and interior");
    REQUIRE(c.at(3, 4) && !c.at(4, 3), "set targets one site");

    StandardStates st = standard_states(12);
    REQUIRE(st.all_empty.count() == 0, "empty state");
    REQUIRE(st.all_full.count_interior() == 144 && st.all_full.count() == 144,
            "full state fills the interior only");
}

static void test_hamiltonian() {
    ModelParams p = p_small();
    StandardStates st = standard_states(12);
    REQUIRE(hamiltonian(st.all_empty, p) == Rat(0), "H(empty) = 0");
    REQUIRE(hamiltonian(st.all_full, p) == Rat(-48, 5), "H(full) < 0");

    // a rectangle placed by hand agrees with the closed form
    Config c = Config::empty(12);
    for (int y = 4; y <= 6; ++y)
        for (int x = 3; x <= 7; ++x) c.set(x, y, true);
    REQUIRE(hamiltonian(c, p) == Rat(8), "hand-placed R(5,3)");

    // ring particles pay delta but never bond
    c.set(0, 5, true);
    REQUIRE(hamiltonian(c, p) == Rat(8) + Rat(18, 5), "ring particle adds delta");

    REQUIRE(gibbs_weight_log(st.all_full, p) == -p.beta * rat_double(Rat(-48, 5)),
            "gibbs log weight");

    // 90 degree symmetry: transposing the grid swaps the couplings
    ModelParams q = p;
    q.u1 = p.u2;
    q.u2 = p.u1;
    uint64_t s = 12345;
    for (int trial = 0; trial < 40; ++trial) {
        Config r = Config::empty(6);
        for (int y = 0; y < r.side; ++y)
            for (int x = 0; x < r.side; ++x) {
                s = s * 6364136223846793005ull + 1442695040888963407ull;
                if ((s >> 60) < 6) r.set(x, y, true);
            }
        REQUIRE(hamiltonian(r, p) == hamiltonian(transposed(r), q), "transpose symmetry");
    }
}

// ==== gamma two-form identity and vstar bound on random tuples ====

static void test_gamma_forms_random() {
    // strong tuples with u2/eps in (1.1, 6) and non-integer
    std::vector<std::pair<int, int>> ratios = {{5, 4}, {7, 5}, {9, 2}, {11, 2}, {23, 4},
                                               {13, 3}, {17, 3}, {7, 2}, {16, 5}, {29, 5}};
    int tuples = 0;
    for (int u2n = 1; u2n <= 3; ++u2n)
        for (int u1n = 2 * u2n + 1; u1n <= 3 * u2n + 3; ++u1n)
            for (auto& pq : ratios) {
                Rat u1(u1n), u2(u2n);
                Rat eps = u2 * Rat(pq.second, pq.first); // u2/eps = p/q
                ModelParams p;
                p.u1 = u1;
                p.u2 = u2;
                p.delta = u1 + u2 - eps;
                p.l0 = 12;
                DerivedConstants dc = derive_constants(p);
                REQUIRE(dc.regime == Regime::strong, "sampled tuple is strong");
                // both closed forms, recomputed here from scratch
                int ls = dc.l2star;
                Rat g1 = rect_energy(2 * ls - 2, ls, p) + eps * (ls - 1) + p.delta;
                Rat g2 = rect_energy(2 * ls - 1, ls - 1, p) + p.delta - u2 + u1;
                REQUIRE(g1 == g2, "gamma closed forms agree");
                REQUIRE(dc.gamma == g1, "derive_constants matches the closed form");
                REQUIRE(dc.vstar == 2 * p.delta - u1, "vstar closed form");
                REQUIRE(dc.vstar < dc.gamma, "vstar below gamma");
                ++tuples;
            }
    REQUIRE(tuples >= 100, "at least 100 tuples sampled");
}

// ==== grid text form ====

static void test_grid_roundtrip() {
    Config c = Config::empty(4);
    c.set(1, 1, true);
    c.set(2, 3, true);
    c.set(0, 5, true); // ring corner area
    std::string text = grid_format(c);
    Config back = grid_parse(text);
    REQUIRE(back == c, "round trip");
    REQUIRE(grid_format(back) == text, "formatting is stable");

    // top row printed first: the particle at y = 5 appears in the first line
    REQUIRE(text.substr(0, text.find('\n')).find('#') != std::string::npos,
            "top row first");

    REQUIRE_THROWS(grid_parse("...\n.x.\n...\n"), ParseError, "bad character rejected");
    REQUIRE_THROWS(grid_parse("...\n..\n...\n"), ParseError, "ragged rows rejected");
    REQUIRE_THROWS(grid_parse(""), ParseError, "empty grid rejected");
    REQUIRE_THROWS(grid_parse("..\n..\n"), ParseError, "box smaller than 3x3 rejected");

    uint64_t s = 99;
    for (int trial = 0; trial < 20; ++trial) {
        Config r = Config::empty(5);
        for (int i = 0; i < (int)r.occ.size(); ++i) {
            s = s * 6364136223846793005ull + 1442695040888963407ull;
            r.occ[i] = (s >> 62) == 0;
        }
        REQUIRE(grid_parse(grid_format(r)) == r, "random round trip");
    }
}

int main() {
    test_rationals();
    test_constants_small();
    test_constants_paperlike();
    test_constants_rejections();
    test_rect_energy();
    test_config_basics();
    test_hamiltonian();
    test_gamma_forms_random();
    test_grid_roundtrip();
    return test_summary("test_model");
}
