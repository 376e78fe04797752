#include "lgk/moves.hpp"

#include <atomic>
#include <bit>
#include <numeric>
#include <thread>

namespace lgk {

int bond_count(int l0) {
    int L = l0 + 2;
    return 4 * L * (L + 1); // 4L(L-1) oriented exchanges + 4L in + 4L out
}

// ==== primitive application ====

static void check_site(const Config& cfg, int x, int y) {
    if (!cfg.in_box(x, y)) throw DomainError("move site outside the box");
}

void apply(Config& cfg, const Move& m) {
    check_site(cfg, m.x1, m.y1);
    if (m.kind == MoveKind::exchange) {
        check_site(cfg, m.x2, m.y2);
        int d = std::abs(m.x1 - m.x2) + std::abs(m.y1 - m.y2);
        if (d != 1) throw DomainError("exchange endpoints not adjacent");
        if (!cfg.at(m.x1, m.y1) || cfg.at(m.x2, m.y2))
            throw DomainError("exchange needs occupied source and empty target");
        cfg.set(m.x1, m.y1, false);
        cfg.set(m.x2, m.y2, true);
    } else if (m.kind == MoveKind::create) {
        if (!cfg.ring(m.x1, m.y1)) throw DomainError("creation only on the boundary ring");
        if (cfg.at(m.x1, m.y1)) throw DomainError("creation target occupied");
        cfg.set(m.x1, m.y1, true);
    } else {
        if (!cfg.ring(m.x1, m.y1)) throw DomainError("annihilation only on the boundary ring");
        if (!cfg.at(m.x1, m.y1)) throw DomainError("annihilation source empty");
        cfg.set(m.x1, m.y1, false);
    }
}

// ==== energy units ====

EnergyUnits energy_units(const ModelParams& p) {
    long long d = std::lcm(std::lcm(p.u1.denominator(), p.u2.denominator()),
                           p.delta.denominator());
    EnergyUnits eu;
    eu.den = d;
    eu.u1 = p.u1.numerator() * (d / p.u1.denominator());
    eu.u2 = p.u2.numerator() * (d / p.u2.denominator());
    eu.delta = p.delta.numerator() * (d / p.delta.denominator());
    return eu;
}

long long hamiltonian_units(const Config& cfg, const EnergyUnits& eu) {
    long long h = 0;
    for (int y = 0; y < cfg.side; ++y)
        for (int x = 0; x < cfg.side; ++x) {
            if (!cfg.at(x, y)) continue;
            h += eu.delta;
            if (cfg.interior(x, y)) {
                if (cfg.interior(x + 1, y) && cfg.at(x + 1, y)) h -= eu.u1;
                if (cfg.interior(x, y + 1) && cfg.at(x, y + 1)) h -= eu.u2;
            }
        }
    return h;
}

// binding energy of a particle at (x,y) toward occupied interior neighbours,
// skipping (ex,ey); zero when (x,y) is on the ring
static long long bind_units(const Config& cfg, int x, int y, int ex, int ey,
                            const EnergyUnits& eu) {
    if (!cfg.interior(x, y)) return 0;
    long long b = 0;
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
        int nx = x + dx[d], ny = y + dy[d];
        if (nx == ex && ny == ey) continue;
        if (cfg.interior(nx, ny) && cfg.at(nx, ny)) b += (dy[d] == 0) ? eu.u1 : eu.u2;
    }
    return b;
}

long long delta_h_units(const Config& cfg, MoveKind kind, int x1, int y1, int x2, int y2,
                        const EnergyUnits& eu) {
    if (kind == MoveKind::create) return eu.delta;
    if (kind == MoveKind::annihilate) return -eu.delta;
    long long lost = bind_units(cfg, x1, y1, x2, y2, eu);
    long long gained = bind_units(cfg, x2, y2, x1, y1, eu);
    return lost - gained;
}

// ==== enumeration ====

std::vector<Move> enumerate_moves(const Config& cfg, const ModelParams& p) {
    EnergyUnits eu = energy_units(p);
    GeomSummary before = summarize(cfg);
    std::vector<Move> out;
    Config scratch = cfg;

    auto push = [&](MoveKind kind, int x1, int y1, int x2, int y2) {
        Move m;
        m.kind = kind;
        m.x1 = x1; m.y1 = y1; m.x2 = x2; m.y2 = y2;
        long long dhu = delta_h_units(cfg, kind, x1, y1, x2, y2, eu);
        m.dh = eu.to_rat(dhu);
        apply(scratch, m);
        m.ds = summarize(scratch).s - before.s;
        // undo
        if (kind == MoveKind::exchange) {
            scratch.set(x2, y2, false);
            scratch.set(x1, y1, true);
        } else if (kind == MoveKind::create) {
            scratch.set(x1, y1, false);
        } else {
            scratch.set(x1, y1, true);
        }
        out.push_back(m);
    };

    for (int y = 0; y < cfg.side; ++y)
        for (int x = 0; x + 1 < cfg.side; ++x) {
            bool a = cfg.at(x, y), b = cfg.at(x + 1, y);
            if (a && !b) push(MoveKind::exchange, x, y, x + 1, y);
            else if (!a && b) push(MoveKind::exchange, x + 1, y, x, y);
        }
    for (int y = 0; y + 1 < cfg.side; ++y)
        for (int x = 0; x < cfg.side; ++x) {
            bool a = cfg.at(x, y), b = cfg.at(x, y + 1);
            if (a && !b) push(MoveKind::exchange, x, y, x, y + 1);
            else if (!a && b) push(MoveKind::exchange, x, y + 1, x, y);
        }
    for (int y = 0; y < cfg.side; ++y)
        for (int x = 0; x < cfg.side; ++x) {
            if (!cfg.ring(x, y)) continue;
            if (!cfg.at(x, y)) push(MoveKind::create, x, y, x, y);
            else push(MoveKind::annihilate, x, y, x, y);
        }
    return out;
}

// ==== line activity ====

LineActivity line_activity(const Config& cfg, const Move& m) {
    if (m.kind != MoveKind::exchange) throw DomainError("line_activity: exchange moves only");
    int ux = m.x2 - m.x1, uy = m.y2 - m.y1;
    if (std::abs(ux) + std::abs(uy) != 1) throw DomainError("line_activity: endpoints not adjacent");
    if (!cfg.at(m.x1, m.y1) || cfg.at(m.x2, m.y2))
        throw DomainError("line_activity: invalid exchange occupancy");
    int wx = -uy, wy = ux;

    bool horizontal = (uy == 0);
    auto along_u = [&](int x, int y) -> LineRef {
        // the line through (x,y) in direction u
        return horizontal ? LineRef{true, y} : LineRef{false, x};
    };
    auto along_w = [&](int x, int y) -> LineRef {
        return horizontal ? LineRef{false, x} : LineRef{true, y};
    };

    LineActivity la;
    la.frame[0] = along_u(m.x1, m.y1);                 // r1
    la.frame[1] = along_w(m.x2, m.y2);                 // r2
    la.frame[2] = along_u(m.x1 + wx, m.y1 + wy);       // r3
    la.frame[3] = along_u(m.x1 - wx, m.y1 - wy);       // r4
    la.frame[4] = along_w(m.x2 + ux, m.y2 + uy);       // r5
    la.frame[5] = along_w(m.x1, m.y1);                 // r6
    la.frame[6] = along_w(m.x1 - ux, m.y1 - uy);       // r7

    auto active = [&](const std::vector<uint8_t>& mask, const LineRef& ln) {
        if (ln.index < 1 || ln.index > cfg.l0) return false;
        if (ln.is_row) {
            for (int x = 1; x <= cfg.l0; ++x)
                if (mask[cfg.idx(x, ln.index)]) return true;
        } else {
            for (int y = 1; y <= cfg.l0; ++y)
                if (mask[cfg.idx(ln.index, y)]) return true;
        }
        return false;
    };

    std::vector<uint8_t> maskBefore = cl_mask(cfg);
    Config after = cfg;
    after.set(m.x1, m.y1, false);
    after.set(m.x2, m.y2, true);
    std::vector<uint8_t> maskAfter = cl_mask(after);

    for (int i = 0; i < 7; ++i) {
        la.before[i] = active(maskBefore, la.frame[i]);
        la.after[i] = active(maskAfter, la.frame[i]);
        if (la.after[i] && !la.before[i]) la.activated.push_back(i);
        if (!la.after[i] && la.before[i]) la.deactivated.push_back(i);
    }
    la.ds = static_cast<int>(la.activated.size()) - static_cast<int>(la.deactivated.size());
    return la;
}

// ==== exhaustive local pattern checks ====
//
// Fixed geometry: box l0=12, core 5x5 on interior cells (2..6)x(2..6), move
// (4,4) -> (5,4). Context outside the core is empty, so a core cell's
// clusterised status depends on core neighbours only. Padded lemmas add a
// full 4x4 block on cells (8..11)x(8..11): rows/columns disjoint from every
// frame line, contributing +4 to both projections and 16 bound particles.

namespace {

constexpr int kCoreLo = 2, kCoreHi = 6;          // inclusive interior coords
constexpr int kX1 = 4, kY1 = 4, kX2 = 5, kY2 = 4;
constexpr uint32_t kMask25 = (1u << 25) - 1;

inline int core_bit(int x, int y) { return (x - kCoreLo) + 5 * (y - kCoreLo); }

// occupied cells having an occupied core neighbour (bit-parallel, no wrap)
inline uint32_t cl_bits(uint32_t occ) {
    constexpr uint32_t colLeft = 0x0108421u;   // bits with cx == 2
    constexpr uint32_t colRight = colLeft << 4; // bits with cx == 6
    uint32_t e = (occ & ~colLeft) >> 1;   // east neighbour occupied, seen from cell
    uint32_t w = (occ & ~colRight) << 1;
    uint32_t n = occ >> 5;
    uint32_t s = (occ << 5) & kMask25;
    return occ & (e | w | n | s);
}

struct FrameMasks {
    uint32_t line[7];     // r1..r7 over the 25-bit core
    uint32_t row[5], col[5];
};

FrameMasks make_masks() {
    FrameMasks fm{};
    auto rowmask = [](int y) {
        uint32_t m = 0;
        for (int x = kCoreLo; x <= kCoreHi; ++x) m |= 1u << core_bit(x, y);
        return m;
    };
    auto colmask = [](int x) {
        uint32_t m = 0;
        for (int y = kCoreLo; y <= kCoreHi; ++y) m |= 1u << core_bit(x, y);
        return m;
    };
    fm.line[0] = rowmask(kY1);      // r1
    fm.line[1] = colmask(kX2);      // r2
    fm.line[2] = rowmask(kY1 + 1);  // r3
    fm.line[3] = rowmask(kY1 - 1);  // r4
    fm.line[4] = colmask(kX2 + 1);  // r5
    fm.line[5] = colmask(kX1);      // r6
    fm.line[6] = colmask(kX1 - 1);  // r7
    for (int i = 0; i < 5; ++i) {
        fm.row[i] = rowmask(kCoreLo + i);
        fm.col[i] = colmask(kCoreLo + i);
    }
    return fm;
}

struct PatternState {
    uint32_t cl = 0;
    int p1 = 0, p2 = 0, cl_size = 0, free_cnt = 0;
    long long v = 0;
    int pmin = 0;
};

inline PatternState eval_state(uint32_t occ, const FrameMasks& fm, bool padded) {
    PatternState st;
    st.cl = cl_bits(occ);
    for (int i = 0; i < 5; ++i) {
        st.p1 += (st.cl & fm.col[i]) != 0;
        st.p2 += (st.cl & fm.row[i]) != 0;
    }
    st.cl_size = std::popcount(st.cl);
    st.free_cnt = std::popcount(occ) - st.cl_size;
    if (padded) {
        st.p1 += 4;
        st.p2 += 4;
        st.cl_size += 16;
    }
    st.v = static_cast<long long>(st.p1) * st.p2 - st.cl_size;
    st.pmin = std::min(st.p1, st.p2);
    return st;
}

enum class LemmaId { r2r5, r6r7, lemma0i, lemma0ii, dsBound, lemma12 };

struct PatternOutcome {
    bool violated = false;
};

inline bool check_pattern(LemmaId id, uint32_t occBefore, const FrameMasks& fm, bool padded) {
    const uint32_t x1b = 1u << core_bit(kX1, kY1);
    const uint32_t x2b = 1u << core_bit(kX2, kY2);
    uint32_t occAfter = (occBefore & ~x1b) | x2b;

    uint32_t clB = cl_bits(occBefore), clA = cl_bits(occAfter);
    bool actB[7], actA[7];
    int ds = 0;
    for (int i = 0; i < 7; ++i) {
        actB[i] = (clB & fm.line[i]) != 0;
        actA[i] = (clA & fm.line[i]) != 0;
        ds += static_cast<int>(actA[i]) - static_cast<int>(actB[i]);
    }

    switch (id) {
        case LemmaId::r2r5:
            return !(actB[1] && !actA[1]) && !(actB[4] && !actA[4]);
        case LemmaId::r6r7:
            return !(!actB[5] && actA[5]) && !(!actB[6] && actA[6]);
        case LemmaId::lemma0i: {
            if (!(actB[0] && !actA[0])) return true;
            for (int i = 0; i < 7; ++i)
                if (!actB[i] && actA[i]) return false;
            return true;
        }
        case LemmaId::lemma0ii: {
            if (!(!actB[0] && actA[0])) return true;
            for (int i = 0; i < 7; ++i) {
                if (i == 2 || i == 3) continue; // r3, r4 may turn off
                if (actB[i] && !actA[i]) return false;
            }
            return true;
        }
        case LemmaId::dsBound: {
            PatternState a = eval_state(occAfter, fm, padded);
            if (a.pmin < 4) return true; // hypothesis (guaranteed by padding)
            return ds >= -5 && ds <= 5;
        }
        case LemmaId::lemma12: {
            if (ds < 1 || ds > 5) return true;
            PatternState b = eval_state(occBefore, fm, padded);
            PatternState a = eval_state(occAfter, fm, padded);
            if (a.pmin < 4) return true;
            switch (ds) {
                case 1:
                    if (a.v < a.pmin - 3) return false;
                    if (a.v < a.pmin - 1 && b.free_cnt < 2) return false;
                    return true;
                case 2: return b.free_cnt >= 1 && a.v >= 2LL * a.pmin - 5;
                case 3: return b.free_cnt >= 2 && a.v >= 3LL * a.pmin - 6;
                case 4: return b.free_cnt >= 3 && a.v >= 4LL * a.pmin - 7;
                default: return b.free_cnt >= 4 && a.v >= 5LL * a.pmin - 8;
            }
        }
    }
    return true;
}

Config materialize(uint32_t occ, bool padded) {
    Config cfg = Config::empty(12);
    for (int y = kCoreLo; y <= kCoreHi; ++y)
        for (int x = kCoreLo; x <= kCoreHi; ++x)
            if (occ & (1u << core_bit(x, y))) cfg.set(x, y, true);
    if (padded)
        for (int y = 8; y <= 11; ++y)
            for (int x = 8; x <= 11; ++x) cfg.set(x, y, true);
    return cfg;
}

} // namespace

PatternCheckReport local_pattern_check(const std::string& lemma_id, int threads) {
    LemmaId id;
    bool padded = false;
    if (lemma_id == "r2r5-never-deactivate") id = LemmaId::r2r5;
    else if (lemma_id == "r6r7-never-activate") id = LemmaId::r6r7;
    else if (lemma_id == "lemma0-i") id = LemmaId::lemma0i;
    else if (lemma_id == "lemma0-ii") id = LemmaId::lemma0ii;
    else if (lemma_id == "ds-bound-5") { id = LemmaId::dsBound; padded = true; }
    else if (lemma_id == "lemma12-vacancy-bounds") { id = LemmaId::lemma12; padded = true; }
    else throw DomainError("unknown lemma id: " + lemma_id);

    const FrameMasks fm = make_masks();
    const uint32_t x1b = 1u << core_bit(kX1, kY1);
    const uint32_t x2b = 1u << core_bit(kX2, kY2);

    // map 23 free bits onto core bits, skipping the forced pair
    int freeSlot[23];
    int nf = 0;
    for (int c = 0; c < 25; ++c) {
        uint32_t b = 1u << c;
        if (b == x1b || b == x2b) continue;
        freeSlot[nf++] = c;
    }

    const uint64_t total = 1ull << 23;
    if (threads < 1) threads = 1;
    std::vector<std::thread> pool;
    std::vector<unsigned long long> viol(static_cast<size_t>(threads), 0);
    std::vector<uint64_t> firstBad(static_cast<size_t>(threads), total);

    auto work = [&](int t) {
        uint64_t lo = total * t / threads, hi = total * (t + 1) / threads;
        unsigned long long bad = 0;
        uint64_t first = total;
        for (uint64_t code = lo; code < hi; ++code) {
            uint32_t occ = x1b;
            uint64_t c = code;
            while (c) {
                int k = std::countr_zero(c);
                occ |= 1u << freeSlot[k];
                c &= c - 1;
            }
            if (!check_pattern(id, occ, fm, padded)) {
                ++bad;
                if (first == total) first = code;
            }
        }
        viol[static_cast<size_t>(t)] = bad;
        firstBad[static_cast<size_t>(t)] = first;
    };
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();

    PatternCheckReport rep;
    rep.lemma = lemma_id;
    rep.patterns_checked = total;
    uint64_t first = total;
    for (int t = 0; t < threads; ++t) {
        rep.violations += viol[static_cast<size_t>(t)];
        first = std::min(first, firstBad[static_cast<size_t>(t)]);
    }
    rep.pass = (rep.violations == 0);
    if (first != total) {
        uint32_t occ = x1b;
        uint64_t c = first;
        while (c) {
            int k = std::countr_zero(c);
            occ |= 1u << freeSlot[k];
            c &= c - 1;
        }
        rep.counterexample = grid_format(materialize(occ, padded)) + "move: (" +
                             std::to_string(kX1) + "," + std::to_string(kY1) + ")->(" +
                             std::to_string(kX2) + "," + std::to_string(kY2) + ")";
    }
    return rep;
}

} // namespace lgk
