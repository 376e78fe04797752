#include "lgk/oracle.hpp"
#include "lgk/moves.hpp"
#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <climits>
#include <queue>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <vector>

namespace lgk {

namespace {

constexpr long long kNoBound = LLONG_MAX;
constexpr unsigned long long kSearchBudget = 6'000'000;

long long rat_units(const Rat& r, long long den) {
    Rat scaled = r * Rat(den);
    if (scaled.denominator() != 1) throw DomainError("internal: energy does not fit the unit grid");
    return scaled.numerator();
}

// ==== quotient state space over a window ====
//
// A state is (cluster bitmap over the window, interior roamer code, ring
// bit). The roamer code is -1 without a free interior particle, otherwise
// the smallest cell index of the empty-slot region it roams in; the ring
// bit marks one particle in transit on the boundary. Walking inside a
// region or along the ring is energy flat, so the quotient preserves every
// minimax height exactly. The cluster bitmap never contains free cells:
// every bit has an occupied interior neighbour. Two-stage transport (ring
// particle entering next to the roamer) is what connects the empty box to
// clustered states.

struct QCtx {
    ModelParams p;
    SubSpace sub;
    EnergyUnits eu;
    int L = 0;
    int nc = 0;                // box cells
    int wbits = 0;
    std::vector<int> wcell;    // window bit -> box cell
    std::vector<int> windex;   // box cell -> window bit, -1 outside

    QCtx(const ModelParams& pp, const SubSpace& s) : p(pp), sub(s) {
        if (sub.l0 < 1) throw DomainError("subspace needs l0 >= 1");
        p.l0 = sub.l0;
        eu = energy_units(p);
        L = sub.l0 + 2;
        nc = L * L;
        if (sub.full_box) return;
        if (sub.wx0 < 1 || sub.wy0 < 1 || sub.wx1 > sub.l0 || sub.wy1 > sub.l0 ||
            sub.wx0 > sub.wx1 || sub.wy0 > sub.wy1)
            throw DomainError("subspace window outside the interior");
        wbits = sub.width() * sub.height();
        if (wbits > 36) throw DomainError("subspace window larger than 36 cells is not supported");
        windex.assign(nc, -1);
        for (int y = sub.wy0; y <= sub.wy1; ++y)
            for (int x = sub.wx0; x <= sub.wx1; ++x) {
                windex[y * L + x] = static_cast<int>(wcell.size());
                wcell.push_back(y * L + x);
            }
    }

    int cx(int c) const { return c % L; }
    int cy(int c) const { return c / L; }
    bool interior_cell(int c) const {
        if (c < 0 || c >= nc) return false;
        int x = cx(c), y = cy(c);
        return x >= 1 && x <= sub.l0 && y >= 1 && y <= sub.l0;
    }
    bool frame_cell(int c) const {
        if (!interior_cell(c)) return false;
        int x = cx(c), y = cy(c);
        return x == 1 || x == sub.l0 || y == 1 || y == sub.l0;
    }
    bool fits(int particles) const {
        return sub.max_particles <= 0 || particles <= sub.max_particles;
    }

    static uint64_t key_of(uint64_t cl, int fp, int sup) {
        return cl | (static_cast<uint64_t>(fp + 1) << 40) | (static_cast<uint64_t>(sup) << 55);
    }
    static uint64_t key_cl(uint64_t k) { return k & ((1ull << 40) - 1); }
    static int key_fp(uint64_t k) { return static_cast<int>((k >> 40) & 0x7fff) - 1; }
    static int key_sup(uint64_t k) { return static_cast<int>(k >> 55); }

    void occ_from(uint64_t cl, std::vector<uint8_t>& occ) const {
        std::fill(occ.begin(), occ.end(), 0);
        for (uint64_t m = cl; m; m &= m - 1)
            occ[wcell[std::countr_zero(m)]] = 1;
    }

    // an empty interior cell with no occupied interior neighbour is a slot;
    // slots split into roaming regions labelled by their smallest cell index
    bool slot(const std::vector<uint8_t>& occ, int c) const {
        if (!interior_cell(c) || occ[c]) return false;
        int x = cx(c), y = cy(c);
        if (x > 1 && occ[c - 1]) return false;
        if (x < sub.l0 && occ[c + 1]) return false;
        if (y > 1 && occ[c - L]) return false;
        if (y < sub.l0 && occ[c + L]) return false;
        return true;
    }
    void labels_for(const std::vector<uint8_t>& occ, std::vector<int>& lab) const {
        lab.assign(nc, -1);
        std::vector<int> q;
        for (int c0 = 0; c0 < nc; ++c0) {
            if (lab[c0] >= 0 || !slot(occ, c0)) continue;
            q.clear();
            q.push_back(c0);
            lab[c0] = c0;
            for (size_t qi = 0; qi < q.size(); ++qi) {
                int c = q[qi];
                const int nbs[4] = {c - 1, c + 1, c - L, c + L};
                for (int d : nbs)
                    if (std::abs(d % L - c % L) <= 1 && d >= 0 && d < nc && lab[d] < 0 &&
                        slot(occ, d)) {
                        lab[d] = c0;
                        q.push_back(d);
                    }
            }
        }
    }

    long long node_h(uint64_t cl, int fp, int sup) const {
        long long n = std::popcount(cl) + (fp >= 0 ? 1 : 0) + sup;
        long long hb = 0, vb = 0;
        for (uint64_t m = cl; m; m &= m - 1) {
            int c = wcell[std::countr_zero(m)];
            if (windex[c + 1] >= 0 && (cl >> windex[c + 1] & 1)) ++hb;
            if (c + L < nc && windex[c + L] >= 0 && (cl >> windex[c + L] & 1)) ++vb;
        }
        return eu.delta * n - eu.u1 * hb - eu.u2 * vb;
    }
    long long h_of(uint64_t k) const { return node_h(key_cl(k), key_fp(k), key_sup(k)); }

    uint64_t to_node(const Config& cfg) const {
        if (cfg.l0 != sub.l0) throw DomainError("configuration box does not match the subspace");
        std::vector<int> freec;
        int sup = 0;
        uint64_t cl = 0;
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                if (!cfg.at(x, y)) continue;
                int c = y * L + x;
                if (!cfg.interior(x, y)) { ++sup; continue; }
                bool nb = (cfg.interior(x - 1, y) && cfg.at(x - 1, y)) ||
                          (cfg.interior(x + 1, y) && cfg.at(x + 1, y)) ||
                          (cfg.interior(x, y - 1) && cfg.at(x, y - 1)) ||
                          (cfg.interior(x, y + 1) && cfg.at(x, y + 1));
                if (!nb) { freec.push_back(c); continue; }
                if (windex[c] < 0) throw DomainError("cluster outside the subspace window");
                cl |= 1ull << windex[c];
            }
        if (freec.size() > 1) throw DomainError("state has more than one free interior particle");
        if (sup > 1) throw DomainError("state has more than one ring particle");
        if ((sup || !freec.empty()) && !sub.allow_free)
            throw DomainError("free particles are disabled in this subspace");
        if (!fits(std::popcount(cl) + static_cast<int>(freec.size()) + sup))
            throw DomainError("state exceeds the subspace particle budget");
        int fp = -1;
        if (!freec.empty()) {
            std::vector<uint8_t> occ(nc);
            std::vector<int> lab;
            occ_from(cl, occ);
            labels_for(occ, lab);
            fp = lab[freec[0]];
            if (fp < 0) throw DomainError("internal: free particle not on a slot");
        }
        return key_of(cl, fp, sup);
    }

    // neighbours of a quotient state through single communicating moves
    void expand(uint64_t key, std::vector<uint64_t>& out) const {
        out.clear();
        uint64_t cl = key_cl(key);
        int fp = key_fp(key);
        int sup = key_sup(key);
        int ncl = std::popcount(cl);
        int ntot = ncl + (fp >= 0 ? 1 : 0) + sup;
        std::vector<uint8_t> occ(nc), occ2(nc);
        std::vector<int> lab, lab2;
        occ_from(cl, occ);
        labels_for(occ, lab);
        std::set<uint64_t> seen;
        auto emit = [&](uint64_t cl2, int fp2, int sup2) {
            uint64_t k = key_of(cl2, fp2, sup2);
            if (k != key && seen.insert(k).second) out.push_back(k);
        };
        auto attach_site = [&](const std::vector<uint8_t>& o, int c) {
            if (!interior_cell(c) || o[c]) return false;
            int x = cx(c), y = cy(c);
            if (x > 1 && o[c - 1]) return true;
            if (x < sub.l0 && o[c + 1]) return true;
            if (y > 1 && o[c - L]) return true;
            if (y < sub.l0 && o[c + L]) return true;
            return false;
        };

        std::vector<int> region;
        bool touches_frame = false;
        if (fp >= 0) {
            for (int c = 0; c < nc; ++c)
                if (lab[c] == fp) {
                    region.push_back(c);
                    if (frame_cell(c)) touches_frame = true;
                }
        }

        if (sup == 0) {
            if (sub.allow_free && fits(ntot + 1)) emit(cl, fp, 1); // create on the ring
            if (fp >= 0 && touches_frame) emit(cl, -1, 1);         // roamer steps onto the ring
        } else {
            emit(cl, fp, 0); // annihilate
        }

        // roamer attaches to the cluster
        if (fp >= 0) {
            for (int c : region) {
                const int nbs[4] = {c - 1, c + 1, c - L, c + L};
                for (int d : nbs) {
                    if (std::abs(d % L - c % L) > 1) continue;
                    if (!attach_site(occ, d) || windex[d] < 0) continue;
                    emit(cl | (1ull << windex[d]), -1, sup);
                }
            }
        }

        // ring particle enters the interior through a frame cell
        if (sup == 1) {
            for (int c = 0; c < nc; ++c) {
                if (!frame_cell(c) || occ[c]) continue;
                if (attach_site(occ, c)) {
                    if (windex[c] < 0) continue;
                    uint64_t cl2 = cl | (1ull << windex[c]);
                    if (fp < 0) { emit(cl2, -1, 0); continue; }
                    occ_from(cl2, occ2);
                    labels_for(occ2, lab2);
                    for (int pc : region) {
                        bool adj = pc == c - 1 || pc == c + 1 || pc == c - L || pc == c + L;
                        if (adj) {
                            if (windex[pc] >= 0) emit(cl2 | (1ull << windex[pc]), -1, 0);
                        } else {
                            emit(cl2, lab2[pc], 0);
                        }
                    }
                } else {
                    // slot entry: becomes the roamer, or nucleates beside it
                    if (fp < 0) { emit(cl, lab[c], 0); continue; }
                    if (windex[c] < 0) continue;
                    for (int pc : region) {
                        bool adj = pc == c - 1 || pc == c + 1 || pc == c - L || pc == c + L;
                        if (adj && windex[pc] >= 0)
                            emit(cl | (1ull << windex[c]) | (1ull << windex[pc]), -1, 0);
                    }
                }
            }
        }

        // cluster-particle exchanges
        for (uint64_t m = cl; m; m &= m - 1) {
            int a = wcell[std::countr_zero(m)];
            const int dirs[4] = {1, -1, L, -L};
            for (int dv : dirs) {
                int b = a + dv;
                bool bint = interior_cell(b);
                if (occ[b]) continue;
                occ2 = occ;
                occ2[a] = 0;
                if (bint) occ2[b] = 1;
                // freed cells can only be b or former neighbours of a
                auto isfree = [&](int c) {
                    if (!interior_cell(c) || !occ2[c]) return false;
                    int x = cx(c), y = cy(c);
                    if (x > 1 && occ2[c - 1]) return false;
                    if (x < sub.l0 && occ2[c + 1]) return false;
                    if (y > 1 && occ2[c - L]) return false;
                    if (y < sub.l0 && occ2[c + L]) return false;
                    return true;
                };
                std::vector<int> freed;
                if (bint && isfree(b)) freed.push_back(b);
                const int anb[4] = {a + 1, a - 1, a + L, a - L};
                for (int c : anb)
                    if (c != b && std::abs(c % L - a % L) <= 1 && isfree(c)) freed.push_back(c);

                uint64_t clbase = cl ^ (1ull << windex[a]);
                if (bint && std::find(freed.begin(), freed.end(), b) == freed.end()) {
                    if (windex[b] < 0) continue; // cluster would leave the window
                    clbase |= 1ull << windex[b];
                }
                for (int c : freed)
                    if (c != b) clbase &= ~(1ull << windex[c]);

                if (!bint) {
                    // landing on the ring adds a transit particle
                    if (sup == 1) continue;
                    if (fp >= 0) {
                        if (!freed.empty()) continue;
                        occ_from(clbase, occ2);
                        labels_for(occ2, lab2);
                        emit(clbase, lab2[region[0]], 1); // regions only merge
                    } else if (freed.size() == 1) {
                        occ_from(clbase, occ2);
                        labels_for(occ2, lab2);
                        emit(clbase, lab2[freed[0]], 1);
                    } else if (freed.empty()) {
                        emit(clbase, -1, 1);
                    }
                    continue;
                }

                if (fp < 0) {
                    if (freed.size() >= 2) continue;
                    if (freed.empty()) { emit(clbase, -1, sup); continue; }
                    occ_from(clbase, occ2);
                    labels_for(occ2, lab2);
                    emit(clbase, lab2[freed[0]], sup);
                    continue;
                }
                // with a roamer the move may not free anything else
                if (!freed.empty()) continue;
                occ_from(clbase, occ2);
                labels_for(occ2, lab2);
                for (int pc : region) {
                    bool adj = pc == b - 1 || pc == b + 1 || pc == b - L || pc == b + L;
                    if (adj) {
                        // roamer beside the landing cell joins the cluster
                        if (windex[pc] >= 0) emit(clbase | (1ull << windex[pc]), -1, sup);
                    } else if (pc != b) {
                        emit(clbase, lab2[pc], sup);
                    }
                }
            }
        }
    }
};

// bottleneck (minimax) bidirectional search on the quotient graph
Rat windowed_height(const Config& a, const Config& b, const SubSpace& sub, const ModelParams& p) {
    QCtx ctx(p, sub);
    uint64_t ka = ctx.to_node(a), kb = ctx.to_node(b);
    if (ka == kb) return ctx.eu.to_rat(ctx.h_of(ka));

    using QE = std::pair<long long, uint64_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq[2];
    std::unordered_map<uint64_t, long long> bn[2];
    bn[0][ka] = ctx.h_of(ka);
    bn[1][kb] = ctx.h_of(kb);
    pq[0].push({bn[0][ka], ka});
    pq[1].push({bn[1][kb], kb});
    long long best = kNoBound;
    unsigned long long pops = 0;
    std::vector<uint64_t> nbrs;
    while (true) {
        int s = -1;
        long long top = kNoBound;
        for (int i = 0; i < 2; ++i)
            if (!pq[i].empty() && pq[i].top().first < top) { top = pq[i].top().first; s = i; }
        if (s < 0 || top >= best) break;
        auto [d, k] = pq[s].top();
        pq[s].pop();
        auto it = bn[s].find(k);
        if (it == bn[s].end() || it->second < d) continue;
        if (++pops > kSearchBudget) throw DomainError("subspace search exceeded the state budget");
        ctx.expand(k, nbrs);
        for (uint64_t nk : nbrs) {
            long long nd = std::max(d, ctx.h_of(nk));
            auto jt = bn[s].find(nk);
            if (jt == bn[s].end() || nd < jt->second) {
                bn[s][nk] = nd;
                pq[s].push({nd, nk});
            }
            auto ot = bn[1 - s].find(nk);
            if (ot != bn[1 - s].end()) best = std::min(best, std::max(nd, ot->second));
        }
    }
    if (best == kNoBound) throw DomainError("endpoints are not connected within the subspace");
    return ctx.eu.to_rat(best);
}

// ==== dense full-box space ====

struct DenseCtx {
    ModelParams p;
    SubSpace sub;
    EnergyUnits eu;
    int L = 0, bits = 0;

    DenseCtx(const ModelParams& pp, const SubSpace& s) : p(pp), sub(s) {
        p.l0 = sub.l0;
        L = sub.l0 + 2;
        bits = L * L;
        if (bits > 25) throw DomainError("full-box space needs side^2 <= 25");
        eu = energy_units(p);
    }

    uint32_t encode(const Config& cfg) const {
        if (cfg.l0 != sub.l0) throw DomainError("configuration box does not match the subspace");
        uint32_t m = 0;
        for (int i = 0; i < bits; ++i)
            if (cfg.occ[i]) m |= 1u << i;
        return m;
    }
    Config decode(uint32_t m) const {
        Config cfg = Config::empty(sub.l0);
        for (int i = 0; i < bits; ++i)
            if (m >> i & 1) cfg.occ[i] = 1;
        return cfg;
    }
    bool admissible(uint32_t m) const {
        return sub.max_particles <= 0 || std::popcount(m) <= sub.max_particles;
    }
};

Rat dense_height(const Config& a, const Config& b, const SubSpace& sub, const ModelParams& p) {
    DenseCtx ctx(p, sub);
    uint32_t ma = ctx.encode(a), mb = ctx.encode(b);
    if (!ctx.admissible(ma) || !ctx.admissible(mb))
        throw DomainError("state exceeds the subspace particle budget");
    std::vector<long long> h(1u << ctx.bits, kNoBound);
    auto h_of = [&](uint32_t m) {
        if (h[m] == kNoBound) h[m] = hamiltonian_units(ctx.decode(m), ctx.eu);
        return h[m];
    };
    if (ma == mb) return ctx.eu.to_rat(h_of(ma));
    std::vector<long long> bn(1u << ctx.bits, kNoBound);
    using QE = std::pair<long long, uint32_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    bn[ma] = h_of(ma);
    pq.push({bn[ma], ma});
    while (!pq.empty()) {
        auto [d, m] = pq.top();
        pq.pop();
        if (d > bn[m]) continue;
        if (m == mb) return ctx.eu.to_rat(d);
        Config cfg = ctx.decode(m);
        for (const Move& mv : enumerate_moves(cfg, ctx.p)) {
            Config nxt = cfg;
            apply(nxt, mv);
            uint32_t nm = ctx.encode(nxt);
            if (!ctx.admissible(nm)) continue;
            long long nd = std::max(d, h_of(nm));
            if (nd < bn[nm]) {
                bn[nm] = nd;
                pq.push({nd, nm});
            }
        }
    }
    throw DomainError("endpoints are not connected within the subspace");
}

} // namespace

Rat communication_height(const Config& a, const Config& b, const SubSpace& sub,
                         const ModelParams& p) {
    if (sub.full_box) return dense_height(a, b, sub, p);
    return windowed_height(a, b, sub, p);
}

std::optional<Rat> minimax_on_graph(int n, const std::vector<std::pair<int, int>>& edges,
                                    const std::vector<Rat>& h, int a, int b) {
    if (n < 1 || a < 0 || a >= n || b < 0 || b >= n)
        throw DomainError("graph endpoints out of range");
    if (static_cast<int>(h.size()) != n) throw DomainError("energy vector size mismatch");
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw DomainError("graph edge out of range");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    if (a == b) return h[a];
    std::vector<std::optional<Rat>> bn(n);
    using QE = std::pair<Rat, int>;
    auto cmp = [](const QE& x, const QE& y) { return y.first < x.first; };
    std::priority_queue<QE, std::vector<QE>, decltype(cmp)> pq(cmp);
    bn[a] = h[a];
    pq.push({h[a], a});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (!bn[u] || *bn[u] < d) continue;
        if (u == b) return d;
        for (int v : adj[u]) {
            Rat nd = std::max(d, std::max(h[u], h[v]));
            if (!bn[v] || nd < *bn[v]) {
                bn[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return std::nullopt;
}

StabilityResult stability_level(const Config& x, const SubSpace& sub, const ModelParams& p) {
    if (sub.full_box) {
        DenseCtx ctx(p, sub);
        uint32_t mx = ctx.encode(x);
        std::vector<long long> h(1u << ctx.bits, kNoBound);
        auto h_of = [&](uint32_t m) {
            if (h[m] == kNoBound) h[m] = hamiltonian_units(ctx.decode(m), ctx.eu);
            return h[m];
        };
        long long hx = h_of(mx);
        std::vector<long long> bn(1u << ctx.bits, kNoBound);
        using QE = std::pair<long long, uint32_t>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        bn[mx] = hx;
        pq.push({hx, mx});
        while (!pq.empty()) {
            auto [d, m] = pq.top();
            pq.pop();
            if (d > bn[m]) continue;
            if (h_of(m) < hx) return {true, ctx.eu.to_rat(d - hx)};
            Config cfg = ctx.decode(m);
            for (const Move& mv : enumerate_moves(cfg, ctx.p)) {
                Config nxt = cfg;
                apply(nxt, mv);
                uint32_t nm = ctx.encode(nxt);
                if (!ctx.admissible(nm)) continue;
                long long nd = std::max(d, h_of(nm));
                if (nd < bn[nm]) {
                    bn[nm] = nd;
                    pq.push({nd, nm});
                }
            }
        }
        return {false, Rat(0)};
    }
    QCtx ctx(p, sub);
    uint64_t kx = ctx.to_node(x);
    long long hx = ctx.h_of(kx);
    std::unordered_map<uint64_t, long long> bn;
    using QE = std::pair<long long, uint64_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    bn[kx] = hx;
    pq.push({hx, kx});
    unsigned long long pops = 0;
    std::vector<uint64_t> nbrs;
    while (!pq.empty()) {
        auto [d, k] = pq.top();
        pq.pop();
        auto it = bn.find(k);
        if (it == bn.end() || it->second < d) continue;
        if (ctx.h_of(k) < hx) return {true, ctx.eu.to_rat(d - hx)};
        if (++pops > kSearchBudget) throw DomainError("subspace search exceeded the state budget");
        ctx.expand(k, nbrs);
        for (uint64_t nk : nbrs) {
            long long nd = std::max(d, ctx.h_of(nk));
            auto jt = bn.find(nk);
            if (jt == bn.end() || nd < jt->second) {
                bn[nk] = nd;
                pq.push({nd, nk});
            }
        }
    }
    return {false, Rat(0)};
}

// ==== stability spectrum by threshold-ordered union-find ====
//
// Invariant: a state stays unresolved exactly while its energy equals the
// minimum of its merged component. Merging a component with a strictly
// higher minimum resolves its whole pending list at the merge threshold.

std::vector<StabilityResult> stability_spectrum_full_box(const ModelParams& p) {
    int L = p.l0 + 2;
    int bits = L * L;
    if (bits > 25) throw DomainError("full-box spectrum needs side^2 <= 25");
    EnergyUnits eu = energy_units(p);
    size_t n = 1ull << bits;

    std::vector<long long> h(n, 0);
    for (size_t m = 1; m < n; ++m) {
        int c = std::countr_zero(m);
        size_t prev = m & (m - 1);
        long long dh = eu.delta;
        int x = c % L, y = c / L;
        if (x >= 1 && x <= p.l0 && y >= 1 && y <= p.l0) {
            if (x > 1 && (prev >> (c - 1) & 1)) dh -= eu.u1;
            if (x < p.l0 && (prev >> (c + 1) & 1)) dh -= eu.u1;
            if (y > 1 && (prev >> (c - L) & 1)) dh -= eu.u2;
            if (y < p.l0 && (prev >> (c + L) & 1)) dh -= eu.u2;
        }
        h[m] = h[prev] + dh;
    }

    struct Edge {
        uint32_t u, v;
        long long t;
    };
    std::vector<std::pair<int, int>> pairs;
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) {
            int c = y * L + x;
            if (x + 1 < L) pairs.push_back({c, c + 1});
            if (y + 1 < L) pairs.push_back({c, c + L});
        }
    std::vector<int> ringc;
    for (int c = 0; c < bits; ++c) {
        int x = c % L, y = c / L;
        if (x == 0 || y == 0 || x == L - 1 || y == L - 1) ringc.push_back(c);
    }
    std::vector<Edge> edges;
    edges.reserve(n * 8);
    for (size_t m = 0; m < n; ++m) {
        for (auto [i, j] : pairs) {
            bool bi = m >> i & 1, bj = m >> j & 1;
            if (bi == bj) continue;
            size_t v = m ^ (1ull << i) ^ (1ull << j);
            if (m < v)
                edges.push_back({static_cast<uint32_t>(m), static_cast<uint32_t>(v),
                                 std::max(h[m], h[v])});
        }
        for (int r : ringc) {
            size_t v = m | (1ull << r);
            if (v != m)
                edges.push_back({static_cast<uint32_t>(m), static_cast<uint32_t>(v),
                                 std::max(h[m], h[v])});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.t < b.t; });

    std::vector<int32_t> parent(n), head(n), tail(n), nxt(n, -1);
    std::vector<long long> minh = h, vunits(n, 0);
    std::vector<uint8_t> fin(n, 0);
    for (size_t i = 0; i < n; ++i) {
        parent[i] = static_cast<int32_t>(i);
        head[i] = tail[i] = static_cast<int32_t>(i);
    }
    auto find = [&](int32_t s) {
        int32_t r = s;
        while (parent[r] != r) r = parent[r];
        while (parent[s] != r) {
            int32_t t = parent[s];
            parent[s] = r;
            s = t;
        }
        return r;
    };
    for (const Edge& e : edges) {
        int32_t ru = find(static_cast<int32_t>(e.u)), rv = find(static_cast<int32_t>(e.v));
        if (ru == rv) continue;
        if (minh[ru] > minh[rv]) std::swap(ru, rv);
        if (minh[rv] > minh[ru]) {
            for (int32_t s = head[rv]; s != -1; s = nxt[s]) {
                fin[s] = 1;
                vunits[s] = e.t - h[s];
            }
        } else if (head[rv] != -1) { // equal minima: pending lists concatenate
            if (head[ru] == -1) {
                head[ru] = head[rv];
                tail[ru] = tail[rv];
            } else {
                nxt[tail[ru]] = head[rv];
                tail[ru] = tail[rv];
            }
        }
        parent[rv] = ru;
    }
    std::vector<StabilityResult> out(n);
    for (size_t i = 0; i < n; ++i)
        out[i] =
            fin[i] ? StabilityResult{true, eu.to_rat(vunits[i])} : StabilityResult{false, Rat(0)};
    return out;
}

// ==== exhaustive boundary-of-B scan ====
//
// Clusters stream as bitmaps over the window, embedded in a stride-8 mask
// that also holds the one-cell margin inside the interior, so every move
// outcome evaluates with bit arithmetic. The free particle is quotiented to
// its roaming region: its position changes neither the energy nor the basin
// descriptors, only which moves exist. Membership in B ignores the free
// particle, so exits can only come from moves that change the clusterised
// part.

namespace {

struct ScanCtx {
    ModelParams p;
    DerivedConstants dc;
    EnergyUnits eu;
    int L = 0, nc = 0;
    int wx0, wy0, W, H;       // window in interior coordinates
    int ex0, ey0, EW, EH;     // extended domain, clipped to the interior
    uint64_t full = 0;        // valid extended bits
    long long gamma_u = 0;
    int sstar, l2star, maxp;

    ScanCtx(const ModelParams& pp, const DerivedConstants& d, const SubSpace& w,
            const ScanLimits& lim)
        : p(pp), dc(d) {
        if (w.l0 >= 1) p.l0 = w.l0;
        eu = energy_units(p);
        gamma_u = rat_units(dc.gamma, eu.den);
        sstar = d.sstar;
        l2star = d.l2star;
        maxp = lim.max_particles;
        L = p.l0 + 2;
        nc = L * L;
        wx0 = w.wx0;
        wy0 = w.wy0;
        W = w.width();
        H = w.height();
        if (wx0 < 1 || wy0 < 1 || w.wx1 > p.l0 || w.wy1 > p.l0 || W < 1 || H < 1)
            throw DomainError("scan window outside the interior");
        if (W < 2 * l2star - 1 || H < l2star)
            throw DomainError("scan window cannot contain the critical rectangle");
        if (W * H > 24) throw DomainError("scan window larger than 24 cells is not supported");
        if (W > 6 || H > 6) throw DomainError("scan window sides must be at most 6");
        ex0 = std::max(wx0 - 1, 1);
        ey0 = std::max(wy0 - 1, 1);
        int ex1 = std::min(w.wx1 + 1, p.l0), ey1 = std::min(w.wy1 + 1, p.l0);
        EW = ex1 - ex0 + 1;
        EH = ey1 - ey0 + 1;
        for (int r = 0; r < EH; ++r)
            full |= ((1ull << EW) - 1) << (8 * r);
    }

    // window code -> extended mask
    uint64_t embed(uint32_t code) const {
        uint64_t m = 0;
        int dx = wx0 - ex0, dy = wy0 - ey0;
        for (int r = 0; r < H; ++r) {
            uint64_t row = (code >> (r * W)) & ((1u << W) - 1);
            m |= row << ((r + dy) * 8 + dx);
        }
        return m;
    }
    static uint64_t nb(uint64_t m) {
        constexpr uint64_t c0 = 0x0101010101010101ull, c7 = 0x8080808080808080ull;
        return ((m & ~c0) >> 1) | ((m & ~c7) << 1) | (m >> 8) | (m << 8);
    }
    uint64_t nbm(uint64_t m) const { return nb(m) & full; }
    static long long hb(uint64_t m) {
        constexpr uint64_t c0 = 0x0101010101010101ull;
        return std::popcount(m & ((m & ~c0) >> 1));
    }
    static long long vb(uint64_t m) { return std::popcount(m & (m >> 8)); }

    struct Desc {
        int p1 = 0, p2 = 0, cl = 0;
        long long v = 0;
        int s() const { return p1 + p2; }
    };
    Desc desc(uint64_t clm) const {
        Desc d;
        uint64_t t = clm;
        t |= t >> 32;
        t |= t >> 16;
        t |= t >> 8;
        d.p1 = std::popcount(static_cast<uint32_t>(t & 0xff));
        for (int r = 0; r < EH; ++r)
            if ((clm >> (8 * r)) & 0xff) ++d.p2;
        d.cl = std::popcount(clm);
        d.v = static_cast<long long>(d.p1) * d.p2 - d.cl;
        return d;
    }
    // 0 = outside B, else the matched clause
    int clause(const Desc& d) const {
        int s = d.s();
        if (d.cl == 0) return 1; // empty cluster: s = 0
        if (s <= sstar - 2) return 1;
        if (s >= sstar - 1 && d.p2 <= l2star - 1) return 2;
        int pmin = std::min(d.p1, d.p2), pmax = std::max(d.p1, d.p2);
        if (s == sstar - 1 && d.p2 >= l2star && d.v >= pmin - 1) return 3;
        if (s >= sstar && d.p2 == l2star && d.v >= pmax - 1) return 4;
        return 0;
    }
    long long cl_h(uint64_t m, int nextra) const {
        return eu.delta * (std::popcount(m) + nextra) - eu.u1 * hb(m) - eu.u2 * vb(m);
    }

    int cellx(int bit) const { return ex0 + bit % 8; }
    int celly(int bit) const { return ey0 + bit / 8; }
    bool ext_has(int x, int y) const {
        return x >= ex0 && x < ex0 + EW && y >= ey0 && y < ey0 + EH;
    }
    int ext_bit(int x, int y) const { return (y - ey0) * 8 + (x - ex0); }

    Config to_config(uint64_t m, int fpcell, int ringcell) const {
        Config cfg = Config::empty(p.l0);
        for (uint64_t t = m; t; t &= t - 1) {
            int b = std::countr_zero(t);
            cfg.set(cellx(b), celly(b), true);
        }
        if (fpcell >= 0) cfg.set(fpcell % L, fpcell / L, true);
        if (ringcell >= 0) cfg.set(ringcell % L, ringcell / L, true);
        return cfg;
    }
};

struct PendingExit {
    long long t = 0;
    ExitPair pair;
};

struct ChunkAcc {
    unsigned long long scanned = 0, inb = 0, exits = 0;
    long long mint = kNoBound;
    std::vector<PendingExit> mins;
    long long c1min = kNoBound;
    bool c1any = false;
};

// one streamed move outcome, shared between the bare and roamer families
struct MoveEval {
    int a = 0, b = 0;          // extended bits; b = -1 for a ring landing
    int ringcell = -1;         // box cell of the ring landing
    uint64_t m2 = 0;           // interior mask after the move
    bool exit_now = false;     // outcome cluster outside B
    long long bond2 = 0;       // u1*hb + u2*vb of m2
};

void scan_chunk(const ScanCtx& sc, uint32_t code_lo, uint32_t code_hi, ChunkAcc& acc) {
    const ModelParams& p = sc.p;
    const int L = sc.L;
    std::vector<uint8_t> occ(sc.nc);
    std::vector<int> lab(sc.nc);
    std::vector<int> q;
    std::vector<MoveEval> moves;
    std::vector<int> regions;
    std::vector<std::vector<int>> regcells;

    auto record = [&](long long t, int clause_from, auto&& build) {
        ++acc.exits;
        if (clause_from == 1) {
            acc.c1any = true;
            acc.c1min = std::min(acc.c1min, t);
        }
        if (t > acc.mint) return;
        if (t < acc.mint) {
            acc.mint = t;
            acc.mins.clear();
        }
        if (acc.mins.size() < 512) acc.mins.push_back({t, build()});
    };

    for (uint32_t code = code_lo; code < code_hi; ++code) {
        uint64_t m = sc.embed(code);
        int ncl = std::popcount(m);
        if (ncl > sc.maxp) continue;
        if (m & ~sc.nbm(m)) continue; // isolated cluster bit
        ++acc.scanned;
        ScanCtx::Desc dm = sc.desc(m);
        int cfrom = sc.clause(dm);
        if (cfrom == 0) continue;
        long long hm = sc.cl_h(m, 0);

        // roaming regions for the one-free-particle families; ring cells
        // belong to the outer region here
        bool want_fp = ncl + 1 <= sc.maxp;
        regions.clear();
        regcells.clear();
        if (want_fp) {
            std::fill(occ.begin(), occ.end(), 0);
            for (uint64_t t = m; t; t &= t - 1) {
                int b = std::countr_zero(t);
                occ[sc.celly(b) * L + sc.cellx(b)] = 1;
            }
            std::fill(lab.begin(), lab.end(), -1);
            auto slot = [&](int c) {
                if (occ[c]) return false;
                int x = c % L, y = c / L;
                if (x < 1 || x > p.l0 || y < 1 || y > p.l0) return true;
                if (x > 1 && occ[c - 1]) return false;
                if (x < p.l0 && occ[c + 1]) return false;
                if (y > 1 && occ[c - L]) return false;
                if (y < p.l0 && occ[c + L]) return false;
                return true;
            };
            for (int c0 = 0; c0 < sc.nc; ++c0) {
                if (lab[c0] >= 0 || !slot(c0)) continue;
                regions.push_back(c0);
                regcells.emplace_back();
                q.clear();
                q.push_back(c0);
                lab[c0] = c0;
                while (!q.empty()) {
                    int c = q.back();
                    q.pop_back();
                    regcells.back().push_back(c);
                    int x = c % L, y = c / L;
                    const int nbs[4] = {x > 0 ? c - 1 : -1, x < L - 1 ? c + 1 : -1,
                                        y > 0 ? c - L : -1, y < L - 1 ? c + L : -1};
                    for (int d : nbs)
                        if (d >= 0 && lab[d] < 0 && slot(d)) {
                            lab[d] = c0;
                            q.push_back(d);
                        }
                }
            }
        }
        acc.inb += 1 + (want_fp ? regions.size() : 0);

        // cluster moves evaluated once on the bare bitmap
        moves.clear();
        for (uint64_t t = m; t; t &= t - 1) {
            int a = std::countr_zero(t);
            int ax = sc.cellx(a), ay = sc.celly(a);
            const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int bx = ax + dx[d], by = ay + dy[d];
                MoveEval ev;
                ev.a = a;
                if (bx >= 1 && bx <= p.l0 && by >= 1 && by <= p.l0) {
                    if (!sc.ext_has(bx, by)) continue; // outcome leaves the extended domain
                    ev.b = sc.ext_bit(bx, by);
                    if (m >> ev.b & 1) continue;
                    ev.m2 = (m ^ (1ull << a)) | (1ull << ev.b);
                } else {
                    ev.b = -1;
                    ev.ringcell = by * L + bx;
                    ev.m2 = m ^ (1ull << a);
                }
                uint64_t cl2 = ev.m2 & sc.nbm(ev.m2);
                ev.exit_now = sc.clause(sc.desc(cl2)) == 0;
                ev.bond2 = sc.eu.u1 * ScanCtx::hb(ev.m2) + sc.eu.u2 * ScanCtx::vb(ev.m2);
                moves.push_back(ev);
            }
        }

        // family without a free particle
        for (const MoveEval& ev : moves) {
            if (!ev.exit_now) continue;
            long long hto = sc.eu.delta * ncl - ev.bond2;
            long long t = std::max(hm, hto);
            record(t, cfrom, [&] {
                ExitPair xp;
                Config from = sc.to_config(m, -1, -1);
                Config to = sc.to_config(ev.m2, -1, ev.ringcell);
                xp.from_grid = grid_format(from);
                xp.to_grid = grid_format(to);
                xp.h_from = sc.eu.to_rat(hm);
                xp.h_to = sc.eu.to_rat(hto);
                xp.from_in_P2 = in_P2(from, p, sc.dc).member;
                xp.energy_drop_ok = hm >= hto;
                return xp;
            });
        }

        if (!want_fp) continue;
        long long hfam = hm + sc.eu.delta;
        for (size_t ri = 0; ri < regions.size(); ++ri) {
            const std::vector<int>& R = regcells[ri];

            // the free particle attaches outside B
            for (int c : R) {
                int x = c % L, y = c / L;
                const int nbs[4] = {x > 0 ? c - 1 : -1, x < L - 1 ? c + 1 : -1,
                                    y > 0 ? c - L : -1, y < L - 1 ? c + L : -1};
                for (int dcell : nbs) {
                    if (dcell < 0) continue;
                    int dxc = dcell % L, dyc = dcell / L;
                    if (dxc < 1 || dxc > p.l0 || dyc < 1 || dyc > p.l0) continue;
                    if (occ[dcell] || lab[dcell] >= 0) continue; // occupied or still a slot
                    if (!sc.ext_has(dxc, dyc)) continue;
                    int db = sc.ext_bit(dxc, dyc);
                    uint64_t m2 = m | (1ull << db);
                    if (sc.clause(sc.desc(m2)) != 0) continue; // attach stays in B
                    long long hto = sc.cl_h(m2, 0);
                    long long t = std::max(hfam, hto);
                    record(t, cfrom, [&] {
                        ExitPair xp;
                        Config from = sc.to_config(m, c, -1);
                        Config to = sc.to_config(m2, -1, -1);
                        xp.from_grid = grid_format(from);
                        xp.to_grid = grid_format(to);
                        xp.h_from = sc.eu.to_rat(hfam);
                        xp.h_to = sc.eu.to_rat(hto);
                        xp.from_in_P2 = in_P2(from, p, sc.dc).member;
                        xp.energy_drop_ok = hfam >= hto;
                        return xp;
                    });
                }
            }

            // cluster moves with the free particle elsewhere in the region
            for (const MoveEval& ev : moves) {
                // the particle keeps its distance: same outcome cluster
                if (ev.exit_now) {
                    int bcell = ev.b >= 0 ? sc.celly(ev.b) * L + sc.cellx(ev.b) : ev.ringcell;
                    int rep = -1;
                    for (int c : R) {
                        if (c == bcell) continue;
                        int dist = std::abs(c % L - bcell % L) + std::abs(c / L - bcell / L);
                        bool ringc = c % L == 0 || c % L == L - 1 || c / L == 0 || c / L == L - 1;
                        if (ringc || dist > 1) { rep = c; break; }
                    }
                    if (rep >= 0) {
                        long long hto = sc.eu.delta * (ncl + 1) - ev.bond2;
                        long long t = std::max(hfam, hto);
                        record(t, cfrom, [&] {
                            ExitPair xp;
                            Config from = sc.to_config(m, rep, -1);
                            Config to = sc.to_config(ev.m2, rep, ev.ringcell);
                            xp.from_grid = grid_format(from);
                            xp.to_grid = grid_format(to);
                            xp.h_from = sc.eu.to_rat(hfam);
                            xp.h_to = sc.eu.to_rat(hto);
                            xp.from_in_P2 = in_P2(from, p, sc.dc).member;
                            xp.energy_drop_ok = hfam >= hto;
                            return xp;
                        });
                    }
                }
                // or sits beside the landing cell and joins the cluster
                if (ev.b < 0) continue;
                int bx = sc.cellx(ev.b), by = sc.celly(ev.b);
                const int pnb[4][2] = {{bx + 1, by}, {bx - 1, by}, {bx, by + 1}, {bx, by - 1}};
                for (auto& pc : pnb) {
                    int px = pc[0], py = pc[1];
                    if (px < 1 || px > p.l0 || py < 1 || py > p.l0) continue;
                    int pcell = py * L + px;
                    if (lab[pcell] != regions[ri]) continue;
                    long long hto;
                    bool outside;
                    if (sc.ext_has(px, py)) {
                        uint64_t m2 = ev.m2 | (1ull << sc.ext_bit(px, py));
                        uint64_t cl2 = m2 & sc.nbm(m2);
                        outside = sc.clause(sc.desc(cl2)) == 0;
                        hto = sc.eu.delta * (ncl + 1) - sc.eu.u1 * ScanCtx::hb(m2) -
                              sc.eu.u2 * ScanCtx::vb(m2);
                    } else {
                        Config to = sc.to_config(ev.m2, pcell, ev.ringcell);
                        outside = !in_B(to, sc.dc).member;
                        hto = hamiltonian_units(to, sc.eu);
                    }
                    if (!outside) continue;
                    long long t = std::max(hfam, hto);
                    record(t, cfrom, [&] {
                        ExitPair xp;
                        Config from = sc.to_config(m, pcell, -1);
                        Config to = sc.to_config(ev.m2, pcell, ev.ringcell);
                        xp.from_grid = grid_format(from);
                        xp.to_grid = grid_format(to);
                        xp.h_from = sc.eu.to_rat(hfam);
                        xp.h_to = sc.eu.to_rat(hto);
                        xp.from_in_P2 = in_P2(from, p, sc.dc).member;
                        xp.energy_drop_ok = hfam >= hto;
                        return xp;
                    });
                }
            }
        }
    }
}

} // namespace

BoundaryScanReport scan_boundary_of_B(const ModelParams& p, const DerivedConstants& dc,
                                      const SubSpace& window, const ScanLimits& limits) {
    auto t0 = std::chrono::steady_clock::now();
    ScanCtx sc(p, dc, window, limits);
    uint64_t codes_end = 1ull << (sc.W * sc.H);
    const uint64_t chunk = 1u << 16;
    int nchunks = static_cast<int>((codes_end + chunk - 1) / chunk);
    std::vector<ChunkAcc> accs(nchunks);

    int nthreads = std::max(1, limits.threads);
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= nchunks) break;
            uint64_t lo = static_cast<uint64_t>(i) * chunk;
            uint64_t hi = std::min(codes_end, lo + chunk);
            scan_chunk(sc, static_cast<uint32_t>(lo), static_cast<uint32_t>(hi), accs[i]);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BoundaryScanReport rep;
    long long mint = kNoBound, c1min = kNoBound;
    for (const ChunkAcc& a : accs) {
        rep.bitmaps_scanned += a.scanned;
        rep.states_in_B += a.inb;
        rep.exits_seen += a.exits;
        mint = std::min(mint, a.mint);
        if (a.c1any) {
            rep.clause1_any = true;
            c1min = std::min(c1min, a.c1min);
        }
    }
    if (mint != kNoBound) {
        rep.found_exit = true;
        rep.min_threshold = sc.eu.to_rat(mint);
        std::set<std::pair<std::string, std::string>> seen;
        for (const ChunkAcc& a : accs)
            for (const PendingExit& pe : a.mins)
                if (pe.t == mint && seen.insert({pe.pair.from_grid, pe.pair.to_grid}).second)
                    rep.minimizers.push_back(pe.pair);
    }
    if (rep.clause1_any) rep.clause1_min = sc.eu.to_rat(c1min);
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

GateVerdict verify_gate_structure(const ModelParams& p, const DerivedConstants& dc,
                                  const SubSpace& window, const ScanLimits& limits) {
    BoundaryScanReport rep = scan_boundary_of_B(p, dc, window, limits);
    GateVerdict gv;
    gv.min_is_gamma = rep.found_exit && rep.min_threshold == dc.gamma;
    gv.minimizers_in_P2 = !rep.minimizers.empty();
    gv.energy_drop_ok = !rep.minimizers.empty();
    for (const ExitPair& xp : rep.minimizers) {
        if (!xp.from_in_P2) gv.minimizers_in_P2 = false;
        if (!xp.energy_drop_ok) gv.energy_drop_ok = false;
    }

    // every P1 member of the window family must re-enter B at threshold Gamma
    ScanCtx sc(p, dc, window, limits);
    int gate_n = gate_particle_count(dc);
    gv.p1_reentry_ok = true;
    uint64_t codes_end = 1ull << (sc.W * sc.H);
    for (uint64_t code = 0; code < codes_end; ++code) {
        if (std::popcount(code) != gate_n) continue;
        uint64_t m = sc.embed(static_cast<uint32_t>(code));
        if (m & ~sc.nbm(m)) continue;
        Config cfg = sc.to_config(m, -1, -1);
        if (!in_P1(cfg, sc.p, dc).member) continue;
        ++gv.p1_members;
        long long hu = hamiltonian_units(cfg, sc.eu);
        bool reenter = false;
        for (const Move& mv : enumerate_moves(cfg, sc.p)) {
            long long h2 = hu + rat_units(mv.dh, sc.eu.den);
            if (h2 > sc.gamma_u) continue;
            Config nxt = cfg;
            apply(nxt, mv);
            if (in_B(nxt, dc).member) {
                reenter = true;
                break;
            }
        }
        if (!reenter) gv.p1_reentry_ok = false;
    }

    gv.pass = gv.min_is_gamma && gv.minimizers_in_P2 && gv.energy_drop_ok && gv.p1_reentry_ok;
    std::ostringstream os;
    os << "min=" << rep.min_threshold << " exits=" << rep.exits_seen
       << " minimizers=" << rep.minimizers.size() << " p1_members=" << gv.p1_members;
    gv.detail = os.str();
    return gv;
}

} // namespace lgk
