// Monte Carlo driver. The proposal draws one of M = 4L(L+1) oriented bond
// slots uniformly: oriented in-box exchanges, then ring creations, then ring
// annihilations (corner ring cells own two crossing bonds, so they carry two
// create and two annihilate slots). Acceptance is Metropolis e^{-beta [dH]_+}
// with dH tracked exactly in integer energy units. One attempted move is one
// time unit; the rejection-free kernel charges the expected dwell M/W before
// each jump, W the total acceptance weight of the state-changing slots.

#include "lgk/simulator.hpp"
#include "lgk/error.hpp"
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lgk {

uint64_t derive_seed(uint64_t master, uint64_t run_index) {
    Rng a(master);
    uint64_t mixed = a.next();
    Rng b(mixed ^ (0x9E3779B97F4A7C15ull + run_index));
    return b.next();
}

const char* outcome_str(Outcome o) {
    switch (o) {
        case Outcome::zero: return "zero";
        case Outcome::one: return "one";
        case Outcome::gate: return "gate";
        case Outcome::rect: return "rect";
        case Outcome::cap: return "cap";
    }
    return "?";
}

namespace {

struct Acceptance {
    double beta = 1;
    long long den = 1;
    std::unordered_map<long long, double> cache;
    double operator()(long long dhu) {
        if (dhu <= 0) return 1.0;
        auto it = cache.find(dhu);
        if (it != cache.end()) return it->second;
        double v = std::exp(-beta * static_cast<double>(dhu) / static_cast<double>(den));
        cache.emplace(dhu, v);
        return v;
    }
};

struct Engine {
    const SimConfig& sc;
    const ModelParams& p;
    TargetSpec tg;
    Config cfg;
    EnergyUnits eu;
    Rng rng;
    Acceptance acc;
    int L = 0;
    long long M = 0;
    long long h = 0, max_h = 0;
    int n_int = 0, n_ring = 0;
    int gate_n = 0;
    Config rect_cfg;
    int rect_n = -1;
    double steps = 0;
    bool gate_hit = false;

    Engine(const Config& start, const TargetSpec& targets, const SimConfig& s, uint64_t seed)
        : sc(s), p(s.params), tg(targets), cfg(start), eu(energy_units(s.params)),
          rng(seed), rect_cfg(Config::empty(s.params.l0)) {
        acc.beta = p.beta;
        acc.den = eu.den;
        L = p.l0 + 2;
        M = bond_count(p.l0);
        h = hamiltonian_units(cfg, eu);
        max_h = h;
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x)
                if (cfg.at(x, y)) ++(cfg.interior(x, y) ? n_int : n_ring);
        gate_n = gate_particle_count(sc.dc);
        if (tg.rect) {
            const RectSpec& r = *tg.rect;
            int ax = (p.l0 - r.l1) / 2 + 1, ay = (p.l0 - r.l2) / 2 + 1;
            rect_cfg = make_rect_config(p.l0, r, ax, ay);
            rect_n = r.l1 * r.l2;
        }
    }

    std::optional<Outcome> check_state() {
        if (tg.zero && n_int + n_ring == 0) return Outcome::zero;
        if (tg.one && n_ring == 0 && n_int == p.l0 * p.l0) return Outcome::one;
        bool pre = n_ring == 0 && n_int == gate_n;
        if (sc.gate_full_check) {
            // audit mode: the particle-count prefilter must never miss
            if (in_P(cfg, p, sc.dc).member) {
                if (!pre) throw DomainError("gate prefilter missed a member");
                gate_hit = true;
                if (tg.gate) return Outcome::gate;
            }
        } else if (pre && (tg.gate || !gate_hit)) {
            if (in_P(cfg, p, sc.dc).member) {
                gate_hit = true;
                if (tg.gate) return Outcome::gate;
            }
        }
        if (tg.rect && n_ring == 0 && n_int == rect_n && cfg == rect_cfg) return Outcome::rect;
        return std::nullopt;
    }

    void decode_ring(int c, int& x, int& y) const {
        int side = c / L, k = c % L;
        if (side == 0) { x = k; y = 0; }
        else if (side == 1) { x = k; y = L - 1; }
        else if (side == 2) { x = 0; y = k; }
        else { x = L - 1; y = k; }
    }

    void apply_fast(MoveKind kind, int x1, int y1, int x2, int y2, long long dhu) {
        if (kind == MoveKind::exchange) {
            cfg.set(x1, y1, false);
            cfg.set(x2, y2, true);
            bool i1 = cfg.interior(x1, y1), i2 = cfg.interior(x2, y2);
            if (i1 && !i2) { --n_int; ++n_ring; }
            else if (!i1 && i2) { ++n_int; --n_ring; }
        } else if (kind == MoveKind::create) {
            cfg.set(x1, y1, true);
            ++n_ring;
        } else {
            cfg.set(x1, y1, false);
            --n_ring;
        }
        h += dhu;
        if (h > max_h) max_h = h;
    }

    bool attempt_once() {
        uint64_t slot = rng.below(static_cast<uint64_t>(M));
        uint64_t E = 4ull * L * (L - 1);
        MoveKind kind;
        int x1, y1, x2 = 0, y2 = 0;
        if (slot < E) {
            uint64_t half = E / 2;
            bool vertical = slot >= half;
            uint64_t s2 = vertical ? slot - half : slot;
            uint64_t pi = s2 >> 1;
            int orient = static_cast<int>(s2 & 1);
            if (!vertical) {
                y1 = static_cast<int>(pi / (L - 1));
                x1 = static_cast<int>(pi % (L - 1));
                x2 = x1 + 1;
                y2 = y1;
            } else {
                x1 = static_cast<int>(pi / (L - 1));
                y1 = static_cast<int>(pi % (L - 1));
                x2 = x1;
                y2 = y1 + 1;
            }
            if (orient) { std::swap(x1, x2); std::swap(y1, y2); }
            kind = MoveKind::exchange;
            if (!cfg.at(x1, y1) || cfg.at(x2, y2)) return false;
        } else if (slot < E + 4ull * L) {
            decode_ring(static_cast<int>(slot - E), x1, y1);
            kind = MoveKind::create;
            if (cfg.at(x1, y1)) return false;
        } else {
            decode_ring(static_cast<int>(slot - E - 4ull * L), x1, y1);
            kind = MoveKind::annihilate;
            if (!cfg.at(x1, y1)) return false;
        }
        long long dhu = delta_h_units(cfg, kind, x1, y1, x2, y2, eu);
        if (dhu > 0 && rng.u01() >= acc(dhu)) return false;
        apply_fast(kind, x1, y1, x2, y2, dhu);
        return true;
    }

    Outcome loop_plain() {
        for (;;) {
            if (steps >= sc.cap) return Outcome::cap;
            steps += 1;
            if (attempt_once())
                if (auto o = check_state()) return *o;
        }
    }

    struct Cand {
        MoveKind kind;
        int x1, y1, x2, y2;
        long long dhu;
        double w;
    };

    Outcome loop_rf() {
        std::vector<Cand> cands;
        cands.reserve(static_cast<std::size_t>(8 * L));
        for (;;) {
            cands.clear();
            double W = 0;
            auto add = [&](MoveKind kind, int x1, int y1, int x2, int y2, double mult) {
                long long dhu = delta_h_units(cfg, kind, x1, y1, x2, y2, eu);
                double w = mult * acc(dhu);
                cands.push_back({kind, x1, y1, x2, y2, dhu, w});
                W += w;
            };
            for (int y = 0; y < L; ++y)
                for (int x = 0; x < L; ++x) {
                    bool a = cfg.at(x, y);
                    if (x + 1 < L && a != cfg.at(x + 1, y)) {
                        if (a) add(MoveKind::exchange, x, y, x + 1, y, 1);
                        else add(MoveKind::exchange, x + 1, y, x, y, 1);
                    }
                    if (y + 1 < L && a != cfg.at(x, y + 1)) {
                        if (a) add(MoveKind::exchange, x, y, x, y + 1, 1);
                        else add(MoveKind::exchange, x, y + 1, x, y, 1);
                    }
                    if (!cfg.interior(x, y)) {
                        bool corner = (x == 0 || x == L - 1) && (y == 0 || y == L - 1);
                        double mult = corner ? 2 : 1;
                        if (a) add(MoveKind::annihilate, x, y, 0, 0, mult);
                        else add(MoveKind::create, x, y, 0, 0, mult);
                    }
                }
            if (!(W > 0)) throw DomainError("internal: rejection-free kernel is stuck");
            steps += static_cast<double>(M) / W;
            if (steps >= sc.cap) return Outcome::cap;
            double r = rng.u01() * W;
            const Cand* chosen = &cands.back();
            for (const Cand& c : cands) {
                r -= c.w;
                if (r <= 0) { chosen = &c; break; }
            }
            apply_fast(chosen->kind, chosen->x1, chosen->y1, chosen->x2, chosen->y2, chosen->dhu);
            if (auto o = check_state()) return *o;
        }
    }

    TrajectorySample run(const std::string& label, uint64_t seed) {
        TrajectorySample out;
        out.seed = seed;
        out.start_label = label;
        Outcome o;
        if (auto t0 = check_state()) o = *t0;
        else o = sc.kernel == Kernel::plain ? loop_plain() : loop_rf();
        out.outcome = o;
        out.steps = steps;
        out.gate_hit = o == Outcome::cap ? false : gate_hit;
        out.max_energy = eu.to_rat(max_h);
        return out;
    }
};

template <class F>
void parallel_for(int threads, int n, F&& body) {
    int k = std::max(1, std::min(threads, n));
    if (k == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex mx;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(mx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace

bool step(Config& cfg, Rng& rng, const ModelParams& p) {
    SimConfig sc;
    sc.params = p;
    sc.dc = derive_constants(p);
    TargetSpec none;
    none.zero = true; // unused: the engine only steps once
    Engine e(cfg, none, sc, 0);
    e.rng = rng;
    bool changed = e.attempt_once();
    rng = e.rng;
    cfg = e.cfg;
    return changed;
}

TrajectorySample run_until_hit(const Config& start, const std::string& start_label,
                               const TargetSpec& targets, const SimConfig& sc,
                               uint64_t run_index) {
    if (!targets.any()) throw DomainError("run_until_hit needs at least one target");
    if (start.l0 != sc.params.l0) throw DomainError("start configuration box size mismatch");
    uint64_t seed = derive_seed(sc.master_seed, run_index);
    Engine e(start, targets, sc, seed);
    return e.run(start_label, seed);
}

HittingStats hitting_stats(const SimConfig& sc, const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) throw DomainError("beta grid is empty");
    for (std::size_t i = 1; i < beta_grid.size(); ++i)
        if (!(beta_grid[i] > beta_grid[i - 1])) throw DomainError("beta grid must be increasing");
    HittingStats out;
    Config start = Config::empty(sc.params.l0);
    TargetSpec tg;
    tg.one = true;
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
        SimConfig s = sc;
        s.params.beta = beta_grid[bi];
        std::vector<TrajectorySample> samples(static_cast<std::size_t>(s.runs));
        parallel_for(s.threads, s.runs, [&](int i) {
            samples[static_cast<std::size_t>(i)] =
                run_until_hit(start, "0", tg, s, bi * static_cast<uint64_t>(s.runs) + i);
        });
        std::vector<double> taus;
        for (const auto& t : samples)
            if (t.outcome == Outcome::one) taus.push_back(t.steps);
        if (taus.empty())
            throw DomainError("no completed runs at beta " + std::to_string(beta_grid[bi]));
        std::sort(taus.begin(), taus.end());
        BetaStats bs;
        bs.beta = beta_grid[bi];
        bs.completed = static_cast<int>(taus.size());
        double sum = 0;
        for (double t : taus) sum += t;
        std::size_t k = taus.size();
        bs.mean = sum / static_cast<double>(k);
        bs.median = k % 2 ? taus[k / 2] : 0.5 * (taus[k / 2 - 1] + taus[k / 2]);
        double q = 1.0 - std::exp(-1.0);
        std::size_t qi = static_cast<std::size_t>(std::ceil(q * static_cast<double>(k)));
        qi = qi ? qi - 1 : 0;
        if (qi >= k) qi = k - 1;
        bs.t_beta = taus[qi];
        double d = 0;
        for (std::size_t i = 0; i < k; ++i) {
            double F = 1.0 - std::exp(-taus[i] / bs.t_beta);
            d = std::max(d, std::abs(F - static_cast<double>(i + 1) / static_cast<double>(k)));
            d = std::max(d, std::abs(F - static_cast<double>(i) / static_cast<double>(k)));
        }
        bs.ks_exp1 = d;
        out.per_beta.push_back(bs);
    }
    if (out.per_beta.size() >= 2) {
        double mb = 0, my = 0;
        for (const auto& b : out.per_beta) {
            mb += b.beta;
            my += std::log(b.mean);
        }
        mb /= static_cast<double>(out.per_beta.size());
        my /= static_cast<double>(out.per_beta.size());
        double num = 0, den = 0;
        for (const auto& b : out.per_beta) {
            num += (b.beta - mb) * (std::log(b.mean) - my);
            den += (b.beta - mb) * (b.beta - mb);
        }
        out.slope = num / den;
    }
    return out;
}

Wilson wilson_interval(int hits, int n) {
    if (n <= 0) return {0.0, 1.0};
    double z = 1.96, z2 = z * z;
    double ph = static_cast<double>(hits) / n;
    double den = 1 + z2 / n;
    double centre = (ph + z2 / (2 * n)) / den;
    double half = z / den * std::sqrt(ph * (1 - ph) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

FateReport fate(const RectSpec& start_rect, const SimConfig& sc) {
    int ax = (sc.params.l0 - start_rect.l1) / 2 + 1;
    int ay = (sc.params.l0 - start_rect.l2) / 2 + 1;
    Config start = make_rect_config(sc.params.l0, start_rect, ax, ay);
    std::string label =
        "R(" + std::to_string(start_rect.l1) + "," + std::to_string(start_rect.l2) + ")";
    TargetSpec tg;
    tg.zero = tg.one = true;
    FateReport fr;
    fr.runs = sc.runs;
    std::vector<TrajectorySample> samples(static_cast<std::size_t>(sc.runs));
    parallel_for(sc.threads, sc.runs, [&](int i) {
        samples[static_cast<std::size_t>(i)] =
            run_until_hit(start, label, tg, sc, static_cast<uint64_t>(i));
    });
    for (const auto& t : samples) {
        if (t.outcome == Outcome::one) ++fr.hit_one_first;
        else if (t.outcome == Outcome::zero) ++fr.hit_zero_first;
        else ++fr.capped;
    }
    int done = fr.hit_one_first + fr.hit_zero_first;
    fr.frac_one = done ? static_cast<double>(fr.hit_one_first) / done : 0.0;
    fr.wilson_one = wilson_interval(fr.hit_one_first, done);
    return fr;
}

RecurrenceReport recurrence(const SimConfig& sc, int n_states, int max_particles) {
    if (n_states < 1) throw DomainError("recurrence needs at least one start");
    RecurrenceReport rr;
    rr.runs = n_states;
    rr.cap = std::exp(sc.params.beta * (rat_double(sc.dc.vstar) + 2.0));
    TargetSpec tg;
    tg.zero = tg.one = true;
    std::vector<char> returned(static_cast<std::size_t>(n_states), 0);
    parallel_for(sc.threads, n_states, [&](int i) {
        // start sampling stream kept apart from the trajectory stream
        Rng srng(derive_seed(sc.master_seed, static_cast<uint64_t>(i) | (1ull << 63)));
        Config start = Config::empty(sc.params.l0);
        int side = sc.params.l0 + 2;
        int k = static_cast<int>(srng.below(static_cast<uint64_t>(max_particles) + 1));
        for (int j = 0; j < k; ++j) {
            for (;;) {
                int c = static_cast<int>(srng.below(static_cast<uint64_t>(side) * side));
                int x = c % side, y = c / side;
                if (!start.at(x, y)) {
                    start.set(x, y, true);
                    break;
                }
            }
        }
        SimConfig s = sc;
        s.cap = rr.cap;
        TrajectorySample t =
            run_until_hit(start, "random-" + std::to_string(k), tg, s, static_cast<uint64_t>(i));
        returned[static_cast<std::size_t>(i)] =
            t.outcome == Outcome::zero || t.outcome == Outcome::one;
    });
    for (char c : returned) rr.returned += c;
    rr.fraction = static_cast<double>(rr.returned) / n_states;
    rr.wilson = wilson_interval(rr.returned, n_states);
    return rr;
}

} // namespace lgk
