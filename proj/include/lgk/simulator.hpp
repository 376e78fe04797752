#pragma once
// Kawasaki Markov chain: uniform bond proposal + Metropolis acceptance
// e^{-beta [dH]_+}. One attempted move = one time unit. A rejection-free
// kernel jumps between distinct states and accounts dwell time as the
// expected number of attempted moves.

#include "lgk/model.hpp"
#include "lgk/moves.hpp"
#include "lgk/landscape.hpp"
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lgk {

// splitmix64: tiny counter-based generator, one independent stream per run.
struct Rng {
    uint64_t state = 0;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double u01() { return (next() >> 11) * 0x1.0p-53; }
    // unbiased enough for n << 2^64: fixed-point multiply keeps determinism
    uint64_t below(uint64_t n) {
        return (uint64_t)(((__uint128_t)next() * n) >> 64);
    }
};

// run seed derived from (master, run index); stable across thread counts.
uint64_t derive_seed(uint64_t master, uint64_t run_index);

enum class Kernel { plain, rejection_free };

struct TargetSpec {
    bool zero = false;
    bool one = false;
    bool gate = false;                 // the union gate P
    std::optional<RectSpec> rect;      // exact rectangle state (anchored centrally)
    bool any() const { return zero || one || gate || rect.has_value(); }
};

enum class Outcome { zero, one, gate, rect, cap };

const char* outcome_str(Outcome o);

struct SimConfig {
    ModelParams params;
    DerivedConstants dc;
    uint64_t master_seed = 1;
    int runs = 1;
    double cap = 1e12;                 // attempted moves
    Kernel kernel = Kernel::plain;
    bool gate_full_check = false;      // audit mode: test P membership every step
    int threads = 1;
};

struct TrajectorySample {
    uint64_t seed = 0;
    std::string start_label;
    Outcome outcome = Outcome::cap;
    double steps = 0;                  // attempted moves (exact count for plain)
    bool gate_hit = false;             // visited P before the terminal target
    Rat max_energy;                    // max H over visited states
};

// Single attempted move on cfg (plain kernel). Returns true if the state changed.
bool step(Config& cfg, Rng& rng, const ModelParams& p);

TrajectorySample run_until_hit(const Config& start, const std::string& start_label,
                               const TargetSpec& targets, const SimConfig& sc,
                               uint64_t run_index);

struct BetaStats {
    double beta = 0;
    int completed = 0;
    double mean = 0, median = 0, t_beta = 0;   // t_beta: (1 - 1/e) quantile
    double ks_exp1 = 0;                        // KS distance of tau/t_beta vs Exp(1)
};

struct HittingStats {
    std::vector<BetaStats> per_beta;
    double slope = 0;   // linear fit of ln(mean tau) on beta
};

// 0 -> 1 hitting experiments on a beta grid (grid must be increasing).
// Throws DomainError when some beta completes no runs.
HittingStats hitting_stats(const SimConfig& sc, const std::vector<double>& beta_grid);

struct Wilson {
    double lo = 0, hi = 1;
};
Wilson wilson_interval(int hits, int n);

struct FateReport {
    int runs = 0;
    int hit_one_first = 0, hit_zero_first = 0, capped = 0;
    double frac_one = 0;
    Wilson wilson_one;
};

// Start from R(l1,l2) centred in the interior; race 0 vs 1.
FateReport fate(const RectSpec& start_rect, const SimConfig& sc);

struct RecurrenceReport {
    int runs = 0;
    int returned = 0;      // hit {0,1} within the cap e^{beta (V*+2)}
    double fraction = 0;
    Wilson wilson;
    double cap = 0;
};

// Random starts with at most max_particles particles placed uniformly in the box.
RecurrenceReport recurrence(const SimConfig& sc, int n_states, int max_particles);

} // namespace lgk
