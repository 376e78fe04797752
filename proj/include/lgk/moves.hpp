#pragma once
// Kawasaki move universe on the box.
//
// The bond set has three parts, all treated as oriented bonds so that the
// proposal distribution is uniform over M = 4L(L+1) slots, L = l0+2:
//   - exchanges: oriented nearest neighbour pairs with both endpoints in the
//     box (4L(L-1) slots, two per unoriented pair),
//   - creations: bonds crossing into the ring from outside (4L slots,
//     corner cells carry two),
//   - annihilations: the reversed crossing bonds (4L slots).
// An exchange with source occupied and target empty swaps them; a creation
// fills an empty ring cell; an annihilation empties an occupied ring cell.
// Every other proposal is a null move.

#include "lgk/model.hpp"
#include "lgk/geometry.hpp"
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace lgk {

enum class MoveKind { exchange, create, annihilate };

struct Move {
    MoveKind kind = MoveKind::exchange;
    // exchange: particle moves (x1,y1) -> (x2,y2); create/annihilate act on (x1,y1).
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    Rat dh;     // H(after) - H(before)
    int ds = 0; // s(after) - s(before)
};

// Number of oriented bonds, 4L(L+1).
int bond_count(int l0);

// Applies a move in place. Throws DomainError when the occupancy premises
// fail (exchange needs source occupied / target empty, etc.) or the sites
// fall outside the box.
void apply(Config& cfg, const Move& m);

// All state-changing moves from cfg, each unoriented exchange listed once,
// with exact dh and ds. Order: exchanges in row-major bond order, then
// creations, then annihilations.
std::vector<Move> enumerate_moves(const Config& cfg, const ModelParams& p);

// ==== line activity frame ====
// For an exchange move x1 -> x2 with unit vector u = x2 - x1 and w = u
// rotated by 90 degrees, the seven frame lines are
//   r1: line along u through x1   r3: along u through x1+w
//   r4: along u through x1-w      r2: line along w through x2
//   r5: along w through x2+u      r6: along w through x1
//   r7: along w through x1-u.
// Only cells on these lines can change clusterised status, so the global
// semiperimeter change equals activations minus deactivations on the frame.

struct LineRef {
    bool is_row = false; // row: y == index, column: x == index
    int index = 0;
    bool operator==(const LineRef& o) const { return is_row == o.is_row && index == o.index; }
};

struct LineActivity {
    std::array<LineRef, 7> frame;    // r1..r7 in order
    std::array<bool, 7> before{};    // line meets eta_cl before the move
    std::array<bool, 7> after{};
    std::vector<int> activated;      // frame slots (0..6) turning on
    std::vector<int> deactivated;    // frame slots turning off
    int ds = 0;
};

// Throws DomainError for non-exchange moves or invalid exchanges.
LineActivity line_activity(const Config& cfg, const Move& m);

// ==== exhaustive local pattern checks ====
// Verifies a line activity lemma over every local pattern around one
// exchange move: a 5x5 core centred on the moving bond inside an otherwise
// empty box, source forced occupied and target forced empty (2^23 patterns).
// Lemmas whose hypothesis needs p_min >= 4 add a detached 4x4 block on
// disjoint rows and columns.
//
// lemma ids:
//   "r2r5-never-deactivate"   frame lines r2, r5 never turn off
//   "r6r7-never-activate"     frame lines r6, r7 never turn on
//   "lemma0-i"                r1 turning off forbids any activation
//   "lemma0-ii"               r1 turning on only allows r3/r4 to turn off
//   "ds-bound-5"              |ds| <= 5 when p_min(after) >= 4
//   "lemma12-vacancy-bounds"  vacancy/free-particle bounds for ds in 1..5
//                             and the ds=1 low-vacancy corollary

struct PatternCheckReport {
    std::string lemma;
    unsigned long long patterns_checked = 0;
    unsigned long long violations = 0;
    bool pass = false;
    std::string counterexample; // grid of the first violating before-state, empty if none
};

PatternCheckReport local_pattern_check(const std::string& lemma_id, int threads = 1);

// ==== integer energy units (shared by the simulator and the path builder) ====
// Smallest common denominator scaling: H values become exact long longs.

struct EnergyUnits {
    long long den = 1;  // unit denominator
    long long u1 = 0, u2 = 0, delta = 0; // couplings in units
    Rat to_rat(long long units) const { return Rat(units, den); }
};

EnergyUnits energy_units(const ModelParams& p);

// H(cfg) in units (exact).
long long hamiltonian_units(const Config& cfg, const EnergyUnits& eu);

// dH in units for a primitive move, without applying it. Premises as apply().
long long delta_h_units(const Config& cfg, MoveKind kind, int x1, int y1, int x2, int y2,
                        const EnergyUnits& eu);

} // namespace lgk
