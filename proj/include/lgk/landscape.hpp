#pragma once
// Energy landscape analysis: droplet energies, growth/shrink barriers,
// the basin B around the metastable state, the critical gate families
// P1 / P2, and the inequality battery behind the recurrence structure.

#include "lgk/model.hpp"
#include "lgk/geometry.hpp"
#include <optional>
#include <string>
#include <vector>

namespace lgk {

struct RectSpec {
    int l1 = 0; // horizontal side
    int l2 = 0; // vertical side
    bool operator==(const RectSpec& o) const { return l1 == o.l1 && l2 == o.l2; }
};

// Rectangle occupancy placed at anchor (ax, ay) inside the interior.
// Throws DomainError if it does not fit.
Config make_rect_config(int l0, const RectSpec& r, int ax, int ay);

// ==== dominoes and standard rectangles ====

enum class DominoKind { dom0, dom1, dom2 };

struct DominoRect {
    RectSpec rect;
    DominoKind kind;
};

// Domino rectangle of semiperimeter s (s >= 3):
//   s = 0 mod 3 -> R(2s/3, s/3)          (0-dom)
//   s = 1 mod 3 -> R((2s-2)/3, (s+2)/3)  (1-dom)
//   s = 2 mod 3 -> R((2s-1)/3, (s+1)/3)  (2-dom)
DominoRect classify_domino(int s);

enum class StandardKind { st0, st1 };

struct StandardRect {
    RectSpec rect;
    StandardKind kind;
    std::optional<RectSpec> quasi; // for 1-st: the companion R(l1+1, l2-1)
};

// Standard rectangle of semiperimeter s for the weak regime (s > lbar + 2):
//   s - lbar even -> R((s+lbar)/2, (s-lbar)/2)        (0-st)
//   s - lbar odd  -> R((s+lbar-1)/2, (s-lbar+1)/2)    (1-st, with quasi)
StandardRect classify_standard(int s, const DerivedConstants& dc);

// ==== barriers ====

enum class BarrierKind {
    add_row,        // 2*delta - u2
    add_column,     // 2*delta - u1
    remove_row,     // eps*(l1-2) + u1 + u2
    remove_column,  // eps*(l2-2) + u1 + u2
    row_to_column,  // delta if l1 < l2, else u1 + u2 + eps*(l1-l2)
    column_to_row   // delta-u2+u1 if l1 > l2, else delta-u2+u1+eps*(l2-l1+1)
};

const char* barrier_kind_str(BarrierKind k);

// Energy barrier for the mechanism applied to R(l1, l2). Throws DomainError
// for sides < 1.
Rat barrier(BarrierKind k, int l1, int l2, const ModelParams& p);

enum class BarrierRegion { Ap, Bp, Cp, Dp }; // A', B', C', D'

struct BarrierComparison {
    BarrierRegion region;
    std::vector<BarrierKind> minimal; // mechanisms attaining the minimum
};

// Cheapest mechanism map for rectangles:
//   D': l2 <= l2star-1 and l1 == 2*l2-2  -> remove_column tied with row_to_column
//   l1 <= l2 (outside D')                -> row_to_column dominates (tag B')
//   A': l2 <= l2star-1 and l1 > 2*l2-2   -> remove_column
//   B': l1 < l2 + l2star - 2 (slim)      -> row_to_column
//   C': l2 >= l2star and l1 >= l2+l2star-2 -> add_column
BarrierComparison compare_barriers(int l1, int l2, const DerivedConstants& dc,
                                   const ModelParams& p);

// ==== membership predicates ====

struct MembershipVerdict {
    bool member = false;
    std::string rule;    // matched clause, empty when not a member
    std::string reasons; // human-readable witness values
};

// Basin B around the empty state; clauses tested in order:
//   1: s <= sstar-2
//   2: s >= sstar-1 and p2 <= l2star-1
//   3: s == sstar-1 and p2 >= l2star and v >= pmin-1
//   4: s >= sstar   and p2 == l2star and v >= pmax-1
MembershipVerdict in_B(const Config& cfg, const DerivedConstants& dc);

// Gate family P1: n=0, connected, g1p=0, g2p=1, v = 2*l2star-2, and the
// circumscribed rectangle is R(2*l2star-1, l2star). Members have s = sstar
// and H = gamma.
MembershipVerdict in_P1(const Config& cfg, const ModelParams& p, const DerivedConstants& dc);

// Gate family P2: n=1, connected monotone cluster, v = l2star-1, and the
// circumscribed rectangle is R(2*l2star-2, l2star). Members have s = sstar-1
// and H = gamma.
MembershipVerdict in_P2(const Config& cfg, const ModelParams& p, const DerivedConstants& dc);

// Union gate P = P1 or P2.
MembershipVerdict in_P(const Config& cfg, const ModelParams& p, const DerivedConstants& dc);

// Weak regime gate: n=1, connected monotone, v = ell2(st)-1 and circumscribed
// rectangle R(ell1(st)+1, ell2(st)) where st = l1star + l2star - 1 and ell is
// the standard rectangle of that semiperimeter. Returns rule
// "not-applicable" outside the weak regime.
MembershipVerdict in_P_weak(const Config& cfg, const ModelParams& p, const DerivedConstants& dc);

// Fast necessary particle count for P membership: 2*l2star^2 - 3*l2star + 2,
// identical for both families.
int gate_particle_count(const DerivedConstants& dc);

// ==== transition regions ====

enum class TRegion { T1, T2, T3, outside };

const char* t_region_str(TRegion t);

// Tube membership for rectangles along the growth path:
//   T'1: l2 <= l2star-1 and 2*l2-3 <= l1 <= 2*l2, plus R(2*l2star-3, l2star)
//   T'2: l2 == l2star and l2 + l2star - 2 <= l1 < l0
//   T'3: l2 >= l2star and l0-1 <= l1 <= l0
// tested in that order.
TRegion region_T(int l1, int l2, const DerivedConstants& dc, int l0);

// ==== proof inequality battery ====

struct InequalityFamilyResult {
    std::string name;
    bool applicable = true;
    bool pass = false;
    long long checked = 0;
    std::string first_violation;
};

struct InequalityReport {
    std::vector<InequalityFamilyResult> families;
    bool all_pass = true; // over applicable families
};

// Exhaustively evaluates the finite inequality families used by the
// recurrence and gate analysis, with family parameter k ranging over
// 0..k_max (shape families skip degenerate side lengths).
InequalityReport verify_proof_inequalities(const ModelParams& p, const DerivedConstants& dc,
                                           int k_max);

// Circumscribing rectangle of the Wulff droplet: R(l1star, l2star). In the
// strong regime it is supercritical but never the gate shape.
RectSpec wulff_rect(const DerivedConstants& dc);

} // namespace lgk
