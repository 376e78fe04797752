#pragma once
// Exact verification machinery: bottleneck (minimax) communication heights
// on restricted state spaces, stability levels on tiny full graphs, and the
// exhaustive scan of the moves exiting the basin B.
//
// Restricted spaces confine the clusterised part to a window and allow at
// most one free interior particle plus one ring particle in transit (the
// gas-exchange mechanism needs both alive at once). Free-particle positions
// are contracted to their connected roaming region and the ring to a single
// transit flag (walking is energy-flat), which keeps the state count finite
// and the quotient exact for bottleneck purposes.

#include "lgk/model.hpp"
#include "lgk/geometry.hpp"
#include "lgk/landscape.hpp"
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lgk {

struct SubSpace {
    // window confining eta_cl, inclusive interior coordinates
    int wx0 = 0, wy0 = 0, wx1 = -1, wy1 = -1;
    int max_particles = 0;
    bool allow_free = true;   // permit one free particle (anywhere in the box)
    bool full_box = false;    // ignore the window: raw occupancy of the whole
                              // box (side^2 <= 25), every state enumerable
    int l0 = 0;
    int width() const { return wx1 - wx0 + 1; }
    int height() const { return wy1 - wy0 + 1; }
};

// Minimax communication height between a and b within sub: minimum over
// restricted paths of the maximum of max{H(u),H(v)} along consecutive pairs.
// Bidirectional bottleneck search. Throws DomainError when a or b violates
// sub or the two are not connected within it.
Rat communication_height(const Config& a, const Config& b, const SubSpace& sub,
                         const ModelParams& p);

// Generic minimax on an explicit small graph (test oracle): nodes 0..n-1
// with energies h, undirected edges; returns minimax over paths a->b, or
// nullopt if disconnected.
std::optional<Rat> minimax_on_graph(int n, const std::vector<std::pair<int,int>>& edges,
                                    const std::vector<Rat>& h, int a, int b);

struct StabilityResult {
    bool finite = false;
    Rat v;               // stability level when finite
};

// V_x = Phi(x, {y : H(y) < H(x)}) - H(x) within sub; +infinity flag when no
// lower state is reachable (x at the bottom of sub).
StabilityResult stability_level(const Config& x, const SubSpace& sub, const ModelParams& p);

// Stability levels of every state of the full tiny box (side^2 <= 25 bits),
// by Kruskal union-find over edges sorted by threshold. Index = occupancy
// bitmask of the box (bit i = site i in row-major order).
std::vector<StabilityResult> stability_spectrum_full_box(const ModelParams& p);

// ==== exhaustive boundary-of-B scan ====

struct ScanLimits {
    int max_particles = 14;
    int threads = 1;
};

struct ExitPair {
    std::string from_grid;   // eta-bar (member of B)
    std::string to_grid;     // eta (outside B)
    Rat h_from, h_to;
    bool from_in_P2 = false;
    bool energy_drop_ok = false; // H(eta-bar) >= H(eta)
};

struct BoundaryScanReport {
    bool found_exit = false;
    Rat min_threshold;                  // min over exits of max{H(from),H(to)}
    std::vector<ExitPair> minimizers;
    unsigned long long bitmaps_scanned = 0;
    unsigned long long states_in_B = 0;
    unsigned long long exits_seen = 0;
    Rat clause1_min;                    // min threshold among exits from clause-1 states
    bool clause1_any = false;
    double elapsed_seconds = 0;
};

// Streams every configuration with eta_cl inside the window, at most
// limits.max_particles particles and n <= 1, keeps those in B, and
// enumerates every move leaving B. Throws DomainError when the window
// cannot contain R(2*l2star-1, l2star).
BoundaryScanReport scan_boundary_of_B(const ModelParams& p, const DerivedConstants& dc,
                                      const SubSpace& window, const ScanLimits& limits);

struct GateVerdict {
    bool pass = false;
    bool min_is_gamma = false;
    bool minimizers_in_P2 = false;
    bool energy_drop_ok = false;
    bool p1_reentry_ok = false;   // every P1 member in the window family has a
                                  // threshold-Gamma continuation back into B
    unsigned long long p1_members = 0;
    std::string detail;
};

// Runs the scan and the P1 re-entry check on the same window family.
GateVerdict verify_gate_structure(const ModelParams& p, const DerivedConstants& dc,
                                  const SubSpace& window, const ScanLimits& limits);

} // namespace lgk
