#pragma once
// Lattice gas on a finite box with open boundary ring.
//
// The box Lambda is {0..l0+1}^2; the interior Lambda0 is {1..l0}^2; the ring
// is Lambda \ Lambda0. Particles interact only through nearest neighbour
// bonds with BOTH endpoints in the interior: horizontal bonds pay -U1,
// vertical bonds pay -U2, and every particle anywhere in the box pays the
// activity term +Delta. Ring particles are therefore always non-interacting.

#include "lgk/rational.hpp"
#include "lgk/error.hpp"
#include <cstdint>
#include <string>
#include <vector>

namespace lgk {

struct ModelParams {
    Rat u1;          // horizontal coupling, u1 > 0
    Rat u2;          // vertical coupling, 0 < u2 <= u1
    Rat delta;       // activity (chemical potential), u1 < delta < u1 + u2
    int l0 = 0;      // interior side length
    double beta = 1.0;  // inverse temperature (simulation only)
    bool strict = true; // reject parameters outside the anisotropic theory
};

enum class Regime { strong, weak, neither };

const char* regime_str(Regime r);

struct DerivedConstants {
    Rat eps;        // u1 + u2 - delta, > 0
    int l2star;     // floor(u2/eps) + 1: critical vertical side
    Rat deltafrac;  // l2star - u2/eps, in (0,1] (fractional defect)
    int l1star;     // floor(u1/eps) + 1
    int lbar;       // floor((u1-u2)/eps) + 1
    int sstar;      // 3*l2star - 1: critical semiperimeter
    Rat gamma;      // communication height between the empty and full states
    Rat vstar;      // 2*delta - u1: stability level bound for non-extremal states
    Regime regime = Regime::neither;
};

// Validates params and computes every derived constant. Throws DomainError
// when eps <= 0, when a coupling is non-positive, and in strict mode when
// the regime is neither (isotropic or boundary case) or u2/eps is an
// integer (degenerate critical droplet).
DerivedConstants derive_constants(const ModelParams& p);

// ==== configurations ====

struct Config {
    int l0 = 0;
    int side = 0;               // l0 + 2
    std::vector<uint8_t> occ;   // row-major, index x + y*side

    static Config empty(int l0);

    int idx(int x, int y) const { return x + y * side; }
    bool in_box(int x, int y) const { return x >= 0 && x < side && y >= 0 && y < side; }
    bool interior(int x, int y) const { return x >= 1 && x <= l0 && y >= 1 && y <= l0; }
    bool ring(int x, int y) const { return in_box(x, y) && !interior(x, y); }
    bool at(int x, int y) const { return occ[idx(x, y)] != 0; }
    void set(int x, int y, bool v) { occ[idx(x, y)] = v ? 1 : 0; }

    int count() const;           // particles anywhere in the box
    int count_interior() const;  // particles in Lambda0

    bool operator==(const Config& o) const { return l0 == o.l0 && occ == o.occ; }
};

struct StandardStates {
    Config all_empty;  // the metastable state: nothing anywhere
    Config all_full;   // the stable state: Lambda0 full, ring empty
};

StandardStates standard_states(int l0);

// H(eta) = -u1*(horizontal interior bonds) - u2*(vertical interior bonds)
//          + delta*(all particles in the box).
Rat hamiltonian(const Config& cfg, const ModelParams& p);

// log of the unnormalised Gibbs weight: -p.beta * H(eta).
double gibbs_weight_log(const Config& cfg, const ModelParams& p);

// Droplet energy of an l1 x l2 rectangle placed inside the interior:
// H(R(l1,l2)) = u1*l2 + u2*l1 - eps*l1*l2. Throws DomainError for
// negative sides.
Rat rect_energy(int l1, int l2, const ModelParams& p);

// ==== grid text form ====
// One row per line, top row (y = l0+1) first, '.' empty, '#' occupied.
// Covers the whole box including the ring.
std::string grid_format(const Config& cfg);
Config grid_parse(const std::string& text);

} // namespace lgk
