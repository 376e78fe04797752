#pragma once
// Reference path from the empty to the full state.
//
// Skeleton: a nested sequence of rectangles indexed by semiperimeter s,
//   step a (s < 3*l2star-2): domino rectangles,
//   step b (3*l2star-2 <= s <= l2star+l0): R(s-l2star, l2star),
//   step c (s > l2star+l0): R(l0, s-l0) growing vertically.
// Interpolations: columns grow cell by cell bottom-up; the 0-domino to
// 1-domino transition goes through the quasi-domino and a column-to-row
// conveyor; every particle addition is a creation on the ring followed by a
// free-particle walk to the attachment cell; removals walk back and leave.

#include "lgk/model.hpp"
#include "lgk/moves.hpp"
#include "lgk/landscape.hpp"
#include <string>
#include <vector>

namespace lgk {

struct Skeleton {
    int s_min = 2;                // R(1,1)
    int s_max = 0;                // 2*l0 (the full square)
    std::vector<RectSpec> rects;  // rects[s - s_min]
    const RectSpec& at(int s) const;
};

// Throws DomainError when l0 <= floor((u1+u2)/eps) (box too small for the
// supercritical growth to pay off) or the regime is not strong.
Skeleton build_skeleton(const DerivedConstants& dc, const ModelParams& p, int l0);

struct PathStep {
    Move move;
    int stage_s = 0;            // skeleton stage being traversed (toward s+1)
    long long h_units = 0;      // energy after the move, in EnergyUnits
};

struct ReferencePath {
    Config initial;             // the empty state
    EnergyUnits units;
    std::vector<PathStep> steps;
    int anchor_x = 1, anchor_y = 1;
    long long max_units = 0;    // max energy over all states
    std::vector<int> argmax;    // step indices whose post-state attains the max
                                // (-1 encodes the initial state)
    Rat max_energy() const { return units.to_rat(max_units); }
};

// Full move-valid path 0 -> 1. The anchor is the lower-left interior corner
// of every skeleton rectangle; the terminal square R(l0,l0) must fit, so any
// anchor other than (1,1) throws DomainError.
ReferencePath build_reference_path(const DerivedConstants& dc, const ModelParams& p,
                                   int l0, int anchor_x = 1, int anchor_y = 1);

// Partial build: stages up to and including the transition into skeleton
// semiperimeter s_stop, placed at an arbitrary anchor (the prefix rectangle
// R(s_stop - l2star, l2star) must fit). Used to check translation invariance
// of the maximum.
ReferencePath build_reference_path_prefix(const DerivedConstants& dc, const ModelParams& p,
                                          int l0, int anchor_x, int anchor_y, int s_stop);

// max energy along the full reference path; equals the communication height
// upper bound. For valid strong-regime inputs this is exactly gamma.
Rat phi_upper_bound(const DerivedConstants& dc, const ModelParams& p, int l0);

} // namespace lgk
