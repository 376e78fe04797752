#pragma once
// Cluster geometry descriptors.
//
// A particle is FREE when it sits on the ring, or sits in the interior with
// no occupied interior nearest neighbour. The clusterised part eta_cl is the
// interior occupancy minus free particles. All projection quantities (active
// rows and columns, runs, vacancies) are taken over eta_cl.

#include "lgk/model.hpp"
#include <vector>

namespace lgk {

struct Site {
    int x = 0, y = 0;
    bool operator==(const Site& o) const { return x == o.x && y == o.y; }
};

struct GeomSummary {
    int n = 0;          // free particles (ring + isolated interior)
    int cl_size = 0;    // |eta_cl|
    int p1 = 0;         // active columns: distinct x among eta_cl
    int p2 = 0;         // active rows: distinct y among eta_cl
    int s = 0;          // semiperimeter p1 + p2
    int g1 = 0;         // total vertical runs, summed per column
    int g2 = 0;         // total horizontal runs, summed per row
    int g1p = 0;        // g1 - p1 >= 0 (extra vertical fragmentation)
    int g2p = 0;        // g2 - p2 >= 0 (extra horizontal fragmentation)
    long long v = 0;    // vacancies: p1*p2 - cl_size (can be large)
    int clusters = 0;   // connected components of eta_cl
    bool monotone = false;   // g1p == 0 && g2p == 0
    // circumscribed rectangle of eta_cl (valid when cl_size > 0)
    int rx0 = 0, ry0 = 0, rx1 = -1, ry1 = -1;
    int rect_w() const { return rx1 - rx0 + 1; }
    int rect_h() const { return ry1 - ry0 + 1; }
};

// Free particles of cfg, in row-major scan order.
std::vector<Site> free_particles(const Config& cfg);

// Mask over the box: 1 where eta_cl occupies the cell.
std::vector<uint8_t> cl_mask(const Config& cfg);

GeomSummary summarize(const Config& cfg);

// Connected components of eta_cl (4-neighbour), each as a site list in
// row-major order; components ordered by their first site.
std::vector<std::vector<Site>> connected_components(const Config& cfg);

// Energy recomputed from descriptors:
//   H = H(R(p1,p2)) + eps*v + u1*g2p + u2*g1p + n*delta.
// Agrees with hamiltonian() on every configuration.
Rat lemma7_energy(const Config& cfg, const ModelParams& p);

} // namespace lgk
