#include "lgk/geometry.hpp"

#include <algorithm>

namespace lgk {

std::vector<Site> free_particles(const Config& cfg) {
    std::vector<Site> out;
    for (int y = 0; y < cfg.side; ++y)
        for (int x = 0; x < cfg.side; ++x) {
            if (!cfg.at(x, y)) continue;
            if (!cfg.interior(x, y)) {
                out.push_back({x, y}); // ring particles never bind
                continue;
            }
            bool bound = (cfg.interior(x + 1, y) && cfg.at(x + 1, y)) ||
                         (cfg.interior(x - 1, y) && cfg.at(x - 1, y)) ||
                         (cfg.interior(x, y + 1) && cfg.at(x, y + 1)) ||
                         (cfg.interior(x, y - 1) && cfg.at(x, y - 1));
            if (!bound) out.push_back({x, y});
        }
    return out;
}

std::vector<uint8_t> cl_mask(const Config& cfg) {
    std::vector<uint8_t> mask(cfg.occ.size(), 0);
    for (int y = 1; y <= cfg.l0; ++y)
        for (int x = 1; x <= cfg.l0; ++x) {
            if (!cfg.at(x, y)) continue;
            bool bound = (cfg.interior(x + 1, y) && cfg.at(x + 1, y)) ||
                         (cfg.interior(x - 1, y) && cfg.at(x - 1, y)) ||
                         (cfg.interior(x, y + 1) && cfg.at(x, y + 1)) ||
                         (cfg.interior(x, y - 1) && cfg.at(x, y - 1));
            if (bound) mask[cfg.idx(x, y)] = 1;
        }
    return mask;
}

GeomSummary summarize(const Config& cfg) {
    GeomSummary g;
    std::vector<uint8_t> mask = cl_mask(cfg);
    g.n = static_cast<int>(free_particles(cfg).size());

    g.rx0 = cfg.side;
    g.ry0 = cfg.side;
    g.rx1 = -1;
    g.ry1 = -1;
    std::vector<uint8_t> colActive(static_cast<size_t>(cfg.side), 0);
    std::vector<uint8_t> rowActive(static_cast<size_t>(cfg.side), 0);
    for (int y = 1; y <= cfg.l0; ++y)
        for (int x = 1; x <= cfg.l0; ++x) {
            if (!mask[cfg.idx(x, y)]) continue;
            ++g.cl_size;
            colActive[static_cast<size_t>(x)] = 1;
            rowActive[static_cast<size_t>(y)] = 1;
            if (x < g.rx0) g.rx0 = x;
            if (x > g.rx1) g.rx1 = x;
            if (y < g.ry0) g.ry0 = y;
            if (y > g.ry1) g.ry1 = y;
        }
    for (int x = 1; x <= cfg.l0; ++x) g.p1 += colActive[static_cast<size_t>(x)];
    for (int y = 1; y <= cfg.l0; ++y) g.p2 += rowActive[static_cast<size_t>(y)];
    g.s = g.p1 + g.p2;
    g.v = static_cast<long long>(g.p1) * g.p2 - g.cl_size;

    // g1: vertical runs per column; g2: horizontal runs per row
    for (int x = 1; x <= cfg.l0; ++x) {
        bool prev = false;
        for (int y = 1; y <= cfg.l0; ++y) {
            bool cur = mask[cfg.idx(x, y)] != 0;
            if (cur && !prev) ++g.g1;
            prev = cur;
        }
    }
    for (int y = 1; y <= cfg.l0; ++y) {
        bool prev = false;
        for (int x = 1; x <= cfg.l0; ++x) {
            bool cur = mask[cfg.idx(x, y)] != 0;
            if (cur && !prev) ++g.g2;
            prev = cur;
        }
    }
    g.g1p = g.g1 - g.p1;
    g.g2p = g.g2 - g.p2;
    g.monotone = (g.g1p == 0 && g.g2p == 0);

    // components via flood fill over the mask
    std::vector<uint8_t> seen(mask.size(), 0);
    std::vector<int> stack;
    for (int y = 1; y <= cfg.l0; ++y)
        for (int x = 1; x <= cfg.l0; ++x) {
            int i = cfg.idx(x, y);
            if (!mask[i] || seen[i]) continue;
            ++g.clusters;
            stack.assign(1, i);
            seen[i] = 1;
            while (!stack.empty()) {
                int j = stack.back();
                stack.pop_back();
                int jx = j % cfg.side, jy = j / cfg.side;
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int nx = jx + dx[d], ny = jy + dy[d];
                    if (!cfg.interior(nx, ny)) continue;
                    int k = cfg.idx(nx, ny);
                    if (mask[k] && !seen[k]) {
                        seen[k] = 1;
                        stack.push_back(k);
                    }
                }
            }
        }
    if (g.cl_size == 0) {
        g.rx0 = g.ry0 = 0;
        g.rx1 = g.ry1 = -1;
    }
    return g;
}

std::vector<std::vector<Site>> connected_components(const Config& cfg) {
    std::vector<uint8_t> mask = cl_mask(cfg);
    std::vector<uint8_t> seen(mask.size(), 0);
    std::vector<std::vector<Site>> comps;
    for (int y = 1; y <= cfg.l0; ++y)
        for (int x = 1; x <= cfg.l0; ++x) {
            int i = cfg.idx(x, y);
            if (!mask[i] || seen[i]) continue;
            std::vector<Site> comp;
            std::vector<int> stack{i};
            seen[i] = 1;
            while (!stack.empty()) {
                int j = stack.back();
                stack.pop_back();
                comp.push_back({j % cfg.side, j / cfg.side});
                int jx = j % cfg.side, jy = j / cfg.side;
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int nx = jx + dx[d], ny = jy + dy[d];
                    if (!cfg.interior(nx, ny)) continue;
                    int k = cfg.idx(nx, ny);
                    if (mask[k] && !seen[k]) {
                        seen[k] = 1;
                        stack.push_back(k);
                    }
                }
            }
            // row-major order within the component
            std::sort(comp.begin(), comp.end(), [&](const Site& a, const Site& b) {
                return a.y != b.y ? a.y < b.y : a.x < b.x;
            });
            comps.push_back(std::move(comp));
        }
    return comps;
}

Rat lemma7_energy(const Config& cfg, const ModelParams& p) {
    GeomSummary g = summarize(cfg);
    return rect_energy(g.p1, g.p2, p) + (p.u1 + p.u2 - p.delta) * Rat(g.v) +
           p.u1 * g.g2p + p.u2 * g.g1p + p.delta * g.n;
}

} // namespace lgk
