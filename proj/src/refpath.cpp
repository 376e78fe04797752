// Reference path: skeleton rectangles plus move-valid interpolations.
//
// Column growth peaks at 2*delta - u1 over the start rectangle (create,
// attach -u1, create again before the next attach). The 0-domino to 1-domino
// stage first widens to the quasi-domino and then runs the column-to-row
// conveyor, whose peak sits at delta + u1 - u2 over the quasi-domino; on the
// last 0-domino stage that value is exactly gamma.
//
// Conveyor cycle ledger (base = quasi-domino energy + delta - u2):
//   corner hop      +u2   (0 on the last cycle, the column is a singleton)
//   hole diffusion   0s, the bottom close gains -u2 (absent on the last)
//   block slide     +u1 then 0s; on the last cycle the carrier ends free
//   drop            -u1 with column support, -u1 - u2 once free
// Every particle arrives by ring creation plus a free walk over cells with
// no occupied interior neighbour, so walk moves cost exactly zero.

#include "lgk/refpath.hpp"
#include "lgk/error.hpp"
#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace lgk {

// ==== skeleton ====

namespace {

RectSpec domino_rect(int s) {
    // residues from s = 2: 3n -> R(2n,n), 3n+1 -> R(2n,n+1), 3n+2 -> R(2n+1,n+1)
    int n = s / 3, r = s % 3;
    if (r == 0) return {2 * n, n};
    if (r == 1) return {2 * n, n + 1};
    return {2 * n + 1, n + 1};
}

} // namespace

const RectSpec& Skeleton::at(int s) const {
    if (s < s_min || s > s_max) throw DomainError("semiperimeter outside the skeleton range");
    return rects[static_cast<std::size_t>(s - s_min)];
}

Skeleton build_skeleton(const DerivedConstants& dc, const ModelParams& p, int l0) {
    if (dc.regime != Regime::strong)
        throw DomainError("the reference path construction needs the strong regime");
    if (Rat(l0) * dc.eps <= p.u1 + p.u2)
        throw DomainError("box side must exceed (u1+u2)/eps for the full square to win");
    Skeleton sk;
    sk.s_max = 2 * l0;
    sk.rects.reserve(static_cast<std::size_t>(sk.s_max - sk.s_min + 1));
    for (int s = sk.s_min; s <= sk.s_max; ++s) {
        if (s < 3 * dc.l2star - 2) sk.rects.push_back(domino_rect(s));
        else if (s <= dc.l2star + l0) sk.rects.push_back({s - dc.l2star, dc.l2star});
        else sk.rects.push_back({l0, s - l0});
    }
    return sk;
}

// ==== path builder ====

namespace {

struct PathBuilder {
    const ModelParams& p;
    int l0 = 0;
    int ax = 1, ay = 1;
    Config cfg;
    EnergyUnits eu;
    long long h = 0;
    int stage = 0;
    ReferencePath path;

    PathBuilder(const ModelParams& pp, int box, int anchor_x, int anchor_y)
        : p(pp), l0(box), ax(anchor_x), ay(anchor_y), cfg(Config::empty(box)), eu(energy_units(pp)) {
        path.initial = cfg;
        path.units = eu;
        path.anchor_x = ax;
        path.anchor_y = ay;
        path.max_units = 0;
        path.argmax = {-1};
    }

    void push(MoveKind kind, int x1, int y1, int x2 = 0, int y2 = 0) {
        Move m;
        m.kind = kind;
        m.x1 = x1; m.y1 = y1; m.x2 = x2; m.y2 = y2;
        long long dhu = delta_h_units(cfg, kind, x1, y1, x2, y2, eu);
        m.dh = eu.to_rat(dhu);
        m.ds = kind == MoveKind::exchange ? line_activity(cfg, m).ds : 0;
        apply(cfg, m);
        h += dhu;
        path.steps.push_back({m, stage, h});
        int i = static_cast<int>(path.steps.size()) - 1;
        if (h > path.max_units) {
            path.max_units = h;
            path.argmax = {i};
        } else if (h == path.max_units) {
            path.argmax.push_back(i);
        }
    }

    // empty and either on the ring or with no occupied interior neighbour;
    // a free particle walks over such cells at constant energy
    bool safe_cell(int x, int y, int ignx = -9, int igny = -9) const {
        if (!cfg.in_box(x, y) || cfg.at(x, y)) return false;
        if (cfg.ring(x, y)) return true;
        static const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int nx = x + dx[d], ny = y + dy[d];
            if ((nx != ignx || ny != igny) && cfg.interior(nx, ny) && cfg.at(nx, ny)) return false;
        }
        return true;
    }

    // shortest free walk from an empty ring cell to (tx,ty) if safe, else to
    // a safe cell adjacent to it; returns [ring, ..., end]
    std::vector<Site> route_from_ring(int tx, int ty) const {
        int side = l0 + 2;
        std::vector<int> parent(static_cast<std::size_t>(side) * side, -2);
        std::vector<int> queue;
        auto id = [side](int x, int y) { return y * side + x; };
        auto seed = [&](int x, int y) {
            if (safe_cell(x, y) && parent[id(x, y)] == -2) {
                parent[id(x, y)] = -1;
                queue.push_back(id(x, y));
            }
        };
        if (safe_cell(tx, ty)) {
            seed(tx, ty);
        } else {
            seed(tx + 1, ty);
            seed(tx - 1, ty);
            seed(tx, ty + 1);
            seed(tx, ty - 1);
        }
        static const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int cur = queue[head], cx = cur % side, cy = cur / side;
            if (cfg.ring(cx, cy)) {
                std::vector<Site> walk;
                for (int at = cur; at != -1; at = parent[at]) walk.push_back({at % side, at / side});
                return walk;
            }
            for (int d = 0; d < 4; ++d) {
                int nx = cx + dx[d], ny = cy + dy[d];
                if (!cfg.in_box(nx, ny) || parent[id(nx, ny)] != -2 || !safe_cell(nx, ny)) continue;
                parent[id(nx, ny)] = cur;
                queue.push_back(id(nx, ny));
            }
        }
        throw DomainError("internal: no free route from the ring");
    }

    // create on the ring, walk, and land in (tx,ty)
    void deliver(int tx, int ty) {
        auto walk = route_from_ring(tx, ty);
        push(MoveKind::create, walk.front().x, walk.front().y);
        for (std::size_t i = 0; i + 1 < walk.size(); ++i)
            push(MoveKind::exchange, walk[i].x, walk[i].y, walk[i + 1].x, walk[i + 1].y);
        if (walk.back().x != tx || walk.back().y != ty)
            push(MoveKind::exchange, walk.back().x, walk.back().y, tx, ty);
    }

    // detach one step right, walk free to the ring, annihilate
    void remove_via_ring(int fx, int fy) {
        push(MoveKind::exchange, fx, fy, fx + 1, fy);
        int cx = fx + 1, cy = fy;
        if (!cfg.ring(cx, cy)) {
            int side = l0 + 2;
            std::vector<int> parent(static_cast<std::size_t>(side) * side, -2);
            std::vector<int> queue;
            auto id = [side](int x, int y) { return y * side + x; };
            parent[id(cx, cy)] = -1;
            queue.push_back(id(cx, cy));
            static const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
            std::vector<Site> walk;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                int cur = queue[head], x = cur % side, y = cur / side;
                if (cfg.ring(x, y)) {
                    for (int at = cur; at != -1; at = parent[at]) walk.push_back({at % side, at / side});
                    std::reverse(walk.begin(), walk.end());
                    break;
                }
                for (int d = 0; d < 4; ++d) {
                    int nx = x + dx[d], ny = y + dy[d];
                    if (!cfg.in_box(nx, ny) || parent[id(nx, ny)] != -2) continue;
                    if (!safe_cell(nx, ny, cx, cy)) continue;
                    parent[id(nx, ny)] = cur;
                    queue.push_back(id(nx, ny));
                }
            }
            if (walk.empty()) throw DomainError("internal: no free route to the ring");
            for (std::size_t i = 0; i + 1 < walk.size(); ++i)
                push(MoveKind::exchange, walk[i].x, walk[i].y, walk[i + 1].x, walk[i + 1].y);
            cx = walk.back().x;
            cy = walk.back().y;
        }
        push(MoveKind::annihilate, cx, cy);
    }

    void grow_column(int x, int height) {
        for (int j = 0; j < height; ++j) deliver(x, ay + j);
    }

    // R(W,h) at the anchor -> R(W-1, h+1): dismantle the right column into
    // the new top row, then top the row up with fresh particles
    void conveyor(int W, int h) {
        int X = ax + W - 1, Y = ay + h;
        deliver(X - 1, Y); // seed
        int cycles = std::min(h, W - 2);
        for (int r = 1; r <= cycles; ++r) {
            push(MoveKind::exchange, X, ay + h - 1, X, Y);
            for (int y = ay + h - 2; y >= ay + r - 1; --y)
                push(MoveKind::exchange, X, y, X, y + 1);
            for (int x = X - r; x <= X - 1; ++x)
                push(MoveKind::exchange, x, Y, x - 1, Y);
            push(MoveKind::exchange, X, Y, X - 1, Y);
        }
        if (h > cycles) {
            // the row absorbs at most W-2 transfers plus the seed; one
            // leftover column cell walks back out (h <= W-1 by construction)
            if (h > W - 1) throw DomainError("internal: conveyor column too tall for the row");
            remove_via_ring(X, ay + h - 1);
        }
        for (int x = X - cycles - 2; x >= ax; --x) deliver(x, Y);
    }

    void check_fit(const RectSpec& r) const {
        if (ax + r.l1 - 1 > l0 || ay + r.l2 - 1 > l0)
            throw DomainError("prefix rectangle does not fit at this anchor");
    }

    void transition(const RectSpec& cur, const RectSpec& nxt) {
        if (nxt.l1 == cur.l1 + 1 && nxt.l2 == cur.l2) {
            grow_column(ax + cur.l1, cur.l2);
        } else if (nxt.l1 == cur.l1 && nxt.l2 == cur.l2 + 1) {
            if (ax + cur.l1 <= l0) {
                grow_column(ax + cur.l1, cur.l2); // quasi-domino
                conveyor(cur.l1 + 1, cur.l2);
            } else {
                // no room to widen: run the conveyor on the full width and
                // rebuild the last column one taller
                conveyor(cur.l1, cur.l2);
                grow_column(ax + cur.l1 - 1, cur.l2 + 1);
            }
        } else {
            throw DomainError("internal: skeleton rectangles are not adjacent");
        }
    }
};

ReferencePath build_path_impl(const DerivedConstants& dc, const ModelParams& p, int l0,
                              int ax, int ay, int s_stop) {
    Skeleton sk = build_skeleton(dc, p, l0);
    if (s_stop < sk.s_min || s_stop > sk.s_max)
        throw DomainError("stop semiperimeter outside the skeleton range");
    if (ax < 1 || ay < 1 || ax > l0 || ay > l0)
        throw DomainError("anchor outside the interior");
    PathBuilder b(p, l0, ax, ay);
    b.stage = sk.s_min;
    b.check_fit(sk.at(sk.s_min));
    b.deliver(ax, ay);
    for (int s = sk.s_min; s < s_stop; ++s) {
        b.stage = s;
        b.check_fit(sk.at(s + 1));
        b.transition(sk.at(s), sk.at(s + 1));
    }
    return std::move(b.path);
}

} // namespace

ReferencePath build_reference_path(const DerivedConstants& dc, const ModelParams& p,
                                   int l0, int anchor_x, int anchor_y) {
    if (anchor_x != 1 || anchor_y != 1)
        throw DomainError("the full path needs anchor (1,1) so the square fits");
    return build_path_impl(dc, p, l0, 1, 1, 2 * l0);
}

ReferencePath build_reference_path_prefix(const DerivedConstants& dc, const ModelParams& p,
                                          int l0, int anchor_x, int anchor_y, int s_stop) {
    return build_path_impl(dc, p, l0, anchor_x, anchor_y, s_stop);
}

Rat phi_upper_bound(const DerivedConstants& dc, const ModelParams& p, int l0) {
    return build_reference_path(dc, p, l0).max_energy();
}

} // namespace lgk
