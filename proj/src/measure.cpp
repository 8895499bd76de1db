#include "coneforge/measure.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_set>

#include "coneforge/errors.hpp"
#include "coneforge/rng.hpp"

namespace coneforge {

namespace {

constexpr double kEventMergeTol = 1e-12;  // events closer than this merge
constexpr size_t kPairSweepLimit = 3000;  // generators per band for the generic engine

struct Line {
    double slope = 0.0;
    double inter = 0.0;
    double at(double t) const { return inter + slope * t; }
};

// ---------------------------------------------------------------------------
// Generic engine: all-pairs endpoint-crossing sweep over one apex-free band.
// Union length is piecewise linear between endpoint-order changes; the sweep
// maintains the sorted endpoint order, coverage depth and the length slope.
// ---------------------------------------------------------------------------

double pair_sweep_band(const std::vector<CrossSection>& xs, double y0, double y1) {
    const size_t n = xs.size();
    if (n == 0 || y1 <= y0) return 0.0;

    struct Endpoint {
        Line line;
        int sign;  // +1 opens an interval, -1 closes it
    };
    std::vector<Endpoint> eps;
    eps.reserve(2 * n);
    for (const auto& c : xs) {
        eps.push_back({{c.lo_s, c.lo_b}, +1});
        eps.push_back({{c.hi_s, c.hi_b}, -1});
    }
    const size_t m = eps.size();

    struct Event {
        double t;
        std::uint32_t a, b;
    };
    std::vector<Event> events;
    for (std::uint32_t i = 0; i < m; ++i) {
        for (std::uint32_t j = i + 1; j < m; ++j) {
            const double ds = eps[i].line.slope - eps[j].line.slope;
            if (std::abs(ds) < 1e-15) continue;
            const double t = (eps[j].line.inter - eps[i].line.inter) / ds;
            if (t > y0 + kEventMergeTol && t < y1 - kEventMergeTol) {
                events.push_back({t, i, j});
            }
        }
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });

    // Sorted order at y0. Endpoints that tie at the band edge (apexes sit
    // exactly there) must be ordered by slope to be correct just inside; do
    // that in a second pass over near-tied neighbors so the sort comparator
    // stays a strict weak ordering despite rounding in the intercepts.
    std::vector<std::uint32_t> order(m);
    for (std::uint32_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double va = eps[a].line.at(y0), vb = eps[b].line.at(y0);
        if (va != vb) return va < vb;
        if (eps[a].line.slope != eps[b].line.slope)
            return eps[a].line.slope < eps[b].line.slope;
        return a < b;
    });
    for (std::uint32_t k = 1; k < m; ++k) {
        std::uint32_t j = k;
        while (j > 0) {
            const double va = eps[order[j - 1]].line.at(y0);
            const double vb = eps[order[j]].line.at(y0);
            const double tie = 1e-12 * (1.0 + std::abs(va) + std::abs(vb));
            if (std::abs(va - vb) <= tie &&
                eps[order[j - 1]].line.slope > eps[order[j]].line.slope) {
                std::swap(order[j - 1], order[j]);
                --j;
            } else {
                break;
            }
        }
    }
    std::vector<std::uint32_t> pos(m);
    for (std::uint32_t k = 0; k < m; ++k) pos[order[k]] = k;

    // depth[k]: coverage depth of the gap between order[k] and order[k+1].
    std::vector<int> depth(m, 0);
    {
        int d = 0;
        for (std::uint32_t k = 0; k < m; ++k) {
            d += eps[order[k]].sign;
            depth[k] = d;
        }
    }

    auto recompute = [&](double y, double& L, double& dL) {
        L = 0.0;
        dL = 0.0;
        for (std::uint32_t k = 0; k + 1 < m; ++k) {
            if (depth[k] > 0) {
                L += eps[order[k + 1]].line.at(y) - eps[order[k]].line.at(y);
                dL += eps[order[k + 1]].line.slope - eps[order[k]].line.slope;
            }
        }
    };

    double L = 0.0, dL = 0.0;
    recompute(y0, L, dL);

    double area = 0.0;
    double y_cur = y0;
    size_t since_checkpoint = 0;

    auto advance_to = [&](double y) {
        const double dy = y - y_cur;
        if (dy > 0.0) {
            area += L * dy + 0.5 * dL * dy * dy;
            L += dL * dy;
            y_cur = y;
        }
    };

    auto gap_slope = [&](std::uint32_t k) {
        return (depth[k] > 0)
                   ? eps[order[k + 1]].line.slope - eps[order[k]].line.slope
                   : 0.0;
    };

    for (const Event& ev : events) {
        // After the crossing, the endpoint with the smaller slope lies below.
        const bool a_low = eps[ev.a].line.slope < eps[ev.b].line.slope;
        const std::uint32_t lo_ep = a_low ? ev.a : ev.b;
        const std::uint32_t hi_ep = a_low ? ev.b : ev.a;
        if (pos[lo_ep] < pos[hi_ep]) continue;  // already swapped in a tie cluster
        advance_to(ev.t);
        // Bubble the rising endpoint past the falling one; intermediates tie
        // at ev.t.
        while (pos[hi_ep] < pos[lo_ep]) {
            const std::uint32_t q = pos[hi_ep];
            // Update dL for the three affected gaps around position q.
            if (q >= 1) dL -= gap_slope(q - 1);
            dL -= gap_slope(q);
            if (q + 2 < m) dL -= gap_slope(q + 1);

            std::swap(order[q], order[q + 1]);
            pos[order[q]] = q;
            pos[order[q + 1]] = q + 1;
            depth[q] = (q >= 1 ? depth[q - 1] : 0) + eps[order[q]].sign;

            if (q >= 1) dL += gap_slope(q - 1);
            dL += gap_slope(q);
            if (q + 2 < m) dL += gap_slope(q + 1);
        }
        if (++since_checkpoint >= 8192) {
            since_checkpoint = 0;
            recompute(y_cur, L, dL);
        }
    }
    advance_to(y1);
    return area;
}

// ---------------------------------------------------------------------------
// Fusion engine for translated-forest bands. Preconditions (verified by the
// caller): common apex height below the band, angular tiling (each
// cross-section's upper slope equals the next one's lower slope) and strictly
// decreasing apex abscissae. Under those, disjoint atoms stay sorted, the gap
// between neighbors is concave in t (so a touch is permanent) and fused atoms
// never re-split; the union length is the sum of envelope span lengths.
// ---------------------------------------------------------------------------

// Lower/upper envelope of a line set, as pieces active in increasing t.
struct Envelope {
    std::vector<Line> pieces;     // active line per piece
    std::vector<double> breaks;   // breaks[i]: end of piece i (last = +inf)

    double at(double t, size_t hint_from = 0) const {
        size_t i = piece_index(t, hint_from);
        return pieces[i].at(t);
    }
    size_t piece_index(double t, size_t from = 0) const {
        size_t i = from;
        while (i + 1 < pieces.size() && breaks[i] <= t) ++i;
        return i;
    }
};

// lower = true: pointwise min (slopes decrease along t);
// lower = false: pointwise max (slopes increase along t).
Envelope build_envelope(std::vector<Line> lines, bool lower) {
    std::sort(lines.begin(), lines.end(), [&](const Line& a, const Line& b) {
        if (a.slope != b.slope) return a.slope < b.slope;
        return lower ? a.inter < b.inter : a.inter > b.inter;
    });
    // Drop duplicate slopes, keeping the dominating intercept.
    std::vector<Line> uniq;
    for (const Line& l : lines) {
        if (!uniq.empty() && l.slope == uniq.back().slope) continue;
        uniq.push_back(l);
    }
    if (!lower) {
        // For the max, pieces run slope-ascending over t; build with the same
        // stack logic by keeping ascending order. For the min, pieces run
        // slope-descending: reverse.
    } else {
        std::reverse(uniq.begin(), uniq.end());
    }

    std::vector<Line> stack;
    std::vector<double> bk;
    auto isect = [](const Line& a, const Line& b) {
        return (b.inter - a.inter) / (a.slope - b.slope);
    };
    for (const Line& l : uniq) {
        while (!stack.empty()) {
            if (stack.size() == 1) {
                const double t = isect(stack.back(), l);
                bk.assign(1, t);
                break;
            }
            const double t = isect(stack.back(), l);
            if (t <= bk.back()) {
                stack.pop_back();
                bk.pop_back();
            } else {
                bk.push_back(t);
                break;
            }
        }
        if (stack.empty()) bk.clear();
        stack.push_back(l);
    }
    Envelope env;
    env.pieces = std::move(stack);
    env.breaks = std::move(bk);
    env.breaks.push_back(std::numeric_limits<double>::infinity());
    return env;
}

struct Atom {
    std::vector<Line> lo_lines, hi_lines;
    Envelope lo_env, hi_env;
    size_t lo_piece = 0, hi_piece = 0;
    int prev = -1, next = -1;
    bool alive = true;
    std::uint32_t stamp = 0;
};

// First t >= t_from where f(t) = lhs(t) - rhs(t) reaches <= 0. f is concave
// piecewise linear (lhs concave, rhs convex), so the root is unique going
// forward; returns +inf if none.
double first_touch(const Envelope& lo_env_right, const Envelope& hi_env_left,
                   double t_from) {
    size_t i = lo_env_right.piece_index(t_from);
    size_t j = hi_env_left.piece_index(t_from);
    double t = t_from;
    const double inf = std::numeric_limits<double>::infinity();
    for (int guard = 0; guard < 1 << 20; ++guard) {
        const Line& a = lo_env_right.pieces[i];
        const Line& b = hi_env_left.pieces[j];
        const double seg_end = std::min(lo_env_right.breaks[i], hi_env_left.breaks[j]);
        const double f0 = a.at(t) - b.at(t);
        if (f0 <= 0.0) return t;
        const double ds = a.slope - b.slope;
        if (ds < 0.0) {
            const double root = t - f0 / ds;
            if (root <= seg_end) return root;
        }
        if (seg_end == inf) return inf;
        t = seg_end;
        if (lo_env_right.breaks[i] <= t && i + 1 < lo_env_right.pieces.size()) ++i;
        if (hi_env_left.breaks[j] <= t && j + 1 < hi_env_left.pieces.size()) ++j;
    }
    return inf;
}

double fusion_sweep_band(const std::vector<CrossSection>& xs, double t0,
                         double t1, double win_lo, double win_hi) {
    const int n = static_cast<int>(xs.size());
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        Atom a;
        a.lo_lines = {{xs[static_cast<size_t>(i)].lo_s, xs[static_cast<size_t>(i)].lo_b}};
        a.hi_lines = {{xs[static_cast<size_t>(i)].hi_s, xs[static_cast<size_t>(i)].hi_b}};
        a.lo_env = build_envelope(a.lo_lines, true);
        a.hi_env = build_envelope(a.hi_lines, false);
        a.prev = i - 1;
        a.next = (i + 1 < n) ? i + 1 : -1;
        atoms.push_back(std::move(a));
    }

    // Event heap: piece advances and pair touches. Touch events are keyed to
    // the right-positioned atom (lower list index) and invalidated by stamps.
    enum class Ev { Touch, PieceLo, PieceHi };
    struct Event {
        double t;
        Ev kind;
        int atom;
        std::uint32_t stamp;
        bool operator<(const Event& o) const { return t > o.t; }
    };
    std::priority_queue<Event> heap;

    double sum_slope = 0.0, sum_inter = 0.0;
    auto add_atom_terms = [&](const Atom& a, double sgn) {
        const Line& lo = a.lo_env.pieces[a.lo_piece];
        const Line& hi = a.hi_env.pieces[a.hi_piece];
        sum_slope += sgn * (hi.slope - lo.slope);
        sum_inter += sgn * (hi.inter - lo.inter);
    };

    auto schedule_piece_lo = [&](int id) {
        const Atom& a = atoms[static_cast<size_t>(id)];
        if (a.lo_piece + 1 < a.lo_env.pieces.size())
            heap.push({a.lo_env.breaks[a.lo_piece], Ev::PieceLo, id, a.stamp});
    };
    auto schedule_piece_hi = [&](int id) {
        const Atom& a = atoms[static_cast<size_t>(id)];
        if (a.hi_piece + 1 < a.hi_env.pieces.size())
            heap.push({a.hi_env.breaks[a.hi_piece], Ev::PieceHi, id, a.stamp});
    };
    auto schedule_pieces = [&](int id) {
        schedule_piece_lo(id);
        schedule_piece_hi(id);
    };
    auto schedule_touch = [&](int right_id, double t_from) {
        const Atom& r = atoms[static_cast<size_t>(right_id)];
        if (r.next < 0) return;
        const Atom& l = atoms[static_cast<size_t>(r.next)];
        const double t = first_touch(r.lo_env, l.hi_env, t_from);
        if (t < t1) heap.push({std::max(t, t0), Ev::Touch, right_id, r.stamp});
    };

    for (int i = 0; i < n; ++i) {
        atoms[static_cast<size_t>(i)].lo_piece =
            atoms[static_cast<size_t>(i)].lo_env.piece_index(t0);
        atoms[static_cast<size_t>(i)].hi_piece =
            atoms[static_cast<size_t>(i)].hi_env.piece_index(t0);
        add_atom_terms(atoms[static_cast<size_t>(i)], +1.0);
        schedule_pieces(i);
        schedule_touch(i, t0);
    }

    double area = 0.0;
    double t_cur = t0;
    auto advance_to = [&](double t) {
        if (t <= t_cur) return;
        const double a = std::max(t_cur, win_lo);
        const double b = std::min(t, win_hi);
        if (b > a) {
            area += sum_inter * (b - a) + 0.5 * sum_slope * (b * b - a * a);
        }
        t_cur = t;
    };

    while (!heap.empty()) {
        Event ev = heap.top();
        heap.pop();
        if (ev.t >= t1) break;
        Atom& a = atoms[static_cast<size_t>(ev.atom)];
        if (!a.alive || ev.stamp != a.stamp) continue;
        advance_to(ev.t);
        switch (ev.kind) {
            case Ev::PieceLo: {
                add_atom_terms(a, -1.0);
                ++a.lo_piece;
                add_atom_terms(a, +1.0);
                schedule_piece_lo(ev.atom);
                break;
            }
            case Ev::PieceHi: {
                add_atom_terms(a, -1.0);
                ++a.hi_piece;
                add_atom_terms(a, +1.0);
                schedule_piece_hi(ev.atom);
                break;
            }
            case Ev::Touch: {
                const int left_id = a.next;
                if (left_id < 0) break;
                Atom& l = atoms[static_cast<size_t>(left_id)];
                // Merge into a fresh atom spanning both index ranges.
                Atom merged;
                merged.lo_lines = a.lo_lines;
                merged.lo_lines.insert(merged.lo_lines.end(), l.lo_lines.begin(),
                                       l.lo_lines.end());
                merged.hi_lines = a.hi_lines;
                merged.hi_lines.insert(merged.hi_lines.end(), l.hi_lines.begin(),
                                       l.hi_lines.end());
                merged.lo_env = build_envelope(merged.lo_lines, true);
                merged.hi_env = build_envelope(merged.hi_lines, false);
                merged.lo_piece = merged.lo_env.piece_index(t_cur);
                merged.hi_piece = merged.hi_env.piece_index(t_cur);
                merged.prev = a.prev;
                merged.next = l.next;

                add_atom_terms(a, -1.0);
                add_atom_terms(l, -1.0);
                a.alive = false;
                l.alive = false;
                ++a.stamp;
                ++l.stamp;

                const int id = static_cast<int>(atoms.size());
                atoms.push_back(std::move(merged));
                Atom& m = atoms.back();
                if (m.prev >= 0) atoms[static_cast<size_t>(m.prev)].next = id;
                if (m.next >= 0) atoms[static_cast<size_t>(m.next)].prev = id;
                add_atom_terms(m, +1.0);
                schedule_pieces(id);
                schedule_touch(id, t_cur);
                if (m.prev >= 0) {
                    ++atoms[static_cast<size_t>(m.prev)].stamp;
                    schedule_pieces(m.prev);
                    schedule_touch(m.prev, t_cur);
                }
                break;
            }
        }
    }
    advance_to(t1);
    return area;
}

// ---------------------------------------------------------------------------

struct BandInput {
    std::vector<CrossSection> xs;
    double apex_y = 0.0;   // common apex height when structured
    bool structured = false;
};

// Checks the translated-forest structure and, when present, returns the
// cross-sections sorted by angle.
bool prepare_structured(const std::vector<const DoubleCone*>& cones, double band_lo,
                        std::vector<CrossSection>& out, double& apex_y) {
    if (cones.empty()) return false;
    apex_y = cones[0]->vertex.y;
    for (const DoubleCone* c : cones) {
        if (std::abs(c->vertex.y - apex_y) > 1e-9) return false;
    }
    if (band_lo < apex_y - 1e-9) return false;
    std::vector<const DoubleCone*> sorted(cones);
    std::sort(sorted.begin(), sorted.end(), [](const DoubleCone* a, const DoubleCone* b) {
        return a->angle_lo < b->angle_lo;
    });
    out.clear();
    out.reserve(sorted.size());
    double prev_hi_s = 0.0;
    double prev_vx = 0.0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        const DoubleCone* c = sorted[i];
        const double lo_s = std::tan(c->angle_lo);
        const double hi_s = std::tan(c->angle_hi);
        if (i > 0) {
            if (std::abs(lo_s - prev_hi_s) > 1e-12 * std::max(1.0, std::abs(lo_s)))
                return false;
            if (c->vertex.x > prev_vx - 1e-15) return false;  // need strict decrease
        }
        prev_hi_s = hi_s;
        prev_vx = c->vertex.x;
        // Intercepts in t = y - apex_y.
        out.push_back({c->vertex.x, lo_s, c->vertex.x, hi_s});
    }
    return true;
}

double band_area(const std::vector<const DoubleCone*>& cones, double y0, double y1,
                 StripEngine engine) {
    if (cones.empty() || y1 <= y0) return 0.0;
    const bool pair_ok = engine != StripEngine::kFusion &&
                         (engine == StripEngine::kPairSweep ||
                          cones.size() <= kPairSweepLimit);
    if (pair_ok) {
        std::vector<CrossSection> xs;
        xs.reserve(cones.size());
        const double mid = 0.5 * (y0 + y1);
        for (const DoubleCone* c : cones) {
            const double tl = std::tan(c->angle_lo);
            const double th = std::tan(c->angle_hi);
            const double vx = c->vertex.x, vy = c->vertex.y;
            if (mid >= vy) {
                xs.push_back({vx - vy * tl, tl, vx - vy * th, th});
            } else {
                xs.push_back({vx - vy * th, th, vx - vy * tl, tl});
            }
        }
        return pair_sweep_band(xs, y0, y1);
    }
    std::vector<CrossSection> xs;
    double apex_y = 0.0;
    if (!prepare_structured(cones, y0, xs, apex_y)) {
        throw Error(
            "strip_union_area: cone list too large for the generic engine and "
            "lacks translated-forest structure");
    }
    return fusion_sweep_band(xs, 0.0, y1 - apex_y, y0 - apex_y, y1 - apex_y);
}

}  // namespace

double strip_union_area(std::span<const DoubleCone> cones, const Strip& strip,
                        StripEngine engine) {
    if (cones.empty() || strip.y_hi <= strip.y_lo) return 0.0;
    // Split at apex heights interior to the strip.
    std::vector<double> levels{strip.y_lo, strip.y_hi};
    for (const auto& c : cones) {
        if (c.vertex.y > strip.y_lo + kEventMergeTol &&
            c.vertex.y < strip.y_hi - kEventMergeTol) {
            levels.push_back(c.vertex.y);
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double a, double b) { return b - a <= kEventMergeTol; }),
                 levels.end());

    std::vector<const DoubleCone*> ptrs;
    ptrs.reserve(cones.size());
    for (const auto& c : cones) ptrs.push_back(&c);

    double area = 0.0;
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        area += band_area(ptrs, levels[i], levels[i + 1], engine);
    }
    return area;
}

double strip_union_area(const ConeForest& forest, const Strip& strip,
                        StripEngine engine) {
    const auto cones = forest.final_cones();
    return strip_union_area(std::span<const DoubleCone>(cones), strip, engine);
}

double union_length_at(std::span<const DoubleCone> cones, double y) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(cones.size());
    for (const auto& c : cones) {
        const double dy = y - c.vertex.y;
        const double a = c.vertex.x + dy * std::tan(c.angle_lo);
        const double b = c.vertex.x + dy * std::tan(c.angle_hi);
        iv.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(iv.begin(), iv.end());
    double len = 0.0, cur_lo = 0.0, cur_hi = -std::numeric_limits<double>::infinity();
    bool open = false;
    for (const auto& [lo, hi] : iv) {
        if (!open || lo > cur_hi) {
            if (open) len += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (open) len += cur_hi - cur_lo;
    return len;
}

McResult monte_carlo_area(const std::function<bool(Point2)>& contains,
                          const Box2& box, std::int64_t n_samples,
                          std::uint64_t seed) {
    if (n_samples < 1) throw Error("monte_carlo_area: need at least one sample");
    if (box.x_hi <= box.x_lo || box.y_hi <= box.y_lo)
        throw Error("monte_carlo_area: empty bounding box");
    Rng rng(seed);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const double x = rng.uniform(box.x_lo, box.x_hi);
        const double y = rng.uniform(box.y_lo, box.y_hi);
        if (contains({x, y})) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    McResult r;
    r.estimate = box.area() * p;
    r.stderr_ = box.area() * std::sqrt(std::max(0.0, p * (1.0 - p) /
                                                static_cast<double>(n_samples)));
    r.hits = hits;
    r.samples = n_samples;
    return r;
}

UnionLocator::UnionLocator(std::span<const DoubleCone> cones, double y_lo,
                           double y_hi, int bands)
    : cones_(cones.begin(), cones.end()), y_lo_(y_lo), y_hi_(y_hi) {
    bands = std::max(1, bands);
    band_h_ = (y_hi - y_lo) / bands;
    if (band_h_ <= 0.0) band_h_ = 1.0;
    bands_.resize(static_cast<size_t>(bands));
    prefix_hi_.resize(static_cast<size_t>(bands));
    for (int b = 0; b < bands; ++b) {
        const double b_lo = y_lo + b * band_h_;
        const double b_hi = b_lo + band_h_;
        auto& list = bands_[static_cast<size_t>(b)];
        for (int i = 0; i < static_cast<int>(cones_.size()); ++i) {
            const auto& c = cones_[static_cast<size_t>(i)];
            const double tl = std::tan(c.angle_lo), th = std::tan(c.angle_hi);
            const double d0 = b_lo - c.vertex.y, d1 = b_hi - c.vertex.y;
            double xs[4] = {c.vertex.x + d0 * tl, c.vertex.x + d0 * th,
                            c.vertex.x + d1 * tl, c.vertex.x + d1 * th};
            double lo = *std::min_element(xs, xs + 4);
            double hi = *std::max_element(xs, xs + 4);
            if (c.vertex.y >= b_lo && c.vertex.y <= b_hi) {
                lo = std::min(lo, c.vertex.x);
                hi = std::max(hi, c.vertex.x);
            }
            list.push_back({lo, hi, i});
        }
        std::sort(list.begin(), list.end(),
                  [](const Entry& a, const Entry& b) { return a.x_lo < b.x_lo; });
        auto& pre = prefix_hi_[static_cast<size_t>(b)];
        pre.resize(list.size());
        double run = -std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < list.size(); ++k) {
            run = std::max(run, list[k].x_hi);
            pre[k] = run;
        }
    }
}

bool UnionLocator::contains(Point2 p) const {
    if (p.y < y_lo_ || p.y > y_hi_) return false;
    int b = static_cast<int>((p.y - y_lo_) / band_h_);
    b = std::clamp(b, 0, static_cast<int>(bands_.size()) - 1);
    const auto& list = bands_[static_cast<size_t>(b)];
    const auto& pre = prefix_hi_[static_cast<size_t>(b)];
    // Candidates: entries with x_lo <= p.x whose running max x_hi reaches p.x.
    size_t hi = static_cast<size_t>(
        std::upper_bound(list.begin(), list.end(), p.x,
                         [](double v, const Entry& e) { return v < e.x_lo; }) -
        list.begin());
    for (size_t k = hi; k-- > 0;) {
        if (pre[k] < p.x) break;
        if (list[k].x_hi >= p.x &&
            cone_contains(cones_[static_cast<size_t>(list[k].cone)], p, 0.0)) {
            return true;
        }
    }
    return false;
}

DiskAreaResult disk_intersection_area(const ConeForest& forest, const Disk& disk,
                                      std::int64_t n_samples, std::uint64_t seed) {
    const auto cones = forest.final_cones();
    const Box2 box{disk.center.x - disk.radius, disk.center.x + disk.radius,
                   disk.center.y - disk.radius, disk.center.y + disk.radius};
    UnionLocator locator(std::span<const DoubleCone>(cones), box.y_lo, box.y_hi, 128);
    const double r2 = disk.radius * disk.radius;
    auto pred = [&](Point2 p) {
        const Vec2 d = p - disk.center;
        if (dot(d, d) > r2) return false;
        return locator.contains(p);
    };
    DiskAreaResult out;
    const McResult mc = monte_carlo_area(pred, box, n_samples, seed);
    out.estimate = mc.estimate;
    out.stderr_ = mc.stderr_;
    out.strip_upper_bound = strip_union_area(std::span<const DoubleCone>(cones),
                                             Strip{box.y_lo, box.y_hi});
    return out;
}

namespace {

void rasterize_segment(Point2 a, Point2 b, double h,
                       std::unordered_set<std::uint64_t>& cells) {
    auto key = [h](Point2 p) {
        const auto ix = static_cast<std::int64_t>(std::floor(p.x / h));
        const auto iy = static_cast<std::int64_t>(std::floor(p.y / h));
        return (static_cast<std::uint64_t>(ix + (1ll << 31)) << 32) |
               static_cast<std::uint64_t>(iy + (1ll << 31));
    };
    struct Item {
        Point2 a, b;
    };
    std::vector<Item> work{{a, b}};
    cells.insert(key(a));
    cells.insert(key(b));
    while (!work.empty()) {
        Item it = work.back();
        work.pop_back();
        if (key(it.a) == key(it.b)) continue;
        const double dx = it.b.x - it.a.x, dy = it.b.y - it.a.y;
        if (dx * dx + dy * dy < 1e-28) continue;
        const Point2 mid{0.5 * (it.a.x + it.b.x), 0.5 * (it.a.y + it.b.y)};
        cells.insert(key(mid));
        work.push_back({it.a, mid});
        work.push_back({mid, it.b});
    }
}

}  // namespace

BoxCountSeries box_dimension_estimate(const Geometry& geometry, int scale_pow_lo,
                                      int scale_pow_hi) {
    if (geometry.empty()) throw Error("box_dimension_estimate: empty geometry");
    if (scale_pow_hi < scale_pow_lo + 3)
        throw Error("box_dimension_estimate: need at least 4 scales");
    BoxCountSeries series;
    for (int k = scale_pow_lo; k <= scale_pow_hi; ++k) {
        const double h = std::ldexp(1.0, -k);
        std::unordered_set<std::uint64_t> cells;
        for (const Point2& p : geometry.points) {
            const auto ix = static_cast<std::int64_t>(std::floor(p.x / h));
            const auto iy = static_cast<std::int64_t>(std::floor(p.y / h));
            cells.insert((static_cast<std::uint64_t>(ix + (1ll << 31)) << 32) |
                         static_cast<std::uint64_t>(iy + (1ll << 31)));
        }
        for (const Segment2& s : geometry.segments) {
            rasterize_segment(s.a, s.b, h, cells);
        }
        series.scales.push_back(h);
        series.counts.push_back(static_cast<std::int64_t>(cells.size()));
    }
    // Least-squares slope of log2(count) against log2(1/scale).
    const size_t m = series.scales.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double x = -std::log2(series.scales[i]);
        const double y = std::log2(static_cast<double>(std::max<std::int64_t>(1, series.counts[i])));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dm = static_cast<double>(m);
    const double denom = dm * sxx - sx * sx;
    series.slope = (dm * sxy - sx * sy) / denom;
    const double icept = (sy - series.slope * sx) / dm;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double x = -std::log2(series.scales[i]);
        const double y = std::log2(static_cast<double>(std::max<std::int64_t>(1, series.counts[i])));
        const double e = y - (series.slope * x + icept);
        rss += e * e;
    }
    series.residual = std::sqrt(rss / dm);
    return series;
}

}  // namespace coneforge
