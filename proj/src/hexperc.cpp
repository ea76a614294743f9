#include "watts/hexperc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "watts/errors.hpp"
#include "watts/formulas.hpp"
#include "watts/rng.hpp"

namespace wlab {

HexDomain::HexDomain(int width, int height, bool leans_left)
    : width_(width), height_(height), leans_left_(leans_left) {
    if (width < 1 || height < 1) throw std::invalid_argument("hex domain needs positive width and height");
}

HexDomain HexDomain::parallelogram(int width, int height) { return HexDomain(width, height, false); }

HexDomain HexDomain::mirrored_parallelogram(int width, int height) { return HexDomain(width, height, true); }

HexDomain HexDomain::mirrored() const { return HexDomain(width_, height_, !leans_left_); }

void validate(const HexDomain& d, const GapQuad& q) {
    const int x4 = q.right_end(d);
    if (!(q.x1 < q.x2 && q.x2 < q.x3 && q.x3 < x4))
        throw OrderingError("marked gaps must satisfy x1 < x2 < x3 < x4");
    if (q.x1 < 1) throw std::invalid_argument("x1 must be at least one cell from the left wall");
    if (q.x4 != GapQuad::kRightCorner && q.x4 > d.width() - 1)
        throw std::invalid_argument("x4 must be at least one cell from the right wall");
}

Coloring::Coloring(const HexDomain& d, Color fill) : size_(d.cell_count()), words_((size_ + 63) / 64, 0) {
    if (fill == Color::Blue) {
        std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
        if (size_ % 64) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
}

Coloring Coloring::from_bits(const HexDomain& d, std::uint64_t bits) {
    if (d.cell_count() > 64) throw SizeError("from_bits needs at most 64 cells");
    Coloring c(d);
    if (d.cell_count() < 64) bits &= (std::uint64_t{1} << d.cell_count()) - 1;
    c.words_[0] = bits;
    return c;
}

void Coloring::set(int index, Color c) {
    const std::uint64_t bit = std::uint64_t{1} << (index & 63);
    if (c == Color::Blue)
        words_[index >> 6] |= bit;
    else
        words_[index >> 6] &= ~bit;
}

Coloring Coloring::flipped() const {
    Coloring r = *this;
    for (auto& w : r.words_) w = ~w;
    if (size_ % 64) r.words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    return r;
}

Coloring Coloring::mirrored(const HexDomain& d) const {
    HexDomain m = d.mirrored();
    Coloring r(m);
    for (int k = 0; k < size_; ++k) r.set(m.index(d.mirror(d.cell(k))), color(k));
    return r;
}

double Coloring::blue_fraction() const {
    std::uint64_t ones = 0;
    for (auto w : words_) ones += std::popcount(w);
    return static_cast<double>(ones) / size_;
}

Coloring sample_coloring(const HexDomain& d, std::uint64_t seed, std::uint64_t stream) {
    Coloring c(d);
    const std::uint64_t key = stream_key(seed, stream);
    auto& w = c.words();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = counter_word(key, k);
    if (d.cell_count() % 64) w.back() &= (std::uint64_t{1} << (d.cell_count() % 64)) - 1;
    return c;
}

LazyColoring::LazyColoring(const HexDomain&, std::uint64_t seed, std::uint64_t stream)
    : key_(stream_key(seed, stream)) {}

bool LazyColoring::blue(int index) const { return (counter_word(key_, index >> 6) >> (index & 63)) & 1u; }

BoundarySegment BoundarySegment::whole(const HexDomain& d, Side s) {
    const int len = (s == Side::Bottom || s == Side::Top) ? d.width() : d.height();
    return {s, 0, len};
}

namespace {

int segment_cell(const HexDomain& d, Side s, int k) {
    switch (s) {
        case Side::Bottom: return d.index({d.row_offset(0) + k, 0});
        case Side::Top: return d.index({d.row_offset(d.height() - 1) + k, d.height() - 1});
        case Side::Left: return d.index({d.row_offset(k), k});
        case Side::Right: return d.index({d.row_offset(k) + d.width() - 1, k});
    }
    return 0;
}

}  // namespace

int ClusterFinder::find(int x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

void ClusterFinder::unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
}

void ClusterFinder::label(const HexDomain& d, const Coloring& c, Color color) {
    const int n = d.cell_count();
    parent_.resize(n);
    size_.assign(n, 1);
    const bool want = color == Color::Blue;
    for (int k = 0; k < n; ++k) parent_[k] = (c.blue(k) == want) ? k : -1;
    const int w = d.width();
    for (int k = 0; k < n; ++k) {
        if (parent_[k] < 0) continue;
        const int col = k % w;
        // Forward neighbours only: (1,0), (0,1) and (-1,1) in axial terms,
        // which in row-local columns shift by the row offset difference.
        if (col + 1 < w && parent_[k + 1] >= 0) unite(k, k + 1);
        const int j = k / w;
        if (j + 1 < d.height()) {
            const int shift = d.row_offset(j + 1) - d.row_offset(j);
            // Cell (i, j+1) and (i-1, j+1) in row-local columns.
            for (int di : {0, -1}) {
                const int nc = col + di - shift;
                if (nc >= 0 && nc < w && parent_[(j + 1) * w + nc] >= 0) unite(k, (j + 1) * w + nc);
            }
        }
    }
    for (int k = 0; k < n; ++k)
        if (parent_[k] >= 0) parent_[k] = find(k);
}

bool has_crossing(const HexDomain& d, const Coloring& c, Color color, const BoundarySegment& from,
                  const BoundarySegment& to) {
    ClusterFinder f;
    f.label(d, c, color);
    std::vector<char> touched(d.cell_count(), 0);
    for (int k = from.begin; k < from.end; ++k) {
        int r = f.root(segment_cell(d, from.side, k));
        if (r >= 0) touched[r] = 1;
    }
    for (int k = to.begin; k < to.end; ++k) {
        int r = f.root(segment_cell(d, to.side, k));
        if (r >= 0 && touched[r]) return true;
    }
    return false;
}

namespace {

enum SideBit : unsigned { kLeft = 1, kRight = 2, kBottom = 4, kTop = 8 };

// Side flags of every cluster of the labelled colour, indexed by root.
void side_flags(const HexDomain& d, const ClusterFinder& f, std::vector<unsigned>& flags) {
    flags.assign(d.cell_count(), 0);
    for (int j = 0; j < d.height(); ++j) {
        int r = f.root(segment_cell(d, Side::Left, j));
        if (r >= 0) flags[r] |= kLeft;
        r = f.root(segment_cell(d, Side::Right, j));
        if (r >= 0) flags[r] |= kRight;
    }
    for (int i = 0; i < d.width(); ++i) {
        int r = f.root(segment_cell(d, Side::Bottom, i));
        if (r >= 0) flags[r] |= kBottom;
        r = f.root(segment_cell(d, Side::Top, i));
        if (r >= 0) flags[r] |= kTop;
    }
}

struct ColorSummary {
    bool h = false, v = false, t = false;
};

ColorSummary summarize(const std::vector<unsigned>& flags) {
    ColorSummary s;
    for (unsigned fl : flags) {
        if ((fl & (kLeft | kRight)) == (kLeft | kRight)) s.h = true;
        if ((fl & (kBottom | kTop)) == (kBottom | kTop)) s.v = true;
        if ((fl & (kLeft | kRight | kBottom)) == (kLeft | kRight | kBottom)) s.t = true;
    }
    return s;
}

}  // namespace

RectangleEvents rectangle_events(const HexDomain& d, const Coloring& c, ClusterFinder& finder) {
    thread_local std::vector<unsigned> flags;
    RectangleEvents e;
    finder.label(d, c, Color::Yellow);
    side_flags(d, finder, flags);
    ColorSummary y = summarize(flags);
    finder.label(d, c, Color::Blue);
    side_flags(d, finder, flags);
    ColorSummary b = summarize(flags);
    e.hb = b.h;
    e.vb = b.v;
    e.tb = b.t;
    e.hy = y.h;
    e.vy = y.v;
    e.ty = y.t;
    if (e.hb == e.vy || e.hy == e.vb) throw std::logic_error("Hex dichotomy violated");
    const int classes = int(e.tb) + int(e.ty) + int(!e.hb && !e.hy);
    if (classes != 1) throw std::logic_error("N/Tb/Ty partition violated");
    e.cls = e.tb ? EventClass::Tb : (e.ty ? EventClass::Ty : EventClass::N);
    return e;
}

EventClass classify(const HexDomain& d, const Coloring& c) {
    ClusterFinder f;
    return rectangle_events(d, c, f).cls;
}

namespace {

// Blue cluster roots of the bottom row (-1 for yellow cells).
std::vector<int> bottom_roots(const HexDomain& d, const ClusterFinder& f) {
    std::vector<int> r(d.width());
    for (int i = 0; i < d.width(); ++i) r[i] = f.root(segment_cell(d, Side::Bottom, i));
    return r;
}

bool touches(const std::vector<int>& roots, int root, int begin, int end) {
    for (int k = begin; k < end; ++k)
        if (roots[k] == root) return true;
    return false;
}

std::optional<TripodRecord> tripod_from_roots(const std::vector<int>& roots, int x1, int x2, int x3, int x4) {
    for (int k = x1; k < x2; ++k) {
        const int r = roots[k];
        if (r < 0 || !touches(roots, r, x2, x3) || !touches(roots, r, x3, x4)) continue;
        TripodRecord rec;
        for (int i = x1; i < x2; ++i)
            if (roots[i] == r) rec.a = i + 1;
        for (int i = x2; i < x3; ++i)
            if (roots[i] == r) rec.b = i + 1;
        for (int i = x4 - 1; i >= x3; --i)
            if (roots[i] == r) rec.c = i + 1;
        return rec;
    }
    return std::nullopt;
}

// Yellow fallback for b: rightmost bottom cell in [x2, x3) of the yellow
// cluster holding the walker's first right-hand cell.
int yellow_fallback_b(const HexDomain& d, const Coloring& c, int x2, int x3) {
    const int start = c.blue(segment_cell(d, Side::Bottom, x2 - 1)) ? x2 : x2 - 1;
    ClusterFinder f;
    f.label(d, c, Color::Yellow);
    const int r = f.root(segment_cell(d, Side::Bottom, start));
    int b = 0;
    for (int i = x2; i < x3; ++i)
        if (f.root(segment_cell(d, Side::Bottom, i)) == r) b = i + 1;
    return b > 0 ? b : x2 + 1;
}

std::optional<TripodRecord> multiarm_from_roots(const HexDomain& d, const Coloring& col,
                                                const std::vector<int>& roots, const GapQuad& q) {
    const int x4 = q.right_end(d);
    std::vector<int> crossing;
    for (int k = q.x1; k < q.x2; ++k) {
        const int r = roots[k];
        if (r >= 0 && touches(roots, r, q.x3, x4) &&
            std::find(crossing.begin(), crossing.end(), r) == crossing.end())
            crossing.push_back(r);
    }
    if (crossing.empty()) return std::nullopt;
    auto in_crossing = [&](int r) { return std::find(crossing.begin(), crossing.end(), r) != crossing.end(); };
    TripodRecord rec;
    for (int i = q.x1; i < q.x2; ++i)
        if (roots[i] >= 0 && in_crossing(roots[i])) rec.a = i + 1;
    for (int i = x4 - 1; i >= q.x3; --i)
        if (roots[i] >= 0 && in_crossing(roots[i])) rec.c = i + 1;
    for (int i = q.x2; i < q.x3; ++i) {
        const int r = roots[i];
        if (r >= 0 && touches(roots, r, rec.a - 1, q.x2)) rec.b = i + 1;
    }
    if (rec.b == 0) {
        rec.b = yellow_fallback_b(d, col, q.x2, q.x3);
        rec.yellow_b = true;
    }
    rec.a_first = tripod_from_roots(roots, q.x1, q.x2, q.x3, x4).has_value();
    return rec;
}

}  // namespace

std::optional<TripodRecord> tripod_points(const HexDomain& d, const Coloring& c, const GapQuad& q) {
    validate(d, q);
    ClusterFinder f;
    f.label(d, c, Color::Blue);
    return tripod_from_roots(bottom_roots(d, f), q.x1, q.x2, q.x3, q.right_end(d));
}

std::optional<TripodRecord> multiarm_points(const HexDomain& d, const Coloring& c, const GapQuad& q) {
    validate(d, q);
    ClusterFinder f;
    f.label(d, c, Color::Blue);
    return multiarm_from_roots(d, c, bottom_roots(d, f), q);
}

bool quad_crossing(const HexDomain& d, const Coloring& c, const GapQuad& q) {
    validate(d, q);
    return has_crossing(d, c, Color::Blue, BoundarySegment::bottom(q.x1, q.x2),
                        BoundarySegment::bottom(q.x3, q.right_end(d)));
}

namespace {

// Walker cell: a lattice cell, or one half of the split layer cell under x2.
struct WCell {
    Cell c;
    int junction = 0;  // 0 plain, 1 blue half, 2 yellow half
};

template <class Source>
InterfaceTrace explore(const HexDomain& d, const Source& src, int x2, const GapQuad* stops) {
    const int w = d.width();
    if (x2 < 1 || x2 > w - 1) throw std::invalid_argument("interface start gap outside the bottom edge");
    const int x4 = stops ? stops->right_end(d) : 0;

    // 1 blue, 0 yellow, -1 wall.
    auto color = [&](const WCell& x) -> int {
        if (x.junction) return x.junction == 1 ? 1 : 0;
        if (d.contains(x.c)) return src.blue(d.index(x.c)) ? 1 : 0;
        if (x.c.j == -1 && x.c.i >= 0 && x.c.i <= w) return x.c.i < x2 ? 1 : 0;
        return -1;
    };
    auto is_layer = [](const WCell& x) { return x.junction != 0 || x.c.j == -1; };
    auto bottom_blue = [&](int i) { return src.blue(d.index({d.row_offset(0) + i, 0})); };

    WCell left, right;
    if (!bottom_blue(x2 - 1)) {
        left = {{x2, -1}, 1};
        right = {{x2 - 1, 0}, 0};
    } else if (bottom_blue(x2)) {
        left = {{x2, 0}, 0};
        right = {{x2, -1}, 2};
    } else {
        left = {{x2 - 1, 0}, 0};
        right = {{x2, 0}, 0};
    }

    InterfaceTrace t;
    const long cap = 12L * (static_cast<long>(d.cell_count()) + w + 2) + 16;
    for (long step = 1;; ++step) {
        if (step > cap) throw std::logic_error("interface walker failed to terminate");
        t.steps = step;
        if (is_layer(left)) {
            const int gap = right.c.i;
            t.hits.push_back({gap, true, step});
            if (stops && gap <= stops->x1) {
                t.end = InterfaceEnd::LeftExit;
                return t;
            }
        } else if (is_layer(right)) {
            const int i = left.c.i;
            t.hits.push_back({i + 1, false, step});
            if (stops && i >= x4) {
                t.end = InterfaceEnd::RightExit;
                return t;
            }
            if (stops && i >= stops->x3) {
                t.end = InterfaceEnd::Crossing;
                return t;
            }
        }
        const Cell diff{right.c.i - left.c.i, right.c.j - left.c.j};
        const auto it = std::find(kDirections.begin(), kDirections.end(), diff);
        const int k = static_cast<int>(it - kDirections.begin());
        const Cell step_dir = kDirections[(k + 1) % 6];
        WCell next{{left.c.i + step_dir.i, left.c.j + step_dir.j}, 0};
        if (next.c == Cell{x2, -1}) next.junction = 2;
        const int col = color(next);
        if (col < 0) {
            t.end = InterfaceEnd::Wall;
            return t;
        }
        if (col == 1)
            left = next;
        else
            right = next;
    }
}

}  // namespace

InterfaceTrace explore_interface(const HexDomain& d, const Coloring& c, int x2, const GapQuad* stops) {
    return explore(d, c, x2, stops);
}

InterfaceTrace explore_interface(const HexDomain& d, const LazyColoring& c, int x2, const GapQuad* stops) {
    return explore(d, c, x2, stops);
}

std::optional<TripodRecord> walk_record(const InterfaceTrace& t, const GapQuad& q) {
    if (t.end != InterfaceEnd::Crossing) return std::nullopt;
    TripodRecord rec;
    rec.c = t.hits.back().gap;
    rec.a = q.x2;
    long ta = 0, tb = 0;
    bool have_right = false;
    for (std::size_t k = 0; k + 1 < t.hits.size(); ++k) {
        const auto& h = t.hits[k];
        if (h.left) {
            if (h.gap < rec.a) {
                rec.a = h.gap;
                ta = h.step;
            }
        } else if (!have_right || h.gap > rec.b) {
            rec.b = h.gap;
            tb = h.step;
            have_right = true;
        }
    }
    rec.a_first = have_right && ta < tb;
    return rec;
}

std::optional<TripodRecord> trace_interface(const HexDomain& d, const Coloring& c, const GapQuad& q) {
    validate(d, q);
    auto rec = walk_record(explore_interface(d, c, q.x2, &q), q);
    if (rec && rec->b == 0) {
        rec->b = yellow_fallback_b(d, c, q.x2, q.x3);
        rec->yellow_b = true;
    }
    return rec;
}

std::uint64_t EnumerationTable::corner(const std::vector<std::uint64_t>& t, int a, int b, int c) const {
    const int nb = quad.x3 - quad.x2 + 1;
    const int ncol = quad.x4 - quad.x3 + 1;
    return t[((a - quad.x1) * nb + (b - quad.x2)) * ncol + (c - quad.x3)];
}

std::uint64_t EnumerationTable::box(const std::vector<std::uint64_t>& t, int a, int b, int c) const {
    return corner(t, a, b, c);
}

std::int64_t EnumerationTable::triple_difference(const std::vector<std::uint64_t>& t, int a, int b, int c) const {
    std::int64_t s = 0;
    for (int da = 0; da < 2; ++da)
        for (int db = 0; db < 2; ++db)
            for (int dc = 0; dc < 2; ++dc) {
                const auto v = static_cast<std::int64_t>(corner(t, a - da, b - db, c - dc));
                s += ((da + db + dc) % 2 == 0) ? v : -v;
            }
    return -s;
}

EnumerationTable enumerate_exact(const HexDomain& d, const std::optional<GapQuad>& q) {
    const int n = d.cell_count();
    if (n > kMaxEnumerationCells) throw SizeError("enumeration limited to 24 cells");
    EnumerationTable t;
    t.cells = n;
    t.total = std::uint64_t{1} << n;
    int x1 = 0, x2 = 0, x3 = 0, x4 = 0;
    std::size_t table_size = 0;
    if (q) {
        validate(d, *q);
        t.quad = *q;
        t.quad.x4 = q->right_end(d);
        x1 = q->x1;
        x2 = q->x2;
        x3 = q->x3;
        x4 = t.quad.x4;
        table_size = static_cast<std::size_t>(x2 - x1 + 1) * (x3 - x2 + 1) * (x4 - x3 + 1);
        t.nc.assign(table_size, 0);
        t.nt.assign(table_size, 0);
        t.multiarm_blue.assign(table_size, 0);
        t.tripod_records.assign(table_size, 0);
    }
    auto index = [&](int a, int b, int c) {
        return (static_cast<std::size_t>(a - x1) * (x3 - x2 + 1) + (b - x2)) * (x4 - x3 + 1) + (c - x3);
    };

    ClusterFinder finder;
    std::vector<int> ids;
    std::vector<std::uint32_t> masks;
    for (std::uint64_t bits = 0; bits < t.total; ++bits) {
        const Coloring col = Coloring::from_bits(d, bits);
        const RectangleEvents e = rectangle_events(d, col, finder);
        t.hb += e.hb;
        t.vb += e.vb;
        t.hy += e.hy;
        t.vy += e.vy;
        t.hbvb += e.hb && e.vb;
        t.hyvy += e.hy && e.vy;
        t.tb += e.tb;
        t.ty += e.ty;
        t.n += e.cls == EventClass::N;
        if (!q) continue;

        // finder now holds the blue labels.
        const std::vector<int> roots = bottom_roots(d, finder);
        ids.clear();
        masks.clear();
        for (int i = 0; i < d.width(); ++i) {
            if (roots[i] < 0) continue;
            auto it = std::find(ids.begin(), ids.end(), roots[i]);
            if (it == ids.end()) {
                ids.push_back(roots[i]);
                masks.push_back(0);
                it = ids.end() - 1;
            }
            masks[it - ids.begin()] |= std::uint32_t{1} << i;
        }
        auto range = [](int lo, int hi) -> std::uint32_t {
            if (hi <= lo) return 0;
            return ((hi >= 32 ? 0u : (std::uint32_t{1} << hi)) - 1u) & ~((std::uint32_t{1} << lo) - 1u);
        };
        for (int a = x1; a <= x2; ++a)
            for (int b = x2; b <= x3; ++b)
                for (int c = x3; c <= x4; ++c) {
                    const std::uint32_t ra = range(a, x2), rb = range(x2, b), rc = range(b, c);
                    bool cross = false, tri = false;
                    for (std::uint32_t m : masks) {
                        if ((m & ra) && (m & rc)) {
                            cross = true;
                            if (m & rb) tri = true;
                        }
                    }
                    t.nc[index(a, b, c)] += cross;
                    t.nt[index(a, b, c)] += tri;
                }

        const auto multi = multiarm_from_roots(d, col, roots, *q);
        const auto tri = tripod_from_roots(roots, x1, x2, x3, x4);
        const auto walk = trace_interface(d, col, *q);
        if (multi) {
            ++t.crossing;
            if (multi->yellow_b)
                ++t.yellow_fallback;
            else
                ++t.multiarm_blue[index(multi->a, multi->b, multi->c)];
        }
        if (tri) {
            ++t.tripod;
            ++t.tripod_records[index(tri->a, tri->b, tri->c)];
            if (!multi || multi->a != tri->a || multi->b != tri->b || multi->c != tri->c)
                ++t.tripod_record_mismatch;
        }
        if (multi.has_value() != walk.has_value()) {
            ++t.interface_mismatch;
        } else if (multi) {
            if (multi->a != walk->a || multi->b != walk->b || multi->c != walk->c ||
                multi->yellow_b != walk->yellow_b)
                ++t.interface_mismatch;
            if (walk->a_first) ++t.a_first;
            if (walk->a_first != tri.has_value()) ++t.a_first_mismatch;
        }
    }
    return t;
}

Decomposition decompose(const EnumerationTable& t) {
    if (t.nc.empty()) throw std::invalid_argument("enumeration has no quad tables");
    const GapQuad& q = t.quad;
    Decomposition r;
    for (int a = q.x1 + 1; a <= q.x2; ++a)
        for (int b = q.x2 + 1; b <= q.x3; ++b)
            for (int c = q.x3 + 1; c <= q.x4; ++c) {
                const std::int64_t dc = t.triple_difference(t.nc, a, b, c);
                const std::int64_t dt = t.triple_difference(t.nt, a, b, c);
                r.crossing_boxes += dc;
                r.tripod_boxes += dt;
                if (dc != static_cast<std::int64_t>(t.box(t.multiarm_blue, a, b, c)) ||
                    dt != static_cast<std::int64_t>(t.box(t.tripod_records, a, b, c)))
                    ++r.box_mismatches;
            }
    r.face = static_cast<std::int64_t>(t.corner(t.nc, q.x1, q.x2, q.x4)) -
             static_cast<std::int64_t>(t.corner(t.nc, q.x1, q.x2, q.x3));
    return r;
}

const char* to_string(PercEvent e) {
    switch (e) {
        case PercEvent::Crossing: return "crossing";
        case PercEvent::Tripod: return "tripod";
        case PercEvent::Hb: return "Hb";
        case PercEvent::Vb: return "Vb";
        case PercEvent::HbVb: return "HbVb";
        case PercEvent::HyVy: return "HyVy";
        case PercEvent::N: return "N";
        case PercEvent::Tb: return "Tb";
        case PercEvent::Ty: return "Ty";
    }
    return "?";
}

PercEvent perc_event_from_string(const std::string& s) {
    for (PercEvent e : {PercEvent::Crossing, PercEvent::Tripod, PercEvent::Hb, PercEvent::Vb, PercEvent::HbVb,
                        PercEvent::HyVy, PercEvent::N, PercEvent::Tb, PercEvent::Ty})
        if (s == to_string(e)) return e;
    throw std::invalid_argument("unknown percolation event '" + s + "'");
}

EstimateResult estimate(const HexDomain& d, const std::optional<GapQuad>& q, PercEvent event,
                        std::uint64_t n_samples, std::uint64_t seed, int workers) {
    if (n_samples == 0) throw std::invalid_argument("estimate needs n_samples >= 1");
    const bool quad_event = event == PercEvent::Crossing || event == PercEvent::Tripod;
    if (quad_event) {
        if (!q) throw std::invalid_argument("crossing/tripod events need marked gaps");
        validate(d, *q);
    }
    Counts total = parallel_counts(n_samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
        Counts c;
        ClusterFinder finder;
        for (std::uint64_t m = begin; m < end; ++m) {
            bool hit = false;
            if (quad_event) {
                const LazyColoring lazy(d, seed, m);
                const auto rec = walk_record(explore_interface(d, lazy, q->x2, &*q), *q);
                hit = rec.has_value() && (event == PercEvent::Crossing || rec->a_first);
            } else {
                const RectangleEvents e = rectangle_events(d, sample_coloring(d, seed, m), finder);
                switch (event) {
                    case PercEvent::Hb: hit = e.hb; break;
                    case PercEvent::Vb: hit = e.vb; break;
                    case PercEvent::HbVb: hit = e.hb && e.vb; break;
                    case PercEvent::HyVy: hit = e.hy && e.vy; break;
                    case PercEvent::N: hit = e.cls == EventClass::N; break;
                    case PercEvent::Tb: hit = e.tb; break;
                    case PercEvent::Ty: hit = e.ty; break;
                    default: break;
                }
            }
            c.hits += hit;
            ++c.trials;
        }
        return c;
    });
    return make_estimate(total.hits, total.trials, seed);
}

QuadEstimate estimate_quad(const HexDomain& d, const GapQuad& q, std::uint64_t n_samples,
                           std::uint64_t seed, int workers) {
    if (n_samples == 0) throw std::invalid_argument("estimate needs n_samples >= 1");
    validate(d, q);
    Counts total = parallel_counts(n_samples, workers, [&](std::uint64_t begin, std::uint64_t end) {
        Counts c;
        for (std::uint64_t m = begin; m < end; ++m) {
            const LazyColoring lazy(d, seed, m);
            const auto rec = walk_record(explore_interface(d, lazy, q.x2, &q), q);
            if (rec) {
                ++c.hits;
                c.inner_hits += rec->a_first;
            }
            ++c.trials;
        }
        return c;
    });
    return {make_estimate(total.hits, total.trials, seed), make_estimate(total.inner_hits, total.trials, seed)};
}

double continuum_cross_ratio(const HexDomain& d, const GapQuad& q) {
    validate(d, q);
    return cross_ratio_of(static_cast<double>(q.x1), q.x2 - 1.0, static_cast<double>(q.x3),
                          q.right_end(d) - 1.0);
}

HalfPlaneSetup half_plane_setup(double s_target, int span, int wall_multiple) {
    if (span < 4) throw std::invalid_argument("span must be at least 4");
    if (wall_multiple < 1) throw std::invalid_argument("wall_multiple must be at least 1");
    if (!(s_target > 0.0 && s_target < 1.0)) throw std::invalid_argument("s_target must lie in (0, 1)");
    const long clearance = static_cast<long>(wall_multiple) * span;
    const long width = clearance + span + clearance + 1;
    if (width * clearance > (1L << 30)) throw SizeError("half-plane box too large");
    HexDomain d = HexDomain::parallelogram(static_cast<int>(width), static_cast<int>(clearance));
    const int x1 = static_cast<int>(clearance);
    GapQuad best{x1, x1 + 1, x1 + span, GapQuad::kRightCorner};
    double best_s = continuum_cross_ratio(d, best);
    for (int x2 = x1 + 2; x2 < x1 + span; ++x2) {
        const GapQuad q{x1, x2, x1 + span, GapQuad::kRightCorner};
        const double s = continuum_cross_ratio(d, q);
        if (std::abs(s - s_target) < std::abs(best_s - s_target)) {
            best = q;
            best_s = s;
        }
    }
    return {d, best, best_s};
}

}  // namespace wlab
