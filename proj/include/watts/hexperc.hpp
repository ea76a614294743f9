#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "watts/estimate.hpp"

namespace wlab {

enum class Color : std::uint8_t { Yellow = 0, Blue = 1 };

inline Color opposite(Color c) { return c == Color::Blue ? Color::Yellow : Color::Blue; }

// Axial cell coordinates. Neighbour directions in counter-clockwise order;
// a cell (i, j) sits at x = i + j/2, y = j*sqrt(3)/2.
struct Cell {
    int i = 0;
    int j = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

inline constexpr std::array<Cell, 6> kDirections = {{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

// Parallelogram patch of hexagonal cells with a straight bottom row j = 0
// holding cells i = 0..width-1. Row j spans i in [offset(j), offset(j)+width).
// The standard patch leans right (offset 0); the mirrored patch leans left
// (offset -j) and is the left-right reflection of the standard one.
class HexDomain {
public:
    static HexDomain parallelogram(int width, int height);
    static HexDomain mirrored_parallelogram(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    int cell_count() const { return width_ * height_; }
    bool leans_left() const { return leans_left_; }

    int row_offset(int j) const { return leans_left_ ? -j : 0; }
    bool contains(Cell c) const {
        return c.j >= 0 && c.j < height_ && c.i >= row_offset(c.j) && c.i < row_offset(c.j) + width_;
    }
    int index(Cell c) const { return c.j * width_ + (c.i - row_offset(c.j)); }
    Cell cell(int index) const {
        int j = index / width_;
        return {index % width_ + row_offset(j), j};
    }

    // Mirror image of a cell in the reflected patch.
    Cell mirror(Cell c) const { return {width_ - 1 - c.i - c.j, c.j}; }
    HexDomain mirrored() const;

private:
    HexDomain(int width, int height, bool leans_left);
    int width_;
    int height_;
    bool leans_left_;
};

// Four marked bottom-boundary gaps. Gap k lies between bottom cells k-1 and
// k. The quad's intervals are cells [x1, x2), [x2, x3) and [x3, x4).
struct GapQuad {
    static constexpr int kRightCorner = std::numeric_limits<int>::max();

    int x1 = 0;
    int x2 = 0;
    int x3 = 0;
    int x4 = kRightCorner;

    // x4 with the corner sentinel replaced by the domain width.
    int right_end(const HexDomain& d) const { return x4 == kRightCorner ? d.width() : x4; }
};

// Throws unless 1 <= x1 < x2 < x3 < x4 <= width-1 (or x4 the corner).
void validate(const HexDomain& d, const GapQuad& q);

class Coloring {
public:
    explicit Coloring(const HexDomain& d, Color fill = Color::Yellow);
    static Coloring from_bits(const HexDomain& d, std::uint64_t bits);

    int size() const { return size_; }
    bool blue(int index) const { return (words_[index >> 6] >> (index & 63)) & 1u; }
    Color color(int index) const { return blue(index) ? Color::Blue : Color::Yellow; }
    void set(int index, Color c);
    Coloring flipped() const;
    // Coloring of d.mirrored() obtained by reflecting this one.
    Coloring mirrored(const HexDomain& d) const;
    double blue_fraction() const;

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const Coloring&, const Coloring&) = default;

private:
    int size_;
    std::vector<std::uint64_t> words_;
};

// Fair colouring keyed by (seed, stream); bit k of the colouring is bit
// k % 64 of counter_word(stream_key(seed, stream), k / 64).
Coloring sample_coloring(const HexDomain& d, std::uint64_t seed, std::uint64_t stream);

// The same colouring evaluated lazily, for walkers that only look at a
// small part of a large patch.
class LazyColoring {
public:
    LazyColoring(const HexDomain& d, std::uint64_t seed, std::uint64_t stream);
    bool blue(int index) const;

private:
    std::uint64_t key_;
};

enum class Side { Bottom, Top, Left, Right };

// Contiguous run of boundary cells on one side: bottom/top cells are
// indexed by position in the row, left/right cells by row.
struct BoundarySegment {
    Side side = Side::Bottom;
    int begin = 0;
    int end = 0;

    static BoundarySegment bottom(int begin, int end) { return {Side::Bottom, begin, end}; }
    static BoundarySegment whole(const HexDomain& d, Side s);
};

// Union-find cluster labelling with reusable scratch.
class ClusterFinder {
public:
    // Labels clusters of `color`; root(k) is -1 for cells of the other color.
    void label(const HexDomain& d, const Coloring& c, Color color);
    int root(int index) const { return parent_[index]; }

private:
    int find(int x);
    void unite(int a, int b);
    std::vector<int> parent_;
    std::vector<int> size_;
};

bool has_crossing(const HexDomain& d, const Coloring& c, Color color, const BoundarySegment& from,
                  const BoundarySegment& to);

enum class EventClass { N, Tb, Ty };

struct RectangleEvents {
    bool hb = false;  // blue left-right
    bool vb = false;  // blue bottom-top
    bool hy = false;
    bool vy = false;
    bool tb = false;  // blue cluster touching left, right and bottom
    bool ty = false;
    EventClass cls = EventClass::N;
};

// Throws std::logic_error if the Hex dichotomy or the N/Tb/Ty partition fails.
RectangleEvents rectangle_events(const HexDomain& d, const Coloring& c, ClusterFinder& finder);
EventClass classify(const HexDomain& d, const Coloring& c);

struct TripodRecord {
    int a = 0;
    int b = 0;
    int c = 0;
    bool a_first = false;
    // multiarm/interface records: b came from the yellow fallback rule.
    bool yellow_b = false;

    friend bool operator==(const TripodRecord&, const TripodRecord&) = default;
};

std::optional<TripodRecord> tripod_points(const HexDomain& d, const Coloring& c, const GapQuad& q);
std::optional<TripodRecord> multiarm_points(const HexDomain& d, const Coloring& c, const GapQuad& q);
std::optional<TripodRecord> trace_interface(const HexDomain& d, const Coloring& c, const GapQuad& q);
bool quad_crossing(const HexDomain& d, const Coloring& c, const GapQuad& q);

// Raw exploration from gap x2 with the blue layer left of x2 and the
// yellow layer right of it; blue stays on the walker's left.
struct InterfaceHit {
    int gap = 0;
    bool left = false;  // yellow bottom cell against the blue layer
    long step = 0;
    friend bool operator==(const InterfaceHit&, const InterfaceHit&) = default;
};

enum class InterfaceEnd { Crossing, LeftExit, RightExit, Wall };

struct InterfaceTrace {
    std::vector<InterfaceHit> hits;
    InterfaceEnd end = InterfaceEnd::Wall;
    long steps = 0;
};

// With stops == nullptr the walk only ends at a wall or the top row.
InterfaceTrace explore_interface(const HexDomain& d, const Coloring& c, int x2, const GapQuad* stops);
InterfaceTrace explore_interface(const HexDomain& d, const LazyColoring& c, int x2, const GapQuad* stops);

// Half-plane walker result for one colouring: crossing and, on crossing,
// the (a, b, c) record with b from touches only (no yellow fallback).
std::optional<TripodRecord> walk_record(const InterfaceTrace& t, const GapQuad& q);

struct EnumerationTable {
    int cells = 0;
    std::uint64_t total = 0;
    // Rectangle events.
    std::uint64_t hb = 0, vb = 0, hy = 0, vy = 0, hbvb = 0, hyvy = 0, n = 0, tb = 0, ty = 0;
    // Quad events.
    std::uint64_t crossing = 0;
    std::uint64_t tripod = 0;
    std::uint64_t a_first = 0;
    std::uint64_t yellow_fallback = 0;
    std::uint64_t interface_mismatch = 0;
    std::uint64_t a_first_mismatch = 0;
    std::uint64_t tripod_record_mismatch = 0;
    // Counts N_C and N_T on shifted quads [a, x2) x [b, c) indexed by
    // a in [x1, x2], b in [x2, x3], c in [x3, x4].
    std::vector<std::uint64_t> nc;
    std::vector<std::uint64_t> nt;
    // Record counts per box a in (x1, x2], b in (x2, x3], c in (x3, x4].
    std::vector<std::uint64_t> multiarm_blue;
    std::vector<std::uint64_t> tripod_records;
    GapQuad quad;

    std::uint64_t corner(const std::vector<std::uint64_t>& t, int a, int b, int c) const;
    // -Delta_a Delta_b Delta_c of a corner table at box (a, b, c).
    std::int64_t triple_difference(const std::vector<std::uint64_t>& t, int a, int b, int c) const;
    std::uint64_t box(const std::vector<std::uint64_t>& t, int a, int b, int c) const;
};

// Telescoped multi-arm decomposition of an enumeration with a quad.
struct Decomposition {
    std::int64_t crossing_boxes = 0;  // sum of N_C triple differences
    std::int64_t face = 0;            // N_C(x1,x2,x4) - N_C(x1,x2,x3)
    std::int64_t tripod_boxes = 0;    // sum of N_T triple differences
    std::uint64_t box_mismatches = 0; // boxes whose differences disagree with the records
};

Decomposition decompose(const EnumerationTable& t);

inline constexpr int kMaxEnumerationCells = 24;

// Exhaustive enumeration over all 2^cells colourings. Quad events are
// included when q is given.
EnumerationTable enumerate_exact(const HexDomain& d, const std::optional<GapQuad>& q);

enum class PercEvent { Crossing, Tripod, Hb, Vb, HbVb, HyVy, N, Tb, Ty };

const char* to_string(PercEvent e);
PercEvent perc_event_from_string(const std::string& s);

// Monte Carlo estimate. Crossing and Tripod use the interface walker on a
// lazily evaluated colouring; the rectangle events label full colourings.
EstimateResult estimate(const HexDomain& d, const std::optional<GapQuad>& q, PercEvent event,
                        std::uint64_t n_samples, std::uint64_t seed, int workers = 1);

// Crossing and tripod from one interface walk per sample, sharing seeds.
struct QuadEstimate {
    EstimateResult crossing;
    EstimateResult tripod;
};

QuadEstimate estimate_quad(const HexDomain& d, const GapQuad& q, std::uint64_t n_samples,
                           std::uint64_t seed, int workers = 1);

// Continuum cross-ratio of a gap quad. Each blue arc [x_k, x_{k+1}) is
// represented by the centres of its end cells, so the points used are
// x1, x2 - 1, x3 and right_end - 1.
double continuum_cross_ratio(const HexDomain& d, const GapQuad& q);

// Parallelogram whose bottom row carries x1 = wall_multiple * span,
// x3 = x1 + span and x4 at the right corner, with wall_multiple * span
// cells of clearance to the left, right and top. x2 is chosen to bring
// continuum_cross_ratio closest to s_target.
struct HalfPlaneSetup {
    HexDomain domain;
    GapQuad quad;
    double s = 0.0;
};

HalfPlaneSetup half_plane_setup(double s_target, int span, int wall_multiple);

}  // namespace wlab
