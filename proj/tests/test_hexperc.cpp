#include <gtest/gtest.h>

#include <cmath>

#include "watts/errors.hpp"
#include "watts/formulas.hpp"
#include "watts/hexperc.hpp"

using namespace wlab;

namespace {

Coloring row_coloring(const HexDomain& d, std::initializer_list<int> blue_bottom, bool blue_row1) {
    Coloring c(d, Color::Yellow);
    for (int i : blue_bottom) c.set(d.index({i, 0}), Color::Blue);
    if (blue_row1)
        for (int i = 0; i < d.width(); ++i) c.set(d.index({i, 1}), Color::Blue);
    return c;
}

GapQuad reflect(const HexDomain& d, const GapQuad& q) {
    const int w = d.width();
    const int x4 = q.right_end(d);
    return {w - x4, w - q.x3, w - q.x2, w - q.x1};
}

}  // namespace

TEST(Domain, IndexingRoundTrip) {
    for (const HexDomain& d : {HexDomain::parallelogram(5, 4), HexDomain::mirrored_parallelogram(5, 4)}) {
        for (int k = 0; k < d.cell_count(); ++k) {
            EXPECT_EQ(d.index(d.cell(k)), k);
            EXPECT_TRUE(d.contains(d.cell(k)));
        }
        EXPECT_FALSE(d.contains({d.row_offset(2) - 1, 2}));
    }
    EXPECT_THROW(HexDomain::parallelogram(0, 3), std::invalid_argument);
}

TEST(Domain, QuadValidation) {
    const HexDomain d = HexDomain::parallelogram(7, 3);
    EXPECT_NO_THROW(validate(d, GapQuad{1, 3, 5, 6}));
    EXPECT_NO_THROW(validate(d, GapQuad{1, 3, 5}));
    EXPECT_THROW(validate(d, GapQuad{0, 3, 5, 6}), std::invalid_argument);
    EXPECT_THROW(validate(d, GapQuad{1, 3, 5, 7}), std::invalid_argument);
    EXPECT_THROW(validate(d, GapQuad{1, 5, 3, 6}), OrderingError);
    EXPECT_THROW(validate(d, GapQuad{1, 3, 3, 6}), OrderingError);
    EXPECT_EQ((GapQuad{1, 3, 5}).right_end(d), 7);
}

TEST(Sampling, DeterministicAndFair) {
    const HexDomain d = HexDomain::parallelogram(1000, 1000);
    const Coloring a = sample_coloring(d, 42, 0);
    EXPECT_EQ(a, sample_coloring(d, 42, 0));
    EXPECT_NEAR(a.blue_fraction(), 0.5, 0.002);
    EXPECT_NE(a, sample_coloring(d, 42, 1));
    EXPECT_NE(a, sample_coloring(d, 43, 0));
    EXPECT_EQ(a.size(), d.cell_count());
}

TEST(Sampling, LazyMatchesEager) {
    const HexDomain d = HexDomain::parallelogram(37, 11);
    for (std::uint64_t stream : {0u, 5u, 99u}) {
        const Coloring c = sample_coloring(d, 7, stream);
        const LazyColoring l(d, 7, stream);
        for (int k = 0; k < d.cell_count(); ++k) ASSERT_EQ(c.blue(k), l.blue(k));
    }
}

TEST(Coloring, FlipAndMirror) {
    const HexDomain d = HexDomain::parallelogram(6, 4);
    const Coloring c = sample_coloring(d, 3, 3);
    EXPECT_EQ(c.flipped().flipped(), c);
    for (int k = 0; k < d.cell_count(); ++k) EXPECT_NE(c.blue(k), c.flipped().blue(k));
    const HexDomain m = d.mirrored();
    const Coloring mc = c.mirrored(d);
    for (int k = 0; k < d.cell_count(); ++k) EXPECT_EQ(c.blue(k), mc.blue(m.index(d.mirror(d.cell(k)))));
    EXPECT_EQ(mc.mirrored(m), c);
    EXPECT_THROW(Coloring::from_bits(HexDomain::parallelogram(9, 8), 0), SizeError);
}

TEST(Crossing, TrivialColorings) {
    const HexDomain d = HexDomain::parallelogram(5, 3);
    const auto left = BoundarySegment::whole(d, Side::Left);
    const auto right = BoundarySegment::whole(d, Side::Right);
    EXPECT_TRUE(has_crossing(d, Coloring(d, Color::Blue), Color::Blue, left, right));
    EXPECT_FALSE(has_crossing(d, Coloring(d, Color::Blue), Color::Yellow, left, right));
    const HexDomain row = HexDomain::parallelogram(6, 1);
    for (std::uint64_t bits = 0; bits < 64; ++bits) {
        const Coloring c = Coloring::from_bits(row, bits);
        EXPECT_EQ(has_crossing(row, c, Color::Blue, BoundarySegment::whole(row, Side::Left),
                               BoundarySegment::whole(row, Side::Right)),
                  bits == 63);
    }
}

TEST(Classify, TrivialAndEnumerated) {
    const HexDomain d = HexDomain::parallelogram(4, 3);
    EXPECT_EQ(classify(d, Coloring(d, Color::Blue)), EventClass::Tb);
    EXPECT_EQ(classify(d, Coloring(d, Color::Yellow)), EventClass::Ty);
    std::uint64_t n = 0, tb = 0, ty = 0;
    for (std::uint64_t bits = 0; bits < 4096; ++bits) {
        switch (classify(d, Coloring::from_bits(d, bits))) {
            case EventClass::N: ++n; break;
            case EventClass::Tb: ++tb; break;
            case EventClass::Ty: ++ty; break;
        }
    }
    EXPECT_EQ(n + 2 * tb, 4096u);
    EXPECT_EQ(tb, ty);
}

TEST(Classify, DualityPartitionAndColorSymmetry) {
    const HexDomain d = HexDomain::parallelogram(3, 3);
    ClusterFinder f;
    for (std::uint64_t bits = 0; bits < 512; ++bits) {
        const Coloring c = Coloring::from_bits(d, bits);
        const RectangleEvents e = rectangle_events(d, c, f);
        EXPECT_NE(e.hb, e.vy);
        EXPECT_NE(e.vb, e.hy);
        EXPECT_EQ(int(e.cls == EventClass::N) + int(e.tb) + int(e.ty), 1);
        const EventClass flipped = classify(d, c.flipped());
        const EventClass expect =
            e.cls == EventClass::Tb ? EventClass::Ty : (e.cls == EventClass::Ty ? EventClass::Tb : EventClass::N);
        EXPECT_EQ(flipped, expect);
    }
}

TEST(Records, AllBlueAndAllYellow) {
    const HexDomain d = HexDomain::parallelogram(7, 3);
    const GapQuad q{1, 3, 5, 6};
    const Coloring blue(d, Color::Blue);
    const TripodRecord expect{3, 5, 6, true, false};
    EXPECT_EQ(*multiarm_points(d, blue, q), expect);
    EXPECT_EQ(*trace_interface(d, blue, q), expect);
    const auto t = tripod_points(d, blue, q);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->a, 3);
    EXPECT_EQ(t->b, 5);
    EXPECT_EQ(t->c, 6);
    const Coloring yellow(d, Color::Yellow);
    EXPECT_FALSE(tripod_points(d, yellow, q));
    EXPECT_FALSE(multiarm_points(d, yellow, q));
    EXPECT_FALSE(trace_interface(d, yellow, q));
    EXPECT_FALSE(quad_crossing(d, yellow, q));
}

TEST(Records, YellowFallbackFixture) {
    // Arms on [1, 3) and [5, 6) joined through row 1; [3, 5) is yellow.
    const HexDomain d = HexDomain::parallelogram(7, 3);
    const GapQuad q{1, 3, 5, 6};
    const Coloring c = row_coloring(d, {1, 2, 5}, true);
    EXPECT_TRUE(quad_crossing(d, c, q));
    EXPECT_FALSE(tripod_points(d, c, q));
    const TripodRecord expect{3, 5, 6, false, true};
    EXPECT_EQ(*multiarm_points(d, c, q), expect);
    EXPECT_EQ(*trace_interface(d, c, q), expect);
}

TEST(Records, InterfaceAgreesWithClustersOnEveryColoring) {
    const struct {
        int w, h;
        GapQuad q;
    } cases[] = {{5, 3, {1, 2, 3, 4}}, {6, 3, {1, 2, 4, 5}}, {5, 4, {1, 2, 3, 4}}, {6, 3, {1, 3, 4}}};
    for (const auto& k : cases) {
        const HexDomain d = HexDomain::parallelogram(k.w, k.h);
        for (std::uint64_t bits = 0; bits < (1ULL << d.cell_count()); ++bits) {
            const Coloring c = Coloring::from_bits(d, bits);
            const auto m = multiarm_points(d, c, k.q);
            const auto t = trace_interface(d, c, k.q);
            ASSERT_EQ(m, t) << bits;
            ASSERT_EQ(m.has_value(), quad_crossing(d, c, k.q));
            if (m) {
                ASSERT_EQ(m->a_first, tripod_points(d, c, k.q).has_value());
            }
        }
    }
}

TEST(Records, WalkerMatchesUnionFindOnLargeBoxes) {
    const HexDomain d = HexDomain::parallelogram(60, 30);
    const GapQuad q{20, 28, 36, 45};
    for (std::uint64_t stream = 0; stream < 300; ++stream) {
        const Coloring c = sample_coloring(d, 11, stream);
        const InterfaceTrace eager = explore_interface(d, c, q.x2, &q);
        const InterfaceTrace lazy = explore_interface(d, LazyColoring(d, 11, stream), q.x2, &q);
        ASSERT_EQ(eager.hits, lazy.hits);
        const auto w = walk_record(eager, q);
        const auto m = multiarm_points(d, c, q);
        ASSERT_EQ(w.has_value(), m.has_value()) << stream;
        if (!m) continue;
        EXPECT_EQ(w->a, m->a);
        EXPECT_EQ(w->c, m->c);
        EXPECT_EQ(w->a_first, m->a_first);
        if (!m->yellow_b) {
            EXPECT_EQ(w->b, m->b);
        }
    }
}

TEST(Symmetry, MirrorPreservesEvents) {
    const HexDomain d = HexDomain::parallelogram(6, 3);
    const HexDomain m = d.mirrored();
    const GapQuad q{1, 2, 4, 5};
    const GapQuad mq = reflect(d, q);
    ClusterFinder f;
    for (std::uint64_t bits = 0; bits < (1ULL << d.cell_count()); ++bits) {
        const Coloring c = Coloring::from_bits(d, bits);
        const Coloring mc = c.mirrored(d);
        ASSERT_EQ(quad_crossing(d, c, q), quad_crossing(m, mc, mq));
        const RectangleEvents e = rectangle_events(d, c, f);
        const RectangleEvents r = rectangle_events(m, mc, f);
        ASSERT_EQ(e.hb, r.hb);
        ASSERT_EQ(e.vb, r.vb);
        ASSERT_EQ(e.tb, r.tb);
        ASSERT_EQ(e.ty, r.ty);
    }
}

TEST(Symmetry, MirroredEnumerationMatches) {
    const HexDomain d = HexDomain::parallelogram(6, 3);
    const GapQuad q{1, 2, 4, 5};
    const EnumerationTable a = enumerate_exact(d, q);
    const EnumerationTable b = enumerate_exact(d.mirrored(), reflect(d, q));
    EXPECT_EQ(a.crossing, b.crossing);
    EXPECT_EQ(a.hb, b.hb);
    EXPECT_EQ(a.tb, b.tb);
    EXPECT_EQ(b.interface_mismatch, 0u);
    EXPECT_EQ(b.a_first_mismatch, 0u);
}

TEST(Enumeration, IdentitiesAndDecomposition) {
    const struct {
        int w, h;
        std::optional<GapQuad> q;
    } cases[] = {{3, 3, std::nullopt}, {4, 3, std::nullopt}, {5, 3, GapQuad{1, 2, 3, 4}}, {7, 3, GapQuad{1, 3, 5, 6}}};
    for (const auto& k : cases) {
        const EnumerationTable t = enumerate_exact(HexDomain::parallelogram(k.w, k.h), k.q);
        EXPECT_EQ(t.total, 1ULL << (k.w * k.h));
        EXPECT_EQ(t.n + 2 * t.tb, t.total);
        EXPECT_EQ(t.tb, t.ty);
        EXPECT_EQ(t.hb + t.hyvy + t.n, t.total);
        EXPECT_EQ(std::int64_t(t.hbvb), 2 * std::int64_t(t.tb) - std::int64_t(t.hb));
        if (!k.q) {
            EXPECT_THROW(decompose(t), std::invalid_argument);
            continue;
        }
        const Decomposition dec = decompose(t);
        EXPECT_EQ(dec.crossing_boxes + dec.face, std::int64_t(t.crossing));
        EXPECT_EQ(dec.face, std::int64_t(t.yellow_fallback));
        EXPECT_EQ(dec.tripod_boxes, std::int64_t(t.tripod));
        EXPECT_EQ(dec.box_mismatches, 0u);
        EXPECT_EQ(t.a_first, t.tripod);
    }
    EXPECT_THROW(enumerate_exact(HexDomain::parallelogram(5, 5), std::nullopt), SizeError);
}

TEST(Estimate, RectangleEventsAgainstEnumeration) {
    const HexDomain d = HexDomain::parallelogram(4, 4);
    const EnumerationTable t = enumerate_exact(d, std::nullopt);
    const double total = double(t.total);
    for (auto [ev, exact] : {std::pair{PercEvent::Hb, t.hb / total}, std::pair{PercEvent::Tb, t.tb / total}}) {
        const EstimateResult e = estimate(d, std::nullopt, ev, 100000, 5);
        EXPECT_LE(std::abs(e.p_hat - exact), 4 * e.std_error) << to_string(ev);
        EXPECT_LE(e.ci_lo, e.p_hat);
        EXPECT_LE(e.p_hat, e.ci_hi);
    }
    EXPECT_THROW(estimate(d, std::nullopt, PercEvent::Hb, 0, 5), std::invalid_argument);
    EXPECT_THROW(estimate(d, std::nullopt, PercEvent::Crossing, 10, 5), std::invalid_argument);
}

TEST(Estimate, QuadEventsAgainstEnumeration) {
    const HexDomain d = HexDomain::parallelogram(7, 3);
    const GapQuad q{1, 3, 5, 6};
    const EnumerationTable t = enumerate_exact(d, q);
    const QuadEstimate e = estimate_quad(d, q, 100000, 9);
    EXPECT_LE(std::abs(e.crossing.p_hat - double(t.crossing) / t.total), 4 * e.crossing.std_error);
    EXPECT_LE(std::abs(e.tripod.p_hat - double(t.tripod) / t.total), 4 * e.tripod.std_error);
    EXPECT_LE(e.tripod.successes, e.crossing.successes);
    const EstimateResult c = estimate(d, q, PercEvent::Crossing, 100000, 9);
    EXPECT_EQ(c.successes, e.crossing.successes);
}

TEST(Estimate, IndependentOfWorkerCount) {
    const HexDomain d = HexDomain::parallelogram(200, 100);
    const GapQuad q{80, 90, 100};
    const QuadEstimate a = estimate_quad(d, q, 4000, 21, 1);
    const QuadEstimate b = estimate_quad(d, q, 4000, 21, 8);
    EXPECT_EQ(a.crossing.successes, b.crossing.successes);
    EXPECT_EQ(a.tripod.successes, b.tripod.successes);
    EXPECT_EQ(a.crossing.p_hat, b.crossing.p_hat);
    const HexDomain small = HexDomain::parallelogram(12, 12);
    EXPECT_EQ(estimate(small, std::nullopt, PercEvent::Vb, 3000, 4, 1).successes,
              estimate(small, std::nullopt, PercEvent::Vb, 3000, 4, 8).successes);
}

TEST(Events, StringRoundTrip) {
    for (PercEvent e : {PercEvent::Crossing, PercEvent::Tripod, PercEvent::Hb, PercEvent::Vb, PercEvent::HbVb,
                        PercEvent::HyVy, PercEvent::N, PercEvent::Tb, PercEvent::Ty})
        EXPECT_EQ(perc_event_from_string(to_string(e)), e);
    EXPECT_THROW(perc_event_from_string("Hx"), std::invalid_argument);
}

TEST(HalfPlane, SetupGeometry) {
    for (double s : {0.25, 0.5, 0.75}) {
        const HalfPlaneSetup h = half_plane_setup(s, 32, 8);
        EXPECT_EQ(h.quad.x1, 8 * 32);
        EXPECT_EQ(h.quad.x3, h.quad.x1 + 32);
        EXPECT_EQ(h.quad.x4, GapQuad::kRightCorner);
        EXPECT_EQ(h.domain.width() - h.quad.x3, 8 * 32 + 1);
        EXPECT_EQ(h.domain.height(), 8 * 32);
        EXPECT_NEAR(h.s, s, 0.02);
        EXPECT_DOUBLE_EQ(h.s, continuum_cross_ratio(h.domain, h.quad));
    }
    EXPECT_THROW(half_plane_setup(0.5, 2, 8), std::invalid_argument);
    EXPECT_THROW(half_plane_setup(1.0, 32, 8), std::invalid_argument);
    EXPECT_THROW(half_plane_setup(0.5, 4096, 64), SizeError);
}

TEST(HalfPlane, ContinuumCrossRatioUsesCellCentres) {
    const HexDomain d = HexDomain::parallelogram(20, 2);
    const GapQuad q{2, 6, 9, 15};
    EXPECT_DOUBLE_EQ(continuum_cross_ratio(d, q), cross_ratio_of(2.0, 5.0, 9.0, 14.0));
}
