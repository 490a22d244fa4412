#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "crosscam/geometry.hpp"
#include "crosscam/rng.hpp"

using namespace crosscam;

namespace {

BBox make_box(double x, double y, double w, double h) {
    BBox b;
    b.x_min = x;
    b.y_min = y;
    b.width = w;
    b.height = h;
    return b;
}

Homography random_invertible(Rng& rng) {
    while (true) {
        std::array<double, 9> m{};
        for (int i = 0; i < 8; ++i) m[static_cast<size_t>(i)] = rng.uniform(-3.0, 3.0);
        m[8] = 1.0;
        // keep the perspective row tame so test points stay finite
        m[6] *= 0.05;
        m[7] *= 0.05;
        try {
            Homography h(m);
            if (std::abs(h.det()) > 1e-3) return h;
        } catch (const Error&) {
        }
    }
}

}  // namespace

TEST_CASE("homography validates and canonicalizes") {
    const Homography h({2, 0, 0, 0, 2, 0, 0, 0, 2});
    CHECK(h.at(0, 0) == Catch::Approx(1.0));  // scaled so m[2][2] == 1
    CHECK(h.at(2, 2) == 1.0);

    CHECK_THROWS_AS(Homography({1, 0, 0, 2, 0, 0, 3, 0, 0}), Singular);
    CHECK_THROWS_AS(Homography({0, 0, 0, 0, 0, 0, 0, 0, 0}), Singular);
}

TEST_CASE("identity and translation act exactly") {
    const Point2 p{3.5, -2.25};
    const Point2 q = apply_homography(Homography::identity(), p);
    CHECK(q.x == p.x);
    CHECK(q.y == p.y);

    const Point2 t = apply_homography(Homography::translation(10.0, -5.0), p);
    CHECK(t.x == 13.5);
    CHECK(t.y == -7.25);

    const Point2 s = apply_homography(Homography::scaling(2.0, 4.0), p);
    CHECK(s.x == 7.0);
    CHECK(s.y == -9.0);
}

TEST_CASE("projective division uses the third row") {
    const Homography h({2, 0, 1, 0, 3, 2, 0.1, 0, 1});
    const Point2 q = apply_homography(h, {2.0, 3.0});
    CHECK(q.x == Catch::Approx(25.0 / 6.0).epsilon(1e-12));
    CHECK(q.y == Catch::Approx(55.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("points on the line at infinity are rejected") {
    // w = 0.1*x + 1 vanishes at x = -10
    const Homography h({2, 0, 1, 0, 3, 2, 0.1, 0, 1});
    CHECK_THROWS_AS(apply_homography(h, {-10.0, 0.0}), DegeneratePoint);
}

TEST_CASE("compose and invert round-trip points") {
    Rng rng(2024, "geometry/roundtrip", 0);
    for (int i = 0; i < 200; ++i) {
        const Homography h = random_invertible(rng);
        const Homography hinv = invert_homography(h);
        const Point2 p{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        Point2 q;
        try {
            q = apply_homography(h, p);
        } catch (const DegeneratePoint&) {
            continue;
        }
        const Point2 back = apply_homography(hinv, q);
        CHECK(std::abs(back.x - p.x) < 1e-9);
        CHECK(std::abs(back.y - p.y) < 1e-9);

        // compose(h^-1, h) acts as identity
        const Homography id = compose(hinv, h);
        const Point2 r = apply_homography(id, p);
        CHECK(std::abs(r.x - p.x) < 1e-9);
        CHECK(std::abs(r.y - p.y) < 1e-9);
    }
}

TEST_CASE("compose applies right-hand map first") {
    const Homography t = Homography::translation(1.0, 0.0);
    const Homography s = Homography::scaling(2.0, 2.0);
    // compose(s, t): translate then scale
    const Point2 p = apply_homography(compose(s, t), {1.0, 1.0});
    CHECK(p.x == 4.0);
    CHECK(p.y == 2.0);
    // compose(t, s): scale then translate
    const Point2 q = apply_homography(compose(t, s), {1.0, 1.0});
    CHECK(q.x == 3.0);
    CHECK(q.y == 2.0);
}

TEST_CASE("box iou oracles") {
    const BBox a = make_box(0, 0, 2, 2);
    CHECK(box_iou(a, a) == 1.0);
    CHECK(box_iou(a, make_box(1, 0, 2, 2)) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(box_iou(a, make_box(5, 5, 2, 2)) == 0.0);
    CHECK(box_iou(a, make_box(2, 0, 2, 2)) == 0.0);  // edge contact has zero area
    CHECK(box_iou(a, make_box(0.5, 0.5, 1, 1)) == Catch::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("box iou is symmetric and bounded") {
    Rng rng(11, "geometry/iou", 0);
    for (int i = 0; i < 500; ++i) {
        const BBox a = make_box(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.1, 4),
                                rng.uniform(0.1, 4));
        const BBox b = make_box(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.1, 4),
                                rng.uniform(0.1, 4));
        const double ab = box_iou(a, b);
        CHECK(ab == box_iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("transform_box is exact under translation and identity") {
    const BBox b = make_box(1, 2, 3, 4);
    const BBox same = transform_box(Homography::identity(), b);
    CHECK(same.x_min == b.x_min);
    CHECK(same.y_min == b.y_min);
    CHECK(same.width == b.width);
    CHECK(same.height == b.height);

    const BBox moved = transform_box(Homography::translation(10, 20), b);
    CHECK(moved.x_min == 11.0);
    CHECK(moved.y_min == 22.0);
    CHECK(moved.width == 3.0);
    CHECK(moved.height == 4.0);
}

TEST_CASE("transform_box takes the bounding box of mapped corners") {
    const Homography h({2, 0, 1, 0, 3, 2, 0.1, 0, 1});
    const BBox b = make_box(0, 0, 2, 2);
    const BBox t = transform_box(h, b);
    CHECK(t.x_min == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(t.y_min == Catch::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(t.width == Catch::Approx(19.0 / 6.0).epsilon(1e-12));
    CHECK(t.height == Catch::Approx(19.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("transform_box preserves metadata") {
    BBox b = make_box(1, 1, 2, 2);
    b.confidence = 0.7;
    b.class_id = 3;
    b.camera_id = "cam9";
    b.frame_idx = 42;
    const BBox t = transform_box(Homography::scaling(2, 2), b);
    CHECK(t.confidence == 0.7);
    CHECK(t.class_id == 3);
    CHECK(t.camera_id == "cam9");
    CHECK(t.frame_idx == 42);
}

TEST_CASE("convex polygon area and validation") {
    const ConvexPolygon unit({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(unit.area() == Catch::Approx(1.0).epsilon(1e-12));

    // clockwise input is not a CCW convex polygon
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), Error);
    // non-convex chevron
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}}), Error);

    const ConvexPolygon sorted =
        ConvexPolygon::from_unordered({{1, 1}, {0, 0}, {0, 1}, {1, 0}});
    CHECK(sorted.area() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polygon intersection oracles") {
    const ConvexPolygon a({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    const ConvexPolygon b({{1, 1}, {3, 1}, {3, 3}, {1, 3}});
    CHECK(polygon_intersection_area(a, b) == Catch::Approx(1.0).epsilon(1e-12));

    const ConvexPolygon far({{10, 10}, {11, 10}, {11, 11}, {10, 11}});
    CHECK(polygon_intersection_area(a, far) == 0.0);

    const ConvexPolygon inner({{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}});
    CHECK(polygon_intersection_area(a, inner) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(polygon_intersection_area(inner, a) == Catch::Approx(1.0).epsilon(1e-12));

    // the unit square sits entirely inside this triangle (hypotenuse x+y=2)
    const ConvexPolygon tri({{0, 0}, {2, 0}, {0, 2}});
    const ConvexPolygon sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(polygon_intersection_area(tri, sq) == Catch::Approx(1.0).epsilon(1e-12));

    // a square straddling the hypotenuse loses exactly half its area
    const ConvexPolygon straddle({{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}});
    CHECK(polygon_intersection_area(tri, straddle) == Catch::Approx(0.5).epsilon(1e-12));

    CHECK(polygon_intersection_area(a, a) == Catch::Approx(a.area()).epsilon(1e-12));
}

TEST_CASE("intersection area is symmetric and bounded by both areas") {
    Rng rng(5, "geometry/poly", 0);
    for (int i = 0; i < 200; ++i) {
        const double cx = rng.uniform(-2, 2), cy = rng.uniform(-2, 2);
        const double w1 = rng.uniform(0.5, 3), h1 = rng.uniform(0.5, 3);
        const double w2 = rng.uniform(0.5, 3), h2 = rng.uniform(0.5, 3);
        const ConvexPolygon p({{cx, cy}, {cx + w1, cy}, {cx + w1, cy + h1}, {cx, cy + h1}});
        const double dx = rng.uniform(-2, 2), dy = rng.uniform(-2, 2);
        const ConvexPolygon q({{dx, dy}, {dx + w2, dy}, {dx + w2, dy + h2}, {dx, dy + h2}});
        const double pq = polygon_intersection_area(p, q);
        const double qp = polygon_intersection_area(q, p);
        CHECK(pq == Catch::Approx(qp).margin(1e-9));
        CHECK(pq <= p.area() + 1e-9);
        CHECK(pq <= q.area() + 1e-9);
        CHECK(pq >= 0.0);
    }
}

TEST_CASE("bbox helpers") {
    const BBox b = make_box(1, 2, 3, 4);
    CHECK(b.x_max() == 4.0);
    CHECK(b.y_max() == 6.0);
    CHECK(b.area() == 12.0);
    CHECK(b.valid());
    CHECK_FALSE(make_box(0, 0, -1, 1).valid());
    CHECK_FALSE(make_box(0, 0, 1, 0).valid());
}
