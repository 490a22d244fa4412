#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "crosscam/errors.hpp"

namespace crosscam {

inline constexpr double kDegenerateTol = 1e-12;

// 2D point; pixels in image space or meters on the world ground plane.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline bool finite(const Point2& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

/**
 * Planar homography, row-major 3x3. Stored canonicalized: if m[8] != 0 the
 * matrix is scaled so m[8] == 1, making equality tests and serialized output
 * stable under projective scale.
 */
class Homography {
  public:
    // Validates finiteness and invertibility (|det| > 1e-12), then canonicalizes.
    explicit Homography(const std::array<double, 9>& entries) : m_(entries) {
        for (double v : m_) {
            if (!std::isfinite(v)) throw Singular("homography entry not finite");
        }
        if (std::abs(det()) <= kDegenerateTol) throw Singular("homography is singular");
        canonicalize();
    }

    static Homography identity() {
        return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1});
    }
    static Homography translation(double tx, double ty) {
        return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
    }
    static Homography scaling(double sx, double sy) {
        return Homography({sx, 0, 0, 0, sy, 0, 0, 0, 1});
    }

    double at(int row, int col) const { return m_[static_cast<size_t>(row) * 3 + col]; }
    const std::array<double, 9>& data() const { return m_; }

    double det() const {
        return m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) -
               m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
               m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
    }

    friend bool operator==(const Homography&, const Homography&) = default;

  private:
    void canonicalize() {
        if (m_[8] != 0.0) {
            const double s = m_[8];
            for (double& v : m_) v /= s;
            m_[8] = 1.0;  // exact, not s/s
        }
    }

    std::array<double, 9> m_;
};

inline Point2 apply_homography(const Homography& h, const Point2& p) {
    const double w = h.at(2, 0) * p.x + h.at(2, 1) * p.y + h.at(2, 2);
    if (std::abs(w) <= kDegenerateTol) {
        throw DegeneratePoint("point maps to the line at infinity");
    }
    return {(h.at(0, 0) * p.x + h.at(0, 1) * p.y + h.at(0, 2)) / w,
            (h.at(1, 0) * p.x + h.at(1, 1) * p.y + h.at(1, 2)) / w};
}

// Matrix product h1*h2, so apply(compose(h1,h2), p) == apply(h1, apply(h2, p)).
inline Homography compose(const Homography& h1, const Homography& h2) {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += h1.at(i, k) * h2.at(k, j);
            r[static_cast<size_t>(i) * 3 + j] = s;
        }
    }
    return Homography(r);  // throws Singular if the product degenerated
}

inline Homography invert_homography(const Homography& h) {
    const double d = h.det();
    if (std::abs(d) <= kDegenerateTol) throw Singular("homography is singular");
    const auto& m = h.data();
    std::array<double, 9> r{
        (m[4] * m[8] - m[5] * m[7]) / d, (m[2] * m[7] - m[1] * m[8]) / d,
        (m[1] * m[5] - m[2] * m[4]) / d, (m[5] * m[6] - m[3] * m[8]) / d,
        (m[0] * m[8] - m[2] * m[6]) / d, (m[2] * m[3] - m[0] * m[5]) / d,
        (m[3] * m[7] - m[4] * m[6]) / d, (m[1] * m[6] - m[0] * m[7]) / d,
        (m[0] * m[4] - m[1] * m[3]) / d,
    };
    return Homography(r);
}

/**
 * Axis-aligned detection box in pixel space. The unit of everything the
 * detector emits and the fusion pipeline consumes.
 */
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double width = 0.0;   // > 0
    double height = 0.0;  // > 0
    double confidence = 0.0;
    int class_id = 0;  // 0 = person
    std::string camera_id;
    int frame_idx = 0;

    double x_max() const { return x_min + width; }
    double y_max() const { return y_min + height; }
    double area() const { return width * height; }

    bool valid() const {
        return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(width) &&
               std::isfinite(height) && width > 0.0 && height > 0.0 &&
               confidence >= 0.0 && confidence <= 1.0 && frame_idx >= 0;
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

inline double box_iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max(), b.x_max()) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max(), b.y_max()) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

// Axis-aligned bounding box of the four transformed corners; detection
// metadata is preserved.
inline BBox transform_box(const Homography& h, const BBox& b) {
    const std::array<Point2, 4> corners = {
        apply_homography(h, {b.x_min, b.y_min}),
        apply_homography(h, {b.x_max(), b.y_min}),
        apply_homography(h, {b.x_max(), b.y_max()}),
        apply_homography(h, {b.x_min, b.y_max()}),
    };
    double xmin = corners[0].x, xmax = corners[0].x;
    double ymin = corners[0].y, ymax = corners[0].y;
    for (const auto& c : corners) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y);
        ymax = std::max(ymax, c.y);
    }
    BBox out = b;
    out.x_min = xmin;
    out.y_min = ymin;
    out.width = xmax - xmin;
    out.height = ymax - ymin;
    return out;
}

/**
 * Convex polygon with counter-clockwise vertices. Used for camera FoV
 * footprints on the ground plane.
 */
class ConvexPolygon {
  public:
    static constexpr double kConvexityTol = -1e-9;

    explicit ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.size() < 3) throw Error("polygon needs at least 3 vertices");
        for (const auto& v : vertices_) {
            if (!finite(v)) throw Error("polygon vertex not finite");
        }
        const size_t n = vertices_.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2& a = vertices_[i];
            const Point2& b = vertices_[(i + 1) % n];
            const Point2& c = vertices_[(i + 2) % n];
            const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
            if (cross < kConvexityTol) {
                throw Error("polygon is not convex counter-clockwise");
            }
        }
    }

    // Builds from unordered vertices: sorts counter-clockwise around the
    // centroid, rotating the lexicographically smallest vertex to the front.
    static ConvexPolygon from_unordered(std::vector<Point2> pts) {
        if (pts.size() < 3) throw Error("polygon needs at least 3 vertices");
        Point2 c{0, 0};
        for (const auto& p : pts) {
            c.x += p.x;
            c.y += p.y;
        }
        c.x /= static_cast<double>(pts.size());
        c.y /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&c](const Point2& a, const Point2& b) {
            return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
        });
        auto lowest = std::min_element(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
            return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        std::rotate(pts.begin(), lowest, pts.end());
        return ConvexPolygon(std::move(pts));
    }

    const std::vector<Point2>& vertices() const { return vertices_; }

    double area() const { return shoelace(vertices_); }

    static double shoelace(const std::vector<Point2>& v) {
        double s = 0.0;
        const size_t n = v.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2& a = v[i];
            const Point2& b = v[(i + 1) % n];
            s += a.x * b.y - b.x * a.y;
        }
        return std::abs(s) * 0.5;
    }

  private:
    std::vector<Point2> vertices_;
};

// Sutherland-Hodgman: clip `a` against every half-plane of convex `b`, then
// take the shoelace area of what remains. 0 when disjoint.
inline double polygon_intersection_area(const ConvexPolygon& a, const ConvexPolygon& b) {
    std::vector<Point2> poly = a.vertices();
    const auto& clip = b.vertices();
    const size_t nb = clip.size();
    for (size_t i = 0; i < nb && !poly.empty(); ++i) {
        const Point2& e0 = clip[i];
        const Point2& e1 = clip[(i + 1) % nb];
        // inside = left of the directed edge e0->e1 (polygon is CCW)
        auto side = [&](const Point2& p) {
            return (e1.x - e0.x) * (p.y - e0.y) - (e1.y - e0.y) * (p.x - e0.x);
        };
        std::vector<Point2> out;
        out.reserve(poly.size() + 1);
        const size_t np = poly.size();
        for (size_t j = 0; j < np; ++j) {
            const Point2& cur = poly[j];
            const Point2& nxt = poly[(j + 1) % np];
            const double sc = side(cur);
            const double sn = side(nxt);
            if (sc >= 0.0) out.push_back(cur);
            if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
                const double t = sc / (sc - sn);
                out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
            }
        }
        poly = std::move(out);
    }
    if (poly.size() < 3) return 0.0;
    return ConvexPolygon::shoelace(poly);
}

}  // namespace crosscam
