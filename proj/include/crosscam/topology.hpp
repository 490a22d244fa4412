#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "crosscam/camera.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/geometry.hpp"

namespace crosscam {

// Pairwise FoV overlap, normalized by the smaller footprint (a camera fully
// inside another scores 1: its view is fully redundant).
struct OverlapMatrix {
    std::vector<std::string> camera_ids;
    std::vector<std::vector<double>> values;  // symmetric, diagonal 1

    int size() const { return static_cast<int>(camera_ids.size()); }
};

struct Cluster {
    std::vector<std::string> members;  // sorted, non-empty
    std::string supreme;               // empty until selected; must be a member

    void validate() const {
        if (members.empty()) throw ScenarioError("cluster has no members");
        if (!supreme.empty() &&
            std::find(members.begin(), members.end(), supreme) == members.end())
            throw ScenarioError("cluster supreme " + supreme + " is not a member");
    }
};

// Ground-plane footprint of the image rectangle: the four image corners
// mapped through the inverse homography, ordered counter-clockwise.
inline ConvexPolygon fov_footprint(const CameraConfig& cam) {
    const Homography image_to_world = invert_homography(cam.world_to_image);
    const double w = cam.image_w;
    const double h = cam.image_h;
    std::vector<Point2> corners = {
        apply_homography(image_to_world, {0.0, 0.0}),
        apply_homography(image_to_world, {w, 0.0}),
        apply_homography(image_to_world, {w, h}),
        apply_homography(image_to_world, {0.0, h}),
    };
    return ConvexPolygon::from_unordered(std::move(corners));
}

inline OverlapMatrix overlap_matrix(const std::vector<CameraConfig>& cams) {
    if (cams.empty()) throw ScenarioError("overlap_matrix: need at least one camera");
    OverlapMatrix m;
    std::vector<ConvexPolygon> footprints;
    std::vector<double> areas;
    for (const auto& c : cams) {
        m.camera_ids.push_back(c.camera_id);
        footprints.push_back(fov_footprint(c));
        areas.push_back(footprints.back().area());
    }
    const size_t n = cams.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        m.values[i][i] = 1.0;
        for (size_t j = i + 1; j < n; ++j) {
            const double inter = polygon_intersection_area(footprints[i], footprints[j]);
            const double denom = std::min(areas[i], areas[j]);
            const double o = denom > 0.0 ? std::min(1.0, inter / denom) : 0.0;
            m.values[i][j] = o;
            m.values[j][i] = o;
        }
    }
    return m;
}

// Connected components of the overlap graph (edge when overlap >= threshold),
// sorted by smallest member id. Supreme is left unset.
inline std::vector<Cluster> cluster_cameras(const OverlapMatrix& m, double overlap_threshold) {
    const int n = m.size();
    std::vector<int> component(static_cast<size_t>(n), -1);
    int n_components = 0;
    for (int start = 0; start < n; ++start) {
        if (component[static_cast<size_t>(start)] != -1) continue;
        const int id = n_components++;
        std::vector<int> stack = {start};
        component[static_cast<size_t>(start)] = id;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (component[static_cast<size_t>(j)] == -1 &&
                    m.values[static_cast<size_t>(i)][static_cast<size_t>(j)] >= overlap_threshold) {
                    component[static_cast<size_t>(j)] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    std::vector<Cluster> clusters(static_cast<size_t>(n_components));
    for (int i = 0; i < n; ++i) {
        clusters[static_cast<size_t>(component[static_cast<size_t>(i)])].members.push_back(
            m.camera_ids[static_cast<size_t>(i)]);
    }
    for (auto& c : clusters) std::sort(c.members.begin(), c.members.end());
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.members[0] < b.members[0]; });
    return clusters;
}

enum class SupremeMode {
    validation_accuracy,  // argmax of per-camera isolated counting accuracy
    static_score,         // argmax of beta*(area/max area) + (1-beta)*quality
};

inline std::string select_supreme(const std::vector<std::string>& members,
                                  const std::map<std::string, double>& accuracy_by_camera) {
    if (members.empty()) throw MissingInput("select_supreme: empty cluster");
    std::string best;
    double best_score = 0.0;
    for (const auto& id : members) {
        auto it = accuracy_by_camera.find(id);
        if (it == accuracy_by_camera.end())
            throw MissingInput("select_supreme: no accuracy for camera " + id);
        if (best.empty() || it->second > best_score ||
            (it->second == best_score && id < best)) {
            best = id;
            best_score = it->second;
        }
    }
    return best;
}

inline std::string select_supreme(const std::vector<std::string>& members,
                                  const std::vector<CameraConfig>& cams, double beta = 0.5) {
    if (members.empty()) throw MissingInput("select_supreme: empty cluster");
    std::map<std::string, const CameraConfig*> by_id;
    for (const auto& c : cams) by_id[c.camera_id] = &c;

    double max_area = 0.0;
    for (const auto& id : members) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw MissingInput("select_supreme: no config for camera " + id);
        max_area = std::max(max_area, fov_footprint(*it->second).area());
    }
    std::string best;
    double best_score = 0.0;
    for (const auto& id : members) {
        const CameraConfig& cam = *by_id.at(id);
        const double area_term = max_area > 0.0 ? fov_footprint(cam).area() / max_area : 0.0;
        const double score = beta * area_term + (1.0 - beta) * cam.quality;
        if (best.empty() || score > best_score || (score == best_score && id < best)) {
            best = id;
            best_score = score;
        }
    }
    return best;
}

}  // namespace crosscam
