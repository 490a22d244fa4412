#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosscam/camera.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/geometry.hpp"
#include "crosscam/rng.hpp"

namespace crosscam {

inline constexpr double kPersonAspect = 0.4;        // box width / box height
inline constexpr double kDefaultPersonHeightM = 1.7;
inline constexpr double kMinBoxHeightPx = 2.5;      // keeps width >= 1 px

// One simulated person: a ground-plane trajectory over a frame range.
struct WorldObject {
    std::string object_id;
    std::map<int, Point2> trajectory;  // frame_idx -> world meters
    int enter_frame = 0;
    int exit_frame = 0;

    void validate(double v_max = std::numeric_limits<double>::infinity()) const {
        if (exit_frame < enter_frame)
            throw ConfigError("object " + object_id + ": exit_frame < enter_frame");
        const Point2* prev = nullptr;
        for (int f = enter_frame; f <= exit_frame; ++f) {
            auto it = trajectory.find(f);
            if (it == trajectory.end())
                throw ConfigError("object " + object_id + ": trajectory missing frame " +
                                  std::to_string(f));
            if (!finite(it->second))
                throw ConfigError("object " + object_id + ": position not finite");
            if (prev != nullptr) {
                const double step = std::hypot(it->second.x - prev->x, it->second.y - prev->y);
                if (step > v_max + 1e-9)
                    throw ConfigError("object " + object_id + ": step exceeds v_max at frame " +
                                      std::to_string(f));
            }
            prev = &it->second;
        }
    }

    bool alive_at(int frame) const { return frame >= enter_frame && frame <= exit_frame; }
};

struct WorldScene {
    std::vector<WorldObject> objects;
    int n_frames = 0;
    double fps = 1.0;

    void validate(double v_max = std::numeric_limits<double>::infinity()) const {
        if (n_frames <= 0) throw ConfigError("scene.n_frames: must be > 0");
        if (!(fps > 0.0)) throw ConfigError("scene.fps: must be > 0");
        for (const auto& o : objects) {
            o.validate(v_max);
            if (o.enter_frame < 0 || o.exit_frame >= n_frames)
                throw ConfigError("object " + o.object_id + ": frame range outside scene");
        }
    }
};

// Per-camera, per-frame detections. frames.size() == scene n_frames.
struct DetectionLog {
    std::string camera_id;
    std::vector<std::vector<BBox>> frames;

    void validate() const {
        for (size_t f = 0; f < frames.size(); ++f) {
            for (const auto& b : frames[f]) {
                if (b.camera_id != camera_id || b.frame_idx != static_cast<int>(f))
                    throw SchemaError("log " + camera_id + ": box tagged " + b.camera_id + "/" +
                                      std::to_string(b.frame_idx) + " stored at frame " +
                                      std::to_string(f));
                if (!b.valid())
                    throw SchemaError("log " + camera_id + ": invalid box at frame " +
                                      std::to_string(f));
            }
        }
    }

    friend bool operator==(const DetectionLog&, const DetectionLog&) = default;
};

/**
 * Projects the scene into a camera: one confidence-1.0 box per object whose
 * foot point lands inside the image rectangle. Box height is the pixel
 * distance between the projected foot and the projected head point
 * (foot + (0, person_height_m * vertical_scale) in world coordinates), so
 * perspective homographies shrink far-away people; width is 0.4 * height and
 * the box sits bottom-centered on the foot.
 */
inline DetectionLog render_ground_truth(const WorldScene& scene, const CameraConfig& cam,
                                        double person_height_m = kDefaultPersonHeightM) {
    DetectionLog log;
    log.camera_id = cam.camera_id;
    log.frames.resize(static_cast<size_t>(scene.n_frames));
    for (int f = 0; f < scene.n_frames; ++f) {
        for (const auto& obj : scene.objects) {
            if (!obj.alive_at(f)) continue;
            const Point2 foot_w = obj.trajectory.at(f);
            const Point2 foot = apply_homography(cam.world_to_image, foot_w);
            if (foot.x < 0.0 || foot.x > cam.image_w || foot.y < 0.0 || foot.y > cam.image_h)
                continue;
            const Point2 head = apply_homography(
                cam.world_to_image,
                {foot_w.x, foot_w.y + person_height_m * cam.vertical_scale});
            const double h = std::max(kMinBoxHeightPx, std::hypot(head.x - foot.x, head.y - foot.y));
            const double w = kPersonAspect * h;
            BBox box;
            box.x_min = foot.x - w / 2.0;
            box.y_min = foot.y - h;
            box.width = w;
            box.height = h;
            box.confidence = 1.0;
            box.class_id = 0;
            box.camera_id = cam.camera_id;
            box.frame_idx = f;
            log.frames[static_cast<size_t>(f)].push_back(box);
        }
    }
    return log;
}

/**
 * Applies the noise model to a ground-truth log. Each frame uses its own
 * counter-based RNG stream keyed by (seed, camera_id, frame_idx), so the
 * output is independent of the order frames or cameras are processed in.
 */
inline DetectionLog synthesize_detections(const DetectionLog& gt, const NoiseModel& noise,
                                          int image_w, int image_h, std::uint64_t seed) {
    DetectionLog out;
    out.camera_id = gt.camera_id;
    out.frames.resize(gt.frames.size());
    for (size_t f = 0; f < gt.frames.size(); ++f) {
        Rng rng(seed, gt.camera_id, static_cast<std::uint64_t>(f));
        auto& frame_out = out.frames[f];
        for (const auto& b : gt.frames[f]) {
            if (rng.bernoulli(noise.miss_prob)) continue;
            const double dx = rng.normal(0.0, noise.center_jitter_std);
            const double dy = rng.normal(0.0, noise.center_jitter_std);
            const double dw = rng.normal(0.0, noise.size_jitter_std);
            const double dh = rng.normal(0.0, noise.size_jitter_std);
            const double conf = rng.normal(noise.conf_mean, noise.conf_std);
            BBox nb = b;
            nb.width = std::max(1.0, b.width + dw);
            nb.height = std::max(1.0, b.height + dh);
            // center moves by the jitter, size grows around the center; applied
            // as corner deltas so zero noise reproduces the input bit-exactly
            nb.x_min = b.x_min + dx - (nb.width - b.width) / 2.0;
            nb.y_min = b.y_min + dy - (nb.height - b.height) / 2.0;
            nb.confidence = std::clamp(conf, 0.01, 1.0);
            frame_out.push_back(nb);
        }
        const int n_false = rng.poisson(noise.false_pos_rate);
        for (int k = 0; k < n_false; ++k) {
            const double h = rng.uniform(8.0, 0.25 * std::min(image_w, image_h));
            const double w = kPersonAspect * h;
            BBox fp;
            fp.x_min = rng.uniform(0.0, std::max(0.0, image_w - w));
            fp.y_min = rng.uniform(0.0, std::max(0.0, image_h - h));
            fp.width = w;
            fp.height = h;
            fp.confidence = rng.uniform(0.01, noise.conf_mean);
            fp.class_id = 0;
            fp.camera_id = gt.camera_id;
            fp.frame_idx = static_cast<int>(f);
            frame_out.push_back(fp);
        }
    }
    return out;
}

inline DetectionLog synthesize_detections(const DetectionLog& gt, const CameraConfig& cam,
                                          std::uint64_t seed) {
    return synthesize_detections(gt, cam.noise, cam.image_w, cam.image_h, seed);
}

// --- detection-log file format -----------------------------------------
//
// Newline-delimited JSON, one record per frame, ascending frame_idx, no gaps:
//   {"camera_id": "...", "frame_idx": 0, "boxes": [{"x_min":..., "y_min":...,
//    "w":..., "h":..., "conf":..., "class_id":...}]}
// The same format ingests externally produced detections.

inline void save_log(const DetectionLog& log, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    for (size_t f = 0; f < log.frames.size(); ++f) {
        nlohmann::json boxes = nlohmann::json::array();
        for (const auto& b : log.frames[f]) {
            boxes.push_back({{"x_min", b.x_min},
                             {"y_min", b.y_min},
                             {"w", b.width},
                             {"h", b.height},
                             {"conf", b.confidence},
                             {"class_id", b.class_id}});
        }
        nlohmann::json rec{{"camera_id", log.camera_id},
                           {"frame_idx", static_cast<int>(f)},
                           {"boxes", std::move(boxes)}};
        os << rec.dump() << '\n';
    }
    if (!os) throw IoError("write failed: " + path);
}

inline DetectionLog load_log(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    DetectionLog log;
    std::string line;
    int line_no = 0;
    int expected_frame = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string where = "line " + std::to_string(line_no);
        auto require = [&](const char* key) -> const nlohmann::json& {
            auto it = rec.find(key);
            if (it == rec.end())
                throw SchemaError(where + ": missing field '" + key + "'");
            return *it;
        };
        const auto& cam_id = require("camera_id");
        const auto& frame_idx = require("frame_idx");
        const auto& boxes = require("boxes");
        if (!cam_id.is_string()) throw SchemaError(where + ": camera_id must be a string");
        if (!frame_idx.is_number_integer())
            throw SchemaError(where + ": frame_idx must be an integer");
        if (!boxes.is_array()) throw SchemaError(where + ": boxes must be an array");
        if (log.frames.empty()) {
            log.camera_id = cam_id.get<std::string>();
        } else if (cam_id.get<std::string>() != log.camera_id) {
            throw SchemaError(where + ": camera_id changed mid-file");
        }
        const int f = frame_idx.get<int>();
        if (f != expected_frame)
            throw SchemaError(where + ": expected frame_idx " + std::to_string(expected_frame) +
                              ", got " + std::to_string(f));
        ++expected_frame;
        std::vector<BBox> frame;
        for (const auto& jb : boxes) {
            BBox b;
            auto field = [&](const char* key) -> double {
                auto it = jb.find(key);
                if (it == jb.end() || !it->is_number())
                    throw SchemaError(where + ": box missing numeric field '" + key + "'");
                return it->get<double>();
            };
            b.x_min = field("x_min");
            b.y_min = field("y_min");
            b.width = field("w");
            b.height = field("h");
            b.confidence = field("conf");
            auto cit = jb.find("class_id");
            if (cit == jb.end() || !cit->is_number_integer())
                throw SchemaError(where + ": box missing integer field 'class_id'");
            b.class_id = cit->get<int>();
            b.camera_id = log.camera_id;
            b.frame_idx = f;
            if (!b.valid())
                throw SchemaError(where + ": invalid box in frame " + std::to_string(f) +
                                  " (width/height must be > 0, conf in [0,1], finite)");
            frame.push_back(std::move(b));
        }
        log.frames.push_back(std::move(frame));
    }
    return log;
}

}  // namespace crosscam
