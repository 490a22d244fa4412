#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosscam/camera.hpp"
#include "crosscam/detsim.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/rng.hpp"
#include "crosscam/server.hpp"

namespace crosscam {

/**
 * Synthetic world parameters: a rectangular room, n_objects people wandering
 * slowly inside disjoint grid cells (so ground truth never self-occludes into
 * ambiguity), entering staggered over the first entry_window frames.
 */
struct SceneParams {
    int n_frames = 400;
    double fps = 10.0;
    double world_w_m = 10.0;
    double world_h_m = 8.0;
    int n_objects = 18;
    int entry_window = 0;    // object i enters at i*entry_window/(n-1)
    double speed_mps = 0.0;  // waypoint-wander speed; 0 = static
    double cell_margin = 0.2;  // fraction of each cell dimension kept clear per side

    void validate(const std::string& path = "scene") const {
        if (n_frames <= 0) throw ConfigError(path + ".n_frames: must be > 0");
        if (!(fps > 0.0) || !std::isfinite(fps)) throw ConfigError(path + ".fps: must be > 0");
        if (!(world_w_m > 0.0)) throw ConfigError(path + ".world_w_m: must be > 0");
        if (!(world_h_m > 0.0)) throw ConfigError(path + ".world_h_m: must be > 0");
        if (n_objects < 0) throw ConfigError(path + ".n_objects: must be >= 0");
        if (entry_window < 0 || entry_window >= n_frames)
            throw ConfigError(path + ".entry_window: must be in [0, n_frames)");
        if (!(speed_mps >= 0.0) || !std::isfinite(speed_mps))
            throw ConfigError(path + ".speed_mps: must be >= 0");
        if (!(cell_margin >= 0.0 && cell_margin < 0.5))
            throw ConfigError(path + ".cell_margin: must be in [0, 0.5)");
    }
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    SceneParams scene;
    std::vector<CameraConfig> cameras;
    FilterParams filter;
    FusionParams fusion;
    TopologyParams topology;
    TrustParams trust;
    double person_height_m = kDefaultPersonHeightM;

    ServerConfig server_config() const {
        return ServerConfig{cameras, filter, fusion, topology, trust, person_height_m};
    }

    void validate() const {
        scene.validate();
        std::set<std::string> ids;
        for (const auto& cam : cameras) {
            if (!ids.insert(cam.camera_id).second)
                throw ConfigError("cameras: duplicate camera_id '" + cam.camera_id + "'");
        }
        server_config().validate();
        for (const auto& id : trust.adversarial_cameras) {
            if (std::none_of(cameras.begin(), cameras.end(),
                             [&](const CameraConfig& c) { return c.camera_id == id; }))
                throw ConfigError("trust.adversarial_cameras: unknown camera " + id);
        }
    }
};

/**
 * Deterministic scene synthesis. Each object gets a disjoint cell of the
 * room's grid and wanders between random waypoints inside the cell's interior
 * at speed_mps; positions depend only on (seed, object index), never on
 * evaluation order.
 */
inline WorldScene generate_scene(const SceneParams& p, std::uint64_t seed) {
    p.validate();
    WorldScene scene;
    scene.n_frames = p.n_frames;
    scene.fps = p.fps;
    if (p.n_objects == 0) return scene;

    const int cols = std::max(
        1, static_cast<int>(std::ceil(std::sqrt(p.n_objects * p.world_w_m / p.world_h_m))));
    const int rows = (p.n_objects + cols - 1) / cols;
    const double cell_w = p.world_w_m / cols;
    const double cell_h = p.world_h_m / rows;
    const double step = p.speed_mps / p.fps;

    for (int i = 0; i < p.n_objects; ++i) {
        WorldObject obj;
        obj.object_id = "p" + std::to_string(i);
        obj.enter_frame =
            p.n_objects > 1 ? static_cast<int>(static_cast<std::int64_t>(i) * p.entry_window /
                                               (p.n_objects - 1))
                            : 0;
        obj.exit_frame = p.n_frames - 1;

        const int cx = i % cols;
        const int cy = i / cols;
        const double x_lo = cx * cell_w + p.cell_margin * cell_w;
        const double x_hi = (cx + 1) * cell_w - p.cell_margin * cell_w;
        const double y_lo = cy * cell_h + p.cell_margin * cell_h;
        const double y_hi = (cy + 1) * cell_h - p.cell_margin * cell_h;

        Rng rng(seed, "scene/" + obj.object_id, 0);
        auto pick = [&]() -> Point2 {
            const double x = x_lo + rng.uniform01() * (x_hi - x_lo);
            const double y = y_lo + rng.uniform01() * (y_hi - y_lo);
            return {x, y};
        };

        Point2 pos = pick();
        Point2 target = pick();
        for (int f = obj.enter_frame; f <= obj.exit_frame; ++f) {
            obj.trajectory[f] = pos;
            if (step <= 0.0) continue;
            double dx = target.x - pos.x;
            double dy = target.y - pos.y;
            double dist = std::hypot(dx, dy);
            while (dist <= step) {
                target = pick();
                dx = target.x - pos.x;
                dy = target.y - pos.y;
                dist = std::hypot(dx, dy);
                if (dist <= step) {
                    // waypoint closer than one step: land on it and keep going
                    pos = target;
                    dx = 0.0;
                    dy = 0.0;
                    dist = 0.0;
                    target = pick();
                    dx = target.x - pos.x;
                    dy = target.y - pos.y;
                    dist = std::hypot(dx, dy);
                }
            }
            pos.x += step * dx / dist;
            pos.y += step * dy / dist;
        }
        scene.objects.push_back(std::move(obj));
    }
    scene.validate(step + 1e-9);
    return scene;
}

inline WorldScene build_scene(const ScenarioConfig& cfg) {
    return generate_scene(cfg.scene, cfg.seed);
}

// --- strict JSON (de)serialization ---------------------------------------

namespace detail {

inline void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": must be an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

inline double get_num(const nlohmann::json& j, const char* key, double dflt,
                      const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number()) throw ConfigError(path + "." + key + ": must be a number");
    return it->get<double>();
}

inline int get_int(const nlohmann::json& j, const char* key, int dflt, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number_integer()) throw ConfigError(path + "." + key + ": must be an integer");
    return it->get<int>();
}

inline bool get_bool(const nlohmann::json& j, const char* key, bool dflt,
                     const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_boolean()) throw ConfigError(path + "." + key + ": must be a boolean");
    return it->get<bool>();
}

inline std::string get_str(const nlohmann::json& j, const char* key, const std::string& dflt,
                           const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_string()) throw ConfigError(path + "." + key + ": must be a string");
    return it->get<std::string>();
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    using detail::get_bool;
    using detail::get_int;
    using detail::get_num;
    using detail::get_str;
    using detail::require_keys;

    require_keys(j,
                 {"name", "seed", "scene", "cameras", "filter", "fusion", "topology", "trust",
                  "person_height_m"},
                 "config");
    ScenarioConfig cfg;
    cfg.name = get_str(j, "name", cfg.name, "config");
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned() && !it->is_number_integer())
            throw ConfigError("config.seed: must be a non-negative integer");
        if (it->is_number_integer() && it->get<std::int64_t>() < 0)
            throw ConfigError("config.seed: must be a non-negative integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    cfg.person_height_m = get_num(j, "person_height_m", cfg.person_height_m, "config");

    auto sit = j.find("scene");
    if (sit == j.end()) throw ConfigError("config.scene: missing");
    require_keys(*sit,
                 {"n_frames", "fps", "world_w_m", "world_h_m", "n_objects", "entry_window",
                  "speed_mps", "cell_margin"},
                 "scene");
    cfg.scene.n_frames = get_int(*sit, "n_frames", cfg.scene.n_frames, "scene");
    cfg.scene.fps = get_num(*sit, "fps", cfg.scene.fps, "scene");
    cfg.scene.world_w_m = get_num(*sit, "world_w_m", cfg.scene.world_w_m, "scene");
    cfg.scene.world_h_m = get_num(*sit, "world_h_m", cfg.scene.world_h_m, "scene");
    cfg.scene.n_objects = get_int(*sit, "n_objects", cfg.scene.n_objects, "scene");
    cfg.scene.entry_window = get_int(*sit, "entry_window", cfg.scene.entry_window, "scene");
    cfg.scene.speed_mps = get_num(*sit, "speed_mps", cfg.scene.speed_mps, "scene");
    cfg.scene.cell_margin = get_num(*sit, "cell_margin", cfg.scene.cell_margin, "scene");

    auto cit = j.find("cameras");
    if (cit == j.end() || !cit->is_array() || cit->empty())
        throw ConfigError("config.cameras: must be a non-empty array");
    for (size_t i = 0; i < cit->size(); ++i) {
        const nlohmann::json& jc = (*cit)[i];
        const std::string path = "cameras[" + std::to_string(i) + "]";
        require_keys(jc,
                     {"camera_id", "image_w", "image_h", "world_to_image", "quality",
                      "vertical_scale", "adversarial", "noise"},
                     path);
        CameraConfig cam;
        cam.camera_id = get_str(jc, "camera_id", "", path);
        cam.image_w = get_int(jc, "image_w", 0, path);
        cam.image_h = get_int(jc, "image_h", 0, path);
        auto hit = jc.find("world_to_image");
        if (hit == jc.end() || !hit->is_array() || hit->size() != 9)
            throw ConfigError(path + ".world_to_image: must be an array of 9 numbers");
        std::array<double, 9> m{};
        for (size_t k = 0; k < 9; ++k) {
            if (!(*hit)[k].is_number())
                throw ConfigError(path + ".world_to_image: must be an array of 9 numbers");
            m[k] = (*hit)[k].get<double>();
        }
        try {
            cam.world_to_image = Homography(m);
        } catch (const Error& e) {
            throw ConfigError(path + ".world_to_image: " + e.what());
        }
        cam.quality = get_num(jc, "quality", cam.quality, path);
        cam.vertical_scale = get_num(jc, "vertical_scale", cam.vertical_scale, path);
        cam.adversarial = get_bool(jc, "adversarial", cam.adversarial, path);
        if (auto nit = jc.find("noise"); nit != jc.end()) {
            const std::string npath = path + ".noise";
            require_keys(*nit,
                         {"miss_prob", "false_pos_rate", "center_jitter_std", "size_jitter_std",
                          "conf_mean", "conf_std"},
                         npath);
            cam.noise.miss_prob = get_num(*nit, "miss_prob", cam.noise.miss_prob, npath);
            cam.noise.false_pos_rate =
                get_num(*nit, "false_pos_rate", cam.noise.false_pos_rate, npath);
            cam.noise.center_jitter_std =
                get_num(*nit, "center_jitter_std", cam.noise.center_jitter_std, npath);
            cam.noise.size_jitter_std =
                get_num(*nit, "size_jitter_std", cam.noise.size_jitter_std, npath);
            cam.noise.conf_mean = get_num(*nit, "conf_mean", cam.noise.conf_mean, npath);
            cam.noise.conf_std = get_num(*nit, "conf_std", cam.noise.conf_std, npath);
        }
        cfg.cameras.push_back(std::move(cam));
    }

    if (auto fit = j.find("filter"); fit != j.end()) {
        require_keys(*fit, {"match_iou", "ttl"}, "filter");
        cfg.filter.match_iou = get_num(*fit, "match_iou", cfg.filter.match_iou, "filter");
        cfg.filter.ttl = get_int(*fit, "ttl", cfg.filter.ttl, "filter");
    }
    if (auto fit = j.find("fusion"); fit != j.end()) {
        require_keys(*fit, {"match_gate_iou", "boost_alpha", "nms_iou", "count_conf_threshold"},
                     "fusion");
        cfg.fusion.match_gate_iou =
            get_num(*fit, "match_gate_iou", cfg.fusion.match_gate_iou, "fusion");
        cfg.fusion.boost_alpha = get_num(*fit, "boost_alpha", cfg.fusion.boost_alpha, "fusion");
        cfg.fusion.nms_iou = get_num(*fit, "nms_iou", cfg.fusion.nms_iou, "fusion");
        cfg.fusion.count_conf_threshold =
            get_num(*fit, "count_conf_threshold", cfg.fusion.count_conf_threshold, "fusion");
    }
    if (auto tit = j.find("topology"); tit != j.end()) {
        require_keys(*tit, {"overlap_threshold", "supreme_mode", "beta"}, "topology");
        cfg.topology.overlap_threshold =
            get_num(*tit, "overlap_threshold", cfg.topology.overlap_threshold, "topology");
        const std::string mode = get_str(*tit, "supreme_mode", "static_score", "topology");
        if (mode == "static_score") {
            cfg.topology.supreme_mode = SupremeMode::static_score;
        } else if (mode == "validation_accuracy") {
            cfg.topology.supreme_mode = SupremeMode::validation_accuracy;
        } else {
            throw ConfigError("topology.supreme_mode: must be 'static_score' or "
                              "'validation_accuracy'");
        }
        cfg.topology.beta = get_num(*tit, "beta", cfg.topology.beta, "topology");
    }
    if (auto tit = j.find("trust"); tit != j.end()) {
        require_keys(*tit,
                     {"enabled", "learning_rate", "initial_score", "min_trust",
                      "adversarial_cameras"},
                     "trust");
        cfg.trust.enabled = get_bool(*tit, "enabled", cfg.trust.enabled, "trust");
        cfg.trust.learning_rate =
            get_num(*tit, "learning_rate", cfg.trust.learning_rate, "trust");
        cfg.trust.initial_score =
            get_num(*tit, "initial_score", cfg.trust.initial_score, "trust");
        cfg.trust.min_trust = get_num(*tit, "min_trust", cfg.trust.min_trust, "trust");
        if (auto ait = tit->find("adversarial_cameras"); ait != tit->end()) {
            if (!ait->is_array()) throw ConfigError("trust.adversarial_cameras: must be an array");
            for (const auto& e : *ait) {
                if (!e.is_string())
                    throw ConfigError("trust.adversarial_cameras: must be an array of strings");
                cfg.trust.adversarial_cameras.push_back(e.get<std::string>());
            }
        }
    }

    cfg.validate();
    return cfg;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    nlohmann::json cameras = nlohmann::json::array();
    for (const auto& c : cfg.cameras) {
        nlohmann::json h = nlohmann::json::array();
        for (int k = 0; k < 9; ++k) h.push_back(c.world_to_image.at(k / 3, k % 3));
        cameras.push_back({{"camera_id", c.camera_id},
                           {"image_w", c.image_w},
                           {"image_h", c.image_h},
                           {"world_to_image", std::move(h)},
                           {"quality", c.quality},
                           {"vertical_scale", c.vertical_scale},
                           {"adversarial", c.adversarial},
                           {"noise",
                            {{"miss_prob", c.noise.miss_prob},
                             {"false_pos_rate", c.noise.false_pos_rate},
                             {"center_jitter_std", c.noise.center_jitter_std},
                             {"size_jitter_std", c.noise.size_jitter_std},
                             {"conf_mean", c.noise.conf_mean},
                             {"conf_std", c.noise.conf_std}}}});
    }
    return {
        {"name", cfg.name},
        {"seed", cfg.seed},
        {"scene",
         {{"n_frames", cfg.scene.n_frames},
          {"fps", cfg.scene.fps},
          {"world_w_m", cfg.scene.world_w_m},
          {"world_h_m", cfg.scene.world_h_m},
          {"n_objects", cfg.scene.n_objects},
          {"entry_window", cfg.scene.entry_window},
          {"speed_mps", cfg.scene.speed_mps},
          {"cell_margin", cfg.scene.cell_margin}}},
        {"person_height_m", cfg.person_height_m},
        {"cameras", std::move(cameras)},
        {"filter", {{"match_iou", cfg.filter.match_iou}, {"ttl", cfg.filter.ttl}}},
        {"fusion",
         {{"match_gate_iou", cfg.fusion.match_gate_iou},
          {"boost_alpha", cfg.fusion.boost_alpha},
          {"nms_iou", cfg.fusion.nms_iou},
          {"count_conf_threshold", cfg.fusion.count_conf_threshold}}},
        {"topology",
         {{"overlap_threshold", cfg.topology.overlap_threshold},
          {"supreme_mode",
           cfg.topology.supreme_mode == SupremeMode::static_score ? "static_score"
                                                                  : "validation_accuracy"},
          {"beta", cfg.topology.beta}}},
        {"trust",
         {{"enabled", cfg.trust.enabled},
          {"learning_rate", cfg.trust.learning_rate},
          {"initial_score", cfg.trust.initial_score},
          {"min_trust", cfg.trust.min_trust},
          {"adversarial_cameras", cfg.trust.adversarial_cameras}}},
    };
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << scenario_to_json(cfg).dump(2) << '\n';
}

// --- built-in preset ------------------------------------------------------

/**
 * Four overlapping cameras watching one 10 m x 8 m room with 18 slowly
 * mingling people. Every camera images the whole floor with its own mild
 * perspective, so the overlap graph is a single cluster and cross-camera
 * redundancy is high — the regime the collaborative pipeline targets.
 */
inline ScenarioConfig salsa_like_preset() {
    ScenarioConfig cfg;
    cfg.name = "salsa_like";
    cfg.seed = 1;
    cfg.scene.n_frames = 400;
    cfg.scene.fps = 10.0;
    cfg.scene.world_w_m = 10.0;
    cfg.scene.world_h_m = 8.0;
    cfg.scene.n_objects = 18;
    cfg.scene.entry_window = 240;
    cfg.scene.speed_mps = 0.05;
    cfg.scene.cell_margin = 0.25;

    struct CamPreset {
        const char* id;
        std::array<double, 9> h;
        double quality;
    };
    const CamPreset corners[] = {
        {"cam1", {57.0, 1.2, 30.0, 0.8, 52.0, 22.0, 0.0030, 0.0020, 1.0}, 0.95},
        {"cam2", {54.0, -1.0, 45.0, -0.6, 49.0, 35.0, -0.0018, 0.0025, 1.0}, 0.90},
        {"cam3", {55.0, 0.5, 38.0, 1.0, 51.0, 28.0, 0.0022, -0.0015, 1.0}, 0.88},
        {"cam4", {56.0, -0.8, 33.0, -0.9, 50.0, 40.0, -0.0012, -0.0024, 1.0}, 0.86},
    };
    for (const auto& s : corners) {
        CameraConfig cam;
        cam.camera_id = s.id;
        cam.image_w = 640;
        cam.image_h = 480;
        cam.world_to_image = Homography(s.h);
        cam.quality = s.quality;
        cam.vertical_scale = 0.3;
        cam.noise.miss_prob = 0.2;
        cam.noise.false_pos_rate = 0.005;
        cam.noise.center_jitter_std = 1.2;
        cam.noise.size_jitter_std = 0.8;
        cam.noise.conf_mean = 0.55;
        cam.noise.conf_std = 0.15;
        cfg.cameras.push_back(std::move(cam));
    }
    return cfg;
}

// The same scenario with a perfect detector; useful as an exactness baseline.
inline ScenarioConfig zero_noise(ScenarioConfig cfg) {
    for (auto& cam : cfg.cameras) cam.noise = NoiseModel{};
    return cfg;
}

// Cameras ordered by descending supreme-selection score (ties: ascending id);
// prefix k of this order is the size-k sharing subset used by sweeps.
inline std::vector<std::string> sharing_order(const ScenarioConfig& cfg) {
    struct Scored {
        std::string id;
        double score;
    };
    double max_area = 0.0;
    for (const auto& cam : cfg.cameras)
        max_area = std::max(max_area, fov_footprint(cam).area());
    std::vector<Scored> scored;
    for (const auto& cam : cfg.cameras) {
        const double area_term = max_area > 0.0 ? fov_footprint(cam).area() / max_area : 0.0;
        scored.push_back(
            {cam.camera_id, cfg.topology.beta * area_term + (1.0 - cfg.topology.beta) * cam.quality});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    std::vector<std::string> order;
    for (const auto& s : scored) order.push_back(s.id);
    return order;
}

}  // namespace crosscam
