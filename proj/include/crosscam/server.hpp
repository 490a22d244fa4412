#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crosscam/camera.hpp"
#include "crosscam/detsim.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/filter.hpp"
#include "crosscam/fusion.hpp"
#include "crosscam/geometry.hpp"
#include "crosscam/topology.hpp"
#include "crosscam/trust.hpp"

namespace crosscam {

struct Message {
    enum class Kind { frame_upload, state_share };
    Kind kind = Kind::frame_upload;
    std::string camera_id;
    int frame_idx = 0;
    std::vector<BBox> boxes;  // camera-local coordinates

    friend bool operator==(const Message&, const Message&) = default;
};

enum class RunModeKind { isolated, collaborative, knowledge_sharing };

struct RunMode {
    RunModeKind kind = RunModeKind::isolated;
    std::vector<std::string> subset;  // knowledge-sharing only; includes the supreme

    static const char* name(RunModeKind k) {
        switch (k) {
            case RunModeKind::isolated: return "isolated";
            case RunModeKind::collaborative: return "collaborative";
            case RunModeKind::knowledge_sharing: return "knowledge-sharing";
        }
        return "?";
    }
};

struct TrustParams {
    bool enabled = false;
    double learning_rate = 0.1;
    double initial_score = 0.5;
    double min_trust = 0.4;
    std::vector<std::string> adversarial_cameras;

    void validate(const std::string& path = "trust") const {
        if (!(learning_rate > 0.0 && learning_rate <= 1.0))
            throw ConfigError(path + ".learning_rate: must be in (0,1]");
        if (!(initial_score >= 0.0 && initial_score <= 1.0))
            throw ConfigError(path + ".initial_score: must be in [0,1]");
        if (!(min_trust >= 0.0 && min_trust <= 1.0))
            throw ConfigError(path + ".min_trust: must be in [0,1]");
    }
};

struct TopologyParams {
    double overlap_threshold = 0.3;
    SupremeMode supreme_mode = SupremeMode::static_score;
    double beta = 0.5;

    void validate(const std::string& path = "topology") const {
        if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0))
            throw ConfigError(path + ".overlap_threshold: must be in (0,1]");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw ConfigError(path + ".beta: must be in [0,1]");
    }
};

// Everything the event loop needs besides the scene and the seed.
struct ServerConfig {
    std::vector<CameraConfig> cameras;
    FilterParams filter;
    FusionParams fusion;
    TopologyParams topology;
    TrustParams trust;
    double person_height_m = kDefaultPersonHeightM;

    void validate() const {
        if (cameras.empty()) throw ScenarioError("no cameras configured");
        std::set<std::string> seen;
        for (size_t i = 0; i < cameras.size(); ++i) {
            cameras[i].validate("cameras[" + std::to_string(i) + "]");
            if (!seen.insert(cameras[i].camera_id).second)
                throw ScenarioError("duplicate camera_id " + cameras[i].camera_id);
        }
        filter.validate();
        fusion.validate();
        topology.validate();
        trust.validate();
        if (!(person_height_m > 0.0)) throw ScenarioError("person_height_m must be > 0");
    }
};

struct RunReport {
    std::string mode;
    std::uint64_t seed = 0;
    std::vector<std::string> subset;  // knowledge-sharing only
    std::string supreme;
    std::map<std::string, double> per_camera_fraction;
    double mean_fraction = 0.0;
    std::vector<std::tuple<int, int, int>> per_frame_counts;  // frame, predicted, gt
    double accuracy = 0.0;
    std::map<std::string, double> trust_snapshot;
    std::map<std::string, int> frames_transmitted;
    int frames_total = 0;
    nlohmann::json params_echo;
    std::vector<Message> messages;  // full trace, (frame, camera, kind) order
};

// Mean over frames of max(0, 1 - |pred - gt| / max(gt, 1)).
inline double compute_accuracy(const std::vector<std::pair<int, int>>& per_frame) {
    if (per_frame.empty()) throw EmptyInput("compute_accuracy: no frames");
    double sum = 0.0;
    for (const auto& [pred, gt] : per_frame) {
        const double denom = std::max(gt, 1);
        sum += std::max(0.0, 1.0 - std::abs(pred - gt) / denom);
    }
    return sum / static_cast<double>(per_frame.size());
}

// Point reflection of every box through the image center; the corruption an
// adversarial camera applies to its detections.
inline DetectionLog adversarial_invert(const DetectionLog& log, int image_w, int image_h) {
    DetectionLog out = log;
    for (auto& frame : out.frames) {
        for (auto& b : frame) {
            b.x_min = image_w - (b.x_min + b.width);
            b.y_min = image_h - (b.y_min + b.height);
        }
    }
    return out;
}

namespace detail {

struct RunContext {
    const WorldScene* scene = nullptr;
    const ServerConfig* cfg = nullptr;
    std::uint64_t seed = 0;
    std::vector<const CameraConfig*> cams;        // sorted by camera_id
    std::map<std::string, DetectionLog> gt_logs;  // per camera
    std::map<std::string, DetectionLog> det_logs;
    std::map<std::string, Homography> cam_to_supreme;  // non-supreme cameras
    std::string supreme;
    std::vector<Cluster> clusters;
    std::vector<int> gt_count;  // per frame: objects visible to >= 1 camera
};

// Builds logs, resolves the supreme camera and per-camera homographies into
// its frame, and precomputes the visible ground-truth count per frame. When
// `ingest` is given those logs replace synthesis (they must cover exactly the
// configured cameras over exactly the scene's frames).
inline RunContext prepare_run(const WorldScene& scene, const ServerConfig& cfg,
                              std::uint64_t seed,
                              const std::map<std::string, DetectionLog>* ingest) {
    cfg.validate();
    scene.validate();

    RunContext ctx;
    ctx.scene = &scene;
    ctx.cfg = &cfg;
    ctx.seed = seed;
    for (const auto& c : cfg.cameras) ctx.cams.push_back(&c);
    std::sort(ctx.cams.begin(), ctx.cams.end(),
              [](const CameraConfig* a, const CameraConfig* b) {
                  return a->camera_id < b->camera_id;
              });

    if (ingest != nullptr && ingest->size() != ctx.cams.size())
        throw ScenarioError("ingested logs do not cover the configured cameras");
    for (const CameraConfig* cam : ctx.cams) {
        DetectionLog gt = render_ground_truth(scene, *cam, cfg.person_height_m);
        DetectionLog det;
        if (ingest != nullptr) {
            auto it = ingest->find(cam->camera_id);
            if (it == ingest->end())
                throw ScenarioError("no ingested log for camera " + cam->camera_id);
            det = it->second;
            if (static_cast<int>(det.frames.size()) != scene.n_frames)
                throw ScenarioError("ingested log for camera " + cam->camera_id +
                                    " has wrong frame count");
            det.validate();
        } else {
            det = synthesize_detections(gt, *cam, seed);
            if (cam->adversarial ||
                std::find(cfg.trust.adversarial_cameras.begin(),
                          cfg.trust.adversarial_cameras.end(),
                          cam->camera_id) != cfg.trust.adversarial_cameras.end()) {
                det = adversarial_invert(det, cam->image_w, cam->image_h);
            }
        }
        ctx.gt_logs.emplace(cam->camera_id, std::move(gt));
        ctx.det_logs.emplace(cam->camera_id, std::move(det));
    }

    ctx.clusters = cluster_cameras(overlap_matrix(cfg.cameras), cfg.topology.overlap_threshold);

    if (cfg.topology.supreme_mode == SupremeMode::static_score) {
        std::vector<std::string> all_ids;
        for (const CameraConfig* cam : ctx.cams) all_ids.push_back(cam->camera_id);
        ctx.supreme = select_supreme(all_ids, cfg.cameras, cfg.topology.beta);
    }

    ctx.gt_count.assign(static_cast<size_t>(scene.n_frames), 0);
    for (int f = 0; f < scene.n_frames; ++f) {
        int visible = 0;
        for (const auto& obj : scene.objects) {
            if (!obj.alive_at(f)) continue;
            const Point2 p = obj.trajectory.at(f);
            for (const CameraConfig* cam : ctx.cams) {
                const Point2 img = apply_homography(cam->world_to_image, p);
                if (img.x >= 0.0 && img.x <= cam->image_w && img.y >= 0.0 &&
                    img.y <= cam->image_h) {
                    ++visible;
                    break;
                }
            }
        }
        ctx.gt_count[static_cast<size_t>(f)] = visible;
    }

    if (cfg.topology.supreme_mode == SupremeMode::validation_accuracy) {
        std::map<std::string, double> acc;
        for (const CameraConfig* cam : ctx.cams) {
            const DetectionLog& det = ctx.det_logs.at(cam->camera_id);
            const FilterResult fr = filter_stream(det, cfg.filter);
            std::vector<BBox> held;
            std::vector<std::pair<int, int>> counts;
            for (int f = 0; f < scene.n_frames; ++f) {
                if (fr.transmitted.count(f)) held = det.frames[static_cast<size_t>(f)];
                std::vector<BBox> kept = nms(held, cfg.fusion.nms_iou);
                int pred = 0;
                for (const auto& b : kept) {
                    if (b.class_id == 0 && b.confidence >= cfg.fusion.count_conf_threshold) ++pred;
                }
                counts.emplace_back(pred, ctx.gt_count[static_cast<size_t>(f)]);
            }
            acc[cam->camera_id] = compute_accuracy(counts);
        }
        std::vector<std::string> ids;
        for (const CameraConfig* cam : ctx.cams) ids.push_back(cam->camera_id);
        ctx.supreme = select_supreme(ids, acc);
    }

    const CameraConfig* sup_cam = nullptr;
    for (const CameraConfig* cam : ctx.cams) {
        if (cam->camera_id == ctx.supreme) sup_cam = cam;
    }
    if (sup_cam == nullptr) throw ScenarioError("supreme camera not found: " + ctx.supreme);
    for (const CameraConfig* cam : ctx.cams) {
        if (cam->camera_id == ctx.supreme) continue;
        ctx.cam_to_supreme.emplace(
            cam->camera_id,
            compose(sup_cam->world_to_image, invert_homography(cam->world_to_image)));
    }
    return ctx;
}

inline nlohmann::json params_echo_json(const ServerConfig& cfg, const RunContext& ctx) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : ctx.clusters) clusters.push_back(c.members);
    return {
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
        {"person_height_m", cfg.person_height_m},
        {"clusters", clusters},
    };
}

/**
 * The shared deterministic event loop. Frames advance in order; within a
 * frame cameras are processed in ascending camera_id. Transmission decisions
 * and the global track set are resolved first for the frame, then the frame
 * is evaluated (counts + trust feedback).
 */
inline RunReport run_event_loop(const WorldScene& scene, const ServerConfig& cfg,
                                const RunMode& mode, std::uint64_t seed,
                                const std::map<std::string, DetectionLog>* ingest = nullptr) {
    RunContext ctx = prepare_run(scene, cfg, seed, ingest);

    if (mode.kind == RunModeKind::knowledge_sharing) {
        if (mode.subset.empty())
            throw ScenarioError("knowledge-sharing subset must be non-empty");
        for (const auto& id : mode.subset) {
            if (ctx.det_logs.find(id) == ctx.det_logs.end())
                throw ScenarioError("knowledge-sharing subset names unknown camera " + id);
        }
        if (std::find(mode.subset.begin(), mode.subset.end(), ctx.supreme) == mode.subset.end())
            throw ScenarioError("knowledge-sharing subset must include the supreme camera " +
                                ctx.supreme);
    }

    const int n_frames = scene.n_frames;
    const bool collaborative_channel = mode.kind != RunModeKind::isolated;

    // per-camera local tracker state
    struct LocalState {
        std::vector<Track> tracks;
        int next_track_id = 0;
        std::vector<BBox> held;  // latest transmitted detections (camera coords)
        int transmitted = 0;
    };
    std::map<std::string, LocalState> local;
    for (const CameraConfig* cam : ctx.cams) local.emplace(cam->camera_id, LocalState{});

    std::vector<Track> global_tracks;  // supreme coordinates
    int global_next_id = 0;

    TrustLedger ledger(cfg.trust.learning_rate, cfg.trust.initial_score);

    RunReport report;
    report.mode = RunMode::name(mode.kind);
    report.seed = seed;
    report.subset = mode.subset;
    report.supreme = ctx.supreme;
    report.frames_total = n_frames;
    report.params_echo = params_echo_json(cfg, ctx);

    std::set<std::string> subset_set(mode.subset.begin(), mode.subset.end());

    std::vector<std::pair<int, int>> counts;
    counts.reserve(static_cast<size_t>(n_frames));

    for (int f = 0; f < n_frames; ++f) {
        // global tracks age out by frame time, not by transmission events
        std::erase_if(global_tracks,
                      [&](const Track& t) { return f - t.last_seen_frame > cfg.filter.ttl; });

        // --- transmission phase, ascending camera id ---
        for (const CameraConfig* cam : ctx.cams) {
            const std::string& id = cam->camera_id;
            LocalState& st = local.at(id);
            const std::vector<BBox>& boxes = ctx.det_logs.at(id).frames[static_cast<size_t>(f)];

            std::vector<int> new_boxes;
            step_tracker(st.tracks, boxes, cfg.filter, f, st.next_track_id, &new_boxes);

            bool transmit = false;
            if (!collaborative_channel || id == ctx.supreme) {
                transmit = !new_boxes.empty();
            } else {
                // a locally new box warrants transmission only when no other
                // camera has already put an overlapping box into the global
                // track set
                for (int bi : new_boxes) {
                    const BBox in_sup =
                        transform_box(ctx.cam_to_supreme.at(id), boxes[static_cast<size_t>(bi)]);
                    bool known = false;
                    for (const Track& t : global_tracks) {
                        if (t.last_box.camera_id != id &&
                            box_iou(t.last_box, in_sup) >= cfg.fusion.match_gate_iou) {
                            known = true;
                            break;
                        }
                    }
                    if (!known) {
                        transmit = true;
                        break;
                    }
                }
            }

            if (transmit) {
                st.held = boxes;
                st.transmitted += 1;
                report.messages.push_back({Message::Kind::frame_upload, id, f, boxes});
                if (collaborative_channel) {
                    std::vector<BBox> in_sup;
                    in_sup.reserve(boxes.size());
                    if (id == ctx.supreme) {
                        in_sup = boxes;
                    } else {
                        const Homography& h = ctx.cam_to_supreme.at(id);
                        for (const auto& b : boxes) in_sup.push_back(transform_box(h, b));
                    }
                    step_tracker(global_tracks, in_sup, cfg.filter, f, global_next_id);
                }
            }
        }

        // --- evaluation phase ---
        std::map<std::string, std::vector<BBox>> cluster_boxes;
        if (mode.kind == RunModeKind::knowledge_sharing) {
            for (const CameraConfig* cam : ctx.cams) {
                const std::string& id = cam->camera_id;
                if (!subset_set.count(id)) continue;
                const std::vector<BBox>& live = ctx.det_logs.at(id).frames[static_cast<size_t>(f)];
                report.messages.push_back({Message::Kind::state_share, id, f, live});
                cluster_boxes.emplace(id, live);
            }
        } else {
            for (const CameraConfig* cam : ctx.cams)
                cluster_boxes.emplace(cam->camera_id, local.at(cam->camera_id).held);
        }

        if (cfg.trust.enabled) {
            for (auto it = cluster_boxes.begin(); it != cluster_boxes.end();) {
                if (it->first != ctx.supreme && !ledger.gate(it->first, cfg.trust.min_trust)) {
                    it = cluster_boxes.erase(it);
                } else {
                    ++it;
                }
            }
        }
        if (cluster_boxes.find(ctx.supreme) == cluster_boxes.end())
            cluster_boxes.emplace(ctx.supreme, std::vector<BBox>{});

        const FusionOutcome outcome =
            fuse_with_stats(cluster_boxes, ctx.supreme, ctx.cam_to_supreme, cfg.fusion);
        const int predicted = count_people(outcome.boxes, cfg.fusion);
        counts.emplace_back(predicted, ctx.gt_count[static_cast<size_t>(f)]);
        report.per_frame_counts.emplace_back(f, predicted, ctx.gt_count[static_cast<size_t>(f)]);

        if (cfg.trust.enabled) {
            for (const auto& [id, shared] : outcome.stats.shared) {
                if (shared <= 0) continue;
                auto mit = outcome.stats.matched.find(id);
                const int matched = mit != outcome.stats.matched.end() ? mit->second : 0;
                ledger.update(id, static_cast<double>(matched) / shared);
            }
        }
    }

    for (const CameraConfig* cam : ctx.cams) {
        const LocalState& st = local.at(cam->camera_id);
        const double frac = n_frames > 0 ? static_cast<double>(st.transmitted) / n_frames : 0.0;
        report.per_camera_fraction[cam->camera_id] = frac;
        report.frames_transmitted[cam->camera_id] = st.transmitted;
        report.mean_fraction += frac;
    }
    report.mean_fraction /= static_cast<double>(ctx.cams.size());
    report.accuracy = compute_accuracy(counts);
    report.trust_snapshot = ledger.scores();
    return report;
}

}  // namespace detail

inline RunReport run_isolated(const WorldScene& scene, const ServerConfig& cfg,
                              std::uint64_t seed,
                              const std::map<std::string, DetectionLog>* ingest = nullptr) {
    return detail::run_event_loop(scene, cfg, {RunModeKind::isolated, {}}, seed, ingest);
}

inline RunReport run_collaborative(const WorldScene& scene, const ServerConfig& cfg,
                                   std::uint64_t seed,
                                   const std::map<std::string, DetectionLog>* ingest = nullptr) {
    return detail::run_event_loop(scene, cfg, {RunModeKind::collaborative, {}}, seed, ingest);
}

inline RunReport run_knowledge_sharing(const WorldScene& scene, const ServerConfig& cfg,
                                       const std::vector<std::string>& subset, std::uint64_t seed,
                                       const std::map<std::string, DetectionLog>* ingest = nullptr) {
    return detail::run_event_loop(scene, cfg, {RunModeKind::knowledge_sharing, subset}, seed,
                                  ingest);
}

// --- serialization ------------------------------------------------------

inline nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json per_frame = nlohmann::json::array();
    for (const auto& [f, pred, gt] : r.per_frame_counts) {
        per_frame.push_back({{"frame_idx", f}, {"predicted", pred}, {"ground_truth", gt}});
    }
    nlohmann::json j{
        {"mode", r.mode},
        {"seed", r.seed},
        {"supreme", r.supreme},
        {"accuracy", r.accuracy},
        {"mean_fraction", r.mean_fraction},
        {"per_camera_fraction", r.per_camera_fraction},
        {"frames_total", r.frames_total},
        {"frames_transmitted", r.frames_transmitted},
        {"per_frame_counts", std::move(per_frame)},
        {"trust_snapshot", r.trust_snapshot},
        {"params", r.params_echo},
    };
    if (!r.subset.empty()) j["subset"] = r.subset;
    return j;
}

inline void save_report(const RunReport& r, const std::string& dir) {
    {
        std::ofstream os(dir + "/report.json");
        if (!os) throw IoError("cannot open for writing: " + dir + "/report.json");
        os << report_to_json(r).dump(2) << '\n';
    }
    {
        std::ofstream os(dir + "/per_frame.csv");
        if (!os) throw IoError("cannot open for writing: " + dir + "/per_frame.csv");
        os << "frame_idx,predicted,ground_truth\n";
        for (const auto& [f, pred, gt] : r.per_frame_counts)
            os << f << ',' << pred << ',' << gt << '\n';
    }
    {
        std::ofstream os(dir + "/per_camera.csv");
        if (!os) throw IoError("cannot open for writing: " + dir + "/per_camera.csv");
        os << "camera_id,frames_total,frames_transmitted,fraction\n";
        char buf[64];
        for (const auto& [id, frac] : r.per_camera_fraction) {
            std::snprintf(buf, sizeof(buf), "%.10g", frac);
            os << id << ',' << r.frames_total << ',' << r.frames_transmitted.at(id) << ',' << buf
               << '\n';
        }
    }
}

// Message trace: newline-delimited JSON sorted by (frame_idx, camera_id),
// frame uploads before state shares within a pair.
inline void save_trace(const std::vector<Message>& messages, const std::string& path) {
    std::vector<const Message*> sorted;
    sorted.reserve(messages.size());
    for (const auto& m : messages) sorted.push_back(&m);
    std::stable_sort(sorted.begin(), sorted.end(), [](const Message* a, const Message* b) {
        return std::tie(a->frame_idx, a->camera_id, a->kind) <
               std::tie(b->frame_idx, b->camera_id, b->kind);
    });
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    for (const Message* m : sorted) {
        nlohmann::json boxes = nlohmann::json::array();
        for (const auto& b : m->boxes) {
            boxes.push_back({{"x_min", b.x_min},
                             {"y_min", b.y_min},
                             {"w", b.width},
                             {"h", b.height},
                             {"conf", b.confidence},
                             {"class_id", b.class_id}});
        }
        nlohmann::json rec{
            {"kind", m->kind == Message::Kind::frame_upload ? "frame_upload" : "state_share"},
            {"camera_id", m->camera_id},
            {"frame_idx", m->frame_idx},
            {"boxes", std::move(boxes)}};
        os << rec.dump() << '\n';
    }
}

inline std::vector<Message> load_trace(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    std::vector<Message> out;
    std::string line;
    int line_no = 0;
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
        if (!rec.contains("kind") || !rec["kind"].is_string())
            throw SchemaError(where + ": missing field 'kind'");
        if (!rec.contains("camera_id") || !rec["camera_id"].is_string())
            throw SchemaError(where + ": missing field 'camera_id'");
        if (!rec.contains("frame_idx") || !rec["frame_idx"].is_number_integer())
            throw SchemaError(where + ": missing field 'frame_idx'");
        if (!rec.contains("boxes") || !rec["boxes"].is_array())
            throw SchemaError(where + ": missing field 'boxes'");
        Message m;
        const std::string kind = rec["kind"].get<std::string>();
        if (kind == "frame_upload") {
            m.kind = Message::Kind::frame_upload;
        } else if (kind == "state_share") {
            m.kind = Message::Kind::state_share;
        } else {
            throw SchemaError(where + ": unknown kind '" + kind + "'");
        }
        m.camera_id = rec["camera_id"].get<std::string>();
        m.frame_idx = rec["frame_idx"].get<int>();
        for (const auto& jb : rec["boxes"]) {
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
            b.camera_id = m.camera_id;
            b.frame_idx = m.frame_idx;
            if (!b.valid()) throw SchemaError(where + ": invalid box");
            m.boxes.push_back(std::move(b));
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace crosscam
