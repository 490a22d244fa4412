#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crosscam/errors.hpp"
#include "crosscam/scenario.hpp"
#include "crosscam/server.hpp"

namespace crosscam {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

namespace detail {

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

// Writes det_<id>.jsonl and gt_<id>.jsonl per camera into out_dir.
inline void cmd_generate(const ScenarioConfig& cfg, const std::string& out_dir) {
    detail::ensure_dir(out_dir);
    const WorldScene scene = build_scene(cfg);
    for (const auto& cam : cfg.cameras) {
        const DetectionLog gt = render_ground_truth(scene, cam, cfg.person_height_m);
        DetectionLog det = synthesize_detections(gt, cam, cfg.seed);
        if (cam.adversarial ||
            std::find(cfg.trust.adversarial_cameras.begin(), cfg.trust.adversarial_cameras.end(),
                      cam.camera_id) != cfg.trust.adversarial_cameras.end()) {
            det = adversarial_invert(det, cam.image_w, cam.image_h);
        }
        save_log(gt, out_dir + "/gt_" + cam.camera_id + ".jsonl");
        save_log(det, out_dir + "/det_" + cam.camera_id + ".jsonl");
    }
}

// Loads det_<id>.jsonl for every configured camera from logs_dir.
inline std::map<std::string, DetectionLog> load_detection_logs(const ScenarioConfig& cfg,
                                                               const std::string& logs_dir) {
    std::map<std::string, DetectionLog> logs;
    for (const auto& cam : cfg.cameras) {
        const std::string path = logs_dir + "/det_" + cam.camera_id + ".jsonl";
        logs.emplace(cam.camera_id, load_log(path));
    }
    return logs;
}

inline RunReport execute_run(const ScenarioConfig& cfg, RunModeKind kind,
                             const std::vector<std::string>& subset,
                             const std::map<std::string, DetectionLog>* ingest = nullptr) {
    const WorldScene scene = build_scene(cfg);
    const ServerConfig server = cfg.server_config();
    switch (kind) {
        case RunModeKind::isolated:
            return run_isolated(scene, server, cfg.seed, ingest);
        case RunModeKind::collaborative:
            return run_collaborative(scene, server, cfg.seed, ingest);
        case RunModeKind::knowledge_sharing: {
            std::vector<std::string> use = subset;
            if (use.empty()) {
                for (const auto& cam : cfg.cameras) use.push_back(cam.camera_id);
            }
            return run_knowledge_sharing(scene, server, use, cfg.seed, ingest);
        }
    }
    throw ScenarioError("unknown run mode");
}

// Full run command: report.json, per_frame.csv, per_camera.csv, messages.jsonl.
inline RunReport cmd_run(const ScenarioConfig& cfg, RunModeKind kind,
                         const std::vector<std::string>& subset, const std::string& out_dir,
                         const std::string& logs_dir = "") {
    detail::ensure_dir(out_dir);
    RunReport report;
    if (!logs_dir.empty()) {
        const auto logs = load_detection_logs(cfg, logs_dir);
        report = execute_run(cfg, kind, subset, &logs);
    } else {
        report = execute_run(cfg, kind, subset);
    }
    save_report(report, out_dir);
    save_trace(report.messages, out_dir + "/messages.jsonl");
    return report;
}

struct SweepRow {
    int subset_size = 0;
    std::vector<std::string> cameras;
    int seeds = 0;
    double mean_accuracy = 0.0;
    double mean_fraction = 0.0;
    std::vector<double> accuracies;  // per seed
};

/**
 * Knowledge-sharing subset sweep: for k = 1..n cameras (accreted in
 * descending supreme-score order) run `n_seeds` seeds and average accuracy.
 */
inline std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg, int n_seeds) {
    if (cfg.cameras.size() < 2) throw ConfigError("sweep requires >= 2 cameras");
    if (n_seeds < 1) throw ConfigError("sweep requires >= 1 seed");
    const std::vector<std::string> order = sharing_order(cfg);
    std::vector<SweepRow> rows;
    for (size_t k = 1; k <= order.size(); ++k) {
        SweepRow row;
        row.subset_size = static_cast<int>(k);
        row.cameras.assign(order.begin(), order.begin() + static_cast<long>(k));
        std::vector<std::string> subset = row.cameras;
        std::sort(subset.begin(), subset.end());
        row.seeds = n_seeds;
        for (int s = 0; s < n_seeds; ++s) {
            ScenarioConfig run_cfg = cfg;
            run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(s);
            const RunReport r =
                execute_run(run_cfg, RunModeKind::knowledge_sharing, subset);
            row.accuracies.push_back(r.accuracy);
            row.mean_accuracy += r.accuracy;
            row.mean_fraction += r.mean_fraction;
        }
        row.mean_accuracy /= n_seeds;
        row.mean_fraction /= n_seeds;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir, int n_seeds) {
    const std::vector<SweepRow> rows = sweep_rows(cfg, n_seeds);
    detail::ensure_dir(out_dir);
    {
        std::ofstream os(out_dir + "/sweep.csv");
        if (!os) throw IoError("cannot open for writing: " + out_dir + "/sweep.csv");
        os << "subset_size,cameras,seeds,mean_accuracy,mean_fraction\n";
        for (const auto& row : rows) {
            os << row.subset_size << ',';
            for (size_t i = 0; i < row.cameras.size(); ++i) {
                if (i > 0) os << ';';
                os << row.cameras[i];
            }
            os << ',' << row.seeds << ',' << detail::format_double(row.mean_accuracy) << ','
               << detail::format_double(row.mean_fraction) << '\n';
        }
    }
    {
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& row : rows) {
            jrows.push_back({{"subset_size", row.subset_size},
                             {"cameras", row.cameras},
                             {"seeds", row.seeds},
                             {"mean_accuracy", row.mean_accuracy},
                             {"mean_fraction", row.mean_fraction},
                             {"accuracies", row.accuracies}});
        }
        std::ofstream os(out_dir + "/sweep.json");
        if (!os) throw IoError("cannot open for writing: " + out_dir + "/sweep.json");
        os << nlohmann::json{{"base_seed", cfg.seed}, {"rows", std::move(jrows)}}.dump(2) << '\n';
    }
}

inline ScenarioConfig make_preset(const std::string& name, bool zero) {
    if (name == "salsa-like" || name == "salsa_like")
        return zero ? zero_noise(salsa_like_preset()) : salsa_like_preset();
    throw ConfigError("unknown preset '" + name + "' (available: salsa-like)");
}

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"deterministic multi-camera collaboration simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string logs_dir;
    std::string mode_str = "isolated";
    std::string subset_str;
    std::string preset_name = "salsa-like";
    bool preset_zero = false;
    int n_seeds = 20;
    std::optional<std::uint64_t> seed_override;

    CLI::App* gen = app.add_subcommand("generate", "write per-camera detection + truth logs");
    gen->add_option("--config", config_path, "scenario config path")->required();
    gen->add_option("--out", out_dir, "output directory");
    gen->add_option("--seed", seed_override, "override config seed");

    CLI::App* run = app.add_subcommand("run", "execute one mode and write reports");
    run->add_option("--config", config_path, "scenario config path")->required();
    run->add_option("--mode", mode_str, "isolated | collaborative | knowledge-sharing")
        ->check(CLI::IsMember({"isolated", "collaborative", "knowledge-sharing"}));
    run->add_option("--subset", subset_str, "comma-separated camera ids (knowledge-sharing)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override config seed");
    run->add_option("--logs", logs_dir, "ingest detection logs from this directory");

    CLI::App* sweep = app.add_subcommand("sweep", "knowledge-sharing subset-size sweep");
    sweep->add_option("--config", config_path, "scenario config path")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seeds", n_seeds, "number of seeds to average");
    sweep->add_option("--seed", seed_override, "override config base seed");

    CLI::App* preset = app.add_subcommand("preset", "write a built-in scenario config");
    preset->add_option("--name", preset_name, "preset name (salsa-like)");
    preset->add_option("--out", out_dir, "output directory");
    preset->add_flag("--zero-noise", preset_zero, "zero out all detector noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (preset->parsed()) {
            detail::ensure_dir(out_dir);
            const ScenarioConfig cfg = make_preset(preset_name, preset_zero);
            const std::string path = out_dir + "/" + cfg.name + ".json";
            save_scenario(cfg, path);
            std::printf("wrote %s\n", path.c_str());
            return kExitOk;
        }

        ScenarioConfig cfg = load_scenario(config_path);
        if (seed_override) cfg.seed = *seed_override;

        if (gen->parsed()) {
            cmd_generate(cfg, out_dir);
            std::printf("wrote %zu log files to %s\n", cfg.cameras.size() * 2, out_dir.c_str());
        } else if (run->parsed()) {
            RunModeKind kind = RunModeKind::isolated;
            if (mode_str == "collaborative") kind = RunModeKind::collaborative;
            if (mode_str == "knowledge-sharing") kind = RunModeKind::knowledge_sharing;
            std::vector<std::string> subset;
            if (!subset_str.empty()) {
                std::string cur;
                for (char ch : subset_str + ",") {
                    if (ch == ',') {
                        if (!cur.empty()) subset.push_back(cur);
                        cur.clear();
                    } else {
                        cur += ch;
                    }
                }
            }
            const RunReport report = cmd_run(cfg, kind, subset, out_dir, logs_dir);
            std::printf("mode=%s supreme=%s accuracy=%s mean_fraction=%s\n", report.mode.c_str(),
                        report.supreme.c_str(), detail::format_double(report.accuracy).c_str(),
                        detail::format_double(report.mean_fraction).c_str());
        } else if (sweep->parsed()) {
            cmd_sweep(cfg, out_dir, n_seeds);
            std::printf("wrote sweep.csv and sweep.json to %s\n", out_dir.c_str());
        }
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUserError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternalError;
    }
}

}  // namespace crosscam
