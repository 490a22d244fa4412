#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "crosscam/detsim.hpp"
#include "crosscam/server.hpp"

using namespace crosscam;

namespace {

WorldScene one_person_scene(Point2 at, int n_frames) {
    WorldScene s;
    s.n_frames = n_frames;
    WorldObject o;
    o.object_id = "p0";
    o.enter_frame = 0;
    o.exit_frame = n_frames - 1;
    for (int f = 0; f < n_frames; ++f) o.trajectory[f] = at;
    s.objects.push_back(std::move(o));
    return s;
}

CameraConfig simple_camera(const std::string& id = "cam1") {
    CameraConfig cam;
    cam.camera_id = id;
    cam.image_w = 100;
    cam.image_h = 100;
    cam.world_to_image = Homography::scaling(10.0, 10.0);  // 10 px per meter
    cam.vertical_scale = 0.2;
    return cam;
}

std::string temp_dir() {
    static int counter = 0;
    const std::string d =
        (std::filesystem::temp_directory_path() / ("detsim_t" + std::to_string(counter++)))
            .string();
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("render produces one bottom-centered box per visible object") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 3);
    const DetectionLog log = render_ground_truth(scene, simple_camera(), 1.7);
    REQUIRE(log.frames.size() == 3);
    for (int f = 0; f < 3; ++f) {
        REQUIRE(log.frames[static_cast<size_t>(f)].size() == 1);
        const BBox& b = log.frames[static_cast<size_t>(f)][0];
        // foot (5,4) -> (50,40); head (5, 4.34) -> (50, 43.4): height 3.4
        CHECK(b.height == Catch::Approx(3.4).epsilon(1e-12));
        CHECK(b.width == Catch::Approx(1.36).epsilon(1e-12));
        CHECK(b.x_min == Catch::Approx(49.32).epsilon(1e-12));
        CHECK(b.y_min == Catch::Approx(36.6).epsilon(1e-12));
        CHECK(b.confidence == 1.0);
        CHECK(b.class_id == 0);
        CHECK(b.camera_id == "cam1");
        CHECK(b.frame_idx == f);
    }
}

TEST_CASE("objects outside the image produce no box") {
    const WorldScene scene = one_person_scene({50.0, 50.0}, 2);  // maps to (500,500)
    const DetectionLog log = render_ground_truth(scene, simple_camera(), 1.7);
    CHECK(log.frames[0].empty());
    CHECK(log.frames[1].empty());
}

TEST_CASE("boundary foot points are visible (closed rectangle)") {
    const WorldScene scene = one_person_scene({10.0, 10.0}, 1);  // maps to (100,100) corner
    const DetectionLog log = render_ground_truth(scene, simple_camera(), 1.7);
    CHECK(log.frames[0].size() == 1);
}

TEST_CASE("box height never collapses below the floor") {
    CameraConfig cam = simple_camera();
    cam.vertical_scale = 1e-6;
    const WorldScene scene = one_person_scene({5.0, 4.0}, 1);
    const DetectionLog log = render_ground_truth(scene, cam, 1.7);
    REQUIRE(log.frames[0].size() == 1);
    CHECK(log.frames[0][0].height == 2.5);
}

TEST_CASE("objects absent before entry and after exit") {
    WorldScene s;
    s.n_frames = 6;
    WorldObject o;
    o.object_id = "p0";
    o.enter_frame = 2;
    o.exit_frame = 4;
    for (int f = 2; f <= 4; ++f) o.trajectory[f] = {5.0, 4.0};
    s.objects.push_back(o);
    const DetectionLog log = render_ground_truth(s, simple_camera(), 1.7);
    CHECK(log.frames[0].empty());
    CHECK(log.frames[1].empty());
    CHECK(log.frames[2].size() == 1);
    CHECK(log.frames[4].size() == 1);
    CHECK(log.frames[5].empty());
}

TEST_CASE("zero noise is a bit-exact identity") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 10);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    const NoiseModel zero;
    REQUIRE(zero.is_zero());
    const DetectionLog out = synthesize_detections(gt, zero, 100, 100, 7);
    CHECK(out == gt);
}

TEST_CASE("certain misses drop every detection") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 10);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    NoiseModel noise;
    noise.miss_prob = 1.0;
    const DetectionLog out = synthesize_detections(gt, noise, 100, 100, 7);
    for (const auto& frame : out.frames) CHECK(frame.empty());
}

TEST_CASE("synthesis is seed-deterministic and seed-sensitive") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 50);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    NoiseModel noise;
    noise.miss_prob = 0.3;
    noise.center_jitter_std = 2.0;
    noise.size_jitter_std = 1.0;
    noise.false_pos_rate = 0.5;
    noise.conf_mean = 0.6;
    noise.conf_std = 0.2;

    const DetectionLog a = synthesize_detections(gt, noise, 100, 100, 7);
    const DetectionLog b = synthesize_detections(gt, noise, 100, 100, 7);
    CHECK(a == b);
    const DetectionLog c = synthesize_detections(gt, noise, 100, 100, 8);
    CHECK_FALSE(a == c);
}

TEST_CASE("false positive rate follows its mean") {
    WorldScene scene;
    scene.n_frames = 2000;
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    NoiseModel noise;
    noise.false_pos_rate = 1.5;
    const DetectionLog out = synthesize_detections(gt, noise, 100, 100, 3);
    long total = 0;
    for (const auto& frame : out.frames) {
        total += static_cast<long>(frame.size());
        for (const auto& b : frame) {
            CHECK(b.x_min >= 0.0);
            CHECK(b.y_min >= 0.0);
            CHECK(b.x_max() <= 100.0);
            CHECK(b.y_max() <= 100.0);
        }
    }
    CHECK(static_cast<double>(total) / scene.n_frames == Catch::Approx(1.5).margin(0.1));
}

TEST_CASE("confidence stays clamped and boxes stay at least a pixel") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 300);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    NoiseModel noise;
    noise.size_jitter_std = 50.0;  // brutal
    noise.conf_mean = 0.5;
    noise.conf_std = 5.0;
    const DetectionLog out = synthesize_detections(gt, noise, 100, 100, 9);
    for (const auto& frame : out.frames) {
        for (const auto& b : frame) {
            CHECK(b.confidence >= 0.01);
            CHECK(b.confidence <= 1.0);
            CHECK(b.width >= 1.0);
            CHECK(b.height >= 1.0);
        }
    }
}

TEST_CASE("noise model validation names the offending field") {
    NoiseModel noise;
    noise.miss_prob = 1.5;
    CHECK_THROWS_WITH(noise.validate(), Catch::Matchers::ContainsSubstring("miss_prob"));
    noise.miss_prob = 0.0;
    noise.conf_mean = 0.0;
    CHECK_THROWS_WITH(noise.validate(), Catch::Matchers::ContainsSubstring("conf_mean"));
}

TEST_CASE("log save/load round-trips exactly") {
    const WorldScene scene = one_person_scene({5.0, 4.0}, 20);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    NoiseModel noise;
    noise.miss_prob = 0.2;
    noise.center_jitter_std = 1.0;
    noise.false_pos_rate = 0.3;
    noise.conf_mean = 0.7;
    noise.conf_std = 0.1;
    const DetectionLog out = synthesize_detections(gt, noise, 100, 100, 4);

    const std::string path = temp_dir() + "/log.jsonl";
    save_log(out, path);
    const DetectionLog back = load_log(path);
    CHECK(back == out);

    // identical bytes on re-save
    const std::string path2 = temp_dir() + "/log2.jsonl";
    save_log(back, path2);
    std::ifstream f1(path), f2(path2);
    const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}

TEST_CASE("load rejects malformed input with line numbers") {
    const std::string dir = temp_dir();

    {
        std::ofstream os(dir + "/bad_json.jsonl");
        os << R"({"camera_id":"c","frame_idx":0,"boxes":[]})" << "\n";
        os << "{nope\n";
    }
    CHECK_THROWS_MATCHES(load_log(dir + "/bad_json.jsonl"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("line 2")));

    {
        std::ofstream os(dir + "/missing_field.jsonl");
        os << R"({"camera_id":"c","boxes":[]})" << "\n";
    }
    CHECK_THROWS_AS(load_log(dir + "/missing_field.jsonl"), SchemaError);

    {
        std::ofstream os(dir + "/gap.jsonl");
        os << R"({"camera_id":"c","frame_idx":0,"boxes":[]})" << "\n";
        os << R"({"camera_id":"c","frame_idx":2,"boxes":[]})" << "\n";
    }
    CHECK_THROWS_AS(load_log(dir + "/gap.jsonl"), SchemaError);

    {
        std::ofstream os(dir + "/mixed_cam.jsonl");
        os << R"({"camera_id":"c","frame_idx":0,"boxes":[]})" << "\n";
        os << R"({"camera_id":"d","frame_idx":1,"boxes":[]})" << "\n";
    }
    CHECK_THROWS_AS(load_log(dir + "/mixed_cam.jsonl"), SchemaError);

    {
        std::ofstream os(dir + "/bad_box.jsonl");
        os << R"({"camera_id":"c","frame_idx":0,"boxes":[{"x_min":0,"y_min":0,"w":-1,"h":2,"conf":0.5,"class_id":0}]})"
           << "\n";
    }
    CHECK_THROWS_AS(load_log(dir + "/bad_box.jsonl"), SchemaError);

    CHECK_THROWS_AS(load_log(dir + "/does_not_exist.jsonl"), IoError);
}

TEST_CASE("adversarial inversion reflects through the image center") {
    const WorldScene scene = one_person_scene({2.0, 3.0}, 1);
    const DetectionLog gt = render_ground_truth(scene, simple_camera(), 1.7);
    REQUIRE(gt.frames[0].size() == 1);
    const DetectionLog inv = adversarial_invert(gt, 100, 100);
    const BBox& orig = gt.frames[0][0];
    const BBox& flip = inv.frames[0][0];
    CHECK(flip.x_min == Catch::Approx(100.0 - orig.x_max()).epsilon(1e-12));
    CHECK(flip.y_min == Catch::Approx(100.0 - orig.y_max()).epsilon(1e-12));
    CHECK(flip.width == orig.width);
    CHECK(flip.height == orig.height);

    // point reflection is an involution (up to rounding)
    const DetectionLog back = adversarial_invert(inv, 100, 100);
    const BBox& b = back.frames[0][0];
    CHECK(b.x_min == Catch::Approx(orig.x_min).margin(1e-9));
    CHECK(b.y_min == Catch::Approx(orig.y_min).margin(1e-9));
    CHECK(b.width == orig.width);
    CHECK(b.height == orig.height);
}

TEST_CASE("scene validation enforces trajectory coverage and speed") {
    WorldScene s;
    s.n_frames = 5;
    WorldObject o;
    o.object_id = "p0";
    o.enter_frame = 0;
    o.exit_frame = 4;
    for (int f = 0; f < 4; ++f) o.trajectory[f] = {0.0, 0.0};
    s.objects.push_back(o);
    CHECK_THROWS_AS(s.validate(), ConfigError);  // frame 4 missing

    s.objects[0].trajectory[4] = {100.0, 0.0};
    CHECK_THROWS_AS(s.validate(1.0), ConfigError);  // 100 m in one frame
    CHECK_NOTHROW(s.validate());                    // unbounded by default
}
