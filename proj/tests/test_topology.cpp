#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>
#include <vector>

#include "crosscam/topology.hpp"

using namespace crosscam;

namespace {

// Camera looking at the world strip [x0, x0+10] x [0, 10].
CameraConfig strip_camera(const std::string& id, double x0, double quality = 0.9) {
    CameraConfig cam;
    cam.camera_id = id;
    cam.image_w = 100;
    cam.image_h = 100;
    cam.world_to_image = compose(Homography::scaling(10.0, 10.0), Homography::translation(-x0, 0.0));
    cam.quality = quality;
    return cam;
}

}  // namespace

TEST_CASE("footprint maps the image rectangle back to the ground plane") {
    const CameraConfig cam = strip_camera("a", 0.0);
    const ConvexPolygon fp = fov_footprint(cam);
    CHECK(fp.area() == Catch::Approx(100.0).margin(1e-9));

    const CameraConfig shifted = strip_camera("b", 5.0);
    CHECK(fov_footprint(shifted).area() == Catch::Approx(100.0).margin(1e-9));
}

TEST_CASE("footprint handles projective cameras") {
    CameraConfig cam;
    cam.camera_id = "p";
    cam.image_w = 640;
    cam.image_h = 480;
    cam.world_to_image = Homography({57, 1.2, 30, 0.8, 52, 22, 0.0030, 0.0020, 1});
    CHECK(fov_footprint(cam).area() > 0.0);
}

TEST_CASE("overlap is normalized by the smaller footprint") {
    const std::vector<CameraConfig> cams = {strip_camera("a", 0.0), strip_camera("b", 5.0)};
    const OverlapMatrix m = overlap_matrix(cams);
    REQUIRE(m.size() == 2);
    CHECK(m.camera_ids == std::vector<std::string>{"a", "b"});
    // [0,10] vs [5,15]: intersection 50, smaller area 100
    CHECK(m.values[0][1] == Catch::Approx(0.5).margin(1e-9));
    CHECK(m.values[1][0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(m.values[0][0] == 1.0);
    CHECK(m.values[1][1] == 1.0);
}

TEST_CASE("a contained footprint scores full overlap") {
    CameraConfig wide = strip_camera("wide", 0.0);
    CameraConfig narrow;
    narrow.camera_id = "narrow";
    narrow.image_w = 100;
    narrow.image_h = 100;
    narrow.world_to_image = Homography::scaling(20.0, 20.0);  // sees [0,5] x [0,5]
    narrow.quality = 0.9;

    const OverlapMatrix m = overlap_matrix({wide, narrow});
    CHECK(m.values[0][1] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("disjoint footprints score zero") {
    const OverlapMatrix m = overlap_matrix({strip_camera("a", 0.0), strip_camera("d", 40.0)});
    CHECK(m.values[0][1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("overlap matrix is symmetric with unit diagonal") {
    std::vector<CameraConfig> cams;
    for (int i = 0; i < 5; ++i) {
        cams.push_back(strip_camera("cam" + std::to_string(i), 3.0 * i));
    }
    const OverlapMatrix m = overlap_matrix(cams);
    for (int i = 0; i < m.size(); ++i) {
        CHECK(m.values[static_cast<size_t>(i)][static_cast<size_t>(i)] == 1.0);
        for (int j = 0; j < m.size(); ++j) {
            const double v = m.values[static_cast<size_t>(i)][static_cast<size_t>(j)];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v == m.values[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        }
    }
    CHECK_THROWS_AS(overlap_matrix({}), ScenarioError);
}

TEST_CASE("clustering joins overlapping cameras transitively") {
    // a-b overlap 0.5, b-c overlap 0.3, a-c overlap 0; d is far away
    const std::vector<CameraConfig> cams = {strip_camera("a", 0.0), strip_camera("b", 5.0),
                                            strip_camera("c", 12.0), strip_camera("d", 40.0)};
    const OverlapMatrix m = overlap_matrix(cams);

    SECTION("low threshold chains a-b-c") {
        const auto clusters = cluster_cameras(m, 0.25);
        REQUIRE(clusters.size() == 2);
        CHECK(clusters[0].members == std::vector<std::string>{"a", "b", "c"});
        CHECK(clusters[1].members == std::vector<std::string>{"d"});
    }

    SECTION("higher threshold splits the chain") {
        const auto clusters = cluster_cameras(m, 0.4);
        REQUIRE(clusters.size() == 3);
        CHECK(clusters[0].members == std::vector<std::string>{"a", "b"});
        CHECK(clusters[1].members == std::vector<std::string>{"c"});
        CHECK(clusters[2].members == std::vector<std::string>{"d"});
    }

    SECTION("threshold boundary is inclusive") {
        OverlapMatrix exact;
        exact.camera_ids = {"a", "b"};
        exact.values = {{1.0, 0.5}, {0.5, 1.0}};
        const auto joined = cluster_cameras(exact, 0.5);
        REQUIRE(joined.size() == 1);
        CHECK(joined[0].members == std::vector<std::string>{"a", "b"});
        const auto split = cluster_cameras(exact, 0.5 + 1e-12);
        CHECK(split.size() == 2);
    }
}

TEST_CASE("clusters validate their supreme") {
    Cluster c;
    CHECK_THROWS_AS(c.validate(), ScenarioError);
    c.members = {"a", "b"};
    CHECK_NOTHROW(c.validate());  // supreme not chosen yet
    c.supreme = "z";
    CHECK_THROWS_AS(c.validate(), ScenarioError);
    c.supreme = "b";
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("accuracy-based supreme selection takes the best scorer") {
    const std::map<std::string, double> acc = {{"a", 0.7}, {"b", 0.9}, {"c", 0.8}};
    CHECK(select_supreme({"a", "b", "c"}, acc) == "b");
    CHECK(select_supreme({"a", "c"}, acc) == "c");

    const std::map<std::string, double> tied = {{"a", 0.9}, {"b", 0.9}};
    CHECK(select_supreme({"b", "a"}, tied) == "a");  // ties favor the smaller id

    CHECK_THROWS_AS(select_supreme({}, acc), MissingInput);
    CHECK_THROWS_AS(select_supreme({"a", "nope"}, acc), MissingInput);
}

TEST_CASE("static supreme selection trades area against quality") {
    CameraConfig big = strip_camera("big", 0.0, 0.5);     // area 100
    CameraConfig small;                                   // area 25
    small.camera_id = "small";
    small.image_w = 100;
    small.image_h = 100;
    small.world_to_image = Homography::scaling(20.0, 20.0);
    small.quality = 0.9;
    const std::vector<CameraConfig> cams = {big, small};
    const std::vector<std::string> members = {"big", "small"};

    // beta 0.5: big scores 0.5*1 + 0.5*0.5 = 0.75, small 0.5*0.25 + 0.5*0.9 = 0.575
    CHECK(select_supreme(members, cams, 0.5) == "big");
    // quality only
    CHECK(select_supreme(members, cams, 0.0) == "small");
    // area only
    CHECK(select_supreme(members, cams, 1.0) == "big");
}

TEST_CASE("static supreme selection breaks ties by id") {
    const std::vector<CameraConfig> cams = {strip_camera("y", 0.0, 0.8), strip_camera("x", 0.0, 0.8)};
    CHECK(select_supreme({"y", "x"}, cams, 0.5) == "x");
    CHECK_THROWS_AS(select_supreme({}, cams, 0.5), MissingInput);
    CHECK_THROWS_AS(select_supreme({"x", "ghost"}, cams, 0.5), MissingInput);
}
