#pragma once

#include <cmath>
#include <string>

#include "crosscam/errors.hpp"
#include "crosscam/geometry.hpp"

namespace crosscam {

/**
 * Synthetic detector error model, the stand-in for a DNN detector's
 * imperfections: Bernoulli misses, Gaussian geometry jitter, Poisson false
 * positives, noisy confidences.
 */
struct NoiseModel {
    double miss_prob = 0.0;        // [0,1]; 1 = total dropout
    double false_pos_rate = 0.0;   // expected false boxes per frame (Poisson)
    double center_jitter_std = 0.0;  // px
    double size_jitter_std = 0.0;    // px
    double conf_mean = 1.0;          // (0,1]
    double conf_std = 0.0;

    void validate(const std::string& path = "noise") const {
        if (!(miss_prob >= 0.0 && miss_prob <= 1.0))
            throw ConfigError(path + ".miss_prob: must be in [0,1]");
        if (!(false_pos_rate >= 0.0) || !std::isfinite(false_pos_rate))
            throw ConfigError(path + ".false_pos_rate: must be >= 0");
        if (!(center_jitter_std >= 0.0) || !std::isfinite(center_jitter_std))
            throw ConfigError(path + ".center_jitter_std: must be >= 0");
        if (!(size_jitter_std >= 0.0) || !std::isfinite(size_jitter_std))
            throw ConfigError(path + ".size_jitter_std: must be >= 0");
        if (!(conf_mean > 0.0 && conf_mean <= 1.0))
            throw ConfigError(path + ".conf_mean: must be in (0,1]");
        if (!(conf_std >= 0.0) || !std::isfinite(conf_std))
            throw ConfigError(path + ".conf_std: must be >= 0");
    }

    bool is_zero() const {
        return miss_prob == 0.0 && false_pos_rate == 0.0 && center_jitter_std == 0.0 &&
               size_jitter_std == 0.0 && conf_mean == 1.0 && conf_std == 0.0;
    }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/**
 * One camera: identity, sensor size, the ground-plane-to-image homography,
 * a resolution-quality score, its detector noise, and the vertical pixel
 * scale used to size person boxes (pixels of box height per meter of person
 * height are derived from it through the homography).
 */
struct CameraConfig {
    std::string camera_id;
    int image_w = 0;
    int image_h = 0;
    Homography world_to_image = Homography::identity();
    double quality = 1.0;        // [0,1]
    NoiseModel noise;
    double vertical_scale = 1.0;  // > 0; world-space head offset multiplier
    bool adversarial = false;     // emits inverted boxes when set

    void validate(const std::string& path = "camera") const {
        if (camera_id.empty()) throw ConfigError(path + ".camera_id: must be non-empty");
        if (image_w <= 0) throw ConfigError(path + ".image_w: must be > 0");
        if (image_h <= 0) throw ConfigError(path + ".image_h: must be > 0");
        if (!(quality >= 0.0 && quality <= 1.0))
            throw ConfigError(path + ".quality: must be in [0,1]");
        if (!(vertical_scale > 0.0) || !std::isfinite(vertical_scale))
            throw ConfigError(path + ".vertical_scale: must be > 0");
        noise.validate(path + ".noise");
    }
};

}  // namespace crosscam
