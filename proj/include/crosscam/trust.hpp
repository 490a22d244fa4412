#pragma once

#include <map>
#include <string>
#include <utility>

#include "crosscam/errors.hpp"

namespace crosscam {

/**
 * Per-camera trust scores in [0,1], kept by the edge server and updated from
 * fusion-agreement feedback with an exponential moving average. Scores stay
 * in [0,1] because every update is a convex combination.
 */
class TrustLedger {
  public:
    TrustLedger() = default;
    TrustLedger(double learning_rate, double initial_score)
        : learning_rate_(learning_rate), initial_score_(initial_score) {
        if (!(learning_rate_ > 0.0 && learning_rate_ <= 1.0))
            throw ConfigError("trust.learning_rate: must be in (0,1]");
        if (!(initial_score_ >= 0.0 && initial_score_ <= 1.0))
            throw ConfigError("trust.initial_score: must be in [0,1]");
    }

    // agreement = fraction of the camera's shared boxes this frame that
    // matched the fused consensus.
    void update(const std::string& camera_id, double agreement) {
        if (!(agreement >= 0.0 && agreement <= 1.0))
            throw InvalidAgreement("trust update: agreement must be in [0,1]");
        double& score = scores_.try_emplace(camera_id, initial_score_).first->second;
        score = (1.0 - learning_rate_) * score + learning_rate_ * agreement;
    }

    double score_of(const std::string& camera_id) const {
        auto it = scores_.find(camera_id);
        return it != scores_.end() ? it->second : initial_score_;
    }

    // Shares from cameras below min_trust are dropped before fusion.
    bool gate(const std::string& camera_id, double min_trust = 0.4) const {
        return score_of(camera_id) >= min_trust;
    }

    const std::map<std::string, double>& scores() const { return scores_; }
    double learning_rate() const { return learning_rate_; }
    double initial_score() const { return initial_score_; }

  private:
    std::map<std::string, double> scores_;
    double learning_rate_ = 0.1;
    double initial_score_ = 0.5;
};

struct TrustBand {
    std::string_view description;
    std::string_view label;
};

// Score bands around the anchor points 0, 0.3, 0.5, 0.7, 1.0 (boundaries are
// the midpoints between anchors).
inline TrustBand trust_label(double score) {
    if (!(score >= 0.0 && score <= 1.0))
        throw OutOfRange("trust_label: score must be in [0,1]");
    if (score < 0.15) return {"Completely untrustworthy", "Extremely harmful"};
    if (score < 0.40) return {"Risk trust", "Risky"};
    if (score < 0.60) return {"Semi-trust", "Semi-Safe"};
    if (score < 0.85) return {"Trustworthy", "Safe"};
    return {"Completely Trustworthy", "Completely Safe"};
}

}  // namespace crosscam
