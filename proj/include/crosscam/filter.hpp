#pragma once

#include <algorithm>
#include <set>
#include <tuple>
#include <vector>

#include "crosscam/detsim.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/geometry.hpp"

namespace crosscam {

// Tracker state for one previously seen object.
struct Track {
    int track_id = 0;
    BBox last_box;
    int last_seen_frame = 0;
    int age = 0;  // frames matched since creation
};

struct FilterParams {
    double match_iou = 0.3;  // (0,1)
    int ttl = 15;            // frames a track survives unseen, >= 1

    void validate(const std::string& path = "filter") const {
        if (!(match_iou > 0.0 && match_iou < 1.0))
            throw ConfigError(path + ".match_iou: must be in (0,1)");
        if (ttl < 1) throw ConfigError(path + ".ttl: must be >= 1");
    }
};

struct FilterResult {
    std::set<int> transmitted;
    double fraction = 0.0;  // |transmitted| / n_frames
    std::vector<std::pair<int, int>> new_object_events;  // (frame_idx, count)
};

/**
 * Greedy IoU tracker with stable id assignment. Per-frame mutable state lives
 * in `tracks`; ids come from `next_track_id` so replays are deterministic.
 *
 * One step: expire tracks unseen for more than ttl frames, then match
 * candidate (track, box) pairs with IoU >= match_iou greedily by descending
 * IoU (ties: lower track_id, then lower box index). Matched tracks refresh;
 * every unmatched box opens a new track. Returns the number of new tracks,
 * which is the frame's "new object" count. When `new_box_indices` is given it
 * receives the indices into `frame_boxes` that opened tracks, ascending.
 */
inline int step_tracker(std::vector<Track>& tracks, const std::vector<BBox>& frame_boxes,
                        const FilterParams& params, int frame_idx, int& next_track_id,
                        std::vector<int>* new_box_indices = nullptr) {
    if (new_box_indices != nullptr) new_box_indices->clear();
    std::erase_if(tracks, [&](const Track& t) { return frame_idx - t.last_seen_frame > params.ttl; });

    struct Candidate {
        double iou;
        int track_pos;
        int box_idx;
    };
    std::vector<Candidate> candidates;
    for (size_t ti = 0; ti < tracks.size(); ++ti) {
        for (size_t bi = 0; bi < frame_boxes.size(); ++bi) {
            const double iou = box_iou(tracks[ti].last_box, frame_boxes[bi]);
            if (iou >= params.match_iou)
                candidates.push_back({iou, static_cast<int>(ti), static_cast<int>(bi)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (tracks[a.track_pos].track_id != tracks[b.track_pos].track_id)
            return tracks[a.track_pos].track_id < tracks[b.track_pos].track_id;
        return a.box_idx < b.box_idx;
    });

    std::vector<bool> track_used(tracks.size(), false);
    std::vector<bool> box_used(frame_boxes.size(), false);
    for (const auto& c : candidates) {
        if (track_used[c.track_pos] || box_used[c.box_idx]) continue;
        track_used[c.track_pos] = true;
        box_used[c.box_idx] = true;
        Track& t = tracks[c.track_pos];
        t.last_box = frame_boxes[c.box_idx];
        t.last_seen_frame = frame_idx;
        t.age += 1;
    }

    int new_count = 0;
    for (size_t bi = 0; bi < frame_boxes.size(); ++bi) {
        if (box_used[bi]) continue;
        tracks.push_back({next_track_id++, frame_boxes[bi], frame_idx, 0});
        if (new_box_indices != nullptr) new_box_indices->push_back(static_cast<int>(bi));
        ++new_count;
    }
    return new_count;
}

// Runs the tracker over a whole log; a frame is transmitted exactly when it
// contains at least one new bounding box.
inline FilterResult filter_stream(const DetectionLog& log, const FilterParams& params) {
    FilterResult result;
    std::vector<Track> tracks;
    int next_track_id = 0;
    const int n_frames = static_cast<int>(log.frames.size());
    for (int f = 0; f < n_frames; ++f) {
        const int new_count = step_tracker(tracks, log.frames[static_cast<size_t>(f)], params, f,
                                           next_track_id);
        if (new_count > 0) {
            result.transmitted.insert(f);
            result.new_object_events.emplace_back(f, new_count);
        }
    }
    result.fraction = n_frames > 0
                          ? static_cast<double>(result.transmitted.size()) / n_frames
                          : 0.0;
    return result;
}

}  // namespace crosscam
