#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crosscam/errors.hpp"
#include "crosscam/geometry.hpp"

namespace crosscam {

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
    double total_cost = 0.0;
};

struct FusionParams {
    double match_gate_iou = 0.2;       // (0,1)
    double boost_alpha = 0.25;         // >= 0
    double nms_iou = 0.5;              // (0,1)
    double count_conf_threshold = 0.5; // [0,1]

    void validate(const std::string& path = "fusion") const {
        if (!(match_gate_iou > 0.0 && match_gate_iou < 1.0))
            throw ConfigError(path + ".match_gate_iou: must be in (0,1)");
        if (!(boost_alpha >= 0.0) || !std::isfinite(boost_alpha))
            throw ConfigError(path + ".boost_alpha: must be >= 0");
        if (!(nms_iou > 0.0 && nms_iou < 1.0))
            throw ConfigError(path + ".nms_iou: must be in (0,1)");
        if (!(count_conf_threshold >= 0.0 && count_conf_threshold <= 1.0))
            throw ConfigError(path + ".count_conf_threshold: must be in [0,1]");
    }
};

// A box in supreme-camera coordinates plus the cameras that agree on it.
struct FusedBox {
    BBox box;
    int support = 1;
    std::set<std::string> source_cameras;
};

namespace detail {

// Shortest-augmenting-path solver (the O(n^3) Jonker-Volgenant variant).
// Requires nr <= nc; returns assigned column per row plus the dual vectors.
struct LapResult {
    std::vector<int> col4row;
    std::vector<double> u, v;
    double total = 0.0;
};

inline LapResult lap_solve(int nr, int nc, const std::vector<double>& cost /* nr*nc */) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    LapResult res;
    res.u.assign(nr, 0.0);
    res.v.assign(nc, 0.0);
    res.col4row.assign(nr, -1);
    std::vector<int> row4col(nc, -1);
    std::vector<int> path(nc, -1);
    std::vector<double> shortest(nc, 0.0);
    std::vector<char> sr(nr), sc(nc);

    for (int cur_row = 0; cur_row < nr; ++cur_row) {
        std::fill(shortest.begin(), shortest.end(), kInf);
        std::fill(sr.begin(), sr.end(), 0);
        std::fill(sc.begin(), sc.end(), 0);
        double min_val = 0.0;
        int i = cur_row;
        int sink = -1;
        while (sink == -1) {
            sr[i] = 1;
            int index = -1;
            double lowest = kInf;
            for (int j = 0; j < nc; ++j) {
                if (sc[j]) continue;
                const double r = min_val + cost[static_cast<size_t>(i) * nc + j] - res.u[i] - res.v[j];
                if (r < shortest[j]) {
                    path[j] = i;
                    shortest[j] = r;
                }
                if (shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == -1)) {
                    lowest = shortest[j];
                    index = j;
                }
            }
            min_val = lowest;
            const int j = index;
            sc[j] = 1;
            if (row4col[j] == -1) {
                sink = j;
            } else {
                i = row4col[j];
            }
        }
        res.u[cur_row] += min_val;
        for (int k = 0; k < nr; ++k) {
            if (sr[k] && k != cur_row) res.u[k] += min_val - shortest[res.col4row[k]];
        }
        for (int j = 0; j < nc; ++j) {
            if (sc[j]) res.v[j] -= min_val - shortest[j];
        }
        int j = sink;
        while (true) {
            const int pi = path[j];
            row4col[j] = pi;
            std::swap(res.col4row[pi], j);
            if (pi == cur_row) break;
        }
    }
    for (int r = 0; r < nr; ++r) res.total += cost[static_cast<size_t>(r) * nc + res.col4row[r]];
    return res;
}

// Minimum assignment value over an arbitrary row/column subset of `cost`,
// together with the chosen pairs (in original indices, sorted by row).
inline std::pair<double, std::vector<std::pair<int, int>>> lap_subset(
    const std::vector<std::vector<double>>& cost, const std::vector<int>& rows,
    const std::vector<int>& cols) {
    const int nr = static_cast<int>(rows.size());
    const int nc = static_cast<int>(cols.size());
    const bool flip = nr > nc;
    const int a = flip ? nc : nr;
    const int b = flip ? nr : nc;
    std::vector<double> sub(static_cast<size_t>(a) * b);
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) {
            sub[static_cast<size_t>(i) * b + j] =
                flip ? cost[static_cast<size_t>(rows[j])][static_cast<size_t>(cols[i])]
                     : cost[static_cast<size_t>(rows[i])][static_cast<size_t>(cols[j])];
        }
    }
    const LapResult r = lap_solve(a, b, sub);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(a));
    for (int i = 0; i < a; ++i) {
        const int j = r.col4row[i];
        if (flip) {
            pairs.emplace_back(rows[static_cast<size_t>(j)], cols[static_cast<size_t>(i)]);
        } else {
            pairs.emplace_back(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return {r.total, pairs};
}

}  // namespace detail

/**
 * Minimum-cost one-to-one assignment of min(rows, cols) pairs.
 *
 * Among equal-cost optima the lexicographically smallest pair list wins.
 * The solver first runs one shortest-augmenting-path pass; ties are then
 * resolved slot by slot, trying only pairs with zero reduced cost (the only
 * pairs any optimum can use, by complementary slackness) and confirming each
 * candidate with a constrained re-solve. Unique optima never re-solve.
 */
inline Assignment hungarian(const std::vector<std::vector<double>>& cost) {
    if (cost.empty() || cost[0].empty()) throw EmptyMatrix("cost matrix must be non-empty");
    const int nr = static_cast<int>(cost.size());
    const int nc = static_cast<int>(cost[0].size());
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != nc) throw Error("cost matrix rows differ in length");
        for (double v : row) {
            if (!std::isfinite(v)) throw Error("cost matrix entry not finite");
        }
    }

    // Initial solve; duals come back in the solver's (transposed if needed)
    // orientation and are mapped to a reduced-cost oracle on the original.
    const bool flip = nr > nc;
    const int a = flip ? nc : nr;
    const int b = flip ? nr : nc;
    std::vector<double> flat(static_cast<size_t>(a) * b);
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) {
            flat[static_cast<size_t>(i) * b + j] =
                flip ? cost[static_cast<size_t>(j)][static_cast<size_t>(i)]
                     : cost[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    const detail::LapResult solved = detail::lap_solve(a, b, flat);
    const double best_total = solved.total;
    const double tol = 1e-9 * (1.0 + std::abs(best_total));

    auto reduced_cost = [&](int r, int c) {
        return flip ? cost[static_cast<size_t>(r)][static_cast<size_t>(c)] - solved.u[c] - solved.v[r]
                    : cost[static_cast<size_t>(r)][static_cast<size_t>(c)] - solved.u[r] - solved.v[c];
    };

    std::vector<std::pair<int, int>> incumbent;
    for (int i = 0; i < a; ++i) {
        const int j = solved.col4row[i];
        incumbent.emplace_back(flip ? j : i, flip ? i : j);
    }
    std::sort(incumbent.begin(), incumbent.end());

    // Lexicographic refinement over the pair-list slots.
    const int n_pairs = static_cast<int>(incumbent.size());
    std::vector<std::pair<int, int>> fixed;
    double fixed_cost = 0.0;
    std::vector<char> col_used(nc, 0);
    int min_row = 0;
    for (int slot = 0; slot < n_pairs; ++slot) {
        const std::pair<int, int> inc = incumbent[static_cast<size_t>(slot)];
        std::pair<int, int> chosen = inc;
        bool replaced = false;
        for (int r = min_row; !replaced && r <= inc.first; ++r) {
            for (int c = 0; c < nc; ++c) {
                if (col_used[c]) continue;
                if (std::make_pair(r, c) >= inc) break;
                if (reduced_cost(r, c) > tol) continue;
                // remaining problem: rows beyond r, columns still free
                std::vector<int> rows_left, cols_left;
                for (int rr = r + 1; rr < nr; ++rr) rows_left.push_back(rr);
                for (int cc = 0; cc < nc; ++cc) {
                    if (!col_used[cc] && cc != c) cols_left.push_back(cc);
                }
                const int need = n_pairs - slot - 1;
                if (static_cast<int>(rows_left.size()) < need ||
                    static_cast<int>(cols_left.size()) < need) {
                    continue;
                }
                double completion = 0.0;
                std::vector<std::pair<int, int>> rest;
                if (need > 0) {
                    auto [val, pairs] = detail::lap_subset(cost, rows_left, cols_left);
                    completion = val;
                    rest = std::move(pairs);
                }
                const double total = fixed_cost + cost[static_cast<size_t>(r)][static_cast<size_t>(c)] + completion;
                if (total <= best_total + tol) {
                    chosen = {r, c};
                    // the witness completion becomes the incumbent tail
                    incumbent.resize(static_cast<size_t>(slot));
                    incumbent.push_back(chosen);
                    incumbent.insert(incumbent.end(), rest.begin(), rest.end());
                    replaced = true;
                    break;
                }
            }
        }
        fixed.push_back(chosen);
        fixed_cost += cost[static_cast<size_t>(chosen.first)][static_cast<size_t>(chosen.second)];
        col_used[chosen.second] = 1;
        min_row = chosen.first + 1;
    }

    Assignment out;
    out.pairs = std::move(fixed);
    out.total_cost = fixed_cost;
    return out;
}

/**
 * Matches collaborator boxes (already transformed into supreme coordinates)
 * against the supreme list: Hungarian on cost 1 - IoU, then pairs whose IoU
 * falls below the gate are discarded.
 */
inline std::vector<std::pair<int, int>> match_boxes(const std::vector<BBox>& supreme_boxes,
                                                    const std::vector<BBox>& other_boxes,
                                                    const FusionParams& params) {
    if (supreme_boxes.empty() || other_boxes.empty()) return {};
    std::vector<std::vector<double>> cost(supreme_boxes.size(),
                                          std::vector<double>(other_boxes.size()));
    for (size_t i = 0; i < supreme_boxes.size(); ++i) {
        for (size_t j = 0; j < other_boxes.size(); ++j) {
            cost[i][j] = 1.0 - box_iou(supreme_boxes[i], other_boxes[j]);
        }
    }
    const Assignment a = hungarian(cost);
    std::vector<std::pair<int, int>> out;
    for (const auto& [i, j] : a.pairs) {
        if (box_iou(supreme_boxes[static_cast<size_t>(i)], other_boxes[static_cast<size_t>(j)]) >=
            params.match_gate_iou) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

// Multi-camera agreement raises confidence: c -> min(1, c * (1 + alpha*(support-1))).
inline std::vector<FusedBox> boost_confidence(std::vector<FusedBox> boxes,
                                              const FusionParams& params) {
    for (auto& fb : boxes) {
        if (fb.support > 1) {
            fb.box.confidence = std::min(
                1.0, fb.box.confidence * (1.0 + params.boost_alpha * (fb.support - 1)));
        }
    }
    return boxes;
}

// Greedy NMS: keep the highest-confidence box, suppress overlaps at or above
// the threshold, repeat. Ties sort by lower x_min, then lower y_min.
inline std::vector<BBox> nms(const std::vector<BBox>& boxes, double nms_iou) {
    std::vector<int> order(boxes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int ia, int ib) {
        const BBox& a = boxes[static_cast<size_t>(ia)];
        const BBox& b = boxes[static_cast<size_t>(ib)];
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.x_min != b.x_min) return a.x_min < b.x_min;
        return a.y_min < b.y_min;
    });
    std::vector<BBox> kept;
    for (int idx : order) {
        const BBox& candidate = boxes[static_cast<size_t>(idx)];
        bool suppressed = false;
        for (const BBox& k : kept) {
            if (box_iou(candidate, k) >= nms_iou) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(candidate);
    }
    return kept;
}

// Per-camera fusion feedback: how many boxes a camera shared and how many
// landed in a fused box confirmed by at least one other camera.
struct FusionStats {
    std::map<std::string, int> shared;
    std::map<std::string, int> matched;
};

struct FusionOutcome {
    std::vector<FusedBox> boxes;
    FusionStats stats;
};

/**
 * Cross-camera fusion in the supreme camera's coordinates:
 *   1. transform every collaborator's boxes into supreme coordinates;
 *   2. Hungarian-match each collaborator against the supreme list (star
 *      topology); matches merge into the supreme box, raising its support;
 *      unmatched collaborator boxes enter with support 1;
 *   3. boost confidences by support;
 *   4. final NMS over the merged set.
 */
inline FusionOutcome fuse_with_stats(const std::map<std::string, std::vector<BBox>>& cluster_boxes,
                                     const std::string& supreme_id,
                                     const std::map<std::string, Homography>& cam_to_supreme,
                                     const FusionParams& params) {
    auto sup_it = cluster_boxes.find(supreme_id);
    if (sup_it == cluster_boxes.end())
        throw ScenarioError("fuse: cluster_boxes missing supreme camera " + supreme_id);

    FusionOutcome out;
    const std::vector<BBox>& supreme_boxes = sup_it->second;
    out.stats.shared[supreme_id] = static_cast<int>(supreme_boxes.size());

    std::vector<FusedBox> fused;
    fused.reserve(supreme_boxes.size());
    for (const auto& b : supreme_boxes) fused.push_back({b, 1, {supreme_id}});

    for (const auto& [cam_id, boxes] : cluster_boxes) {
        if (cam_id == supreme_id) continue;
        out.stats.shared[cam_id] = static_cast<int>(boxes.size());
        auto h_it = cam_to_supreme.find(cam_id);
        if (h_it == cam_to_supreme.end())
            throw MissingHomography("fuse: no homography for camera " + cam_id);
        std::vector<BBox> transformed;
        transformed.reserve(boxes.size());
        for (const auto& b : boxes) transformed.push_back(transform_box(h_it->second, b));

        std::vector<char> taken(transformed.size(), 0);
        for (const auto& [si, oi] : match_boxes(supreme_boxes, transformed, params)) {
            FusedBox& fb = fused[static_cast<size_t>(si)];
            fb.support += 1;
            fb.source_cameras.insert(cam_id);
            taken[static_cast<size_t>(oi)] = 1;
            out.stats.matched[cam_id] += 1;
        }
        for (size_t i = 0; i < transformed.size(); ++i) {
            if (!taken[i]) fused.push_back({transformed[i], 1, {cam_id}});
        }
    }

    for (const auto& fb : fused) {
        if (fb.support >= 2) out.stats.matched[supreme_id] += 1;
    }

    fused = boost_confidence(std::move(fused), params);

    std::vector<BBox> flat;
    flat.reserve(fused.size());
    for (const auto& fb : fused) flat.push_back(fb.box);
    const std::vector<BBox> kept = nms(flat, params.nms_iou);

    // map NMS survivors back to their FusedBox wrappers (first unused match)
    std::vector<char> used(fused.size(), 0);
    for (const auto& k : kept) {
        for (size_t i = 0; i < fused.size(); ++i) {
            if (!used[i] && fused[i].box == k) {
                used[i] = 1;
                out.boxes.push_back(fused[i]);
                break;
            }
        }
    }
    return out;
}

inline std::vector<FusedBox> fuse(const std::map<std::string, std::vector<BBox>>& cluster_boxes,
                                  const std::string& supreme_id,
                                  const std::map<std::string, Homography>& cam_to_supreme,
                                  const FusionParams& params) {
    return fuse_with_stats(cluster_boxes, supreme_id, cam_to_supreme, params).boxes;
}

// People = person-class fused boxes at or above the counting threshold.
inline int count_people(const std::vector<FusedBox>& fused, const FusionParams& params) {
    int n = 0;
    for (const auto& fb : fused) {
        if (fb.box.class_id == 0 && fb.box.confidence >= params.count_conf_threshold) ++n;
    }
    return n;
}

}  // namespace crosscam
