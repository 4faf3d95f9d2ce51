#pragma once

#include "everse/params.hpp"

#include <string>
#include <vector>

namespace everse {

// One row of the staging table.  t is the magnitude of the family time at
// which the row sits in the keyframe ladder; the expansion mirrors the rows
// around the central t sweep.
struct StageRow {
  std::string name;
  double t = 1.5;
  double q = 0.0;
  double xi = 1.0;
  double eta = 1.0;
  double alpha = 1.0;
  double beta = 1.0 / 25.0;
  double lam = 1.0;
  double omega = 2.0;

  StageParams stage(double signed_t, int n = 2) const;
};

struct StageSchedule {
  std::vector<StageRow> rows;  // outermost row last (the sphere in the default)
  int frames_per_leg = 60;
  int sweep_frames = 0;  // 0 means 3 * frames_per_leg + 1
  double big_q = 2.0 / 3.0;
  bool reversed = false;
  // optional clamp of the central sweep; NaN means the full +-t of rows[0]
  double t_min = 0.0, t_max = 0.0;
  bool has_t_clamp = false;
  // optional extra pinch event in the timeline, off by default
  bool extra_d1 = false;
  double extra_d1_t = 0.0;

  int effective_sweep_frames() const {
    return sweep_frames > 0 ? sweep_frames : 3 * frames_per_leg + 1;
  }
};

// Keyframe of the expanded ladder: a full stage at a signed time.
struct Keyframe {
  StageParams stage;
  std::string name;
};

// One frame of the animation.
struct FramePlan {
  StageParams stage;
  int leg = 0;        // keyframe interval index
  int index = 0;      // global frame index
  double frac = 0.0;  // position inside the leg, 0 at its start
  std::string label;
};

// The four-row table of the standard eversion: closed wormhole, unfolded
// wormhole, inverted wormhole, round sphere.
StageSchedule default_schedule();

// Reads {"rows": [...], "frames_per_leg": n, "Q": q, ...}; "default" or an
// empty document yields default_schedule().  Throws std::invalid_argument on
// malformed input.
StageSchedule parse_schedule(const std::string& document);

std::string schedule_to_json(const StageSchedule& sched);

// Mirrored keyframe ladder: rows read last-to-first at -t, then first-to-last
// at +t, so the middle leg is the pure t sweep of rows[0].
std::vector<Keyframe> schedule_keyframes(const StageSchedule& sched);

// Linear interpolation of every stage field between consecutive keyframes,
// with p recoupled to 1 - |q t| per frame.
std::vector<FramePlan> schedule_frames(const StageSchedule& sched);

// Empty when every frame of the expansion is a valid, positive-margin stage.
std::string validate_schedule(const StageSchedule& sched);

}  // namespace everse
