#include "everse/schedule.hpp"

#include "everse/smoothness.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace everse {

using nlohmann::json;

StageParams StageRow::stage(double signed_t, int n) const {
  StageParams s;
  s.shape = SurfaceParams::coupled(n, signed_t, q);
  s.xi = xi;
  s.eta = eta;
  s.alpha = alpha;
  s.beta = beta;
  s.lam = lam;
  s.omega = omega;
  return s;
}

StageSchedule default_schedule() {
  StageSchedule sched;
  const double big_q = 2.0 / 3.0;
  const double tq = 1.0 / big_q;
  StageRow closed{"closed wormhole", tq, 0.0, 1.0, 1.0, 1.0, 1.0 / 25.0, 1.0, 2.0};
  StageRow unfolded{"unfolded wormhole", tq, big_q, 1.0, 1.0, 1.0, 1.0 / 25.0, 1.0, 2.0};
  StageRow inverted{"inverted wormhole", tq, big_q, 0.0, 1.0, 0.0, 1.0, 1.0, 2.0};
  StageRow sphere{"round sphere", tq, big_q, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0};
  sched.rows = {closed, unfolded, inverted, sphere};
  sched.big_q = big_q;
  return sched;
}

namespace {

StageRow row_from_json(const json& j) {
  StageRow r;
  r.name = j.value("name", std::string{});
  r.t = j.value("t", r.t);
  r.q = j.value("q", r.q);
  r.xi = j.value("xi", r.xi);
  r.eta = j.value("eta", r.eta);
  r.alpha = j.value("alpha", r.alpha);
  r.beta = j.value("beta", r.beta);
  r.lam = j.value("lambda", r.lam);
  r.omega = j.value("omega", r.omega);
  return r;
}

json row_to_json(const StageRow& r) {
  return json{{"name", r.name}, {"t", r.t},         {"q", r.q},
              {"xi", r.xi},     {"eta", r.eta},     {"alpha", r.alpha},
              {"beta", r.beta}, {"lambda", r.lam},  {"omega", r.omega}};
}

}  // namespace

StageSchedule parse_schedule(const std::string& document) {
  auto trimmed = document;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  const auto last = trimmed.find_last_not_of(" \t\r\n");
  trimmed.erase(last == std::string::npos ? 0 : last + 1);
  if (trimmed.empty() || trimmed == "default" || trimmed == "\"default\"")
    return default_schedule();

  json j;
  try {
    j = json::parse(trimmed);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"schedule document: "} + e.what());
  }
  if (j.is_string() && j.get<std::string>() == "default") return default_schedule();
  if (!j.is_object()) throw std::invalid_argument("schedule document must be an object");

  StageSchedule sched = default_schedule();
  try {
    if (j.contains("rows")) {
      sched.rows.clear();
      for (const auto& rj : j.at("rows")) sched.rows.push_back(row_from_json(rj));
    }
    sched.frames_per_leg = j.value("frames_per_leg", sched.frames_per_leg);
    sched.sweep_frames = j.value("sweep_frames", sched.sweep_frames);
    sched.big_q = j.value("Q", sched.big_q);
    sched.reversed = j.value("reversed", sched.reversed);
    if (j.contains("t_min") || j.contains("t_max")) {
      sched.has_t_clamp = true;
      const double t0 = sched.rows.empty() ? 1.5 : sched.rows.front().t;
      sched.t_min = j.value("t_min", -t0);
      sched.t_max = j.value("t_max", t0);
    }
    if (j.contains("extra_d1_t")) {
      sched.extra_d1 = true;
      sched.extra_d1_t = j.at("extra_d1_t").get<double>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string{"schedule document: "} + e.what());
  }
  if (sched.rows.empty()) throw std::invalid_argument("schedule has no rows");
  if (sched.frames_per_leg < 1) throw std::invalid_argument("frames_per_leg must be positive");
  if (sched.has_t_clamp && sched.t_min >= sched.t_max)
    throw std::invalid_argument("t_min must be below t_max");
  return sched;
}

std::string schedule_to_json(const StageSchedule& sched) {
  json j;
  j["rows"] = json::array();
  for (const auto& r : sched.rows) j["rows"].push_back(row_to_json(r));
  j["frames_per_leg"] = sched.frames_per_leg;
  j["sweep_frames"] = sched.sweep_frames;
  j["Q"] = sched.big_q;
  j["reversed"] = sched.reversed;
  if (sched.has_t_clamp) {
    j["t_min"] = sched.t_min;
    j["t_max"] = sched.t_max;
  }
  if (sched.extra_d1) j["extra_d1_t"] = sched.extra_d1_t;
  return j.dump(2);
}

std::vector<Keyframe> schedule_keyframes(const StageSchedule& sched) {
  std::vector<Keyframe> frames;
  if (sched.rows.empty()) return frames;

  if (sched.has_t_clamp) {
    const StageRow& r = sched.rows.front();
    frames.push_back({r.stage(sched.t_min), r.name + " (sweep start)"});
    frames.push_back({r.stage(sched.t_max), r.name + " (sweep end)"});
  } else {
    for (auto it = sched.rows.rbegin(); it != sched.rows.rend(); ++it)
      frames.push_back({it->stage(-it->t), it->name + " (t<0)"});
    for (const auto& r : sched.rows)
      frames.push_back({r.stage(r.t), r.name + " (t>0)"});
  }
  if (sched.reversed) std::reverse(frames.begin(), frames.end());
  return frames;
}

namespace {

StageParams lerp_stage(const StageParams& a, const StageParams& b, double f) {
  auto mix = [f](double x, double y) { return x + f * (y - x); };
  StageParams s;
  s.shape.n = a.shape.n;
  s.shape.t = mix(a.shape.t, b.shape.t);
  s.shape.q = mix(a.shape.q, b.shape.q);
  s.shape.p = 1.0 - std::fabs(s.shape.q * s.shape.t);
  s.xi = mix(a.xi, b.xi);
  s.eta = mix(a.eta, b.eta);
  s.alpha = mix(a.alpha, b.alpha);
  s.beta = mix(a.beta, b.beta);
  s.omega = mix(a.omega, b.omega);
  s.lam = mix(a.lam, b.lam);
  s.eps = mix(a.eps, b.eps);
  return s;
}

}  // namespace

std::vector<FramePlan> schedule_frames(const StageSchedule& sched) {
  const auto keys = schedule_keyframes(sched);
  std::vector<FramePlan> plan;
  if (keys.size() < 2) {
    if (keys.size() == 1) plan.push_back({keys[0].stage, 0, 0, 0.0, keys[0].name});
    return plan;
  }
  const int legs = static_cast<int>(keys.size()) - 1;
  // with the mirrored ladder the central leg is the pure t sweep
  const int sweep_leg = sched.has_t_clamp ? 0 : legs / 2;
  int index = 0;
  for (int leg = 0; leg < legs; ++leg) {
    const int count = leg == sweep_leg ? sched.effective_sweep_frames() - 1
                                       : sched.frames_per_leg;
    for (int j = 0; j < count; ++j) {
      const double frac = static_cast<double>(j) / count;
      FramePlan fp;
      fp.stage = lerp_stage(keys[leg].stage, keys[leg + 1].stage, frac);
      fp.leg = leg;
      fp.index = index++;
      fp.frac = frac;
      fp.label = j == 0 ? keys[leg].name
                        : keys[leg].name + " -> " + keys[leg + 1].name;
      plan.push_back(std::move(fp));
    }
  }
  plan.push_back({keys.back().stage, legs - 1, index, 1.0, keys.back().name});
  return plan;
}

std::string validate_schedule(const StageSchedule& sched) {
  if (sched.rows.empty()) return "schedule has no rows";
  const auto plan = schedule_frames(sched);
  for (const auto& fp : plan) {
    const auto why = fp.stage.check();
    if (!why.empty())
      return "frame " + std::to_string(fp.index) + " (" + fp.label + "): " + why;
    const auto mw = smoothness_margin(fp.stage.shape);
    if (!(mw.margin > 0.0))
      return "frame " + std::to_string(fp.index) + " (" + fp.label +
             "): ruled-surface margin " + std::to_string(mw.margin) +
             " is not positive";
  }
  return {};
}

}  // namespace everse
