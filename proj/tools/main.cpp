#include "CLI11.hpp"
#include "json.hpp"

#include "everse/algebra.hpp"
#include "everse/events.hpp"
#include "everse/intersections.hpp"
#include "everse/mesh.hpp"
#include "everse/mesh_io.hpp"
#include "everse/schedule.hpp"
#include "everse/smoothness.hpp"
#include "everse/surface.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

using everse::Vec3;
using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

everse::StageSchedule load_schedule(const std::string& arg) {
  if (arg == "default") return everse::default_schedule();
  return everse::parse_schedule(slurp(arg));
}

json maybe_config(const std::string& path) {
  if (path.empty()) return json::object();
  const json j = json::parse(slurp(path));
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
  return j;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    everse::write_text_file(out_path, text);
  }
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json param_point_json(const everse::ParamPoint& p) {
  return json{{"chart", p.chart == everse::ParamPoint::Chart::height ? "h" : "theta"},
              {"u", p.u},
              {"phi", p.phi}};
}

json record_json(const everse::EventRecord& r) {
  json pre = json::array();
  for (const auto& p : r.preimages) pre.push_back(param_point_json(p));
  return json{{"kind", everse::to_string(r.kind)},
              {"t", r.t},
              {"location", vec_json(r.location)},
              {"preimages", std::move(pre)},
              {"note", r.note}};
}

struct GenerateOpts {
  std::string schedule = "default";
  std::string out_dir = "out";
  std::string format = "obj";
  std::string config;
  int frames = 60;
  int sweep_frames = 0;
  int rows = 128;
  int cols = 402;
  double jump_limit = 0.15;
};

int run_generate(GenerateOpts opt) {
  const json cfg = maybe_config(opt.config);
  opt.schedule = cfg.value("schedule", opt.schedule);
  opt.out_dir = cfg.value("out", opt.out_dir);
  opt.format = cfg.value("format", opt.format);
  opt.frames = cfg.value("frames", opt.frames);
  opt.sweep_frames = cfg.value("sweep_frames", opt.sweep_frames);
  opt.rows = cfg.value("rows", opt.rows);
  opt.cols = cfg.value("cols", opt.cols);
  opt.jump_limit = cfg.value("jump_limit", opt.jump_limit);

  everse::StageSchedule sched = load_schedule(opt.schedule);
  sched.frames_per_leg = opt.frames;
  if (opt.sweep_frames > 0) sched.sweep_frames = opt.sweep_frames;

  std::filesystem::create_directories(opt.out_dir);
  everse::FrameSequenceOptions fo;
  fo.directory = opt.out_dir;
  fo.rows = opt.rows;
  fo.cols = opt.cols;
  fo.format = opt.format;
  fo.jump_limit = opt.jump_limit;
  const auto report = everse::frame_sequence(sched, fo);

  json j{{"frames_written", report.frames_written},
         {"max_step", report.max_step},
         {"ok", report.ok()}};
  if (!report.manifest_path.empty()) j["manifest"] = report.manifest_path;
  if (!report.error.empty()) {
    j["error"] = report.error;
    j["failed_frame"] = report.failed_frame;
  }
  emit(j, "");
  return report.ok() ? 0 : 1;
}

struct VerifyOpts {
  std::string stage = "halfway";
  std::string out;
  std::string config;
  double t = 1.5;
  double q = 0.0;
  int n = 2;
  int samples = 1000;
  double tol = 0.0;  // 0 means the per-suite default
  unsigned seed = 12345;
  bool implicit_only = false;
};

int run_verify(VerifyOpts opt) {
  const json cfg = maybe_config(opt.config);
  opt.stage = cfg.value("stage", opt.stage);
  opt.t = cfg.value("t", opt.t);
  opt.q = cfg.value("q", opt.q);
  opt.n = cfg.value("n", opt.n);
  opt.samples = cfg.value("samples", opt.samples);
  opt.tol = cfg.value("tol", opt.tol);
  opt.seed = cfg.value("seed", opt.seed);
  opt.implicit_only = cfg.value("implicit", opt.implicit_only);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uh(-3.0, 3.0);
  std::uniform_real_distribution<double> uphi(-3.141592653589793, 3.141592653589793);

  json report;
  report["stage"] = opt.stage;
  bool pass = true;
  json residuals = json::array();

  auto residual_suite = [&](const everse::SurfaceParams& sp, const std::string& kind,
                            double tol_default) {
    const double tol = opt.tol > 0.0 ? opt.tol : tol_default;
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      const Vec3 pt = everse::family_point(sp, uh(rng), uphi(rng));
      everse::ResidualReport rr;
      if (kind == "sextic")
        rr = everse::sextic_residual_halfway(pt);
      else if (kind == "quintic")
        rr = everse::boy_quintic_residual(pt);
      else
        rr = everse::sextic_residual_t(pt, sp.t, sp.q);
      worst = std::max(worst, rr.relative);
    }
    const bool ok = worst < tol;
    residuals.push_back({{"kind", kind},
                         {"samples", opt.samples},
                         {"max_relative", worst},
                         {"tol", tol},
                         {"pass", ok}});
    pass = pass && ok;
  };

  const bool shape_only = opt.stage == "halfway" || opt.stage == "boy";
  if (shape_only) {
    const int n = opt.stage == "boy" ? 3 : opt.n;
    const auto sp = everse::SurfaceParams::halfway(n, 0.0);
    if (!opt.implicit_only) {
      const auto mw = everse::smoothness_margin(sp);
      double min_norm = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 60; ++i)
        for (int j = 0; j < 120; ++j)
          min_norm = std::min(
              min_norm, everse::normal_vector(sp, -3.0 + 0.1 * i,
                                              -3.141592653589793 + j * 3.141592653589793 / 60.0)
                            .norm());
      report["smoothness"] = {{"margin", mw.margin}, {"min_normal_norm", min_norm}};
      pass = pass && mw.margin > 0.0 && min_norm > 1e-12;
    }
    if (n == 2)
      residual_suite(sp, "sextic", 1e-8);
    else if (n == 3)
      residual_suite(sp, "quintic", 1e-9);
  } else {
    everse::StageParams st;
    if (opt.stage == "closed")
      st = everse::StageParams::closed_wormhole(opt.t, opt.q);
    else if (opt.stage == "unfolded")
      st = everse::StageParams::unfolded(opt.t);
    else if (opt.stage == "inverted")
      st = everse::StageParams::inverted(opt.t);
    else if (opt.stage == "sphere")
      st = everse::StageParams::round_sphere(opt.t);
    else
      throw CLI::ValidationError("--stage must be one of halfway, boy, closed, "
                                 "unfolded, inverted, sphere");
    if (!opt.implicit_only) {
      const auto sr = everse::stage_report(st);
      const auto pr = everse::pole_regularity_check(st);
      report["smoothness"] = {{"margin", sr.margin},
                              {"min_normal_norm", sr.min_normal_norm},
                              {"min_jacobian", sr.min_jacobian},
                              {"pass", sr.pass}};
      report["pole_regularity"] = {{"slope_jump", pr.slope_jump},
                                   {"probe_order3", pr.probe_order3},
                                   {"probe_order4", pr.probe_order4},
                                   {"pass", pr.pass},
                                   {"note", pr.note}};
      pass = pass && sr.pass && pr.pass;
    }
    if (opt.stage == "closed" || opt.stage == "unfolded")
      residual_suite(st.shape, "resultant", 1e-8);
  }

  report["residuals"] = std::move(residuals);
  report["pass"] = pass;
  emit(report, opt.out);
  return pass ? 0 : 1;
}

struct EventsOpts {
  std::string schedule = "default";
  std::string out;
  std::string config;
  double triple_t = std::numeric_limits<double>::quiet_NaN();
  int halfway_n = 0;
};

int run_events(EventsOpts opt) {
  const json cfg = maybe_config(opt.config);
  opt.schedule = cfg.value("schedule", opt.schedule);
  opt.halfway_n = cfg.value("halfway_n", opt.halfway_n);
  if (cfg.contains("triple_t")) opt.triple_t = cfg.at("triple_t").get<double>();

  json j;
  if (!std::isnan(opt.triple_t)) {
    const auto pts = everse::triple_points(opt.triple_t);
    json arr = json::array();
    for (const auto& tp : pts) {
      json hr = json::array();
      for (double h : tp.h_roots) hr.push_back(h);
      arr.push_back({{"point", vec_json(tp.point)},
                     {"s", tp.s},
                     {"w", tp.w},
                     {"z", tp.z},
                     {"h_roots", std::move(hr)}});
    }
    j = {{"t", opt.triple_t}, {"triple_points", std::move(arr)}};
  } else if (opt.halfway_n > 0) {
    json arr = json::array();
    for (const auto& rec : everse::halfway_events(opt.halfway_n))
      arr.push_back(record_json(rec));
    j = {{"n", opt.halfway_n}, {"events", std::move(arr)}};
  } else {
    const auto sched = load_schedule(opt.schedule);
    json arr = json::array();
    for (const auto& rec : everse::event_timeline(sched)) arr.push_back(record_json(rec));
    j = {{"events", std::move(arr)}};
  }
  emit(j, opt.out);
  return 0;
}

struct IntersectOpts {
  std::string out;
  std::string obj_path;
  std::string config;
  int n = 2;
  double t = 0.0;
  double q = 0.0;
  int samples = 256;
  int rows = 200;
  int cols = 628;
  double h_span = 3.0;
  bool with_mesh = false;
};

int run_intersect(IntersectOpts opt) {
  const json cfg = maybe_config(opt.config);
  opt.n = cfg.value("n", opt.n);
  opt.t = cfg.value("t", opt.t);
  opt.q = cfg.value("q", opt.q);
  opt.samples = cfg.value("samples", opt.samples);
  opt.rows = cfg.value("rows", opt.rows);
  opt.cols = cfg.value("cols", opt.cols);
  opt.with_mesh = cfg.value("mesh", opt.with_mesh);

  const auto sp = everse::SurfaceParams::coupled(opt.n, opt.t, opt.q);
  const auto branches = everse::self_intersection_branches(sp, opt.samples, opt.h_span);

  json jb = json::array();
  for (const auto& br : branches) {
    json samples = json::array();
    for (const auto& s : br.samples) {
      samples.push_back({{"point", vec_json(s.point)},
                         {"phi_plus", s.phi_plus},
                         {"phi_minus", s.phi_minus},
                         {"h_plus", s.h_plus},
                         {"h_minus", s.h_minus}});
    }
    jb.push_back({{"kind", everse::to_string(br.kind)},
                  {"label", br.label},
                  {"count", br.samples.size()},
                  {"samples", std::move(samples)}});
  }
  json j{{"n", opt.n}, {"t", opt.t}, {"q", opt.q}, {"branches", std::move(jb)}};

  if (!opt.obj_path.empty()) {
    std::string obj;
    std::size_t base = 1;
    for (const auto& br : branches) {
      for (const auto& s : br.samples) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", s.point.x,
                      s.point.y, s.point.z);
        obj += buf;
      }
      for (std::size_t k = 1; k < br.samples.size(); ++k) {
        obj += "l " + std::to_string(base + k - 1) + " " + std::to_string(base + k) + "\n";
      }
      base += br.samples.size();
    }
    everse::write_text_file(opt.obj_path, obj);
    j["obj"] = opt.obj_path;
  }

  bool pass = true;
  if (opt.with_mesh) {
    // odd flat members cover their image twice, via (h, phi) -> (-h, phi+pi);
    // mesh one fundamental domain, nudged off the fold circle at h = 0, so
    // the coincident second sheet does not drown the crossing test
    double h_lo = -opt.h_span;
    if (sp.n % 2 == 1 && sp.t == 0.0)
      h_lo = opt.h_span / (2.0 * (opt.rows - 1));
    const auto mesh = everse::tessellate_open(sp, opt.rows, opt.cols, h_lo, opt.h_span);
    const auto cloud = everse::mesh_self_intersections(mesh);
    std::vector<Vec3> probes;
    probes.reserve(cloud.segments.size() * 3);
    for (const auto& seg : cloud.segments) {
      probes.push_back(seg[0]);
      probes.push_back(seg[1]);
      probes.push_back((seg[0] + seg[1]) * 0.5);
    }
    const auto dense = everse::self_intersection_branches(sp, 4096, opt.h_span + 1.0);
    const double hausdorff = everse::max_distance_to_branches(probes, dense);
    const double edge = everse::max_edge_length(mesh);
    pass = cloud.segments.empty() ? true : hausdorff <= 2.0 * edge;
    j["mesh"] = {{"segments", cloud.segments.size()},
                 {"pairs_tested", cloud.pairs_tested},
                 {"total_length", cloud.total_length},
                 {"hausdorff_to_analytic", hausdorff},
                 {"max_edge_length", edge},
                 {"pass", pass}};
  }
  emit(j, opt.out);
  return pass ? 0 : 1;
}

struct ScheduleCheckOpts {
  std::string schedule = "default";
  std::string out;
  std::string config;
};

int run_schedule_check(ScheduleCheckOpts opt) {
  const json cfg = maybe_config(opt.config);
  opt.schedule = cfg.value("schedule", opt.schedule);

  json j;
  try {
    const auto sched = load_schedule(opt.schedule);
    const auto why = everse::validate_schedule(sched);
    const auto frames = everse::schedule_frames(sched);
    j["keyframes"] = everse::schedule_keyframes(sched).size();
    j["frames"] = frames.size();
    j["valid"] = why.empty();
    if (!why.empty()) j["error"] = why;
    emit(j, opt.out);
    return why.empty() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    j["valid"] = false;
    j["error"] = e.what();
    emit(j, opt.out);
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evaluator, validator and exporter of the ruled-family sphere eversion"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* cgen = app.add_subcommand("generate", "render schedule frames to mesh files");
  cgen->add_option("--schedule", gen.schedule, "schedule JSON path or 'default'");
  cgen->add_option("--frames", gen.frames, "frames per interpolation leg");
  cgen->add_option("--sweep-frames", gen.sweep_frames, "frames of the central t sweep");
  cgen->add_option("--rows", gen.rows, "latitude intervals");
  cgen->add_option("--cols", gen.cols, "longitude samples");
  cgen->add_option("--format", gen.format, "obj or ply");
  cgen->add_option("-o,--out", gen.out_dir, "output directory");
  cgen->add_option("--jump-limit", gen.jump_limit, "frame displacement limit");
  cgen->add_option("--config", gen.config, "JSON config overriding flags");

  VerifyOpts ver;
  auto* cver = app.add_subcommand("verify", "smoothness and implicit-equation checks");
  cver->add_option("--stage", ver.stage,
                   "halfway, boy, closed, unfolded, inverted or sphere");
  cver->add_option("--t", ver.t, "family time for staged checks");
  cver->add_option("--q", ver.q, "vertical shear for staged checks");
  cver->add_option("--n", ver.n, "winding for halfway checks");
  cver->add_flag("--implicit", ver.implicit_only, "run only the residual suites");
  cver->add_option("--samples", ver.samples, "random sample count");
  cver->add_option("--tol", ver.tol, "override the residual tolerance");
  cver->add_option("--seed", ver.seed, "RNG seed for the sample draw");
  cver->add_option("--out", ver.out, "write the JSON report here");
  cver->add_option("--config", ver.config, "JSON config overriding flags");

  EventsOpts evt;
  auto* cevt = app.add_subcommand("events", "event timeline and event families");
  cevt->add_option("--schedule", evt.schedule, "schedule JSON path or 'default'");
  cevt->add_option("--triple-t", evt.triple_t, "list triple points at this t");
  cevt->add_option("--halfway-n", evt.halfway_n, "list t=0 events of this winding");
  cevt->add_option("--out", evt.out, "write the JSON report here");
  cevt->add_option("--config", evt.config, "JSON config overriding flags");

  IntersectOpts isc;
  auto* cisc = app.add_subcommand("intersect", "double curves, analytic and from the mesh");
  cisc->add_option("--n", isc.n, "winding");
  cisc->add_option("--t", isc.t, "family time");
  cisc->add_option("--q", isc.q, "vertical shear");
  cisc->add_option("--samples", isc.samples, "samples per branch");
  cisc->add_flag("--mesh", isc.with_mesh, "cross-validate against mesh intersections");
  cisc->add_option("--rows", isc.rows, "mesh height samples");
  cisc->add_option("--cols", isc.cols, "mesh longitude samples");
  cisc->add_option("--h-span", isc.h_span, "height range half-width");
  cisc->add_option("--obj", isc.obj_path, "write branch polylines as OBJ lines");
  cisc->add_option("--out", isc.out, "write the JSON report here");
  cisc->add_option("--config", isc.config, "JSON config overriding flags");

  ScheduleCheckOpts sck;
  auto* csck = app.add_subcommand("schedule-check", "parse and validate a schedule");
  csck->add_option("--schedule", sck.schedule, "schedule JSON path or 'default'");
  csck->add_option("--out", sck.out, "write the JSON report here");
  csck->add_option("--config", sck.config, "JSON config overriding flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cgen->parsed()) return run_generate(gen);
    if (cver->parsed()) return run_verify(ver);
    if (cevt->parsed()) return run_events(evt);
    if (cisc->parsed()) return run_intersect(isc);
    if (csck->parsed()) return run_schedule_check(sck);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
