#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "everse/algebra.hpp"
#include "everse/events.hpp"
#include "everse/intersections.hpp"
#include "everse/mesh.hpp"
#include "everse/mesh_io.hpp"
#include "everse/schedule.hpp"
#include "everse/smoothness.hpp"
#include "everse/surface.hpp"

#include <array>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace everse;

namespace {

using Triple = std::array<double, 3>;

Vec3 to_vec(const Triple& a) { return {a[0], a[1], a[2]}; }
Triple from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

py::dict residual_dict(const ResidualReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["scale"] = r.scale;
  d["relative"] = r.relative;
  return d;
}

py::dict param_point_dict(const ParamPoint& p) {
  py::dict d;
  d["chart"] = p.chart == ParamPoint::Chart::height ? "h" : "theta";
  d["u"] = p.u;
  d["phi"] = p.phi;
  return d;
}

py::dict record_dict(const EventRecord& r) {
  py::dict d;
  d["kind"] = to_string(r.kind);
  d["t"] = r.t;
  d["location"] = from_vec(r.location);
  py::list pre;
  for (const auto& p : r.preimages) pre.append(param_point_dict(p));
  d["preimages"] = std::move(pre);
  d["note"] = r.note;
  return d;
}

py::list record_list(const std::vector<EventRecord>& recs) {
  py::list out;
  for (const auto& r : recs) out.append(record_dict(r));
  return out;
}

py::dict report_dict(const SmoothnessReport& r) {
  py::dict d;
  d["margin"] = r.margin;
  d["min_normal_norm"] = r.min_normal_norm;
  d["min_jacobian"] = r.min_jacobian;
  d["pass"] = r.pass;
  d["slope_jump"] = r.slope_jump;
  d["probe_order3"] = r.probe_order3;
  d["probe_order4"] = r.probe_order4;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_everse, m) {
  m.doc() = "ruled-family sphere eversion: evaluation, validation, export";

  py::class_<SurfaceParams>(m, "SurfaceParams")
      .def(py::init<>())
      .def(py::init([](int n, double t, double p, double q) {
             return SurfaceParams{n, t, p, q};
           }),
           py::arg("n"), py::arg("t"), py::arg("p"), py::arg("q"))
      .def_readwrite("n", &SurfaceParams::n)
      .def_readwrite("t", &SurfaceParams::t)
      .def_readwrite("p", &SurfaceParams::p)
      .def_readwrite("q", &SurfaceParams::q)
      .def_static("halfway", &SurfaceParams::halfway, py::arg("n"),
                  py::arg("t") = 0.0)
      .def_static("coupled", &SurfaceParams::coupled, py::arg("n"), py::arg("t"),
                  py::arg("q"))
      .def("__repr__", [](const SurfaceParams& sp) {
        return "SurfaceParams(n=" + std::to_string(sp.n) +
               ", t=" + std::to_string(sp.t) + ", p=" + std::to_string(sp.p) +
               ", q=" + std::to_string(sp.q) + ")";
      });

  py::class_<StageParams>(m, "StageParams")
      .def(py::init<>())
      .def_readwrite("shape", &StageParams::shape)
      .def_readwrite("xi", &StageParams::xi)
      .def_readwrite("eta", &StageParams::eta)
      .def_readwrite("alpha", &StageParams::alpha)
      .def_readwrite("beta", &StageParams::beta)
      .def_readwrite("omega", &StageParams::omega)
      .def_readwrite("lam", &StageParams::lam)
      .def_readwrite("eps", &StageParams::eps)
      .def("kappa", &StageParams::kappa)
      .def("gamma", &StageParams::gamma)
      .def("check", &StageParams::check)
      .def_static("closed_wormhole", &StageParams::closed_wormhole, py::arg("t"),
                  py::arg("q") = 0.0)
      .def_static("unfolded", &StageParams::unfolded, py::arg("t"),
                  py::arg("big_q") = 2.0 / 3.0)
      .def_static("inverted", &StageParams::inverted, py::arg("t"),
                  py::arg("big_q") = 2.0 / 3.0)
      .def_static("round_sphere", &StageParams::round_sphere, py::arg("t"),
                  py::arg("big_q") = 2.0 / 3.0);

  py::class_<StageSchedule>(m, "StageSchedule")
      .def_readwrite("frames_per_leg", &StageSchedule::frames_per_leg)
      .def_readwrite("sweep_frames", &StageSchedule::sweep_frames)
      .def("to_json", [](const StageSchedule& s) { return schedule_to_json(s); })
      .def("frame_count", [](const StageSchedule& s) {
        return schedule_frames(s).size();
      });

  m.def("default_schedule", &default_schedule);
  m.def("parse_schedule", &parse_schedule, py::arg("document"));
  m.def("validate_schedule", &validate_schedule, py::arg("schedule"));

  // surface evaluation
  m.def(
      "family_point",
      [](const SurfaceParams& sp, double h, double phi) {
        return from_vec(family_point(sp, h, phi));
      },
      py::arg("shape"), py::arg("h"), py::arg("phi"));
  m.def(
      "closed_point",
      [](const StageParams& st, double theta, double phi) {
        return from_vec(closed_point(st, theta, phi));
      },
      py::arg("stage"), py::arg("theta"), py::arg("phi"));
  m.def(
      "normal_vector",
      [](const SurfaceParams& sp, double h, double phi) {
        return from_vec(normal_vector(sp, h, phi));
      },
      py::arg("shape"), py::arg("h"), py::arg("phi"));
  m.def("theta_to_h", &theta_to_h, py::arg("theta"), py::arg("omega"), py::arg("n"));
  m.def("h_to_theta", &h_to_theta, py::arg("h"), py::arg("omega"), py::arg("n"));

  // smoothness
  m.def("smoothness_margin", [](const SurfaceParams& sp) {
    const auto w = smoothness_margin(sp);
    py::dict d;
    d["margin"] = w.margin;
    d["phi"] = w.phi;
    d["h"] = w.h;
    d["pass"] = w.pass;
    return d;
  });
  m.def(
      "stage_report",
      [](const StageParams& st) { return report_dict(stage_report(st)); },
      py::arg("stage"));
  m.def(
      "pole_regularity_check",
      [](const StageParams& st) { return report_dict(pole_regularity_check(st)); },
      py::arg("stage"));
  m.def(
      "composite_jacobian",
      [](const Triple& r, const StageParams& st) {
        return composite_jacobian(to_vec(r), st);
      },
      py::arg("point"), py::arg("stage"));

  // implicit equations
  m.def("sextic_residual_halfway", [](const Triple& pt) {
    return residual_dict(sextic_residual_halfway(to_vec(pt)));
  });
  m.def("boy_quintic_residual", [](const Triple& pt) {
    return residual_dict(boy_quintic_residual(to_vec(pt)));
  });
  m.def(
      "sextic_residual_t",
      [](const Triple& pt, double t, double q) {
        return residual_dict(sextic_residual_t(to_vec(pt), t, q));
      },
      py::arg("point"), py::arg("t"), py::arg("q") = 0.0);

  // events
  m.def("triple_points", [](double t) {
    py::list out;
    for (const auto& tp : triple_points(t)) {
      py::dict d;
      d["point"] = from_vec(tp.point);
      d["s"] = tp.s;
      d["w"] = tp.w;
      d["z"] = tp.z;
      d["h_roots"] = tp.h_roots;
      out.append(std::move(d));
    }
    return out;
  });
  m.def("halfway_events", [](int n) { return record_list(halfway_events(n)); });
  m.def("event_timeline",
        [](const StageSchedule& s) { return record_list(event_timeline(s)); });
  m.def("degeneracy_quartic_coeffs", &degeneracy_quartic_coeffs, py::arg("t"));

  // double curves
  m.def(
      "self_intersection_branches",
      [](const SurfaceParams& sp, int samples, double h_span) {
        py::list out;
        for (const auto& b : self_intersection_branches(sp, samples, h_span)) {
          py::dict d;
          d["kind"] = to_string(b.kind);
          d["label"] = b.label;
          py::list samples_list;
          for (const auto& s : b.samples) {
            py::dict sd;
            sd["point"] = from_vec(s.point);
            sd["phi_plus"] = s.phi_plus;
            sd["phi_minus"] = s.phi_minus;
            sd["h_plus"] = s.h_plus;
            sd["h_minus"] = s.h_minus;
            samples_list.append(std::move(sd));
          }
          d["samples"] = std::move(samples_list);
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("shape"), py::arg("samples") = 256, py::arg("h_span") = 3.0);
  m.def(
      "monotonicity_witness",
      [](double t, double q, int samples) {
        const auto w = monotonicity_witness(t, q, samples);
        py::dict d;
        d["min_derivative"] = w.min_derivative;
        d["arg_s"] = w.arg_s;
        d["g_margin"] = w.g_margin;
        d["pass"] = w.pass;
        return d;
      },
      py::arg("t"), py::arg("q") = 0.0, py::arg("samples") = 2001);
  m.def(
      "preimage_count",
      [](const SurfaceParams& sp, const Triple& pt, double h_span, int grid,
         double tol) { return preimage_count(sp, to_vec(pt), h_span, grid, tol); },
      py::arg("shape"), py::arg("point"), py::arg("h_span") = 3.0,
      py::arg("grid") = 160, py::arg("tol") = 1e-8);

  // meshes
  py::class_<MeshFrame>(m, "MeshFrame")
      .def_property_readonly("vertices",
                             [](const MeshFrame& mf) {
                               std::vector<Triple> out;
                               out.reserve(mf.vertices.size());
                               for (const auto& v : mf.vertices)
                                 out.push_back(from_vec(v));
                               return out;
                             })
      .def_property_readonly("normals",
                             [](const MeshFrame& mf) {
                               std::vector<Triple> out;
                               out.reserve(mf.normals.size());
                               for (const auto& v : mf.normals)
                                 out.push_back(from_vec(v));
                               return out;
                             })
      .def_readonly("triangles", &MeshFrame::triangles)
      .def_readonly("rows", &MeshFrame::rows)
      .def_readonly("cols", &MeshFrame::cols)
      .def_readonly("closed", &MeshFrame::closed);

  py::register_exception<MeshRefusal>(m, "MeshRefusal");

  m.def("tessellate", &tessellate, py::arg("stage"), py::arg("rows") = 128,
        py::arg("cols") = 402);
  m.def("tessellate_open", &tessellate_open, py::arg("shape"), py::arg("rows"),
        py::arg("cols"), py::arg("h_min") = -3.0, py::arg("h_max") = 3.0);
  m.def("signed_volume", &signed_volume);
  m.def("max_edge_length", &max_edge_length);
  m.def("mesh_self_intersections", [](const MeshFrame& mf) {
    const auto cloud = mesh_self_intersections(mf);
    py::dict d;
    py::list segs;
    for (const auto& s : cloud.segments)
      segs.append(py::make_tuple(from_vec(s[0]), from_vec(s[1])));
    d["segments"] = std::move(segs);
    d["pairs_tested"] = cloud.pairs_tested;
    d["total_length"] = cloud.total_length;
    return d;
  });

  // export
  m.def("to_obj", &to_obj);
  m.def("to_ply", [](const MeshFrame& mf) {
    const auto bytes = to_ply(mf);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("fnv1a64", [](const py::bytes& data) {
    const std::string s = data;
    return fnv1a64(s.data(), s.size());
  });
  m.def(
      "frame_sequence",
      [](const StageSchedule& sched, const std::string& directory, int rows,
         int cols, const std::string& format, double jump_limit) {
        FrameSequenceOptions opt;
        opt.directory = directory;
        opt.rows = rows;
        opt.cols = cols;
        opt.format = format;
        opt.jump_limit = jump_limit;
        const auto rep = frame_sequence(sched, opt);
        py::dict d;
        d["frames_written"] = rep.frames_written;
        d["failed_frame"] = rep.failed_frame;
        d["error"] = rep.error;
        d["max_step"] = rep.max_step;
        d["hashes"] = rep.hashes;
        d["manifest_path"] = rep.manifest_path;
        d["ok"] = rep.ok();
        return d;
      },
      py::arg("schedule"), py::arg("directory"), py::arg("rows") = 128,
      py::arg("cols") = 402, py::arg("format") = "obj",
      py::arg("jump_limit") = 0.15);
}
