#include "everse/mesh_io.hpp"

#include "everse/smoothness.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace everse {

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

std::string frame_name(int index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05d.%s", index, ext.c_str());
  return buf;
}

}  // namespace

std::string to_obj(const MeshFrame& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 80 + mesh.triangles.size() * 32);
  for (const auto& v : mesh.vertices) {
    out += "v ";
    append_double(out, v.x);
    out += ' ';
    append_double(out, v.y);
    out += ' ';
    append_double(out, v.z);
    out += '\n';
  }
  for (const auto& n : mesh.normals) {
    out += "vn ";
    append_double(out, n.x);
    out += ' ';
    append_double(out, n.y);
    out += ' ';
    append_double(out, n.z);
    out += '\n';
  }
  for (const auto& f : mesh.triangles) {
    out += "f ";
    for (int k = 0; k < 3; ++k) {
      const auto idx = std::to_string(f[k] + 1);
      out += idx;
      out += "//";
      out += idx;
      out += k == 2 ? '\n' : ' ';
    }
  }
  return out;
}

std::vector<std::uint8_t> to_ply(const MeshFrame& mesh) {
  std::string header;
  header += "ply\nformat binary_little_endian 1.0\n";
  header += "element vertex " + std::to_string(mesh.vertices.size()) + "\n";
  for (const char* p : {"x", "y", "z", "nx", "ny", "nz"})
    header += std::string("property double ") + p + "\n";
  header += "element face " + std::to_string(mesh.triangles.size()) + "\n";
  header += "property list uchar uint vertex_indices\nend_header\n";

  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + mesh.vertices.size() * 48 + mesh.triangles.size() * 13);
  auto push = [&out](const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  };
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double row[6] = {mesh.vertices[i].x, mesh.vertices[i].y,
                           mesh.vertices[i].z, mesh.normals[i].x,
                           mesh.normals[i].y,  mesh.normals[i].z};
    push(row, sizeof row);
  }
  for (const auto& f : mesh.triangles) {
    const std::uint8_t len = 3;
    push(&len, 1);
    const std::uint32_t idx[3] = {f[0], f[1], f[2]};
    push(idx, sizeof idx);
  }
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* b = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

void write_binary_file(const std::string& path, const void* data,
                       std::size_t size) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!f) throw std::runtime_error("short write: " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
  write_binary_file(path, text.data(), text.size());
}

FrameSequenceReport frame_sequence(const StageSchedule& sched,
                                   const FrameSequenceOptions& opt) {
  FrameSequenceReport report;
  if (opt.format != "obj" && opt.format != "ply") {
    report.error = "unknown format: " + opt.format;
    return report;
  }

  const auto plan = schedule_frames(sched);
  nlohmann::json files = nlohmann::json::array();
  std::vector<Vec3> prev;

  for (const auto& fp : plan) {
    const auto why = fp.stage.check();
    const auto mw = smoothness_margin(fp.stage.shape);
    if (!why.empty() || !(mw.margin > 0.0)) {
      report.failed_frame = fp.index;
      report.error = "frame " + std::to_string(fp.index) + " (" + fp.label +
                     "): " + (why.empty() ? "margin not positive" : why);
      return report;
    }

    MeshFrame mesh;
    try {
      mesh = tessellate(fp.stage, opt.rows, opt.cols);
    } catch (const MeshRefusal& refusal) {
      report.failed_frame = fp.index;
      report.error = refusal.what();
      return report;
    }

    if (!prev.empty()) {
      const auto box = mesh.bounds();
      const double diag = (box[1] - box[0]).norm();
      double step = 0.0;
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        step = std::max(step, (mesh.vertices[i] - prev[i]).norm());
      const double ratio = diag > 0.0 ? step / diag : 0.0;
      report.max_step = std::max(report.max_step, ratio);
      if (ratio > opt.jump_limit) {
        report.failed_frame = fp.index;
        report.error = "frame " + std::to_string(fp.index) +
                       ": displacement " + std::to_string(ratio) +
                       " of the diagonal exceeds the limit " +
                       std::to_string(opt.jump_limit);
        return report;
      }
    }
    prev = mesh.vertices;

    const std::string name = frame_name(fp.index, opt.format);
    const std::string path = opt.directory + "/" + name;
    std::uint64_t hash = 0;
    if (opt.format == "obj") {
      const auto text = to_obj(mesh);
      hash = fnv1a64(text);
      write_text_file(path, text);
    } else {
      const auto bytes = to_ply(mesh);
      hash = fnv1a64(bytes.data(), bytes.size());
      write_binary_file(path, bytes.data(), bytes.size());
    }
    report.hashes.push_back(hash);
    ++report.frames_written;

    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    files.push_back({{"name", name}, {"hash", hex}, {"label", fp.label}});
  }

  if (opt.write_manifest) {
    nlohmann::json manifest;
    manifest["schedule"] = nlohmann::json::parse(schedule_to_json(sched));
    manifest["rows"] = opt.rows;
    manifest["cols"] = opt.cols;
    manifest["format"] = opt.format;
    manifest["frame_count"] = report.frames_written;
    manifest["max_step"] = report.max_step;
    manifest["files"] = std::move(files);
    report.manifest_path = opt.directory + "/manifest.json";
    write_text_file(report.manifest_path, manifest.dump(2) + "\n");
  }
  return report;
}

}  // namespace everse
