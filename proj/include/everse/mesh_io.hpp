#pragma once

#include "everse/mesh.hpp"
#include "everse/schedule.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace everse {

// Wavefront text form, normals included, 17 significant digits so a reread
// reproduces the doubles exactly.
std::string to_obj(const MeshFrame& mesh);

// Binary little-endian PLY, double positions and normals, uint32 indices.
std::vector<std::uint8_t> to_ply(const MeshFrame& mesh);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);

void write_binary_file(const std::string& path, const void* data, std::size_t size);
void write_text_file(const std::string& path, const std::string& text);

struct FrameSequenceOptions {
  std::string directory = ".";
  int rows = 128;
  int cols = 402;
  std::string format = "obj";  // "obj" or "ply"
  double jump_limit = 0.15;    // fraction of the bounding-box diagonal
  bool write_manifest = true;
};

struct FrameSequenceReport {
  int frames_written = 0;
  int failed_frame = -1;  // first frame that violated a check, -1 if none
  std::string error;
  double max_step = 0.0;  // largest vertex displacement / diagonal seen
  std::vector<std::uint64_t> hashes;
  std::string manifest_path;
  bool ok() const { return failed_frame < 0 && error.empty(); }
};

// Renders every frame of the schedule to numbered mesh files
// (frame_00000.obj, ...).  Stops at the first invalid frame or at the first
// frame that moves more than jump_limit of the diagonal per step.
FrameSequenceReport frame_sequence(const StageSchedule& sched,
                                   const FrameSequenceOptions& opt);

}  // namespace everse
