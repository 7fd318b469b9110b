#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "unfold/graph.hpp"

namespace unfold {

struct MeshData {
  std::vector<std::array<double, 3>> pts;
  std::vector<std::array<std::uint32_t, 3>> faces;
};

// Strict OFF reader: "OFF" magic, counts line, exactly-3-float vertex rows,
// triangle faces only. Bad indices, non-triangles and zero-area faces are
// rejected with the offending row in the message.
MeshData read_off(const std::string& path);
void write_off(const std::string& path, const MeshData& mesh);

struct ShapeEstimate {
  double a = 0.0;       // quadric-fit shape norm
  bool reliable = false;  // >= 5 usable neighbors and full-rank fit
};

// Least-squares quadric fit in the tangent frame of each vertex (normal from
// area-weighted face normals); |A| is the Frobenius norm of the fitted
// second fundamental form. Vertices listed in `exclude` never serve as fit
// neighbors (used for cone apexes, whose kink would poison the fit).
std::vector<ShapeEstimate> estimate_shape_operator(
    const MeshData& mesh, const std::vector<std::uint8_t>& exclude);

// Triangle mesh to MetricGraph: edges are chords, singular vertices (apex
// list from the sidecar) are removed, their neighbors become the near-sigma
// ring seeded with chord offsets, one-face edges mark the outer truncation,
// and dist_sigma is recomputed by a multi-source sweep. The sidecar is one
// vertex index per line; pass an empty path for a closed regular mesh.
MetricGraph ingest_mesh(const std::string& off_path,
                        const std::string& singular_sidecar = "");

}  // namespace unfold
