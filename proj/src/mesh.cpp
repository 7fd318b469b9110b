#include "unfold/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "unfold/sentinel.hpp"

namespace unfold {

namespace {

std::array<double, 3> cross3(const std::array<double, 3>& a,
                             const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

std::array<double, 3> sub3(const std::array<double, 3>& a,
                           const std::array<double, 3>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double norm3(const std::array<double, 3>& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

double face_area2(const MeshData& m, std::size_t f) {
  auto e1 = sub3(m.pts[m.faces[f][1]], m.pts[m.faces[f][0]]);
  auto e2 = sub3(m.pts[m.faces[f][2]], m.pts[m.faces[f][0]]);
  return norm3(cross3(e1, e2));
}

}  // namespace

MeshData read_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_off: cannot open " + path);
  auto next_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      auto h = line.find_first_not_of(" \t\r");
      if (h == std::string::npos) continue;
      if (line[h] == '#') continue;
      return true;
    }
    return false;
  };
  std::string line;
  if (!next_line(line)) throw std::runtime_error("read_off: empty file " + path);
  {
    std::istringstream ss(line);
    std::string magic;
    ss >> magic;
    if (magic != "OFF") throw std::runtime_error("read_off: missing OFF header");
  }
  if (!next_line(line)) throw std::runtime_error("read_off: missing counts line");
  std::size_t nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nf >> ne))
      throw std::runtime_error("read_off: bad counts line: " + line);
  }
  MeshData mesh;
  mesh.pts.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!next_line(line))
      throw std::runtime_error("read_off: truncated vertex list");
    std::istringstream ss(line);
    std::array<double, 3> p{};
    if (!(ss >> p[0] >> p[1] >> p[2]))
      throw std::runtime_error("read_off: bad vertex row: " + line);
    mesh.pts.push_back(p);
  }
  mesh.faces.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    if (!next_line(line)) throw std::runtime_error("read_off: truncated face list");
    std::istringstream ss(line);
    std::size_t cnt = 0;
    if (!(ss >> cnt)) throw std::runtime_error("read_off: bad face row: " + line);
    if (cnt != 3)
      throw std::runtime_error("read_off: face " + std::to_string(i) +
                               " is not a triangle");
    std::array<std::uint32_t, 3> f{};
    long long a, b, c;
    if (!(ss >> a >> b >> c))
      throw std::runtime_error("read_off: bad face row: " + line);
    for (auto idx : {a, b, c})
      if (idx < 0 || static_cast<std::size_t>(idx) >= nv)
        throw std::runtime_error("read_off: face " + std::to_string(i) +
                                 " has out-of-range vertex index");
    if (a == b || b == c || a == c)
      throw std::runtime_error("read_off: face " + std::to_string(i) +
                               " repeats a vertex");
    f = {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
         static_cast<std::uint32_t>(c)};
    mesh.faces.push_back(f);
  }
  // scale-aware zero-area guard
  double scale = 0;
  for (const auto& p : mesh.pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1]), std::abs(p[2])});
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (face_area2(mesh, f) < 1e-14 * scale * scale)
      throw std::runtime_error("read_off: face " + std::to_string(f) +
                               " has (near) zero area");
  }
  return mesh;
}

void write_off(const std::string& path, const MeshData& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_off: cannot write " + path);
  out << "OFF\n" << mesh.pts.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const auto& p : mesh.pts)
    out << format_double(p[0]) << ' ' << format_double(p[1]) << ' '
        << format_double(p[2]) << '\n';
  for (const auto& f : mesh.faces)
    out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

std::vector<ShapeEstimate> estimate_shape_operator(
    const MeshData& mesh, const std::vector<std::uint8_t>& exclude) {
  const std::size_t n = mesh.pts.size();
  std::vector<ShapeEstimate> out(n);

  // adjacency and accumulated (area-weighted) normals
  std::vector<std::set<std::uint32_t>> adj(n);
  std::vector<std::array<double, 3>> vnormal(n, {0, 0, 0});
  for (const auto& f : mesh.faces) {
    auto e1 = sub3(mesh.pts[f[1]], mesh.pts[f[0]]);
    auto e2 = sub3(mesh.pts[f[2]], mesh.pts[f[0]]);
    auto fn = cross3(e1, e2);  // length = 2 * area, orientation-weighted
    for (int k = 0; k < 3; ++k) {
      adj[f[k]].insert(f[(k + 1) % 3]);
      adj[f[k]].insert(f[(k + 2) % 3]);
      for (int c = 0; c < 3; ++c) vnormal[f[k]][c] += fn[c];
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (v < exclude.size() && exclude[v]) continue;
    double nn = norm3(vnormal[v]);
    if (nn <= 0) continue;  // isolated or degenerate: stays unreliable
    std::array<double, 3> nrm{vnormal[v][0] / nn, vnormal[v][1] / nn,
                              vnormal[v][2] / nn};
    // tangent frame
    std::array<double, 3> ref{1, 0, 0};
    if (std::abs(nrm[0]) > 0.9) ref = {0, 1, 0};
    auto t1 = cross3(nrm, ref);
    double t1n = norm3(t1);
    t1 = {t1[0] / t1n, t1[1] / t1n, t1[2] / t1n};
    auto t2 = cross3(nrm, t1);

    // neighbors: 1-ring, widened to 2-ring when thin; excluded vertices never
    // enter the fit
    std::vector<std::uint32_t> nbrs;
    for (auto w : adj[v])
      if (!(w < exclude.size() && exclude[w])) nbrs.push_back(w);
    if (nbrs.size() < 5) {
      std::set<std::uint32_t> wide(nbrs.begin(), nbrs.end());
      for (auto w : adj[v])
        for (auto w2 : adj[w]) {
          if (w2 == v || (w2 < exclude.size() && exclude[w2])) continue;
          wide.insert(w2);
        }
      nbrs.assign(wide.begin(), wide.end());
    }
    if (nbrs.size() < 5) continue;

    Eigen::MatrixXd Q(nbrs.size(), 5);
    Eigen::VectorXd z(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      auto d = sub3(mesh.pts[nbrs[i]], mesh.pts[v]);
      double u = d[0] * t1[0] + d[1] * t1[1] + d[2] * t1[2];
      double w = d[0] * t2[0] + d[1] * t2[1] + d[2] * t2[2];
      double h = d[0] * nrm[0] + d[1] * nrm[1] + d[2] * nrm[2];
      Q(i, 0) = u;
      Q(i, 1) = w;
      Q(i, 2) = u * u / 2;
      Q(i, 3) = u * w;
      Q(i, 4) = w * w / 2;
      z(i) = h;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Q);
    if (qr.rank() < 5) continue;
    Eigen::VectorXd coeff = qr.solve(z);
    // graph z = f(u,w): S = (I + grad grad^T)^{-1} H / sqrt(1 + |grad|^2)
    double fu = coeff(0), fw = coeff(1);
    Eigen::Matrix2d H;
    H << coeff(2), coeff(3), coeff(3), coeff(4);
    Eigen::Matrix2d G;
    G << 1 + fu * fu, fu * fw, fu * fw, 1 + fw * fw;
    Eigen::Matrix2d S = G.inverse() * H / std::sqrt(1 + fu * fu + fw * fw);
    double a2 = (S * S).trace();
    out[v].a = std::sqrt(std::max(0.0, a2));
    out[v].reliable = true;
  }
  return out;
}

MetricGraph ingest_mesh(const std::string& off_path,
                        const std::string& singular_sidecar) {
  MeshData mesh = read_off(off_path);
  const std::size_t nv = mesh.pts.size();

  std::vector<std::uint8_t> singular(nv, 0);
  std::string side = singular_sidecar;
  if (side.empty()) {
    std::string candidate = off_path + ".sing";
    if (std::filesystem::exists(candidate)) side = candidate;
  }
  std::size_t n_singular = 0;
  if (!side.empty()) {
    std::ifstream in(side);
    if (!in) throw std::runtime_error("ingest_mesh: cannot open sidecar " + side);
    std::string line;
    while (std::getline(in, line)) {
      auto h = line.find_first_not_of(" \t\r");
      if (h == std::string::npos || line[h] == '#') continue;
      std::size_t idx = std::stoul(line);
      if (idx >= nv)
        throw std::runtime_error("ingest_mesh: sidecar index out of range: " + line);
      if (!singular[idx]) {
        singular[idx] = 1;
        ++n_singular;
      }
    }
  }

  auto shape = estimate_shape_operator(mesh, singular);

  // unique chord edges + per-edge face counts (for boundary detection)
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_faces;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      std::uint32_t a = f[k], b = f[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_faces[{a, b}];
    }
  }

  // dense renumbering of surviving vertices
  std::vector<std::uint32_t> newid(nv, UINT32_MAX);
  std::uint32_t nn = 0;
  for (std::size_t v = 0; v < nv; ++v)
    if (!singular[v]) newid[v] = nn++;
  if (nn == 0) throw std::runtime_error("ingest_mesh: all vertices singular");

  MetricGraph g;
  g.ambient_dim = 3;
  g.chart_dim = 0;
  g.scale = 1.0;
  g.totally_geodesic = false;
  g.has_sigma = n_singular > 0;
  {
    std::filesystem::path p(off_path);
    g.id = "mesh:" + p.filename().string() + "|v=" + std::to_string(nn) +
           "|f=" + std::to_string(mesh.faces.size());
  }
  g.pos_base.resize(std::size_t(nn) * 3);
  g.a_base.assign(nn, 0.0);
  g.dist_sigma_base.assign(nn, kUnbounded);
  g.measure_base.assign(nn, 0.0);
  g.near_sigma_ring.assign(nn, 0);
  g.outer_truncation.assign(nn, 0);
  g.a_unreliable.assign(nn, 0);

  for (std::size_t v = 0; v < nv; ++v) {
    if (singular[v]) continue;
    std::uint32_t w = newid[v];
    for (int k = 0; k < 3; ++k) g.pos_base[std::size_t(w) * 3 + k] = mesh.pts[v][k];
    g.a_base[w] = shape[v].a;
    g.a_unreliable[w] = shape[v].reliable ? 0 : 1;
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    double third = face_area2(mesh, f) / 2.0 / 3.0;
    for (int k = 0; k < 3; ++k) {
      auto v = mesh.faces[f][k];
      if (!singular[v]) g.measure_base[newid[v]] += third;
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<double> lengths;
  bool any_boundary = false;
  for (const auto& [e, nfaces] : edge_faces) {
    auto [a, b] = e;
    const bool boundary_edge = nfaces == 1;
    if (singular[a] || singular[b]) {
      // chord to a removed apex seeds the ring offset of the survivor
      if (singular[a] != singular[b]) {
        std::uint32_t keep = singular[a] ? b : a;
        double chord = norm3(sub3(mesh.pts[a], mesh.pts[b]));
        std::uint32_t w = newid[keep];
        g.near_sigma_ring[w] = 1;
        if (chord < g.dist_sigma_base[w]) g.dist_sigma_base[w] = chord;
      }
      continue;
    }
    if (boundary_edge) {
      any_boundary = true;
      g.outer_truncation[newid[a]] = 1;
      g.outer_truncation[newid[b]] = 1;
    }
    double chord = norm3(sub3(mesh.pts[a], mesh.pts[b]));
    if (!(chord > 0)) throw std::runtime_error("ingest_mesh: zero-length edge");
    edges.emplace_back(std::min(newid[a], newid[b]), std::max(newid[a], newid[b]));
    lengths.push_back(chord);
  }
  g.compact_without_boundary = !any_boundary && n_singular == 0;

  // CSR assembly (same canonicalization as the grid builder)
  {
    std::vector<std::uint32_t> order(edges.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
      return edges[x] < edges[y];
    });
    g.eu.resize(edges.size());
    g.ev.resize(edges.size());
    g.elen_base.resize(edges.size());
    for (std::uint32_t k = 0; k < order.size(); ++k) {
      g.eu[k] = edges[order[k]].first;
      g.ev[k] = edges[order[k]].second;
      g.elen_base[k] = lengths[order[k]];
    }
    g.offsets.assign(std::size_t(nn) + 1, 0);
    for (std::size_t e = 0; e < g.eu.size(); ++e) {
      ++g.offsets[g.eu[e] + 1];
      ++g.offsets[g.ev[e] + 1];
    }
    for (std::size_t i = 0; i < nn; ++i) g.offsets[i + 1] += g.offsets[i];
    g.nbr.resize(2 * g.eu.size());
    g.inc_edge.resize(2 * g.eu.size());
    std::vector<std::uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (std::uint32_t e = 0; e < g.eu.size(); ++e) {
      g.nbr[cursor[g.eu[e]]] = g.ev[e];
      g.inc_edge[cursor[g.eu[e]]++] = e;
      g.nbr[cursor[g.ev[e]]] = g.eu[e];
      g.inc_edge[cursor[g.ev[e]]++] = e;
    }
    for (std::size_t v = 0; v < nn; ++v) {
      std::uint32_t lo = g.offsets[v], hi = g.offsets[v + 1];
      std::vector<std::pair<std::uint32_t, std::uint32_t>> tmp;
      tmp.reserve(hi - lo);
      for (std::uint32_t s = lo; s < hi; ++s)
        tmp.emplace_back(g.nbr[s], g.inc_edge[s]);
      std::sort(tmp.begin(), tmp.end());
      for (std::uint32_t s = lo; s < hi; ++s) {
        g.nbr[s] = tmp[s - lo].first;
        g.inc_edge[s] = tmp[s - lo].second;
      }
    }
    g.h_base = 0;
    for (double l : g.elen_base) g.h_base = std::max(g.h_base, l);
  }

  if (!graph_connected(g))
    throw std::runtime_error(
        "ingest_mesh: removing singular vertices disconnected the mesh");

  // distance to the singular set from the seeded ring
  if (g.has_sigma) {
    auto d = recompute_dist_sigma(g);
    g.dist_sigma_base = std::move(d);
  }
  return g;
}

}  // namespace unfold
