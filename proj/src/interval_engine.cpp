#include "colprob/interval_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace colprob {

IntegrationGrid build_grid(double rho_bar, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("grid needs at least 2 samples");
  if (!(rho_bar >= 0.0)) throw std::invalid_argument("rho_bar must be >= 0");
  IntegrationGrid g;
  g.n_samples = n_samples;
  g.rho_bar = rho_bar;
  g.delta_phi = kTwoPi / (n_samples - 1);
  g.delta_rho = rho_bar / (n_samples - 1);
  g.phi.resize(n_samples);
  g.rho.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    g.phi[i] = i * g.delta_phi;
    g.rho[i] = i * g.delta_rho;
  }
  // Pin the far ends so the grid spans the domains exactly.
  g.phi.back() = kTwoPi;
  g.rho.back() = rho_bar;
  return g;
}

IntervalGridMatrix::IntervalGridMatrix(std::size_t n_points, int n_ego,
                                       int n_object)
    : n_points_(n_points),
      n_ego_(n_ego),
      n_object_(n_object),
      n_pairs_(n_ego * n_object),
      data_(n_points * static_cast<std::size_t>(n_pairs_)) {}

namespace {

AngleInterval rotate_half_turn(const AngleInterval& iv) {
  if (iv.is_full()) return iv;
  return AngleInterval::from_lower_width(iv.lower() + kPi, iv.width());
}

} // namespace

void point_raw_intervals(const CircleCover& ego, const CircleCover& object,
                         double x, double y, std::span<AngleInterval> out) {
  const double joint = ego.radius + object.radius;
  const int n_e = ego.n_circles, n_o = object.n_circles;
  if (out.size() != static_cast<std::size_t>(n_e) * n_o) {
    throw std::invalid_argument("point_raw_intervals: wrong span length");
  }
  for (int l = 0; l < n_e; ++l) {
    const auto sp = shift_polar(x, y, ego.offsets[l]);
    for (int q = 0; q < n_o; ++q) {
      const double off = object.offsets[q];
      if (off < 0.0) continue; // mirrored below
      const auto iv = heading_bounds(sp.phi, sp.rho, off, joint);
      out[l * n_o + q] = iv;
      if (off > 0.0) {
        // Circle at -off: same geometry rotated by a half turn.
        out[l * n_o + (n_o - 1 - q)] = rotate_half_turn(iv);
      }
    }
  }
}

IntervalGridMatrix intersection_intervals(const CircleCover& ego,
                                          const CircleCover& object,
                                          const IntegrationGrid& grid) {
  const int n_e = ego.n_circles, n_o = object.n_circles;
  IntervalGridMatrix m(grid.n_points(), n_e, n_o);
  const int n_s = grid.n_samples;
  for (int j = 0; j < n_s; ++j) {
    const double cph = std::cos(grid.phi[j]);
    const double sph = std::sin(grid.phi[j]);
    for (int mm = 0; mm < n_s; ++mm) {
      const std::size_t point = static_cast<std::size_t>(j) * n_s + mm;
      const double x = grid.rho[mm] * cph;
      const double y = grid.rho[mm] * sph;
      point_raw_intervals(ego, object, x, y,
                          {&m.at(point, 0), static_cast<std::size_t>(n_e) * n_o});
    }
  }
  return m;
}

void merge_point_intervals(std::span<const AngleInterval> raw,
                           std::vector<AngleInterval>& out) {
  // Collect entries that carry measure; a full circle dominates everything.
  struct Seg {
    double lo, width;
  };
  Seg segs[64];
  if (raw.size() > 64) throw std::invalid_argument("too many raw intervals per point");
  int n = 0;
  for (const auto& iv : raw) {
    if (iv.is_full()) {
      out.push_back(AngleInterval::full());
      return;
    }
    if (iv.is_empty()) continue;
    segs[n++] = {iv.lower(), iv.width()};
  }
  if (n == 0) return;

  // Pairwise circular unions until no pair overlaps (fixpoint).
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n && !changed; ++i) {
      for (int j = i + 1; j < n && !changed; ++j) {
        const double ij = wrap_angle(segs[j].lo - segs[i].lo);
        const double ji = wrap_angle(segs[i].lo - segs[j].lo);
        Seg merged;
        if (ij <= segs[i].width) {
          merged = {segs[i].lo, std::max(segs[i].width, ij + segs[j].width)};
        } else if (ji <= segs[j].width) {
          merged = {segs[j].lo, std::max(segs[j].width, ji + segs[i].width)};
        } else {
          continue;
        }
        if (merged.width >= kTwoPi) {
          out.push_back(AngleInterval::full());
          return;
        }
        segs[i] = merged;
        segs[j] = segs[n - 1];
        --n;
        changed = true;
      }
    }
  }

  std::sort(segs, segs + n,
            [](const Seg& a, const Seg& b) { return a.lo < b.lo; });
  for (int i = 0; i < n; ++i) {
    out.push_back(AngleInterval::from_lower_width(segs[i].lo, segs[i].width));
  }
}

DisjointIntervalSet DisjointIntervalSet::from_parts(
    std::vector<std::uint32_t> starts, std::vector<AngleInterval> flat) {
  if (starts.empty() || starts.front() != 0 || starts.back() != flat.size()) {
    throw std::invalid_argument("inconsistent interval set layout");
  }
  DisjointIntervalSet s;
  s.starts_ = std::move(starts);
  s.flat_ = std::move(flat);
  return s;
}

DisjointIntervalSet sort_disjoint(const IntervalGridMatrix& matrix) {
  std::vector<std::uint32_t> starts;
  starts.reserve(matrix.n_points() + 1);
  starts.push_back(0);
  std::vector<AngleInterval> flat;
  std::vector<AngleInterval> point;
  for (std::size_t p = 0; p < matrix.n_points(); ++p) {
    point.clear();
    merge_point_intervals({&matrix.at(p, 0), static_cast<std::size_t>(matrix.n_pairs())},
                          point);
    flat.insert(flat.end(), point.begin(), point.end());
    starts.push_back(static_cast<std::uint32_t>(flat.size()));
  }
  return DisjointIntervalSet::from_parts(std::move(starts), std::move(flat));
}

std::string serialize_interval_cache(const IntervalCacheKey& key,
                                     const IntegrationGrid& grid,
                                     const DisjointIntervalSet& set) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["key"] = {{"ego_length", key.ego_length}, {"ego_width", key.ego_width},
              {"obj_length", key.obj_length}, {"obj_width", key.obj_width},
              {"n_ego", key.n_ego},           {"n_obj", key.n_obj},
              {"n_samples", key.n_samples}};
  j["rho_bar"] = grid.rho_bar;
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t p = 0; p < set.n_points(); ++p) {
    nlohmann::json ivs = nlohmann::json::array();
    for (const auto& iv : set.at(p)) {
      ivs.push_back({iv.lower(), iv.width()});
    }
    points.push_back(std::move(ivs));
  }
  j["points"] = std::move(points);
  return j.dump();
}

IntervalCache deserialize_interval_cache(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("schema_version").get<int>() != 1) {
    throw std::invalid_argument("unsupported interval cache schema");
  }
  IntervalCache cache;
  const auto& k = j.at("key");
  cache.key = {k.at("ego_length").get<double>(), k.at("ego_width").get<double>(),
               k.at("obj_length").get<double>(), k.at("obj_width").get<double>(),
               k.at("n_ego").get<int>(),         k.at("n_obj").get<int>(),
               k.at("n_samples").get<int>()};
  cache.grid = build_grid(j.at("rho_bar").get<double>(), cache.key.n_samples);
  const auto& points = j.at("points");
  if (points.size() != cache.grid.n_points()) {
    throw std::invalid_argument("interval cache does not match its grid");
  }
  std::vector<std::uint32_t> starts;
  starts.reserve(points.size() + 1);
  starts.push_back(0);
  std::vector<AngleInterval> flat;
  for (const auto& ivs : points) {
    for (const auto& iv : ivs) {
      flat.push_back(AngleInterval::from_lower_width(iv.at(0).get<double>(),
                                                     iv.at(1).get<double>()));
    }
    starts.push_back(static_cast<std::uint32_t>(flat.size()));
  }
  cache.intervals = DisjointIntervalSet::from_parts(std::move(starts), std::move(flat));
  return cache;
}

} // namespace colprob
