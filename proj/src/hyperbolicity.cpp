#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "hypflow/errors.hpp"
#include "hypflow/space.hpp"

namespace hypflow {

namespace {

// Work is always split into this many chunks so results do not depend on
// the number of hardware threads.
constexpr std::size_t kChunks = 8;

std::vector<double> distance_matrix(const Space& space, const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m[i * n + j] = m[j * n + i] = space.distance(pts[i], pts[j]);
    }
  }
  return m;
}

// Runs chunk(0..kChunks-1) concurrently and returns the largest result.
template <class Chunk>
double max_over_chunks(const Chunk& chunk) {
  std::vector<double> partial(kChunks, 0.0);
  std::vector<std::thread> workers;
  workers.reserve(kChunks);
  for (std::size_t c = 0; c < kChunks; ++c) {
    workers.emplace_back([&, c] { partial[c] = chunk(c); });
  }
  for (auto& w : workers) w.join();
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

SampleSpec SampleSpec::default_for(SpaceKind kind) {
  SampleSpec s;
  switch (kind) {
    case SpaceKind::Tree:
      s.kind = Kind::TreeVertices;
      break;
    case SpaceKind::HalfPlane:
      s.kind = Kind::Uniform;
      s.count = 200;
      s.u_lo = -5.0;
      s.u_hi = 5.0;
      s.y_lo = -2.0;
      s.y_hi = 2.0;
      s.seed = 20240601;
      break;
    case SpaceKind::Euclid2:
      s.kind = Kind::Grid;
      s.n = 10;
      s.side = 10.0;
      break;
  }
  return s;
}

std::vector<Point> sample_points(const Space& space, const SampleSpec& spec) {
  std::vector<Point> out;
  switch (spec.kind) {
    case SampleSpec::Kind::TreeVertices:
      if (space.kind() != SpaceKind::Tree) throw DomainError("vertex samples need a tree");
      for (std::size_t v : space.core_vertices()) out.emplace_back(space.vertex_point(v));
      break;
    case SampleSpec::Kind::Grid: {
      if (space.kind() == SpaceKind::Tree) throw DomainError("grid samples need a planar space");
      if (spec.n < 2) throw DomainError("grid needs n >= 2");
      const double h = spec.side / static_cast<double>(spec.n - 1);
      for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.n; ++j) {
          const double u = spec.u0 + h * static_cast<double>(i);
          const double y = spec.y0 + h * static_cast<double>(j);
          out.emplace_back(PlanePoint{u, space.kind() == SpaceKind::HalfPlane ? std::exp(y) : y});
        }
      }
      break;
    }
    case SampleSpec::Kind::Uniform: {
      std::mt19937_64 rng(spec.seed);
      if (space.kind() == SpaceKind::Tree) {
        std::uniform_int_distribution<std::size_t> pick(0, space.edges().size() - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < spec.count; ++i) {
          const std::size_t e = pick(rng);
          const auto& edge = space.edges()[e];
          const double len = edge.is_end ? spec.end_extent : edge.length;
          out.emplace_back(TreePoint{e, unit(rng) * len});
        }
      } else {
        std::uniform_real_distribution<double> du(spec.u_lo, spec.u_hi);
        std::uniform_real_distribution<double> dy(spec.y_lo, spec.y_hi);
        for (std::size_t i = 0; i < spec.count; ++i) {
          const double u = du(rng);
          const double y = dy(rng);
          out.emplace_back(PlanePoint{u, space.kind() == SpaceKind::HalfPlane ? std::exp(y) : y});
        }
      }
      break;
    }
  }
  for (const auto& p : out) space.validate(p);
  return out;
}

double four_point_defect(double dpx, double dpy, double dpz, double dxy, double dxz, double dyz) {
  // The defect of (x|z)_p >= min((x|y)_p, (y|z)_p) - delta over all twelve
  // labelings equals half the gap between the two largest pair sums.
  double s[3] = {dpx + dyz, dpy + dxz, dpz + dxy};
  std::sort(s, s + 3);
  return 0.5 * (s[2] - s[1]);
}

HyperbolicityEstimate estimate_delta(const Space& space, const std::vector<Point>& points,
                                     const DeltaMethod& method) {
  const std::size_t n = points.size();
  if (n < 4) throw DomainError("hyperbolicity estimation needs at least four points");
  const auto dm = distance_matrix(space, points);
  auto d = [&](std::size_t i, std::size_t j) { return dm[i * n + j]; };

  HyperbolicityEstimate est;
  est.method = method;

  if (method.kind == DeltaMethod::Kind::Exhaustive) {
    auto chunk = [&](std::size_t c) {
      double worst = 0.0;
      for (std::size_t i = c; i < n; i += kChunks) {
        for (std::size_t j = i + 1; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) {
            for (std::size_t l = k + 1; l < n; ++l) {
              worst = std::max(worst, four_point_defect(d(i, j), d(i, k), d(i, l), d(j, k), d(j, l), d(k, l)));
            }
          }
        }
      }
      return worst;
    };
    est.delta_hat = max_over_chunks(chunk);
    const auto nn = static_cast<std::uint64_t>(n);
    est.quadruple_count = nn * (nn - 1) * (nn - 2) * (nn - 3) / 24;
    return est;
  }

  const std::uint64_t per_chunk = method.quadruples / kChunks;
  const std::uint64_t extra = method.quadruples % kChunks;
  auto chunk = [&](std::size_t c) {
    std::mt19937_64 rng(method.seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::uint64_t count = per_chunk + (c < extra ? 1 : 0);
    double worst = 0.0;
    for (std::uint64_t q = 0; q < count; ++q) {
      std::size_t idx[4];
      for (int a = 0; a < 4; ++a) {
        bool fresh = false;
        while (!fresh) {
          idx[a] = pick(rng);
          fresh = std::find(idx, idx + a, idx[a]) == idx + a;
        }
      }
      worst = std::max(worst, four_point_defect(d(idx[0], idx[1]), d(idx[0], idx[2]), d(idx[0], idx[3]),
                                                d(idx[1], idx[2]), d(idx[1], idx[3]), d(idx[2], idx[3])));
    }
    return worst;
  };
  est.delta_hat = max_over_chunks(chunk);
  est.quadruple_count = method.quadruples;
  return est;
}

HyperbolicityEstimate estimate_delta(const Space& space, const SampleSpec& sample,
                                     const DeltaMethod& method) {
  return estimate_delta(space, sample_points(space, sample), method);
}

}  // namespace hypflow
