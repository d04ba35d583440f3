#include "unihead/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "unihead/errors.hpp"
#include "unihead/rng.hpp"
#include "unihead/specialfn.hpp"

namespace unihead {

SpherePoint::SpherePoint(Vec coords) : x_(std::move(coords)) {
  if (x_.size() < 2) throw DomainError("SpherePoint needs at least 2 coordinates");
  if (!(std::fabs(x_.norm() - 1.0) <= 1e-12)) throw DomainError("SpherePoint must have unit norm");
}

double SpherePoint::dot(const SpherePoint& o) const {
  if (o.dim() != dim()) throw DimensionMismatch("SpherePoint dimension mismatch");
  return x_.dot(o.x_);
}

SpherePoint project_to_sphere(const Vec& v) {
  if (v.size() < 2) throw DomainError("project_to_sphere: need length >= 2");
  const double n = v.norm();
  if (!(n > 0.0)) throw DegenerateInput("project_to_sphere: zero vector");
  if (!std::isfinite(n)) throw DegenerateInput("project_to_sphere: non-finite input");
  return SpherePoint(v / n);
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("geodesic_distance: dimension mismatch");
  return std::acos(std::clamp(x.coords().dot(y.coords()), -1.0, 1.0));
}

double log_surface_area(int m) {
  if (m < 1) throw DomainError("surface_area: m must be >= 1");
  const double h = 0.5 * (m + 1);
  return std::log(2.0) + h * std::log(M_PI) - log_gamma(h);
}

double surface_area(int m) { return std::exp(log_surface_area(m)); }

double cap_area(int m, double delta) {
  if (m < 1) throw DomainError("cap_area: m must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("cap_area: delta must be in (0,1]");
  // sin^2(phi) with cos(phi) = 1 - delta
  const double s2 = delta * (2.0 - delta);
  return 0.5 * surface_area(m) * reg_inc_beta(std::min(1.0, s2), 0.5 * m, 0.5);
}

double cap_area_by_radius(int m, double s) {
  if (m < 1) throw DomainError("cap_area_by_radius: m must be >= 1");
  if (!(s >= 0.0 && s <= M_PI)) throw DomainError("cap_area_by_radius: radius must be in [0, pi]");
  if (m == 1) return 2.0 * s;
  if (m == 2) return 4.0 * M_PI * std::pow(std::sin(0.5 * s), 2);
  const double h = std::sin(0.5 * s);
  return surface_area(m) * reg_inc_beta(std::min(1.0, h * h), 0.5 * m, 0.5 * m);
}

// ---------------------------------------------------------------------------
// Recursive zonal equal-area partition (Leopardi's EQSP scheme).

struct Partition::Node {
  int dim = 1;
  int n = 1;
  std::size_t offset = 0;
  std::vector<double> bottoms;             // bottom colatitude of each zone
  std::vector<std::size_t> zone_offset;    // first cell index of each zone
  std::vector<std::shared_ptr<Node>> sub;  // collar sub-partitions (null for caps)
};

namespace {

struct LocalRegion {
  Vec center;
  double radius;
  double measure;
};

double sradius_of_cap(int dim, double area) {
  if (dim == 1) return 0.5 * area;
  if (dim == 2) return 2.0 * std::asin(std::min(1.0, std::sqrt(area / M_PI) * 0.5));
  const double w = surface_area(dim);
  if (area >= w) return M_PI;
  double lo = 0.0, hi = M_PI;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cap_area_by_radius(dim, mid) < area)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double polar_colat(int dim, int N) {
  if (N == 1) return M_PI;
  if (N == 2) return 0.5 * M_PI;
  return sradius_of_cap(dim, surface_area(dim) / N);
}

Vec pole(int dim, double sign) {
  Vec v = Vec::Zero(dim + 1);
  v[dim] = sign;
  return v;
}

std::shared_ptr<Partition::Node> build(int dim, int N, std::size_t offset,
                                       std::vector<LocalRegion>& out) {
  auto node = std::make_shared<Partition::Node>();
  node->dim = dim;
  node->n = N;
  node->offset = offset;
  const double w = surface_area(dim);

  if (N == 1) {
    out.push_back({pole(dim, 1.0), M_PI, w});
    return node;
  }
  if (dim == 1) {
    for (int k = 0; k < N; ++k) {
      const double phi = (k + 0.5) * 2.0 * M_PI / N;
      Vec c(2);
      c << std::cos(phi), std::sin(phi);
      out.push_back({c, M_PI / N, w / N});
    }
    return node;
  }

  const double c_polar = polar_colat(dim, N);
  const double a_ideal = std::pow(w / N, 1.0 / dim);
  int n_collars = 0;
  if (N > 2 && a_ideal > 0.0)
    n_collars = std::max(1, static_cast<int>(std::lround((M_PI - 2.0 * c_polar) / a_ideal)));

  const int zones = n_collars + 2;
  std::vector<double> ideal(zones, 1.0);
  if (n_collars > 0) {
    const double a_fit = (M_PI - 2.0 * c_polar) / n_collars;
    for (int z = 1; z <= n_collars; ++z) {
      const double top = c_polar + (z - 1) * a_fit;
      const double bot = c_polar + z * a_fit;
      ideal[z] = (cap_area_by_radius(dim, bot) - cap_area_by_radius(dim, top)) / (w / N);
    }
  }
  std::vector<int> count(zones);
  double discrepancy = 0.0;
  for (int z = 0; z < zones; ++z) {
    count[z] = static_cast<int>(std::lround(ideal[z] + discrepancy));
    discrepancy += ideal[z] - count[z];
  }

  std::vector<double> bottoms(zones);
  bottoms[0] = c_polar;
  double subtotal = 1.0;
  for (int z = 1; z <= n_collars; ++z) {
    subtotal += count[z];
    bottoms[z] = sradius_of_cap(dim, subtotal * w / N);
  }
  bottoms[zones - 1] = M_PI;
  node->bottoms = bottoms;
  node->zone_offset.resize(zones);
  node->sub.resize(zones);

  std::size_t next = offset;
  node->zone_offset[0] = next;
  out.push_back({pole(dim, 1.0), c_polar, cap_area_by_radius(dim, c_polar)});
  ++next;

  for (int z = 1; z <= n_collars; ++z) {
    const double top = bottoms[z - 1], bot = bottoms[z];
    const double zone_area = cap_area_by_radius(dim, bot) - cap_area_by_radius(dim, top);
    const double mid = 0.5 * (top + bot);
    const double s = std::sin(mid), c = std::cos(mid);
    std::vector<LocalRegion> sub;
    node->zone_offset[z] = next;
    node->sub[z] = build(dim - 1, count[z], next, sub);
    const double w_sub = surface_area(dim - 1);
    for (auto& r : sub) {
      Vec p(dim + 1);
      p.head(dim) = s * r.center;
      p[dim] = c;
      const double radius = std::min(M_PI, std::max(mid - top, bot - mid) + s * r.radius);
      out.push_back({p, radius, zone_area * r.measure / w_sub});
    }
    next += sub.size();
  }

  node->zone_offset[zones - 1] = next;
  const double last_top = bottoms[zones - 2];
  out.push_back({pole(dim, -1.0), M_PI - last_top, w - cap_area_by_radius(dim, last_top)});
  return node;
}

std::size_t locate_in(const Partition::Node& node, const Vec& x) {
  if (node.n == 1) return node.offset;
  if (node.dim == 1) {
    double phi = std::atan2(x[1], x[0]);
    if (phi < 0.0) phi += 2.0 * M_PI;
    auto k = static_cast<std::size_t>(phi / (2.0 * M_PI / node.n));
    return node.offset + std::min<std::size_t>(k, node.n - 1);
  }
  const int dim = node.dim;
  const double theta = std::acos(std::clamp(x[dim], -1.0, 1.0));
  const std::size_t zones = node.bottoms.size();
  std::size_t z = 0;
  while (z + 1 < zones && theta > node.bottoms[z]) ++z;
  if (z == 0 || z + 1 == zones) return node.zone_offset[z];
  Vec u = x.head(dim);
  const double n = u.norm();
  if (n > 0.0)
    u /= n;
  else
    u = pole(dim - 1, 1.0);
  return locate_in(*node.sub[z], u);
}

Partition random_partition(int m, int N, std::uint64_t seed) {
  Partition part;
  part.m = m;
  part.estimated = true;
  auto centers = uniform_sphere_sample(m, N, derive_seed(seed, 1));
  const int samples = std::max(1000, 400 * N);
  auto probes = uniform_sphere_sample(m, samples, derive_seed(seed, 2));
  std::vector<long> hits(N, 0);
  std::vector<double> radius(N, 0.0);
  for (const auto& y : probes) {
    int best = 0;
    double best_dot = -2.0;
    for (int k = 0; k < N; ++k) {
      const double d = centers[k].coords().dot(y.coords());
      if (d > best_dot) {
        best_dot = d;
        best = k;
      }
    }
    ++hits[best];
    radius[best] = std::max(radius[best], std::acos(std::clamp(best_dot, -1.0, 1.0)));
  }
  const double w = surface_area(m);
  for (int k = 0; k < N; ++k)
    part.cells.push_back({centers[k], w * hits[k] / samples, radius[k]});
  return part;
}

}  // namespace

std::size_t Partition::locate(const SpherePoint& x) const {
  if (x.m() != m) throw DimensionMismatch("Partition::locate: dimension mismatch");
  if (tree) return locate_in(*tree, x.coords());
  std::size_t best = 0;
  double best_dot = -2.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double d = cells[k].center.coords().dot(x.coords());
    if (d > best_dot) {
      best_dot = d;
      best = k;
    }
  }
  return best;
}

Partition equal_area_partition(int m, int N, std::uint64_t seed, PartitionMode mode) {
  if (m < 1) throw DomainError("equal_area_partition: m must be >= 1");
  if (N < 1) throw DomainError("equal_area_partition: N must be >= 1");
  if (mode == PartitionMode::Random) return random_partition(m, N, seed);
  std::vector<LocalRegion> regions;
  regions.reserve(N);
  Partition part;
  part.m = m;
  part.tree = build(m, N, 0, regions);
  part.cells.reserve(regions.size());
  for (auto& r : regions) part.cells.push_back({project_to_sphere(r.center), r.measure, r.radius});
  return part;
}

std::vector<SpherePoint> uniform_sphere_sample(int m, int count, std::uint64_t seed) {
  if (m < 1) throw DomainError("uniform_sphere_sample: m must be >= 1");
  if (count < 1) throw DomainError("uniform_sphere_sample: count must be >= 1");
  // Fixed-size chunks with their own seeds: the i-th point depends only on
  // (seed, i), so any prefix of a longer run is reproduced exactly.
  constexpr int kChunk = 4096;
  const int chunks = (count + kChunk - 1) / kChunk;
  std::vector<Vec> raw(count);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; ++c) {
    Engine eng = make_engine(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::normal_distribution<double> g(0.0, 1.0);
    const int end = std::min(count, (c + 1) * kChunk);
    for (int i = c * kChunk; i < end; ++i) {
      Vec v(m + 1);
      double n = 0.0;
      while (!(n > 1e-150)) {
        for (int d = 0; d <= m; ++d) v[d] = g(eng);
        n = v.norm();
      }
      raw[i] = v / n;
    }
  }
  std::vector<SpherePoint> out;
  out.reserve(count);
  for (auto& v : raw) out.emplace_back(std::move(v));
  return out;
}

Vec stereographic(const SpherePoint& x) {
  const int m = x.m();
  const double last = x[m];
  if (!(last < 1.0)) throw PoleSingularity("stereographic: point is the projection pole");
  return x.coords().head(m) / (1.0 - last);
}

SpherePoint stereographic_inverse(const Vec& y) {
  if (y.size() < 1) throw DomainError("stereographic_inverse: need length >= 1");
  const double s = y.squaredNorm();
  Vec x(y.size() + 1);
  if (!std::isfinite(s)) throw DomainError("stereographic_inverse: non-finite input");
  x.head(y.size()) = 2.0 * y / (s + 1.0);
  x[y.size()] = (s - 1.0) / (s + 1.0);
  return SpherePoint(x / x.norm());
}

void to_json(nlohmann::json& j, const Partition& p) {
  j = nlohmann::json{{"m", p.m}, {"estimated", p.estimated}};
  auto& cells = j["cells"] = nlohmann::json::array();
  for (const auto& c : p.cells) {
    std::vector<double> center(c.center.coords().data(),
                               c.center.coords().data() + c.center.coords().size());
    cells.push_back({{"center", center}, {"measure", c.measure}, {"radius_bound", c.radius_bound}});
  }
}

}  // namespace unihead
