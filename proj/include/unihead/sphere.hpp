#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include "json.hpp"
#include <vector>

namespace unihead {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Unit vector in R^{m+1}, m >= 1.
class SpherePoint {
 public:
  explicit SpherePoint(Vec coords);
  const Vec& coords() const { return x_; }
  int m() const { return static_cast<int>(x_.size()) - 1; }
  int dim() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_[i]; }
  double dot(const SpherePoint& o) const;

 private:
  Vec x_;
};

SpherePoint project_to_sphere(const Vec& v);
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

// w_m, the surface area of S^m.
double surface_area(int m);
double log_surface_area(int m);

// Area of the cap {x : <x, pole> >= 1 - delta}.
double cap_area(int m, double delta);

// Area of the cap of geodesic radius s, valid on [0, pi].
double cap_area_by_radius(int m, double s);

struct Cell {
  SpherePoint center;
  double measure;
  double radius_bound;
};

enum class PartitionMode { Zonal, Random };

class Partition {
 public:
  struct Node;

  int m = 0;
  std::vector<Cell> cells;
  bool estimated = false;  // measures are Monte-Carlo estimates (random mode)

  std::size_t size() const { return cells.size(); }
  // Index of the cell containing x.
  std::size_t locate(const SpherePoint& x) const;

  std::shared_ptr<const Node> tree;  // zonal mode only
};

Partition equal_area_partition(int m, int N, std::uint64_t seed,
                               PartitionMode mode = PartitionMode::Zonal);

std::vector<SpherePoint> uniform_sphere_sample(int m, int count, std::uint64_t seed);

Vec stereographic(const SpherePoint& x);
SpherePoint stereographic_inverse(const Vec& y);

void to_json(nlohmann::json& j, const Partition& p);

}  // namespace unihead
