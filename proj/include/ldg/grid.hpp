#pragma once

// Uniform (rho, z) grid on the closed quarter disk rho, z >= 0, rho^2 + z^2 <= 1.
// Node (i, j) sits at (i h, j h) with h = 1 / n. Storage is the full
// (n + 1) x (n + 1) rectangle, z-major: index = j * n_rho + i.

#include <array>
#include <cstdint>
#include <vector>

#include "ldg/tensor_core.hpp"

namespace ldg {

namespace tag {
constexpr std::uint8_t kInterior = 0;
constexpr std::uint8_t kArc = 1;
constexpr std::uint8_t kAxis = 2;
constexpr std::uint8_t kEquator = 4;
}  // namespace tag

class Grid {
 public:
  explicit Grid(int n);

  int n() const { return n_; }
  int n_rho() const { return n_ + 1; }
  int n_z() const { return n_ + 1; }
  double h() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_rho()) * n_z(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_rho() + i; }

  double rho(int i) const { return i * h_; }
  double z(int j) const { return j * h_; }

  bool in_domain(int i, int j) const {
    return i >= 0 && j >= 0 && i <= n_ && j <= n_ && inside_[index(i, j)];
  }
  std::uint8_t tags(int i, int j) const { return tags_[index(i, j)]; }
  bool is_arc(int i, int j) const { return tags(i, j) & tag::kArc; }
  bool is_axis(int i, int j) const { return tags(i, j) & tag::kAxis; }
  bool is_equator(int i, int j) const { return tags(i, j) & tag::kEquator; }

  /// 4 pi times the rho-weighted area of (control cell of node) intersected with the disk.
  double weight(int i, int j) const { return weight_[index(i, j)]; }
  const std::vector<double>& weights() const { return weight_; }

  /// rho-weighted width of the control cell in rho: int rho d rho over the cell.
  double cell_rho_moment(int i) const { return i == 0 ? h_ * h_ / 8.0 : rho(i) * h_; }
  /// Width of the control cell in z.
  double cell_z_width(int j) const { return j == 0 ? 0.5 * h_ : h_; }

  /// Largest i in the domain on row j.
  int row_end(int j) const { return row_end_[j]; }

  std::size_t domain_count() const { return domain_count_; }
  std::size_t equator_count() const { return static_cast<std::size_t>(row_end_[0]) + 1; }

 private:
  int n_;
  double h_;
  std::vector<std::uint8_t> inside_;
  std::vector<std::uint8_t> tags_;
  std::vector<double> weight_;
  std::vector<int> row_end_;
  std::size_t domain_count_ = 0;
};

/// n >= 16, otherwise ResolutionTooCoarse.
Grid build_grid(int n);

/// Per-node UVec values on a grid-shaped rectangle. Values at nodes outside
/// the disk are carried along (the solver leaves them alone) so that bilinear
/// interpolation near the arc has four corners.
struct OrderField {
  int n_rho = 0;
  int n_z = 0;
  std::vector<UVec> values;

  OrderField() = default;
  explicit OrderField(const Grid& g) : n_rho(g.n_rho()), n_z(g.n_z()), values(g.size()) {}

  UVec& at(int i, int j) { return values[static_cast<std::size_t>(j) * n_rho + i]; }
  const UVec& at(int i, int j) const { return values[static_cast<std::size_t>(j) * n_rho + i]; }
};

/// Throws ShapeError if the field does not match the grid.
void check_shape(const OrderField& field, const Grid& grid);
void check_finite(const OrderField& field, const Grid& grid);

/// Set every node outside the closed disk, and every arc node, to H_a U*(phi).
void apply_boundary(OrderField& field, const Grid& grid, const Params& params);

/// Derivatives at a node: d[c][0] = d/drho u_c, d[c][1] = d/dz u_c.
using NodeGradient = std::array<std::array<double, 2>, 3>;

/// Central differences with symmetry ghosts across T and the axis,
/// one-sided where a neighbour leaves the disk. Non-domain entries are zero.
std::vector<NodeGradient> gradient(const OrderField& field, const Grid& grid);

/// Quadrature of a per-node density over B_1 (axially symmetric integrand).
double integrate(const std::vector<double>& density, const Grid& grid);

struct EquatorSample {
  double rho;
  UVec u;
};

std::vector<EquatorSample> restrict_to_T(const OrderField& field, const Grid& grid);

/// Bilinear interpolation at any (rho, z) with rho^2 + z^2 <= 1; negative z and
/// negative rho are handled by the R-axial reflections. OutOfDomain otherwise.
UVec interpolate(const OrderField& field, const Grid& grid, double rho, double z);

/// Prolong a field to a finer grid by bilinear interpolation.
OrderField prolong(const OrderField& coarse, const Grid& coarse_grid, const Grid& fine_grid);

}  // namespace ldg
