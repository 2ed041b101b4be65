#include "ldg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

// int_{za}^{zb} int_{ra}^{rb} rho [rho^2 + z^2 <= 1] d rho dz, exact.
double disk_rho_moment(double ra, double rb, double za, double zb) {
  auto overlap = [&](double lo, double hi) { return std::max(0.0, std::min(hi, zb) - std::max(lo, za)); };
  const double z1 = rb < 1.0 ? std::sqrt(1.0 - rb * rb) : 0.0;
  const double z2 = ra < 1.0 ? std::sqrt(1.0 - ra * ra) : 0.0;
  double total = 0.5 * (rb * rb - ra * ra) * overlap(0.0, z1);
  const double lo = std::max(z1, za), hi = std::min(z2, zb);
  if (hi > lo) {
    // int 1/2 (1 - ra^2 - z^2) dz
    const double c = 1.0 - ra * ra;
    total += 0.5 * (c * (hi - lo) - (hi * hi * hi - lo * lo * lo) / 3.0);
  }
  return total;
}

}  // namespace

Grid::Grid(int n) : n_(n), h_(1.0 / n) {
  if (n < 16) throw Error(ErrorCode::ResolutionTooCoarse, "grid resolution must be at least 16");
  const std::size_t count = size();
  inside_.assign(count, 0);
  tags_.assign(count, tag::kInterior);
  weight_.assign(count, 0.0);
  row_end_.assign(n_ + 1, -1);
  const long long n2 = static_cast<long long>(n) * n;
  auto inside = [&](int i, int j) {
    return i >= 0 && j >= 0 && i <= n_ && j <= n_ && static_cast<long long>(i) * i + static_cast<long long>(j) * j <= n2;
  };
  for (int j = 0; j <= n_; ++j) {
    for (int i = 0; i <= n_; ++i) {
      if (!inside(i, j)) continue;
      const std::size_t k = index(i, j);
      inside_[k] = 1;
      ++domain_count_;
      row_end_[j] = i;
      std::uint8_t t = tag::kInterior;
      if (!inside(i + 1, j) || !inside(i, j + 1)) t |= tag::kArc;
      if (i == 0) t |= tag::kAxis;
      if (j == 0) t |= tag::kEquator;
      tags_[k] = t;
      const double ra = std::max(0.0, (i - 0.5) * h_), rb = (i + 0.5) * h_;
      const double za = std::max(0.0, (j - 0.5) * h_), zb = (j + 0.5) * h_;
      weight_[k] = 4.0 * std::numbers::pi * disk_rho_moment(ra, rb, za, zb);
    }
  }
}

Grid build_grid(int n) { return Grid(n); }

void check_shape(const OrderField& field, const Grid& grid) {
  if (field.n_rho != grid.n_rho() || field.n_z != grid.n_z() || field.values.size() != grid.size())
    throw Error(ErrorCode::ShapeError, "field dimensions do not match grid");
}

void check_finite(const OrderField& field, const Grid& grid) {
  check_shape(field, grid);
  for (const auto& v : field.values)
    if (!std::isfinite(v.u1) || !std::isfinite(v.u2) || !std::isfinite(v.u3))
      throw Error(ErrorCode::NonFiniteField, "field contains NaN or Inf");
}

void apply_boundary(OrderField& field, const Grid& grid, const Params& params) {
  check_shape(field, grid);
  for (int j = 0; j <= grid.n(); ++j) {
    for (int i = 0; i <= grid.n(); ++i) {
      if (grid.in_domain(i, j) && !grid.is_arc(i, j)) continue;
      const double phi = std::atan2(grid.rho(i), grid.z(j));
      UVec v = boundary_value(phi, params);
      if (i == 0) v.u1 = v.u3 = 0.0;
      if (j == 0) v.u3 = 0.0;
      field.at(i, j) = v;
    }
  }
}

std::vector<NodeGradient> gradient(const OrderField& field, const Grid& grid) {
  check_shape(field, grid);
  const int n = grid.n();
  const double h = grid.h();
  std::vector<NodeGradient> out(grid.size(), NodeGradient{});
  // Mirror across T: u1, u2 even, u3 odd. Across the axis: u2 even, u1, u3 odd.
  constexpr std::array<double, 3> z_parity{1.0, 1.0, -1.0};
  constexpr std::array<double, 3> rho_parity{-1.0, 1.0, -1.0};
  auto comp = [](const UVec& v, int c) { return c == 0 ? v.u1 : (c == 1 ? v.u2 : v.u3); };
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= grid.row_end(j); ++i) {
      NodeGradient& d = out[grid.index(i, j)];
      const UVec& u0 = field.at(i, j);
      for (int c = 0; c < 3; ++c) {
        const double v0 = comp(u0, c);
        // rho direction
        const bool has_right = grid.in_domain(i + 1, j);
        if (i == 0) {
          const double vr = comp(field.at(1, j), c);
          d[c][0] = (vr - rho_parity[c] * vr) / (2.0 * h);
        } else if (has_right) {
          d[c][0] = (comp(field.at(i + 1, j), c) - comp(field.at(i - 1, j), c)) / (2.0 * h);
        } else {
          d[c][0] = (v0 - comp(field.at(i - 1, j), c)) / h;
        }
        // z direction
        const bool has_up = grid.in_domain(i, j + 1);
        if (j == 0) {
          const double vu = comp(field.at(i, 1), c);
          d[c][1] = (vu - z_parity[c] * vu) / (2.0 * h);
        } else if (has_up) {
          d[c][1] = (comp(field.at(i, j + 1), c) - comp(field.at(i, j - 1), c)) / (2.0 * h);
        } else {
          d[c][1] = (v0 - comp(field.at(i, j - 1), c)) / h;
        }
      }
    }
  }
  return out;
}

double integrate(const std::vector<double>& density, const Grid& grid) {
  if (density.size() != grid.size()) throw Error(ErrorCode::ShapeError, "density size does not match grid");
  const auto& w = grid.weights();
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] != 0.0) total += w[k] * density[k];
  return total;
}

std::vector<EquatorSample> restrict_to_T(const OrderField& field, const Grid& grid) {
  check_shape(field, grid);
  std::vector<EquatorSample> out;
  out.reserve(grid.equator_count());
  for (int i = 0; i <= grid.row_end(0); ++i) out.push_back({grid.rho(i), field.at(i, 0)});
  return out;
}

UVec interpolate(const OrderField& field, const Grid& grid, double rho, double z) {
  check_shape(field, grid);
  if (!(rho * rho + z * z <= 1.0 + 1e-12)) throw Error(ErrorCode::OutOfDomain, "point outside the unit disk");
  double s3 = 1.0;
  if (z < 0.0) {
    z = -z;
    s3 = -s3;
  }
  if (rho < 0.0) {
    rho = -rho;
    s3 = -s3;
  }
  const int n = grid.n();
  const double x = rho * n, y = z * n;
  const int i0 = std::min(static_cast<int>(std::floor(x)), n - 1);
  const int j0 = std::min(static_cast<int>(std::floor(y)), n - 1);
  const double tx = x - i0, ty = y - j0;
  const UVec& a = field.at(i0, j0);
  const UVec& b = field.at(i0 + 1, j0);
  const UVec& c = field.at(i0, j0 + 1);
  const UVec& d = field.at(i0 + 1, j0 + 1);
  UVec v = (1 - tx) * (1 - ty) * a + tx * (1 - ty) * b + (1 - tx) * ty * c + tx * ty * d;
  v.u3 *= s3;
  return v;
}

OrderField prolong(const OrderField& coarse, const Grid& coarse_grid, const Grid& fine_grid) {
  check_shape(coarse, coarse_grid);
  OrderField fine(fine_grid);
  for (int j = 0; j <= fine_grid.n(); ++j) {
    for (int i = 0; i <= fine_grid.n(); ++i) {
      double r = fine_grid.rho(i), z = fine_grid.z(j);
      const double rr = std::hypot(r, z);
      if (rr > 1.0) {
        r /= rr;
        z /= rr;
      }
      fine.at(i, j) = interpolate(coarse, coarse_grid, r, z);
    }
  }
  return fine;
}

}  // namespace ldg
