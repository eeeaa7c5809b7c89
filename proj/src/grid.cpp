#include "tripoint/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripoint/errors.hpp"

namespace tripoint {

DiskGrid DiskGrid::disk(int n) {
  if (n < 8) throw InvalidArgument("grid needs at least 8 nodes per side");
  DiskGrid g;
  g.n_ = n;
  g.h_ = 2.0 / (n - 1);
  g.kind_.assign(static_cast<std::size_t>(n) * n, NodeKind::outside);
  const double band = (1.0 + 2.0 * g.h_) * (1.0 + 2.0 * g.h_);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double r2 = norm2(g.position(i, j));
      if (r2 < 1.0) {
        g.kind_[g.index(i, j)] = NodeKind::interior;
      } else if (r2 < band) {
        g.kind_[g.index(i, j)] = NodeKind::boundary;
      }
    }
  }
  g.finish();
  return g;
}

DiskGrid DiskGrid::strip(int n) {
  if (n < 8) throw InvalidArgument("grid needs at least 8 nodes per side");
  DiskGrid g;
  g.n_ = n;
  g.h_ = 2.0 / (n - 1);
  g.periodic_ = true;
  g.kind_.assign(static_cast<std::size_t>(n) * n, NodeKind::interior);
  for (int j = 0; j < n; ++j) {
    g.kind_[g.index(0, j)] = NodeKind::boundary;
    g.kind_[g.index(n - 1, j)] = NodeKind::boundary;
  }
  g.finish();
  return g;
}

void DiskGrid::finish() {
  runs_.clear();
  interior_count_ = 0;
  for (int j = 0; j < n_; ++j) {
    int i = 0;
    while (i < n_) {
      if (kind(i, j) != NodeKind::interior) {
        ++i;
        continue;
      }
      RowRun run{j, i, i};
      while (i < n_ && kind(i, j) == NodeKind::interior) ++i;
      run.end = i;
      interior_count_ += static_cast<std::size_t>(run.end - run.begin);
      runs_.push_back(run);
    }
  }
}

Field2D::Field2D(std::shared_ptr<const DiskGrid> g, double eps_) : grid(std::move(g)), eps(eps_) {
  const std::size_t size = grid ? grid->size() : 0;
  u1.assign(size, 0.0);
  u2.assign(size, 0.0);
}

Vec2 Field2D::sample(Vec2 x) const {
  const DiskGrid& g = *grid;
  const double fx = (x.x + 1.0) / g.h(), fy = (x.y + 1.0) / g.h();
  int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
  i = std::clamp(i, 0, g.n() - 2);
  j = std::clamp(j, 0, g.n() - 2);
  const double tx = std::clamp(fx - i, 0.0, 1.0), ty = std::clamp(fy - j, 0.0, 1.0);
  const std::size_t a = g.index(i, j), b = g.index(i + 1, j), c = g.index(i, j + 1), d = g.index(i + 1, j + 1);
  for (std::size_t idx : {a, b, c, d}) {
    if (g.kind(idx) == NodeKind::outside) {
      throw InvalidArgument("sample point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                            ") touches nodes outside the grid domain");
    }
  }
  return (1.0 - ty) * ((1.0 - tx) * at(a) + tx * at(b)) + ty * ((1.0 - tx) * at(c) + tx * at(d));
}

bool Field2D::all_finite() const {
  for (std::size_t k = 0; k < u1.size(); ++k) {
    if (!std::isfinite(u1[k]) || !std::isfinite(u2[k])) return false;
  }
  return true;
}

double Field2D::sup_norm() const {
  double s = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) {
    if (grid->kind(k) != NodeKind::outside) s = std::max(s, std::hypot(u1[k], u2[k]));
  }
  return s;
}

void require_same_grid(const Field2D& a, const Field2D& b) {
  if (!a.grid || !b.grid || !a.grid->same_shape(*b.grid)) {
    throw GridMismatch("fields live on different grids (n = " + std::to_string(a.grid ? a.grid->n() : 0) +
                       " vs " + std::to_string(b.grid ? b.grid->n() : 0) + ")");
  }
}

}  // namespace tripoint
