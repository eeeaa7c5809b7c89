#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tripoint/vec.hpp"

namespace tripoint {

enum class NodeKind : std::uint8_t { outside = 0, interior = 1, boundary = 2 };

/// Contiguous interior nodes [begin, end) of one grid row.
struct RowRun {
  int row = 0;
  int begin = 0;
  int end = 0;
};

/// Uniform n x n node grid on [-1, 1]^2, node (i, j) at
/// ((2i - (n-1)) / (n-1), (2j - (n-1)) / (n-1)), stored row-major (index j n + i).
///
/// Disk grids: interior is |x| < 1; the boundary band holds every other node
/// with |x| < 1 + 2h, so interior nodes have all four neighbours in the
/// band or interior, and every cell meeting the open disk has valued corners.
/// Strip grids: columns 0 and n-1 are boundary, everything else interior,
/// and rows wrap periodically.
class DiskGrid {
 public:
  static DiskGrid disk(int n);
  static DiskGrid strip(int n);

  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  bool periodic_rows() const noexcept { return periodic_; }
  std::size_t size() const noexcept { return kind_.size(); }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  double coord(int i) const noexcept { return static_cast<double>(2 * i - (n_ - 1)) / (n_ - 1); }
  Vec2 position(int i, int j) const noexcept { return {coord(i), coord(j)}; }
  Vec2 position(std::size_t idx) const noexcept {
    return position(static_cast<int>(idx % static_cast<std::size_t>(n_)),
                    static_cast<int>(idx / static_cast<std::size_t>(n_)));
  }
  NodeKind kind(std::size_t idx) const noexcept { return kind_[idx]; }
  NodeKind kind(int i, int j) const noexcept { return kind_[index(i, j)]; }
  const std::vector<RowRun>& runs() const noexcept { return runs_; }
  std::size_t interior_count() const noexcept { return interior_count_; }
  /// Row above / below j, wrapping on strip grids.
  int row_up(int j) const noexcept { return periodic_ && j == n_ - 1 ? 0 : j + 1; }
  int row_down(int j) const noexcept { return periodic_ && j == 0 ? n_ - 1 : j - 1; }
  bool same_shape(const DiskGrid& other) const noexcept {
    return n_ == other.n_ && periodic_ == other.periodic_;
  }

 private:
  void finish();

  int n_ = 0;
  double h_ = 0.0;
  bool periodic_ = false;
  std::vector<NodeKind> kind_;
  std::vector<RowRun> runs_;
  std::size_t interior_count_ = 0;
};

/// Two scalar layers on a grid. Outside nodes hold zero.
struct Field2D {
  std::shared_ptr<const DiskGrid> grid;
  std::vector<double> u1;
  std::vector<double> u2;
  double eps = 0.0;

  explicit Field2D(std::shared_ptr<const DiskGrid> g = {}, double eps_ = 0.0);

  Vec2 at(std::size_t idx) const noexcept { return {u1[idx], u2[idx]}; }
  void set(std::size_t idx, Vec2 v) noexcept {
    u1[idx] = v.x;
    u2[idx] = v.y;
  }
  /// Bilinear interpolation; throws InvalidArgument if a needed corner is outside.
  Vec2 sample(Vec2 x) const;
  bool all_finite() const;
  /// Max |u| over interior and boundary nodes.
  double sup_norm() const;
};

/// Throws GridMismatch unless both fields live on grids of the same shape.
void require_same_grid(const Field2D& a, const Field2D& b);

}  // namespace tripoint
