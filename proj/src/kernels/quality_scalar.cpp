#include <cstddef>

#include "hetsense/kernels.hpp"

namespace hetsense::kernels::detail {

void single_robot_gram_det_scalar(const SingleRobotBatch& in, std::span<double> det) {
  const std::size_t n = det.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = in.dx[i];
    const double dy = in.dy[i];
    const double ux = in.ux[i];
    const double uy = in.uy[i];

    const double n2 = dx * dx + dy * dy;
    const double inv = 1.0 / n2;
    const double bx = -dy * inv;
    const double by = dx * inv;
    const double w = dx * uy - dy * ux;
    const double t = 2.0 * w * inv * inv;
    const double a = uy * inv - dx * t;
    const double b = -ux * inv - dy * t;

    const double g11 = dx * dx + bx * bx + ux * ux + a * a;
    const double g12 = dx * dy + bx * by + ux * uy + a * b;
    const double g22 = dy * dy + by * by + uy * uy + b * b;
    det[i] = g11 * g22 - g12 * g12;
  }
}

void three_row_gram_det_scalar(const ThreeRowBatch& in, std::span<double> det) {
  const std::size_t n = det.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double g11 = in.r1x[i] * in.r1x[i] + in.r2x[i] * in.r2x[i] + in.r3x[i] * in.r3x[i];
    const double g12 = in.r1x[i] * in.r1y[i] + in.r2x[i] * in.r2y[i] + in.r3x[i] * in.r3y[i];
    const double g22 = in.r1y[i] * in.r1y[i] + in.r2y[i] * in.r2y[i] + in.r3y[i] * in.r3y[i];
    det[i] = g11 * g22 - g12 * g12;
  }
}

}  // namespace hetsense::kernels::detail
