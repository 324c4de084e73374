#include <immintrin.h>

#include <cstddef>

#include "hetsense/kernels.hpp"

// Compiled with -mavx2 only (no FMA) so every lane rounds like the scalar path.

namespace hetsense::kernels::detail {

namespace {

inline __m256d neg(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }

}  // namespace

void single_robot_gram_det_avx2(const SingleRobotBatch& in, std::span<double> det) {
  const std::size_t n = det.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_loadu_pd(in.dx.data() + i);
    const __m256d dy = _mm256_loadu_pd(in.dy.data() + i);
    const __m256d ux = _mm256_loadu_pd(in.ux.data() + i);
    const __m256d uy = _mm256_loadu_pd(in.uy.data() + i);

    const __m256d n2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d inv = _mm256_div_pd(one, n2);
    const __m256d bx = _mm256_mul_pd(neg(dy), inv);
    const __m256d by = _mm256_mul_pd(dx, inv);
    const __m256d w = _mm256_sub_pd(_mm256_mul_pd(dx, uy), _mm256_mul_pd(dy, ux));
    const __m256d t = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(two, w), inv), inv);
    const __m256d a = _mm256_sub_pd(_mm256_mul_pd(uy, inv), _mm256_mul_pd(dx, t));
    const __m256d b = _mm256_sub_pd(_mm256_mul_pd(neg(ux), inv), _mm256_mul_pd(dy, t));

    __m256d g11 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(bx, bx));
    g11 = _mm256_add_pd(g11, _mm256_mul_pd(ux, ux));
    g11 = _mm256_add_pd(g11, _mm256_mul_pd(a, a));
    __m256d g12 = _mm256_add_pd(_mm256_mul_pd(dx, dy), _mm256_mul_pd(bx, by));
    g12 = _mm256_add_pd(g12, _mm256_mul_pd(ux, uy));
    g12 = _mm256_add_pd(g12, _mm256_mul_pd(a, b));
    __m256d g22 = _mm256_add_pd(_mm256_mul_pd(dy, dy), _mm256_mul_pd(by, by));
    g22 = _mm256_add_pd(g22, _mm256_mul_pd(uy, uy));
    g22 = _mm256_add_pd(g22, _mm256_mul_pd(b, b));

    _mm256_storeu_pd(det.data() + i,
                     _mm256_sub_pd(_mm256_mul_pd(g11, g22), _mm256_mul_pd(g12, g12)));
  }
  if (i < n) {
    const SingleRobotBatch tail{in.dx.subspan(i), in.dy.subspan(i), in.ux.subspan(i),
                                in.uy.subspan(i)};
    single_robot_gram_det_scalar(tail, det.subspan(i));
  }
}

void three_row_gram_det_avx2(const ThreeRowBatch& in, std::span<double> det) {
  const std::size_t n = det.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r1x = _mm256_loadu_pd(in.r1x.data() + i);
    const __m256d r1y = _mm256_loadu_pd(in.r1y.data() + i);
    const __m256d r2x = _mm256_loadu_pd(in.r2x.data() + i);
    const __m256d r2y = _mm256_loadu_pd(in.r2y.data() + i);
    const __m256d r3x = _mm256_loadu_pd(in.r3x.data() + i);
    const __m256d r3y = _mm256_loadu_pd(in.r3y.data() + i);

    __m256d g11 = _mm256_add_pd(_mm256_mul_pd(r1x, r1x), _mm256_mul_pd(r2x, r2x));
    g11 = _mm256_add_pd(g11, _mm256_mul_pd(r3x, r3x));
    __m256d g12 = _mm256_add_pd(_mm256_mul_pd(r1x, r1y), _mm256_mul_pd(r2x, r2y));
    g12 = _mm256_add_pd(g12, _mm256_mul_pd(r3x, r3y));
    __m256d g22 = _mm256_add_pd(_mm256_mul_pd(r1y, r1y), _mm256_mul_pd(r2y, r2y));
    g22 = _mm256_add_pd(g22, _mm256_mul_pd(r3y, r3y));

    _mm256_storeu_pd(det.data() + i,
                     _mm256_sub_pd(_mm256_mul_pd(g11, g22), _mm256_mul_pd(g12, g12)));
  }
  if (i < n) {
    const ThreeRowBatch tail{in.r1x.subspan(i), in.r1y.subspan(i), in.r2x.subspan(i),
                             in.r2y.subspan(i), in.r3x.subspan(i), in.r3y.subspan(i)};
    three_row_gram_det_scalar(tail, det.subspan(i));
  }
}

}  // namespace hetsense::kernels::detail
