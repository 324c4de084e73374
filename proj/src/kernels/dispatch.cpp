#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hetsense/kernels.hpp"

namespace hetsense::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(HETSENSE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(detect_isa())};
  return slot;
}

void check_sizes(std::size_t n, std::initializer_list<std::size_t> sizes) {
  for (const std::size_t s : sizes) {
    if (s < n) throw std::invalid_argument("kernel input shorter than output");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa detect_isa() {
  if (const char* forced = std::getenv("HETSENSE_ISA")) {
    const std::string s(forced);
    if (s == "scalar") return Isa::Scalar;
    if (s == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load()); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  active_slot().store(static_cast<int>(isa));
}

void single_robot_gram_det(Isa isa, const SingleRobotBatch& in, std::span<double> det) {
  check_sizes(det.size(), {in.dx.size(), in.dy.size(), in.ux.size(), in.uy.size()});
#if defined(HETSENSE_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    detail::single_robot_gram_det_avx2(in, det);
    return;
  }
#endif
  (void)isa;
  detail::single_robot_gram_det_scalar(in, det);
}

void three_row_gram_det(Isa isa, const ThreeRowBatch& in, std::span<double> det) {
  check_sizes(det.size(), {in.r1x.size(), in.r1y.size(), in.r2x.size(), in.r2y.size(),
                           in.r3x.size(), in.r3y.size()});
#if defined(HETSENSE_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    detail::three_row_gram_det_avx2(in, det);
    return;
  }
#endif
  (void)isa;
  detail::three_row_gram_det_scalar(in, det);
}

void single_robot_gram_det(const SingleRobotBatch& in, std::span<double> det) {
  single_robot_gram_det(active_isa(), in, det);
}

void three_row_gram_det(const ThreeRowBatch& in, std::span<double> det) {
  three_row_gram_det(active_isa(), in, det);
}

}  // namespace hetsense::kernels
