#pragma once

// Dense vector primitives used by every inner loop.
//
// Each instruction-set variant lives in its own translation unit and is
// exposed through a KernelTable.  The scalar table is the reference; the
// AVX2 table is selected at startup when the CPU supports it.  Elementwise
// kernels are bit-identical across variants.  Reductions (dot, norms) use
// independent lane accumulators in the SIMD path and therefore agree with the
// scalar reference only up to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace sharpstep::kernels {

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_norm)(const double* a, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += s * x
  void (*axpy)(double s, const double* x, double* y, std::size_t n);
  // out = a * x + b * y
  void (*axpby)(double a, const double* x, double b, const double* y, double* out,
                std::size_t n);
  // out_i = sign(v_i) * max(|v_i| - theta, 0)
  void (*soft_threshold)(const double* v, double theta, double* out, std::size_t n);
  // out = A * x, A row-major with `rows` x `cols` entries
  void (*gemv)(const double* a, const double* x, double* out, std::size_t rows,
               std::size_t cols);
};

const KernelTable& scalar_table();

// nullptr when the build or the running CPU lacks AVX2 + FMA.
const KernelTable* avx2_table();

// The table used by the free functions below.  Chosen once: AVX2 when
// available unless SHARPSTEP_KERNELS=scalar is set in the environment.
const KernelTable& active();

// Overrides the active table by name ("scalar" or "avx2"); returns false if
// that variant is unavailable.
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) {
  return active().squared_norm(a.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double s, std::span<const double> x, std::span<double> y) {
  active().axpy(s, x.data(), y.data(), y.size());
}

inline void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
                  std::span<double> out) {
  active().axpby(a, x.data(), b, y.data(), out.data(), out.size());
}

inline void soft_threshold(std::span<const double> v, double theta, std::span<double> out) {
  active().soft_threshold(v.data(), theta, out.data(), out.size());
}

inline void gemv(std::span<const double> a, std::span<const double> x, std::span<double> out) {
  active().gemv(a.data(), x.data(), out.data(), out.size(), x.size());
}

}  // namespace sharpstep::kernels
