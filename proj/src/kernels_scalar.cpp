#include <cmath>

#include "sharpstep/kernels.hpp"

namespace sharpstep::kernels {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double SquaredNorm(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void Axpy(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void Axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void SoftThreshold(const double* v, double theta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::fabs(v[i]) - theta;
    out[i] = m > 0.0 ? std::copysign(m, v[i]) : 0.0;
  }
}

void Gemv(const double* a, const double* x, double* out, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) out[r] = Dot(a + r * cols, x, cols);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", Dot,           SquaredNorm, SquaredDistance,
                                 Axpy,     Axpby,         SoftThreshold, Gemv};
  return table;
}

}  // namespace sharpstep::kernels
