#include "rwdiag/density.hpp"

#include "rwdiag/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <ostream>

namespace rwdiag {

namespace {

constexpr double kZeroDensity = 1e-300;

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Linear convolution via real-to-complex FFT with zero padding.
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  const std::size_t nc = n / 2 + 1;

  double* ra = fftw_alloc_real(n);
  double* rb = fftw_alloc_real(n);
  fftw_complex* ca = fftw_alloc_complex(nc);
  fftw_complex* cb = fftw_alloc_complex(nc);
  std::memset(ra, 0, n * sizeof(double));
  std::memset(rb, 0, n * sizeof(double));
  std::memcpy(ra, a.data(), a.size() * sizeof(double));
  std::memcpy(rb, b.data(), b.size() * sizeof(double));

  fftw_plan pa, pb, pinv;
  {
    // Plan creation is not thread-safe.
    std::lock_guard<std::mutex> lock(fftw_mutex());
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra, ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb, cb, FFTW_ESTIMATE);
    pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), ca, ra, FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < nc; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re;
    ca[i][1] = im;
  }
  fftw_execute(pinv);

  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = ra[i] * scale;

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pinv);
  }
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(ca);
  fftw_free(cb);
  return out;
}

}  // namespace

double DensityGrid::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * width;
}

double DensityGrid::max_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double DensityGrid::value_at(double x) const {
  const double idx = (x - lo) / width - 0.5;
  const auto i = static_cast<std::int64_t>(std::llround(idx));
  if (i < 0 || i >= static_cast<std::int64_t>(values.size())) return 0.0;
  return values[static_cast<std::size_t>(i)];
}

DensityGrid uniform_density(double lo, double hi, std::int64_t cells) {
  if (hi <= lo || cells < 1) throw ValidationError("uniform_density: bad support");
  DensityGrid g;
  g.lo = lo;
  g.width = (hi - lo) / static_cast<double>(cells);
  g.values.assign(static_cast<std::size_t>(cells), 1.0 / (hi - lo));
  return g;
}

DensityGrid gaussian_density(double mean, double sd, double tail_sigmas,
                             std::int64_t cells_per_unit) {
  const double lo = mean - tail_sigmas * sd;
  const double hi = mean + tail_sigmas * sd;
  const auto cells = static_cast<std::int64_t>(std::ceil((hi - lo) * cells_per_unit));
  return density_from_fn(lo, hi, cells,
                         [mean, sd](double x) {
                           const double z = (x - mean) / sd;
                           return std::exp(-0.5 * z * z) /
                                  (sd * std::sqrt(2.0 * std::numbers::pi));
                         },
                         true);
}

DensityGrid density_from_fn(double lo, double hi, std::int64_t cells,
                            const std::function<double(double)>& f, bool normalize) {
  if (hi <= lo || cells < 1) throw ValidationError("density_from_fn: bad support");
  DensityGrid g;
  g.lo = lo;
  g.width = (hi - lo) / static_cast<double>(cells);
  g.values.resize(static_cast<std::size_t>(cells));
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    g.values[i] = f(lo + (static_cast<double>(i) + 0.5) * g.width);
    if (g.values[i] < 0) throw ValidationError("density_from_fn: negative density");
  }
  if (normalize) {
    const double m = g.mass();
    if (m <= 0) throw ValidationError("density_from_fn: zero mass");
    for (auto& v : g.values) v /= m;
  }
  return g;
}

DensityGrid convolve(const DensityGrid& f, const DensityGrid& g, double trim_eps) {
  if (f.values.empty() || g.values.empty()) throw ValidationError("convolve: empty grid");
  if (std::fabs(f.width - g.width) > 1e-12 * f.width) {
    throw ValidationError("convolve: cell widths incompatible");
  }
  DensityGrid out;
  out.width = f.width;
  // Cell centers add: t_i + s_j = (lo_f + lo_g) + (i + j + 1) w, so the
  // output grid starts half a cell later.
  out.lo = f.lo + g.lo + 0.5 * f.width;
  out.values = fft_convolve(f.values, g.values);
  for (auto& v : out.values) v = std::max(0.0, v) * f.width;

  std::size_t first = 0, last = out.values.size();
  while (first < last && out.values[first] <= trim_eps) ++first;
  while (last > first && out.values[last - 1] <= trim_eps) --last;
  if (first > 0 || last < out.values.size()) {
    out.values = std::vector<double>(out.values.begin() + static_cast<std::ptrdiff_t>(first),
                                     out.values.begin() + static_cast<std::ptrdiff_t>(last));
    out.lo += static_cast<double>(first) * out.width;
  }
  return out;
}

namespace {

// Moves g onto the lattice {anchor_lo + k w} by linear interpolation between
// neighbouring samples (padded with zeros), which preserves the total mass
// exactly. A no-op when the grids are already aligned.
DensityGrid align_to_lattice(const DensityGrid& g, double anchor_lo) {
  const double off = (g.lo - anchor_lo) / g.width;
  const double frac = off - std::floor(off);
  if (frac < 1e-9 || frac > 1.0 - 1e-9) return g;
  const double lambda = frac;
  DensityGrid out;
  out.width = g.width;
  out.lo = g.lo - lambda * g.width;
  out.values.assign(g.values.size() + 1, 0.0);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    out.values[i] += (1.0 - lambda) * g.values[i];
    out.values[i + 1] += lambda * g.values[i];
  }
  return out;
}

}  // namespace

DensityGrid grid_add(const DensityGrid& a, const DensityGrid& b_raw) {
  if (std::fabs(a.width - b_raw.width) > 1e-12 * a.width) {
    throw ValidationError("grid_add: cell widths incompatible");
  }
  const DensityGrid b = align_to_lattice(b_raw, a.lo);
  const double off = (b.lo - a.lo) / a.width;
  const auto shift = static_cast<std::int64_t>(std::llround(off));
  if (std::fabs(off - static_cast<double>(shift)) > 1e-6) {
    throw ValidationError("grid_add: grids not aligned");
  }
  const std::int64_t lo_idx = std::min<std::int64_t>(0, shift);
  const std::int64_t hi_idx = std::max<std::int64_t>(static_cast<std::int64_t>(a.values.size()),
                                                     shift + static_cast<std::int64_t>(b.values.size()));
  DensityGrid out;
  out.width = a.width;
  out.lo = a.lo + static_cast<double>(lo_idx) * a.width;
  out.values.assign(static_cast<std::size_t>(hi_idx - lo_idx), 0.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.values[static_cast<std::size_t>(static_cast<std::int64_t>(i) - lo_idx)] += a.values[i];
  }
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    out.values[static_cast<std::size_t>(static_cast<std::int64_t>(i) + shift - lo_idx)] +=
        b.values[i];
  }
  return out;
}

DensityGrid grid_scale(const DensityGrid& a, double factor) {
  DensityGrid out = a;
  for (auto& v : out.values) v *= factor;
  return out;
}

DensityGrid grid_shift(const DensityGrid& a, double offset) {
  DensityGrid out = a;
  out.lo += offset;
  return out;
}

double differential_entropy(const DensityGrid& f) {
  double h = 0.0;
  for (double v : f.values) {
    if (v > kZeroDensity) h -= v * std::log(v);
  }
  return h * f.width;
}

std::vector<double> entropy_sequence(const DensityGrid& f, int n_max) {
  std::vector<double> hs;
  hs.reserve(static_cast<std::size_t>(n_max));
  DensityGrid current = f;
  hs.push_back(differential_entropy(current));
  for (int n = 2; n <= n_max; ++n) {
    current = convolve(current, f);
    hs.push_back(differential_entropy(current));
  }
  return hs;
}

double gaussian_walk_mutual_information(int n) {
  if (n < 2) throw ValidationError("gaussian_walk_mutual_information: n >= 2 required");
  return 0.5 * std::log(static_cast<double>(n) / static_cast<double>(n - 1));
}

double direct_mutual_information(const DensityGrid& f, int n) {
  if (n < 2) throw ValidationError("direct_mutual_information: n >= 2 required");
  // Joint density of (x_1, x_n) is f(x) rho_{n-1}(y - x); the quadrature runs
  // over the exactly aligned index grid of rho_n = f * rho_{n-1}.
  DensityGrid prev = f;
  for (int k = 2; k < n; ++k) prev = convolve(prev, f);
  const DensityGrid rho_n = convolve(f, prev);
  // Cell centers add exactly: f[i] + prev[j] lands at rho_n index i+j-offset,
  // where offset accounts for edge trimming of the convolution output.
  const double base = f.lo + prev.lo + 0.5 * f.width;
  const auto offset = static_cast<std::int64_t>(std::llround((rho_n.lo - base) / f.width));
  const auto n_cells = static_cast<std::int64_t>(rho_n.values.size());
  double info = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double fx = f.values[i];
    if (fx <= kZeroDensity) continue;
    for (std::size_t j = 0; j < prev.values.size(); ++j) {
      const double pz = prev.values[j];
      if (pz <= kZeroDensity) continue;
      const std::int64_t k = static_cast<std::int64_t>(i + j) - offset;
      if (k < 0 || k >= n_cells) continue;
      const double pn = rho_n.values[static_cast<std::size_t>(k)];
      if (pn <= kZeroDensity) continue;
      info += fx * pz * std::log(pz / pn);
    }
  }
  return info * f.width * f.width;
}

double derriennic_residual(const DensityGrid& f, int n) {
  const auto hs = entropy_sequence(f, n);
  const double diff = hs[static_cast<std::size_t>(n - 1)] - hs[static_cast<std::size_t>(n - 2)];
  return std::fabs(direct_mutual_information(f, n) - diff);
}

void write_density_csv(const DensityGrid& f, std::ostream& os) {
  os << "x,rho\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    os << f.lo + (static_cast<double>(i) + 0.5) * f.width << "," << f.values[i] << "\n";
  }
}

}  // namespace rwdiag
