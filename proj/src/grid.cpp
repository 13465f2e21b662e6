#include "mdlab/grid.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <mutex>
#include <string>

#include "mdlab/errors.hpp"

namespace mdlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    fftw_init_threads();
    fftw_plan_with_nthreads(configured_threads());
  });
}

}  // namespace

int configured_threads() {
  const char* env = std::getenv("MDLAB_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// Plans are created once with FFTW_ESTIMATE so that transforms are
// reproducible bit-for-bit between runs.
class FftEngine {
 public:
  explicit FftEngine(int n) : n_(n) {
    init_fftw_threads();
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (int c : {1, 4}) {
      const std::size_t count = static_cast<std::size_t>(n) * n * n * c;
      auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
      const int dims[3] = {n, n, n};
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      Plans p;
      p.forward = fftw_plan_many_dft(3, dims, c, buf, nullptr, c, 1, buf, nullptr, c, 1,
                                     FFTW_FORWARD, flags);
      p.backward = fftw_plan_many_dft(3, dims, c, buf, nullptr, c, 1, buf, nullptr, c, 1,
                                      FFTW_BACKWARD, flags);
      fftw_free(buf);
      if (p.forward == nullptr || p.backward == nullptr) throw Error("FFTW planning failed");
      (c == 1 ? scalar_ : spinor_) = p;
    }
  }
  ~FftEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto* p : {&scalar_, &spinor_}) {
      fftw_destroy_plan(p->forward);
      fftw_destroy_plan(p->backward);
    }
  }

  void run(std::span<cplx> data, int ncomp, bool forward) const {
    const Plans& p = plans(ncomp);
    const std::size_t expected = static_cast<std::size_t>(n_) * n_ * n_ * ncomp;
    if (data.size() != expected) throw ContractError("FFT buffer has the wrong size");
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward ? p.forward : p.backward, ptr, ptr);
  }

 private:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };
  const Plans& plans(int ncomp) const {
    if (ncomp == 1) return scalar_;
    if (ncomp == 4) return spinor_;
    throw ContractError("FFT supports 1 or 4 components");
  }

  int n_;
  Plans scalar_;
  Plans spinor_;
};

FourierGrid::FourierGrid(int n, double length, double mass)
    : n_(n), length_(length), mass_(mass), size_(static_cast<std::size_t>(n) * n * n) {
  xi_abs_.resize(size_);
  energy_.resize(size_);
  for (std::size_t p = 0; p < size_; ++p) {
    const double r = norm(xi(p));
    xi_abs_[p] = r;
    energy_[p] = std::sqrt(mass_ * mass_ + r * r);
  }
  fft_ = std::make_unique<FftEngine>(n);
}

FourierGrid::~FourierGrid() = default;

std::shared_ptr<const FourierGrid> FourierGrid::create(int n, double length, double mass) {
  if (n < 4 || n % 2 != 0) throw DomainError("grid size must be an even integer >= 4");
  if (!(length > 0.0)) throw DomainError("box length must be positive");
  if (!(mass > 0.0)) throw DomainError("Dirac mass must be positive (massless case unsupported)");
  return std::shared_ptr<const FourierGrid>(new FourierGrid(n, length, mass));
}

std::array<int, 3> FourierGrid::mode(std::size_t p) const {
  const auto [i, j, k] = unflat(p);
  return {mode_index(i), mode_index(j), mode_index(k)};
}

Vec3 FourierGrid::xi(std::size_t p) const {
  const auto [i, j, k] = unflat(p);
  return {wavenumber(i), wavenumber(j), wavenumber(k)};
}

bool FourierGrid::is_nyquist(std::size_t p) const {
  const auto m = mode(p);
  return m[0] == -n_ / 2 || m[1] == -n_ / 2 || m[2] == -n_ / 2;
}

std::size_t FourierGrid::mirror(std::size_t p) const {
  const auto [i, j, k] = unflat(p);
  return flat((n_ - i) % n_, (n_ - j) % n_, (n_ - k) % n_);
}

Vec3 FourierGrid::position(std::size_t p) const {
  const auto [i, j, k] = unflat(p);
  return {coordinate(i), coordinate(j), coordinate(k)};
}

double FourierGrid::max_radius() const { return std::sqrt(3.0) * 0.5 * length_; }

double FourierGrid::max_xi_abs() const { return std::sqrt(3.0) * xi_max(); }

std::pair<int, int> FourierGrid::dyadic_range() const {
  const int k_min = static_cast<int>(std::floor(std::log2(lattice_spacing())));
  const int k_max = static_cast<int>(std::ceil(std::log2(max_xi_abs())));
  return {k_min, k_max};
}

int FourierGrid::spatial_dyadic_max() const {
  return static_cast<int>(std::ceil(std::log2(max_radius())));
}

void FourierGrid::forward(std::span<cplx> data, int ncomp) const { fft_->run(data, ncomp, true); }

void FourierGrid::inverse(std::span<cplx> data, int ncomp) const {
  fft_->run(data, ncomp, false);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

}  // namespace mdlab
