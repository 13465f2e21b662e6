#include "mdlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mdlab/littlewood_paley.hpp"

namespace mdlab {

bool retained_by_dealias(const FourierGrid& g, std::size_t p) {
  const int cut = g.n() / 3;
  const auto m = g.mode(p);
  return std::abs(m[0]) <= cut && std::abs(m[1]) <= cut && std::abs(m[2]) <= cut;
}

LowpassSampler::LowpassSampler(std::span<const ScalarField* const> fields, int K, std::size_t budget)
    : K_(K), nfields_(fields.size()) {
  if (fields.empty()) throw ContractError("LowpassSampler: no fields");
  grid_ = fields[0]->grid();
  for (const auto* f : fields) {
    f->require(Side::fourier, "LowpassSampler");
    if (f->grid() != grid_) throw ContractError("LowpassSampler: fields on different grids");
  }
  const FourierGrid& g = *grid_;
  const int n = g.n();
  const double d = g.lattice_spacing();
  const double radius = std::ldexp(1.0, K + 1);
  mmax_ = std::min(n / 2, static_cast<int>(std::floor(radius / d)) + 1);

  // Count first so an oversized request fails before allocating.
  auto row_extent = [&](int m1, int m2) {
    const double r2 = radius * radius - d * d * (double(m1) * m1 + double(m2) * m2);
    if (r2 <= 0.0) return -1;
    return std::min(mmax_, static_cast<int>(std::floor(std::sqrt(r2) / d)) + 1);
  };
  std::size_t count = 0;
  for (int m1 = -mmax_; m1 <= mmax_; ++m1) {
    for (int m2 = -mmax_; m2 <= mmax_; ++m2) {
      const int e = row_extent(m1, m2);
      if (e >= 0) count += 2 * e + 1;
    }
  }
  if (count > budget) {
    throw BudgetError("low-pass evaluation needs " + std::to_string(count) +
                      " modes, budget is " + std::to_string(budget));
  }

  const double inv_n3 = 1.0 / static_cast<double>(g.size());
  for (int m1 = -mmax_; m1 <= mmax_; ++m1) {
    for (int m2 = -mmax_; m2 <= mmax_; ++m2) {
      const int e = row_extent(m1, m2);
      if (e < 0) continue;
      Row row{m1, m2, -e, e, coef_.size()};
      bool any = false;
      std::vector<cplx> block((2 * e + 1) * nfields_, 0.0);
      for (int m3 = -e; m3 <= e; ++m3) {
        // Modes outside the representable range [-n/2, n/2) do not exist.
        if (m1 < -n / 2 || m1 >= n / 2 || m2 < -n / 2 || m2 >= n / 2 || m3 < -n / 2 || m3 >= n / 2) {
          continue;
        }
        const double eta = d * std::sqrt(double(m1) * m1 + double(m2) * m2 + double(m3) * m3);
        const double w = lp::below(K, eta);
        if (w <= 0.0) continue;
        // e^{i eta.(x + L/2)} = (-1)^{m1+m2+m3} e^{i eta.x}
        const double sign = ((m1 + m2 + m3) % 2 == 0) ? 1.0 : -1.0;
        const std::size_t p = g.flat(g.slot(m1), g.slot(m2), g.slot(m3));
        for (std::size_t f = 0; f < nfields_; ++f) {
          block[(m3 + e) * nfields_ + f] = (sign * w * inv_n3) * (*fields[f])(p);
        }
        ++modes_;
        any = true;
      }
      if (!any) continue;
      // Trim runs of zero coefficients (dealiased data is zero near the edges).
      auto zero_at = [&](int m3) {
        for (std::size_t f = 0; f < nfields_; ++f) {
          if (block[(m3 + e) * nfields_ + f] != cplx(0.0)) return false;
        }
        return true;
      };
      while (row.lo <= row.hi && zero_at(row.lo)) ++row.lo;
      while (row.hi >= row.lo && zero_at(row.hi)) --row.hi;
      if (row.lo > row.hi) continue;
      coef_.insert(coef_.end(), block.begin() + (row.lo + e) * nfields_,
                   block.begin() + (row.hi + e + 1) * nfields_);
      rows_.push_back(row);
    }
  }
}

bool LowpassSampler::evaluate(const Vec3& x, std::span<cplx> out) const {
  if (out.size() != nfields_) throw ContractError("LowpassSampler::evaluate: output size mismatch");
  const FourierGrid& g = *grid_;
  const double L = g.length();
  Vec3 y = x;
  bool wrapped = false;
  for (int a = 0; a < 3; ++a) {
    if (y[a] < -0.5 * L || y[a] >= 0.5 * L) {
      y[a] -= L * std::floor((y[a] + 0.5 * L) / L);
      wrapped = true;
    }
  }
  const double d = g.lattice_spacing();
  const int width = 2 * mmax_ + 1;
  std::vector<cplx> e(3 * static_cast<std::size_t>(width));
  for (int a = 0; a < 3; ++a) {
    cplx* ea = e.data() + a * width + mmax_;
    for (int m = 0; m <= mmax_; ++m) {
      ea[m] = std::polar(1.0, d * m * y[a]);
      ea[-m] = std::conj(ea[m]);
    }
  }
  const cplx* e1 = e.data() + mmax_;
  const cplx* e2 = e.data() + width + mmax_;
  const cplx* e3 = e.data() + 2 * width + mmax_;

  std::fill(out.begin(), out.end(), cplx(0.0));
  std::vector<cplx> inner(nfields_);
  for (const Row& row : rows_) {
    std::fill(inner.begin(), inner.end(), cplx(0.0));
    const cplx* c = coef_.data() + row.offset;
    for (int m3 = row.lo; m3 <= row.hi; ++m3) {
      const cplx w = e3[m3];
      for (std::size_t f = 0; f < nfields_; ++f) inner[f] += w * c[f];
      c += nfields_;
    }
    const cplx outer = e1[row.m1] * e2[row.m2];
    for (std::size_t f = 0; f < nfields_; ++f) out[f] += outer * inner[f];
  }
  return wrapped;
}

LowpassValue eval_lowpass_at_point(const ScalarField& f, int K, const Vec3& x, std::size_t budget) {
  const ScalarField* fields[] = {&f};
  LowpassSampler sampler(fields, K, budget);
  cplx v;
  const bool wrapped = sampler.evaluate(x, std::span<cplx>(&v, 1));
  return {v, wrapped};
}

}  // namespace mdlab
