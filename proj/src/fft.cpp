#include "ipsep/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>

namespace ipsep::fft {

namespace {

using Key = std::tuple<int, int, int, int>;

struct PlanCache {
  std::mutex mu;
  std::map<Key, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }

  fftw_plan get(int r, int c, int sign, int howmany) {
    std::lock_guard<std::mutex> lock(mu);
    Key key{r, c, sign, howmany};
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    const std::size_t len = static_cast<std::size_t>(r) * c * howmany;
    auto* buf = fftw_alloc_complex(len);
    int dims[2] = {r, c};
    fftw_plan p = fftw_plan_many_dft(2, dims, howmany, buf, nullptr, 1, r * c, buf, nullptr, 1,
                                     r * c, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft2(cplx* data, int r, int c, int sign, int howmany) {
  if (r == 1 && c == 1) return;
  fftw_plan p = cache().get(r, c, sign, howmany);
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, d, d);
}

void shift(cvec& data, int n) {
  const int h = n / 2;
  for (int p = 0; p < h; ++p) {
    cplx* a = data.data() + static_cast<std::size_t>(p) * n;
    cplx* b = data.data() + static_cast<std::size_t>(p + h) * n;
    for (int q = 0; q < h; ++q) {
      std::swap(a[q], b[q + h]);
      std::swap(a[q + h], b[q]);
    }
  }
}

static void centered(cvec& data, int n, int sign) {
  if (n == 1) return;
  shift(data, n);
  dft2(data.data(), n, n, sign);
  shift(data, n);
  const double s = 1.0 / n;
  for (auto& v : data) v *= s;
}

void centered_forward(cvec& data, int n) { centered(data, n, -1); }
void centered_inverse(cvec& data, int n) { centered(data, n, +1); }

}  // namespace ipsep::fft
