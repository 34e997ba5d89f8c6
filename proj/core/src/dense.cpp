#include "sparselv/dense.hpp"

#include <lapacke.h>

#include <algorithm>
#include <functional>
#include <string>

#include "sparselv/errors.hpp"

namespace sparselv::dense {

namespace {

void check_square(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) {
    throw ConfigError("dense matrix has " + std::to_string(a.size()) +
                      " entries, expected " + std::to_string(n * n));
  }
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw NumericalError(std::string(routine) + " failed with info = " +
                         std::to_string(info));
  }
}

}  // namespace

std::vector<double> singular_values(std::span<const double> a, std::size_t n) {
  check_square(a, n);
  if (n == 0) return {};
  std::vector<double> work(a.begin(), a.end());
  std::vector<double> s(n);
  const auto ln = static_cast<lapack_int>(n);
  check_info(LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'N', ln, ln, work.data(), ln,
                            s.data(), nullptr, ln, nullptr, ln),
             "dgesdd");
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<std::complex<double>> eigenvalues(std::span<const double> a,
                                              std::size_t n) {
  check_square(a, n);
  if (n == 0) return {};
  std::vector<double> work(a.begin(), a.end());
  std::vector<double> wr(n), wi(n);
  const auto ln = static_cast<lapack_int>(n);
  check_info(LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', ln, work.data(), ln,
                           wr.data(), wi.data(), nullptr, ln, nullptr, ln),
             "dgeev");
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

std::vector<double> symmetric_eigenvalues(std::span<const double> a,
                                          std::size_t n) {
  check_square(a, n);
  if (n == 0) return {};
  std::vector<double> work(a.begin(), a.end());
  std::vector<double> w(n);
  const auto ln = static_cast<lapack_int>(n);
  check_info(LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', ln, work.data(), ln,
                           w.data()),
             "dsyev");
  return w;
}

std::vector<double> solve(std::span<const double> a, std::span<const double> b,
                          std::size_t n) {
  check_square(a, n);
  if (b.size() != n) throw ConfigError("right-hand side has wrong length");
  std::vector<double> work(a.begin(), a.end());
  std::vector<double> x(b.begin(), b.end());
  std::vector<lapack_int> piv(n);
  const auto ln = static_cast<lapack_int>(n);
  check_info(LAPACKE_dgesv(LAPACK_ROW_MAJOR, ln, 1, work.data(), ln,
                           piv.data(), x.data(), 1),
             "dgesv");
  return x;
}

}  // namespace sparselv::dense
