#include "nwdag/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nwdag/error.hpp"

namespace nwdag {

namespace {

void check_common(std::size_t n, std::size_t d, double delta) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (d < 1) throw DomainError("d must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

double log2d(std::size_t d) { return std::log(2.0 * static_cast<double>(d)); }

}  // namespace

double aposteriori_bound(double path_norm, std::size_t n, std::size_t d, double delta) {
  check_common(n, d, delta);
  if (!(path_norm >= 0.0) || !std::isfinite(path_norm)) throw DomainError("path norm must be finite and nonnegative");
  const double rn = static_cast<double>(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double first = (path_norm + 1.0) * (6.0 * std::sqrt(2.0 * log2d(d)) + 1.0 / (2.0 * std::numbers::sqrt2)) / std::sqrt(rn);
  return first + 0.5 * std::sqrt(std::log(pi2 / (3.0 * delta)) / (2.0 * rn));
}

double lambda0_threshold(std::size_t d) {
  if (d < 1) throw DomainError("d must be at least 1");
  return 2.0 + 1.0 / (12.0 * std::sqrt(log2d(d)));
}

double lambda_from_lambda0(double lambda0, std::size_t d) {
  if (d < 1) throw DomainError("d must be at least 1");
  return 3.0 * lambda0 * std::sqrt(2.0 * log2d(d));
}

double apriori_bound(double barron_bound, std::size_t n_non, std::size_t n, std::size_t d, double lambda0, double delta) {
  check_common(n, d, delta);
  if (n_non < 1) throw DomainError("n_non must be at least 1");
  if (!(barron_bound >= 0.0) || !std::isfinite(barron_bound)) throw DomainError("Barron bound must be finite and nonnegative");
  if (!(lambda0 >= lambda0_threshold(d))) {
    throw DomainError("lambda0=" + std::to_string(lambda0) + " is below the admissible threshold " + std::to_string(lambda0_threshold(d)));
  }
  const double rn = static_cast<double>(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double approx = 3.0 * barron_bound * barron_bound / (2.0 * static_cast<double>(n_non));
  const double estimation = (6.0 * barron_bound + 1.0) * (3.0 * (2.0 + lambda0) * std::sqrt(2.0 * log2d(d)) + 1.0 / (2.0 * std::numbers::sqrt2)) / std::sqrt(rn);
  return approx + estimation + std::sqrt(std::log(2.0 * pi2 / (3.0 * delta)) / (2.0 * rn));
}

double rademacher_bound(double q, std::size_t n, std::size_t d) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (d < 1) throw DomainError("d must be at least 1");
  return 3.0 * q * std::sqrt(2.0 * log2d(d) / static_cast<double>(n));
}

}  // namespace nwdag
