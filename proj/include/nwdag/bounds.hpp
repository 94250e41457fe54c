#pragma once

#include <cstddef>

namespace nwdag {

// (P + 1)(6 sqrt(2 log 2d) + 1/(2 sqrt 2)) / sqrt(n) + 1/2 sqrt(log(pi^2 / (3 delta)) / (2n)),
// with P the weighted path norm of the trained parameters.
double aposteriori_bound(double path_norm, std::size_t n, std::size_t d, double delta);

// Smallest admissible lambda_0: 2 + 1 / (12 sqrt(log 2d)).
double lambda0_threshold(std::size_t d);

// lambda = 3 lambda_0 sqrt(2 log 2d).
double lambda_from_lambda0(double lambda0, std::size_t d);

// 3B^2 / (2 N_non) + (6B + 1)(3(2 + lambda_0) sqrt(2 log 2d) + 1/(2 sqrt 2)) / sqrt(n)
//   + sqrt(log(2 pi^2 / (3 delta)) / (2n)).
// Throws DomainError when lambda_0 is below lambda0_threshold(d).
double apriori_bound(double barron_bound, std::size_t n_non, std::size_t n, std::size_t d, double lambda0, double delta);

// 3Q sqrt(2 log(2d) / n).
double rademacher_bound(double q, std::size_t n, std::size_t d);

}  // namespace nwdag
