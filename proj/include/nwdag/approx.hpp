#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nwdag/builders.hpp"

namespace nwdag {

struct BarronAtom {
  double c = 0.0;
  std::vector<double> w;
};

// f*(x) = sum_k c_k relu(w_k^T x) on [0,1]^d, carried together with the
// importance-weighted distribution rho that puts mass |c_k| |w_k|_1 / B on atom
// k with amplitude a_k = sign(c_k) B / |w_k|_1, where B = sum_k |c_k| |w_k|_1.
// Under rho, E[a relu(w^T x)] = f*(x) and E[a^2 |w|_1^2] = B^2, so B is a
// certified upper bound on the Barron norm.
class BarronTarget {
 public:
  // label(x) = label_offset + label_scale * f*(x) must map [0,1]^d into [0,1].
  explicit BarronTarget(std::vector<BarronAtom> atoms, double label_scale = 1.0, double label_offset = 0.0);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::span<const BarronAtom> atoms() const noexcept { return atoms_; }
  double barron_bound() const noexcept { return barron_bound_; }

  double operator()(std::span<const double> x) const;
  double label(std::span<const double> x) const { return label_offset_ + label_scale_ * (*this)(x); }
  double label_scale() const noexcept { return label_scale_; }
  double label_offset() const noexcept { return label_offset_; }

  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double amplitude(std::size_t k) const { return amplitudes_.at(k); }
  std::size_t sample_atom(Rng& rng) const;

  // sum_k P(k) a_k relu(w_k^T x); equals f*(x) up to rounding.
  double sampler_mean(std::span<const double> x) const;

 private:
  std::size_t input_dim_ = 0;
  std::vector<BarronAtom> atoms_;
  double barron_bound_ = 0.0;
  double label_scale_ = 1.0;
  double label_offset_ = 0.0;
  std::vector<double> probabilities_;
  std::vector<double> amplitudes_;
};

enum class AtomSigns { Mixed, NonNegative };

// Random atoms with `sparsity` nonzero input weights each, amplitudes rescaled
// so the Barron bound is exactly 1 (hence sup |f*| <= 1 on the cube).
// Input weights always have mixed signs and every atom has a positive weight,
// so no atom vanishes on the cube. NonNegative targets (all c_k > 0) already
// take values in [0,1] and are labeled as is; Mixed targets are labeled with
// (1 + f*) / 2.
BarronTarget make_target(std::uint64_t seed, std::size_t d, std::size_t atom_count, std::size_t sparsity, AtomSigns signs = AtomSigns::Mixed);

struct MCBudget {
  std::size_t m = 1;
  std::size_t retries = 50;
  std::size_t risk_mc_samples = 20000;
};

struct TwoLayerSample {
  TwoLayerParams params;        // W rows are w_k, amplitudes are a_k / m
  double risk = 0.0;            // Monte Carlo estimate of E 1/2 (f - f*)^2
  double risk_stderr = 0.0;
  double amplitude_norm = 0.0;  // sum_k |a_k / m| |w_k|_1
  std::size_t attempts = 0;     // draws used, including the accepted one
};

// Monte Carlo estimate of the population risk 1/2 E (f(x) - f*(x))^2 under the
// uniform distribution on [0,1]^d: (mean, standard error).
std::pair<double, double> mc_two_layer_risk(const TwoLayerParams& params, const BarronTarget& target, std::size_t samples, Rng& rng);

// Draws m atoms i.i.d. from rho until both the risk event (estimate plus two
// standard errors below 3B^2/(2m)) and the norm event (amplitude norm below 2B)
// hold. Throws RetriesExhausted after budget.retries failed draws.
TwoLayerSample sample_two_layer(const BarronTarget& target, const MCBudget& budget, Rng& rng);

// Spreads the m hidden units of a two-layer network over the blocks of spec
// (p_1 + ... + p_L must equal m). The input coordinates are routed through the
// skip connections untouched, every block writes its units' amplitudes into
// one accumulator row, and u reads that row. The result computes the same
// function with weighted path norm 3 sum_j |a_j| |b_j|_1.
BuiltNetwork embed_two_layer_into_blocks(const TwoLayerParams& two_layer, const BlockSpec& spec);

// 3 B^2 / (2 n_non).
double approx_error_bound(double barron_bound, std::size_t n_non);

}  // namespace nwdag
