#include "nwdag/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nwdag/adjacency.hpp"
#include "nwdag/error.hpp"

namespace nwdag {

namespace {

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += std::abs(e);
  return s;
}

double atom_value(const BarronAtom& atom, std::span<const double> x) {
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += atom.w[i] * x[i];
  return relu(z);
}

}  // namespace

BarronTarget::BarronTarget(std::vector<BarronAtom> atoms, double label_scale, double label_offset)
    : atoms_(std::move(atoms)), label_scale_(label_scale), label_offset_(label_offset) {
  if (atoms_.empty()) throw DomainError("a Barron target needs at least one atom");
  input_dim_ = atoms_.front().w.size();
  if (input_dim_ == 0) throw DomainError("atoms must have at least one input weight");
  for (const BarronAtom& atom : atoms_) {
    if (atom.w.size() != input_dim_) throw ShapeError("atoms disagree on the input dimension");
    if (l1(atom.w) == 0.0) throw DomainError("atom with zero input weights");
    if (atom.c == 0.0) throw DomainError("atom with zero amplitude");
    barron_bound_ += std::abs(atom.c) * l1(atom.w);
  }
  for (const BarronAtom& atom : atoms_) {
    const double norm = l1(atom.w);
    probabilities_.push_back(std::abs(atom.c) * norm / barron_bound_);
    amplitudes_.push_back(std::copysign(barron_bound_ / norm, atom.c));
  }
}

double BarronTarget::operator()(std::span<const double> x) const {
  if (x.size() != input_dim_) throw ShapeError("target input has the wrong dimension");
  double f = 0.0;
  for (const BarronAtom& atom : atoms_) f += atom.c * atom_value(atom, x);
  return f;
}

std::size_t BarronTarget::sample_atom(Rng& rng) const {
  // Inverse-CDF sampling keeps the draw sequence identical across standard
  // library implementations.
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k + 1 < probabilities_.size(); ++k) {
    cumulative += probabilities_[k];
    if (u < cumulative) return k;
  }
  return probabilities_.size() - 1;
}

double BarronTarget::sampler_mean(std::span<const double> x) const {
  if (x.size() != input_dim_) throw ShapeError("target input has the wrong dimension");
  double f = 0.0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) f += probabilities_[k] * amplitudes_[k] * atom_value(atoms_[k], x);
  return f;
}

BarronTarget make_target(std::uint64_t seed, std::size_t d, std::size_t atom_count, std::size_t sparsity, AtomSigns signs) {
  if (atom_count < 1) throw DomainError("atom_count must be at least 1");
  if (d < 1) throw DomainError("d must be at least 1");
  sparsity = std::clamp<std::size_t>(sparsity, 1, d);
  Rng rng(seed);
  const bool mixed = signs == AtomSigns::Mixed;
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  std::vector<BarronAtom> atoms;
  std::vector<std::size_t> coords(d);
  for (std::size_t k = 0; k < atom_count; ++k) {
    BarronAtom atom;
    atom.c = magnitude(rng);
    if (mixed && coin(rng)) atom.c = -atom.c;
    atom.w.assign(d, 0.0);
    std::iota(coords.begin(), coords.end(), 0);
    // Partial Fisher-Yates: the first `sparsity` coordinates are the support.
    for (std::size_t i = 0; i < sparsity; ++i) {
      const std::size_t j = i + std::uniform_int_distribution<std::size_t>(0, d - 1 - i)(rng);
      std::swap(coords[i], coords[j]);
      double v = 0.0;
      while (v == 0.0) v = weight(rng);
      atom.w[coords[i]] = v;
    }
    // An atom with no positive weight vanishes on the whole cube.
    if (*std::max_element(atom.w.begin(), atom.w.end()) <= 0.0)
      for (double& v : atom.w) v = -v;
    atoms.push_back(std::move(atom));
  }

  double bound = 0.0;
  for (const BarronAtom& atom : atoms) bound += std::abs(atom.c) * l1(atom.w);
  for (BarronAtom& atom : atoms) atom.c /= bound;
  return mixed ? BarronTarget(std::move(atoms), 0.5, 0.5) : BarronTarget(std::move(atoms));
}

std::pair<double, double> mc_two_layer_risk(const TwoLayerParams& params, const BarronTarget& target, std::size_t samples, Rng& rng) {
  if (samples < 2) throw DomainError("risk estimation needs at least two samples");
  const std::size_t d = target.input_dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(d);
  const TwoLayerParams& p = params;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& e : x) e = unit(rng);
    double f = 0.0;
    for (std::size_t r = 0; r < p.w.rows; ++r) {
      double z = 0.0;
      for (std::size_t c = 0; c < d; ++c) z += p.w(r, c) * x[c];
      f += p.a[r] * relu(z);
    }
    const double diff = f - target(x);
    const double loss = 0.5 * diff * diff;
    sum += loss;
    sum_sq += loss * loss;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

TwoLayerSample sample_two_layer(const BarronTarget& target, const MCBudget& budget, Rng& rng) {
  if (budget.m < 1) throw DomainError("width m must be at least 1");
  const std::size_t d = target.input_dim();
  const double bound = target.barron_bound();
  const double m = static_cast<double>(budget.m);
  const double risk_threshold = 3.0 * bound * bound / (2.0 * m);

  for (std::size_t attempt = 1; attempt <= budget.retries; ++attempt) {
    TwoLayerSample sample;
    sample.params.w = Matrix(budget.m, d);
    sample.params.a.resize(budget.m);
    for (std::size_t k = 0; k < budget.m; ++k) {
      const std::size_t atom = target.sample_atom(rng);
      const auto& w = target.atoms()[atom].w;
      std::copy(w.begin(), w.end(), sample.params.w.data.begin() + static_cast<std::ptrdiff_t>(k * d));
      sample.params.a[k] = target.amplitude(atom) / m;
      sample.amplitude_norm += std::abs(sample.params.a[k]) * l1(w);
    }
    std::tie(sample.risk, sample.risk_stderr) = mc_two_layer_risk(sample.params, target, budget.risk_mc_samples, rng);
    sample.attempts = attempt;
    const bool risk_event = sample.risk + 2.0 * sample.risk_stderr < risk_threshold;
    const bool norm_event = sample.amplitude_norm < 2.0 * bound;
    if (risk_event && norm_event) return sample;
  }
  throw RetriesExhausted("no draw of width " + std::to_string(budget.m) + " met both acceptance events within " + std::to_string(budget.retries) + " attempts");
}

BuiltNetwork embed_two_layer_into_blocks(const TwoLayerParams& two_layer, const BlockSpec& spec) {
  if (auto problem = block_spec_problem(spec)) throw DomainError("block spec violates the shortcut assumption: " + *problem);
  const std::size_t d = spec.d;
  const std::size_t m = two_layer.w.rows;
  if (two_layer.w.cols != d || two_layer.a.size() != m) throw ShapeError("two-layer parameters do not match d");
  if (std::accumulate(spec.p_seq.begin(), spec.p_seq.end(), std::size_t{0}) != m) {
    throw DomainError("block widths p_1..p_L must add up to the two-layer width m=" + std::to_string(m));
  }

  BlockParams p;
  p.v = Matrix::stacked_identity(spec.d_seq[0], d);

  // Row of the current h_l holding input coordinate i, and the accumulator row.
  std::vector<std::size_t> x_row(d);
  std::iota(x_row.begin(), x_row.end(), 0);
  std::optional<std::size_t> acc;

  std::size_t unit = 0;
  for (std::size_t l = 1; l <= spec.L; ++l) {
    const std::size_t width_in = spec.d_seq[l - 1];
    const std::size_t width_out = spec.d_seq[l];
    const std::size_t units = spec.p_seq[l - 1];
    const auto& perm = spec.s_perms[l - 1];

    Matrix w(units, width_in);
    for (std::size_t r = 0; r < units; ++r)
      for (std::size_t i = 0; i < d; ++i) w(r, x_row[i]) = two_layer.w(unit + r, i);

    for (std::size_t& row : x_row) row = perm[row];
    if (acc) {
      acc = perm[*acc];
    } else {
      // Bottom-most row of h_1 not carrying an input coordinate; d_1 >= d + 1
      // guarantees one exists.
      std::size_t row = width_out;
      while (std::find(x_row.begin(), x_row.end(), row - 1) != x_row.end()) --row;
      acc = row - 1;
    }

    Matrix u_block(width_out, units);
    for (std::size_t r = 0; r < units; ++r) u_block(*acc, r) = two_layer.a[unit + r];

    p.w.push_back(std::move(w));
    p.u_blocks.push_back(std::move(u_block));
    unit += units;
  }
  p.u.assign(spec.d_seq[spec.L], 0.0);
  p.u[*acc] = 1.0;
  return build_block_network(spec, p);
}

double approx_error_bound(double barron_bound, std::size_t n_non) {
  if (n_non < 1) throw DomainError("approximation bound needs at least one nonlinearity");
  return 3.0 * barron_bound * barron_bound / (2.0 * static_cast<double>(n_non));
}

}  // namespace nwdag
