#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nwdag/dag.hpp"

namespace nwdag {

using Rng = std::mt19937_64;

// Row-major dense matrix, only as much as the architecture containers need.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static Matrix identity(std::size_t n);
  // (I; 0) of shape rows x cols, rows >= cols.
  static Matrix stacked_identity(std::size_t rows, std::size_t cols);
};

std::vector<double> matvec(const Matrix& m, std::span<const double> x);

// f(x) = a^T relu(W x), W: m x d.
struct TwoLayerParams {
  Matrix w;
  std::vector<double> a;
};

// h0 = x, h_l = relu(W_l h_{l-1}), f = u^T h_L; W_l: m_l x m_{l-1}.
struct FcParams {
  std::vector<Matrix> w;
  std::vector<double> u;
};

// h0 = V x, g_l = relu(W_l h_{l-1}), h_l = h_{l-1} + U_l g_l, f = u^T h_L.
// V: D x d, W_l: m x D, U_l: D x m, u: D.
struct ResNetParams {
  Matrix v;
  std::vector<Matrix> w;
  std::vector<Matrix> u_blocks;
  std::vector<double> u;
};

// h0 = V x, g_l = relu(W_l h_{l-1}), h_l = (h_{l-1}; U_l g_l), f = u^T h_L.
// V: k0 x d, W_l: lm x (k0 + (l-1)k), U_l: k x lm, u: k0 + Lk. k is the growth rate.
struct DenseNetParams {
  Matrix v;
  std::vector<Matrix> w;
  std::vector<Matrix> u_blocks;
  std::vector<double> u;
};

using ArchitectureParams = std::variant<TwoLayerParams, FcParams, ResNetParams, DenseNetParams>;

struct TwoLayerDims {
  std::size_t d = 0, m = 0;
};
struct FcDims {
  std::vector<std::size_t> widths;  // m_0 = d, m_1, ..., m_L
};
struct ResNetDims {
  std::size_t d = 0, D = 0, m = 0, L = 0;
};
struct DenseNetDims {
  std::size_t d = 0, k0 = 0, k = 0, m = 0, L = 0;
};

using ArchitectureDims = std::variant<TwoLayerDims, FcDims, ResNetDims, DenseNetDims>;

std::string arch_name(const ArchitectureDims& dims);
std::size_t input_dim(const ArchitectureDims& dims);

struct BuiltNetwork {
  NonlinearDag dag;
  ParamVector theta;
};

BuiltNetwork build_two_layer(std::size_t d, std::size_t m, const TwoLayerParams& params);
BuiltNetwork build_fc(std::span<const std::size_t> widths, const FcParams& params);
BuiltNetwork build_resnet(std::size_t d, std::size_t D, std::size_t m, std::size_t L, const ResNetParams& params);
BuiltNetwork build_densenet(std::size_t d, std::size_t k0, std::size_t k, std::size_t m, std::size_t L, const DenseNetParams& params);

// Dispatches on the parameter type; dimensions are read off the shapes.
BuiltNetwork build_network(const ArchitectureParams& params);

// Evaluates the architecture's own layer recursion, never touching a DAG.
double direct_forward(const ArchitectureParams& params, std::span<const double> x);

struct InitScheme {
  enum class Kind { Zero, Uniform, Scaled };
  Kind kind = Kind::Scaled;
  double lo = 0.0, hi = 0.0;  // Uniform only

  static InitScheme zero() { return {Kind::Zero}; }
  static InitScheme uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  // Uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)], fan_in counted per destination.
  static InitScheme scaled() { return {Kind::Scaled}; }
};

// Parses "zero", "scaled" or "uniform(a,b)".
InitScheme parse_init(const std::string& text);

ArchitectureParams make_params(const ArchitectureDims& dims, const InitScheme& init, Rng& rng);

// Fresh Param weights for an existing DAG; Fixed edges are left alone.
ParamVector init_params(const NonlinearDag& dag, const InitScheme& init, Rng& rng);

// ---------------------------------------------------------------------------
// Shortcut-connection block form.
//
// Node layout: d inputs, h_0 (d_0 nodes), then per block l the pre-activations
// (p_l), the activations (p_l) and h_l (d_l), then the sink. Block l wires
// W_l: h_{l-1} -> pre, relu I: pre -> post, S_l: h_{l-1} -> h_l (Fixed, weight
// 1) and U_l: post -> h_l (Param).
// ---------------------------------------------------------------------------

struct BlockSpec {
  std::size_t d = 0;
  std::size_t L = 0;
  std::vector<std::size_t> d_seq;  // d_0 .. d_L
  std::vector<std::size_t> p_seq;  // p_1 .. p_L
  // s_perms[l-1][j] is the row of h_l that receives coordinate j of h_{l-1}.
  std::vector<std::vector<std::size_t>> s_perms;

  bool operator==(const BlockSpec&) const = default;
};

// S_l = (I; 0) in every block.
BlockSpec make_block_spec(std::size_t d, std::vector<std::size_t> d_seq, std::vector<std::size_t> p_seq);

// Empty when the spec is well formed and min{d_0, d_l, p_l} >= d + 1 holds.
std::optional<std::string> block_spec_problem(const BlockSpec& spec);

// Dense blocks: V is d_0 x d, W_l is p_l x d_{l-1}, U_l is d_l x p_l, u has d_L entries.
struct BlockParams {
  Matrix v;
  std::vector<Matrix> w;
  std::vector<Matrix> u_blocks;
  std::vector<double> u;
};

BuiltNetwork build_block_network(const BlockSpec& spec, const BlockParams& params);

// ---------------------------------------------------------------------------
// Structural assumptions.
// ---------------------------------------------------------------------------

// Every edge leaving an input node is a Param edge.
bool validate_input_assumption(const NonlinearDag& dag);

struct ShortcutCheck {
  enum class Form { TwoLayer, BlockChain };

  bool satisfied = false;
  std::optional<Form> form;       // set whenever the layout was recognized
  std::optional<BlockSpec> spec;  // BlockChain layouts only
  std::size_t width = 0;          // TwoLayer layouts only
  std::string diagnostic;
};

// Structural pattern match against the two admissible adjacency layouts. Weight
// values are ignored except that skip (Fixed) edges must carry weight 1.
ShortcutCheck validate_shortcut_form(const NonlinearDag& dag);

// ---------------------------------------------------------------------------
// Padding and decomposition.
// ---------------------------------------------------------------------------

// Appends nodes N+1..N_bar; the only new edge is a Fixed weight-1 relay from the
// old sink to the new one.
BuiltNetwork embed_pad(const NonlinearDag& dag, const ParamVector& theta, std::size_t n_bar);

// The sub-network computing node i: nodes 1..i and the edges among them.
BuiltNetwork truncate_at(const NonlinearDag& dag, const ParamVector& theta, NodeId i);

struct SinkDecomposition {
  std::vector<double> linear;     // a_1 .. a_d
  std::vector<double> nonlinear;  // a_{d+1} .. a_{N-1}
  std::vector<BuiltNetwork> subnets;  // f^{d+1} .. f^{N-1}

  double coefficient(NodeId i) const { return i <= linear.size() ? linear[i - 1] : nonlinear[i - linear.size() - 1]; }
};

// f^N(x) = sum_{i<=d} a_i x_i + sum_{d<i<N} a_i relu(f^i(x)).
SinkDecomposition decompose_sink(const NonlinearDag& dag, const ParamVector& theta);

// Same coefficient recursion for every node at once: row i holds the
// coefficients of node i over the basis (x_1..x_d, relu(h_{d+1})..relu(h_{N})).
std::vector<std::vector<double>> decomposition_coefficients(const NonlinearDag& dag, const ParamVector& theta);

}  // namespace nwdag
