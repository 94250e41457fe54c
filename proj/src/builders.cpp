#include "nwdag/builders.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "nwdag/adjacency.hpp"
#include "nwdag/error.hpp"

namespace nwdag {

Matrix Matrix::identity(std::size_t n) { return stacked_identity(n, n); }

Matrix Matrix::stacked_identity(std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  if (x.size() != m.cols) throw ShapeError("matrix-vector shape mismatch");
  std::vector<double> y(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += m(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

namespace {

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    throw ShapeError(std::string(what) + " has shape " + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_length(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n) throw ShapeError(std::string(what) + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
}

// Hands out consecutive node ranges and collects edges.
class Assembler {
 public:
  explicit Assembler(std::size_t d) : d_(d), next_(d + 1) {}

  NodeId block(std::size_t count) {
    NodeId first = next_;
    next_ += count;
    return first;
  }

  // Param edge for every entry of m, zeros included: a zero weight is still a slot.
  void dense(NodeId dst_first, NodeId src_first, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows; ++r)
      for (std::size_t c = 0; c < m.cols; ++c) edges_.push_back(param_edge(dst_first + r, src_first + c, m(r, c)));
  }

  void dense_row(NodeId dst, NodeId src_first, std::span<const double> row) {
    for (std::size_t c = 0; c < row.size(); ++c) edges_.push_back(param_edge(dst, src_first + c, row[c]));
  }

  void relu_diagonal(NodeId dst_first, NodeId src_first, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) edges_.push_back(relu_edge(dst_first + k, src_first + k));
  }

  void skip(NodeId dst_first, NodeId src_first, std::span<const std::size_t> rows) {
    for (std::size_t j = 0; j < rows.size(); ++j) edges_.push_back(fixed_edge(dst_first + rows[j], src_first + j, 1.0));
  }

  BuiltNetwork finish() {
    NodeId sink = next_ - 1;
    NonlinearDag dag(sink, d_, std::move(edges_));
    dag.require_valid();
    ParamVector theta = stored_params(dag);
    return {std::move(dag), std::move(theta)};
  }

 private:
  std::size_t d_;
  NodeId next_;
  std::vector<Edge> edges_;
};

std::vector<std::size_t> identity_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

BuiltNetwork build_two_layer(std::size_t d, std::size_t m, const TwoLayerParams& params) {
  if (d < 1) throw ShapeError("two-layer network needs d >= 1");
  if (m < 1) throw ShapeError("two-layer network needs width m >= 1");
  require_shape(params.w, m, d, "W");
  require_length(params.a, m, "a");

  Assembler g(d);
  const NodeId pre = g.block(m);
  const NodeId post = g.block(m);
  const NodeId sink = g.block(1);
  g.dense(pre, 1, params.w);
  g.relu_diagonal(post, pre, m);
  g.dense_row(sink, post, params.a);
  return g.finish();
}

BuiltNetwork build_fc(std::span<const std::size_t> widths, const FcParams& params) {
  if (widths.size() < 2) throw ShapeError("fully connected network needs widths m_0..m_L with L >= 1");
  for (std::size_t w : widths) {
    if (w < 1) throw ShapeError("fully connected layer widths must be positive");
  }
  const std::size_t L = widths.size() - 1;
  if (params.w.size() != L) throw ShapeError("expected " + std::to_string(L) + " weight matrices");
  for (std::size_t l = 1; l <= L; ++l) require_shape(params.w[l - 1], widths[l], widths[l - 1], "W[l]");
  require_length(params.u, widths[L], "u");

  Assembler g(widths[0]);
  NodeId prev = 1;
  for (std::size_t l = 1; l <= L; ++l) {
    const NodeId pre = g.block(widths[l]);
    const NodeId post = g.block(widths[l]);
    g.dense(pre, prev, params.w[l - 1]);
    g.relu_diagonal(post, pre, widths[l]);
    prev = post;
  }
  const NodeId sink = g.block(1);
  g.dense_row(sink, prev, params.u);
  return g.finish();
}

BuiltNetwork build_resnet(std::size_t d, std::size_t D, std::size_t m, std::size_t L, const ResNetParams& params) {
  if (d < 1 || m < 1 || L < 1) throw ShapeError("ResNet needs d, m, L >= 1");
  if (D < d + 1) throw ShapeError("ResNet needs D >= d + 1");
  if (params.w.size() != L || params.u_blocks.size() != L) throw ShapeError("expected " + std::to_string(L) + " residual blocks");
  require_shape(params.v, D, d, "V");
  for (std::size_t l = 0; l < L; ++l) {
    require_shape(params.w[l], m, D, "W[l]");
    require_shape(params.u_blocks[l], D, m, "U[l]");
  }
  require_length(params.u, D, "u");

  Assembler g(d);
  NodeId h = g.block(D);
  g.dense(h, 1, params.v);
  const auto skip_rows = identity_rows(D);
  for (std::size_t l = 0; l < L; ++l) {
    const NodeId pre = g.block(m);
    const NodeId post = g.block(m);
    const NodeId next = g.block(D);
    g.dense(pre, h, params.w[l]);
    g.relu_diagonal(post, pre, m);
    g.skip(next, h, skip_rows);
    g.dense(next, post, params.u_blocks[l]);
    h = next;
  }
  const NodeId sink = g.block(1);
  g.dense_row(sink, h, params.u);
  return g.finish();
}

BuiltNetwork build_densenet(std::size_t d, std::size_t k0, std::size_t k, std::size_t m, std::size_t L, const DenseNetParams& params) {
  if (d < 1 || k < 1 || m < 1 || L < 1) throw ShapeError("DenseNet needs d, k, m, L >= 1");
  if (k0 < d + 1) throw ShapeError("DenseNet needs k0 >= d + 1");
  if (params.w.size() != L || params.u_blocks.size() != L) throw ShapeError("expected " + std::to_string(L) + " dense blocks");
  require_shape(params.v, k0, d, "V");
  for (std::size_t l = 1; l <= L; ++l) {
    require_shape(params.w[l - 1], l * m, k0 + (l - 1) * k, "W[l]");
    require_shape(params.u_blocks[l - 1], k, l * m, "U[l]");
  }
  require_length(params.u, k0 + L * k, "u");

  Assembler g(d);
  NodeId h = g.block(k0);
  g.dense(h, 1, params.v);
  for (std::size_t l = 1; l <= L; ++l) {
    const std::size_t width_prev = k0 + (l - 1) * k;
    const std::size_t p = l * m;
    const NodeId pre = g.block(p);
    const NodeId post = g.block(p);
    const NodeId next = g.block(width_prev + k);
    g.dense(pre, h, params.w[l - 1]);
    g.relu_diagonal(post, pre, p);
    // Concatenation: the stacked identity copies h_{l-1}, the lower block of
    // (0; U_l) appends the k new channels.
    g.skip(next, h, identity_rows(width_prev));
    g.dense(next + width_prev, post, params.u_blocks[l - 1]);
    h = next;
  }
  const NodeId sink = g.block(1);
  g.dense_row(sink, h, params.u);
  return g.finish();
}

BuiltNetwork build_network(const ArchitectureParams& params) {
  struct Visitor {
    BuiltNetwork operator()(const TwoLayerParams& p) const { return build_two_layer(p.w.cols, p.w.rows, p); }
    BuiltNetwork operator()(const FcParams& p) const {
      if (p.w.empty()) throw ShapeError("fully connected network without layers");
      std::vector<std::size_t> widths{p.w.front().cols};
      for (const Matrix& w : p.w) widths.push_back(w.rows);
      return build_fc(widths, p);
    }
    BuiltNetwork operator()(const ResNetParams& p) const {
      const std::size_t m = p.w.empty() ? 0 : p.w.front().rows;
      return build_resnet(p.v.cols, p.v.rows, m, p.w.size(), p);
    }
    BuiltNetwork operator()(const DenseNetParams& p) const {
      const std::size_t m = p.w.empty() ? 0 : p.w.front().rows;
      const std::size_t k = p.u_blocks.empty() ? 0 : p.u_blocks.front().rows;
      return build_densenet(p.v.cols, p.v.rows, k, m, p.w.size(), p);
    }
  };
  return std::visit(Visitor{}, params);
}

namespace {

std::vector<double> relu_all(std::vector<double> v) {
  for (double& e : v) e = relu(e);
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("inner product length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double direct_forward(const ArchitectureParams& params, std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;

    double operator()(const TwoLayerParams& p) const { return dot(p.a, relu_all(matvec(p.w, x))); }

    double operator()(const FcParams& p) const {
      std::vector<double> h(x.begin(), x.end());
      for (const Matrix& w : p.w) h = relu_all(matvec(w, h));
      return dot(p.u, h);
    }

    double operator()(const ResNetParams& p) const {
      std::vector<double> h = matvec(p.v, x);
      for (std::size_t l = 0; l < p.w.size(); ++l) {
        const auto g = relu_all(matvec(p.w[l], h));
        const auto r = matvec(p.u_blocks[l], g);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += r[i];
      }
      return dot(p.u, h);
    }

    double operator()(const DenseNetParams& p) const {
      std::vector<double> h = matvec(p.v, x);
      for (std::size_t l = 0; l < p.w.size(); ++l) {
        const auto g = relu_all(matvec(p.w[l], h));
        const auto r = matvec(p.u_blocks[l], g);
        h.insert(h.end(), r.begin(), r.end());
      }
      return dot(p.u, h);
    }
  };
  return std::visit(Visitor{x}, params);
}

std::string arch_name(const ArchitectureDims& dims) {
  struct Visitor {
    std::string operator()(const TwoLayerDims&) const { return "two_layer"; }
    std::string operator()(const FcDims&) const { return "fc"; }
    std::string operator()(const ResNetDims&) const { return "resnet"; }
    std::string operator()(const DenseNetDims&) const { return "densenet"; }
  };
  return std::visit(Visitor{}, dims);
}

std::size_t input_dim(const ArchitectureDims& dims) {
  struct Visitor {
    std::size_t operator()(const TwoLayerDims& s) const { return s.d; }
    std::size_t operator()(const FcDims& s) const { return s.widths.empty() ? 0 : s.widths.front(); }
    std::size_t operator()(const ResNetDims& s) const { return s.d; }
    std::size_t operator()(const DenseNetDims& s) const { return s.d; }
  };
  return std::visit(Visitor{}, dims);
}

InitScheme parse_init(const std::string& text) {
  if (text == "zero") return InitScheme::zero();
  if (text == "scaled") return InitScheme::scaled();
  double lo = 0.0, hi = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "uniform(%lf,%lf%c", &lo, &hi, &tail) == 3 && tail == ')' && lo <= hi) {
    return InitScheme::uniform(lo, hi);
  }
  throw DomainError("unknown init scheme '" + text + "' (expected zero, scaled or uniform(a,b))");
}

namespace {

double draw(const InitScheme& init, std::size_t fan_in, Rng& rng) {
  switch (init.kind) {
    case InitScheme::Kind::Zero:
      return 0.0;
    case InitScheme::Kind::Uniform:
      return std::uniform_real_distribution<double>(init.lo, init.hi)(rng);
    case InitScheme::Kind::Scaled: {
      const double r = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
      return std::uniform_real_distribution<double>(-r, r)(rng);
    }
  }
  return 0.0;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, const InitScheme& init, Rng& rng) {
  Matrix m(rows, cols);
  for (double& e : m.data) e = draw(init, cols, rng);
  return m;
}

std::vector<double> random_row(std::size_t n, const InitScheme& init, Rng& rng) {
  std::vector<double> v(n);
  for (double& e : v) e = draw(init, n, rng);
  return v;
}

}  // namespace

ArchitectureParams make_params(const ArchitectureDims& dims, const InitScheme& init, Rng& rng) {
  struct Visitor {
    const InitScheme& init;
    Rng& rng;

    ArchitectureParams operator()(const TwoLayerDims& s) const {
      TwoLayerParams p;
      p.w = random_matrix(s.m, s.d, init, rng);
      p.a = random_row(s.m, init, rng);
      return p;
    }
    ArchitectureParams operator()(const FcDims& s) const {
      if (s.widths.size() < 2) throw ShapeError("fully connected network needs widths m_0..m_L with L >= 1");
      FcParams p;
      for (std::size_t l = 1; l < s.widths.size(); ++l) p.w.push_back(random_matrix(s.widths[l], s.widths[l - 1], init, rng));
      p.u = random_row(s.widths.back(), init, rng);
      return p;
    }
    ArchitectureParams operator()(const ResNetDims& s) const {
      ResNetParams p;
      p.v = random_matrix(s.D, s.d, init, rng);
      for (std::size_t l = 0; l < s.L; ++l) {
        p.w.push_back(random_matrix(s.m, s.D, init, rng));
        p.u_blocks.push_back(random_matrix(s.D, s.m, init, rng));
      }
      p.u = random_row(s.D, init, rng);
      return p;
    }
    ArchitectureParams operator()(const DenseNetDims& s) const {
      DenseNetParams p;
      p.v = random_matrix(s.k0, s.d, init, rng);
      for (std::size_t l = 1; l <= s.L; ++l) {
        p.w.push_back(random_matrix(l * s.m, s.k0 + (l - 1) * s.k, init, rng));
        p.u_blocks.push_back(random_matrix(s.k, l * s.m, init, rng));
      }
      p.u = random_row(s.k0 + s.L * s.k, init, rng);
      return p;
    }
  };
  return std::visit(Visitor{init, rng}, dims);
}

ParamVector init_params(const NonlinearDag& dag, const InitScheme& init, Rng& rng) {
  dag.require_valid();
  ParamVector theta{std::vector<double>(dag.param_count(), 0.0)};
  for (NodeId i = 1; i <= dag.node_count(); ++i) {
    const auto arcs = dag.incoming(i);
    std::size_t fan_in = 0;
    for (const Arc& arc : arcs) fan_in += arc.kind == EdgeKind::Param;
    for (const Arc& arc : arcs) {
      if (arc.kind == EdgeKind::Param) theta[arc.slot] = draw(init, fan_in, rng);
    }
  }
  return theta;
}

BlockSpec make_block_spec(std::size_t d, std::vector<std::size_t> d_seq, std::vector<std::size_t> p_seq) {
  BlockSpec spec;
  spec.d = d;
  spec.L = p_seq.size();
  spec.d_seq = std::move(d_seq);
  spec.p_seq = std::move(p_seq);
  for (std::size_t l = 1; l <= spec.L && l < spec.d_seq.size(); ++l) spec.s_perms.push_back(identity_rows(spec.d_seq[l - 1]));
  return spec;
}

std::optional<std::string> block_spec_problem(const BlockSpec& spec) {
  if (spec.d < 1) return "d must be at least 1";
  if (spec.L < 1) return "block form needs at least one block";
  if (spec.d_seq.size() != spec.L + 1) return "d_seq must hold d_0..d_L";
  if (spec.p_seq.size() != spec.L) return "p_seq must hold p_1..p_L";
  if (spec.s_perms.size() != spec.L) return "s_perms must hold one permutation per block";
  for (std::size_t l = 1; l <= spec.L; ++l) {
    const auto& perm = spec.s_perms[l - 1];
    if (spec.d_seq[l] < spec.d_seq[l - 1]) return "block " + std::to_string(l) + ": d_l < d_{l-1}, so S cannot be a row permutation of (I; 0)";
    if (perm.size() != spec.d_seq[l - 1]) return "block " + std::to_string(l) + ": S permutation has the wrong length";
    std::vector<bool> used(spec.d_seq[l], false);
    for (std::size_t row : perm) {
      if (row >= spec.d_seq[l] || used[row]) return "block " + std::to_string(l) + ": S is not a row permutation of (I; 0)";
      used[row] = true;
    }
  }
  const std::size_t need = spec.d + 1;
  if (spec.d_seq[0] < need) return "d_0 = " + std::to_string(spec.d_seq[0]) + " < d + 1";
  for (std::size_t l = 1; l <= spec.L; ++l) {
    if (spec.d_seq[l] < need) return "d_" + std::to_string(l) + " = " + std::to_string(spec.d_seq[l]) + " < d + 1";
    if (spec.p_seq[l - 1] < need) return "p_" + std::to_string(l) + " = " + std::to_string(spec.p_seq[l - 1]) + " < d + 1";
  }
  return std::nullopt;
}

BuiltNetwork build_block_network(const BlockSpec& spec, const BlockParams& params) {
  if (auto problem = block_spec_problem(spec)) throw ShapeError("block spec violates the shortcut assumption: " + *problem);
  if (params.w.size() != spec.L || params.u_blocks.size() != spec.L) throw ShapeError("expected " + std::to_string(spec.L) + " blocks of parameters");
  require_shape(params.v, spec.d_seq[0], spec.d, "V");
  for (std::size_t l = 1; l <= spec.L; ++l) {
    require_shape(params.w[l - 1], spec.p_seq[l - 1], spec.d_seq[l - 1], "W[l]");
    require_shape(params.u_blocks[l - 1], spec.d_seq[l], spec.p_seq[l - 1], "U[l]");
  }
  require_length(params.u, spec.d_seq[spec.L], "u");

  Assembler g(spec.d);
  NodeId h = g.block(spec.d_seq[0]);
  g.dense(h, 1, params.v);
  for (std::size_t l = 1; l <= spec.L; ++l) {
    const std::size_t p = spec.p_seq[l - 1];
    const NodeId pre = g.block(p);
    const NodeId post = g.block(p);
    const NodeId next = g.block(spec.d_seq[l]);
    g.dense(pre, h, params.w[l - 1]);
    g.relu_diagonal(post, pre, p);
    g.skip(next, h, spec.s_perms[l - 1]);
    g.dense(next, post, params.u_blocks[l - 1]);
    h = next;
  }
  const NodeId sink = g.block(1);
  g.dense_row(sink, h, params.u);
  return g.finish();
}

}  // namespace nwdag
