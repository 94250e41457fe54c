#include "nwdag/builders.hpp"

namespace nwdag {

bool validate_input_assumption(const NonlinearDag& dag) {
  dag.require_valid();
  for (const Edge& e : dag.edges()) {
    if (e.src <= dag.input_dim() && e.kind != EdgeKind::Param) return false;
  }
  return true;
}

namespace {

// Half-open node range [lo, hi).
struct Range {
  NodeId lo = 0, hi = 0;
  bool contains(NodeId i) const noexcept { return i >= lo && i < hi; }
  std::size_t size() const noexcept { return hi - lo; }
};

class LayoutMatcher {
 public:
  explicit LayoutMatcher(const NonlinearDag& dag) : dag_(dag) {}

  ShortcutCheck run() {
    if (!dag_.is_valid()) return fail("DAG is invalid: " + dag_.violations().front());
    const std::size_t d = dag_.input_dim();
    const NodeId n = dag_.sink();

    const Range inputs{1, d + 1};
    const Range first = run_of(d + 1, [&](NodeId i) { return all_from(i, inputs, EdgeKind::Param); });
    if (first.size() == 0) return fail("no block of Param edges leaves the inputs");

    const bool activation_next = first.hi < n && !dag_.incoming(first.hi).empty() && dag_.incoming(first.hi).front().kind == EdgeKind::Nonlinear;
    if (activation_next) return match_two_layer(first);
    return match_block_chain(first);
  }

 private:
  template <class Pred>
  Range run_of(NodeId start, Pred pred) const {
    NodeId end = start;
    while (end < dag_.sink() && pred(end)) ++end;
    return {start, end};
  }

  bool all_from(NodeId i, Range from, EdgeKind kind) const {
    const auto arcs = dag_.incoming(i);
    if (arcs.empty()) return false;
    for (const Arc& arc : arcs) {
      if (arc.kind != kind || !from.contains(arc.src)) return false;
    }
    return true;
  }

  // Nodes [at, at + pre.size()) must be relu of pre, one to one and in order.
  std::optional<Range> match_activations(Range pre, NodeId at) const {
    if (at + pre.size() > dag_.sink()) return std::nullopt;
    for (std::size_t k = 0; k < pre.size(); ++k) {
      const auto arcs = dag_.incoming(at + k);
      if (arcs.size() != 1 || arcs[0].kind != EdgeKind::Nonlinear || arcs[0].src != pre.lo + k) return std::nullopt;
    }
    return Range{at, at + pre.size()};
  }

  ShortcutCheck match_two_layer(Range hidden) {
    auto post = match_activations(hidden, hidden.hi);
    if (!post) return fail("activation block is not a diagonal relu I");
    if (post->hi != dag_.sink()) return fail("two-layer layout must end in the sink right after the activations");
    if (!all_from(dag_.sink(), *post, EdgeKind::Param)) return fail("sink must read the activations through Param edges only");
    ShortcutCheck check;
    check.form = ShortcutCheck::Form::TwoLayer;
    check.width = hidden.size();
    check.satisfied = true;
    return check;
  }

  ShortcutCheck match_block_chain(Range h0) {
    BlockSpec spec;
    spec.d = dag_.input_dim();
    spec.d_seq.push_back(h0.size());
    Range h = h0;

    while (h.hi < dag_.sink()) {
      const std::size_t l = spec.L + 1;
      const std::string where = "block " + std::to_string(l) + ": ";
      const Range pre = run_of(h.hi, [&](NodeId i) { return all_from(i, h, EdgeKind::Param); });
      if (pre.size() == 0) return fail(where + "no pre-activation nodes fed by W");
      auto post = match_activations(pre, pre.hi);
      if (!post) return fail(where + "activation block is not a diagonal relu I");

      const Range post_range = *post;
      const Range next = run_of(post_range.hi, [&](NodeId i) {
        const auto arcs = dag_.incoming(i);
        if (arcs.empty()) return false;
        for (const Arc& arc : arcs) {
          const bool skip = arc.kind == EdgeKind::Fixed && h.contains(arc.src);
          const bool residual = arc.kind == EdgeKind::Param && post_range.contains(arc.src);
          if (!skip && !residual) return false;
        }
        return true;
      });
      if (next.size() == 0) return fail(where + "no output nodes fed by S and U");

      // S: every node of h_{l-1} feeds exactly one node of h_l with weight 1,
      // and no node of h_l receives two skips.
      std::vector<std::size_t> perm(h.size(), dag_.sink());
      std::vector<bool> row_used(next.size(), false);
      for (NodeId i = next.lo; i < next.hi; ++i) {
        for (const Arc& arc : dag_.incoming(i)) {
          if (arc.kind != EdgeKind::Fixed) continue;
          if (arc.weight != 1.0) return fail(where + "skip edge " + std::to_string(i) + "<-" + std::to_string(arc.src) + " does not have weight 1");
          const std::size_t row = i - next.lo;
          const std::size_t col = arc.src - h.lo;
          if (row_used[row] || perm[col] != dag_.sink()) return fail(where + "S is not a row permutation of (I; 0)");
          row_used[row] = true;
          perm[col] = row;
        }
      }
      for (std::size_t row : perm) {
        if (row == dag_.sink()) return fail(where + "S leaves a column of h_{l-1} unused");
      }

      spec.L = l;
      spec.p_seq.push_back(pre.size());
      spec.d_seq.push_back(next.size());
      spec.s_perms.push_back(std::move(perm));
      h = next;
    }

    if (spec.L == 0) return fail("no shortcut block between the input block and the sink");
    if (!all_from(dag_.sink(), h, EdgeKind::Param)) return fail("sink must read h_L through Param edges only");

    ShortcutCheck check;
    check.form = ShortcutCheck::Form::BlockChain;
    if (auto problem = block_spec_problem(spec)) {
      check.diagnostic = *problem;
    } else {
      check.satisfied = true;
    }
    check.spec = std::move(spec);
    return check;
  }

  static ShortcutCheck fail(std::string why) {
    ShortcutCheck check;
    check.diagnostic = std::move(why);
    return check;
  }

  const NonlinearDag& dag_;
};

}  // namespace

ShortcutCheck validate_shortcut_form(const NonlinearDag& dag) { return LayoutMatcher(dag).run(); }

}  // namespace nwdag
