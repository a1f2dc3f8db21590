/*!
 *  Copyright (c) 2026 by Contributors
 * \file kernel/common.cc
 * \brief Names, operand validation and format/strategy selection.
 */
#include <omp.h>

#include <atomic>
#include <charconv>

#include "kernel_impl.h"

namespace mpg {

namespace {
std::atomic<int> g_default_threads{0};

char TargetChar(Target t) {
  return t == Target::kSrc ? 'u' : t == Target::kDst ? 'v' : 'e';
}

Target ParseTarget(std::string_view s, std::string_view whole) {
  if (s == "u") return Target::kSrc;
  if (s == "v") return Target::kDst;
  if (s == "e") return Target::kEdge;
  MPG_FAIL(ErrorCode::kInvalidArgument, "bad target '" << s << "' in message function '" << whole << "'");
}

const char* OpName(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "add";
    case BinaryOp::kSub: return "sub";
    case BinaryOp::kMul: return "mul";
    case BinaryOp::kDiv: return "div";
    case BinaryOp::kDot: return "dot";
    case BinaryOp::kCopyLhs: return "copy_lhs";
    case BinaryOp::kCopyRhs: return "copy_rhs";
  }
  return "?";
}
}  // namespace

const char* TargetName(Target t) {
  return t == Target::kSrc ? "src" : t == Target::kDst ? "dst" : "edge";
}

const char* ReduceName(ReduceOp r) {
  switch (r) {
    case ReduceOp::kSum: return "sum";
    case ReduceOp::kMax: return "max";
    case ReduceOp::kMin: return "min";
    case ReduceOp::kMean: return "mean";
  }
  return "?";
}

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kSerialReference: return "serial";
    case Strategy::kNodeParallel: return "np";
    case Strategy::kEdgeParallel: return "ep";
    case Strategy::kFeatureParallel: return "fp";
  }
  return "?";
}

const char* FormatName(Format f) {
  switch (f) {
    case Format::kAuto: return "auto";
    case Format::kCoo: return "coo";
    case Format::kCsr: return "csr";
    case Format::kCsc: return "csc";
  }
  return "?";
}

const char* KernelName(KernelKind k) { return k == KernelKind::kGSpMM ? "gspmm" : "gsddmm"; }

ReduceOp ParseReduce(std::string_view s) {
  if (s == "sum") return ReduceOp::kSum;
  if (s == "max") return ReduceOp::kMax;
  if (s == "min") return ReduceOp::kMin;
  if (s == "mean") return ReduceOp::kMean;
  MPG_FAIL(ErrorCode::kInvalidArgument, "unknown reduce function '" << s << "'");
}

Strategy ParseStrategy(std::string_view s) {
  if (s == "auto") return Strategy::kAuto;
  if (s == "serial" || s == "serial_reference") return Strategy::kSerialReference;
  if (s == "np" || s == "node_parallel") return Strategy::kNodeParallel;
  if (s == "ep" || s == "edge_parallel") return Strategy::kEdgeParallel;
  if (s == "fp" || s == "feature_parallel") return Strategy::kFeatureParallel;
  MPG_FAIL(ErrorCode::kInvalidStrategy, "unknown strategy '" << s << "'");
}

Format ParseFormat(std::string_view s) {
  if (s == "auto") return Format::kAuto;
  if (s == "coo") return Format::kCoo;
  if (s == "csr") return Format::kCsr;
  if (s == "csc") return Format::kCsc;
  MPG_FAIL(ErrorCode::kInvalidArgument, "unknown sparse format '" << s << "'");
}

std::string MessageFunc::Name() const {
  if (op == BinaryOp::kCopyLhs) return std::string("copy_lhs_") + TargetChar(lhs);
  if (op == BinaryOp::kCopyRhs) return std::string("copy_rhs_") + TargetChar(rhs);
  std::string s = std::string(1, TargetChar(lhs)) + "_" + OpName(op) + "_" + TargetChar(rhs);
  if (op == BinaryOp::kDot && heads != 1) s += "/" + std::to_string(heads);
  return s;
}

MessageFunc MessageFunc::Parse(std::string_view name) {
  if (name == "copy_u") return CopyLhs(Target::kSrc);
  if (name == "copy_v") return CopyLhs(Target::kDst);
  if (name == "copy_e") return CopyRhs(Target::kEdge);
  if (name.rfind("copy_lhs_", 0) == 0) return CopyLhs(ParseTarget(name.substr(9), name));
  if (name.rfind("copy_rhs_", 0) == 0) return CopyRhs(ParseTarget(name.substr(9), name));
  std::string_view body = name;
  uint32_t heads = 1;
  if (auto slash = name.find('/'); slash != std::string_view::npos) {
    body = name.substr(0, slash);
    auto digits = name.substr(slash + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), heads);
    MPG_CHECK_ARG(ec == std::errc() && ptr == digits.data() + digits.size() && heads > 0,
                  "bad head count in '" << name << "'");
  }
  const auto a = body.find('_');
  const auto b = body.rfind('_');
  MPG_CHECK_ARG(a != std::string_view::npos && b != a,
                "unknown message function '" << name << "'");
  const Target l = ParseTarget(body.substr(0, a), name);
  const Target r = ParseTarget(body.substr(b + 1), name);
  const auto op = body.substr(a + 1, b - a - 1);
  MessageFunc f;
  if (op == "add") f = Binary(BinaryOp::kAdd, l, r);
  else if (op == "sub") f = Binary(BinaryOp::kSub, l, r);
  else if (op == "mul") f = Binary(BinaryOp::kMul, l, r);
  else if (op == "div") f = Binary(BinaryOp::kDiv, l, r);
  else if (op == "dot") f = Dot(l, r, heads);
  else MPG_FAIL(ErrorCode::kInvalidArgument, "unknown message op '" << op << "' in '" << name << "'");
  MPG_CHECK_ARG(heads == 1 || f.op == BinaryOp::kDot,
                "head count only applies to dot in '" << name << "'");
  return f;
}

size_t MessageDim(const MessageFunc& phi, size_t lhs_dim, size_t rhs_dim) {
  switch (phi.op) {
    case BinaryOp::kCopyLhs: return lhs_dim;
    case BinaryOp::kCopyRhs: return rhs_dim;
    case BinaryOp::kDot:
      MPG_CHECK_SHAPE(phi.heads >= 1, "dot needs at least one head");
      MPG_CHECK_SHAPE(lhs_dim == rhs_dim && lhs_dim % phi.heads == 0,
                      "dot needs equal operand widths divisible by heads, got "
                          << lhs_dim << " and " << rhs_dim << " with " << phi.heads
                          << " heads");
      return phi.heads;
    default: break;
  }
  if (lhs_dim == rhs_dim) return lhs_dim;
  if (lhs_dim != 0 && rhs_dim != 0) {
    if (lhs_dim % rhs_dim == 0) return lhs_dim;
    if (rhs_dim % lhs_dim == 0) return rhs_dim;
  }
  MPG_FAIL(ErrorCode::kShape, phi.Name() << ": operand widths " << lhs_dim << " and " << rhs_dim
                                    << " do not broadcast");
}

void SetDefaultNumThreads(int n) { g_default_threads.store(n > 0 ? n : 0); }

int DefaultNumThreads() {
  const int n = g_default_threads.load();
  return n > 0 ? n : std::max(1, omp_get_max_threads());
}

Format SelectFormat(KernelKind kernel, Direction direction) {
  if (kernel == KernelKind::kGSDDMM) return Format::kCoo;
  return direction == Direction::kForward ? Format::kCsc : Format::kCsr;
}

Strategy DefaultStrategy(KernelKind kernel) {
  return kernel == KernelKind::kGSpMM ? Strategy::kNodeParallel : Strategy::kEdgeParallel;
}

Format NativeFormat(KernelKind kernel, Strategy strategy) {
  switch (strategy) {
    case Strategy::kSerialReference:
    case Strategy::kEdgeParallel: return Format::kCoo;
    case Strategy::kNodeParallel:
      return kernel == KernelKind::kGSpMM ? Format::kCsc : Format::kCsr;
    case Strategy::kFeatureParallel:
      return kernel == KernelKind::kGSpMM ? Format::kCsc : Format::kCoo;
    case Strategy::kAuto: return NativeFormat(kernel, DefaultStrategy(kernel));
  }
  return Format::kCoo;
}

bool StrategySupports(KernelKind kernel, Strategy strategy, Format format) {
  if (format == Format::kAuto || strategy == Strategy::kAuto) return true;
  switch (strategy) {
    case Strategy::kSerialReference: return format == Format::kCoo;
    case Strategy::kNodeParallel:
      return kernel == KernelKind::kGSpMM ? format == Format::kCsc : format != Format::kCoo;
    case Strategy::kEdgeParallel:
    case Strategy::kFeatureParallel: return true;
    case Strategy::kAuto: return true;
  }
  return false;
}

namespace kernel {

namespace {
OperandView MakeView(const Graph& g, const Operand& op, Target target, const char* role,
                     const MessageFunc& phi) {
  MPG_CHECK_ARG(op.data != nullptr, phi.Name() << " needs a " << role << " operand ("
                                               << TargetName(target) << ")");
  const uint64_t want = target == Target::kEdge ? g.NumEdges() : g.NumNodes();
  MPG_CHECK_SHAPE(op.data->rows() == want,
                  phi.Name() << ": " << role << " operand keyed by " << TargetName(target)
                             << " has " << op.data->rows() << " rows, expected " << want);
  OperandView v;
  v.data = op.data->data();
  v.dim = op.data->cols();
  v.target = target;
  if (op.gate.Active()) {
    MPG_CHECK_ARG(target != Target::kEdge || (!op.gate.mean_degrees && !op.gate.arg),
                  phi.Name() << ": degree or arg gate on an edge-keyed operand");
    v.gated = true;
    v.scale = op.gate.scale;
    if (op.gate.mean_degrees) {
      MPG_CHECK_SHAPE(op.gate.mean_degrees->size() == g.NumNodes(),
                      "gate degree vector has " << op.gate.mean_degrees->size()
                                                << " entries for " << g.NumNodes()
                                                << " nodes");
      v.degrees = op.gate.mean_degrees->data();
    }
    if (op.gate.arg) {
      MPG_CHECK_SHAPE(op.gate.arg->rows == g.NumNodes() && op.gate.arg->cols == v.dim,
                      "gate arg table is " << op.gate.arg->rows << "x" << op.gate.arg->cols
                                           << ", operand is " << g.NumNodes() << "x"
                                           << v.dim);
      v.arg = op.gate.arg->arg.data();
    }
  }
  return v;
}
}  // namespace

MessageCtx BuildContext(const Graph& g, const MessageFunc& phi, const Operand& lhs,
                        const Operand& rhs) {
  MessageCtx m;
  m.op = phi.op;
  size_t ldim = 0, rdim = 0;
  if (phi.UsesLhs()) {
    m.lhs = MakeView(g, lhs, phi.lhs, "lhs", phi);
    ldim = m.lhs.dim;
  }
  if (phi.UsesRhs()) {
    m.rhs = MakeView(g, rhs, phi.rhs, "rhs", phi);
    rdim = m.rhs.dim;
  }
  m.out_dim = MessageDim(phi, ldim, rdim);
  if (phi.op == BinaryOp::kDot) {
    m.dot_width = ldim / phi.heads;
  } else if (phi.op != BinaryOp::kCopyLhs && phi.op != BinaryOp::kCopyRhs) {
    m.lhs_block = ldim ? m.out_dim / ldim : 1;
    m.rhs_block = rdim ? m.out_dim / rdim : 1;
  }
  m.gated = m.lhs.gated || m.rhs.gated;
  return m;
}

int ResolveThreads(const KernelOptions& opts) {
  return opts.num_threads > 0 ? opts.num_threads : DefaultNumThreads();
}

std::string DescribeMessage(const MessageFunc& phi, const Operand& lhs, const Operand& rhs) {
  std::string s = phi.Name();
  const bool lg = phi.UsesLhs() && lhs.gate.Active();
  const bool rg = phi.UsesRhs() && rhs.gate.Active();
  if (lg || rg) s += lg && rg ? "[grad:lr]" : lg ? "[grad:l]" : "[grad:r]";
  return s;
}

}  // namespace kernel
}  // namespace mpg
