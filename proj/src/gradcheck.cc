/*!
 *  Copyright (c) 2026 by Contributors
 * \file gradcheck.cc
 * \brief Central-difference gradient check over taped computations.
 */
#include <mpgraph/autodiff.h>

#include <algorithm>
#include <cmath>

namespace mpg {
namespace {

double Evaluate(const TapedFunction& f, const std::vector<FeatureMatrix>& leaves) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(leaves.size());
  for (const auto& m : leaves) vars.push_back(tape.Leaf(m, false));
  const FeatureMatrix& loss = tape.Value(f(tape, vars));
  MPG_CHECK_SHAPE(loss.rows() == 1 && loss.cols() == 1,
                  "grad check needs a scalar loss, got " << loss.ShapeString());
  return loss(0, 0);
}

}  // namespace

GradCheckReport GradCheck(const TapedFunction& f, const std::vector<FeatureMatrix>& leaves,
                          double h, double tol) {
  MPG_CHECK_ARG(h > 0, "grad check step must be positive");
  Tape tape;
  std::vector<Var> vars;
  for (const auto& m : leaves) vars.push_back(tape.Leaf(m, true));
  tape.Backward(f(tape, vars));

  GradCheckReport report;
  std::vector<FeatureMatrix> probe = leaves;
  for (size_t l = 0; l < leaves.size(); ++l) {
    const FeatureMatrix* grad = tape.Grad(vars[l]);
    for (size_t r = 0; r < leaves[l].rows(); ++r) {
      for (size_t c = 0; c < leaves[l].cols(); ++c) {
        const double x = leaves[l](r, c);
        probe[l](r, c) = x + h;
        const double up = Evaluate(f, probe);
        probe[l](r, c) = x - h;
        const double down = Evaluate(f, probe);
        probe[l](r, c) = x;
        const double numeric = (up - down) / (2 * h);
        const double analytic = grad ? (*grad)(r, c) : 0.0;
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-3});
        const double err = std::abs(analytic - numeric) / denom;
        report.max_rel_error = std::max(report.max_rel_error, err);
        ++report.checked;
        if (!(err <= tol)) report.failures.push_back({l, r, c, analytic, numeric, err});
      }
    }
  }
  return report;
}

}  // namespace mpg
