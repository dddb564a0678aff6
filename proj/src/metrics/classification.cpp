// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "evidrank/error.hpp"
#include "evidrank/metrics.hpp"

namespace evidrank {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

ClassificationMetrics classification_report(const std::map<std::string, VerdictLabel>& predictions,
                                            const std::map<std::string, VerdictLabel>& gold) {
  ClassificationMetrics out;
  for (const auto& [id, predicted] : predictions) {
    const auto g = gold.find(id);
    if (g == gold.end()) {
      throw EvaluationError("prediction for claim \"" + id + "\" has no gold label");
    }
    ++out.confusion[static_cast<std::size_t>(g->second)][static_cast<std::size_t>(predicted)];
    ++out.n_claims;
  }
  for (const auto& [id, _] : gold) {
    if (!predictions.contains(id)) out.unpredicted.push_back(id);
  }
  if (out.n_claims == 0) throw EvaluationError("no claim has both a prediction and a gold label");

  std::size_t tp = 0, fp = 0, fn = 0;
  double macro = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      row += out.confusion[c][j];
      col += out.confusion[j][c];
    }
    const auto hit = out.confusion[c][c];
    auto& s = out.per_class[c];
    s.support = row;
    s.precision = ratio(hit, col);
    s.recall = ratio(hit, row);
    s.f1 = f1_of(s.precision, s.recall);
    macro += s.f1;
    tp += hit;
    fp += col - hit;
    fn += row - hit;
  }
  out.micro_f1 = ratio(2 * tp, 2 * tp + fp + fn);
  out.macro_f1 = macro / 3.0;
  return out;
}

}  // namespace evidrank
