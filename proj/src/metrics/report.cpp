// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include <fmt/format.h>

#include "evidrank/metrics.hpp"

namespace evidrank {

void add_retrieval(Report& report, const RetrievalMetrics& m, std::string_view modality,
                   std::string_view ranking) {
  for (const auto& [name, value] :
       {std::pair{"P", m.precision}, std::pair{"R", m.recall}, std::pair{"mAP", m.map}}) {
    report.entries.push_back(
        {name, m.k, std::string(modality), std::string(ranking), "", value, m.n_claims});
  }
}

void add_classification(Report& report, const ClassificationMetrics& m) {
  for (auto label : {VerdictLabel::Supported, VerdictLabel::Refuted, VerdictLabel::NEI}) {
    const auto& s = m.of(label);
    const std::string l(to_string(label));
    report.entries.push_back({"precision", std::nullopt, "verdict", "", l, s.precision, m.n_claims});
    report.entries.push_back({"recall", std::nullopt, "verdict", "", l, s.recall, m.n_claims});
    report.entries.push_back({"f1", std::nullopt, "verdict", "", l, s.f1, m.n_claims});
  }
  report.entries.push_back({"micro_f1", std::nullopt, "verdict", "", "", m.micro_f1, m.n_claims});
  report.entries.push_back({"macro_f1", std::nullopt, "verdict", "", "", m.macro_f1, m.n_claims});
  report.verification = m;
}

std::string format_percent(double value) { return fmt::format("{:.2f}", value * 100.0); }

namespace {

bool is_ranking(const ReportEntry& e) { return e.k.has_value(); }

std::string cell(const ReportEntry& e) {
  return is_ranking(e) ? format_percent(e.value) : fmt::format("{:.3f}", e.value);
}

}  // namespace

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json j;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json row{{"metric", e.metric},
                       {"K", e.k ? nlohmann::json(*e.k) : nlohmann::json(nullptr)},
                       {"modality", e.modality},
                       {"value", e.value},
                       {"n_claims", e.n_claims}};
    if (!e.ranking.empty()) row["ranking"] = e.ranking;
    if (!e.label.empty()) row["label"] = e.label;
    entries.push_back(std::move(row));
  }
  j["notes"] = report.notes;
  if (report.verification) {
    const auto& v = *report.verification;
    nlohmann::json confusion = nlohmann::json::array();
    for (const auto& row : v.confusion) confusion.push_back(row);
    j["verification"] = {{"labels", {"refuted", "supported", "nei"}},
                         {"confusion_gold_by_predicted", confusion},
                         {"unpredicted", v.unpredicted}};
  }
  nlohmann::json cov = nlohmann::json::object();
  for (const auto& [key, c] : report.coverage) {
    nlohmann::json un = nlohmann::json::array();
    for (const auto& [claim, cand] : c.unannotated) un.push_back({claim, cand});
    cov[key] = {{"unannotated", un}, {"claims_without_annotations", c.claims_without_annotations}};
  }
  if (!cov.empty()) j["coverage"] = cov;
  return j;
}

std::string render_report_json(const Report& report) {
  return report_to_json(report).dump(2, ' ', false, nlohmann::json::error_handler_t::strict) + "\n";
}

std::string render_report_table(const Report& report) {
  struct Row {
    std::string ranking, modality, metric, k, label, value, n;
  };
  std::vector<Row> rows{{"ranking", "modality", "metric", "K", "label", "value", "n"}};
  for (const auto& e : report.entries) {
    rows.push_back({e.ranking.empty() ? "-" : e.ranking, e.modality, e.metric,
                    e.k ? std::to_string(*e.k) : "-", e.label.empty() ? "-" : e.label, cell(e),
                    std::to_string(e.n_claims)});
  }
  std::array<std::size_t, 7> width{};
  for (const auto& r : rows) {
    const std::array<const std::string*, 7> f{&r.ranking, &r.modality, &r.metric, &r.k,
                                              &r.label,   &r.value,    &r.n};
    for (std::size_t i = 0; i < f.size(); ++i) width[i] = std::max(width[i], f[i]->size());
  }
  std::string out;
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {:>{}}  {:<{}}  {:>{}}  {:>{}}\n", r.ranking,
                       width[0], r.modality, width[1], r.metric, width[2], r.k, width[3], r.label,
                       width[4], r.value, width[5], r.n, width[6]);
  }
  out += "ranking metrics in percent; verdict metrics as fractions\n";
  return out;
}

std::string render_report_csv(const Report& report) {
  std::string out = "metric,K,modality,ranking,label,value,n_claims\n";
  for (const auto& e : report.entries) {
    out += fmt::format("{},{},{},{},{},{:.17g},{}\n", e.metric, e.k ? std::to_string(*e.k) : "",
                       e.modality, e.ranking, e.label, e.value, e.n_claims);
  }
  return out;
}

}  // namespace evidrank
