#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggclf/benchmark.hpp"
#include "ggclf/chipclass.hpp"
#include "ggclf/common.hpp"
#include "ggclf/dataset.hpp"
#include "ggclf/tuner.hpp"

namespace ggclf {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<double> double_vector(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array())
    throw Error("model file: missing array field \"" + key + "\"");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw Error("model file: non-numeric entry in \"" + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Everything predictions need, nothing else: support-edge geometry,
/// thresholds, normalization, and provenance metadata.
inline Json to_json(const ChipclassModel& model) {
  Json j;
  j["schema"] = "ggclf/model/v1";
  j["dimension"] = model.dimension;
  Json edges = Json::array();
  for (const auto& e : model.edges) {
    Json je;
    je["ssv_pos"] = e.ssv_pos;
    je["ssv_neg"] = e.ssv_neg;
    je["midpoint"] = e.midpoint;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["h"] = {model.h_pos, model.h_neg};
  j["theta"] = {model.theta_pos, model.theta_neg};
  j["normalization"] = Json{{"means", model.normalization.mean}, {"stds", model.normalization.stddev}};
  j["metadata"] = Json{{"seed", model.seed},
                       {"dataset_hash", model.data_hash},
                       {"filter_enabled", model.filter_enabled}};
  return j;
}

inline ChipclassModel model_from_json(const nlohmann::json& j) {
  ChipclassModel model;
  if (!j.is_object()) throw Error("model file: not a JSON object");
  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
    throw Error("model file: missing \"dimension\"");
  model.dimension = j["dimension"].get<std::size_t>();
  if (!j.contains("edges") || !j["edges"].is_array())
    throw Error("model file: missing \"edges\" array");
  for (const auto& je : j["edges"]) {
    SupportEdge e;
    e.ssv_pos = detail::double_vector(je, "ssv_pos");
    e.ssv_neg = detail::double_vector(je, "ssv_neg");
    e.midpoint = detail::double_vector(je, "midpoint");
    if (e.ssv_pos.size() != model.dimension || e.ssv_neg.size() != model.dimension ||
        e.midpoint.size() != model.dimension)
      throw Error("model file: edge dimension mismatch");
    model.edges.push_back(std::move(e));
  }
  if (model.edges.empty()) throw Error("model file: no support edges");
  const auto h = detail::double_vector(j, "h");
  const auto theta = detail::double_vector(j, "theta");
  if (h.size() != 2 || theta.size() != 2) throw Error("model file: \"h\" and \"theta\" must hold two values");
  model.h_pos = h[0];
  model.h_neg = h[1];
  model.theta_pos = theta[0];
  model.theta_neg = theta[1];
  if (!j.contains("normalization") || !j["normalization"].is_object())
    throw Error("model file: missing \"normalization\"");
  model.normalization.mean = detail::double_vector(j["normalization"], "means");
  model.normalization.stddev = detail::double_vector(j["normalization"], "stds");
  if (model.normalization.mean.size() != model.dimension ||
      model.normalization.stddev.size() != model.dimension)
    throw Error("model file: normalization dimension mismatch");
  if (j.contains("metadata") && j["metadata"].is_object()) {
    const auto& meta = j["metadata"];
    if (meta.contains("seed")) model.seed = meta["seed"].get<std::uint64_t>();
    if (meta.contains("dataset_hash")) model.data_hash = meta["dataset_hash"].get<std::string>();
    if (meta.contains("filter_enabled")) model.filter_enabled = meta["filter_enabled"].get<bool>();
  }
  return model;
}

inline void save_model(const ChipclassModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path);
  out << to_json(model).dump(2) << '\n';
  if (!out) throw Error("failed writing model file: " + path);
}

inline ChipclassModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline Json to_json(const FoldPlan& plan) {
  Json j;
  j["schema"] = "ggclf/folds/v1";
  j["k"] = plan.k;
  j["seed"] = plan.seed;
  j["assignments"] = plan.assignments;
  return j;
}

inline FoldPlan fold_plan_from_json(const nlohmann::json& j) {
  FoldPlan plan;
  if (!j.is_object() || !j.contains("k") || !j.contains("seed") || !j.contains("assignments"))
    throw Error("fold plan: expected fields k, seed, assignments");
  plan.k = j["k"].get<int>();
  plan.seed = j["seed"].get<std::uint64_t>();
  plan.assignments = j["assignments"].get<std::vector<int>>();
  for (int a : plan.assignments)
    if (a < 0 || a >= plan.k) throw Error("fold plan: assignment out of range");
  return plan;
}

/// One history line for JSONL trial logs; parameter names come from the
/// space the trial was drawn from.
inline Json trial_to_json(const TrialRecord& rec, std::span<const ParamSpec> params) {
  Json j;
  j["schema"] = "ggclf/trial/v1";
  j["trial"] = rec.trial_index;
  Json p;
  for (std::size_t d = 0; d < params.size() && d < rec.params.size(); ++d)
    p[params[d].name] = rec.params[d];
  j["params"] = std::move(p);
  j["score"] = rec.score;  // NaN serializes as null
  j["valid"] = rec.valid;
  return j;
}

inline Json to_json(const BenchmarkReport& rep) {
  Json j;
  j["schema"] = "ggclf/bench/v1";
  Json folds = Json::array();
  Json chosen = Json::array();
  Json fixed_folds = Json::array();
  for (const auto& fo : rep.folds) {
    Json jf;
    jf["fold"] = fo.fold;
    jf["auc"] = fo.tuned_auc;
    jf["h"] = {fo.h_pos, fo.h_neg};
    jf["fixed_auc"] = fo.fixed_auc;
    jf["inner_best"] = fo.inner_best_score;
    jf["inner_anchor"] = fo.inner_anchor_score;
    folds.push_back(std::move(jf));
    chosen.push_back(Json::array({fo.h_pos, fo.h_neg}));
    fixed_folds.push_back(fo.fixed_auc);
  }
  j["per_fold"] = std::move(folds);
  j["mean"] = rep.mean_tuned_auc;
  j["chosen_h"] = std::move(chosen);
  j["fixed_baseline"] = Json{{"per_fold", std::move(fixed_folds)}, {"mean", rep.mean_fixed_auc}};
  j["config"] = Json{{"outer_k", rep.config.outer_k},
                     {"inner_k", rep.config.inner_k},
                     {"budget", rep.config.budget},
                     {"seed", rep.config.seed},
                     {"h_lo", rep.config.h_lo},
                     {"h_hi", rep.config.h_hi},
                     {"normalize", rep.config.normalize},
                     {"drop_duplicates", rep.config.drop_duplicates}};
  j["dataset_hash"] = rep.data_hash;
  return j;
}

}  // namespace ggclf
