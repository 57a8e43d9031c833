/*
 * Copyright 2026 The SMLM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "smlm/data_model.hpp"
#include "smlm/eval_harness.hpp"
#include "smlm/likelihood_model.hpp"
#include "smlm/types.hpp"

namespace smlm::io {

using Json = nlohmann::ordered_json;

enum class DataFormat { kSvmlight, kDense };

struct ReadOptions {
  DataFormat format = DataFormat::kSvmlight;
  // Number of features for sparse input; 0 infers the largest index seen.
  std::size_t dim = 0;
  // Accept 0 as a label and map it to -1.
  bool zero_as_negative = false;
};

// .csv / .tsv / .txt-with-header go through the dense reader; everything else
// is treated as sparse.
inline DataFormat guess_format(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends_with(".csv") || ends_with(".tsv") ? DataFormat::kDense
                                                : DataFormat::kSvmlight;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

inline double parse_double(std::string_view tok, std::size_t line,
                           const char* what) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line, std::string("malformed ") + what + " '" +
                         std::string(tok) + "'");
  }
  return v;
}

inline int parse_label(std::string_view tok, std::size_t line,
                       bool zero_as_negative) {
  const std::string shown(trim(tok));
  double v = 0.0;
  try {
    v = parse_double(tok, line, "label");
  } catch (const DataError&) {
    parse_fail(line, "unknown label token '" + shown + "'");
  }
  if (v == 1.0) return 1;
  if (v == -1.0) return -1;
  if (v == 0.0 && zero_as_negative) return -1;
  parse_fail(line, "unknown label token '" + shown + "'" +
                       (v == 0.0 ? " (use the zero-as-negative option to map "
                                   "0 to -1)"
                                 : ""));
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(b, i - b));
      b = i + 1;
    }
  }
  return out;
}

}  // namespace detail

// Sparse lines: `<label> <index>:<value> ...` with 1-based indices, optional
// `qid:<n>` tokens (ignored) and `#` comments. Rows are densified.
inline Dataset read_svmlight(std::istream& in, const ReadOptions& opts) {
  struct Row {
    std::vector<std::pair<std::size_t, double>> entries;
    int label;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::size_t max_index = 0;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string_view s(raw);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    const auto toks = detail::split_ws(detail::trim(s));
    if (toks.empty()) continue;
    Row row{{}, detail::parse_label(toks[0], line, opts.zero_as_negative),
            line};
    for (std::size_t t = 1; t < toks.size(); ++t) {
      const auto colon = toks[t].find(':');
      if (colon == std::string_view::npos) {
        detail::parse_fail(line, "expected index:value, got '" +
                                     std::string(toks[t]) + "'");
      }
      const auto key = toks[t].substr(0, colon);
      if (key == "qid") continue;
      std::size_t idx = 0;
      const auto [ptr, ec] =
          std::from_chars(key.data(), key.data() + key.size(), idx);
      if (ec != std::errc() || ptr != key.data() + key.size() || idx == 0) {
        detail::parse_fail(line, "malformed feature index '" +
                                     std::string(key) + "'");
      }
      const double v =
          detail::parse_double(toks[t].substr(colon + 1), line, "value");
      if (opts.dim != 0 && idx > opts.dim) {
        detail::parse_fail(line, "feature index " + std::to_string(idx) +
                                     " exceeds declared dimension " +
                                     std::to_string(opts.dim));
      }
      max_index = std::max(max_index, idx);
      row.entries.emplace_back(idx - 1, v);
    }
    rows.push_back(std::move(row));
  }
  const std::size_t d = opts.dim != 0 ? opts.dim : max_index;
  if (rows.empty()) throw DataError("no data rows");
  if (d == 0) throw DataError("no features found and no dimension declared");

  std::vector<LabeledPoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) {
    LabeledPoint p{Vector(d, 0.0), r.label};
    for (const auto& [j, v] : r.entries) p.features[j] = v;
    pts.push_back(std::move(p));
  }
  return validate_dataset(pts);
}

// Delimited dense text: a header line, then `<label><sep><x_1><sep>...`.
// The separator is a comma when the header contains one, otherwise tabs or
// spaces.
inline Dataset read_dense(std::istream& in, const ReadOptions& opts) {
  std::string raw;
  std::size_t line = 0;
  char sep = 0;  // 0 means any whitespace
  bool have_header = false;
  std::vector<LabeledPoint> pts;
  std::size_t width = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto s = detail::trim(raw);
    if (s.empty()) continue;
    if (!have_header) {
      have_header = true;
      sep = s.find(',') != std::string_view::npos ? ',' : 0;
      continue;
    }
    const auto toks = sep ? detail::split_on(s, sep) : detail::split_ws(s);
    if (toks.size() < 2) detail::parse_fail(line, "expected a label and features");
    if (width == 0) width = toks.size();
    if (toks.size() != width) {
      detail::parse_fail(line, "row has " + std::to_string(toks.size() - 1) +
                                   " features, expected " +
                                   std::to_string(width - 1));
    }
    LabeledPoint p{Vector(toks.size() - 1),
                   detail::parse_label(toks[0], line, opts.zero_as_negative)};
    for (std::size_t t = 1; t < toks.size(); ++t) {
      p.features[t - 1] = detail::parse_double(toks[t], line, "feature value");
    }
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw DataError("no data rows after the header");
  if (opts.dim != 0 && opts.dim != width - 1) {
    throw DataError("dense file has " + std::to_string(width - 1) +
                    " features, expected " + std::to_string(opts.dim));
  }
  return validate_dataset(pts);
}

inline Dataset read_dataset(const std::string& path, const ReadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return opts.format == DataFormat::kDense ? read_dense(in, opts)
                                           : read_svmlight(in, opts);
}

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_label(int y) { return y == 1 ? "+1" : "-1"; }

// Writes `<label> <index>:<value> ...`, skipping zeros.
inline void write_svmlight(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_label(data.label(i));
    const auto x = data.features(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] != 0.0) out << ' ' << (j + 1) << ':' << format_double(x[j]);
    }
    out << '\n';
  }
}

// Header `label,x1,...,xd`, then one comma-separated row per point.
inline void write_dense(std::ostream& out, const Dataset& data) {
  out << "label";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_label(data.label(i));
    for (double v : data.features(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  Model model;
  // ISO-8601 UTC timestamp, carried through reads unchanged.
  std::string created_at;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline Json to_json(const ModelFile& f) {
  const auto& m = f.model;
  Json j;
  j["format"] = "smlm-model";
  j["format_version"] = kModelFormatVersion;
  j["dim"] = m.w.size();
  j["loss_kind"] = std::string(to_string(m.loss_kind));
  j["w"] = m.w;
  j["train_meta"] = {{"C", m.train_meta.C},
                     {"L", m.train_meta.L},
                     {"epsilon", m.train_meta.epsilon},
                     {"iterations_run", m.train_meta.iterations_run},
                     {"final_objective", m.train_meta.final_objective}};
  j["created_at"] = f.created_at;
  return j;
}

inline ModelFile model_from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != "smlm-model") {
      throw DataError("not a model file");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format_version " +
                      std::to_string(version));
    }
    ModelFile f;
    const auto kind = parse_loss_kind(j.at("loss_kind").get<std::string>());
    if (!kind) throw DataError("unknown loss_kind in model file");
    f.model.loss_kind = *kind;
    f.model.w = j.at("w").get<Vector>();
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim != f.model.w.size()) {
      throw DataError("model dim " + std::to_string(dim) + " but w has " +
                      std::to_string(f.model.w.size()) + " entries");
    }
    for (double v : f.model.w) {
      if (!std::isfinite(v)) throw DataError("model weights must be finite");
    }
    const auto& meta = j.at("train_meta");
    f.model.train_meta = {meta.at("C").get<double>(), meta.at("L").get<double>(),
                          meta.at("epsilon").get<double>(),
                          meta.at("iterations_run").get<std::size_t>(),
                          meta.at("final_objective").get<double>()};
    f.created_at = j.at("created_at").get<std::string>();
    return f;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

inline std::string dump_model(const ModelFile& f) {
  return to_json(f).dump(2) + "\n";
}

inline ModelFile parse_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_model(const std::string& path, const ModelFile& f) {
  write_text(path, dump_model(f));
}

inline ModelFile read_model(const std::string& path) {
  return parse_model(read_text(path));
}

// ---------------------------------------------------------------------------
// Predictions and traces
// ---------------------------------------------------------------------------

// One `<label>\t<score>` line per point.
inline void write_predictions(std::ostream& out, const LabelTuple& labels,
                              std::span<const double> scores) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << format_label(labels[i]) << '\t' << format_double(scores[i]) << '\n';
  }
}

// One `<iteration>\t<objective>` line per recorded iterate, from 0.
inline void write_trace(std::ostream& out, std::span<const double> trace) {
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t << '\t' << format_double(trace[t]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

inline constexpr unsigned kRunReportSchemaVersion = 1;

struct RunContext {
  std::string data_path;
  TrainConfig config;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double total_seconds = 0.0;
};

// Throws DataError when `j` does not follow the run report schema. Mirrors
// docs/run_report.schema.json.
inline void validate_run_report(const Json& j) {
  auto fail = [](const std::string& what) {
    throw DataError("run report schema violation: " + what);
  };
  auto need = [&](const Json& obj, const char* key, auto pred,
                  const char* type) -> const Json& {
    if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing ") + key);
    const Json& v = obj.at(key);
    if (!pred(v)) fail(std::string(key) + " must be " + type);
    return v;
  };
  const auto is_num = [](const Json& v) { return v.is_number(); };
  const auto is_uint = [](const Json& v) {
    return v.is_number_unsigned() ||
           (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  };
  const auto is_str = [](const Json& v) { return v.is_string(); };
  const auto is_obj = [](const Json& v) { return v.is_object(); };
  const auto is_arr = [](const Json& v) { return v.is_array(); };
  const auto unit = [&](const Json& obj, const char* key) {
    const double v = need(obj, key, is_num, "a number").template get<double>();
    if (!(v >= 0.0 && v <= 1.0)) fail(std::string(key) + " must be in [0, 1]");
  };

  if (need(j, "schema", is_str, "a string") != "smlm-run-report") {
    fail("schema must be \"smlm-run-report\"");
  }
  if (need(j, "schema_version", is_uint, "an unsigned integer") !=
      kRunReportSchemaVersion) {
    fail("unsupported schema_version");
  }
  const Json& cfg = need(j, "config", is_obj, "an object");
  need(cfg, "loss_kind", is_str, "a string");
  need(cfg, "C", is_num, "a number");
  need(cfg, "L", [](const Json& v) { return v.is_number() || v.is_null(); },
       "a number or null");
  need(cfg, "epsilon", is_num, "a number");
  need(cfg, "max_iter", is_uint, "an unsigned integer");
  need(cfg, "tol", is_num, "a number");
  need(cfg, "shards", is_uint, "an unsigned integer");
  const auto k = need(cfg, "k", is_uint, "an unsigned integer").get<std::size_t>();
  need(cfg, "seed", is_uint, "an unsigned integer");
  need(cfg, "split_seed", is_uint, "an unsigned integer");

  const Json& ds = need(j, "dataset", is_obj, "an object");
  need(ds, "path", is_str, "a string");
  for (const char* key : {"n", "dim", "n_pos", "n_neg"}) {
    need(ds, key, is_uint, "an unsigned integer");
  }

  const Json& folds = need(j, "folds", is_arr, "an array");
  if (folds.size() != k) fail("folds must have exactly k entries");
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Json& fold = folds[f];
    if (need(fold, "fold", is_uint, "an unsigned integer") != f) {
      fail("folds must be listed in order");
    }
    need(fold, "train_size", is_uint, "an unsigned integer");
    need(fold, "test_size", is_uint, "an unsigned integer");
    unit(fold, "fscore");
    unit(fold, "auroc");
    unit(fold, "prbep");
    need(fold, "iterations", is_uint, "an unsigned integer");
    const Json& trace = need(fold, "objective_trace", is_arr, "an array");
    for (const auto& v : trace) {
      if (!v.is_number()) fail("objective_trace entries must be numbers");
    }
  }
  const Json& mean = need(j, "mean", is_obj, "an object");
  unit(mean, "fscore");
  unit(mean, "auroc");
  unit(mean, "prbep");

  const Json& timings = need(j, "timings", is_obj, "an object");
  need(timings, "total_seconds", is_num, "a number");
  const Json& fs = need(timings, "fold_seconds", is_arr, "an array");
  if (fs.size() != k) fail("fold_seconds must have exactly k entries");
  for (const auto& v : fs) {
    if (!v.is_number()) fail("fold_seconds entries must be numbers");
  }
}

// Structured cross-validation report. Everything outside "timings" is a pure
// function of the inputs and the seed.
inline Json make_run_report(const CrossValidation& cv, const Dataset& data,
                            const RunContext& ctx) {
  Json j;
  j["schema"] = "smlm-run-report";
  j["schema_version"] = kRunReportSchemaVersion;
  const auto& c = ctx.config;
  j["config"] = {{"loss_kind", std::string(to_string(c.loss_kind))},
                 {"C", c.C},
                 {"L", c.L ? Json(*c.L) : Json(nullptr)},
                 {"epsilon", c.epsilon},
                 {"max_iter", c.max_iter},
                 {"tol", c.tol},
                 {"shards", c.shards},
                 {"k", ctx.k},
                 {"seed", ctx.seed},
                 {"split_seed", cv.split_seed}};
  j["dataset"] = {{"path", ctx.data_path},
                  {"n", data.size()},
                  {"dim", data.dim()},
                  {"n_pos", data.n_pos()},
                  {"n_neg", data.n_neg()}};
  Json folds = Json::array();
  for (std::size_t f = 0; f < cv.report.per_fold.size(); ++f) {
    const auto& m = cv.report.per_fold[f];
    const auto& trace = cv.objective_traces[f];
    folds.push_back({{"fold", f},
                     {"train_size", m.train_size},
                     {"test_size", m.test_size},
                     {"fscore", m.fscore},
                     {"auroc", m.auroc},
                     {"prbep", m.prbep},
                     {"iterations", trace.empty() ? 0 : trace.size() - 1},
                     {"objective_trace", trace}});
  }
  j["folds"] = std::move(folds);
  j["mean"] = {{"fscore", cv.report.fscore},
               {"auroc", cv.report.auroc},
               {"prbep", cv.report.prbep}};
  j["timings"] = {{"total_seconds", ctx.total_seconds},
                  {"fold_seconds", cv.fold_seconds}};
  validate_run_report(j);
  return j;
}

}  // namespace smlm::io
