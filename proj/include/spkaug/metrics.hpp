// spkaug/metrics.hpp

// Copyright 2026  spkaug authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKAUG_METRICS_HPP_
#define SPKAUG_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "spkaug/audio.hpp"
#include "spkaug/error.hpp"
#include "spkaug/wav.hpp"

namespace spkaug {

// Scale-invariant SDR, its improvement over the unprocessed mixture, and the
// negative-improvement rate used as a target-confusion proxy. Perfect
// reconstruction carries a +infinity sentinel, an estimate orthogonal to the
// reference -infinity; sentinels are excluded from means (with a count) and
// treated by sign in NSR.

// Projection form: c = <est, ref>/<ref, ref>, value = 10*log10(|c*ref|^2 /
// |c*ref - est|^2). No denominator stabilizer unless `stabilizer` is set
// (mirrors the usual definition; fuzzed pipelines may pass e.g. 1e-8).
inline double si_sdr(const std::vector<double>& r, const std::vector<double>& e,
                     double stabilizer = 0.0) {
  if (r.size() != e.size()) throw InvalidInput("si_sdr: length mismatch");
  if (r.empty()) throw InvalidInput("si_sdr: empty clips");

  double rr = 0.0, er = 0.0;
  for (size_t k = 0; k < r.size(); ++k) {
    rr += r[k] * r[k];
    er += e[k] * r[k];
  }
  if (rr == 0.0) throw InvalidInput("si_sdr: zero-energy reference");
  double ee = 0.0;
  for (double v : e) ee += v * v;
  if (ee == 0.0) throw InvalidInput("si_sdr: zero-energy estimate");

  const double c = er / rr;
  if (c == 0.0) return -std::numeric_limits<double>::infinity();

  double num = c * c * rr;
  double den = stabilizer;
  for (size_t k = 0; k < r.size(); ++k) {
    double d = c * r[k] - e[k];
    den += d * d;
  }
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

inline double si_sdr(const AudioClip& reference, const AudioClip& estimate,
                     double stabilizer = 0.0) {
  return si_sdr(reference.samples, estimate.samples, stabilizer);
}

// si_sdr(ref, est) - si_sdr(ref, mix); estimate == mixture gives exactly 0,
// including when both sides hit the same infinity sentinel.
inline double si_sdri(const std::vector<double>& reference,
                      const std::vector<double>& estimate,
                      const std::vector<double>& mixture,
                      double stabilizer = 0.0) {
  double a = si_sdr(reference, estimate, stabilizer);
  double b = si_sdr(reference, mixture, stabilizer);
  if (std::isinf(a) && std::isinf(b) && a == b) return 0.0;
  return a - b;
}

inline double si_sdri(const AudioClip& reference, const AudioClip& estimate,
                      const AudioClip& mixture, double stabilizer = 0.0) {
  return si_sdri(reference.samples, estimate.samples, mixture.samples, stabilizer);
}

// Fraction of entries below zero. The default boundary is strict (< 0);
// `inclusive` counts exact zeros as failures instead.
inline double nsr(const std::vector<double>& si_sdri_values, bool inclusive = false) {
  if (si_sdri_values.empty()) throw InvalidInput("nsr: empty value list");
  size_t count = 0;
  for (double v : si_sdri_values)
    if (inclusive ? v <= 0.0 : v < 0.0) ++count;
  return static_cast<double>(count) / static_cast<double>(si_sdri_values.size());
}

struct EvalItem {
  std::string id;
  double si_sdr_est = 0.0;
  double si_sdr_mix = 0.0;
  double si_sdri = 0.0;
};

struct EvalReport {
  std::vector<EvalItem> per_item;
  size_t n = 0;
  double nsr = 0.0;
  double mean_si_sdri = 0.0;  // over finite improvements only
  size_t inf_count = 0;       // items whose improvement is a sentinel
};

struct EvalOptions {
  bool truncate_to_min = false;  // allow length mismatches, evaluate the overlap
  bool nsr_inclusive = false;
  double stabilizer = 0.0;
};

namespace metrics_detail {

inline std::vector<std::string> wav_names(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw IoError("not a directory: " + dir.string());
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

inline nlohmann::json db_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline std::string db_to_string(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace metrics_detail

// Evaluates matching filenames across the reference, estimate, and mixture
// directories in sorted order. The three directories must contain identical
// filename sets.
inline EvalReport evaluate_dir(const std::filesystem::path& ref_dir,
                               const std::filesystem::path& est_dir,
                               const std::filesystem::path& mix_dir,
                               const EvalOptions& opts = {}) {
  auto ref_names = metrics_detail::wav_names(ref_dir);
  auto est_names = metrics_detail::wav_names(est_dir);
  auto mix_names = metrics_detail::wav_names(mix_dir);
  if (ref_names.empty()) throw InvalidInput("evaluate_dir: no WAV files to evaluate");
  if (ref_names != est_names || ref_names != mix_names) {
    auto describe = [](const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
      for (const auto& n : a)
        if (!std::binary_search(b.begin(), b.end(), n)) return n;
      return std::string();
    };
    std::string offender = describe(ref_names, est_names);
    if (offender.empty()) offender = describe(est_names, ref_names);
    if (offender.empty()) offender = describe(ref_names, mix_names);
    if (offender.empty()) offender = describe(mix_names, ref_names);
    throw InvalidInput("evaluate_dir: directories do not contain matching filenames"
                       " (first unmatched: " + offender + ")");
  }

  EvalReport report;
  report.per_item.reserve(ref_names.size());
  double mean_acc = 0.0;
  size_t finite_count = 0, neg_count = 0;

  for (const auto& name : ref_names) {
    AudioClip ref = read_wav((ref_dir / name).string());
    AudioClip est = read_wav((est_dir / name).string());
    AudioClip mix = read_wav((mix_dir / name).string());
    size_t len = std::min({ref.samples.size(), est.samples.size(),
                           mix.samples.size()});
    if (ref.samples.size() != len || est.samples.size() != len ||
        mix.samples.size() != len) {
      if (!opts.truncate_to_min)
        throw InvalidInput("evaluate_dir: length mismatch in item " + name);
      ref.samples.resize(len);
      est.samples.resize(len);
      mix.samples.resize(len);
    }
    EvalItem item;
    item.id = name;
    item.si_sdr_est = si_sdr(ref, est, opts.stabilizer);
    item.si_sdr_mix = si_sdr(ref, mix, opts.stabilizer);
    if (std::isinf(item.si_sdr_est) && std::isinf(item.si_sdr_mix) &&
        item.si_sdr_est == item.si_sdr_mix) {
      item.si_sdri = 0.0;
    } else {
      item.si_sdri = item.si_sdr_est - item.si_sdr_mix;
    }
    if (std::isinf(item.si_sdri)) {
      ++report.inf_count;
      if (item.si_sdri < 0.0) ++neg_count;
    } else {
      mean_acc += item.si_sdri;
      ++finite_count;
      if (opts.nsr_inclusive ? item.si_sdri <= 0.0 : item.si_sdri < 0.0) ++neg_count;
    }
    report.per_item.push_back(std::move(item));
  }

  report.n = report.per_item.size();
  report.nsr = static_cast<double>(neg_count) / static_cast<double>(report.n);
  report.mean_si_sdri = finite_count > 0 ? mean_acc / static_cast<double>(finite_count)
                                         : 0.0;
  return report;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["nsr"] = r.nsr;
  j["mean_si_sdri"] = r.mean_si_sdri;
  j["inf_count"] = r.inf_count;
  auto items = nlohmann::ordered_json::array();
  for (const auto& item : r.per_item) {
    nlohmann::ordered_json ji;
    ji["id"] = item.id;
    ji["si_sdr_est"] = metrics_detail::db_to_json(item.si_sdr_est);
    ji["si_sdr_mix"] = metrics_detail::db_to_json(item.si_sdr_mix);
    ji["si_sdri"] = metrics_detail::db_to_json(item.si_sdri);
    items.push_back(std::move(ji));
  }
  j["items"] = std::move(items);
  return j;
}

inline std::string report_to_csv(const EvalReport& r) {
  std::string out = "id,si_sdr_est,si_sdr_mix,si_sdri\n";
  for (const auto& item : r.per_item) {
    out += item.id;
    out += ',';
    out += metrics_detail::db_to_string(item.si_sdr_est);
    out += ',';
    out += metrics_detail::db_to_string(item.si_sdr_mix);
    out += ',';
    out += metrics_detail::db_to_string(item.si_sdri);
    out += '\n';
  }
  return out;
}

}  // namespace spkaug

#endif  // SPKAUG_METRICS_HPP_
