// tools/spkaug_main.cpp

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

// Command-line front end over the spkaug library. Subcommands: augment,
// expand, mix, generate, eval. Exit codes: 0 success, 1 usage error, 2 data
// error. Errors go to stderr as single JSON lines.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spkaug/spkaug.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void emit_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

std::string error_kind(const spkaug::Error& e) {
  if (dynamic_cast<const spkaug::IoError*>(&e)) return "io";
  if (dynamic_cast<const spkaug::FormatError*>(&e)) return "format";
  if (dynamic_cast<const spkaug::InvalidInput*>(&e)) return "invalid-input";
  return "data";
}

std::vector<double> parse_alpha_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw spkaug::InvalidInput("malformed alpha list: " + csv);
    }
    if (used != item.size())
      throw spkaug::InvalidInput("malformed alpha list: " + csv);
    out.push_back(v);
  }
  if (out.empty()) throw spkaug::InvalidInput("empty alpha list");
  return out;
}

std::vector<std::string> parse_label_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

spkaug::WavEncoding parse_encoding(const std::string& s) {
  if (s == "pcm16") return spkaug::WavEncoding::kPcm16;
  if (s == "float32") return spkaug::WavEncoding::kFloat32;
  throw spkaug::InvalidInput("unknown encoding: " + s);
}

std::vector<std::string> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw spkaug::IoError("not a directory: " + dir.string());
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

json db_json(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

struct AugmentArgs {
  std::string in, out;
  double alpha = 1.0;
  bool no_tempo_restore = false;
  std::string encoding = "float32";
  spkaug::WsolaConfig wsola;
};

int run_augment(const AugmentArgs& a) {
  spkaug::AudioClip clip = spkaug::read_wav(a.in);
  spkaug::AudioClip out =
      spkaug::make_pseudo(clip, {a.alpha, !a.no_tempo_restore}, a.wsola);
  spkaug::WavEncoding enc = parse_encoding(a.encoding);
  if (enc == spkaug::WavEncoding::kPcm16) spkaug::peak_normalize(&out, 1.0);
  spkaug::write_wav(a.out, out, enc);
  ordered_json j;
  j["in"] = a.in;
  j["out"] = a.out;
  j["alpha"] = a.alpha;
  j["restore_tempo"] = !a.no_tempo_restore;
  j["input_samples"] = clip.samples.size();
  j["output_samples"] = out.samples.size();
  j["sample_rate"] = out.sample_rate;
  std::cout << j.dump() << "\n";
  return 0;
}

struct ExpandArgs {
  std::string speakers, corpus, alphas = "0.8,0.9,1.0,1.1,1.2";
};

int run_expand(const ExpandArgs& a) {
  std::vector<std::string> labels;
  if (!a.speakers.empty()) {
    labels = parse_label_list(a.speakers);
  } else {
    auto manifest = spkaug::scan_corpus(a.corpus);
    for (const auto& s : manifest.speakers) labels.push_back(s.label);
  }
  auto ids = spkaug::expand_speaker_set(labels, parse_alpha_list(a.alphas));
  for (const auto& id : ids) std::cout << id.render() << "\n";
  return 0;
}

struct MixArgs {
  std::string target, interferer, noise;
  std::string snr = "point:0";
  std::string noise_snr = "point:20";
  uint64_t seed = 0;
  std::string out, ref;
  std::string encoding = "float32";
};

int run_mix(const MixArgs& a) {
  spkaug::AudioClip target = spkaug::read_wav(a.target);
  spkaug::AudioClip interferer = spkaug::read_wav(a.interferer);
  spkaug::Rng rng = spkaug::Rng::derive(a.seed, 0);
  double snr = spkaug::sample_snr(spkaug::parse_snr_spec(a.snr), rng);

  spkaug::MixtureResult res;
  if (!a.noise.empty()) {
    spkaug::AudioClip noise = spkaug::read_wav(a.noise);
    double noise_snr = spkaug::sample_snr(spkaug::parse_snr_spec(a.noise_snr), rng);
    res = spkaug::mix(target, interferer, snr, &noise, noise_snr);
  } else {
    res = spkaug::mix(target, interferer, snr);
  }

  spkaug::WavEncoding enc = parse_encoding(a.encoding);
  spkaug::write_wav(a.out, res.mixture, enc);
  if (!a.ref.empty()) {
    spkaug::AudioClip reference;
    reference.sample_rate = target.sample_rate;
    reference.samples.resize(res.mixture.samples.size());
    for (size_t k = 0; k < reference.samples.size(); ++k)
      reference.samples[k] = target.samples[k] * res.normalization_scale;
    spkaug::write_wav(a.ref, reference, enc);
  }

  ordered_json j;
  j["out"] = a.out;
  j["snr_db"] = snr;
  j["realized_snr"] = res.realized_snr;
  j["interferer_gain"] = res.interferer_gain;
  if (res.noise_gain) j["noise_gain"] = *res.noise_gain;
  j["normalization_scale"] = res.normalization_scale;
  j["samples"] = res.mixture.samples.size();
  std::cout << j.dump() << "\n";
  return 0;
}

struct GenerateArgs {
  std::string corpus, out;
  int64_t total = 0;
  uint64_t seed = 0;
  std::string alphas = "0.8,0.9,1.0,1.1,1.2";
  std::string snr = "uniform:-5:5";
  double rate_sc = 0.01;
  double rate_ss = 0.0008;
  bool remove_st = false, remove_sc = false, remove_ss = false;
  bool no_tempo_restore = false;
  int workers = 1;
  std::string encoding = "float32";
  std::string cache;
  bool skip_unreadable = false;
  std::string noise_dir;
  std::string noise_snr = "point:20";
  spkaug::WsolaConfig wsola;
};

int run_generate(const GenerateArgs& a) {
  std::vector<std::string> warnings;
  spkaug::CorpusManifest manifest =
      spkaug::scan_corpus(a.corpus, a.skip_unreadable, &warnings);
  for (const auto& w : warnings)
    std::cerr << json{{"warning", w}}.dump() << "\n";

  spkaug::CompositionPolicy policy;
  policy.allow = {!a.remove_st, !a.remove_sc, !a.remove_ss};
  policy.rate_same_content = a.remove_sc ? 0.0 : a.rate_sc;
  policy.rate_same_speaker = a.remove_ss ? 0.0 : a.rate_ss;
  policy.alphas = spkaug::validate_alpha_set(parse_alpha_list(a.alphas));
  policy.snr = spkaug::parse_snr_spec(a.snr);
  policy.total = a.total;
  policy.seed = a.seed;
  if (!a.noise_dir.empty()) {
    policy.noise_paths = list_wavs(a.noise_dir);
    if (policy.noise_paths.empty())
      throw spkaug::InvalidInput("noise directory holds no WAV files: " + a.noise_dir);
    policy.noise_snr = spkaug::parse_snr_spec(a.noise_snr);
  }

  spkaug::GenerateOptions opts;
  opts.workers = a.workers;
  opts.encoding = parse_encoding(a.encoding);
  opts.cache_dir = a.cache;
  opts.wsola = a.wsola;

  fs::create_directories(a.out);
  ordered_json cfg;
  cfg["subcommand"] = "generate";
  cfg["corpus"] = a.corpus;
  cfg["out"] = a.out;
  cfg["total"] = policy.total;
  cfg["seed"] = policy.seed;
  cfg["alphas"] = policy.alphas;
  cfg["snr"] = spkaug::render_snr_spec(policy.snr);
  cfg["rate_same_content"] = policy.rate_same_content;
  cfg["rate_same_speaker"] = policy.rate_same_speaker;
  cfg["allow_hard"] = ordered_json{{"same_tempo", policy.allow.same_tempo},
                                   {"same_content", policy.allow.same_content},
                                   {"same_speaker", policy.allow.same_speaker}};
  cfg["restore_tempo"] = policy.allow.same_tempo;
  cfg["workers"] = opts.workers;
  cfg["encoding"] = a.encoding;
  cfg["cache"] = a.cache.empty() ? (fs::path(a.out) / "cache").string() : a.cache;
  if (!a.noise_dir.empty()) {
    cfg["noise_dir"] = a.noise_dir;
    cfg["noise_snr"] = spkaug::render_snr_spec(policy.noise_snr);
  }
  cfg["wsola"] = ordered_json{{"frame_ms", a.wsola.frame_ms},
                              {"overlap_ratio", a.wsola.overlap_ratio},
                              {"search_ms", a.wsola.search_ms}};
  {
    std::ofstream f(fs::path(a.out) / "run-config.json", std::ios::trunc);
    if (!f)
      throw spkaug::IoError("cannot write run-config.json under " + a.out);
    f << cfg.dump(2) << "\n";
  }

  auto records = spkaug::generate_corpus(manifest, policy, a.out, opts);

  int64_t n_st = 0, n_sc = 0, n_ss = 0;
  for (const auto& r : records) {
    n_st += r.spec.tags.same_tempo ? 1 : 0;
    n_sc += r.spec.tags.same_content ? 1 : 0;
    n_ss += r.spec.tags.same_speaker ? 1 : 0;
  }
  ordered_json j;
  j["out"] = a.out;
  j["total"] = policy.total;
  j["manifest"] = (fs::path(a.out) / "manifest.jsonl").string();
  j["same_tempo_count"] = n_st;
  j["same_content_count"] = n_sc;
  j["same_speaker_count"] = n_ss;
  std::cout << j.dump() << "\n";
  return 0;
}

struct EvalArgs {
  std::string ref, est, mix;
  bool nsr_inclusive = false;
  bool truncate = false;
  double stabilizer = 0.0;
  std::string json_path, csv_path;
};

int run_eval(const EvalArgs& a) {
  spkaug::EvalOptions opts;
  opts.truncate_to_min = a.truncate;
  opts.nsr_inclusive = a.nsr_inclusive;
  opts.stabilizer = a.stabilizer;
  spkaug::EvalReport report = spkaug::evaluate_dir(a.ref, a.est, a.mix, opts);

  if (!a.json_path.empty()) {
    std::ofstream f(a.json_path, std::ios::trunc);
    if (!f) throw spkaug::IoError("cannot write report: " + a.json_path);
    f << spkaug::report_to_json(report).dump(2) << "\n";
  }
  if (!a.csv_path.empty()) {
    std::ofstream f(a.csv_path, std::ios::trunc);
    if (!f) throw spkaug::IoError("cannot write report: " + a.csv_path);
    f << spkaug::report_to_csv(report);
  }

  ordered_json j;
  j["n"] = report.n;
  j["nsr"] = report.nsr;
  j["mean_si_sdri"] = db_json(report.mean_si_sdri);
  j["inf_count"] = report.inf_count;
  std::cout << j.dump() << "\n";
  return 0;
}

void add_wsola_flags(CLI::App* cmd, spkaug::WsolaConfig* cfg) {
  cmd->add_option("--frame-ms", cfg->frame_ms, "WSOLA frame length, ms")
      ->capture_default_str();
  cmd->add_option("--overlap", cfg->overlap_ratio, "WSOLA overlap ratio in (0,1)")
      ->capture_default_str();
  cmd->add_option("--search-ms", cfg->search_ms, "WSOLA search half-width, ms")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speaker augmentation and mixture dataset toolkit"};
  app.require_subcommand(1);

  AugmentArgs aug;
  auto* cmd_aug = app.add_subcommand(
      "augment", "render one utterance as a pseudo-speaker (resample + tempo restore)");
  cmd_aug->add_option("--in", aug.in, "input WAV")->required();
  cmd_aug->add_option("--out", aug.out, "output WAV")->required();
  cmd_aug->add_option("--alpha", aug.alpha, "perturbation factor in [0.5, 2.0]")
      ->required();
  cmd_aug->add_flag("--no-tempo-restore", aug.no_tempo_restore,
                    "resample only; do not restore the original tempo");
  cmd_aug->add_option("--encoding", aug.encoding, "pcm16 | float32")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  add_wsola_flags(cmd_aug, &aug.wsola);

  ExpandArgs exp;
  auto* cmd_exp = app.add_subcommand(
      "expand", "list the pseudo-speaker IDs of a speaker set expansion");
  auto* exp_speakers =
      cmd_exp->add_option("--speakers", exp.speakers, "comma-separated labels");
  cmd_exp->add_option("--corpus", exp.corpus, "corpus root (labels from directories)")
      ->excludes(exp_speakers);
  cmd_exp->add_option("--alphas", exp.alphas, "comma-separated alpha values")
      ->capture_default_str();

  MixArgs mx;
  auto* cmd_mix =
      app.add_subcommand("mix", "mix a target and an interferer at a controlled SNR");
  cmd_mix->add_option("--target", mx.target, "target WAV")->required();
  cmd_mix->add_option("--interferer", mx.interferer, "interferer WAV")->required();
  cmd_mix->add_option("--out", mx.out, "mixture WAV")->required();
  cmd_mix->add_option("--ref", mx.ref, "also write the scaled reference here");
  cmd_mix->add_option("--snr", mx.snr,
                      "SNR spec: uniform:LO:HI | gauss:MEAN:VAR | point:DB | DB")
      ->capture_default_str();
  cmd_mix->add_option("--noise", mx.noise, "optional noise WAV");
  cmd_mix->add_option("--noise-snr", mx.noise_snr, "noise SNR spec (vs target)")
      ->capture_default_str();
  cmd_mix->add_option("--seed", mx.seed, "RNG seed for SNR draws")
      ->capture_default_str();
  cmd_mix->add_option("--encoding", mx.encoding, "pcm16 | float32")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand(
      "generate", "render a full mixture corpus with composition control");
  cmd_gen->add_option("--corpus", gen.corpus, "corpus root: {speaker}/{utt}.wav")
      ->required();
  cmd_gen->add_option("--out", gen.out, "output directory")->required();
  cmd_gen->add_option("--total", gen.total, "number of mixtures")->required();
  cmd_gen->add_option("--seed", gen.seed, "master seed")->capture_default_str();
  cmd_gen->add_option("--alphas", gen.alphas, "comma-separated alpha values")
      ->capture_default_str();
  cmd_gen->add_option("--snr", gen.snr,
                      "SNR spec: uniform:LO:HI | gauss:MEAN:VAR | point:DB | DB")
      ->capture_default_str();
  cmd_gen->add_option("--rate-sc", gen.rate_sc, "same-content triplet fraction")
      ->capture_default_str();
  cmd_gen->add_option("--rate-ss", gen.rate_ss, "same-speaker triplet fraction")
      ->capture_default_str();
  cmd_gen->add_flag("--remove-st", gen.remove_st,
                    "ablation: render augmented components without tempo restore");
  cmd_gen->add_flag("--remove-sc", gen.remove_sc,
                    "ablation: exclude same-content triplets");
  cmd_gen->add_flag("--remove-ss", gen.remove_ss,
                    "ablation: exclude same-speaker triplets");
  cmd_gen->add_flag("--no-tempo-restore", gen.no_tempo_restore,
                    "alias for the tempo part of --remove-st; requires --remove-st");
  cmd_gen->add_option("--workers", gen.workers, "render worker threads")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  cmd_gen->add_option("--encoding", gen.encoding, "pcm16 | float32")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  cmd_gen->add_option("--cache", gen.cache, "render cache directory (default OUT/cache)");
  cmd_gen->add_flag("--skip-unreadable", gen.skip_unreadable,
                    "skip unreadable corpus files with a warning");
  cmd_gen->add_option("--noise-dir", gen.noise_dir, "directory of noise WAVs");
  cmd_gen->add_option("--noise-snr", gen.noise_snr, "noise SNR spec (vs target)")
      ->capture_default_str();
  add_wsola_flags(cmd_gen, &gen.wsola);

  EvalArgs ev;
  auto* cmd_eval = app.add_subcommand(
      "eval", "SI-SDR / SI-SDRi / NSR over matching WAV directories");
  cmd_eval->add_option("--ref", ev.ref, "clean reference directory")->required();
  cmd_eval->add_option("--est", ev.est, "estimate directory")->required();
  cmd_eval->add_option("--mix", ev.mix, "mixture directory")->required();
  cmd_eval->add_flag("--nsr-inclusive", ev.nsr_inclusive,
                     "count SI-SDRi == 0 as negative in NSR");
  cmd_eval->add_flag("--truncate", ev.truncate,
                     "evaluate the common prefix when lengths differ");
  cmd_eval->add_option("--stabilizer", ev.stabilizer,
                       "epsilon added to SI-SDR denominators")
      ->capture_default_str();
  cmd_eval->add_option("--json", ev.json_path, "write the full report as JSON here");
  cmd_eval->add_option("--csv", ev.csv_path, "write the per-item table as CSV here");

  try {
    app.parse(argc, argv);
    if (cmd_gen->parsed() && gen.no_tempo_restore && !gen.remove_st)
      throw CLI::ValidationError(
          "generate", "--no-tempo-restore requires --remove-st (with SameTempo "
                      "samples allowed, augmented components must restore tempo)");
    if (cmd_exp->parsed() && exp.speakers.empty() && exp.corpus.empty())
      throw CLI::ValidationError("expand", "one of --speakers or --corpus is required");

    if (cmd_aug->parsed()) return run_augment(aug);
    if (cmd_exp->parsed()) return run_expand(exp);
    if (cmd_mix->parsed()) return run_mix(mx);
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_eval->parsed()) return run_eval(ev);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return 1;
  } catch (const spkaug::Error& e) {
    emit_error(error_kind(e), e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
}
