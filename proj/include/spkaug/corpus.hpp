// spkaug/corpus.hpp

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

#ifndef SPKAUG_CORPUS_HPP_
#define SPKAUG_CORPUS_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spkaug/augment.hpp"
#include "spkaug/error.hpp"
#include "spkaug/mixer.hpp"
#include "spkaug/rng.hpp"
#include "spkaug/wav.hpp"

namespace spkaug {

// Corpus ingestion, triplet sampling with exact hard-sample quotas, and
// reproducible rendering of mixture datasets.

struct UtteranceRecord {
  std::string id;        // "speaker/stem"
  std::string speaker;
  std::string stem;
  std::string path;      // absolute source path
  std::string rel_path;  // "speaker/file.wav", relative to the corpus root
  int64_t num_samples = 0;
  double duration = 0.0;
};

struct SpeakerInfo {
  std::string label;
  std::vector<size_t> utts;   // indices into CorpusManifest::utterances
  size_t block_begin = 0;     // utterances are speaker-contiguous
  size_t block_end = 0;
  bool enrollable = false;    // >= 2 utterances (can supply a distinct enrollment)
};

struct CorpusManifest {
  std::vector<UtteranceRecord> utterances;  // sorted by (speaker, stem)
  std::vector<SpeakerInfo> speakers;        // sorted by label
  std::map<std::string, size_t> speaker_index;
  int sample_rate = 0;
  std::string root;
};

// Expects root/{speaker}/{utterance}.wav; non-wav entries are ignored. Every
// file is opened, so the manifest only ever references readable audio; with
// skip_unreadable, bad files are reported through `warnings` instead of
// aborting the scan. All utterances must share one sample rate.
inline CorpusManifest scan_corpus(const std::filesystem::path& root,
                                  bool skip_unreadable = false,
                                  std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw IoError("corpus root is not a directory: " + root.string());

  CorpusManifest m;
  m.root = root.string();

  std::vector<fs::path> speaker_dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) speaker_dirs.push_back(e.path());
  std::sort(speaker_dirs.begin(), speaker_dirs.end());

  for (const auto& dir : speaker_dirs) {
    std::string speaker = dir.filename().string();
    validate_speaker_label(speaker);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".wav")
        files.push_back(e.path());
    std::sort(files.begin(), files.end());

    for (const auto& f : files) {
      AudioClip clip;
      try {
        clip = read_wav(f.string());
      } catch (const Error& err) {
        if (!skip_unreadable) throw;
        if (warnings) warnings->push_back(std::string("skipped ") + f.string() +
                                          ": " + err.what());
        continue;
      }
      if (m.sample_rate == 0) {
        m.sample_rate = clip.sample_rate;
      } else if (clip.sample_rate != m.sample_rate) {
        throw FormatError("sample-rate mismatch: " + f.string() + " has " +
                          std::to_string(clip.sample_rate) + " Hz, corpus has " +
                          std::to_string(m.sample_rate) + " Hz");
      }
      UtteranceRecord u;
      u.speaker = speaker;
      u.stem = f.stem().string();
      u.id = speaker + "/" + u.stem;
      u.path = f.string();
      u.rel_path = speaker + "/" + f.filename().string();
      u.num_samples = static_cast<int64_t>(clip.samples.size());
      u.duration = clip.duration();
      m.utterances.push_back(std::move(u));
    }
  }

  if (m.utterances.empty())
    throw InvalidInput("empty corpus: no readable WAV files under " + root.string());

  std::sort(m.utterances.begin(), m.utterances.end(),
            [](const UtteranceRecord& a, const UtteranceRecord& b) {
              return std::tie(a.speaker, a.stem) < std::tie(b.speaker, b.stem);
            });

  for (size_t i = 0; i < m.utterances.size(); ++i) {
    const auto& u = m.utterances[i];
    auto it = m.speaker_index.find(u.speaker);
    if (it == m.speaker_index.end()) {
      m.speaker_index.emplace(u.speaker, m.speakers.size());
      SpeakerInfo info;
      info.label = u.speaker;
      info.block_begin = i;
      m.speakers.push_back(std::move(info));
      it = m.speaker_index.find(u.speaker);
    }
    auto& info = m.speakers[it->second];
    info.utts.push_back(i);
    info.block_end = i + 1;
  }
  for (auto& s : m.speakers) s.enrollable = s.utts.size() >= 2;
  return m;
}

struct HardTagSet {
  bool same_tempo = false;
  bool same_content = false;
  bool same_speaker = false;

  std::vector<std::string> names() const {
    std::vector<std::string> v;
    if (same_tempo) v.push_back("SameTempo");
    if (same_content) v.push_back("SameContent");
    if (same_speaker) v.push_back("SameSpeaker");
    return v;
  }
};

struct CompositionPolicy {
  HardTagSet allow{true, true, true};
  double rate_same_content = 0.01;
  double rate_same_speaker = 0.0008;
  AlphaSet alphas = default_alpha_set();
  SnrDistribution snr = SnrDistribution::uniform(-5.0, 5.0);
  int64_t total = 0;
  uint64_t seed = 0;
  std::vector<std::string> noise_paths;  // empty: clean mixtures
  SnrDistribution noise_snr = SnrDistribution::point(20.0);
};

struct TripletSpec {
  int64_t index = 0;
  size_t target_utt = 0;      // indices into CorpusManifest::utterances
  size_t enroll_utt = 0;
  size_t interferer_utt = 0;
  double alpha_target = 1.0;
  double alpha_interferer = 1.0;
  bool restore_target = true;
  bool restore_interferer = true;
  double snr_db = 0.0;
  int64_t noise_index = -1;   // into CompositionPolicy::noise_paths, -1: none
  double noise_snr_db = 0.0;
  HardTagSet tags;
};

// SameContent: target and interferer are renders of one base utterance.
// SameSpeaker: same base speaker, different base utterance. SameTempo: any
// perturbed component was rendered with tempo restoration.
inline HardTagSet classify_hard(const CorpusManifest& m, const TripletSpec& t) {
  HardTagSet tags;
  const auto& tu = m.utterances.at(t.target_utt);
  const auto& iu = m.utterances.at(t.interferer_utt);
  tags.same_content = t.target_utt == t.interferer_utt;
  tags.same_speaker = !tags.same_content && tu.speaker == iu.speaker;
  bool target_perturbed = alpha_e4(t.alpha_target) != 10000;
  bool interferer_perturbed = alpha_e4(t.alpha_interferer) != 10000;
  tags.same_tempo = (target_perturbed && t.restore_target) ||
                    (interferer_perturbed && t.restore_interferer);
  return tags;
}

// Random-access triplet sampler. Hard-sample kinds are assigned by a quota
// schedule (a seeded permutation with exactly round(total*rate) slots per
// kind), not by coin flips, so generated corpora hit the configured
// proportions exactly. Every draw for index k comes from an RNG stream
// derived from (seed, k), so sampling is order- and worker-independent.
class TripletSampler {
 public:
  TripletSampler(const CorpusManifest& manifest, CompositionPolicy policy)
      : m_(&manifest), p_(std::move(policy)) {
    p_.alphas = validate_alpha_set(p_.alphas);
    if (p_.total < 0) throw InvalidInput("policy total must be >= 0");
    if (p_.rate_same_content < 0.0 || p_.rate_same_content > 1.0 ||
        p_.rate_same_speaker < 0.0 || p_.rate_same_speaker > 1.0)
      throw InvalidInput("hard-sample rates must lie in [0, 1]");
    if (p_.rate_same_content + p_.rate_same_speaker > 1.0)
      throw InvalidInput("hard-sample rates sum above 1");
    if (!p_.allow.same_content && p_.rate_same_content != 0.0)
      throw InvalidInput("SameContent is excluded but has a nonzero rate");
    if (!p_.allow.same_speaker && p_.rate_same_speaker != 0.0)
      throw InvalidInput("SameSpeaker is excluded but has a nonzero rate");

    size_t enrollable_speakers = 0;
    for (size_t si = 0; si < m_->speakers.size(); ++si) {
      if (!m_->speakers[si].enrollable) continue;
      ++enrollable_speakers;
      for (size_t u : m_->speakers[si].utts) enrollable_utts_.push_back(u);
    }
    std::sort(enrollable_utts_.begin(), enrollable_utts_.end());
    if (enrollable_speakers == 0)
      throw InvalidInput("no enrollable speakers (every speaker needs >= 2 utterances)");
    if (enrollable_speakers < 2)
      throw InvalidInput("corpus has fewer than 2 enrollable speakers");

    int64_t n_sc = std::llround(static_cast<double>(p_.total) * p_.rate_same_content);
    int64_t n_ss = std::llround(static_cast<double>(p_.total) * p_.rate_same_speaker);
    if (n_sc + n_ss > p_.total)
      throw InvalidInput("hard-sample quotas exceed the corpus total");
    if ((n_sc > 0 || n_ss > 0) && p_.alphas.size() < 2)
      throw InvalidInput(
          "SameContent/SameSpeaker triplets need at least two alpha values "
          "(target and interferer pseudo-speakers must differ)");

    schedule_.assign(static_cast<size_t>(p_.total), Slot::kOrdinary);
    std::fill_n(schedule_.begin(), static_cast<size_t>(n_sc), Slot::kSameContent);
    std::fill_n(schedule_.begin() + static_cast<size_t>(n_sc),
                static_cast<size_t>(n_ss), Slot::kSameSpeaker);
    Rng rng = Rng::derive(p_.seed, kScheduleStream);
    for (size_t i = schedule_.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng.below(i));
      std::swap(schedule_[i - 1], schedule_[j]);
    }
  }

  const CompositionPolicy& policy() const { return p_; }

  TripletSpec sample(int64_t index) const {
    if (index < 0 || index >= p_.total)
      throw InvalidInput("triplet index out of range: " + std::to_string(index));
    Rng rng = Rng::derive(p_.seed, kTripletStreamBase + static_cast<uint64_t>(index));
    const Slot slot = schedule_[static_cast<size_t>(index)];
    const bool restore = p_.allow.same_tempo;
    const size_t n_alpha = p_.alphas.size();

    TripletSpec t;
    t.index = index;
    t.target_utt = enrollable_utts_[rng.below(enrollable_utts_.size())];
    t.alpha_target = p_.alphas[rng.below(n_alpha)];
    t.restore_target = restore;

    const auto& speaker = m_->speakers[m_->speaker_index.at(
        m_->utterances[t.target_utt].speaker)];
    t.enroll_utt = pick_other(speaker.utts, t.target_utt, &rng);

    switch (slot) {
      case Slot::kSameContent:
        t.interferer_utt = t.target_utt;
        t.alpha_interferer = pick_other_alpha(t.alpha_target, &rng);
        break;
      case Slot::kSameSpeaker:
        t.interferer_utt = pick_other(speaker.utts, t.target_utt, &rng);
        t.alpha_interferer = pick_other_alpha(t.alpha_target, &rng);
        break;
      default: {
        size_t blocked = speaker.block_end - speaker.block_begin;
        size_t r = static_cast<size_t>(
            rng.below(m_->utterances.size() - blocked));
        t.interferer_utt = r < speaker.block_begin ? r : r + blocked;
        t.alpha_interferer = p_.alphas[rng.below(n_alpha)];
        break;
      }
    }
    t.restore_interferer = restore;
    t.snr_db = sample_snr(p_.snr, rng);
    if (!p_.noise_paths.empty()) {
      t.noise_index = static_cast<int64_t>(rng.below(p_.noise_paths.size()));
      t.noise_snr_db = sample_snr(p_.noise_snr, rng);
    }
    t.tags = classify_hard(*m_, t);
    return t;
  }

 private:
  enum class Slot : unsigned char { kOrdinary, kSameContent, kSameSpeaker };
  static constexpr uint64_t kScheduleStream = 0xa0001;
  static constexpr uint64_t kTripletStreamBase = 0x100000000ull;

  static size_t pick_other(const std::vector<size_t>& utts, size_t exclude,
                           Rng* rng) {
    size_t r = static_cast<size_t>(rng->below(utts.size() - 1));
    size_t v = utts[r];
    if (v == exclude) v = utts[utts.size() - 1];
    return v;
  }

  double pick_other_alpha(double exclude, Rng* rng) const {
    size_t ex = 0;
    while (alpha_e4(p_.alphas[ex]) != alpha_e4(exclude)) ++ex;
    size_t r = static_cast<size_t>(rng->below(p_.alphas.size() - 1));
    if (r >= ex) ++r;
    return p_.alphas[r];
  }

  const CorpusManifest* m_;
  CompositionPolicy p_;
  std::vector<Slot> schedule_;
  std::vector<size_t> enrollable_utts_;
};

struct MixtureRecord {
  TripletSpec spec;
  std::string target_path;       // relative to the corpus root
  std::string enroll_path;       // rendered artifact, relative to the output dir
  std::string interferer_path;   // relative to the corpus root
  std::string mixture_path;      // relative to the output dir
  std::string reference_path;    // relative to the output dir
  std::string pseudo_target;
  std::string pseudo_interferer;
  std::string noise_path;        // as configured; empty when no noise
  double normalization_scale = 1.0;
};

inline nlohmann::ordered_json record_to_json(const MixtureRecord& r) {
  nlohmann::ordered_json j;
  j["index"] = r.spec.index;
  j["target_path"] = r.target_path;
  j["enroll_path"] = r.enroll_path;
  j["interferer_path"] = r.interferer_path;
  j["mixture_path"] = r.mixture_path;
  j["reference_path"] = r.reference_path;
  j["pseudo_speaker_target"] = r.pseudo_target;
  j["pseudo_speaker_interferer"] = r.pseudo_interferer;
  j["alpha_target"] = r.spec.alpha_target;
  j["alpha_interferer"] = r.spec.alpha_interferer;
  j["restore_tempo_target"] = r.spec.restore_target;
  j["restore_tempo_interferer"] = r.spec.restore_interferer;
  j["snr_db"] = r.spec.snr_db;
  if (r.spec.noise_index >= 0) {
    j["noise_path"] = r.noise_path;
    j["noise_snr_db"] = r.spec.noise_snr_db;
  }
  j["hard_tags"] = r.spec.tags.names();
  j["normalization_scale"] = r.normalization_scale;
  return j;
}

struct GenerateOptions {
  int workers = 1;
  WavEncoding encoding = WavEncoding::kFloat32;
  std::string cache_dir;  // empty: {out}/cache
  WsolaConfig wsola;
};

namespace corpus_detail {

inline std::string item_name(int64_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%08lld.wav", static_cast<long long>(index));
  return buf;
}

}  // namespace corpus_detail

// Renders policy.total mixtures into out/mix, out/ref, out/enroll plus a
// JSON-lines manifest at out/manifest.jsonl. Augmented components go through
// the render cache (so reruns are incremental) and every per-index
// computation is deterministic, making the output byte-identical across runs
// and worker counts.
inline std::vector<MixtureRecord> generate_corpus(const CorpusManifest& manifest,
                                                  const CompositionPolicy& policy,
                                                  const std::filesystem::path& out,
                                                  const GenerateOptions& opts = {}) {
  namespace fs = std::filesystem;
  if (opts.workers < 1) throw InvalidInput("workers must be >= 1");
  TripletSampler sampler(manifest, policy);

  fs::create_directories(out / "mix");
  fs::create_directories(out / "ref");
  fs::create_directories(out / "enroll");
  RenderCache cache(opts.cache_dir.empty() ? out / "cache" : fs::path(opts.cache_dir),
                    opts.wsola);

  const int64_t total = policy.total;
  std::vector<MixtureRecord> records(static_cast<size_t>(total));
  std::atomic<int64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};

  auto render_utt = [&](size_t utt_index, double alpha, bool restore) {
    const auto& u = manifest.utterances[utt_index];
    return cache.render(u.speaker, u.stem, u.path, alpha, restore);
  };

  auto work = [&]() {
    for (;;) {
      int64_t index = next.fetch_add(1);
      if (index >= total || failed.load()) return;
      try {
        TripletSpec spec = sampler.sample(index);
        AudioClip target = render_utt(spec.target_utt, spec.alpha_target,
                                      spec.restore_target);
        AudioClip interferer = render_utt(spec.interferer_utt, spec.alpha_interferer,
                                          spec.restore_interferer);
        AudioClip enroll = render_utt(spec.enroll_utt, spec.alpha_target,
                                      spec.restore_target);

        AudioClip noise;
        bool has_noise = spec.noise_index >= 0;
        if (has_noise)
          noise = read_wav(policy.noise_paths[static_cast<size_t>(spec.noise_index)]);

        MixtureResult mres =
            has_noise ? mix(target, interferer, spec.snr_db, &noise, spec.noise_snr_db)
                      : mix(target, interferer, spec.snr_db);

        AudioClip reference;
        reference.sample_rate = target.sample_rate;
        reference.samples.resize(mres.mixture.samples.size());
        for (size_t k = 0; k < reference.samples.size(); ++k)
          reference.samples[k] = target.samples[k] * mres.normalization_scale;

        const std::string name = corpus_detail::item_name(index);
        write_wav((out / "mix" / name).string(), mres.mixture, opts.encoding);
        write_wav((out / "ref" / name).string(), reference, opts.encoding);
        write_wav((out / "enroll" / name).string(), enroll, opts.encoding);

        MixtureRecord rec;
        rec.spec = spec;
        const auto& tu = manifest.utterances[spec.target_utt];
        const auto& iu = manifest.utterances[spec.interferer_utt];
        rec.target_path = tu.rel_path;
        rec.interferer_path = iu.rel_path;
        rec.enroll_path = "enroll/" + name;
        rec.mixture_path = "mix/" + name;
        rec.reference_path = "ref/" + name;
        rec.pseudo_target = PseudoSpeakerId{tu.speaker, spec.alpha_target}.render();
        rec.pseudo_interferer =
            PseudoSpeakerId{iu.speaker, spec.alpha_interferer}.render();
        if (has_noise)
          rec.noise_path = policy.noise_paths[static_cast<size_t>(spec.noise_index)];
        rec.normalization_scale = mres.normalization_scale;
        records[static_cast<size_t>(index)] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error)
          first_error = std::make_exception_ptr(
              Error("mixture index " + std::to_string(index) + ": " + e.what()));
        failed.store(true);
        return;
      }
    }
  };

  if (opts.workers == 1 || total <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    int n = static_cast<int>(std::min<int64_t>(opts.workers, std::max<int64_t>(total, 1)));
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::ofstream mf(out / "manifest.jsonl", std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest: " + (out / "manifest.jsonl").string());
  for (const auto& rec : records) mf << record_to_json(rec).dump() << "\n";
  mf.flush();
  if (!mf) throw IoError("manifest write failure: " + (out / "manifest.jsonl").string());
  return records;
}

}  // namespace spkaug

#endif  // SPKAUG_CORPUS_HPP_
