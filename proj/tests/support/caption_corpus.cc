//
// Copyright 2026 The FENSE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "caption_corpus.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fense/error_detector.h"

namespace fense::testsupport {
namespace {

std::string Pick(const std::vector<std::string>& options, Rng& rng) {
  return options[rng.Uniform(options.size())];
}

bool StartsWithVowel(const std::string& word) {
  return !word.empty() && std::string("aeiou").find(word.front()) != std::string::npos;
}

std::string NounPhrase(const SoundEvent& e, Rng& rng) {
  std::string noun = e.noun;
  if (!e.adjectives.empty() && rng.Bernoulli(0.35)) {
    noun = Pick(e.adjectives, rng) + " " + noun;
  }
  std::string det = rng.Bernoulli(0.7) ? "a" : "the";
  if (det == "a" && StartsWithVowel(noun)) det = "an";
  return det + " " + noun;
}

// Styles: 0 "a dog barks", 1 "a dog is barking", 2 "dogs bark",
// 3 "a dog barking" (participle, used after "followed by" and "with").
std::string Clause(const SoundEvent& e, int style, Rng& rng) {
  switch (style) {
    case 0:
      return NounPhrase(e, rng) + " " + e.third;
    case 1:
      return NounPhrase(e, rng) + " is " + e.ing;
    case 2:
      return e.plural + " " + e.base;
    default:
      return NounPhrase(e, rng) + " " + e.ing;
  }
}

const std::vector<std::string>& FiniteConnectors() {
  static const auto* c = new std::vector<std::string>{"and", "while", "as", "then",
                                                      "before", "after"};
  return *c;
}

}  // namespace

const std::vector<SoundEvent>& SoundEvents() {
  static const auto* events = new std::vector<SoundEvent>{
      {"dog", "dogs", "bark", "barks", "barking", {"small", "large"}},
      {"man", "men", "speak", "speaks", "speaking", {"old", "young"}},
      {"woman", "women", "talk", "talks", "talking", {"young"}},
      {"bird", "birds", "chirp", "chirps", "chirping", {"small", "little"}},
      {"car", "cars", "pass", "passes", "passing", {"fast", "small"}},
      {"engine", "engines", "hum", "hums", "humming", {"large", "idle"}},
      {"bell", "bells", "ring", "rings", "ringing", {"small", "church"}},
      {"wind", "winds", "blow", "blows", "blowing", {"strong", "cold"}},
      {"baby", "babies", "babble", "babbles", "babbling", {"little"}},
      {"crowd", "crowds", "cheer", "cheers", "cheering", {"large"}},
      {"fire", "fires", "crackle", "crackles", "crackling", {"small", "warm"}},
      {"pan", "pans", "sizzle", "sizzles", "sizzling", {"hot"}},
      {"child", "children", "laugh", "laughs", "laughing", {"young", "little"}},
      {"horn", "horns", "honk", "honks", "honking", {"car"}},
      {"clock", "clocks", "tick", "ticks", "ticking", {"old"}},
      {"cat", "cats", "meow", "meows", "meowing", {"small"}},
      {"train", "trains", "rumble", "rumbles", "rumbling", {"long", "heavy"}},
      {"frog", "frogs", "croak", "croaks", "croaking", {}},
      {"siren", "sirens", "wail", "wails", "wailing", {"police"}},
      {"hammer", "hammers", "bang", "bangs", "banging", {"heavy"}},
      {"insect", "insects", "buzz", "buzzes", "buzzing", {"small"}},
      {"door", "doors", "creak", "creaks", "creaking", {"old", "wooden"}},
      {"stream", "streams", "flow", "flows", "flowing", {"small", "cold"}},
      {"motorcycle", "motorcycles", "roar", "roars", "roaring", {"loud"}},
      {"duck", "ducks", "quack", "quacks", "quacking", {}},
      {"rooster", "roosters", "crow", "crows", "crowing", {}},
      {"phone", "phones", "vibrate", "vibrates", "vibrating", {"old"}},
      {"guitar", "guitars", "play", "plays", "playing", {"acoustic"}},
      {"helicopter", "helicopters", "hover", "hovers", "hovering", {"large"}},
      {"kettle", "kettles", "whistle", "whistles", "whistling", {"hot"}},
  };
  return *events;
}

Scene RandomScene(Rng& rng) {
  Scene scene;
  const double r = rng.UniformReal();
  const std::size_t count = r < 0.35 ? 1 : (r < 0.85 ? 2 : 3);
  while (scene.events.size() < count) {
    const std::size_t e = rng.Uniform(SoundEvents().size());
    if (std::find(scene.events.begin(), scene.events.end(), e) == scene.events.end()) {
      scene.events.push_back(e);
    }
  }
  if (rng.Bernoulli(0.5)) scene.adverbial = rng.Uniform(Adverbials().size());
  return scene;
}

std::string DescribeScene(const Scene& scene, Rng& rng) {
  std::vector<std::size_t> order = scene.events;
  if (order.size() > 1 && rng.Bernoulli(0.3)) rng.Shuffle(std::span<std::size_t>(order));
  const std::size_t adverb_after =
      scene.adverbial ? rng.Uniform(order.size()) : order.size();

  std::string text;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SoundEvent& e = SoundEvents()[order[i]];
    if (i == 0) {
      text = Clause(e, static_cast<int>(rng.Uniform(4)), rng);
    } else if (rng.Bernoulli(0.25)) {
      text += rng.Bernoulli(0.5) ? " followed by " : " with ";
      text += Clause(e, 3, rng);
    } else {
      text += " " + Pick(FiniteConnectors(), rng) + " ";
      text += Clause(e, static_cast<int>(rng.Uniform(3)), rng);
    }
    if (i == adverb_after) text += " " + Adverbials()[*scene.adverbial];
  }
  return text;
}

std::vector<std::string> GenerateCleanCaptions(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(DescribeScene(RandomScene(rng), rng));
  return out;
}

std::vector<SyntheticAudio> GenerateAudio(std::size_t count, std::size_t references,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SyntheticAudio> out;
  while (out.size() < count) {
    SyntheticAudio audio;
    audio.scene = RandomScene(rng);
    char id[32];
    std::snprintf(id, sizeof(id), "audio_%04zu", out.size());
    audio.entry.audio_id = id;
    std::set<std::string> seen;
    for (int attempt = 0; attempt < 200 && seen.size() < references; ++attempt) {
      std::string caption = DescribeScene(audio.scene, rng);
      if (seen.insert(caption).second) audio.entry.references.push_back(std::move(caption));
    }
    // Some one-event scenes have too few distinct phrasings; draw another.
    if (audio.entry.references.size() == references) out.push_back(std::move(audio));
  }
  return out;
}

std::vector<AudioEntry> Entries(const std::vector<SyntheticAudio>& audio) {
  std::vector<AudioEntry> out;
  for (const auto& a : audio) out.push_back(a.entry);
  return out;
}

std::map<std::string, std::vector<Caption>> GenerateMachineCaptions(
    const std::vector<SyntheticAudio>& audio, std::size_t systems, std::uint64_t seed) {
  Rng rng(seed);
  std::map<std::string, std::vector<Caption>> out;
  for (const auto& a : audio) {
    auto& captions = out[a.entry.audio_id];
    for (std::size_t s = 0; s < systems; ++s) {
      Scene scene = a.scene;
      if (rng.Bernoulli(0.3)) {
        std::size_t replacement = rng.Uniform(SoundEvents().size());
        while (std::find(scene.events.begin(), scene.events.end(), replacement) !=
               scene.events.end()) {
          replacement = rng.Uniform(SoundEvents().size());
        }
        scene.events[rng.Uniform(scene.events.size())] = replacement;
      }
      const std::string system = std::string("sys_") + static_cast<char>('a' + s);
      captions.push_back({DescribeScene(scene, rng), system, a.entry.audio_id, "beam"});
    }
  }
  return out;
}

}  // namespace fense::testsupport
