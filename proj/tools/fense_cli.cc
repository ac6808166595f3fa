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

// Command-line front end: scoring, detector training, benchmarking and the
// annotation server.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fense/annotation_service.h"
#include "fense/benchmark.h"
#include "fense/detector_model.h"
#include "fense/embedding.h"
#include "fense/error_detector.h"
#include "fense/errors.h"
#include "fense/fense.h"
#include "fense/formats.h"
#include "fense/jsonl.h"
#include "fense/ngram_metrics.h"
#include "fense/textproc.h"
#include "json.hpp"

namespace fense {
namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitMissingModel = 3;

// Thrown for problems that map to a specific exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// Flag spelling -> output key.
const std::vector<std::pair<std::string, std::string>>& MetricNames() {
  static const auto* names = new std::vector<std::pair<std::string, std::string>>{
      {"bleu1", "bleu_1"}, {"bleu4", "bleu_4"}, {"rouge_l", "rouge_l"},
      {"meteor", "meteor"}, {"cider_d", "cider_d"}, {"sbert", "sbert"},
      {"fense", "fense"}};
  return *names;
}

std::vector<std::string> ParseMetricList(const std::string& list) {
  std::set<std::string> requested;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& [flag, key] : MetricNames()) requested.insert(flag);
      continue;
    }
    const bool known = std::any_of(MetricNames().begin(), MetricNames().end(),
                                   [&](const auto& m) { return m.first == item; });
    if (!known) throw CliError(kExitInput, "unknown metric: " + item);
    requested.insert(item);
  }
  if (requested.empty()) throw CliError(kExitInput, "no metrics requested");
  std::vector<std::string> ordered;
  for (const auto& [flag, key] : MetricNames()) {
    if (requested.contains(flag)) ordered.push_back(flag);
  }
  return ordered;
}

struct MetricOptions {
  std::string metrics = "all";
  std::string provider;
  std::string model;
  double threshold = 0.9;
  double penalty_factor = 10.0;
};

void AddMetricFlags(CLI::App* cmd, MetricOptions& opts) {
  cmd->add_option("--metrics", opts.metrics,
                  "Comma-separated: bleu1,bleu4,rouge_l,meteor,cider_d,sbert,fense or all")
      ->capture_default_str();
  cmd->add_option("--provider", opts.provider, "file:PATH | http:URL | test:SEED");
  cmd->add_option("--model", opts.model, "Error detector model (needed for fense)");
  cmd->add_option("--threshold", opts.threshold, "Penalty threshold")->capture_default_str();
  cmd->add_option("--penalty-factor", opts.penalty_factor, "Penalty divisor")
      ->capture_default_str();
}

// Builds the requested metrics. CIDEr-D document frequencies come from
// `reference_sets`.
std::vector<NamedMetric> BuildMetrics(const MetricOptions& opts,
                                      const std::vector<std::vector<std::string>>& reference_sets) {
  const auto flags = ParseMetricList(opts.metrics);
  const auto wants = [&](const std::string& f) {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  };
  if (wants("fense") && opts.model.empty()) {
    throw CliError(kExitMissingModel, "metric fense requires --model");
  }
  std::shared_ptr<const EmbeddingProvider> provider;
  if (wants("sbert") || wants("fense")) {
    if (opts.provider.empty()) {
      throw CliError(kExitInput, "metrics sbert and fense require --provider");
    }
    try {
      provider = MakeProviderFromSpec(opts.provider);
    } catch (const std::invalid_argument& e) {
      throw CliError(kExitInput, e.what());
    }
  }
  std::shared_ptr<const DetectorModel> detector;
  if (wants("fense")) {
    detector = std::make_shared<const DetectorModel>(DetectorModel::Load(opts.model));
  }
  DetectorConfig config{opts.threshold, opts.penalty_factor};
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitInput, e.what());
  }

  std::vector<NamedMetric> metrics;
  for (const auto& [flag, key] : MetricNames()) {
    if (!wants(flag)) continue;
    if (flag == "bleu1") metrics.push_back({key, MakeBleuMetric(1)});
    if (flag == "bleu4") metrics.push_back({key, MakeBleuMetric(4)});
    if (flag == "rouge_l") metrics.push_back({key, MakeRougeLMetric()});
    if (flag == "meteor") metrics.push_back({key, MakeMeteorMetric()});
    if (flag == "cider_d") {
      if (reference_sets.size() < 2) {
        throw CliError(kExitInput, "cider_d needs at least 2 reference entries");
      }
      std::vector<std::vector<TokenSeq>> tokenized;
      for (const auto& refs : reference_sets) {
        auto& set = tokenized.emplace_back();
        for (const auto& r : refs) set.push_back(Tokenize(r));
      }
      metrics.push_back({key, MakeCiderDMetric(CiderCorpusStats::FromReferenceSets(tokenized))});
    }
    if (flag == "sbert") metrics.push_back({key, MakeSbertMetric(provider)});
    if (flag == "fense") metrics.push_back({key, MakeFenseMetric(provider, detector, config)});
  }
  return metrics;
}

// Writes to `path`, or stdout when it is "-" or empty.
void WriteOutput(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents << std::flush;
    return;
  }
  WriteFileOrThrow(path, contents);
}

std::vector<std::vector<std::string>> ReferenceSets(const std::vector<AudioEntry>& dataset) {
  std::vector<std::vector<std::string>> sets;
  for (const auto& entry : dataset) sets.push_back(entry.references);
  return sets;
}

int RunScore(const std::string& candidates_path, const std::string& references_path,
             const MetricOptions& opts, const std::string& output) {
  const auto dataset = ReadDataset(references_path);
  std::map<std::string, const AudioEntry*> index;
  for (const auto& e : dataset) index[e.audio_id] = &e;

  struct Candidate {
    std::string audio_id;
    std::optional<std::string> system;
    std::string text;
  };
  std::vector<Candidate> candidates;
  ForEachJsonLineInFile(candidates_path, [&](const nlohmann::json& j, std::size_t line) {
    Candidate c;
    c.audio_id = j.at("audio_id").get<std::string>();
    c.text = j.at("text").get<std::string>();
    if (j.contains("system")) c.system = j.at("system").get<std::string>();
    if (!index.contains(c.audio_id)) {
      throw FormatError(candidates_path, line, "unknown audio_id " + c.audio_id);
    }
    candidates.push_back(std::move(c));
  });

  const auto metrics = BuildMetrics(opts, ReferenceSets(dataset));
  std::string out;
  for (const auto& c : candidates) {
    OrderedJson row;
    row["audio_id"] = c.audio_id;
    if (c.system) row["system"] = *c.system;
    row["text"] = c.text;
    const auto& refs = index.at(c.audio_id)->references;
    for (const auto& m : metrics) row[m.name] = m.score(c.text, refs);
    out += row.dump() + "\n";
  }
  WriteOutput(output, out);
  return 0;
}

int RunCorrupt(const std::string& input, const std::string& output, std::uint64_t seed) {
  const auto clean = ReadCaptionLines(input);
  const SyntheticDataset dataset = BuildSyntheticDataset(clean, seed);
  WriteOutput(output, FormatLabeledCaptions(dataset.records));
  std::size_t corrupted = 0;
  for (const auto& r : dataset.records) corrupted += r.labels.overall_error() ? 1 : 0;
  std::cerr << "wrote " << dataset.records.size() << " records (" << corrupted
            << " corrupted); skipped " << dataset.skipped << " captions\n";
  return 0;
}

int RunTrain(const std::string& input, const std::string& output, const TrainingConfig& config) {
  const auto dataset = ReadLabeledCaptions(input);
  const DetectorModel model = DetectorModel::Train(dataset, config);
  WriteFileOrThrow(output, model.Serialize());
  std::cerr << "trained on " << dataset.size() << " records; vocabulary "
            << model.vocabulary_size() << "\n";
  return 0;
}

OrderedJson ScoresJson(const BinaryScores& s) {
  OrderedJson j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  j["true_positives"] = s.true_positives;
  j["false_positives"] = s.false_positives;
  j["false_negatives"] = s.false_negatives;
  j["true_negatives"] = s.true_negatives;
  if (s.no_positive_predictions) j["no_positive_predictions"] = true;
  if (s.no_gold_positives) j["no_gold_positives"] = true;
  return j;
}

int RunEvalDetector(const std::string& model_path, const std::string& input,
                    double threshold, const std::string& output) {
  const DetectorModel model = DetectorModel::Load(model_path);
  const auto labeled = ReadLabeledCaptions(input);
  const DetectorEvaluation eval = EvaluateDetector(model, labeled, threshold);
  OrderedJson report;
  report["threshold"] = threshold;
  report["records"] = labeled.size();
  OrderedJson heads;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    heads[std::string(HeadName(static_cast<DetectorHead>(h)))] = ScoresJson(eval.heads[h]);
  }
  report["heads"] = heads;
  WriteOutput(output, report.dump(2) + "\n");
  return 0;
}

std::string Cell(const CategoryAccuracy& cell) {
  const auto acc = cell.accuracy();
  if (!acc) return "-";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", *acc);
  return buffer;
}

std::string FormatTable(const std::vector<BenchmarkReport>& reports) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %7s %7s %7s %7s %7s\n", "metric", "HC", "HI", "HM",
                "MM", "total");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%-10s %7s %7s %7s %7s %7s\n", r.metric.c_str(),
                  Cell(r.categories.at(PairCategory::kHC)).c_str(),
                  Cell(r.categories.at(PairCategory::kHI)).c_str(),
                  Cell(r.categories.at(PairCategory::kHM)).c_str(),
                  Cell(r.categories.at(PairCategory::kMM)).c_str(), Cell(r.total).c_str());
    out << line;
  }
  if (!reports.empty()) {
    const auto& r = reports.front();
    out << "included " << r.total.included << ", excluded " << r.excluded << ", unjudged "
        << r.unjudged << "\n";
  }
  return out.str();
}

int RunBenchmark(const std::string& pairs_path, const std::string& judgments_path,
                 const std::string& dataset_path, const MetricOptions& opts,
                 const std::string& output) {
  const auto pairs = ReadPairs(pairs_path);
  const auto judgments = ReadJudgments(judgments_path);
  const auto dataset = ReadDataset(dataset_path);
  try {
    ValidateBenchmarkInputs(pairs, judgments, dataset);
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitInput, e.what());
  }
  const auto metrics = BuildMetrics(opts, ReferenceSets(dataset));

  std::map<std::string, std::vector<Choice>> votes;
  for (const auto& j : judgments) votes[j.pair_id].push_back(j.choice);
  std::map<std::string, Gold> gold;
  std::map<std::string, Decision> gold_decisions;
  for (const auto& [pair_id, choices] : votes) {
    gold[pair_id] = GoldFromJudgments(choices);
    gold_decisions[pair_id] = DecisionFromGold(gold[pair_id]);
  }

  std::vector<BenchmarkReport> reports;
  OrderedJson result;
  result["provider"] = opts.provider.empty() ? nullptr : OrderedJson(opts.provider);
  OrderedJson report_json = OrderedJson::array();
  OrderedJson wins;
  wins["human"] = OrderedJson::parse(ToJson(WinFractions(pairs, gold_decisions)).dump());
  for (const auto& metric : metrics) {
    reports.push_back(BenchmarkAgainstGold(metric, pairs, gold, dataset));
    report_json.push_back(OrderedJson::parse(ToJson(reports.back()).dump()));
    std::map<std::string, Decision> decisions;
    for (const auto& record : reports.back().records) {
      if (record.gold != Gold::kExcluded) decisions[record.pair_id] = record.decision;
    }
    wins[metric.name] = OrderedJson::parse(ToJson(WinFractions(pairs, decisions)).dump());
  }
  result["reports"] = report_json;
  result["win_fractions"] = wins;
  if (!output.empty()) WriteFileOrThrow(output, result.dump(2) + "\n");
  std::cout << FormatTable(reports);
  return 0;
}

int RunGeneratePairs(const std::string& dataset_path, const std::string& machine_path,
                     const std::string& provider_spec, std::uint64_t seed,
                     const std::string& output) {
  const auto dataset = ReadDataset(dataset_path);
  const auto machine = GroupByAudio(ReadMachineCaptions(machine_path));
  std::set<std::string> ids;
  for (const auto& e : dataset) ids.insert(e.audio_id);
  for (const auto& [audio_id, captions] : machine) {
    if (!ids.contains(audio_id)) {
      throw CliError(kExitInput, "machine captions refer to unknown audio_id " + audio_id);
    }
  }
  std::shared_ptr<const EmbeddingProvider> provider;
  try {
    provider = MakeProviderFromSpec(provider_spec);
  } catch (const std::invalid_argument& e) {
    throw CliError(kExitInput, e.what());
  }
  const auto result = GeneratePairs(dataset, machine, *provider, seed);
  WriteOutput(output, FormatPairs(result.pairs));
  for (const auto& [audio_id, reason] : result.skipped) {
    std::cerr << "skipped " << audio_id << ": " << reason << "\n";
  }
  std::cerr << "wrote " << result.pairs.size() << " pairs using " << result.provider << "\n";
  return 0;
}

AnnotationServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

struct ServeOptions {
  std::string pairs;
  std::string data_dir;
  std::string dataset;
  std::string raters;
  std::string static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  int raters_per_pair = 4;
  std::uint64_t seed = 0;
};

int RunServe(const ServeOptions& opts) {
  auto pairs = ReadPairs(opts.pairs);
  AnnotationOptions service_options;
  service_options.raters_per_pair = opts.raters_per_pair;
  service_options.seed = opts.seed;
  if (!opts.raters.empty()) {
    std::set<std::string> allowed;
    for (const auto& id : ReadCaptionLines(opts.raters)) allowed.insert(id);
    service_options.allowed_raters = std::move(allowed);
  }
  AnnotationServerOptions server_options;
  server_options.static_dir = opts.static_dir;
  if (!opts.dataset.empty()) {
    const auto base = std::filesystem::path(opts.dataset).parent_path();
    for (const auto& entry : ReadDataset(opts.dataset)) {
      if (!entry.audio_path) continue;
      std::filesystem::path p(*entry.audio_path);
      server_options.audio_files[entry.audio_id] = (p.is_absolute() ? p : base / p).string();
    }
  }
  std::filesystem::create_directories(opts.data_dir);
  const auto log = (std::filesystem::path(opts.data_dir) / "events.jsonl").string();
  AnnotationService service(std::move(pairs), log, service_options);
  AnnotationServer server(service, server_options);
  if (!server.Bind(opts.host, opts.port)) {
    throw std::runtime_error("cannot bind " + opts.host + ":" + std::to_string(opts.port));
  }
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cerr << "serving " << service.pairs().size() << " pairs on http://" << opts.host << ":"
            << opts.port << "\n";
  server.ListenAfterBind();
  g_server = nullptr;
  return 0;
}

int Run(int argc, char** argv) {
  CLI::App app{"Audio caption evaluation toolkit"};
  app.require_subcommand(1);

  MetricOptions score_metrics;
  std::string score_candidates, score_references, score_output;
  auto* score = app.add_subcommand("score", "Score candidate captions against references");
  score->add_option("--candidates", score_candidates, "JSONL {audio_id, text, system?}")
      ->required();
  score->add_option("--references", score_references, "Dataset JSONL")->required();
  score->add_option("-o,--output", score_output, "Output JSONL (default stdout)");
  AddMetricFlags(score, score_metrics);

  std::string corrupt_input, corrupt_output;
  std::uint64_t corrupt_seed = 0;
  auto* corrupt = app.add_subcommand("corrupt", "Build a synthetic error dataset");
  corrupt->add_option("--input", corrupt_input, "Clean captions, one per line")->required();
  corrupt->add_option("-o,--output", corrupt_output, "Output JSONL (default stdout)");
  corrupt->add_option("--seed", corrupt_seed)->required();

  std::string train_input, train_output;
  TrainingConfig train_config;
  auto* train = app.add_subcommand("train", "Train the error detector");
  train->add_option("--input", train_input, "Synthetic dataset JSONL")->required();
  train->add_option("-o,--output", train_output, "Model file")->required();
  train->add_option("--seed", train_config.seed)->required();
  train->add_option("--epochs", train_config.epochs)->capture_default_str();
  train->add_option("--learning-rate", train_config.learning_rate)->capture_default_str();
  train->add_option("--l2", train_config.l2)->capture_default_str();

  std::string eval_model, eval_input, eval_output;
  double eval_threshold = 0.9;
  auto* eval = app.add_subcommand("eval-detector", "Precision, recall and F1 per head");
  eval->add_option("--model", eval_model)->required();
  eval->add_option("--input", eval_input, "Labeled JSONL")->required();
  eval->add_option("--threshold", eval_threshold)->capture_default_str();
  eval->add_option("-o,--output", eval_output, "Report JSON (default stdout)");

  MetricOptions bench_metrics;
  std::string bench_pairs, bench_judgments, bench_dataset, bench_output;
  auto* bench = app.add_subcommand("benchmark", "Pairwise accuracy against human judgments");
  bench->add_option("--pairs", bench_pairs)->required();
  bench->add_option("--judgments", bench_judgments)->required();
  bench->add_option("--dataset", bench_dataset)->required();
  bench->add_option("-o,--output", bench_output, "Report JSON");
  AddMetricFlags(bench, bench_metrics);

  std::string gen_dataset, gen_machine, gen_provider, gen_output;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate-pairs", "Build HC/HI/HM/MM caption pairs");
  gen->add_option("--dataset", gen_dataset)->required();
  gen->add_option("--machine-captions", gen_machine)->required();
  gen->add_option("--provider", gen_provider, "Similarity provider")->required();
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("-o,--output", gen_output, "Pairs JSONL (default stdout)");

  ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run the annotation service");
  serve->add_option("--pairs", serve_opts.pairs)->required();
  serve->add_option("--data-dir", serve_opts.data_dir)->required();
  serve->add_option("--dataset", serve_opts.dataset, "Dataset JSONL with audio paths");
  serve->add_option("--raters", serve_opts.raters, "Allowed rater ids, one per line");
  serve->add_option("--static", serve_opts.static_dir, "Directory served at /");
  serve->add_option("--host", serve_opts.host)->capture_default_str();
  serve->add_option("--port", serve_opts.port)->capture_default_str();
  serve->add_option("--raters-per-pair", serve_opts.raters_per_pair)->capture_default_str();
  serve->add_option("--seed", serve_opts.seed, "Seeds the display-side permutation")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (score->parsed()) {
      return RunScore(score_candidates, score_references, score_metrics, score_output);
    }
    if (corrupt->parsed()) return RunCorrupt(corrupt_input, corrupt_output, corrupt_seed);
    if (train->parsed()) return RunTrain(train_input, train_output, train_config);
    if (eval->parsed()) return RunEvalDetector(eval_model, eval_input, eval_threshold, eval_output);
    if (bench->parsed()) {
      return RunBenchmark(bench_pairs, bench_judgments, bench_dataset, bench_metrics,
                          bench_output);
    }
    if (gen->parsed()) return RunGeneratePairs(gen_dataset, gen_machine, gen_provider, gen_seed,
                                               gen_output);
    if (serve->parsed()) return RunServe(serve_opts);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace
}  // namespace fense

int main(int argc, char** argv) { return fense::Run(argc, argv); }
