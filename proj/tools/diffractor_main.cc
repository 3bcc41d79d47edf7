//
// Copyright 2026 The Diffractor Authors
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

// Command-line entry point: list building, text perturbation, deniability
// statistics and benchmarks.
//
// Exit codes: 0 success, 1 internal error, 2 usage or config error, 3 I/O
// error, 4 contract violation (OOV, out of range, too few words), 5 malformed
// or corrupt data file.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "diffractor/bench.h"
#include "diffractor/csv.h"
#include "diffractor/deniability.h"
#include "diffractor/diffractor.h"
#include "diffractor/embedding_model.h"
#include "diffractor/mvc.h"
#include "diffractor/run_config.h"
#include "diffractor/word_list.h"

namespace diffractor {
namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitContract = 4,
  kExitData = 5,
};

constexpr std::size_t kExactBackendWarnSize = 50000;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kPermissionDenied:
      return kExitIo;
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitContract;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kDataLoss:
      return kExitData;
    default:
      return kExitInternal;
  }
}

int Report(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

int ReportConfig(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return status.code() == absl::StatusCode::kInvalidArgument ? kExitUsage
                                                             : ExitCodeFor(status);
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Writes to a file when `path` is set, otherwise to stdout.
class OutputSink {
 public:
  absl::Status Open(const std::string& path) {
    if (path.empty() || path == "-") return absl::OkStatus();
    file_.open(path, std::ios::binary);
    if (!file_) return absl::UnavailableError("cannot open for writing: " + path);
    return absl::OkStatus();
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  absl::Status Close(const std::string& path) {
    stream().flush();
    if (!stream()) return absl::UnavailableError("write failed: " + path);
    if (file_.is_open()) file_.close();
    return absl::OkStatus();
  }

 private:
  std::ofstream file_;
};

struct ConfigOverrides {
  CLI::Option* mechanism_opt = nullptr;
  std::string mechanism;
  CLI::Option* epsilon_opt = nullptr;
  double epsilon = 0;
  CLI::Option* beta_opt = nullptr;
  double beta = 0;
  CLI::Option* seed_opt = nullptr;
  uint64_t master_seed = 0;

  void Register(CLI::App* cmd) {
    mechanism_opt = cmd->add_option("--mechanism", mechanism,
                                    "Override: geometric or tem");
    epsilon_opt = cmd->add_option("--epsilon", epsilon, "Override: epsilon");
    beta_opt = cmd->add_option("--beta", beta, "Override: tem tail mass");
    seed_opt = cmd->add_option("--seed", master_seed, "Override: master seed");
  }

  absl::Status Apply(RunConfig& config) const {
    if (*mechanism_opt) {
      std::optional<MechanismKind> kind = ParseMechanism(mechanism);
      if (!kind) {
        return absl::InvalidArgumentError("--mechanism: expected geometric or tem");
      }
      config.mechanism = *kind;
    }
    if (*epsilon_opt) config.epsilon = epsilon;
    if (*beta_opt) config.beta = beta;
    if (*seed_opt) config.master_seed = master_seed;
    return ValidateRunConfig(config);
  }
};

// build-list

struct BuildListArgs {
  std::string embeddings;
  uint64_t seed = 0;
  std::size_t limit = 0;
  std::string backend = "exact";
  std::string out;
  std::string name;
  bool lowercase = false;
};

int RunBuildList(const BuildListArgs& args) {
  std::optional<NeighborBackend> backend = ParseBackend(args.backend);
  if (!backend) {
    std::cerr << "error: --backend: expected exact or approx\n";
    return kExitUsage;
  }
  EmbeddingLoadOptions load;
  if (args.limit > 0) load.limit = args.limit;
  load.lowercase = args.lowercase;
  load.name = args.name;

  const auto load_start = std::chrono::steady_clock::now();
  absl::StatusOr<EmbeddingModel> model =
      EmbeddingModel::Load(args.embeddings, load);
  if (!model.ok()) return Report(model.status());
  const double load_seconds = SecondsSince(load_start);

  if (*backend == NeighborBackend::kExact &&
      model->size() > kExactBackendWarnSize) {
    std::cerr << "warning: exact backend on " << model->size()
              << " words is quadratic; consider --backend approx or --limit\n";
  }

  BuildOptions options;
  options.backend = *backend;
  const auto build_start = std::chrono::steady_clock::now();
  absl::StatusOr<WordList> list = BuildWordList(*model, args.seed, options);
  if (!list.ok()) return Report(list.status());
  const double build_seconds = SecondsSince(build_start);

  if (absl::Status s = SaveWordList(*list, args.out); !s.ok()) return Report(s);
  std::cerr << "vocabulary: " << model->size() << " words, dim " << model->dim()
            << "\n"
            << "load: " << FormatDouble(load_seconds) << " s\n"
            << "build: " << FormatDouble(build_seconds) << " s ("
            << BackendTag(*backend) << ")\n"
            << "wrote " << list->size() << " words to " << args.out << "\n";
  return kExitOk;
}

// perturb

struct PerturbArgs {
  std::string config;
  std::string in;
  std::string out;
  std::string records;
  ConfigOverrides overrides;
};

void WriteRecordRows(std::ostream& out, std::size_t line_no,
                     const std::vector<PerturbationRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PerturbationRecord& r = records[i];
    out << line_no << ',' << i << ',' << CsvField(r.original) << ','
        << CsvField(r.output) << ','
        << (r.chosen_list ? std::to_string(*r.chosen_list) : "") << ','
        << (r.is_word ? 1 : 0) << ',' << (r.was_oov ? 1 : 0) << ','
        << r.lists_considered << '\n';
  }
}

int RunPerturb(const PerturbArgs& args) {
  absl::StatusOr<RunConfig> config = LoadRunConfig(args.config);
  if (!config.ok()) return ReportConfig(config.status());
  if (absl::Status s = args.overrides.Apply(*config); !s.ok()) {
    return ReportConfig(s);
  }
  absl::StatusOr<LoadedBank> bank = LoadBank(*config);
  if (!bank.ok()) return Report(bank.status());
  const DiffractorConfig cfg = MakeDiffractorConfig(*config, bank->bank);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!args.in.empty() && args.in != "-") {
    file_in.open(args.in, std::ios::binary);
    if (!file_in) {
      return Report(absl::NotFoundError("cannot open input: " + args.in));
    }
    in = &file_in;
  }
  OutputSink out;
  if (absl::Status s = out.Open(args.out); !s.ok()) return Report(s);
  std::ofstream records;
  if (!args.records.empty()) {
    records.open(args.records, std::ios::binary);
    if (!records) {
      return Report(absl::UnavailableError("cannot open for writing: " +
                                           args.records));
    }
    records << "line,position,original,output,list,is_word,was_oov,"
               "lists_considered\n";
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Rng rng = MakeStream(config->master_seed, line_no);
    TextPerturbation result = PerturbText(line, cfg, rng);
    out.stream() << result.text << '\n';
    if (records.is_open()) WriteRecordRows(records, line_no, result.records);
    ++line_no;
  }
  if (in->bad()) return Report(absl::UnavailableError("read failed: " + args.in));
  if (records.is_open()) {
    records.close();
    if (!records) {
      return Report(absl::UnavailableError("write failed: " + args.records));
    }
  }
  if (absl::Status s = out.Close(args.out); !s.ok()) return Report(s);
  return kExitOk;
}

// stats

struct StatsArgs {
  std::string config;
  std::size_t sample = 100;
  std::size_t trials = 100;
  std::vector<double> eps_grid;
  std::string out;
  ConfigOverrides overrides;
};

int RunStats(const StatsArgs& args) {
  absl::StatusOr<RunConfig> config = LoadRunConfig(args.config);
  if (!config.ok()) return ReportConfig(config.status());
  if (absl::Status s = args.overrides.Apply(*config); !s.ok()) {
    return ReportConfig(s);
  }
  std::vector<double> grid = args.eps_grid;
  if (grid.empty()) grid.push_back(config->epsilon);
  for (double eps : grid) {
    if (!(eps > 0)) {
      std::cerr << "error: --eps-grid: every epsilon must be > 0\n";
      return kExitUsage;
    }
  }
  if (args.trials == 0) {
    std::cerr << "error: --trials must be positive\n";
    return kExitUsage;
  }

  absl::StatusOr<LoadedBank> bank = LoadBank(*config);
  if (!bank.ok()) return Report(bank.status());

  OutputSink out;
  if (absl::Status s = out.Open(args.out); !s.ok()) return Report(s);
  WriteDeniabilityCsvHeader(out.stream());
  for (double eps : grid) {
    DiffractorConfig cfg = MakeDiffractorConfig(*config, bank->bank);
    cfg.mechanism.epsilon = eps;
    // Same seed at every epsilon: the word sample and streams stay matched.
    absl::StatusOr<DeniabilityReport> report =
        EstimateDeniability(cfg, args.sample, args.trials, config->master_seed);
    if (!report.ok()) return Report(report.status());
    WriteDeniabilityCsvRows(out.stream(), *report,
                            MechanismTag(config->mechanism),
                            BankTagName(bank->bank->tag()));
    std::cerr << "epsilon " << FormatDouble(eps) << ": mean n_w "
              << FormatDouble(report->mean_n_w) << ", mean s_w "
              << FormatDouble(report->mean_s_w) << "\n";
  }
  if (absl::Status s = out.Close(args.out); !s.ok()) return Report(s);
  return kExitOk;
}

// bench

struct BenchArgs {
  std::string config;
  std::string mode = "1000";
  std::string corpus;
  std::string baseline = "mvc";
  std::size_t repeats = 5;
  std::string out;
  ConfigOverrides overrides;
};

struct MvcBaseline {
  std::unique_ptr<EmbeddingModel> model;
  std::unique_ptr<MvcMechanism> mechanism;
  double init_seconds = 0;
};

absl::StatusOr<MvcBaseline> LoadMvc(const RunConfig& config) {
  std::string path = config.mvc_model;
  if (path.empty() && !config.model_paths.empty()) path = config.model_paths[0];
  if (path.empty()) {
    return absl::InvalidArgumentError(
        "mvc baseline needs mvc_model or models in the config");
  }
  const auto start = std::chrono::steady_clock::now();
  EmbeddingLoadOptions options;
  options.limit = config.limit;
  options.lowercase = config.lowercase;
  absl::StatusOr<EmbeddingModel> model = EmbeddingModel::Load(path, options);
  if (!model.ok()) return model.status();
  MvcBaseline out;
  out.model = std::make_unique<EmbeddingModel>(*std::move(model));
  absl::StatusOr<MvcMechanism> mech =
      MvcMechanism::Create(*out.model, config.epsilon);
  if (!mech.ok()) return mech.status();
  out.mechanism = std::make_unique<MvcMechanism>(*std::move(mech));
  out.init_seconds = SecondsSince(start);
  return out;
}

int RunBench(const BenchArgs& args) {
  constexpr std::size_t kSampleWords = 1000;
  if (args.mode != "1000" && args.mode != "corpus") {
    std::cerr << "error: --mode: expected 1000 or corpus\n";
    return kExitUsage;
  }
  if (args.mode == "corpus" && args.corpus.empty()) {
    std::cerr << "error: --mode corpus needs --corpus PATH\n";
    return kExitUsage;
  }
  if (args.baseline != "mvc" && args.baseline != "none") {
    std::cerr << "error: --baseline: expected mvc or none\n";
    return kExitUsage;
  }
  absl::StatusOr<RunConfig> config = LoadRunConfig(args.config);
  if (!config.ok()) return ReportConfig(config.status());
  if (absl::Status s = args.overrides.Apply(*config); !s.ok()) {
    return ReportConfig(s);
  }
  absl::StatusOr<LoadedBank> bank = LoadBank(*config);
  if (!bank.ok()) return Report(bank.status());

  std::vector<BenchSubject> subjects;
  for (MechanismKind kind : {MechanismKind::kGeometric, MechanismKind::kTem1D}) {
    DiffractorConfig cfg = MakeDiffractorConfig(*config, bank->bank);
    cfg.mechanism.kind = kind;
    subjects.push_back(MakeDiffractorSubject(cfg, bank->init_seconds));
  }
  MvcBaseline mvc;
  if (args.baseline == "mvc") {
    absl::StatusOr<MvcBaseline> loaded = LoadMvc(*config);
    if (!loaded.ok()) {
      return loaded.status().code() == absl::StatusCode::kInvalidArgument
                 ? ReportConfig(loaded.status())
                 : Report(loaded.status());
    }
    mvc = *std::move(loaded);
    subjects.push_back(
        MakeMvcSubject(*mvc.mechanism, mvc.model->name(), mvc.init_seconds));
  }

  const std::vector<std::string> words = SampleWords(
      bank->bank->VocabularyUnion(), kSampleWords, config->master_seed);

  OutputSink out;
  if (absl::Status s = out.Open(args.out); !s.ok()) return Report(s);
  WriteBenchCsvHeader(out.stream());
  for (const BenchSubject& subject : subjects) {
    BenchReport report;
    if (args.mode == "1000") {
      report = BenchWords(subject, words, args.repeats, config->master_seed);
    } else {
      absl::StatusOr<BenchReport> corpus = BenchCorpus(
          subject, args.corpus, args.repeats, config->master_seed);
      if (!corpus.ok()) return Report(corpus.status());
      report = *std::move(corpus);
      const BenchReport mem = BenchMemory(subject, words, config->master_seed);
      report.total_memory_bytes = mem.total_memory_bytes;
      report.per_word_memory_bytes = mem.per_word_memory_bytes;
    }
    WriteBenchCsvRow(out.stream(), report);
    std::cerr << report.mechanism << ": " << FormatDouble(report.tokens_per_second)
              << " tok/s\n";
  }
  if (absl::Status s = out.Close(args.out); !s.ok()) return Report(s);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Word-level metric differential privacy via one-dimensional "
               "word lists"};
  app.require_subcommand(1);

  BuildListArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build-list", "Build a word list from embeddings");
  build_cmd->add_option("--embeddings", build.embeddings, "Embedding text file")
      ->required();
  build_cmd->add_option("--seed", build.seed, "Seed choosing the first word");
  build_cmd->add_option("--limit", build.limit,
                        "Keep only the first K vocabulary words");
  build_cmd->add_option("--backend", build.backend, "exact or approx");
  build_cmd->add_option("--out", build.out, "Output list file")->required();
  build_cmd->add_option("--name", build.name,
                        "Model name stored in the list header");
  build_cmd->add_flag("--lowercase", build.lowercase,
                      "Fold vocabulary to ASCII lowercase");

  PerturbArgs perturb;
  CLI::App* perturb_cmd =
      app.add_subcommand("perturb", "Perturb text line by line");
  perturb_cmd->add_option("--config", perturb.config, "Run config file")
      ->required();
  perturb_cmd->add_option("--in", perturb.in, "Input file (default stdin)");
  perturb_cmd->add_option("--out", perturb.out, "Output file (default stdout)");
  perturb_cmd->add_option("--records", perturb.records,
                          "Per-token record CSV");
  perturb.overrides.Register(perturb_cmd);

  StatsArgs stats;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Plausible deniability statistics");
  stats_cmd->add_option("--config", stats.config, "Run config file")
      ->required();
  stats_cmd->add_option("--sample", stats.sample, "Words sampled");
  stats_cmd->add_option("--trials", stats.trials, "Perturbations per word");
  stats_cmd->add_option("--eps-grid", stats.eps_grid,
                        "Comma-separated epsilons (default: config epsilon)")
      ->delimiter(',');
  stats_cmd->add_option("--out", stats.out, "CSV output (default stdout)");
  stats.overrides.Register(stats_cmd);

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Throughput and memory benchmark");
  bench_cmd->add_option("--config", bench.config, "Run config file")
      ->required();
  bench_cmd->add_option("--mode", bench.mode, "1000 or corpus");
  bench_cmd->add_option("--corpus", bench.corpus, "Corpus for --mode corpus");
  bench_cmd->add_option("--baseline", bench.baseline, "mvc or none");
  bench_cmd->add_option("--repeats", bench.repeats, "Timed passes");
  bench_cmd->add_option("--out", bench.out, "CSV output (default stdout)");
  bench.overrides.Register(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*build_cmd) return RunBuildList(build);
  if (*perturb_cmd) return RunPerturb(perturb);
  if (*stats_cmd) return RunStats(stats);
  if (*bench_cmd) return RunBench(bench);
  return kExitUsage;
}

}  // namespace
}  // namespace diffractor

int main(int argc, char** argv) {
  try {
    return diffractor::Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return diffractor::kExitInternal;
  }
}
