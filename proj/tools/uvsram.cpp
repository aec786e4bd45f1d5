// uvsram: fault-map corpus generation, injection campaigns and reporting.
//
//   uvsram genmaps  [--config F] [--seed S] [--out D]
//   uvsram run      [--config F] [--out D] [--jobs N] [--corpus DIR]
//   uvsram report   [--out D] [--results CSV]
//   uvsram heatmap  [--out D] [--corpus DIR]
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime/I-O error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uvsram/cli/commands.hpp"

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
};

uvsram::cli::CampaignConfig resolve(const Globals& g) {
  uvsram::cli::CampaignConfig cfg;
  if (!g.config.empty()) cfg = uvsram::cli::load_config_file(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out_dir = *g.out;
  if (g.jobs) cfg.jobs = *g.jobs;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace uvsram::cli;

  CLI::App app{"SRAM undervolting fault-map generator and injection campaign driver"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", g.config, "key = value configuration file");
    sub->add_option("--seed", g.seed, "corpus seed (overrides corpus.seed)");
    sub->add_option("--out", g.out, "output directory (overrides output.dir)");
    sub->add_option("--jobs", g.jobs, "worker threads for `run` (overrides run.jobs)");
  };

  auto* genmaps = app.add_subcommand("genmaps", "write the HW and matched RND fault-map corpus");
  auto* run = app.add_subcommand("run", "run the injection campaign over the corpus");
  auto* report = app.add_subcommand("report", "summarise a results CSV into CSV and SVG charts");
  auto* heatmap = app.add_subcommand("heatmap", "per-bit fault probability as CSV and PGM");
  auto* dump = app.add_subcommand("config", "print the effective configuration");
  for (auto* sub : {genmaps, run, report, heatmap, dump}) add_globals(sub);

  std::string corpus_override, results_override;
  run->add_option("--corpus", corpus_override, "corpus directory (default <out>/corpus)");
  heatmap->add_option("--corpus", corpus_override, "corpus directory (default <out>/corpus)");
  report->add_option("--results", results_override, "results CSV (default <out>/results.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const CampaignConfig cfg = resolve(g);
    const fs::path out = cfg.out_dir;
    const fs::path corpus = corpus_override.empty() ? out / "corpus" : fs::path(corpus_override);

    if (*dump) {
      std::fputs(dump_config(cfg).c_str(), stdout);
    } else if (*genmaps) {
      const auto s = cmd_genmaps(cfg, out / "corpus");
      std::printf("wrote %llu HW maps and %llu RND maps (%llu of %llu SRAMs faulty) to %s\n",
                  (unsigned long long)s.hw_maps, (unsigned long long)s.rnd_maps,
                  (unsigned long long)s.faulty_srams, (unsigned long long)cfg.n_srams,
                  (out / "corpus").string().c_str());
    } else if (*run) {
      const auto records = cmd_run(cfg, corpus, out);
      std::printf("wrote %zu experiment records to %s\n", records.size(),
                  (out / "results.csv").string().c_str());
    } else if (*report) {
      const fs::path results = results_override.empty() ? out / "results.csv" : fs::path(results_override);
      cmd_report(results, out / "report");
      std::printf("wrote report to %s\n", (out / "report").string().c_str());
    } else if (*heatmap) {
      cmd_heatmap(corpus, out / "heatmap");
      std::printf("wrote heatmaps to %s\n", (out / "heatmap").string().c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "uvsram: config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "uvsram: error: %s\n", e.what());
    return 2;
  }
  return 0;
}
