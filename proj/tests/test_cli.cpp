#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "uvsram/cli/commands.hpp"

using namespace uvsram;
using namespace uvsram::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("uvsram_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

CampaignConfig small_config() {
  return parse_config(
      "corpus.n_srams = 12\n"
      "corpus.faulty_fraction = 0.5\n"
      "campaign.benchmarks = jacobi, sobel\n");
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_file(e.path());
  return files;
}

int tool(const std::string& args) {
  const int rc = std::system((std::string(UVSRAM_TOOL_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const CampaignConfig d;
  EXPECT_EQ(d.n_srams, 2060u);
  EXPECT_EQ(d.corpus.voltages.size(), 7u);
  const auto c = parse_config(
      "# comment\n"
      "corpus.seed = 9   # trailing\n"
      "corpus.voltages = 540, 560\n"
      "campaign.methods = RND_FI\n"
      "campaign.benchmarks = mc,kmeans\n"
      "\n"
      "output.dir = results\n");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.corpus.voltages, (std::vector<int>{540, 560}));
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::RndFi}));
  EXPECT_EQ(c.benchmarks, (std::vector<Benchmark>{Benchmark::MonteCarlo, Benchmark::KMeans}));
  EXPECT_EQ(c.out_dir, "results");
}

TEST(Config, DumpParsesBackToSameConfig) {
  auto c = small_config();
  c.corpus.spatial.gap_probability = 0.125;
  EXPECT_EQ(dump_config(parse_config(dump_config(c))), dump_config(c));
}

TEST(Config, ErrorsNameTheLine) {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config(text).validate();
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message("corpus.seed = 1\nbogus.key = 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("no_equals_sign\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("seed = 1\n").find("section.key"), std::string::npos);
  EXPECT_NE(message("corpus.n_srams = -4\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("corpus.faulty_fraction = 0.5x\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("campaign.benchmarks = fft\n").find("fft"), std::string::npos);
  EXPECT_FALSE(message("corpus.voltages = 545\n").empty());
  EXPECT_FALSE(message("cache.sets = 8\n").empty());  // cache no longer matches the SRAM
  EXPECT_THROW(load_config_file("/nonexistent/uvsram.cfg"), ConfigError);
}

TEST(Index, RoundTripAndStrictness) {
  const std::vector<IndexEntry> e{{"sram00000", 540, "hw/sram00000_540.fmap", 3, "rnd/sram00000_540.fmap", 3},
                                  {"sram00000", 550, "hw/sram00000_550.fmap", 0, "", 0}};
  EXPECT_EQ(parse_index(format_index(e)), e);
  EXPECT_THROW(parse_index(""), RuntimeError);
  EXPECT_THROW(parse_index(std::string(kIndexHeader) + "\ns,540,hw/a,1,,1\n"), RuntimeError);
  EXPECT_THROW(parse_index(std::string(kIndexHeader) + "\ns,540,hw/a,1\n"), RuntimeError);
}

TEST(Genmaps, FaultFreeCorpusHasNoRandomMaps) {
  const auto dir = scratch("genmaps_empty");
  CampaignConfig c;
  c.n_srams = 10;
  c.corpus.faulty_fraction = 0.0;
  const auto s = cmd_genmaps(c, dir);
  EXPECT_EQ(s.hw_maps, 70u);
  EXPECT_EQ(s.rnd_maps, 0u);
  EXPECT_EQ(s.faulty_srams, 0u);
  EXPECT_EQ(read_index(dir).size(), 70u);
  EXPECT_TRUE(fs::is_empty(dir / "rnd"));
  fs::remove_all(dir);
}

TEST(Genmaps, DeterministicAndCountsMatch) {
  const auto a = scratch("genmaps_a"), b = scratch("genmaps_b");
  auto c = small_config();
  cmd_genmaps(c, a);
  cmd_genmaps(c, b);
  EXPECT_EQ(tree(a), tree(b));
  for (const auto& e : read_index(a)) {
    const auto hw = load_map(a, e.hw_file, e.hw_count);
    EXPECT_EQ(hw.sram_id, e.sram_id);
    EXPECT_EQ(hw.voltage_mv, e.voltage_mv);
    if (e.hw_count) EXPECT_EQ(load_map(a, e.rnd_file, e.rnd_count).size(), e.hw_count);
    else EXPECT_TRUE(e.rnd_file.empty());
  }
  // Regenerating with fewer SRAMs leaves no stale maps behind.
  c.n_srams = 2;
  cmd_genmaps(c, a);
  std::size_t files = 0;
  for (const auto& p : fs::recursive_directory_iterator(a / "hw")) files += p.is_regular_file();
  EXPECT_EQ(files, 14u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, CardinalityAndDeterminism) {
  const auto dir = scratch("run");
  const auto c = small_config();
  cmd_genmaps(c, dir / "corpus");
  std::size_t faulty = 0;
  for (const auto& e : read_index(dir / "corpus")) faulty += e.hw_count > 0;
  const auto recs = cmd_run(c, dir / "corpus", dir / "o1");
  EXPECT_EQ(recs.size(), faulty * 2 * 2);
  auto c4 = c;
  c4.jobs = 4;
  cmd_run(c4, dir / "corpus", dir / "o2");
  EXPECT_EQ(tree(dir / "o1"), tree(dir / "o2"));
  EXPECT_TRUE(fs::exists(dir / "o1" / "golden" / "sobel.pgm"));
  EXPECT_TRUE(fs::exists(dir / "o1" / "golden" / "jacobi.desc"));
  fs::remove_all(dir);
}

TEST(Run, FaultFreeCorpusGivesHeaderOnlyResults) {
  const auto dir = scratch("run_empty");
  auto c = small_config();
  c.corpus.faulty_fraction = 0.0;
  cmd_genmaps(c, dir / "corpus");
  EXPECT_TRUE(cmd_run(c, dir / "corpus", dir).empty());
  EXPECT_EQ(read_file(dir / "results.csv"), std::string(kResultsHeader) + "\n");
  EXPECT_THROW(cmd_run(c, dir / "missing", dir), RuntimeError);
  fs::remove_all(dir);
}

TEST(Report, FixtureArtifacts) {
  const auto dir = scratch("report");
  auto rec = [](Benchmark b, Method m, std::string id, std::uint64_t n, Outcome o,
                std::optional<double> q) {
    ExperimentRecord r{b, m, std::move(id), 540, n, o, std::nullopt};
    if (q) r.quality = QualityValue{metric_for(b), *q};
    return r;
  };
  const std::vector<ExperimentRecord> recs{
      rec(Benchmark::Dct, Method::HwFi, "a", 2, Outcome::SDC, 30.0),
      rec(Benchmark::Dct, Method::HwFi, "b", 2, Outcome::Correct, {}),
      rec(Benchmark::Dct, Method::RndFi, "a", 2, Outcome::SDC, 20.0),
      rec(Benchmark::Dct, Method::RndFi, "b", 2, Outcome::Crash, {}),
      rec(Benchmark::Dct, Method::HwFi, "c", 600, Outcome::Crash, {}),
      rec(Benchmark::Dct, Method::RndFi, "c", 600, Outcome::SDC, 10.0)};
  write_file(dir / "results.csv", write_results_csv(recs));
  cmd_report(dir / "results.csv", dir / "r1");
  cmd_report(dir / "results.csv", dir / "r2");
  EXPECT_EQ(tree(dir / "r1"), tree(dir / "r2"));

  const auto cls = read_file(dir / "r1" / "classification.csv");
  EXPECT_NE(cls.find("dct,HW_FI,3,33.3333333,33.3333333,33.3333333\n"), std::string::npos);
  const auto cnt = read_file(dir / "r1" / "outcome_by_count.csv");
  EXPECT_NE(cnt.find("dct,HW_FI,2,2,50,50,0\n"), std::string::npos);
  EXPECT_NE(cnt.find("all,RND_FI,2,2,0,50,50\n"), std::string::npos);
  EXPECT_EQ(cnt.find(",600,"), std::string::npos);
  const auto summary = read_file(dir / "r1" / "quality_summary.csv");
  EXPECT_NE(summary.find("dct,RND_FI,PSNR_dB,2,10,12.5,15,17.5,15,20\n"), std::string::npos);
  EXPECT_NE(read_file(dir / "r1" / "quality_tests.csv").find("dct,PSNR_dB,1,2,"), std::string::npos);
  for (auto svg : {"classification.svg", "outcome_by_count.svg", "quality.svg"})
    EXPECT_EQ(read_file(dir / "r1" / svg).rfind("<?xml", 0), 0u) << svg;
  fs::remove_all(dir);
}

TEST(Report, EmptyResultsGiveHeaderOnlyTables) {
  const auto dir = scratch("report_empty");
  write_file(dir / "results.csv", std::string(kResultsHeader) + "\n");
  cmd_report(dir / "results.csv", dir / "r");
  EXPECT_EQ(read_file(dir / "r" / "classification.csv"),
            "benchmark,method,experiments,correct_pct,sdc_pct,crash_pct\n");
  write_file(dir / "bad.csv", "nonsense\n");
  EXPECT_THROW(cmd_report(dir / "bad.csv", dir / "r"), RuntimeError);
  fs::remove_all(dir);
}

TEST(Heatmap, SingleMapLightsExactlyItsFaults) {
  const auto dir = scratch("heatmap");
  FaultMap m;
  m.sram_id = "sram00000";
  m.voltage_mv = 540;
  m.faults = {{{1, 2}, Permanent{}, CorruptionKind::StuckAt0, std::nullopt},
              {{100, 7}, Permanent{}, CorruptionKind::StuckAt0, std::nullopt}};
  write_file(dir / "hw" / "m.fmap", serialize_fault_map(m));
  write_file(dir / "index.csv", format_index({{"sram00000", 540, "hw/m.fmap", 2, "", 0}}));
  cmd_heatmap(dir, dir / "out");
  const auto pgm = read_file(dir / "out" / "hw.pgm");
  const std::string header = "P5\n128 128\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 128 * 128);
  for (std::size_t i = 0; i < 128 * 128; ++i) {
    const auto v = static_cast<unsigned char>(pgm[header.size() + i]);
    EXPECT_EQ(v, (i == 1 * 128 + 2 || i == 100 * 128 + 7) ? 255 : 0) << i;
  }
  EXPECT_FALSE(fs::exists(dir / "out" / "rnd.pgm"));

  write_file(dir / "index.csv", std::string(kIndexHeader) + "\n");
  EXPECT_THROW(cmd_heatmap(dir, dir / "out"), RuntimeError);
  fs::remove_all(dir);
}

TEST(Tool, ExitCodes) {
  const auto dir = scratch("tool");
  const auto cfg = dir / "c.cfg";
  write_file(cfg, "corpus.n_srams = 3\ncorpus.faulty_fraction = 1\ncampaign.benchmarks = sobel\n");
  const std::string base = "--config " + cfg.string() + " --out " + dir.string();
  EXPECT_EQ(tool("genmaps " + base), 0);
  EXPECT_EQ(tool("run " + base), 0);
  EXPECT_EQ(tool("report " + base), 0);
  EXPECT_EQ(tool("heatmap " + base), 0);
  EXPECT_TRUE(fs::exists(dir / "report" / "quality.svg"));
  EXPECT_TRUE(fs::exists(dir / "heatmap" / "rnd.pgm"));
  EXPECT_EQ(tool("--help"), 0);
  EXPECT_EQ(tool(""), 1);
  EXPECT_EQ(tool("frobnicate"), 1);
  EXPECT_EQ(tool("run --jobs notanumber"), 1);
  EXPECT_EQ(tool("genmaps --config " + (dir / "missing.cfg").string()), 1);
  write_file(dir / "bad.cfg", "corpus.nope = 1\n");
  EXPECT_EQ(tool("genmaps --config " + (dir / "bad.cfg").string()), 1);
  EXPECT_EQ(tool("report --out " + (dir / "nowhere").string()), 2);
  EXPECT_EQ(tool("run --out " + (dir / "nowhere").string()), 2);
  fs::remove_all(dir);
}
