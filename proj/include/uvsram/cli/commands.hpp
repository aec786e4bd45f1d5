#pragma once

// The four batch commands behind the `uvsram` tool. Each is a deterministic
// function of its configuration and inputs; they throw ConfigError for bad
// settings and RuntimeError for I/O or data problems.

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "uvsram/cli/config.hpp"
#include "uvsram/cli/svg.hpp"
#include "uvsram/fault_map_io.hpp"
#include "uvsram/fault_model.hpp"
#include "uvsram/fault_stats.hpp"
#include "uvsram/harness/aggregate.hpp"
#include "uvsram/harness/experiment.hpp"
#include "uvsram/harness/results_csv.hpp"
#include "uvsram/harness/stats.hpp"
#include "uvsram/workloads/image.hpp"

namespace uvsram::cli {

namespace fs = std::filesystem;

/// Runtime or I/O failure (exit code 2).
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw RuntimeError("write failed for " + path.string());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- corpus index

inline constexpr std::string_view kIndexHeader =
    "sram_id,voltage_mv,hw_file,hw_fault_count,rnd_file,rnd_fault_count";

struct IndexEntry {
  std::string sram_id;
  int voltage_mv = 0;
  std::string hw_file;
  std::uint64_t hw_count = 0;
  std::string rnd_file;  // empty when the HW map has no faults
  std::uint64_t rnd_count = 0;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

inline std::string format_index(const std::vector<IndexEntry>& entries) {
  std::string s(kIndexHeader);
  s += '\n';
  for (const auto& e : entries) {
    s += e.sram_id + ',' + std::to_string(e.voltage_mv) + ',' + e.hw_file + ',' +
         std::to_string(e.hw_count) + ',' + e.rnd_file + ',';
    if (!e.rnd_file.empty()) s += std::to_string(e.rnd_count);
    s += '\n';
  }
  return s;
}

inline std::vector<IndexEntry> parse_index(std::string_view text) {
  std::vector<IndexEntry> entries;
  std::size_t pos = 0, row = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++row;
    if (row == 1) {
      if (line != kIndexHeader) throw RuntimeError("index: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    for (std::size_t s = 0;;) {
      const auto c = line.find(',', s);
      cols.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (cols.size() != 6)
      throw RuntimeError("index row " + std::to_string(row) + ": expected 6 columns");
    IndexEntry e;
    try {
      if (cols[0].empty() || cols[2].empty()) throw ConfigError("empty sram_id or hw_file");
      e.sram_id = std::string(cols[0]);
      e.voltage_mv = detail::parse_int<int>("voltage_mv", cols[1]);
      e.hw_file = std::string(cols[2]);
      e.hw_count = detail::parse_int<std::uint64_t>("hw_fault_count", cols[3]);
      e.rnd_file = std::string(cols[4]);
      if (!e.rnd_file.empty())
        e.rnd_count = detail::parse_int<std::uint64_t>("rnd_fault_count", cols[5]);
      else if (!cols[5].empty())
        throw ConfigError("rnd_fault_count without rnd_file");
    } catch (const ConfigError& err) {
      throw RuntimeError("index row " + std::to_string(row) + ": " + err.what());
    }
    entries.push_back(std::move(e));
  }
  if (row == 0) throw RuntimeError("index: empty file");
  return entries;
}

inline std::vector<IndexEntry> read_index(const fs::path& corpus_dir) {
  const auto path = corpus_dir / "index.csv";
  if (!fs::exists(path)) throw RuntimeError("no corpus index at " + path.string());
  return parse_index(read_file(path));
}

inline FaultMap load_map(const fs::path& corpus_dir, const std::string& rel,
                         std::uint64_t expected_count) {
  FaultMap m;
  try {
    m = parse_fault_map(read_file(corpus_dir / rel));
  } catch (const FaultMapParseError& e) {
    throw RuntimeError(rel + ": " + e.what());
  }
  if (m.size() != expected_count)
    throw RuntimeError(rel + ": fault count differs from the index");
  return m;
}

// ---------------------------------------------------------------- genmaps

struct GenmapsSummary {
  std::uint64_t hw_maps = 0;
  std::uint64_t rnd_maps = 0;
  std::uint64_t faulty_srams = 0;
};

/// Writes hw/<sram>_<mv>.fmap for every (sram, voltage), rnd/<sram>_<mv>.fmap
/// for every faulty HW map, and index.csv. Stale hw/ and rnd/ trees are
/// removed first so the directory is a pure function of the config.
inline GenmapsSummary cmd_genmaps(const CampaignConfig& cfg, const fs::path& corpus_dir) {
  cfg.validate();
  std::error_code ec;
  fs::remove_all(corpus_dir / "hw", ec);
  fs::remove_all(corpus_dir / "rnd", ec);
  fs::create_directories(corpus_dir / "hw", ec);
  fs::create_directories(corpus_dir / "rnd", ec);
  if (ec) throw RuntimeError("cannot create " + corpus_dir.string() + ": " + ec.message());

  auto voltages = cfg.corpus.voltages;
  std::sort(voltages.begin(), voltages.end());
  GenmapsSummary summary;
  std::vector<IndexEntry> index;
  for (std::uint64_t i = 0; i < cfg.n_srams; ++i) {
    const HwSram sram = generate_sram(i, cfg.corpus, cfg.seed);
    summary.faulty_srams += !sram.faults.empty();
    for (int v : voltages) {
      const FaultMap hw = derive_map_at_voltage(sram, v);
      const std::string name = sram.sram_id + "_" + std::to_string(v) + ".fmap";
      IndexEntry e{sram.sram_id, v, "hw/" + name, hw.size(), "", 0};
      write_file(corpus_dir / e.hw_file, serialize_fault_map(hw));
      ++summary.hw_maps;
      if (!hw.empty()) {
        const FaultMap rnd = match_random_map(hw, matched_map_seed(cfg.seed, i, v));
        e.rnd_file = "rnd/" + name;
        e.rnd_count = rnd.size();
        write_file(corpus_dir / e.rnd_file, serialize_fault_map(rnd));
        ++summary.rnd_maps;
      }
      index.push_back(std::move(e));
    }
  }
  write_file(corpus_dir / "index.csv", format_index(index));
  return summary;
}

// ---------------------------------------------------------------- run

inline std::string golden_bytes(const Output& out) {
  return std::string(reinterpret_cast<const char*>(out.bytes.data()), out.bytes.size());
}

/// Runs every (benchmark, method, faulty map) experiment and writes
/// results.csv plus golden/<benchmark>.{bin,desc[,pgm]} under `out_dir`.
inline std::vector<ExperimentRecord> cmd_run(const CampaignConfig& cfg, const fs::path& corpus_dir,
                                             const fs::path& out_dir) {
  cfg.validate();
  const auto index = read_index(corpus_dir);

  struct MapPair {
    FaultMap hw, rnd;
  };
  std::vector<MapPair> maps;
  for (const auto& e : index) {
    if (e.hw_count == 0) continue;  // only maps that manifest errors are run
    if (e.rnd_file.empty()) throw RuntimeError(e.hw_file + ": faulty map without RND partner");
    MapPair p{load_map(corpus_dir, e.hw_file, e.hw_count),
              load_map(corpus_dir, e.rnd_file, e.rnd_count)};
    for (const FaultMap* m : {&p.hw, &p.rnd})
      if (m->geometry.capacity() != cfg.cache.capacity_bits())
        throw RuntimeError(m->sram_id + ": map geometry does not match the cache");
    maps.push_back(std::move(p));
  }

  std::map<Benchmark, Output> goldens;
  for (Benchmark b : cfg.benchmarks) {
    if (goldens.count(b)) continue;
    WorkloadConfig wc{b, {}, cfg.input_seed, 0};
    Output g = golden_run(wc, cfg.cache);
    const std::string stem = "golden/" + std::string(to_string(b));
    write_file(out_dir / (stem + ".bin"), golden_bytes(g));
    write_file(out_dir / (stem + ".desc"), describe_output(b, g));
    if (b == Benchmark::Dct || b == Benchmark::Sobel) {
      const auto side = g.fields.at(0).shape.at(0);
      const auto px = g.field_bytes(0);
      write_file(out_dir / (stem + ".pgm"),
                 encode_pgm(side, side, std::vector<std::uint8_t>(px.begin(), px.end())));
    }
    goldens.emplace(b, std::move(g));
  }

  struct Task {
    Benchmark b;
    Method m;
    std::size_t map;
  };
  std::vector<Task> tasks;
  std::set<Benchmark> seen_b;
  std::set<Method> seen_m;
  for (Benchmark b : cfg.benchmarks) {
    if (!seen_b.insert(b).second) continue;
    seen_m.clear();
    for (Method m : cfg.methods) {
      if (!seen_m.insert(m).second) continue;
      for (std::size_t i = 0; i < maps.size(); ++i) tasks.push_back({b, m, i});
    }
  }

  std::vector<ExperimentRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      try {
        const auto& task = tasks[t];
        const WorkloadConfig wc{task.b, {}, cfg.input_seed, 0};
        const auto& pair = maps[task.map];
        records[t] = run_experiment(wc, cfg.cache, goldens.at(task.b),
                                    task.m == Method::HwFi ? pair.hw : pair.rnd, task.m);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const unsigned jobs = std::min<std::size_t>(cfg.effective_jobs(), std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  canonicalize(records);
  write_file(out_dir / "results.csv", write_results_csv(records));
  return records;
}

// ---------------------------------------------------------------- report

namespace report_detail {

inline constexpr std::array<Outcome, 3> kOutcomes = {Outcome::Correct, Outcome::SDC, Outcome::Crash};
inline constexpr std::array<const char*, 3> kOutcomeColors = {"#4daf4a", "#ff9f1c", "#d7263d"};

inline std::string pct(const OutcomeCounts& c, Outcome o) { return format_g9(100.0 * c.fraction(o)); }

inline std::vector<std::string> benchmark_order(const AggregateReport& rep) {
  std::vector<std::string> out;
  for (auto b : kAllBenchmarks) {
    const std::string name(to_string(b));
    for (const auto& [key, _] : rep.classification)
      if (key.first == name) {
        out.push_back(name);
        break;
      }
  }
  return out;
}

inline std::string classification_svg(const AggregateReport& rep,
                                      const std::vector<std::string>& benches) {
  const double left = 50, top = 30, h = 240, group = 90, bar = 30;
  svg::Document doc(left + group * double(std::max<std::size_t>(benches.size(), 1)) + 120,
                    top + h + 60);
  doc.text(left, 18, "Outcome classification per benchmark (HW_FI | RND_FI)");
  for (int p = 0; p <= 100; p += 25) {
    const double y = top + h - h * p / 100.0;
    doc.line(left - 4, y, left, y);
    doc.text(left - 6, y + 4, std::to_string(p) + "%", "end", 10);
  }
  doc.line(left, top, left, top + h);
  for (std::size_t i = 0; i < benches.size(); ++i) {
    const double gx = left + 10 + group * double(i);
    for (int mi = 0; mi < 2; ++mi) {
      const Method m = mi ? Method::RndFi : Method::HwFi;
      auto it = rep.classification.find({benches[i], m});
      const double x = gx + mi * (bar + 4);
      if (it != rep.classification.end()) {
        double y = top + h;
        for (std::size_t k = 0; k < 3; ++k) {
          const double hh = h * it->second.fraction(kOutcomes[k]);
          y -= hh;
          if (hh > 0) doc.rect(x, y, bar, hh, kOutcomeColors[k]);
        }
      }
      doc.text(x + bar / 2, top + h + 14, mi ? "RND" : "HW", "middle", 9);
    }
    doc.text(gx + bar + 2, top + h + 30, benches[i], "middle", 11);
  }
  const double lx = left + group * double(benches.size()) + 20;
  for (std::size_t k = 0; k < 3; ++k) {
    doc.rect(lx, top + 20 * double(k), 12, 12, kOutcomeColors[k]);
    doc.text(lx + 16, top + 20 * double(k) + 10, to_string(kOutcomes[k]), "start", 11);
  }
  return doc.str();
}

inline std::string count_svg(const AggregateReport& rep) {
  const double left = 50, top = 30, w = 480, h = 240;
  svg::Document doc(left + w + 150, top + h + 50);
  doc.text(left, 18, "Outcomes vs. number of faulty bits (all benchmarks)");
  doc.line(left, top + h, left + w, top + h);
  doc.line(left, top, left, top + h);
  auto xof = [&](std::uint64_t n) { return left + w * double(n - 1) / double(kFaultCountCutoff - 1); };
  for (std::uint64_t n = 1; n <= kFaultCountCutoff; ++n)
    doc.text(xof(n), top + h + 14, std::to_string(n), "middle", 9);
  for (int p = 0; p <= 100; p += 25)
    doc.text(left - 6, top + h - h * p / 100.0 + 4, std::to_string(p) + "%", "end", 10);
  for (int mi = 0; mi < 2; ++mi) {
    const Method m = mi ? Method::RndFi : Method::HwFi;
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<std::pair<double, double>> pts;
      for (std::uint64_t n = 1; n <= kFaultCountCutoff; ++n) {
        auto it = rep.by_fault_count.find({"all", m, n});
        if (it == rep.by_fault_count.end() || it->second.total() == 0) continue;
        pts.emplace_back(xof(n), top + h - h * it->second.fraction(kOutcomes[k]));
      }
      doc.polyline(pts, kOutcomeColors[k], mi == 1);
    }
  }
  const double lx = left + w + 20;
  for (std::size_t k = 0; k < 3; ++k) {
    doc.line(lx, top + 18 * double(k) + 6, lx + 20, top + 18 * double(k) + 6, kOutcomeColors[k]);
    doc.text(lx + 24, top + 18 * double(k) + 10, to_string(kOutcomes[k]), "start", 11);
  }
  doc.text(lx, top + 70, "solid: HW_FI", "start", 10);
  doc.text(lx, top + 84, "dashed: RND_FI", "start", 10);
  return doc.str();
}

/// Violin outline from a stacked histogram: bin counts set the half-width.
inline std::vector<std::pair<double, double>> violin(const std::vector<double>& values, double lo,
                                                     double hi, double cx, double half_width,
                                                     double y_top, double y_bottom, int bins) {
  std::vector<double> count(bins, 0.0);
  for (double v : values) {
    int b = hi > lo ? int((v - lo) / (hi - lo) * bins) : 0;
    count[std::clamp(b, 0, bins - 1)] += 1.0;
  }
  const double peak = *std::max_element(count.begin(), count.end());
  auto yof = [&](int edge) { return y_bottom - (y_bottom - y_top) * double(edge) / bins; };
  std::vector<std::pair<double, double>> right, left;
  for (int b = 0; b < bins; ++b) {
    const double wdt = peak > 0 ? half_width * count[b] / peak : 0.0;
    right.emplace_back(cx + wdt, yof(b));
    right.emplace_back(cx + wdt, yof(b + 1));
    left.emplace_back(cx - wdt, yof(b));
    left.emplace_back(cx - wdt, yof(b + 1));
  }
  std::reverse(left.begin(), left.end());
  right.insert(right.end(), left.begin(), left.end());
  return right;
}

inline std::string quality_svg(const AggregateReport& rep, const std::vector<std::string>& benches) {
  const double panel = 160, top = 40, h = 220;
  svg::Document doc(20 + panel * double(std::max<std::size_t>(benches.size(), 1)), top + h + 50);
  doc.text(20, 18, "SDC output quality (left HW_FI, right RND_FI)");
  for (std::size_t i = 0; i < benches.size(); ++i) {
    const double x0 = 20 + panel * double(i);
    std::vector<double> pooled;
    for (auto m : {Method::HwFi, Method::RndFi})
      if (auto it = rep.quality.find({benches[i], m}); it != rep.quality.end())
        pooled.insert(pooled.end(), it->second.begin(), it->second.end());
    const auto bench = *benchmark_from_string(benches[i]);
    doc.text(x0 + panel / 2, top + h + 34, benches[i] + " (" + std::string(to_string(metric_for(bench))) + ")",
             "middle", 10);
    doc.line(x0 + 10, top, x0 + 10, top + h);
    if (pooled.empty()) continue;
    const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    doc.text(x0 + 12, top - 4, format_g9(*mx), "start", 9);
    doc.text(x0 + 12, top + h + 12, format_g9(*mn), "start", 9);
    for (int mi = 0; mi < 2; ++mi) {
      auto it = rep.quality.find({benches[i], mi ? Method::RndFi : Method::HwFi});
      if (it == rep.quality.end() || it->second.empty()) continue;
      const double cx = x0 + 50 + 70 * mi;
      doc.polygon(violin(it->second, *mn, *mx, cx, 28, top, top + h, 24),
                  mi ? "#9ecae1" : "#fdae6b");
      const double m = stats::mean(it->second);
      const double y = *mx > *mn ? top + h - h * (m - *mn) / (*mx - *mn) : top + h / 2;
      doc.line(cx - 10, y, cx + 10, y);
    }
  }
  return doc.str();
}

}  // namespace report_detail

/// Reads a results CSV and writes the classification, outcome-vs-count and
/// quality artifacts (CSV + SVG) into `report_dir`.
inline void cmd_report(const fs::path& results_csv, const fs::path& report_dir) {
  using namespace report_detail;
  std::vector<ExperimentRecord> records;
  try {
    records = parse_results_csv(read_file(results_csv));
  } catch (const ResultsParseError& e) {
    throw RuntimeError(results_csv.string() + ": " + e.what());
  }
  AggregateReport rep;
  if (!records.empty()) rep = aggregate(records);
  const auto benches = benchmark_order(rep);

  std::string cls = "benchmark,method,experiments,correct_pct,sdc_pct,crash_pct\n";
  for (const auto& b : benches)
    for (auto m : {Method::HwFi, Method::RndFi})
      if (auto it = rep.classification.find({b, m}); it != rep.classification.end())
        cls += b + ',' + std::string(to_string(m)) + ',' + std::to_string(it->second.total()) + ',' +
               pct(it->second, Outcome::Correct) + ',' + pct(it->second, Outcome::SDC) + ',' +
               pct(it->second, Outcome::Crash) + '\n';
  write_file(report_dir / "classification.csv", cls);
  write_file(report_dir / "classification.svg", classification_svg(rep, benches));

  std::string cnt = "benchmark,method,fault_count,experiments,correct_pct,sdc_pct,crash_pct\n";
  auto series = benches;
  series.push_back("all");
  for (const auto& b : series)
    for (auto m : {Method::HwFi, Method::RndFi})
      for (std::uint64_t n = 0; n <= kFaultCountCutoff; ++n)
        if (auto it = rep.by_fault_count.find({b, m, n}); it != rep.by_fault_count.end())
          cnt += b + ',' + std::string(to_string(m)) + ',' + std::to_string(n) + ',' +
                 std::to_string(it->second.total()) + ',' + pct(it->second, Outcome::Correct) +
                 ',' + pct(it->second, Outcome::SDC) + ',' + pct(it->second, Outcome::Crash) + '\n';
  write_file(report_dir / "outcome_by_count.csv", cnt);
  write_file(report_dir / "outcome_by_count.svg", count_svg(rep));

  std::string summary = "benchmark,method,metric,sdc_count,min,q1,median,q3,mean,max\n";
  std::string raw = "benchmark,method,metric,quality\n";
  std::string tests = "benchmark,metric,hw_sdc_count,rnd_sdc_count,ks_statistic,p_value\n";
  for (const auto& b : benches) {
    const std::string metric(to_string(metric_for(*benchmark_from_string(b))));
    for (auto m : {Method::HwFi, Method::RndFi}) {
      auto it = rep.quality.find({b, m});
      if (it == rep.quality.end() || it->second.empty()) continue;
      auto sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      summary += b + ',' + std::string(to_string(m)) + ',' + metric + ',' +
                 std::to_string(sorted.size()) + ',' + format_g9(sorted.front()) + ',' +
                 format_g9(stats::quantile_sorted(sorted, 0.25)) + ',' +
                 format_g9(stats::quantile_sorted(sorted, 0.5)) + ',' +
                 format_g9(stats::quantile_sorted(sorted, 0.75)) + ',' +
                 format_g9(stats::mean(sorted)) + ',' + format_g9(sorted.back()) + '\n';
      for (double v : it->second)
        raw += b + ',' + std::string(to_string(m)) + ',' + metric + ',' + format_g9(v) + '\n';
    }
    auto hw = rep.quality.find({b, Method::HwFi});
    auto rnd = rep.quality.find({b, Method::RndFi});
    if (hw != rep.quality.end() && rnd != rep.quality.end() && !hw->second.empty() &&
        !rnd->second.empty()) {
      const auto ks = stats::ks_two_sample(hw->second, rnd->second);
      tests += b + ',' + metric + ',' + std::to_string(hw->second.size()) + ',' +
               std::to_string(rnd->second.size()) + ',' + format_g9(ks.statistic) + ',' +
               format_g9(ks.p_value) + '\n';
    }
  }
  write_file(report_dir / "quality_summary.csv", summary);
  write_file(report_dir / "quality_values.csv", raw);
  write_file(report_dir / "quality_tests.csv", tests);
  write_file(report_dir / "quality.svg", quality_svg(rep, benches));
}

// ---------------------------------------------------------------- heatmap

inline std::string heatmap_csv(const Heatmap& h) {
  std::string s;
  for (std::uint32_t r = 0; r < h.rows; ++r) {
    for (std::uint32_t c = 0; c < h.cols; ++c) {
      if (c) s += ',';
      s += format_g9(h.at(r, c));
    }
    s += '\n';
  }
  return s;
}

/// Grayscale P5 image, scaled so the most frequent bit is 255.
inline std::string heatmap_pgm(const Heatmap& h) {
  const double peak = h.values.empty() ? 0.0 : *std::max_element(h.values.begin(), h.values.end());
  std::vector<std::uint8_t> px(h.values.size(), 0);
  if (peak > 0)
    for (std::size_t i = 0; i < px.size(); ++i)
      px[i] = static_cast<std::uint8_t>(std::lround(255.0 * h.values[i] / peak));
  return encode_pgm(h.cols, h.rows, px);
}

/// Per-bit fault probability over the HW corpus (all maps) and the RND
/// corpus (faulty maps only), as hw.{csv,pgm} and rnd.{csv,pgm}.
inline void cmd_heatmap(const fs::path& corpus_dir, const fs::path& heatmap_dir) {
  const auto index = read_index(corpus_dir);
  if (index.empty()) throw RuntimeError("empty corpus at " + corpus_dir.string());
  std::vector<FaultMap> hw, rnd;
  for (const auto& e : index) {
    hw.push_back(load_map(corpus_dir, e.hw_file, e.hw_count));
    if (!e.rnd_file.empty()) rnd.push_back(load_map(corpus_dir, e.rnd_file, e.rnd_count));
  }
  try {
    const auto h = probability_heatmap(hw);
    write_file(heatmap_dir / "hw.csv", heatmap_csv(h));
    write_file(heatmap_dir / "hw.pgm", heatmap_pgm(h));
    if (!rnd.empty()) {
      const auto r = probability_heatmap(rnd);
      write_file(heatmap_dir / "rnd.csv", heatmap_csv(r));
      write_file(heatmap_dir / "rnd.pgm", heatmap_pgm(r));
    }
  } catch (const std::invalid_argument& e) {
    throw RuntimeError(e.what());
  }
}

}  // namespace uvsram::cli
