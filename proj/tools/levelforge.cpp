#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "levelforge/config.hpp"
#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"
#include "levelforge/online.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

lf::RunConfig load_config(const CommonOpts& opts) {
  lf::RunConfig cfg = opts.config_path.empty()
                          ? lf::RunConfig::from_json_text("{}")
                          : lf::RunConfig::from_json_file(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
    cfg.train.seed = *opts.seed;
    cfg.evaluation.seed = *opts.seed;
  }
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw lf::DataError("cannot create directory '" + dir + "'");
}

std::string hex64(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

/// Every output directory gets a manifest sufficient to rerun the command.
class Manifest {
 public:
  Manifest(std::string command, const lf::RunConfig& cfg)
      : command_(std::move(command)), config_(cfg.to_json()) {}

  void add_input(const std::string& path) { inputs_[path] = hex64(lf::fnv1a64_file(path)); }
  void add_output(const std::string& path) {
    outputs_[path] = hex64(lf::fnv1a64_file(path));
  }
  void add_note(const std::string& key, const json& value) { notes_[key] = value; }

  void write(const std::string& path) const {
    json j;
    j["command"] = command_;
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    if (!notes_.empty()) j["notes"] = notes_;
    lf::write_text_file(path, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  json config_;
  std::map<std::string, std::string> inputs_, outputs_;
  json notes_;
};

std::string type_tag_from_filename(const std::string& name) {
  for (const char* tag : {"overworld", "athletic", "underground"})
    if (name.find(tag) != std::string::npos) return tag;
  return "unknown";
}

struct CorpusFile {
  std::string path;
  std::string type;
  lf::Level level;
};

std::vector<CorpusFile> load_corpus(const std::string& dir, const lf::TileAlphabet& alpha) {
  if (!fs::is_directory(dir)) throw lf::DataError("corpus directory '" + dir + "' not found");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw lf::DataError("no .txt level files in '" + dir + "'");

  std::vector<CorpusFile> out;
  for (const auto& p : paths) {
    CorpusFile f;
    f.path = p.string();
    f.type = type_tag_from_filename(p.filename().string());
    try {
      f.level = lf::parse_level(lf::read_text_file(f.path), alpha);
    } catch (const lf::DataError& e) {
      throw lf::DataError(f.path + ": " + e.what());
    }
    out.push_back(std::move(f));
  }
  return out;
}

lf::DesignerPolicy load_policy(const std::string& path) {
  return lf::Checkpoint::load(path).policy;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const CommonOpts& opts, const std::string& corpus_dir, int stride) {
  const lf::RunConfig cfg = load_config(opts);
  const auto corpus = load_corpus(corpus_dir, cfg.alphabet());
  ensure_dir(opts.out_dir);

  std::vector<std::pair<lf::Level, std::string>> tagged;
  for (const auto& f : corpus) tagged.emplace_back(f.level, f.type);
  const auto stats = lf::corpus_diversity_stats(tagged, cfg.metrics, stride);

  std::ostringstream stats_csv;
  stats_csv << "type,levels,segments,mean,std\n";
  std::cout << "diversity by level type (stride " << stride << "):\n";
  for (const auto& st : stats) {
    stats_csv << st.type << ',' << st.levels << ',' << st.segments << ',' << st.mean << ','
              << st.stddev << '\n';
    std::cout << "  " << std::left << std::setw(12) << st.type << std::right
              << std::setw(8) << st.segments << " segments   D = " << std::fixed
              << std::setprecision(3) << st.mean << " +/- " << st.stddev << '\n';
  }
  const std::string stats_path = opts.out_dir + "/diversity_stats.csv";
  lf::write_text_file(stats_path, stats_csv.str());

  std::ostringstream census_csv;
  census_csv << "file,segment,offset,gaps,pipes,enemies,bullets,coins,question_marks\n";
  for (const auto& f : corpus) {
    const auto segments = lf::slice_segments(f.level, cfg.metrics.window_cols,
                                             cfg.metrics.window_cols);
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const lf::ElementCensus c = lf::census(segments[i], cfg.alphabet());
      census_csv << fs::path(f.path).filename().string() << ',' << i << ','
                 << i * cfg.metrics.window_cols << ',' << c.gaps << ',' << c.pipes << ','
                 << c.enemies << ',' << c.bullets << ',' << c.coins << ','
                 << c.question_marks << '\n';
    }
  }
  const std::string census_path = opts.out_dir + "/census.csv";
  lf::write_text_file(census_path, census_csv.str());

  Manifest manifest("analyze", cfg);
  for (const auto& f : corpus) manifest.add_input(f.path);
  manifest.add_output(stats_path);
  manifest.add_output(census_path);
  manifest.add_note("stride", stride);
  manifest.write(opts.out_dir + "/manifest.json");
  return 0;
}

int cmd_build_pool(const CommonOpts& opts, const std::string& corpus_dir,
                   const std::string& out_file, int width, int stride) {
  const lf::RunConfig cfg = load_config(opts);
  const auto corpus = load_corpus(corpus_dir, cfg.alphabet());
  std::vector<lf::Level> levels;
  for (const auto& f : corpus) levels.push_back(f.level);

  const lf::SegmentPool pool = lf::build_pool(levels, width, stride, cfg.seed, corpus_dir);
  if (!out_file.empty()) {
    if (const auto parent = fs::path(out_file).parent_path(); !parent.empty())
      ensure_dir(parent.string());
  }
  pool.save(out_file);
  std::cout << "pool: " << pool.entries().size() << " entries (seed " << cfg.seed
            << ") -> " << out_file << '\n';

  Manifest manifest("build-pool", cfg);
  for (const auto& f : corpus) manifest.add_input(f.path);
  manifest.add_output(out_file);
  manifest.add_note("width", width);
  manifest.add_note("stride", stride);
  manifest.write(out_file + ".manifest.json");
  return 0;
}

int cmd_train(const CommonOpts& opts) {
  const lf::RunConfig cfg = load_config(opts);
  const auto backend = lf::make_backend(cfg);
  ensure_dir(opts.out_dir);

  const std::string log_path = opts.out_dir + "/train_log.csv";
  const std::string ckpt_path = opts.out_dir + "/policy.ckpt";
  std::ofstream log(log_path);
  if (!log) throw lf::DataError("cannot write '" + log_path + "'");

  const lf::Trainer trainer = lf::train(cfg.train, cfg.reward, cfg.metrics, cfg.physics,
                                        *backend, &log, ckpt_path, cfg.alphabet());
  log.close();

  if (cfg.train.total_steps == 0) {
    // Nothing ran, so persist the freshly initialized state explicitly.
    lf::Rng env_rng(lf::derive_seed(cfg.seed, 1));
    lf::Rng action_rng(lf::derive_seed(cfg.seed, 2));
    lf::Rng shuffle_rng(lf::derive_seed(cfg.seed, 3));
    trainer.save_checkpoint(ckpt_path, env_rng, action_rng, shuffle_rng);
  }
  std::cout << "trained " << trainer.steps_done << " steps -> " << ckpt_path << '\n';

  Manifest manifest("train", cfg);
  if (!cfg.backend.path.empty()) manifest.add_input(cfg.backend.path);
  manifest.add_output(ckpt_path);
  manifest.add_output(log_path);
  manifest.write(opts.out_dir + "/manifest.json");
  return 0;
}

json census_json(const lf::ElementCensus& c) {
  return json{{"gaps", c.gaps},     {"pipes", c.pipes},
              {"enemies", c.enemies}, {"bullets", c.bullets},
              {"coins", c.coins},   {"question_marks", c.question_marks}};
}

int cmd_generate(const CommonOpts& opts, const std::string& policy_path,
                 const std::string& agent, std::optional<int> segments,
                 std::optional<std::string> resample) {
  lf::RunConfig cfg = load_config(opts);
  if (segments) cfg.online.target_segments = *segments;
  if (resample) {
    if (*resample == "policy")
      cfg.online.resample_mode = lf::OnlineConfig::Resample::Policy;
    else if (*resample == "random")
      cfg.online.resample_mode = lf::OnlineConfig::Resample::Random;
    else
      throw lf::ConfigError("--resample must be 'policy' or 'random'");
  }
  cfg.online.validate();

  const auto backend = lf::make_backend(cfg);
  std::optional<lf::DesignerPolicy> policy;
  if (agent == "policy") {
    if (policy_path.empty()) throw lf::ConfigError("--policy is required for --agent policy");
    policy = load_policy(policy_path);
  } else if (agent != "random") {
    throw lf::ConfigError("--agent must be 'policy' or 'random'");
  }

  ensure_dir(opts.out_dir);
  lf::DesignEnv env(*backend, cfg.metrics, cfg.reward, cfg.physics,
                    cfg.online.target_segments, lf::derive_seed(cfg.seed, 11),
                    cfg.alphabet());
  lf::Rng action_rng(lf::derive_seed(cfg.seed, 12));
  env.reset();
  const lf::GenerationReport report =
      lf::generate_online(policy ? &*policy : nullptr, env, cfg.online, action_rng);

  const std::string level_path = opts.out_dir + "/level.txt";
  lf::write_text_file(level_path, env.level().serialize());

  std::ostringstream seg_csv;
  seg_csv << "segment,d,f,h,resamples,faulty_before,faulty_after,gaps,pipes,enemies,"
             "bullets,coins,question_marks,elapsed_ms\n";
  for (std::size_t i = 0; i < report.segments.size(); ++i) {
    const auto& r = report.segments[i];
    seg_csv << i << ',' << r.d << ',' << r.f << ',' << r.h << ',' << r.resamples << ','
            << r.faulty_before << ',' << r.faulty_after << ',' << r.census.gaps << ','
            << r.census.pipes << ',' << r.census.enemies << ',' << r.census.bullets << ','
            << r.census.coins << ',' << r.census.question_marks << ',' << r.elapsed_ms
            << '\n';
  }
  const std::string seg_path = opts.out_dir + "/segments.csv";
  lf::write_text_file(seg_path, seg_csv.str());

  json jr;
  jr["failed"] = report.failed;
  jr["segments_emitted"] = report.segments.size();
  jr["unplayable_segments"] = report.unplayable_segments;
  jr["resamples_max"] = report.resamples_max;
  jr["resamples_total"] = report.resamples_total;
  jr["samples_total"] = report.samples_total;
  jr["time_per_segment_ms"] = report.time_per_segment_ms;
  jr["time_per_sample_ms"] = report.time_per_sample_ms;
  jr["p99_segment_ms"] = report.p99_segment_ms;
  jr["faulty_tiles_before"] = report.faulty_tiles_before;
  jr["faulty_tiles_after"] = report.faulty_tiles_after;
  jr["budget_overruns"] = report.budget_overruns;
  jr["census_totals"] = census_json(report.census_totals);
  const std::string report_path = opts.out_dir + "/report.json";
  lf::write_text_file(report_path, jr.dump(2) + "\n");

  std::cout << (report.failed ? "FAILED after " : "generated ")
            << report.segments.size() << " segments, " << report.resamples_total
            << " resamples, " << std::fixed << std::setprecision(3)
            << report.time_per_segment_ms << " ms/segment\n";

  Manifest manifest("generate", cfg);
  if (!policy_path.empty()) manifest.add_input(policy_path);
  if (!cfg.backend.path.empty()) manifest.add_input(cfg.backend.path);
  manifest.add_output(level_path);
  manifest.add_output(seg_path);
  manifest.add_output(report_path);
  manifest.add_note("agent", agent);
  manifest.write(opts.out_dir + "/manifest.json");
  return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& policy_path,
                 const std::string& agent, int terminate_override) {
  const lf::RunConfig cfg = load_config(opts);
  const auto backend = lf::make_backend(cfg);
  std::optional<lf::DesignerPolicy> policy;
  if (agent == "policy") {
    if (policy_path.empty()) throw lf::ConfigError("--policy is required for --agent policy");
    policy = load_policy(policy_path);
  } else if (agent != "random") {
    throw lf::ConfigError("--agent must be 'policy' or 'random'");
  }

  lf::EvaluationConfig ecfg = cfg.evaluation;
  // A designer trained with P stops at the first unplayable segment, as does
  // the random baseline; P-free designers always run to the segment cap.
  ecfg.terminate_on_unplayable =
      agent == "random" || cfg.reward.has(lf::RewardComponent::P);
  if (terminate_override >= 0) ecfg.terminate_on_unplayable = terminate_override != 0;

  ensure_dir(opts.out_dir);
  const lf::EvaluationReport report = lf::evaluate_policy(
      policy ? &*policy : nullptr, *backend, cfg.metrics, cfg.physics, ecfg,
      cfg.alphabet());

  std::ostringstream csv;
  csv << "init,trial,segments,P,F_mean,Fb_percent,H_mean,gaps,pipes,enemies,bullets,"
         "coins,question_marks\n";
  for (const auto& lev : report.levels) {
    csv << lev.init_index << ',' << lev.trial << ',' << lev.segments_generated << ','
        << lev.playable_segments << ',' << lev.f_mean << ',' << lev.fb_percent << ','
        << lev.h_mean << ',' << lev.gaps << ',' << lev.pipes << ',' << lev.enemies << ','
        << lev.bullets << ',' << lev.coins << ',' << lev.question_marks << '\n';
  }
  const std::string csv_path = opts.out_dir + "/evaluation.csv";
  lf::write_text_file(csv_path, csv.str());

  std::ostringstream summary;
  auto line = [&](const char* name, const lf::Summary& s) {
    summary << std::left << std::setw(16) << name << std::right << std::fixed
            << std::setprecision(3) << std::setw(10) << s.mean << " +/- " << s.stddev
            << "  (n=" << s.count << ")\n";
  };
  summary << "levels: " << report.levels.size() << '\n';
  line("F_bar", report.f_bar);
  line("Fb_percent", report.fb_percent);
  line("H_bar", report.h_bar);
  line("P_bar", report.p_bar);
  line("gaps", report.gaps);
  line("pipes", report.pipes);
  line("enemies", report.enemies);
  line("bullets", report.bullets);
  line("coins", report.coins);
  line("question_marks", report.question_marks);
  const std::string summary_path = opts.out_dir + "/summary.txt";
  lf::write_text_file(summary_path, summary.str());
  std::cout << summary.str();

  Manifest manifest("evaluate", cfg);
  if (!policy_path.empty()) manifest.add_input(policy_path);
  if (!cfg.backend.path.empty()) manifest.add_input(cfg.backend.path);
  manifest.add_output(csv_path);
  manifest.add_output(summary_path);
  manifest.add_note("agent", agent);
  manifest.add_note("terminate_on_unplayable", ecfg.terminate_on_unplayable);
  manifest.write(opts.out_dir + "/manifest.json");
  return 0;
}

struct Rgb {
  unsigned char r, g, b;
};

Rgb tile_color(char glyph) {
  switch (glyph) {
    case '-': return {107, 140, 255};  // sky
    case 'X': return {150, 75, 40};
    case 'S': return {222, 160, 100};
    case '?':
    case 'Q': return {240, 188, 60};
    case 'o': return {252, 220, 90};
    case 'E': return {200, 48, 40};
    case '<':
    case '>':
    case '[':
    case ']': return {52, 160, 70};
    case 'B': return {90, 90, 105};
    case 'b': return {140, 140, 155};
    default: return {255, 0, 255};
  }
}

int cmd_render(const CommonOpts& opts, const std::string& level_path,
               const std::string& style, const std::string& out_file, int scale) {
  const lf::RunConfig cfg = load_config(opts);
  const lf::Level level =
      lf::parse_level(lf::read_text_file(level_path), cfg.alphabet());

  if (style == "ascii") {
    const std::string text = level.serialize();
    if (out_file.empty())
      std::cout << text;
    else
      lf::write_text_file(out_file, text);
    return 0;
  }
  if (style == "image") {
    if (scale < 1) throw lf::ConfigError("--scale must be >= 1");
    const std::string path = out_file.empty() ? "level.ppm" : out_file;
    const int w = level.width() * scale;
    const int h = level.rows() * scale;
    std::ostringstream img;
    img << "P6\n" << w << ' ' << h << "\n255\n";
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Rgb c = tile_color(level.grid().at(y / scale, x / scale));
        img.put(static_cast<char>(c.r));
        img.put(static_cast<char>(c.g));
        img.put(static_cast<char>(c.b));
      }
    }
    lf::write_text_file(path, img.str());
    std::cout << "wrote " << path << " (" << w << "x" << h << ")\n";
    return 0;
  }
  throw lf::ConfigError("unknown render style '" + style + "' (expected ascii or image)");
}

int cmd_bench(const CommonOpts& opts, const std::string& policy_path,
              const std::string& agent, int segments) {
  const lf::RunConfig cfg = load_config(opts);
  const auto backend = lf::make_backend(cfg);
  std::optional<lf::DesignerPolicy> policy;
  if (agent == "policy" && !policy_path.empty()) policy = load_policy(policy_path);

  const lf::LatencyStats stats =
      lf::benchmark_latency(policy ? &*policy : nullptr, *backend, cfg.metrics,
                            cfg.physics, segments, cfg.seed, cfg.alphabet());
  std::cout << std::fixed << std::setprecision(3)
            << "segments: " << stats.segments << " (samples " << stats.samples << ")\n"
            << "mean per segment: " << stats.mean_segment_ms << " ms\n"
            << "p99 per segment:  " << stats.p99_segment_ms << " ms\n"
            << "mean per sample:  " << stats.mean_sample_ms << " ms\n";
  if (stats.failed) std::cout << "note: a segment exhausted the resample cap\n";

  if (!opts.out_dir.empty()) {
    ensure_dir(opts.out_dir);
    std::ostringstream csv;
    csv << "segments,samples,mean_segment_ms,p99_segment_ms,mean_sample_ms,failed\n"
        << stats.segments << ',' << stats.samples << ',' << stats.mean_segment_ms << ','
        << stats.p99_segment_ms << ',' << stats.mean_sample_ms << ',' << stats.failed
        << '\n';
    const std::string path = opts.out_dir + "/latency.csv";
    lf::write_text_file(path, csv.str());
    Manifest manifest("bench", cfg);
    if (!policy_path.empty()) manifest.add_input(policy_path);
    manifest.add_output(path);
    manifest.write(opts.out_dir + "/manifest.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levelforge: endless tile-level generation with an RL designer"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string corpus_dir, out_file, policy_path, level_path;
  std::string agent = "policy", style = "ascii";
  std::optional<int> gen_segments;
  std::optional<std::string> gen_resample;
  int stride = 7, width = 14, scale = 8, bench_segments = 50;
  int terminate_override = -1;

  auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", opts.config_path, "run configuration (JSON)");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    auto* out = cmd->add_option("--out", opts.out_dir, "output directory");
    if (needs_out) out->required();
  };

  auto* analyze = app.add_subcommand("analyze", "corpus diversity statistics and census");
  analyze->add_option("--corpus", corpus_dir, "directory of VGLC .txt levels")->required();
  analyze->add_option("--stride", stride, "slicing stride in columns");
  add_common(analyze, true);

  auto* build = app.add_subcommand("build-pool", "slice a corpus into a segment pool");
  build->add_option("--corpus", corpus_dir, "directory of VGLC .txt levels")->required();
  build->add_option("--pool-out", out_file, "pool checkpoint file")->required();
  build->add_option("--width", width, "segment width");
  build->add_option("--stride", stride, "slicing stride in columns");
  add_common(build, false);

  auto* train_cmd = app.add_subcommand("train", "train the RL designer with PPO");
  add_common(train_cmd, true);

  auto* generate = app.add_subcommand("generate", "online level generation with resampling");
  generate->add_option("--policy", policy_path, "policy checkpoint");
  generate->add_option("--agent", agent, "policy | random");
  generate->add_option("--segments", gen_segments, "target segment count");
  generate->add_option("--resample", gen_resample, "policy | random");
  add_common(generate, true);

  auto* evaluate = app.add_subcommand("evaluate", "batch evaluation across initial states");
  evaluate->add_option("--policy", policy_path, "policy checkpoint");
  evaluate->add_option("--agent", agent, "policy | random");
  evaluate->add_flag_callback("--terminate", [&] { terminate_override = 1; },
                              "stop levels at the first unplayable segment");
  evaluate->add_flag_callback("--no-terminate", [&] { terminate_override = 0; },
                              "always generate the full segment cap");
  add_common(evaluate, true);

  auto* render = app.add_subcommand("render", "render a level file");
  render->add_option("--level", level_path, "level text file")->required();
  render->add_option("--style", style, "ascii | image");
  render->add_option("--render-out", out_file, "output file (stdout/level.ppm default)");
  render->add_option("--scale", scale, "pixels per tile for image output");
  add_common(render, false);

  auto* bench = app.add_subcommand("bench", "steady-state generation latency");
  bench->add_option("--policy", policy_path, "policy checkpoint");
  bench->add_option("--agent", agent, "policy | random");
  bench->add_option("--segments", bench_segments, "segments to time");
  add_common(bench, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opts, corpus_dir, stride);
    if (build->parsed()) return cmd_build_pool(opts, corpus_dir, out_file, width, stride);
    if (train_cmd->parsed()) return cmd_train(opts);
    if (generate->parsed())
      return cmd_generate(opts, policy_path, agent, gen_segments, gen_resample);
    if (evaluate->parsed())
      return cmd_evaluate(opts, policy_path, agent, terminate_override);
    if (render->parsed()) return cmd_render(opts, level_path, style, out_file, scale);
    if (bench->parsed())
      return cmd_bench(opts, policy_path, agent, bench_segments);
  } catch (const lf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const lf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
