// cornerforge command-line tool.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cornerforge/baselines.hpp"
#include "cornerforge/dataset.hpp"
#include "cornerforge/detector.hpp"
#include "cornerforge/detectors.hpp"
#include "cornerforge/emit.hpp"
#include "cornerforge/error.hpp"
#include "cornerforge/faster.hpp"
#include "cornerforge/id3.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/pgm.hpp"
#include "cornerforge/repeatability.hpp"
#include "cornerforge/synthetic.hpp"

#ifndef CORNERFORGE_VERSION
#define CORNERFORGE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace cornerforge;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kData = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

const std::vector<std::string> kAlgos{"fast-ref", "fast-tree", "faster", "harris", "shi-tomasi", "random"};

// Every option that can change the result, as "name=value". Output
// destinations and --jobs are left out so reruns compare byte for byte.
std::vector<std::string> run_config(const CLI::App& cmd) {
  std::vector<std::string> lines{std::string("cornerforge ") + CORNERFORGE_VERSION + " " + cmd.get_name()};
  for (const CLI::Option* opt : cmd.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "jobs" || name == "output" || name == "out-dir" || name == "trace" ||
        name == "svg") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    lines.push_back(name + "=" + value);
  }
  return lines;
}

std::string header(const CLI::App& cmd) {
  std::string out;
  for (const auto& l : run_config(cmd)) out += "# " + l + "\n";
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
  } else {
    write_text_file(path, text);
  }
}

int jobs_fallback() {
  if (const char* env = std::getenv("CORNERFORGE_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw UsageError(std::string("CORNERFORGE_JOBS is not an integer: ") + env);
    }
  }
  return 1;
}

std::vector<GrayImage> read_images(const std::vector<std::string>& paths) {
  std::vector<GrayImage> out;
  for (const auto& p : paths) out.push_back(read_pgm_file(p));
  return out;
}

TernaryTree read_tree(const std::string& path) { return deserialize_tree(read_text_file(path)); }

// "name[:key=value,...]" with keys n, t, tree, sigma, seed, pool.
DetectorConfig parse_detector_spec(const std::string& spec, const DetectorConfig& defaults) {
  DetectorConfig c = defaults;
  const auto colon = spec.find(':');
  c.algo = spec.substr(0, colon);
  if (std::find(kAlgos.begin(), kAlgos.end(), c.algo) == kAlgos.end())
    throw UsageError("unknown detector '" + c.algo + "'");
  if (colon == std::string::npos) return c;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad detector parameter '" + item + "' in " + spec);
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "n")
        c.n = std::stoi(value);
      else if (key == "t")
        c.threshold = std::stoi(value);
      else if (key == "tree")
        c.tree = read_tree(value);
      else if (key == "sigma")
        c.sigma = std::stod(value);
      else if (key == "seed")
        c.seed = std::stoull(value);
      else if (key == "pool")
        c.random_pool = std::stoull(value);
      else
        throw UsageError("unknown detector parameter '" + key + "' in " + spec);
    } catch (const std::invalid_argument&) {
      throw UsageError("bad value for '" + key + "' in " + spec);
    } catch (const std::out_of_range&) {
      throw UsageError("bad value for '" + key + "' in " + spec);
    }
  }
  return c;
}

std::unique_ptr<FeatureDetector> build_detector(DetectorConfig c) {
  if (c.algo == "faster" && !c.tree) throw UsageError("faster needs a tree file");
  if (c.algo == "fast-tree" && !c.tree) c.tree = learn_segment_test_tree(c.n, {.jobs = c.jobs});
  if (c.algo == "faster") (void)FasterTree(*c.tree);  // checks the s-leaf constraint
  return make_detector(c);
}

// "start:stop:step" or a comma list.
std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  try {
    if (std::count(text.begin(), text.end(), ':') == 2) {
      const auto a = text.find(':'), b = text.rfind(':');
      const std::size_t start = std::stoull(text.substr(0, a)), stop = std::stoull(text.substr(a + 1, b - a - 1)),
                        step = std::stoull(text.substr(b + 1));
      if (step == 0) throw UsageError("count step must be positive");
      for (std::size_t c = start; c <= stop; c += step) out.push_back(c);
    } else {
      std::stringstream in(text);
      std::string item;
      while (std::getline(in, item, ',')) out.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad count list '" + text + "'");
  }
  if (out.empty()) throw UsageError("empty count list");
  return out;
}

std::string safe_file_stem(const std::string& spec) {
  std::string s = spec;
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FAST and FAST-ER corner detection, learning and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CORNERFORGE_VERSION);

  int jobs = 0;
  auto add_jobs = [&](CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "Worker threads (default: CORNERFORGE_JOBS or 1)")->check(CLI::PositiveNumber);
  };

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Detect keypoints in a PGM image");
  std::string detect_image, detect_out, detect_tree;
  DetectorConfig dc;
  dc.threshold = 20;
  std::size_t detect_top = 0;
  detect_cmd->add_option("image", detect_image, "Input PGM")->required();
  detect_cmd->add_option("-o,--output", detect_out, "Keypoint file (default stdout)");
  detect_cmd->add_option("--algo", dc.algo, "Detector")->check(CLI::IsMember(kAlgos))->capture_default_str();
  detect_cmd->add_option("--n", dc.n, "Segment length for fast-ref and learned trees")
      ->check(CLI::Range(9, 16))
      ->capture_default_str();
  detect_cmd->add_option("--t", dc.threshold, "Threshold")->check(CLI::Range(1, 255))->capture_default_str();
  detect_cmd->add_option("--tree", detect_tree, "Tree file for fast-tree or faster");
  detect_cmd->add_option("--sigma", dc.sigma, "Blur for harris and shi-tomasi")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  detect_cmd->add_option("--seed", dc.seed, "Seed for random")->capture_default_str();
  detect_cmd->add_option("--top", detect_top, "Keep the n best (0 keeps all)")->capture_default_str();
  add_jobs(detect_cmd);

  // learn-tree
  auto* learn_cmd = app.add_subcommand("learn-tree", "Learn a FAST-n decision tree with ID3");
  std::vector<std::string> learn_images;
  std::string learn_out;
  int learn_n = 9, learn_t = 20;
  bool learn_exhaustive = false, learn_shared = false;
  std::uint32_t learn_low_weight = 1, learn_image_weight = 256;
  learn_cmd->add_option("images", learn_images, "Training PGM images");
  learn_cmd->add_option("-o,--output", learn_out, "Tree file (default stdout)");
  learn_cmd->add_option("--n", learn_n, "Segment length")->check(CLI::Range(9, 16))->capture_default_str();
  learn_cmd->add_option("--t", learn_t, "Threshold for labelling images")
      ->check(CLI::Range(1, 255))
      ->capture_default_str();
  learn_cmd->add_flag("--exhaustive", learn_exhaustive, "Add every ring configuration at low weight");
  learn_cmd->add_option("--low-weight", learn_low_weight, "Weight of exhaustive records")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  learn_cmd->add_option("--image-weight", learn_image_weight, "Weight of one observed pixel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  learn_cmd->add_flag("--shared-second-test", learn_shared, "Make every second-level node test one pixel");
  add_jobs(learn_cmd);

  // emit-source
  auto* emit_cmd = app.add_subcommand("emit-source", "Render a tree as C++ source");
  std::string emit_tree, emit_out;
  EmitOptions eo;
  emit_cmd->add_option("tree", emit_tree, "Tree file")->required();
  emit_cmd->add_option("-o,--output", emit_out, "Source file (default stdout)");
  emit_cmd->add_option("--name", eo.function_name, "Function name")->capture_default_str();

  // make-dataset
  auto* data_cmd = app.add_subcommand("make-dataset", "Warp a base image into a synthetic sequence");
  std::string data_base, data_dir, data_pairs = "all";
  DatasetOptions dso;
  data_cmd->add_option("base", data_base, "Base PGM image")->required();
  data_cmd->add_option("-o,--output", data_dir, "Dataset directory")->required();
  data_cmd->add_option("--frames", dso.frames, "Frame count")->check(CLI::PositiveNumber)->capture_default_str();
  data_cmd->add_option("--magnitude", dso.warp_magnitude, "Warp magnitude")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  data_cmd->add_option("--noise", dso.noise_sigma, "Gaussian noise sigma")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  data_cmd->add_option("--seed", dso.seed, "Seed")->capture_default_str();
  data_cmd->add_option("--width", dso.width, "Frame width (0: base width)")->capture_default_str();
  data_cmd->add_option("--height", dso.height, "Frame height (0: base height)")->capture_default_str();
  data_cmd->add_option("--pairs", data_pairs, "Pair policy")
      ->check(CLI::IsMember({"all", "adjacent", "adjacent-skip"}))
      ->capture_default_str();

  // synth-scene
  auto* scene_cmd = app.add_subcommand("synth-scene", "Render a procedural test scene");
  std::string scene_out;
  int scene_w = 640, scene_h = 480;
  std::uint64_t scene_seed = 1;
  double scene_noise = 0;
  scene_cmd->add_option("-o,--output", scene_out, "Output PGM")->required();
  scene_cmd->add_option("--width", scene_w, "Width")->check(CLI::PositiveNumber)->capture_default_str();
  scene_cmd->add_option("--height", scene_h, "Height")->check(CLI::PositiveNumber)->capture_default_str();
  scene_cmd->add_option("--seed", scene_seed, "Seed")->capture_default_str();
  scene_cmd->add_option("--noise", scene_noise, "Gaussian noise sigma")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  // eval-repeat
  auto* eval_cmd = app.add_subcommand("eval-repeat", "Repeatability curves and areas on a dataset");
  std::string eval_dir, eval_out_dir, eval_svg, eval_counts = "0:2000:25";
  std::vector<std::string> eval_detectors{"fast-tree"};
  double eval_eps = kDefaultEpsilon;
  std::vector<double> eval_noise;
  std::uint64_t eval_noise_seed = 1;
  std::size_t eval_noise_count = 500;
  eval_cmd->add_option("dataset", eval_dir, "Dataset directory")->required();
  eval_cmd->add_option("--detector", eval_detectors, "Detector spec name[:key=value,...]; repeatable")
      ->capture_default_str();
  eval_cmd->add_option("--counts", eval_counts, "start:stop:step or a comma list")->capture_default_str();
  eval_cmd->add_option("--epsilon", eval_eps, "Match radius in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("-o,--out-dir", eval_out_dir, "Directory for curve CSVs and auc.csv")->required();
  eval_cmd->add_option("--svg", eval_svg, "Also plot the curves");
  eval_cmd->add_option("--noise", eval_noise, "Also sweep these noise sigmas")->delimiter(',');
  eval_cmd->add_option("--noise-count", eval_noise_count, "Feature count for the noise sweep")
      ->capture_default_str();
  eval_cmd->add_option("--noise-seed", eval_noise_seed, "Seed for the noise sweep")->capture_default_str();
  add_jobs(eval_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Detector throughput in megapixels per second");
  std::vector<std::string> bench_images, bench_algos{"fast-tree", "harris"};
  std::string bench_out, bench_tree;
  int bench_reps = 10, bench_warmup = 2, bench_t = 20, bench_n = 9;
  bench_cmd->add_option("images", bench_images, "PGM images");
  bench_cmd->add_option("--algo", bench_algos, "Detectors; repeatable")
      ->check(CLI::IsMember(kAlgos))
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench_reps, "Timed repetitions")->check(CLI::Range(10, 100000))->capture_default_str();
  bench_cmd->add_option("--warmup", bench_warmup, "Untimed repetitions")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench_cmd->add_option("--t", bench_t, "Threshold for FAST detectors")->check(CLI::Range(1, 255))->capture_default_str();
  bench_cmd->add_option("--n", bench_n, "Segment length")->check(CLI::Range(9, 16))->capture_default_str();
  bench_cmd->add_option("--tree", bench_tree, "Tree for fast-tree or faster");
  bench_cmd->add_option("-o,--output", bench_out, "CSV (default stdout)");

  // anneal
  auto* anneal_cmd = app.add_subcommand("anneal", "Optimise a FAST-ER tree by simulated annealing");
  std::string anneal_dir, anneal_out, anneal_trace, anneal_offsets;
  AnnealOptions ao;
  anneal_cmd->add_option("dataset", anneal_dir, "Training dataset directory")->required();
  anneal_cmd->add_option("-o,--output", anneal_out, "Best tree file (default stdout)");
  anneal_cmd->add_option("--trace", anneal_trace, "Cost trace CSV of the best run");
  anneal_cmd->add_option("--imax", ao.max_iterations, "Iterations per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  anneal_cmd->add_option("--runs", ao.runs, "Independent runs")->check(CLI::PositiveNumber)->capture_default_str();
  anneal_cmd->add_option("--wr", ao.weights.wr, "Repeatability weight")->capture_default_str();
  anneal_cmd->add_option("--wn", ao.weights.wn, "Corner count weight")->capture_default_str();
  anneal_cmd->add_option("--ws", ao.weights.ws, "Tree size weight")->capture_default_str();
  anneal_cmd->add_option("--alpha", ao.alpha, "Temperature decay")->capture_default_str();
  anneal_cmd->add_option("--beta", ao.beta, "Initial temperature")->capture_default_str();
  anneal_cmd->add_option("--t", ao.threshold, "Detection threshold")->check(CLI::Range(1, 255))->capture_default_str();
  anneal_cmd->add_option("--epsilon", ao.epsilon, "Match radius")->check(CLI::PositiveNumber)->capture_default_str();
  anneal_cmd->add_option("--seed", ao.seed, "Seed of the first run")->capture_default_str();
  anneal_cmd->add_option("--offsets", anneal_offsets, "Offset table file (default 7x7 patch)");
  add_jobs(anneal_cmd);

  // distill
  auto* distill_cmd = app.add_subcommand("distill", "Compile the sixteen-fold FAST-ER detector into one tree");
  std::string distill_tree, distill_out;
  std::vector<std::string> distill_images;
  DistillOptions dio;
  distill_cmd->add_option("tree", distill_tree, "FAST-ER tree file")->required();
  distill_cmd->add_option("images", distill_images, "Training PGM images")->required();
  distill_cmd->add_option("-o,--output", distill_out, "Tree file (default stdout)");
  distill_cmd->add_option("--t", dio.threshold, "Threshold")->check(CLI::Range(1, 255))->capture_default_str();
  add_jobs(distill_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (jobs == 0) jobs = jobs_fallback();

    if (*detect_cmd) {
      dc.jobs = jobs;
      if (!detect_tree.empty()) dc.tree = read_tree(detect_tree);
      const GrayImage img = read_pgm_file(detect_image);
      const auto det = build_detector(dc);
      auto kps = detect_top ? det->detect(img, detect_top, 0) : det->candidates(img, 0);
      sort_raster(kps);
      emit(detect_out, header(*detect_cmd) + format_keypoints(kps));
    } else if (*learn_cmd) {
      if (learn_images.empty() && !learn_exhaustive)
        throw UsageError("learn-tree needs training images or --exhaustive");
      const auto images = read_images(learn_images);
      RingTrainingSet ts;
      if (!images.empty()) ts = extract_training_data(images, learn_n, learn_t, learn_image_weight);
      if (learn_exhaustive) ts = augment_exhaustive(ts, learn_n, learn_low_weight);
      BuildOptions bo;
      bo.jobs = jobs;
      bo.shared_second_test = learn_shared;
      TernaryTree tree = build_tree(ts, ring_offsets(), bo);
      if (learn_shared) tree = force_shared_second_test(tree, ts);
      emit(learn_out, header(*learn_cmd) + serialize_tree(tree));
    } else if (*emit_cmd) {
      std::string src = "// generated by cornerforge " CORNERFORGE_VERSION "\n";
      src += emit_source(read_tree(emit_tree), eo);
      emit(emit_out, src);
    } else if (*data_cmd) {
      dso.pairs = parse_pair_policy(data_pairs);
      write_dataset(data_dir, make_dataset(read_pgm_file(data_base), dso), run_config(*data_cmd));
    } else if (*scene_cmd) {
      GrayImage img = make_synthetic_scene(scene_w, scene_h, scene_seed);
      if (scene_noise > 0) img = add_gaussian_noise(img, scene_noise, mix_seed(scene_seed, 1));
      write_pgm_file(scene_out, img);
    } else if (*eval_cmd) {
      const Sequence seq = load_dataset(eval_dir);
      const auto counts = parse_counts(eval_counts);
      EvalOptions opts;
      opts.epsilon = eval_eps;
      opts.jobs = jobs;
      DetectorConfig defaults;
      defaults.jobs = jobs;
      fs::create_directories(eval_out_dir);
      const std::string head = header(*eval_cmd);
      std::vector<std::pair<std::string, double>> areas;
      std::vector<std::pair<std::string, Curve>> curves;
      std::string noise_csv = "detector,sigma,repeatability\n";
      for (const auto& spec : eval_detectors) {
        const auto det = build_detector(parse_detector_spec(spec, defaults));
        Curve curve = repeatability_curve(seq, *det, counts, opts);
        write_text_file(fs::path(eval_out_dir) / ("curve_" + safe_file_stem(spec) + ".csv"),
                        head + "# detector=" + spec + "\n" + format_curve_csv(curve));
        const bool spans = counts.front() == 0 && counts.back() >= static_cast<std::size_t>(kAreaMaxCount);
        areas.emplace_back(spec, spans ? area_under_curve(curve) : std::nan(""));
        curves.emplace_back(spec, std::move(curve));
        if (!eval_noise.empty()) {
          for (const auto& p : noise_sweep(seq, *det, eval_noise_count, eval_noise, eval_noise_seed, opts)) {
            char row[64];
            std::snprintf(row, sizeof row, ",%g,%.6f\n", p.sigma, p.repeatability.value_or(0.0));
            noise_csv += spec + row;
          }
        }
      }
      const std::string auc = head + format_auc_csv(areas);
      write_text_file(fs::path(eval_out_dir) / "auc.csv", auc);
      if (!eval_noise.empty()) write_text_file(fs::path(eval_out_dir) / "noise.csv", head + noise_csv);
      if (!eval_svg.empty()) write_text_file(eval_svg, render_curves_svg(curves));
      std::cout << format_auc_csv(areas);
    } else if (*bench_cmd) {
      const auto images = read_images(bench_images);
      std::string csv = header(*bench_cmd) + "algo,mpix_per_s,median_seconds,pixels\n";
      double pixels = 0;
      for (const auto& img : images) pixels += static_cast<double>(img.width()) * img.height();
      if (!images.empty()) {
        std::optional<TernaryTree> tree;
        if (!bench_tree.empty()) tree = read_tree(bench_tree);
        for (const auto& algo : bench_algos) {
          DetectorConfig c;
          c.algo = algo;
          c.n = bench_n;
          c.threshold = bench_t;
          c.tree = tree;
          const auto det = build_detector(c);
          std::size_t sink = 0;
          auto pass = [&] {
            for (const auto& img : images) sink += det->candidates(img, 0).size();
          };
          for (int i = 0; i < bench_warmup; ++i) pass();
          std::vector<double> secs;
          for (int i = 0; i < bench_reps; ++i) {
            const auto start = std::chrono::steady_clock::now();
            pass();
            secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
          }
          std::sort(secs.begin(), secs.end());
          const double median = 0.5 * (secs[(secs.size() - 1) / 2] + secs[secs.size() / 2]);
          char row[160];
          std::snprintf(row, sizeof row, "%s,%.3f,%.6f,%.0f\n", algo.c_str(), pixels / 1e6 / median, median, pixels);
          csv += row;
          (void)sink;
        }
      }
      emit(bench_out, csv);
    } else if (*anneal_cmd) {
      ao.jobs = jobs;
      if (!anneal_offsets.empty()) ao.offsets = normalize_faster_offsets(parse_offset_table(read_text_file(anneal_offsets)));
      const Sequence training = load_dataset(anneal_dir);
      const MultiRunResult result = multi_run(training, ao);
      std::string summary = header(*anneal_cmd);
      char line[160];
      for (const auto& r : result.runs) {
        std::snprintf(line, sizeof line, "# run seed=%llu initial_cost=%.6g best_cost=%.6g nodes=%zu\n",
                      static_cast<unsigned long long>(r.seed), r.initial_cost, r.best_cost, r.best.size());
        summary += line;
      }
      std::snprintf(line, sizeof line, "# cost min=%.6g median=%.6g max=%.6g\n", result.min_cost, result.median_cost,
                    result.max_cost);
      summary += line;
      emit(anneal_out, summary + serialize_faster_tree(result.best().best));
      if (!anneal_trace.empty()) write_text_file(anneal_trace, header(*anneal_cmd) + format_trace_csv(result.best().trace));
    } else if (*distill_cmd) {
      const FasterTree tree = deserialize_faster_tree(read_text_file(distill_tree));
      const auto images = read_images(distill_images);
      dio.build.jobs = jobs;
      const TernaryTree out = distill(tree, images, dio);
      std::string text = header(*distill_cmd);
      char line[96];
      for (std::size_t i = 0; i < images.size(); ++i) {
        std::snprintf(line, sizeof line, "# agreement image=%zu %.6f\n", i,
                      distill_agreement(out, tree, images[i], dio.threshold, jobs));
        text += line;
      }
      emit(distill_out, text + serialize_tree(out));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
