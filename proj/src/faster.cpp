#include "cornerforge/faster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cornerforge/error.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/synthetic.hpp"

namespace cornerforge {

OffsetTable default_faster_offsets() {
  OffsetTable t;
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx)
      if (dx != 0 || dy != 0) t.push_back({dx, dy});
  return t;
}

OffsetTable normalize_faster_offsets(OffsetTable table) {
  std::set<Offset> seen;
  for (const Offset& o : table) {
    if (o == Offset{0, 0}) throw DataError("offset table contains the centre pixel");
    if (!seen.insert(o).second)
      throw DataError("duplicate offset (" + std::to_string(o.dx) + ", " + std::to_string(o.dy) + ")");
  }
  const auto it = std::ranges::find(table, Offset{-1, 4});
  if (it != table.end()) std::rotate(table.begin(), it, it + 1);
  return table;
}

OffsetTable parse_offset_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  OffsetTable table;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Offset o;
    if (!(ls >> o.dx)) continue;
    std::string rest;
    if (!(ls >> o.dy) || (ls >> rest)) throw ParseError(line_no, "expected 'dx dy'");
    table.push_back(o);
  }
  if (table.empty()) throw DataError("offset table is empty");
  return normalize_faster_offsets(std::move(table));
}

OffsetTable symmetric_closure(const OffsetTable& table) {
  OffsetTable out = table;
  std::set<Offset> seen(table.begin(), table.end());
  for (const Offset& o : table)
    for (const GridSymmetry& g : GridSymmetry::all())
      if (const Offset m = g.apply(o); seen.insert(m).second) out.push_back(m);
  return out;
}

bool satisfies_s_leaf_constraint(const TernaryTree& tree) {
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) continue;
    const auto& s = tree.nodes()[n.branch(PixelState::similar)];
    if (s.is_leaf() && s.leaf_class != 0) return false;
  }
  return true;
}

FasterTree::FasterTree(TernaryTree tree) : tree_(std::move(tree)) {
  if (!satisfies_s_leaf_constraint(tree_))
    throw DataError("tree has a corner leaf on a similar branch");
}

std::string serialize_faster_tree(const FasterTree& tree) { return serialize_tree(tree.tree()); }

FasterTree deserialize_faster_tree(const std::string& text) { return FasterTree(deserialize_tree(text)); }

SixteenFold::SixteenFold(const TernaryTree& tree, std::ptrdiff_t stride) {
  for (const GridSymmetry& g : GridSymmetry::all())
    for (bool inverted : {false, true}) variants_.emplace_back(tree, stride, g, inverted);
  for (const Offset& o : symmetric_closure(tree.offsets())) deltas_.push_back(o.dy * stride + o.dx);
}

std::vector<Point> detect_sixteenfold(const TernaryTree& tree, const GrayImage& img, int threshold, int jobs) {
  const SixteenFold sf(tree, img.stride());
  const int m = chebyshev_radius(tree.offsets());
  return parallel_strips<Point>(m, img.height() - m, jobs, [&](int y0, int y1, std::vector<Point>& out) {
    for (int y = y0; y < y1; ++y) {
      const std::uint8_t* row = img.row(y);
      for (int x = m; x < img.width() - m; ++x)
        if (sf.classify(row + x, threshold)) out.push_back({x, y});
    }
  });
}

std::vector<std::uint8_t> apply_sixteenfold(const TernaryTree& tree, const GrayImage& img, int threshold,
                                            int jobs) {
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.height()), 0);
  for (const Point& p : detect_sixteenfold(tree, img, threshold, jobs))
    flags[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(img.width()) + static_cast<std::size_t>(p.x)] = 1;
  return flags;
}

int sixteenfold_score(const SixteenFold& detector, const GrayImage& img, Point p) {
  // Every tested state is constant while t stays between consecutive values
  // of |I(p + o) - I(p)| + 1, so one evaluation per interval is exact even
  // for trees that are not monotone in t.
  const std::uint8_t* px = img.row(p.y) + p.x;
  std::vector<int> starts{1};
  for (std::ptrdiff_t d : detector.deltas()) {
    const int b = std::abs(static_cast<int>(px[d]) - static_cast<int>(px[0])) + 1;
    if (b >= 2 && b <= 255) starts.push_back(b);
  }
  std::ranges::sort(starts);
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  for (std::size_t k = starts.size(); k-- > 0;)
    if (detector.classify(px, starts[k])) return k + 1 < starts.size() ? starts[k + 1] - 1 : 255;
  throw NotACornerError("pixel does not fire at any threshold");
}

double faster_cost(double repeatability, std::span<const double> corners_per_frame, std::size_t tree_size,
                   const CostWeights& weights) {
  if (!(repeatability > 0)) return std::numeric_limits<double>::infinity();
  const double r = weights.wr / repeatability;
  double mean = 0.0;
  for (double d : corners_per_frame) mean += (d / weights.wn) * (d / weights.wn);
  if (!corners_per_frame.empty()) mean /= static_cast<double>(corners_per_frame.size());
  const double s = static_cast<double>(tree_size) / weights.ws;
  return (1 + r * r) * (1 + mean) * (1 + s * s);
}

double anneal_temperature(long long iteration, long long max_iterations, double alpha, double beta) {
  return beta * std::exp(-alpha * static_cast<double>(iteration) / static_cast<double>(max_iterations));
}

double acceptance_probability(double previous, double proposed, double temperature) {
  if (std::isinf(proposed)) return std::isinf(previous) ? 1.0 : 0.0;
  if (proposed <= previous) return 1.0;
  return std::exp((previous - proposed) / temperature);
}

std::string to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::grow: return "grow";
    case MutationKind::flip: return "flip";
    case MutationKind::randomize_offset: return "randomize-offset";
    case MutationKind::collapse: return "collapse";
    case MutationKind::copy_branch: return "copy-branch";
  }
  return "?";
}

namespace {

int random_below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

bool random_class(std::mt19937_64& rng) { return random_below(rng, 2) == 1; }

}  // namespace

TernaryTree random_depth1_tree(const OffsetTable& offsets, std::mt19937_64& rng) {
  const int feature = random_below(rng, offsets.size());
  const bool b = random_class(rng);
  const bool d = random_class(rng);
  return TernaryTree::node(feature, TernaryTree::leaf(b, offsets), TernaryTree::leaf(false, offsets),
                           TernaryTree::leaf(d, offsets));
}

Mutation mutate(const TernaryTree& tree, std::mt19937_64& rng, std::optional<MutationKind> forced) {
  const auto& nodes = tree.nodes();
  const std::size_t i = static_cast<std::size_t>(random_below(rng, nodes.size()));
  const auto links = tree.parents();
  const bool on_s_branch = links[i].parent >= 0 && links[i].branch == PixelState::similar;
  const auto& n = nodes[i];

  if (n.is_leaf()) {
    MutationKind kind = (on_s_branch || random_below(rng, 2) == 0) ? MutationKind::grow : MutationKind::flip;
    if (forced == MutationKind::grow || (forced == MutationKind::flip && !on_s_branch)) kind = *forced;
    if (kind == MutationKind::flip) return {tree.with_leaf_class(i, n.leaf_class == 0), kind, i};
    return {tree.replace_subtree(i, random_depth1_tree(tree.offsets(), rng)), kind, i};
  }

  static constexpr MutationKind kNodeKinds[] = {MutationKind::randomize_offset, MutationKind::collapse,
                                                MutationKind::copy_branch};
  MutationKind kind = kNodeKinds[random_below(rng, 3)];
  if (forced && std::ranges::find(kNodeKinds, *forced) != std::end(kNodeKinds)) kind = *forced;
  switch (kind) {
    case MutationKind::randomize_offset:
      return {tree.with_feature(i, random_below(rng, tree.offsets().size())), kind, i};
    case MutationKind::collapse: {
      const bool corner = random_class(rng) && !on_s_branch;
      return {tree.replace_subtree(i, TernaryTree::leaf(corner, tree.offsets())), kind, i};
    }
    default: {
      const int dst = random_below(rng, 3);
      const int src = (dst + 1 + random_below(rng, 2)) % 3;
      TernaryTree copy = tree.subtree(n.child[static_cast<std::size_t>(src)]);
      if (dst == static_cast<int>(PixelState::similar) && copy.is_leaf_tree())
        copy = TernaryTree::leaf(false, tree.offsets());
      return {tree.replace_subtree(n.child[static_cast<std::size_t>(dst)], copy), MutationKind::copy_branch, i};
    }
  }
}

TrainingScore evaluate_tree(const TernaryTree& tree, const Sequence& training, const AnnealOptions& options) {
  TrainingScore score;
  std::vector<std::vector<Keypoint>> dets(training.frames.size());
  for (std::size_t f = 0; f < training.frames.size(); ++f) {
    for (const Point& p : detect_sixteenfold(tree, training.frames[f], options.threshold, options.jobs))
      dets[f].push_back({p.x, p.y, 0.0});
    score.corners_per_frame.push_back(static_cast<double>(dets[f].size()));
  }
  EvalOptions eval;
  eval.epsilon = options.epsilon;
  eval.jobs = 1;
  score.repeatability = evaluate_detections(training, dets, eval).repeatability;
  score.cost = faster_cost(score.repeatability.value_or(0.0), score.corners_per_frame, tree.size(), options.weights);
  return score;
}

AnnealResult anneal(const Sequence& training, const AnnealOptions& options, std::uint64_t seed) {
  if (training.frames.empty() || training.pairs.empty()) throw PreconditionError("anneal: empty training set");
  if (options.max_iterations < 1) throw PreconditionError("anneal: max_iterations must be >= 1");
  training.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  AnnealResult result;
  result.seed = seed;
  TernaryTree current = random_depth1_tree(options.offsets, rng);
  double current_cost = evaluate_tree(current, training, options).cost;
  result.initial_cost = current_cost;
  result.best = FasterTree(current);
  result.best_cost = current_cost;
  result.trace.push_back({0, current_cost, current_cost, options.beta});

  for (long long it = 1; it <= options.max_iterations; ++it) {
    const double temperature = anneal_temperature(it, options.max_iterations, options.alpha, options.beta);
    Mutation m = mutate(current, rng);
    ++result.mutation_counts[static_cast<std::size_t>(m.kind)];
    if (!satisfies_s_leaf_constraint(m.tree)) {
      result.constraint_held = false;
      continue;
    }
    const double cost = evaluate_tree(m.tree, training, options).cost;
    if (unit(rng) < acceptance_probability(current_cost, cost, temperature)) {
      current = std::move(m.tree);
      current_cost = cost;
    }
    if (current_cost < result.best_cost) {
      result.best = FasterTree(current);
      result.best_cost = current_cost;
    }
    result.trace.push_back({it, current_cost, result.best_cost, temperature});
  }
  return result;
}

MultiRunResult multi_run(const Sequence& training, const AnnealOptions& options) {
  if (options.runs < 1) throw PreconditionError("multi_run: runs must be >= 1");
  MultiRunResult out;
  out.runs.resize(static_cast<std::size_t>(options.runs));
  AnnealOptions inner = options;
  inner.jobs = 1;
  parallel_for(out.runs.size(), options.jobs, [&](std::size_t k) {
    const std::uint64_t seed = k == 0 ? options.seed : mix_seed(options.seed, k);
    out.runs[k] = anneal(training, inner, seed);
  });
  std::vector<double> costs;
  for (std::size_t k = 0; k < out.runs.size(); ++k) {
    costs.push_back(out.runs[k].best_cost);
    if (out.runs[k].best_cost < out.runs[out.best_run].best_cost) out.best_run = k;
  }
  std::ranges::sort(costs);
  out.min_cost = costs.front();
  out.max_cost = costs.back();
  const std::size_t mid = costs.size() / 2;
  out.median_cost = costs.size() % 2 ? costs[mid] : 0.5 * (costs[mid - 1] + costs[mid]);
  return out;
}

std::string format_trace_csv(std::span<const TraceRow> trace) {
  std::ostringstream os;
  os.precision(12);
  os << "iteration,cost,best_cost,temperature\n";
  for (const auto& r : trace) os << r.iteration << ',' << r.cost << ',' << r.best_cost << ',' << r.temperature << '\n';
  return os.str();
}

TernaryTree distill(const FasterTree& tree, std::span<const GrayImage> images, const DistillOptions& options) {
  const OffsetTable features = symmetric_closure(tree.offsets());
  if (static_cast<int>(features.size()) > PatchTrainingSet::kMaxFeatures)
    throw PreconditionError("distill: symmetric offset closure exceeds " +
                            std::to_string(PatchTrainingSet::kMaxFeatures) + " features");
  const int t = options.threshold;
  const int m = chebyshev_radius(features);
  PatchTrainingSet ts(static_cast<int>(features.size()));
  for (const GrayImage& img : images) {
    const SixteenFold sf(tree.tree(), img.stride());
    std::vector<std::ptrdiff_t> offs;
    for (const Offset& o : features) offs.push_back(static_cast<std::ptrdiff_t>(o.dy) * img.stride() + o.dx);
    for (int y = m; y < img.height() - m; ++y) {
      const std::uint8_t* row = img.row(y);
      for (int x = m; x < img.width() - m; ++x) {
        const std::uint8_t* p = row + x;
        PatchTrainingSet::Key key{};
        for (std::size_t f = 0; f < offs.size(); ++f)
          PatchTrainingSet::set_state(key, static_cast<int>(f), pixel_state(*p, p[offs[f]], t));
        ts.add(key, sf.classify(p, t), 1);
      }
    }
    ts.consolidate();
  }
  if (ts.corner_weight() == 0 || ts.non_corner_weight() == 0)
    return TernaryTree::leaf(ts.corner_weight() > 0, features);
  return build_tree(ts, features, options.build);
}

double distill_agreement(const TernaryTree& distilled, const FasterTree& tree, const GrayImage& img, int threshold,
                         int jobs) {
  const int m = std::max(chebyshev_radius(distilled.offsets()), chebyshev_radius(tree.offsets()));
  const CompiledTree single(distilled, img.stride());
  const SixteenFold sf(tree.tree(), img.stride());
  const auto disagreements = parallel_strips<Point>(m, img.height() - m, jobs, [&](int y0, int y1, std::vector<Point>& out) {
    for (int y = y0; y < y1; ++y)
      for (int x = m; x < img.width() - m; ++x) {
        const std::uint8_t* p = img.row(y) + x;
        if (single.classify(p, threshold) != sf.classify(p, threshold)) out.push_back({x, y});
      }
  });
  const double total = static_cast<double>(img.width() - 2 * m) * static_cast<double>(img.height() - 2 * m);
  if (total <= 0) return 1.0;
  return 1.0 - static_cast<double>(disagreements.size()) / total;
}

}  // namespace cornerforge
