#include "survmult/forest_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "survmult/errors.hpp"
#include "text_util.hpp"

namespace survmult {

namespace {

constexpr const char* kMagic = "survmult-forest";
constexpr int kVersion = 1;

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line as a token stream.
  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty()) {
        return std::istringstream(line);
      }
    }
    throw ParseError(std::string("unexpected end of forest file, expected ") + what,
                     line_no_);
  }

  std::size_t line() const { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double read_double(std::istringstream& s, std::size_t line, const char* what) {
  std::string token;
  if (!(s >> token)) {
    throw ParseError(std::string("missing value for ") + what, line);
  }
  double v = 0.0;
  if (!detail::parse_double(token, v)) {
    throw ParseError(std::string("malformed value for ") + what + ": " + token, line);
  }
  return v;
}

std::size_t read_size(std::istringstream& s, std::size_t line, const char* what) {
  const double v = read_double(s, line, what);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ParseError(std::string("expected a non-negative integer for ") + what, line);
  }
  return static_cast<std::size_t>(v);
}

void write_step_function(std::ostream& out, const StepFunction& fn) {
  out << detail::format_double(fn.initial_value()) << ' ' << fn.jump_count();
  for (std::size_t i = 0; i < fn.jump_count(); ++i) {
    out << ' ' << detail::format_double(fn.jump_times()[i]) << ' '
        << detail::format_double(fn.values()[i]);
  }
}

StepFunction read_step_function(std::istringstream& s, std::size_t line) {
  const double initial = read_double(s, line, "step-function initial value");
  const std::size_t jumps = read_size(s, line, "step-function jump count");
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(jumps);
  values.reserve(jumps);
  for (std::size_t i = 0; i < jumps; ++i) {
    times.push_back(read_double(s, line, "step-function jump time"));
    values.push_back(read_double(s, line, "step-function value"));
  }
  return StepFunction(initial, std::move(times), std::move(values));
}

}  // namespace

void save_forest(std::ostream& out, const SurvivalForest& forest) {
  const auto& hp = forest.hyperparams();
  out << kMagic << ' ' << kVersion << '\n';
  out << "hyperparams " << hp.ntree << ' ' << hp.mtry << ' ' << hp.nodesize << ' '
      << hp.nodedepth << ' ' << to_string(hp.splitrule) << ' ' << hp.nsplit << '\n';
  out << "seed " << forest.seed() << '\n';
  out << "features " << forest.n_features() << '\n';
  out << "grid " << forest.event_time_grid().size();
  for (double t : forest.event_time_grid()) {
    out << ' ' << detail::format_double(t);
  }
  out << '\n';
  for (std::size_t k = 0; k < forest.trees().size(); ++k) {
    const auto& tree = forest.trees()[k];
    out << "tree " << k << " nodes " << tree.nodes().size() << " leaves "
        << tree.leaves().size() << " depth " << tree.depth() << '\n';
    for (const auto& node : tree.nodes()) {
      if (node.leaf >= 0) {
        out << "leafref " << node.leaf << '\n';
      } else {
        out << "split " << node.feature << ' '
            << detail::format_double(node.threshold) << ' ' << node.left << ' '
            << node.right << '\n';
      }
    }
    for (const auto& leaf : tree.leaves()) {
      out << "leaf " << leaf.member_count << ' ';
      write_step_function(out, leaf.chf);
      out << '\n';
    }
  }
}

void save_forest(const std::filesystem::path& path, const SurvivalForest& forest) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  save_forest(out, forest);
}

SurvivalForest load_forest(std::istream& in) {
  LineReader reader(in);

  auto header = reader.next("header");
  std::string magic;
  int version = 0;
  header >> magic >> version;
  if (magic != kMagic || version != kVersion) {
    throw ParseError("not a survmult forest file (or unsupported version)",
                     reader.line());
  }

  auto hp_line = reader.next("hyperparams");
  std::string tag;
  hp_line >> tag;
  if (tag != "hyperparams") {
    throw ParseError("expected hyperparams line", reader.line());
  }
  HyperParams hp;
  hp.ntree = read_size(hp_line, reader.line(), "ntree");
  hp.mtry = read_size(hp_line, reader.line(), "mtry");
  hp.nodesize = read_size(hp_line, reader.line(), "nodesize");
  hp.nodedepth = read_size(hp_line, reader.line(), "nodedepth");
  std::string rule;
  hp_line >> rule;
  const auto parsed_rule = split_rule_from_string(rule);
  if (!parsed_rule) {
    throw ParseError("unknown split rule: " + rule, reader.line());
  }
  hp.splitrule = *parsed_rule;
  hp.nsplit = read_size(hp_line, reader.line(), "nsplit");

  auto seed_line = reader.next("seed");
  seed_line >> tag;
  std::uint64_t seed = 0;
  if (tag != "seed" || !(seed_line >> seed)) {
    throw ParseError("expected seed line", reader.line());
  }

  auto feat_line = reader.next("features");
  feat_line >> tag;
  if (tag != "features") {
    throw ParseError("expected features line", reader.line());
  }
  const std::size_t n_features = read_size(feat_line, reader.line(), "feature count");

  auto grid_line = reader.next("grid");
  grid_line >> tag;
  if (tag != "grid") {
    throw ParseError("expected grid line", reader.line());
  }
  const std::size_t grid_size = read_size(grid_line, reader.line(), "grid size");
  std::vector<double> grid;
  grid.reserve(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    grid.push_back(read_double(grid_line, reader.line(), "grid time"));
  }

  std::vector<SurvivalTree> trees;
  trees.reserve(hp.ntree);
  for (std::size_t k = 0; k < hp.ntree; ++k) {
    auto tree_line = reader.next("tree header");
    std::string nodes_tag;
    std::string leaves_tag;
    std::string depth_tag;
    std::size_t index = 0;
    tree_line >> tag >> index;
    if (tag != "tree" || index != k) {
      throw ParseError("expected tree " + std::to_string(k), reader.line());
    }
    tree_line >> nodes_tag;
    const std::size_t n_nodes = read_size(tree_line, reader.line(), "node count");
    tree_line >> leaves_tag;
    const std::size_t n_leaves = read_size(tree_line, reader.line(), "leaf count");
    tree_line >> depth_tag;
    const std::size_t depth = read_size(tree_line, reader.line(), "depth");
    if (nodes_tag != "nodes" || leaves_tag != "leaves" || depth_tag != "depth") {
      throw ParseError("malformed tree header", reader.line());
    }

    std::vector<SurvivalTree::Node> nodes;
    nodes.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      auto node_line = reader.next("node");
      node_line >> tag;
      SurvivalTree::Node node;
      if (tag == "leafref") {
        node.leaf = static_cast<std::int64_t>(
            read_size(node_line, reader.line(), "leaf index"));
      } else if (tag == "split") {
        node.feature = read_size(node_line, reader.line(), "split feature");
        node.threshold = read_double(node_line, reader.line(), "split threshold");
        node.left = read_size(node_line, reader.line(), "left child");
        node.right = read_size(node_line, reader.line(), "right child");
        node.leaf = -1;
      } else {
        throw ParseError("expected split or leafref node, found " + tag, reader.line());
      }
      nodes.push_back(node);
    }

    std::vector<SurvivalTree::Leaf> leaves;
    leaves.reserve(n_leaves);
    for (std::size_t i = 0; i < n_leaves; ++i) {
      auto leaf_line = reader.next("leaf");
      leaf_line >> tag;
      if (tag != "leaf") {
        throw ParseError("expected leaf line", reader.line());
      }
      SurvivalTree::Leaf leaf;
      leaf.member_count = read_size(leaf_line, reader.line(), "leaf member count");
      leaf.chf = read_step_function(leaf_line, reader.line());
      leaves.push_back(std::move(leaf));
    }
    trees.emplace_back(std::move(nodes), std::move(leaves), depth);
  }

  return SurvivalForest(std::move(trees), hp, seed, std::move(grid), n_features);
}

SurvivalForest load_forest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }
  return load_forest(in);
}

}  // namespace survmult
