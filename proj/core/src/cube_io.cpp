#include "survmult/cube_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "survmult/errors.hpp"
#include "text_util.hpp"

namespace survmult {

namespace {

constexpr const char* kMagic = "survmult-cube";
constexpr int kVersion = 1;

std::string orientation_name(Orientation o) {
  return o == Orientation::kLowerIsBetter ? "lower" : "higher";
}

}  // namespace

void write_cube(std::ostream& out, const PredictionCube& cube,
                const std::string& config_hash) {
  cube.validate();
  out << kMagic << ' ' << kVersion << '\n';
  if (!config_hash.empty()) {
    out << "# config=" << config_hash << '\n';
  }
  out << "models " << cube.n_models << '\n';
  out << "observations " << cube.n_obs << '\n';
  const auto& front = cube.performances.front();
  out << "metric " << to_string(front.kind) << ' ' << orientation_name(front.orientation)
      << " horizon "
      << (front.horizon ? detail::format_double(*front.horizon) : std::string("none"))
      << '\n';
  out << "reference " << cube.reference_index << '\n';
  for (std::size_t k = 0; k < cube.n_models; ++k) {
    out << "model " << k << ' ' << detail::format_double(cube.performances[k].value)
        << ' '
        << (cube.aux_c_index.empty() ? std::string("nan")
                                     : detail::format_double(cube.aux_c_index[k]))
        << ' ' << cube.model_ids[k] << '\n';
  }
  for (std::size_t k = 0; k < cube.n_models; ++k) {
    out << "risks " << k;
    for (std::size_t i = 0; i < cube.n_obs; ++i) {
      out << ' ' << detail::format_double(cube.risk(k, i));
    }
    out << '\n';
  }
}

void write_cube(const std::filesystem::path& path, const PredictionCube& cube,
                const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_cube(out, cube, config_hash);
}

namespace {

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line[0] != '#') {
        return std::istringstream(line);
      }
    }
    throw ParseError(std::string("unexpected end of cube file, expected ") + what,
                     line_no_);
  }

  std::size_t line() const { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t expect_size(std::istringstream& s, const char* tag, std::size_t line) {
  std::string found;
  std::size_t value = 0;
  if (!(s >> found) || found != tag || !(s >> value)) {
    throw ParseError(std::string("expected `") + tag + " <count>` line", line);
  }
  return value;
}

}  // namespace

PredictionCube read_cube(std::istream& in) {
  LineReader reader(in);

  auto header = reader.next("header");
  std::string magic;
  int version = 0;
  header >> magic >> version;
  if (magic != kMagic || version != kVersion) {
    throw ParseError("not a survmult cube file (or unsupported version)", reader.line());
  }

  PredictionCube cube;
  {
    auto line = reader.next("models");
    cube.n_models = expect_size(line, "models", reader.line());
  }
  {
    auto line = reader.next("observations");
    cube.n_obs = expect_size(line, "observations", reader.line());
  }

  MetricKind kind = MetricKind::kBrierAtT;
  Orientation orientation = Orientation::kLowerIsBetter;
  std::optional<double> horizon;
  {
    auto line = reader.next("metric");
    std::string tag;
    std::string kind_name;
    std::string orient_name;
    std::string horizon_tag;
    std::string horizon_value;
    if (!(line >> tag >> kind_name >> orient_name >> horizon_tag >> horizon_value) ||
        tag != "metric" || horizon_tag != "horizon") {
      throw ParseError("malformed metric line", reader.line());
    }
    const auto parsed = metric_kind_from_string(kind_name);
    if (!parsed) {
      throw ParseError("unknown metric kind: " + kind_name, reader.line());
    }
    kind = *parsed;
    if (orient_name == "lower") {
      orientation = Orientation::kLowerIsBetter;
    } else if (orient_name == "higher") {
      orientation = Orientation::kHigherIsBetter;
    } else {
      throw ParseError("unknown orientation: " + orient_name, reader.line());
    }
    if (horizon_value != "none") {
      double h = 0.0;
      if (!detail::parse_double(horizon_value, h)) {
        throw ParseError("malformed horizon: " + horizon_value, reader.line());
      }
      horizon = h;
    }
  }

  {
    auto line = reader.next("reference");
    cube.reference_index = expect_size(line, "reference", reader.line());
  }

  cube.performances.reserve(cube.n_models);
  cube.model_ids.reserve(cube.n_models);
  bool any_aux = false;
  std::vector<double> aux(cube.n_models, std::nan(""));
  for (std::size_t k = 0; k < cube.n_models; ++k) {
    auto line = reader.next("model");
    std::string tag;
    std::size_t index = 0;
    std::string value_token;
    std::string aux_token;
    std::string id;
    if (!(line >> tag >> index >> value_token >> aux_token >> id) || tag != "model" ||
        index != k) {
      throw ParseError("expected model " + std::to_string(k) + " line", reader.line());
    }
    double value = 0.0;
    if (!detail::parse_double(value_token, value)) {
      throw ParseError("malformed performance value: " + value_token, reader.line());
    }
    cube.performances.push_back({value, kind, orientation, horizon});
    if (aux_token != "nan") {
      if (!detail::parse_double(aux_token, aux[k])) {
        throw ParseError("malformed companion metric value: " + aux_token, reader.line());
      }
      any_aux = true;
    }
    cube.model_ids.push_back(id);
  }
  if (any_aux) {
    cube.aux_c_index = std::move(aux);
  }

  cube.risks.resize(cube.n_models * cube.n_obs);
  for (std::size_t k = 0; k < cube.n_models; ++k) {
    auto line = reader.next("risks");
    std::string tag;
    std::size_t index = 0;
    if (!(line >> tag >> index) || tag != "risks" || index != k) {
      throw ParseError("expected risks " + std::to_string(k) + " line", reader.line());
    }
    for (std::size_t i = 0; i < cube.n_obs; ++i) {
      std::string token;
      if (!(line >> token)) {
        throw ParseError("risk row " + std::to_string(k) + " is too short",
                         reader.line());
      }
      double v = 0.0;
      if (!detail::parse_double(token, v)) {
        throw ParseError("malformed risk value: " + token, reader.line());
      }
      cube.risks[k * cube.n_obs + i] = v;
    }
  }

  cube.validate();
  return cube;
}

PredictionCube read_cube(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }
  return read_cube(in);
}

}  // namespace survmult
