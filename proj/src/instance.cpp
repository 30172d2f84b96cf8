#include "paccp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace paccp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void parse_fail(int line_no, const std::string& detail) {
  throw ParseError("line " + std::to_string(line_no) + ": " + detail);
}

// Strips comments and surrounding whitespace; returns false for blank lines.
bool clean_line(std::string& line) {
  if (auto pos = line.find_first_of("\r"); pos != std::string::npos)
    line.erase(pos);
  auto begin = line.find_first_not_of(" \t");
  if (begin == std::string::npos) return false;
  auto end = line.find_last_not_of(" \t");
  line = line.substr(begin, end - begin + 1);
  return !line.empty();
}

}  // namespace

Instance::Instance(std::string name, int n, int m, std::vector<double> d,
                   bool same_locations)
    : name_(std::move(name)),
      n_(n),
      m_(m),
      d_(std::move(d)),
      same_locations_(same_locations) {
  if (n_ <= 0 || m_ <= 0)
    throw std::invalid_argument("instance dimensions must be positive");
  if (d_.size() != static_cast<size_t>(n_) * m_)
    throw std::invalid_argument("distance matrix size mismatch");
  for (double v : d_)
    if (!(v >= 0.0))
      throw std::invalid_argument("negative or NaN distance in instance");
  if (same_locations_) {
    if (n_ != m_)
      throw std::invalid_argument("same_locations requires n == m");
    for (int i = 0; i < n_; ++i)
      if (d_[static_cast<size_t>(i) * m_ + i] != 0.0)
        throw std::invalid_argument("same_locations requires zero diagonal");
  }
}

bool Instance::all_integral() const {
  for (double v : d_)
    if (std::rint(v) != v) return false;
  return true;
}

GraphSpec parse_pmed(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  GraphSpec spec;
  int line_no = 0;
  long long num_edges = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!clean_line(line)) continue;
    std::istringstream fields(line);
    if (num_edges < 0) {
      // Header: n |E| p.
      if (!(fields >> spec.n >> num_edges >> spec.p) || spec.n <= 0 ||
          num_edges < 0 || spec.p <= 0)
        parse_fail(line_no, "expected header \"n |E| p\"");
      std::string extra;
      if (fields >> extra) parse_fail(line_no, "trailing data after header");
      continue;
    }
    GraphSpec::Edge e;
    if (!(fields >> e.u >> e.v >> e.w))
      parse_fail(line_no, "expected edge line \"u v w\"");
    std::string extra;
    if (fields >> extra) parse_fail(line_no, "trailing data after edge");
    if (e.u < 1 || e.u > spec.n || e.v < 1 || e.v > spec.n)
      parse_fail(line_no, "vertex id out of range");
    if (e.w < 0) parse_fail(line_no, "negative edge weight");
    spec.edges.push_back(e);
  }

  if (num_edges < 0) throw ParseError("empty p-median file");
  if (static_cast<long long>(spec.edges.size()) != num_edges)
    throw ParseError("edge count mismatch: header says " +
                     std::to_string(num_edges) + ", file has " +
                     std::to_string(spec.edges.size()));
  return spec;
}

CoordSpec parse_tsplib(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CoordSpec spec;
  int line_no = 0;
  bool in_coords = false;
  bool have_dimension = false;
  std::string weight_type;

  while (std::getline(in, line)) {
    ++line_no;
    if (!clean_line(line)) continue;

    if (!in_coords) {
      if (line == "NODE_COORD_SECTION") {
        if (!have_dimension)
          parse_fail(line_no, "NODE_COORD_SECTION before DIMENSION");
        if (weight_type != "EUC_2D" && weight_type != "ATT")
          parse_fail(line_no, "unsupported EDGE_WEIGHT_TYPE \"" + weight_type +
                                  "\" (need EUC_2D or ATT)");
        in_coords = true;
        continue;
      }
      // Header lines are "KEY : value" (the colon may touch the key).
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;  // TYPE-less banner lines
      std::string key = line.substr(0, colon);
      std::string value = line.substr(colon + 1);
      clean_line(key);
      clean_line(value);
      if (key == "NAME") {
        spec.name = value;
      } else if (key == "DIMENSION") {
        try {
          spec.dimension = std::stoi(value);
        } catch (const std::exception&) {
          parse_fail(line_no, "bad DIMENSION value \"" + value + "\"");
        }
        if (spec.dimension < 1) parse_fail(line_no, "DIMENSION must be >= 1");
        have_dimension = true;
      } else if (key == "EDGE_WEIGHT_TYPE") {
        weight_type = value;
      }
      continue;
    }

    if (line == "EOF") break;
    std::istringstream fields(line);
    int id;
    double x, y;
    if (!(fields >> id >> x >> y))
      parse_fail(line_no, "expected coordinate line \"id x y\"");
    spec.coords.emplace_back(x, y);
  }

  if (!in_coords) throw ParseError("missing NODE_COORD_SECTION");
  if (static_cast<int>(spec.coords.size()) != spec.dimension)
    throw ParseError("coordinate count " + std::to_string(spec.coords.size()) +
                     " does not match DIMENSION " +
                     std::to_string(spec.dimension));
  return spec;
}

Instance build_graph_instance(const GraphSpec& spec, const std::string& name) {
  const int n = spec.n;
  std::vector<double> d(static_cast<size_t>(n) * n, kInf);
  for (int i = 0; i < n; ++i) d[static_cast<size_t>(i) * n + i] = 0.0;
  for (const auto& e : spec.edges) {
    const int u = e.u - 1, v = e.v - 1;
    const double w = static_cast<double>(e.w);
    // Keep the lightest parallel edge.
    double& duv = d[static_cast<size_t>(u) * n + v];
    double& dvu = d[static_cast<size_t>(v) * n + u];
    duv = std::min(duv, w);
    dvu = std::min(dvu, w);
  }

  // Floyd-Warshall; cubic cost is fine for the benchmark sizes (n <= 900).
  for (int k = 0; k < n; ++k) {
    const double* dk = &d[static_cast<size_t>(k) * n];
    for (int i = 0; i < n; ++i) {
      double* di = &d[static_cast<size_t>(i) * n];
      const double dik = di[k];
      if (dik == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = dik + dk[j];
        if (via < di[j]) di[j] = via;
      }
    }
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[static_cast<size_t>(i) * n + j] == kInf)
        throw std::runtime_error("unreachable pair (" + std::to_string(i + 1) +
                                 ", " + std::to_string(j + 1) +
                                 "): graph is disconnected");

  return Instance(name, n, n, std::move(d), /*same_locations=*/true);
}

Instance build_euclidean_instance(const CoordSpec& spec) {
  const int n = spec.dimension;
  if (n < 2) throw std::invalid_argument("need at least 2 coordinates");
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = spec.coords[i].first - spec.coords[j].first;
      const double dy = spec.coords[i].second - spec.coords[j].second;
      const double dist = std::sqrt(dx * dx + dy * dy);
      d[static_cast<size_t>(i) * n + j] = dist;
      d[static_cast<size_t>(j) * n + i] = dist;
    }
  }
  return Instance(spec.name.empty() ? "tsplib" : spec.name, n, n, std::move(d),
                  /*same_locations=*/true);
}

std::pair<Instance, int> load_instance_file(const std::string& path,
                                            const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  if (format == "pmed") {
    GraphSpec spec = parse_pmed(text);
    // Name the instance after the file stem.
    auto slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos)
      stem = stem.substr(0, dot);
    return {build_graph_instance(spec, stem), spec.p};
  }
  if (format == "tsplib") {
    return {build_euclidean_instance(parse_tsplib(text)), 0};
  }
  throw ParseError("unknown instance format \"" + format +
                   "\" (expected pmed or tsplib)");
}

}  // namespace paccp
