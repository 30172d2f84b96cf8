#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Instance acquisition: parsers for the two benchmark text formats
// (OR-Library p-median graphs and TSPLIB coordinate files) and builders that
// materialize the dense distance matrix used everywhere else.

namespace paccp {

// Thrown on malformed input files; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Raw content of an OR-Library style p-median file: header "n |E| p", then
// one "u v w" line per undirected edge with 1-based vertex ids.
struct GraphSpec {
  struct Edge {
    int u = 0;
    int v = 0;
    long long w = 0;
  };
  int n = 0;
  std::vector<Edge> edges;
  int p = 0;  // facility count from the header
};

// Raw content of a TSPLIB coordinate file (EUC_2D or ATT).
struct CoordSpec {
  std::string name;
  int dimension = 0;
  std::vector<std::pair<double, double>> coords;
};

// Customer/facility sets with a dense distance matrix.  Immutable after
// construction and safe to share read-only across threads.
class Instance {
 public:
  // Builds from an explicit matrix; validates non-negativity and, when
  // same_locations is set, n == m and a zero diagonal.
  Instance(std::string name, int n, int m, std::vector<double> d,
           bool same_locations);

  const std::string& name() const { return name_; }
  int n() const { return n_; }  // |I|, customers
  int m() const { return m_; }  // |J|, facilities
  bool same_locations() const { return same_locations_; }

  double d(int i, int j) const { return d_[static_cast<size_t>(i) * m_ + j]; }
  const std::vector<double>& matrix() const { return d_; }

  // True when every distance is integral (holds for graph-derived instances
  // with integer weights; asserted downstream, never assumed).
  bool all_integral() const;

 private:
  std::string name_;
  int n_;
  int m_;
  std::vector<double> d_;  // row-major, n_ * m_
  bool same_locations_;
};

// Parses the p-median header and edge list.  Errors carry line numbers.
GraphSpec parse_pmed(const std::string& text);

// Parses the TSPLIB subset: NAME, TYPE, DIMENSION, EDGE_WEIGHT_TYPE in
// {EUC_2D, ATT}, NODE_COORD_SECTION, EOF.
CoordSpec parse_tsplib(const std::string& text);

// All-pairs shortest paths over the undirected weighted graph
// (Floyd-Warshall); I = J = V.  Throws on disconnected input.
Instance build_graph_instance(const GraphSpec& spec,
                              const std::string& name = "pmed");

// Exact (unrounded) Euclidean distances between all coordinate pairs; I = J.
// Both EUC_2D and ATT instances use the plain Euclidean metric: the reference
// optima reproduced by the test suite are real-valued, which rules out the
// TSPLIB integer-rounding conventions.
Instance build_euclidean_instance(const CoordSpec& spec);

// Convenience wrapper for the CLI: reads the file at `path` and dispatches on
// `format` ("pmed" or "tsplib").  The returned pair carries the header p of a
// pmed file (0 for tsplib).
std::pair<Instance, int> load_instance_file(const std::string& path,
                                            const std::string& format);

}  // namespace paccp
