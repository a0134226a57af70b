#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subpert/core.hpp"
#include "subpert/graph_laplacian.hpp"
#include "subpert/set_geometry.hpp"

namespace subpert::io {

/// Shortest round-trip-stable rendering used in every report.
inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Whitespace tokens of a text stream with `#` comments removed.
class Tokens {
 public:
  Tokens(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks_.push_back(tok);
    }
  }

  bool done() const { return pos_ >= toks_.size(); }

  std::string word() {
    if (done()) fail("unexpected end of input");
    return toks_[pos_++];
  }

  void expect(const std::string& w) {
    const auto got = word();
    if (got != w) fail("expected '" + w + "', got '" + got + "'");
  }

  double real() {
    const auto t = word();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("not a number: '" + t + "'");
    }
  }

  long long integer() {
    const auto t = word();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("not an integer: '" + t + "'");
    }
  }

  void finish() {
    if (!done()) fail("trailing content '" + toks_[pos_] + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Format, source_ + ": " + msg);
  }

 private:
  std::string source_;
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

// ---- matrices: "matrix <rows> <cols> real|complex", entries row-major ------

inline CMatrix parse_matrix(std::istream& in, const std::string& source) {
  Tokens t(in, source);
  t.expect("matrix");
  const auto rows = t.integer();
  const auto cols = t.integer();
  if (rows < 0 || cols < 0) t.fail("negative dimension");
  const auto kind = t.word();
  if (kind != "real" && kind != "complex") t.fail("kind must be real|complex");
  CMatrix m(rows, cols);
  for (long long r = 0; r < rows; ++r)
    for (long long c = 0; c < cols; ++c) {
      const double re = t.real();
      const double im = kind == "complex" ? t.real() : 0.0;
      m(r, c) = Complex(re, im);
    }
  t.finish();
  return m;
}

inline CMatrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_matrix(in, path.string());
}

inline std::string format_matrix(const CMatrix& m) {
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0 || m.size() == 0;
  std::string s = "matrix " + std::to_string(m.rows()) + " " +
                  std::to_string(m.cols()) + (real ? " real\n" : " complex\n");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s += ' ';
      char buf[64];
      if (real)
        std::snprintf(buf, sizeof buf, "%.17g", m(r, c).real());
      else
        std::snprintf(buf, sizeof buf, "%.17g %.17g", m(r, c).real(),
                      m(r, c).imag());
      s += buf;
    }
    s += '\n';
  }
  return s;
}

// ---- point multisets: "points <N>", then "re im" per point -----------------

inline PointMultiset parse_points(std::istream& in, const std::string& source) {
  Tokens t(in, source);
  t.expect("points");
  const auto count = t.integer();
  if (count < 0) t.fail("negative count");
  std::vector<Complex> pts;
  for (long long i = 0; i < count; ++i) {
    const double re = t.real();
    const double im = t.real();
    pts.emplace_back(re, im);
  }
  t.finish();
  return PointMultiset(std::move(pts));
}

inline PointMultiset read_points(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_points(in, path.string());
}

// ---- graphs: "graph <n>", then "u v w" per undirected edge, 0-based ---------

inline WeightedGraph parse_graph(std::istream& in, const std::string& source) {
  Tokens t(in, source);
  t.expect("graph");
  const auto n = t.integer();
  if (n < 0 || n > 1'000'000) t.fail("bad vertex count");
  WeightedGraph g(static_cast<int>(n));
  while (!t.done()) {
    const auto u = t.integer();
    const auto v = t.integer();
    const double w = t.real();
    try {
      g.add_edge(static_cast<int>(u), static_cast<int>(v), w);
    } catch (const Error& e) {
      t.fail(e.what());
    }
  }
  return g;
}

inline WeightedGraph read_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_graph(in, path.string());
}

inline std::string format_graph(const WeightedGraph& g) {
  std::string s = "graph " + std::to_string(g.n()) + "\n";
  for (const auto& e : g.edges())
    s += std::to_string(e.u) + " " + std::to_string(e.v) + " " + fmt(e.w) + "\n";
  return s;
}

// ---- cuts: "cut <n> <q>", then one 0-based label per vertex ----------------

inline QCut parse_cut(std::istream& in, const std::string& source) {
  Tokens t(in, source);
  t.expect("cut");
  const auto n = t.integer();
  const auto q = t.integer();
  if (n < 0 || q < 1) t.fail("bad header");
  std::vector<int> labels;
  for (long long i = 0; i < n; ++i) labels.push_back(static_cast<int>(t.integer()));
  t.finish();
  try {
    return QCut(std::move(labels), static_cast<int>(q));
  } catch (const Error& e) {
    t.fail(e.what());
  }
}

inline QCut read_cut(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_cut(in, path.string());
}

inline std::string format_cut(const QCut& cut) {
  std::string s =
      "cut " + std::to_string(cut.n()) + " " + std::to_string(cut.q()) + "\n";
  for (int l : cut.labels()) s += std::to_string(l) + "\n";
  return s;
}

// ---- spectrum report: "spectrum <n>", then "index re im", 1-based ----------

inline std::string format_spectrum(const PointMultiset& values) {
  std::string s = "spectrum " + std::to_string(values.size()) + "\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    s += std::to_string(i + 1) + " " + fmt(values[i].real()) + " " +
         fmt(values[i].imag()) + "\n";
  return s;
}

inline std::string spectrum_csv(const PointMultiset& values) {
  std::string s = "index,re,im\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    s += std::to_string(i + 1) + "," + fmt(values[i].real()) + "," +
         fmt(values[i].imag()) + "\n";
  return s;
}

inline std::string cluster_csv(const std::vector<ClusterCoupling>& rows) {
  std::string s = "cluster,size,ed_out,cp,med\n";
  for (const auto& r : rows)
    s += std::to_string(r.cluster + 1) + "," + std::to_string(r.size) + "," +
         fmt(r.sum_w) + "," + fmt(r.coupling) + "," + fmt(r.med) + "\n";
  return s;
}

}  // namespace subpert::io
