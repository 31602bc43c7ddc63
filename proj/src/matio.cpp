// Copyright 2026 The matconc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matconc/matio.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace matconc {

namespace {

void format_double(std::ostream& os, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  os.write(buf, res.ptr - buf);
}

void format_entry(std::ostream& os, const Complex& z) {
  format_double(os, z.real());
  if (z.imag() != 0.0) {
    if (!(z.imag() < 0.0)) os << '+';
    format_double(os, z.imag());
    os << 'I';
  }
}

Complex parse_entry(const std::string& tok) {
  auto bad = [&]() -> Complex { throw IoError("matrix record: bad entry '" + tok + "'"); };
  if (tok.empty()) return bad();
  if (tok.back() != 'I') {
    try {
      size_t used = 0;
      double re = std::stod(tok, &used);
      if (used != tok.size()) return bad();
      return Complex(re, 0.0);
    } catch (const std::exception&) {
      return bad();
    }
  }
  std::string body = tok.substr(0, tok.size() - 1);
  if (body.empty()) return bad();
  // Split at the sign that separates real and imaginary parts; signs that
  // follow an exponent marker belong to the exponent.
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (split == std::string::npos) {
      size_t used = 0;
      double im = std::stod(body, &used);
      if (used != body.size()) return bad();
      return Complex(0.0, im);
    }
    size_t used = 0;
    double re = std::stod(body.substr(0, split), &used);
    if (used != split) return bad();
    double im = std::stod(body.substr(split), &used);
    if (used != body.size() - split) return bad();
    return Complex(re, im);
  } catch (const std::exception&) {
    return bad();
  }
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      format_entry(os, m(r, c));
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  Index rows = 0, cols = 0;
  if (!(is >> rows >> cols)) throw IoError("matrix record: missing 'd1 d2' header");
  if (rows < 1 || cols < 1) throw IoError("matrix record: non-positive dimensions");
  Matrix m(rows, cols);
  std::string tok;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      if (!(is >> tok)) throw IoError("matrix record: truncated entry list");
      m(r, c) = parse_entry(tok);
    }
  }
  return m;
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_matrix(os, m);
  if (!os) throw IoError("write failed on '" + path + "'");
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_matrix(is);
}

void export_coefficients(const ChaosCoefficients& a, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  for (int i1 = 0; i1 < a.n(); ++i1) {
    for (int i2 = 0; i2 < a.n(); ++i2) {
      if (i1 == i2) continue;
      std::ostringstream name;
      name << "A_" << (i1 + 1) << '_' << (i2 + 1) << ".mat";
      write_matrix_file((fs::path(dir) / name.str()).string(), a.at(i1, i2));
    }
  }
}

ChaosCoefficients import_coefficients(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
  int n = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    int i1 = 0, i2 = 0;
    if (std::sscanf(name.c_str(), "A_%d_%d.mat", &i1, &i2) != 2) continue;
    std::ostringstream expect;
    expect << "A_" << i1 << '_' << i2 << ".mat";
    if (expect.str() == name) n = std::max({n, i1, i2});
  }
  if (n < 2) throw IoError("'" + dir + "' contains no A_<i1>_<i2>.mat records");

  std::vector<Matrix> raw(static_cast<size_t>(n) * n);
  Index d = 0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      std::ostringstream name;
      name << "A_" << (i1 + 1) << '_' << (i2 + 1) << ".mat";
      const fs::path p = fs::path(dir) / name.str();
      if (!fs::exists(p)) throw IoError("missing record " + name.str() + " in '" + dir + "'");
      Matrix m = read_matrix_file(p.string());
      if (d == 0) d = m.rows();
      raw[static_cast<size_t>(i1) * n + i2] = std::move(m);
    }
  }
  std::vector<HermMatrix> blocks;
  blocks.reserve(raw.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      blocks.emplace_back(i1 == i2 ? Matrix::Zero(d, d) : raw[static_cast<size_t>(i1) * n + i2]);
    }
  }
  return ChaosCoefficients(n, d, std::move(blocks));
}

void export_kernel(const KernelTable& h, const DiscreteDistribution& p, const std::string& dir) {
  if (h.support() != p.size()) throw InvalidInputError("export_kernel: support size mismatch");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());

  for (int i = 0; i < p.size(); ++i) {
    const std::string& label = p.point(i).label;
    if (label.empty() || label.find_first_of(" \t\r\n") != std::string::npos) {
      throw IoError("export_kernel: point label '" + label + "' is empty or has whitespace");
    }
  }
  {
    std::ofstream os(fs::path(dir) / "manifest.txt");
    if (!os) throw IoError("cannot write manifest in '" + dir + "'");
    os << "matconc-kernel v1\n";
    os << "n " << h.n() << '\n';
    os << "d " << h.d() << '\n';
    os << "support " << h.support() << '\n';
    for (int i = 0; i < p.size(); ++i) {
      os << "point " << p.point(i).label << ' ';
      format_double(os, p.payload(i));
      os << ' ';
      format_double(os, p.prob(i));
      os << '\n';
    }
  }
  for (int i1 = 0; i1 < h.n(); ++i1) {
    for (int i2 = 0; i2 < h.n(); ++i2) {
      if (i1 == i2) continue;
      std::ostringstream sub;
      sub << "kernel_" << (i1 + 1) << '_' << (i2 + 1);
      const fs::path pair_dir = fs::path(dir) / sub.str();
      fs::create_directories(pair_dir, ec);
      if (ec) throw IoError("cannot create '" + pair_dir.string() + "'");
      for (int x = 0; x < h.support(); ++x) {
        for (int y = 0; y < h.support(); ++y) {
          std::ostringstream name;
          name << (x + 1) << '_' << (y + 1) << ".mat";
          write_matrix_file((pair_dir / name.str()).string(), h.at(i1, i2, x, y));
        }
      }
    }
  }
}

std::pair<KernelTable, DiscreteDistribution> import_kernel(const std::string& dir) {
  const fs::path manifest = fs::path(dir) / "manifest.txt";
  std::ifstream is(manifest);
  if (!is) throw IoError("cannot open '" + manifest.string() + "'");
  std::string header;
  std::getline(is, header);
  if (header != "matconc-kernel v1") throw IoError("manifest: unknown header '" + header + "'");

  int n = 0, s = 0;
  Index d = 0;
  std::vector<DiscreteDistribution::Point> points;
  std::string key;
  while (is >> key) {
    if (key == "n") is >> n;
    else if (key == "d") is >> d;
    else if (key == "support") is >> s;
    else if (key == "point") {
      DiscreteDistribution::Point pt;
      if (!(is >> pt.label >> pt.payload >> pt.prob)) throw IoError("manifest: bad point line");
      points.push_back(std::move(pt));
    } else {
      throw IoError("manifest: unknown key '" + key + "'");
    }
  }
  if (n < 2 || d < 1 || s < 1) throw IoError("manifest: missing or bad n/d/support");
  if (static_cast<int>(points.size()) != s) throw IoError("manifest: point count != support");
  DiscreteDistribution p(std::move(points));

  std::vector<Matrix> values(static_cast<size_t>(n) * n * s * s);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      std::ostringstream sub;
      sub << "kernel_" << (i1 + 1) << '_' << (i2 + 1);
      for (int x = 0; x < s; ++x) {
        for (int y = 0; y < s; ++y) {
          std::ostringstream name;
          name << (x + 1) << '_' << (y + 1) << ".mat";
          const fs::path p2 = fs::path(dir) / sub.str() / name.str();
          if (!fs::exists(p2)) throw IoError("missing kernel record '" + p2.string() + "'");
          values[((static_cast<size_t>(i1) * n + i2) * s + x) * s + y] = read_matrix_file(p2.string());
        }
      }
    }
  }
  KernelTable h(n, d, s, [&](int i1, int i2, int x, int y) -> Matrix {
    return values[((static_cast<size_t>(i1) * n + i2) * s + x) * s + y];
  });
  return {std::move(h), std::move(p)};
}

}  // namespace matconc
