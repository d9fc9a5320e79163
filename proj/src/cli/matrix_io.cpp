#include "cesgeom/cli/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cesgeom::cli {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (line.tokens.empty() || line.tokens.front().front() == '#') continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void parse_error(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& tok, int line) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    parse_error(line, "bad number '" + tok + "'");
  }
  return v;
}

int to_count(const std::string& tok, int line) {
  int v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || v < 1) parse_error(line, "bad size '" + tok + "'");
  return v;
}

/// Reads `count` complex values from one line of 2*count numbers.
void read_row(const Line& line, int count, Complex* out) {
  if (static_cast<int>(line.tokens.size()) != 2 * count) {
    parse_error(line.number, "expected " + std::to_string(2 * count) + " numbers, got " +
                                 std::to_string(line.tokens.size()));
  }
  for (int k = 0; k < count; ++k) {
    out[k] = Complex(to_double(line.tokens[2 * k], line.number),
                     to_double(line.tokens[2 * k + 1], line.number));
  }
}

void append_row(std::string& out, const Complex* values, int count) {
  for (int k = 0; k < count; ++k) {
    if (k > 0) out += ' ';
    out += format_double(values[k].real());
    out += ' ';
    out += format_double(values[k].imag());
  }
  out += '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::IoError, "number formatting failed");
  return std::string(buf, ptr);
}

std::vector<CMatrix> parse_matrix_blocks(const std::string& text) {
  const std::vector<Line> lines = tokenize(text);
  std::vector<CMatrix> blocks;
  std::size_t i = 0;
  while (i < lines.size()) {
    const Line& head = lines[i];
    if (head.tokens.size() != 2 || head.tokens[0] != "hpd") {
      parse_error(head.number, "expected header 'hpd p'");
    }
    const int p = to_count(head.tokens[1], head.number);
    if (i + static_cast<std::size_t>(p) >= lines.size()) {
      parse_error(head.number, "matrix block truncated");
    }
    CMatrix m(p, p);
    for (int r = 0; r < p; ++r) {
      CVector row(p);
      read_row(lines[i + 1 + static_cast<std::size_t>(r)], p, row.data());
      m.row(r) = row.transpose();
    }
    blocks.push_back(std::move(m));
    i += 1 + static_cast<std::size_t>(p);
  }
  if (blocks.empty()) throw Error(ErrorCode::ParseError, "no matrix blocks found");
  return blocks;
}

std::vector<HpdMatrix> parse_hpd_matrices(const std::string& text) {
  const std::vector<CMatrix> blocks = parse_matrix_blocks(text);
  std::vector<HpdMatrix> out;
  out.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    try {
      out.push_back(validate_hpd(blocks[k]));
    } catch (const Error& e) {
      throw Error(e.code(), "matrix " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

SampleBatch parse_batch(const std::string& text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty batch file");
  const Line& head = lines.front();
  if (head.tokens.size() != 3 || head.tokens[0] != "batch") {
    parse_error(head.number, "expected header 'batch p n'");
  }
  const int p = to_count(head.tokens[1], head.number);
  const int n = to_count(head.tokens[2], head.number);
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    parse_error(head.number, "expected " + std::to_string(n) + " sample rows, got " +
                                 std::to_string(lines.size() - 1));
  }
  CMatrix x(p, n);
  for (int s = 0; s < n; ++s) {
    read_row(lines[static_cast<std::size_t>(s) + 1], p, x.col(s).data());
  }
  return SampleBatch(std::move(x));
}

std::string format_hpd(const HpdMatrix& m) {
  const int p = m.dim();
  std::string out = "hpd " + std::to_string(p) + "\n";
  for (int r = 0; r < p; ++r) {
    const CVector row = m.matrix().row(r).transpose();
    append_row(out, row.data(), p);
  }
  return out;
}

std::string format_batch(const SampleBatch& batch) {
  std::string out =
      "batch " + std::to_string(batch.dim()) + " " + std::to_string(batch.count()) + "\n";
  for (int s = 0; s < batch.count(); ++s) {
    const CVector col = batch.sample(s);
    append_row(out, col.data(), batch.dim());
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(ErrorCode::IoError, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::IoError, "cannot rename to '" + path + "': " + ec.message());
  }
}

}  // namespace cesgeom::cli
