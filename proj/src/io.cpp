#include "sgx/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "sgx/errors.hpp"
#include "sgx/rng.hpp"

#include <json.hpp>

namespace sgx::io {

namespace {

constexpr char kMagic[4] = {'F', 'L', 'D', '1'};

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw IoError("field file: truncated header");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw IoError("field file: truncated payload");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field(const std::string& path, const Field& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kMagic, 4);
  put_u32(out, static_cast<uint32_t>(field.lattice.n()));
  put_u32(out, 0);  // flags
  for (int s = 0; s < field.size(); ++s) put_f64(out, field.values[s]);
  if (!out) throw IoError("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("field file: bad magic in " + path);
  uint32_t n = get_u32(in);
  uint32_t flags = get_u32(in);
  if (flags != 0) throw IoError("field file: unsupported flags in " + path);
  if (n < 2 || n > (1u << 15)) throw IoError("field file: implausible n in " + path);
  TorusLattice lat(static_cast<int>(n));
  Field field(lat);
  for (int s = 0; s < field.size(); ++s) field.values[s] = get_f64(in);
  char extra;
  if (in.read(&extra, 1)) throw IoError("field file: trailing bytes in " + path);
  return field;
}

void write_points(const std::string& path, const extremes::ExtremalProcessSample& sample) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "{\"r\":" << format_double(sample.r) << ",\"epsilon\":"
      << format_double(sample.epsilon) << ",\"m_eps\":" << format_double(sample.m_eps)
      << "}\n";
  for (const auto& p : sample.points)
    out << "{\"x\":[" << format_double(p.x) << "," << format_double(p.y)
        << "],\"h\":" << format_double(p.h) << "}\n";
  if (!out) throw IoError("write failed: " + path);
}

PointsReadResult read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  PointsReadResult result;
  std::string line;
  long line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw IoError("points file: malformed JSON at line " + std::to_string(line_no));
    if (!have_header) {
      if (!j.contains("r") || !j.contains("epsilon") || !j.contains("m_eps"))
        throw IoError("points file: missing header fields at line " +
                      std::to_string(line_no));
      result.sample.r = j["r"].get<double>();
      result.sample.epsilon = j["epsilon"].get<double>();
      result.sample.m_eps = j["m_eps"].get<double>();
      have_header = true;
      continue;
    }
    if (!j.contains("x") || !j.contains("h") || !j["x"].is_array() || j["x"].size() != 2)
      throw IoError("points file: malformed point at line " + std::to_string(line_no));
    extremes::ExtremalPoint p;
    p.x = j["x"][0].get<double>();
    p.y = j["x"][1].get<double>();
    p.h = j["h"].get<double>();
    result.sample.points.push_back(p);
  }
  if (!have_header) throw IoError("points file: missing header line");
  // consistency cross-check against the closed-form centering
  if (result.sample.epsilon > 0.0 && result.sample.epsilon < std::exp(-1.0)) {
    double expect = extremes::centering(result.sample.epsilon);
    if (std::fabs(expect - result.sample.m_eps) > 1e-9)
      result.warning = "header m_eps disagrees with centering(epsilon)";
  }
  return result;
}

uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  return h;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace sgx::io
