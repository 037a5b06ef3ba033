#include "paradom/pcf.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "paradom/error.hpp"

namespace paradom {
namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  os.write(b, 8);
}

double get_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

}  // namespace

void write_pcf(const std::filesystem::path& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os << "PCF1 d=" << f.grid().dim() << " n=" << f.grid().n() << "\n";
  for (const auto& c : f.coeffs()) {
    put_le(os, c.real());
    put_le(os, c.imag());
  }
  if (!os) throw DataError("write failed for " + path.string());
}

SpectralField read_pcf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  std::string header;
  std::getline(is, header);
  int d = 0, n = 0;
  if (std::sscanf(header.c_str(), "PCF1 d=%d n=%d", &d, &n) != 2)
    throw DataError(path.string() + ": not a PCF1 file");
  Grid g(d, n);
  std::vector<cplx> c(g.size());
  for (auto& v : c) {
    const double re = get_le(is);
    const double im = get_le(is);
    v = cplx(re, im);
  }
  if (!is) throw DataError(path.string() + ": truncated coefficient data");
  return SpectralField(g, std::move(c));
}

void write_meta(const std::filesystem::path& path, const Meta& meta) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  for (const auto& [k, v] : meta) os << k << "=" << v << "\n";
}

Meta read_meta(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  Meta m;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ": malformed line '" + line + "'");
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("cannot parse " + what + " value '" + s + "'");
  }
}

const std::string& meta_get(const Meta& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw DataError("meta file lacks key '" + key + "'");
  return it->second;
}

}  // namespace paradom
