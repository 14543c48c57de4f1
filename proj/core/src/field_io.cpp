#include "hesslab/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "hesslab/error.hpp"

namespace hesslab {

namespace {

std::string join(const auto& v, auto&& fmt_one) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt_one(v[i]);
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw DomainError("HESSFIELD: bad number '" + s + "'");
  return v;
}

std::uint64_t to_le(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

std::string field_header(const GridDomain& d) {
  return fmt::format("HESSFIELD v1 n={} shape={} h={:.17g} origin={} kind={}", d.n(),
                     join(d.shape(), [](int v) { return std::to_string(v); }), d.h(),
                     join(d.origin(), [](double v) { return fmt::format("{:.17g}", v); }), to_string(d.kind()));
}

void write_field(std::ostream& os, const GridField& u) {
  os << field_header(u.domain()) << '\n';
  const double qnan = std::numeric_limits<double>::quiet_NaN();
  std::vector<char> buf(u.size() * 8);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u.domain().is_inside(i) ? u[i] : qnan;
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
    std::memcpy(buf.data() + 8 * i, &bits, 8);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw DomainError("HESSFIELD: write failed");
}

void write_field(const std::string& path, const GridField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  write_field(os, u);
}

GridField read_field(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("HESSFIELD: missing header");
  std::istringstream hs(line);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "HESSFIELD" || version != "v1") throw DomainError("HESSFIELD: bad magic");
  int n = 0;
  std::vector<int> shape;
  std::vector<double> origin;
  double h = 0.0;
  std::string kind;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw DomainError("HESSFIELD: bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") n = std::stoi(val);
    else if (key == "shape") for (const auto& s : split(val, ',')) shape.push_back(std::stoi(s));
    else if (key == "h") h = to_double(val);
    else if (key == "origin") for (const auto& s : split(val, ',')) origin.push_back(to_double(s));
    else if (key == "kind") kind = val;
    else throw DomainError("HESSFIELD: unknown header key '" + key + "'");
  }
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  std::vector<char> buf(total * 8);
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(is.gcount()) != buf.size()) throw DomainError("HESSFIELD: truncated data");
  std::vector<double> values(total);
  GridDomain::Mask inside(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, buf.data() + 8 * i, 8);
    values[i] = std::bit_cast<double>(to_le(bits));
    inside[i] = !std::isnan(values[i]);
  }
  const DomainKind dk = domain_kind_from_string(kind);
  DomainPtr dom = share(GridDomain::from_mask(n, shape, h, origin, dk, std::move(inside)));
  GridField u(dom);
  for (std::size_t i = 0; i < total; ++i)
    if (dom->is_inside(i)) u[i] = values[i];
  return u;
}

GridField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return read_field(is);
}

}  // namespace hesslab
