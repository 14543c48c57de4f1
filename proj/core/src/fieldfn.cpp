#include "hesslab/fieldfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "hesslab/error.hpp"
#include "hesslab/radial.hpp"

namespace hesslab {

namespace {

std::vector<double> parse_params(const std::string& spec, const std::string& body, std::size_t want) {
  std::vector<double> out;
  std::istringstream in(body);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) throw DomainError("bad parameter in '" + spec + "'");
    out.push_back(v);
  }
  if (out.size() != want) throw DomainError("'" + spec + "' expects " + std::to_string(want) + " parameter(s)");
  return out;
}

double norm2(std::span<const double> x) {
  double t = 0.0;
  for (double v : x) t += v * v;
  return t;
}

}  // namespace

FieldFunction parse_function(const std::string& spec, int n, int m) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw DomainError("function spec '" + spec + "' lacks ':'");
  const std::string name = spec.substr(0, colon), body = spec.substr(colon + 1);
  FieldFunction f;
  f.spec = spec;
  if (name == "const") {
    const double c = parse_params(spec, body, 1)[0];
    f.eval = [c](std::span<const double>) { return c; };
  } else if (name == "quad") {
    const double c = parse_params(spec, body, 1)[0];
    f.eval = [c](std::span<const double> x) { return c * norm2(x); };
  } else if (name == "harm") {
    const double c = parse_params(spec, body, 1)[0];
    f.eval = [c](std::span<const double> x) { return c * (x[0] * x[0] - x[1] * x[1]); };
  } else if (name == "radial") {
    RadialProfile p;
    if (body == "G") p = radial::green(n, m);
    else if (body == "log") p = radial::log_modulus();
    else throw DomainError("unknown radial profile '" + body + "'");
    f.eval = [p](std::span<const double> x) { return p.g(norm2(x)); };
    f.singular_at_origin = true;
  } else if (name == "bump") {
    const auto v = parse_params(spec, body, 2);
    const double a = v[0], r = v[1];
    if (!(r > 0.0)) throw DomainError("bump radius must be positive");
    f.eval = [a, r](std::span<const double> x) {
      const double s = 1.0 - norm2(x) / (r * r);
      return s > 0.0 ? a * s * s * s : 0.0;
    };
  } else if (name == "sing") {
    const double a = parse_params(spec, body, 1)[0];
    f.eval = [a](std::span<const double> x) { return std::pow(norm2(x), -0.5 * a); };
    f.singular_at_origin = a > 0.0;
  } else if (name == "cosx") {
    const double a = parse_params(spec, body, 1)[0];
    const double c = binomial(n, m);
    f.eval = [a, c](std::span<const double> x) { return c * (1.0 + a * std::cos(2.0 * std::numbers::pi * x[0])); };
  } else {
    throw DomainError("unknown function constructor '" + name + "'");
  }
  return f;
}

GridField sample_function(DomainPtr domain, const FieldFunction& fn, double exclusion) {
  if (fn.singular_at_origin) {
    const double r = exclusion > 0.0 ? exclusion : 1.5 * domain->h();
    std::vector<double> center(domain->axes(), 0.0);
    domain = share(domain->without_ball(center, r));
  }
  return GridField::sample(std::move(domain), fn.eval);
}

GridField density_field(DomainPtr domain, const FieldFunction& fn) {
  if (!fn.singular_at_origin) return GridField::sample(std::move(domain), fn.eval);
  const double h = domain->h();
  std::vector<double> y(domain->axes());
  GridField capped = GridField::sample(domain, [&](std::span<const double> x) {
    const double r = std::sqrt(norm2(x));
    const double s = r < h ? (r > 0.0 ? h / r : 0.0) : 1.0;
    if (s == 0.0) {
      std::fill(y.begin(), y.end(), 0.0);
      y[0] = h;
    } else {
      for (std::size_t a = 0; a < y.size(); ++a) y[a] = s * x[a];
    }
    return fn.eval(y);
  });
  const GridField smooth = mollify(capped, 2.0 * h);
  for (std::size_t i = 0; i < capped.size(); ++i)
    if (smooth.domain().is_inside(i)) capped[i] = smooth[i];
  return capped;
}

}  // namespace hesslab
