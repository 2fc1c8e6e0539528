#include "fraclat/forces.hpp"

#include <charconv>
#include <cstdio>

#include "fraclat/errors.hpp"

namespace fraclat {

namespace {

double number(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError(std::string(what) + ": bad number '" + std::string(text) + "'");
  return v;
}

// "name:key=value" -> value
double keyed(std::string_view rest, std::string_view key, std::string_view what) {
  if (rest.substr(0, key.size()) != key || rest.size() <= key.size() || rest[key.size()] != '=')
    throw DomainError(std::string(what) + ": expected " + std::string(key) + "=<value>");
  return number(rest.substr(key.size() + 1), what);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T horner(const std::vector<double>& c, T u) {
  T acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

}  // namespace

double apply(const Nonlinearity& f, double u) {
  if (std::holds_alternative<SquareMap>(f)) return u * u;
  if (auto q = std::get_if<QuadraticShift>(&f)) return u - q->gprime * u * u;
  return u;
}

std::complex<double> apply(const Nonlinearity& f, std::complex<double> u) {
  if (std::holds_alternative<SquareMap>(f)) return u * u;
  if (auto q = std::get_if<QuadraticShift>(&f)) return u - q->gprime * u * u;
  return u;
}

bool is_identity(const Nonlinearity& f) { return std::holds_alternative<IdentityMap>(f); }

std::pair<double, double> quadratic_coefficients(const Nonlinearity& f) {
  if (std::holds_alternative<SquareMap>(f)) return {0.0, 1.0};
  if (auto q = std::get_if<QuadraticShift>(&f)) return {1.0, -q->gprime};
  return {1.0, 0.0};
}

Nonlinearity parse_nonlinearity(std::string_view text) {
  if (text == "identity") return IdentityMap{};
  if (text == "square") return SquareMap{};
  if (text.substr(0, 10) == "quadshift:") return QuadraticShift{keyed(text.substr(10), "g", "nonlinearity")};
  throw DomainError("nonlinearity: unknown form '" + std::string(text) + "'");
}

std::string to_string(const Nonlinearity& f) {
  if (std::holds_alternative<SquareMap>(f)) return "square";
  if (auto q = std::get_if<QuadraticShift>(&f)) return "quadshift:g=" + fmt(q->gprime);
  return "identity";
}

std::vector<double> polynomial_coefficients(const OnSiteForce& force) {
  if (auto l = std::get_if<LinearForce>(&force)) return {0.0, l->c};
  if (auto c = std::get_if<CubicForce>(&force)) return {0.0, 0.0, 0.0, c->b};
  if (auto p = std::get_if<PolynomialForce>(&force)) return p->coeffs;
  return {};
}

double evaluate(const OnSiteForce& force, double u) { return horner(polynomial_coefficients(force), u); }

std::complex<double> evaluate(const OnSiteForce& force, std::complex<double> u) {
  return horner(polynomial_coefficients(force), u);
}

double potential(const OnSiteForce& force, double u) {
  const auto c = polynomial_coefficients(force);
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u - c[i] / static_cast<double>(i + 1);
  return acc * u;
}

bool is_none(const OnSiteForce& force) {
  const auto c = polynomial_coefficients(force);
  for (double x : c)
    if (x != 0.0) return false;
  return true;
}

OnSiteForce parse_force(std::string_view text) {
  if (text == "none") return NoForce{};
  if (text.substr(0, 7) == "linear:") return LinearForce{keyed(text.substr(7), "c", "force")};
  if (text.substr(0, 6) == "cubic:") return CubicForce{keyed(text.substr(6), "b", "force")};
  if (text.substr(0, 5) == "poly:") {
    PolynomialForce p;
    std::string_view rest = text.substr(5);
    while (true) {
      const auto comma = rest.find(',');
      p.coeffs.push_back(number(rest.substr(0, comma), "force"));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return p;
  }
  throw DomainError("force: unknown form '" + std::string(text) + "'");
}

std::string to_string(const OnSiteForce& force) {
  if (auto l = std::get_if<LinearForce>(&force)) return "linear:c=" + fmt(l->c);
  if (auto c = std::get_if<CubicForce>(&force)) return "cubic:b=" + fmt(c->b);
  if (auto p = std::get_if<PolynomialForce>(&force)) {
    std::string out = "poly:";
    for (std::size_t i = 0; i < p->coeffs.size(); ++i) out += (i ? "," : "") + fmt(p->coeffs[i]);
    return out;
  }
  return "none";
}

}  // namespace fraclat
