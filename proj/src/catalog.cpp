#include "conekit/catalog.hpp"

#include <boost/math/special_functions/binomial.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conekit/errors.hpp"

namespace conekit {

namespace {

void require_dim(int d, const char* who) {
  if (d < 1) throw InvalidArgument(std::string(who) + ": dimension must be >= 1");
}

}  // namespace

ConeDescriptor ConeDescriptor::subspace(int j, int d) {
  require_dim(d, "subspace");
  if (j < 0 || j > d) throw InvalidArgument("subspace: need 0 <= j <= d");
  ConeDescriptor c;
  c.kind = Kind::subspace;
  c.ambient = d;
  c.sub_dim = j;
  return c;
}

ConeDescriptor ConeDescriptor::halfspace(int d) {
  require_dim(d, "halfspace");
  ConeDescriptor c;
  c.kind = Kind::halfspace;
  c.ambient = d;
  return c;
}

ConeDescriptor ConeDescriptor::orthant(int d) {
  require_dim(d, "orthant");
  ConeDescriptor c;
  c.kind = Kind::orthant;
  c.ambient = d;
  return c;
}

ConeDescriptor ConeDescriptor::wedge2d(double angle) {
  if (!(angle > 0.0 && angle <= std::numbers::pi + 1e-12))
    throw InvalidArgument("wedge2d: angle must lie in (0, pi]");
  ConeDescriptor c;
  c.kind = Kind::wedge2d;
  c.ambient = 2;
  c.angle = std::min(angle, std::numbers::pi);
  return c;
}

ConeDescriptor ConeDescriptor::product(ConeDescriptor a, ConeDescriptor b) {
  ConeDescriptor c;
  c.kind = Kind::product;
  c.ambient = a.ambient + b.ambient;
  c.factors = {std::move(a), std::move(b)};
  return c;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ConeDescriptor parse() {
    ConeDescriptor d = descriptor();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "cone descriptor '" << s_ << "': " << what << " at column " << pos_ + 1;
    throw InvalidArgument(msg.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip();
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  // factor (('*' | '/') factor)*
  double expression() {
    double v = number();
    for (;;) {
      if (accept('*'))
        v *= number();
      else if (accept('/'))
        v /= number();
      else
        return v;
    }
  }

  int integer() {
    const double v = expression();
    if (v != std::floor(v) || v < 0 || v > 1000) fail("expected a nonnegative integer");
    return static_cast<int>(v);
  }

  ConeDescriptor descriptor() {
    const std::string name = identifier();
    if (name == "halfline") return ConeDescriptor::orthant(1);
    if (name == "quadrant") return ConeDescriptor::orthant(2);
    if (name == "halfplane") return ConeDescriptor::halfspace(2);
    expect('(');
    ConeDescriptor out;
    if (name == "subspace") {
      const int j = integer();
      int d = j;
      if (accept(',')) d = integer();
      out = ConeDescriptor::subspace(j, d);
    } else if (name == "whole") {
      const int d = integer();
      out = ConeDescriptor::subspace(d, d);
    } else if (name == "zero") {
      out = ConeDescriptor::subspace(0, integer());
    } else if (name == "halfspace") {
      out = ConeDescriptor::halfspace(integer());
    } else if (name == "orthant") {
      out = ConeDescriptor::orthant(integer());
    } else if (name == "wedge2d") {
      out = ConeDescriptor::wedge2d(expression());
    } else if (name == "product") {
      ConeDescriptor a = descriptor();
      expect(',');
      out = ConeDescriptor::product(std::move(a), descriptor());
      while (accept(',')) out = ConeDescriptor::product(std::move(out), descriptor());
    } else {
      fail("unknown cone '" + name + "'");
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ConeDescriptor parse_descriptor(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const ConeDescriptor& desc) {
  std::ostringstream out;
  switch (desc.kind) {
    case ConeDescriptor::Kind::subspace:
      out << "subspace(" << desc.sub_dim << ',' << desc.ambient << ')';
      break;
    case ConeDescriptor::Kind::halfspace:
      out << "halfspace(" << desc.ambient << ')';
      break;
    case ConeDescriptor::Kind::orthant:
      out << "orthant(" << desc.ambient << ')';
      break;
    case ConeDescriptor::Kind::wedge2d:
      out.precision(17);
      out << "wedge2d(" << desc.angle << ')';
      break;
    case ConeDescriptor::Kind::product:
      out << "product(" << to_string(desc.factors[0]) << ',' << to_string(desc.factors[1]) << ')';
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------- values

std::vector<double> exact_intrinsic_volumes(const ConeDescriptor& desc) {
  const int d = desc.ambient;
  std::vector<double> v(static_cast<std::size_t>(d) + 1, 0.0);
  switch (desc.kind) {
    case ConeDescriptor::Kind::subspace:
      v[static_cast<std::size_t>(desc.sub_dim)] = 1.0;
      break;
    case ConeDescriptor::Kind::halfspace:
      v[static_cast<std::size_t>(d - 1)] = 0.5;
      v[static_cast<std::size_t>(d)] = 0.5;
      break;
    case ConeDescriptor::Kind::orthant:
      for (int k = 0; k <= d; ++k)
        v[static_cast<std::size_t>(k)] = boost::math::binomial_coefficient<double>(static_cast<unsigned>(d),
                                                                                  static_cast<unsigned>(k)) /
                                         std::ldexp(1.0, d);
      break;
    case ConeDescriptor::Kind::wedge2d: {
      const double a = desc.angle;
      v = {(std::numbers::pi - a) / (2.0 * std::numbers::pi), 0.5, a / (2.0 * std::numbers::pi)};
      break;
    }
    case ConeDescriptor::Kind::product: {
      const auto a = exact_intrinsic_volumes(desc.factors[0]);
      const auto b = exact_intrinsic_volumes(desc.factors[1]);
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) v[i + j] += a[i] * b[j];
      break;
    }
  }
  return v;
}

PolyhedralCone build_cone(const ConeDescriptor& desc) {
  const int d = desc.ambient;
  switch (desc.kind) {
    case ConeDescriptor::Kind::subspace:
      return subspace_cone(Subspace::coordinate(d, desc.sub_dim));
    case ConeDescriptor::Kind::halfspace: {
      Matrix n = Matrix::Zero(d, 1);
      n(0, 0) = 1.0;
      return cone_from_halfspaces(d, n);
    }
    case ConeDescriptor::Kind::orthant:
      return cone_from_halfspaces(d, Matrix(-Matrix::Identity(d, d)));
    case ConeDescriptor::Kind::wedge2d: {
      if (desc.angle >= std::numbers::pi) {
        Matrix n(2, 1);
        n << 0.0, -1.0;
        return cone_from_halfspaces(2, n);
      }
      Matrix g(2, 2);
      g << 1.0, std::cos(desc.angle), 0.0, std::sin(desc.angle);
      return cone_from_generators(2, g);
    }
    case ConeDescriptor::Kind::product:
      return direct_product(build_cone(desc.factors[0]), build_cone(desc.factors[1]));
  }
  throw InvalidArgument("build_cone: unknown descriptor");
}

}  // namespace conekit
