#include "teleport/testfns.hpp"

#include <cmath>

namespace teleport {

double eval(const TestFn& fn, Point2 p) {
  switch (fn.kind()) {
    case TestFn::Kind::Rosenbrock: {
      const double t = p.x1 * p.x1 - p.x2;
      const double u = p.x1 - 1.0;
      return 100.0 * t * t + u * u;
    }
    case TestFn::Kind::Booth: {
      const double t = p.x1 + 2.0 * p.x2 - 7.0;
      const double u = 2.0 * p.x1 + p.x2 - 5.0;
      return t * t + u * u;
    }
    case TestFn::Kind::Ellipse:
      return p.x1 * p.x1 + fn.ellipse_coeff() * p.x2 * p.x2;
  }
  return 0.0;
}

Point2 grad(const TestFn& fn, Point2 p) {
  switch (fn.kind()) {
    case TestFn::Kind::Rosenbrock: {
      const double t = p.x1 * p.x1 - p.x2;
      return {400.0 * p.x1 * t + 2.0 * (p.x1 - 1.0), -200.0 * t};
    }
    case TestFn::Kind::Booth: {
      const double t = p.x1 + 2.0 * p.x2 - 7.0;
      const double u = 2.0 * p.x1 + p.x2 - 5.0;
      return {2.0 * t + 4.0 * u, 4.0 * t + 2.0 * u};
    }
    case TestFn::Kind::Ellipse:
      return {2.0 * p.x1, 2.0 * fn.ellipse_coeff() * p.x2};
  }
  return {0.0, 0.0};
}

Point2 to_uv(const TestFn& fn, Point2 p) {
  switch (fn.kind()) {
    case TestFn::Kind::Rosenbrock:
      return {10.0 * (p.x1 * p.x1 - p.x2), p.x1 - 1.0};
    case TestFn::Kind::Booth:
      return {p.x1 + 2.0 * p.x2 - 7.0, 2.0 * p.x1 + p.x2 - 5.0};
    case TestFn::Kind::Ellipse:
      return {p.x1, std::sqrt(fn.ellipse_coeff()) * p.x2};
  }
  return p;
}

Point2 from_uv(const TestFn& fn, Point2 q) {
  switch (fn.kind()) {
    case TestFn::Kind::Rosenbrock: {
      const double x1 = q.x2 + 1.0;
      return {x1, x1 * x1 - 0.1 * q.x1};
    }
    case TestFn::Kind::Booth:
      return {-q.x1 / 3.0 + 2.0 * q.x2 / 3.0 + 1.0, 2.0 * q.x1 / 3.0 - q.x2 / 3.0 + 3.0};
    case TestFn::Kind::Ellipse:
      return {q.x1, q.x2 / std::sqrt(fn.ellipse_coeff())};
  }
  return q;
}

Point2 rotate(const TestFn& fn, double theta, Point2 p) {
  const Point2 q = to_uv(fn, p);
  const double c = std::cos(theta), s = std::sin(theta);
  const Point2 r{c * q.x1 - s * q.x2, s * q.x1 + c * q.x2};
  return from_uv(fn, r);
}

}  // namespace teleport
