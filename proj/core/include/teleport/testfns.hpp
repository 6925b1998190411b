#pragma once

#include <stdexcept>

namespace teleport {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

// Two-variable optimization test functions with a rotational symmetry that
// becomes plain SO(2) after the change of variables h (see to_uv/from_uv):
// each loss equals ||h(p)||^2, so rotating in (u, v) space leaves it fixed.
class TestFn {
 public:
  enum class Kind { Rosenbrock, Booth, Ellipse };

  static TestFn rosenbrock() { return TestFn(Kind::Rosenbrock, 1.0); }
  static TestFn booth() { return TestFn(Kind::Booth, 1.0); }
  static TestFn ellipse(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("ellipse coefficient must be positive");
    return TestFn(Kind::Ellipse, a);
  }

  Kind kind() const { return kind_; }
  double ellipse_coeff() const { return a_; }

 private:
  TestFn(Kind k, double a) : kind_(k), a_(a) {}
  Kind kind_;
  double a_;
};

double eval(const TestFn& fn, Point2 p);
Point2 grad(const TestFn& fn, Point2 p);

// Change of variables u,v with eval(fn, p) == u^2 + v^2 and its inverse.
Point2 to_uv(const TestFn& fn, Point2 p);
Point2 from_uv(const TestFn& fn, Point2 q);

// The group action: pull p to (u,v), rotate by theta, push back.
Point2 rotate(const TestFn& fn, double theta, Point2 p);

}  // namespace teleport
