// Dirichlet-to-Neumann operator of the cut mapping torus, blockwise on base
// eigenspaces.  A block at eigenvalue nu^2 with spectral shift v = nu^2 +
// lambda + mu is
//
//   R = 2 sqrt(v) (e^{a sqrt(v)} - 1)/(e^{a sqrt(v)} + 1)
//       [ I + 2 e^{a sqrt(v)}/(e^{a sqrt(v)} - 1)^2 (I - (A + A^T)/2) ],
//
// with A the pull-back on the eigenspace, and all hyperbolic quotients in
// overflow-safe form.  The degenerate block nu = shift = 0 is (2/a)(I -
// (A + A^T)/2).
#pragma once

#include <vector>

#include "mtorus/linalg.hpp"

namespace mtorus {

struct DtnBlock {
  double nu2 = 0.0;
  double shift = 0.0;
  double interval_length = 0.0;
  Matrix matrix;  // symmetric positive semidefinite
};

// Solution of -psi'' + (nu^2 + shift) psi = 0 on [0, a] with psi(0) = datum
// and psi(a) = transported datum, evaluated through decaying exponentials.
struct BoundarySolution {
  double nu2 = 0.0;
  double shift = 0.0;
  double interval_length = 0.0;
  std::vector<double> datum;
  std::vector<double> transported;

  std::vector<double> value(double u) const;
  std::vector<double> derivative(double u) const;
};

BoundarySolution boundary_solution(double nu2, double shift, double a,
                                   std::vector<double> datum,
                                   std::vector<double> transported);

DtnBlock dtn_block(double nu2, double shift, double a, const Matrix& action,
                   const Matrix& inverse_action);

DtnBlock dtn_zero_mode(double a, const Matrix& action,
                       const Matrix& inverse_action);

}  // namespace mtorus
