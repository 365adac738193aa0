#pragma once

namespace metldpc {

// Mean cap for consistent-Gaussian density parameters; J is 1 to double
// precision far below this.
inline constexpr double kMaxDensityMean = 2000.0;

// Mutual information between a uniform bit and an LLR ~ N(mu, 2 mu):
//   J(mu) = 1 - E[ log2(1 + exp(-X)) ].
// Monotone increasing, J(0) = 0, J(inf) = 1.
double j_function(double mu);

// Monotone inverse on [0, 1]; saturates at kMaxDensityMean.
// Satisfies |J(j_inverse(I)) - I| <= 1e-8 away from the saturated end.
double j_inverse(double mi);

}  // namespace metldpc
