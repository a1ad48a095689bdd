/**
 * Copyright 2026 The ctrla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Special functions needed by the response-curve solver and the statistics.

namespace ctrla::special {

// x with erf(x) = y for y in [0, 1), found by bisection on std::erf until the
// bracket is narrower than abs_tol. Throws std::domain_error outside [0, 1).
double erfinv_bisect(double y, double abs_tol = 1e-10);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Student t with df degrees of freedom (df > 0, need not be integral).
double student_t_cdf(double t, double df);
double student_t_sf(double t, double df);  // P(T > t)
double student_t_quantile(double p, double df);

}  // namespace ctrla::special
