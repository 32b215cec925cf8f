/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include "lqgsi/model.hpp"

namespace lqgsi::reference {

// Four-state benchmark plant used for the rate/cost trade-off curves.

Mat plant_A();
Mat plant_B();
Mat plant_W();

/// [0_{r x (4-r)}, I_r]; r = 0 gives a 0 x 4 matrix.
Mat partial_C(int r);

/// 3 x 4 observation matrix nearly orthogonal to the eigenvector of the
/// eigenvalue near -1.7124 (|C v| is about 3e-3), so y barely sees that mode.
Mat blind_C();

/// C = I and V = I / rho; rho = 0 means no side observation at all.
SystemModel snr_model(double rho);

/// Given C with V = I.
SystemModel observation_model(const Mat& C);

/// Q = R = I with the given budget.
CostModel unit_cost(double gamma);

}  // namespace lqgsi::reference
