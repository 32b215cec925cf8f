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
#include "lqgsi/reference_systems.hpp"

#include "lqgsi/error.hpp"

namespace lqgsi::reference {

Mat plant_A() {
  Mat A(4, 4);
  A << 0.12, 0.63, -0.52, 0.33,
       0.26, -1.28, 1.57, 1.13,
       -1.77, -0.30, 0.77, 0.25,
       -0.16, 0.20, -0.58, 0.56;
  return A;
}

Mat plant_B() {
  Mat B(4, 4);
  B << 0.66, -0.58, 0.03, -0.20,
       2.61, -0.91, 0.87, -0.07,
       -0.64, -1.12, -0.19, 0.61,
       0.93, 0.58, -1.18, -1.21;
  return B;
}

Mat plant_W() {
  Mat W(4, 4);
  W << 4.94, -0.10, 1.29, 0.35,
       -0.10, 5.55, 2.07, 0.31,
       1.29, 2.07, 2.02, 1.43,
       0.35, 0.31, 1.43, 3.10;
  return W;
}

Mat partial_C(int r) {
  if (r < 0 || r > 4) throw InvalidModel("partial_C: r must lie in [0, 4]");
  Mat C = Mat::Zero(r, 4);
  C.rightCols(r) = Mat::Identity(r, r);
  return C;
}

Mat blind_C() {
  Mat C(3, 4);
  C << 1, 1, 1, 3.75,
       2.11, 1, 1, 1,
       1, 1, 0, 4.56;
  return C;
}

SystemModel observation_model(const Mat& C) {
  const auto p = C.rows();
  return SystemModel::stationary(plant_A(), plant_B(), C, plant_W(), Mat::Identity(p, p),
                                 plant_W());
}

SystemModel snr_model(double rho) {
  if (rho < 0.0) throw InvalidModel("snr_model: rho must be >= 0");
  if (rho == 0.0) return observation_model(Mat::Zero(0, 4));
  return SystemModel::stationary(plant_A(), plant_B(), Mat::Identity(4, 4), plant_W(),
                                 Mat::Identity(4, 4) / rho, plant_W());
}

CostModel unit_cost(double gamma) {
  CostModel c;
  c.Q = {Mat::Identity(4, 4)};
  c.R = {Mat::Identity(4, 4)};
  c.gamma = gamma;
  return c;
}

}  // namespace lqgsi::reference
