// Copyright 2026 The ering Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ering {

/// Returns f(x) and writes the gradient into `grad` when it is non-empty.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct MinimizeOptions {
    int max_iterations = 2000;
    double gradient_tolerance = 1e-13;
    double function_tolerance = 1e-16;
    double parameter_tolerance = 1e-14;
};

struct MinimizeResult {
    std::vector<double> x;
    double value;
    double gradient_max_norm;
    int iterations;
    bool converged;
};

/// Unconstrained quasi-Newton (BFGS, Wolfe line search) minimization.
MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                             const MinimizeOptions& options = {});

}  // namespace ering
