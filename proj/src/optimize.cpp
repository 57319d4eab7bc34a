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

#include "ering/optimize.hpp"

#include <algorithm>
#include <cmath>

#include <ceres/ceres.h>

namespace ering {

namespace {

class FunctionAdapter final : public ceres::FirstOrderFunction {
public:
    FunctionAdapter(const Objective& f, int n) : f_(f), n_(n) {}

    bool Evaluate(const double* x, double* cost, double* gradient) const override {
        std::span<double> grad = gradient ? std::span<double>(gradient, n_) : std::span<double>{};
        *cost = f_(std::span<const double>(x, n_), grad);
        return std::isfinite(*cost);
    }

    int NumParameters() const override { return n_; }

private:
    const Objective& f_;
    int n_;
};

}  // namespace

MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                             const MinimizeOptions& options) {
    const int n = static_cast<int>(x0.size());
    ceres::GradientProblem problem(new FunctionAdapter(f, n));

    ceres::GradientProblemSolver::Options opts;
    opts.line_search_direction_type = ceres::BFGS;
    opts.logging_type = ceres::SILENT;
    opts.max_num_iterations = options.max_iterations;
    opts.gradient_tolerance = options.gradient_tolerance;
    opts.function_tolerance = options.function_tolerance;
    opts.parameter_tolerance = options.parameter_tolerance;

    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(opts, problem, x0.data(), &summary);

    std::vector<double> grad(n);
    const double value = f(x0, grad);
    double gmax = 0.0;
    for (double g : grad)
        gmax = std::max(gmax, std::abs(g));

    return MinimizeResult{std::move(x0), value, gmax, static_cast<int>(summary.iterations.size()),
                          summary.termination_type == ceres::CONVERGENCE};
}

}  // namespace ering
