// Copyright 2026 The kdescent Authors
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
//
// Minimal use of the library: sample a random circuit objective, run
// gradient descent and kernel descent from the same start, print the values.

#include <kdescent/kdescent.hpp>

#include <cstdio>

int main() {
    using namespace kdescent;
    RngStream rng = RngStream::derive(7, "quickstart", 0);
    const SampledInstance s = sample_instance(rng, 4, 4, ObservableKind::SinglePauli);

    const DescentTrace gd = gradient_descent(s.instance, s.theta0, 1.0, 10);

    DescentConfig cfg;
    cfg.algorithm = Algorithm::KernelDescent;
    cfg.order = 1;
    cfg.iterations = 10;
    cfg.learning_rate = 1.0;
    cfg.inner = FixedStepsPolicy{100, true};
    const DescentTrace kd = kernel_descent(s.instance, s.theta0, cfg);

    std::printf("iter        gd        kd\n");
    for (std::size_t t = 0; t < gd.objective_values.size(); ++t) {
        std::printf("%4zu  %8.5f  %8.5f\n", t, gd.objective_values[t],
                    kd.objective_values[t]);
    }
    std::printf("evaluations: gd %llu, kd %llu\n",
                static_cast<unsigned long long>(gd.total_evals),
                static_cast<unsigned long long>(kd.total_evals));
    return 0;
}
