// Copyright 2026 The entfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "entfilter/elements.h"
#include "entfilter/engine.h"
#include "entfilter/mode_unitary.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace entfilter {
namespace {

using testing::Gen;

double distance(const FockState &a, const FockState &b) {
    double worst = 0;
    for (const auto &[key, amp] : a.raw_terms()) {
        auto it = b.raw_terms().find(key);
        worst = std::max(worst, std::abs(amp - (it == b.raw_terms().end() ? Complex(0) : it->second)));
    }
    for (const auto &[key, amp] : b.raw_terms()) {
        if (!a.raw_terms().contains(key)) {
            worst = std::max(worst, std::abs(amp));
        }
    }
    return worst;
}

struct Case {
    Circuit circuit;
    FockState input;
};

Case random_case(Gen &g, int max_photons) {
    const int paths = g.integer(1, 8);
    const std::size_t dim = static_cast<std::size_t>(g.integer(1, 2));
    Circuit c = testing::random_circuit(g, paths, g.integer(0, 12), dim);
    auto photons = testing::random_photons(g, *c.registry, g.integer(1, max_photons));
    FockState in = make_fock_input(photons, c.registry);
    return {std::move(c), std::move(in)};
}

TEST(Properties, EvolutionMatchesPermanentOracle) {
    Gen g(20261018);
    int checked = 0;
    for (int trial = 0; trial < 150; ++trial) {
        Case k = random_case(g, 4);
        const Eigen::MatrixXcd u = compose_circuit(k.circuit).matrix();
        FockState out = evolve(k.input, k.circuit);
        ASSERT_EQ(k.input.num_terms(), 1u);
        const auto [in_occ, in_amp] = k.input.terms().front();
        for (const auto &[occ, amp] : out.terms()) {
            Complex oracle = in_amp * testing::oracle_amplitude(in_occ.counts, occ.counts, u);
            ASSERT_LT(std::abs(amp - oracle), 1e-10) << "trial " << trial;
        }
        // Nothing is missing: the oracle terms already carry all of the norm.
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10) << "trial " << trial;
        checked++;
    }
    EXPECT_GE(checked, 100);
}

TEST(Properties, NormPreserved) {
    Gen g(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int paths = g.integer(1, 6);
        Circuit c = testing::random_circuit(g, paths, g.integer(1, 10), 2);
        FockState s = testing::random_state(g, c.registry, g.integer(1, 3), g.integer(1, 5));
        EXPECT_NEAR(evolve(s, c).norm_squared(), 1.0, 1e-10);
    }
}

TEST(Properties, InnerProductsPreserved) {
    Gen g(4);
    for (int trial = 0; trial < 60; ++trial) {
        Circuit c = testing::random_circuit(g, g.integer(2, 5), g.integer(1, 8), 1);
        const int n = g.integer(1, 3);
        FockState a = testing::random_state(g, c.registry, n, 4);
        FockState b = testing::random_state(g, c.registry, n, 4);
        EXPECT_LT(std::abs(inner_product(evolve(a, c), evolve(b, c)) - inner_product(a, b)), 1e-10);
    }
}

TEST(Properties, Linearity) {
    Gen g(5);
    for (int trial = 0; trial < 60; ++trial) {
        Circuit c = testing::random_circuit(g, g.integer(2, 6), g.integer(1, 8), 2);
        const int n = g.integer(1, 3);
        FockState a = testing::random_state(g, c.registry, n, 3);
        FockState b = testing::random_state(g, c.registry, n, 3);
        Complex x = g.gaussian_complex(), y = g.gaussian_complex();
        FockState lhs = evolve(a.scaled(x) + b.scaled(y), c);
        FockState rhs = evolve(a, c).scaled(x) + evolve(b, c).scaled(y);
        EXPECT_LT(distance(lhs, rhs), 1e-10);
    }
}

TEST(Properties, Composition) {
    Gen g(6);
    for (int trial = 0; trial < 60; ++trial) {
        const int paths = g.integer(1, 6);
        Circuit first = testing::random_circuit(g, paths, g.integer(0, 6), 2);
        Circuit second{first.registry, {}, {}};
        for (int i = g.integer(0, 6); i > 0; --i) {
            second.elements.push_back(testing::random_element(g, first.registry->paths()));
        }
        Circuit both = first;
        both.elements.insert(both.elements.end(), second.elements.begin(), second.elements.end());
        FockState s = testing::random_state(g, first.registry, g.integer(1, 3), 3);
        EXPECT_LT(distance(evolve(evolve(s, first), second), evolve(s, both)), 1e-10);

        const Eigen::MatrixXcd u = compose_circuit(both).matrix();
        const Eigen::MatrixXcd chained = compose_circuit(second).matrix() * compose_circuit(first).matrix();
        EXPECT_LT((u - chained).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(unitarity_error(u), 1e-12);
        EXPECT_TRUE(compose_circuit(both).acts_trivially_on_internal());
    }
}

TEST(Properties, PhotonNumberConserved) {
    Gen g(7);
    for (int trial = 0; trial < 80; ++trial) {
        Case k = random_case(g, 4);
        const int n = k.input.terms().front().first.total();
        for (const auto &[occ, amp] : evolve(k.input, k.circuit).terms()) {
            EXPECT_EQ(occ.total(), n);
        }
    }
}

TEST(Properties, HeraldBranchesPartitionProbability) {
    Gen g(8);
    for (int trial = 0; trial < 80; ++trial) {
        const int paths = g.integer(2, 6);
        Circuit c = testing::random_circuit(g, paths, g.integer(1, 8), 2);
        FockState out = evolve(make_fock_input(testing::random_photons(g, *c.registry, g.integer(1, 4)), c.registry), c);
        HeraldSpec spec;
        spec.detectors.push_back({"p0", g.integer(0, 1) ? DetectorModel::Threshold : DetectorModel::NumberResolving,
                                  g.integer(1, 2)});
        HeraldResult r = herald(out, spec);
        double sum = 0;
        for (const auto &b : r.branches) {
            sum += b.weight;
            EXPECT_NEAR(b.state.norm_squared(), b.weight, 1e-12);
        }
        EXPECT_NEAR(sum, r.probability, 1e-12);
        EXPECT_LE(r.probability, 1.0 + 1e-10);

        // A threshold click at count 1 is the complement of the vacuum outcome.
        HeraldSpec none;
        none.detectors.push_back({"p0", DetectorModel::NumberResolving, 0});
        HeraldSpec click;
        click.detectors.push_back({"p0", DetectorModel::Threshold, 1});
        EXPECT_NEAR(herald(out, none).probability + herald(out, click).probability, 1.0, 1e-10);
    }
}

}  // namespace
}  // namespace entfilter
