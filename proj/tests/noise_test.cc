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
#include <random>

#include "entfilter/analysis.h"
#include "entfilter/engine.h"
#include "entfilter/errors.h"
#include "entfilter/noise.h"

namespace entfilter {
namespace {

std::array<const InternalState *, 4> members(const PhotonEnsemble &e) {
    return {&e.s1, &e.s2, &e.a1, &e.a2};
}

TEST(Visibility, OverlapsReproduceGram) {
    const VisibilityParams params;
    PhotonEnsemble e = internal_states_from_visibilities(params);
    auto m = members(e);
    const double same = std::sqrt(0.96);
    const double cross = std::sqrt(0.85);
    const double expected[4][4] = {
        {1, same, cross, cross},
        {same, 1, cross, cross},
        {cross, cross, 1, same},
        {cross, cross, same, 1},
    };
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(m[i]->coefficients().norm(), 1.0, 1e-12);
        for (int j = 0; j < 4; ++j) {
            Complex o = m[i]->overlap(*m[j]);
            EXPECT_NEAR(o.real(), expected[i][j], 1e-10) << i << "," << j;
            EXPECT_NEAR(o.imag(), 0.0, 1e-12);
        }
    }
}

TEST(Visibility, OverlapSquaredIsHomVisibility) {
    const VisibilityParams params{0.9, 0.7};
    PhotonEnsemble e = internal_states_from_visibilities(params, 6);
    EXPECT_EQ(e.s1.dim(), 6u);
    auto visibility = [](const InternalState &a, const InternalState &b) {
        return 1 - 2 * hom_coincidence(std::abs(a.overlap(b)));
    };
    EXPECT_NEAR(visibility(e.s1, e.s2), 0.9, 1e-10);
    EXPECT_NEAR(visibility(e.a1, e.a2), 0.9, 1e-10);
    EXPECT_NEAR(visibility(e.s1, e.a1), 0.7, 1e-10);
    EXPECT_NEAR(visibility(e.s2, e.a1), 0.7, 1e-10);
}

TEST(Visibility, PerfectVisibilityGivesIdenticalPhotons) {
    PhotonEnsemble e = internal_states_from_visibilities({1, 1});
    for (auto *p : members(e)) {
        EXPECT_NEAR(std::abs(p->overlap(e.s1)), 1.0, 1e-12);
    }
}

TEST(Visibility, RandomFeasibleParameters) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        VisibilityParams p{u(rng), u(rng)};
        // Eigenvalues of the Gram matrix in closed form.
        const double s = std::sqrt(p.v_same), c = std::sqrt(p.v_cross);
        const double lowest = std::min({1 - s, 1 + s - 2 * c});
        if (lowest < -1e-9) {
            EXPECT_THROW(internal_states_from_visibilities(p), InfeasibleVisibilities);
            continue;
        }
        if (lowest < 1e-9) {
            continue;
        }
        PhotonEnsemble e = internal_states_from_visibilities(p);
        EXPECT_NEAR(e.s1.overlap(e.s2).real(), s, 1e-9);
        EXPECT_NEAR(e.s2.overlap(e.a2).real(), c, 1e-9);
    }
}

TEST(Visibility, InfeasibleReportsEigenvalue) {
    try {
        internal_states_from_visibilities({0, 1});
        FAIL();
    } catch (const InfeasibleVisibilities &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleVisibilities);
        // (1, 1, -1, -1) is an eigenvector with eigenvalue 1 + 0 - 2 = -1.
        Eigen::Vector4d v(1, 1, -1, -1);
        const double oracle = v.dot(visibility_gram({0, 1}) * v) / v.squaredNorm();
        EXPECT_NEAR(oracle, -1.0, 1e-12);
        EXPECT_NEAR(e.min_eigenvalue(), oracle, 1e-9);
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
    }
}

TEST(Visibility, RangeAndDimensionChecks) {
    EXPECT_THROW(visibility_gram({1.2, 0.5}), Error);
    EXPECT_THROW(visibility_gram({0.5, -0.1}), Error);
    try {
        internal_states_from_visibilities({}, 3);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Configuration);
    }
}

TEST(NoisyTables, IdealVisibilitiesGiveIdealTables) {
    NoisyTruthTables t = simulate_noisy_truth_tables({1, 1});
    Eigen::Matrix4d zz = Eigen::Matrix4d::Zero();
    zz(0, 0) = zz(3, 3) = 1.0 / 16;
    EXPECT_LT((t.zz.entries - zz).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(fidelity_from_table(t.zz), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_from_table(t.xy), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_from_table(t.xx), 1.0, 1e-12);
    EXPECT_NEAR(t.xx.entries.sum(), 4.0 / 32, 1e-12);
}

TEST(NoisyTables, VerticalPairUnaffectedByDistinguishability) {
    // Both ancillas reach D with probability 1/2 each, the attenuators pass 1/2 each.
    const double oracle = 0.5 * 0.5 * 0.5 * 0.5;
    for (VisibilityParams p : {VisibilityParams{1, 1}, VisibilityParams{0.96, 0.85}, VisibilityParams{0.5, 0.6}}) {
        NoisyTruthTables t = simulate_noisy_truth_tables(p);
        EXPECT_NEAR(t.zz.entries(3, 3), oracle, 1e-12);
        EXPECT_NEAR(t.zz.entries.row(3).sum(), oracle, 1e-12);
    }
}

TEST(NoisyTables, DefaultVisibilities) {
    for (auto variant : {FilterVariant::Ppbs, FilterVariant::Original}) {
        NoiseOptions options;
        options.variant = variant;
        NoisyTruthTables t = simulate_noisy_truth_tables({}, options);
        const double zz = fidelity_from_table(t.zz);
        const double xy = fidelity_from_table(t.xy);
        const double xx = fidelity_from_table(t.xx);
        EXPECT_GT(zz, xy);
        EXPECT_GT(zz, xx);
        EXPECT_LT(zz, 1.0);
        EXPECT_GT(xx, 0.5);
        EXPECT_TRUE(assumption_check(t.zz).holds);
        for (const auto &rho : t.x_outputs) {
            EXPECT_LT(rho.hermiticity_error(), 1e-12);
            EXPECT_GT(rho.min_eigenvalue(), -1e-12);
        }
    }
}

TEST(NoisyTables, VariantsAgreeUnderNoise) {
    NoiseOptions a, b;
    a.variant = FilterVariant::Ppbs;
    b.variant = FilterVariant::Original;
    NoisyTruthTables ta = simulate_noisy_truth_tables({0.9, 0.8}, a);
    NoisyTruthTables tb = simulate_noisy_truth_tables({0.9, 0.8}, b);
    EXPECT_LT((ta.xy.entries - tb.xy.entries).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((ta.zz.entries - tb.zz.entries).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NoisyTables, FidelitiesFallWithCrossVisibility) {
    double prev_zz = 2, prev_xy = 2, prev_xx = 2;
    for (double vc : {1.0, 0.95, 0.9, 0.85, 0.8}) {
        NoisyTruthTables t = simulate_noisy_truth_tables({1.0, vc});
        const double zz = fidelity_from_table(t.zz);
        const double xy = fidelity_from_table(t.xy);
        const double xx = fidelity_from_table(t.xx);
        EXPECT_LT(zz, prev_zz + 1e-12) << vc;
        EXPECT_LT(xy, prev_xy + 1e-12) << vc;
        EXPECT_LT(xx, prev_xx + 1e-12) << vc;
        prev_zz = zz;
        prev_xy = xy;
        prev_xx = xx;
    }
    EXPECT_LT(prev_xx, 0.8);
}

TEST(NoisyTables, DetectorModelsAgreeForSinglePairs) {
    NoiseOptions nr;
    nr.detector = DetectorModel::NumberResolving;
    NoisyTruthTables a = simulate_noisy_truth_tables({});
    NoisyTruthTables b = simulate_noisy_truth_tables({}, nr);
    EXPECT_LT((a.xx.entries - b.xx.entries).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NoisyCircuit, SplitterErrorShiftsOnlyPartialReflectances) {
    NoiseOptions options;
    options.splitter_reflectance_error = 0.03;
    CircuitDocument base = build_filter_circuit(FilterVariant::Ppbs);
    CircuitDocument doc = noisy_filter_circuit(options);
    ASSERT_EQ(base.circuit.elements.size(), doc.circuit.elements.size());
    int shifted = 0;
    for (std::size_t k = 0; k < doc.circuit.elements.size(); ++k) {
        auto *a = std::get_if<BeamSplitter>(&base.circuit.elements[k].kind);
        auto *b = std::get_if<BeamSplitter>(&doc.circuit.elements[k].kind);
        if (!a) {
            EXPECT_TRUE(base.circuit.elements[k] == doc.circuit.elements[k]);
            continue;
        }
        EXPECT_EQ(a->reflectance_v, b->reflectance_v);
        if (a->reflectance_h > 0 && a->reflectance_h < 1) {
            EXPECT_NEAR(b->reflectance_h, a->reflectance_h + 0.03, 1e-15);
            shifted++;
        } else {
            EXPECT_EQ(a->reflectance_h, b->reflectance_h);
        }
    }
    EXPECT_EQ(shifted, 4);

    NoisyTruthTables t = simulate_noisy_truth_tables({1, 1}, options);
    EXPECT_LT(fidelity_from_table(t.xy), 1.0 - 1e-6);
}

TEST(Background, DoublePairFromAncillaSourcesAtIdealVisibility) {
    BackgroundResult bg = background_double_pair({1, 1});
    EXPECT_LT(bg.probability, 1e-12);
}

TEST(Background, OnlyHorizontalPairsAtDefaultVisibility) {
    BackgroundResult bg = background_double_pair({});
    EXPECT_GT(bg.probability, 1e-4);
    EXPECT_NEAR(bg.distribution[0], 1.0, 1e-9);
    EXPECT_NEAR(bg.weights.sum(), bg.probability, 1e-12);

    NoiseOptions nr;
    nr.detector = DetectorModel::NumberResolving;
    BackgroundResult b2 = background_double_pair({}, nr);
    EXPECT_NEAR(b2.probability, bg.probability, 1e-12);
}

TEST(Background, GrowsAsPhotonsBecomeDistinguishable) {
    const double p1 = background_double_pair({0.99, 0.95}).probability;
    const double p2 = background_double_pair({0.96, 0.85}).probability;
    const double p3 = background_double_pair({0.9, 0.75}).probability;
    EXPECT_LT(p1, p2);
    EXPECT_LT(p2, p3);
}

}  // namespace
}  // namespace entfilter
