#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corrode/config.hpp"
#include "corrode/fem.hpp"
#include "corrode/mesh.hpp"
#include "corrode/phasefield.hpp"

using namespace corrode;

namespace {

constexpr double kFt = 3.9e6, kGf = 114.0, kEtilde = 40e9, kEll = 3e-3;

// Cornelissen constants written out independently of the library.
constexpr double kBetaK = 2.7092;   // 2 * 1.3546
constexpr double kBetaW = 2.56805;  // 5.1361 / 2

double oracle_a2() { return 2.0 * std::pow(kBetaK, 2.0 / 3.0) - 2.5; }
double oracle_a3() { return kBetaW * kBetaW / 2.0 - oracle_a2() - 1.0; }

struct Patch {
    Mesh mesh = generate_bar_mesh(0.004, 0.004, 1e-3);
    ScalarSpace space = make_scalar_space(mesh, [](Region) { return true; });

    PhaseFieldModel model(ModelVariant v, double ell = kEll) const {
        return make_phase_field_model(v, SofteningLaw::Cornelissen, ell,
                                      std::vector<MaterialPoint>(space.elements.size(), {kFt, kGf, kEtilde}));
    }
};

}  // namespace

TEST(Calibration, CornelissenShapeConstants) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ft(1e6, 6e6), gf(40, 200), e(20e9, 50e9), ell(1e-3, 10e-3);
    for (int i = 0; i < 50; ++i) {
        const auto c = calibrate_cornelissen(ft(rng), gf(rng), e(rng), ell(rng));
        EXPECT_NEAR(c.a2, 1.3868, 1e-3);
        EXPECT_NEAR(c.a3, 0.9107, 1e-3);
        EXPECT_NEAR(c.a2, oracle_a2(), 1e-4);
        EXPECT_NEAR(c.a3, oracle_a3(), 1e-4);
    }
}

TEST(Calibration, IrwinLengthAndA1For147DayConcrete) {
    const auto c = calibrate_cornelissen(kFt, kGf, kEtilde, kEll);
    EXPECT_NEAR(c.irwin_length, 0.2998, 1e-4);
    EXPECT_NEAR(c.a1, 127.2, 0.1);
    EXPECT_FALSE(c.length_warning);
}

TEST(Calibration, LengthWarningAboveBound) {
    const auto c = calibrate_cornelissen(kFt, kGf, kEtilde, 0.3);
    EXPECT_TRUE(c.length_warning);
    const auto small_body = calibrate_cornelissen(kFt, kGf, kEtilde, 3e-3, 0.1);
    EXPECT_TRUE(small_body.length_warning);
}

TEST(Calibration, ThresholdIdentity) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ft(0.5e6, 10e6), gf(10, 500), e(5e9, 80e9), ell(0.2e-3, 20e-3);
    for (int i = 0; i < 100; ++i) {
        const double f = ft(rng), g = gf(rng), et = e(rng), l = ell(rng);
        const auto c = calibrate_cornelissen(f, g, et, l);
        const double threshold = f * f / (2.0 * et);
        const double rhs = 2.0 * g / (M_PI * l);
        EXPECT_NEAR(c.a1 * threshold, rhs, 1e-12 * rhs);
    }
}

TEST(Degradation, EndpointsAndMidValue) {
    SofteningCalibration c;
    c.a1 = 127.24;
    c.a2 = 1.3868;
    c.a3 = 0.9107;
    EXPECT_EQ(degradation(0.0, c).g, 1.0);
    EXPECT_EQ(degradation(1.0, c).g, 0.0);
    const double oracle = 0.25 / (0.25 + 127.24 * 0.5 * (1.0 + 1.3868 * 0.5 + 0.9107 * 0.25));
    EXPECT_NEAR(degradation(0.5, c).g, oracle, 1e-15);
    EXPECT_NEAR(degradation(0.5, c).g, 2.04e-3, 0.01e-3);
    EXPECT_EQ(degradation(0.0, c).dg, -127.24);
}

TEST(Degradation, DerivativesMatchFiniteDifferences) {
    const auto c = calibrate_cornelissen(kFt, kGf, kEtilde, kEll);
    for (double phi = 0.05; phi < 0.96; phi += 0.1) {
        const double h = 1e-6;
        const double fd = (degradation(phi + h, c).g - degradation(phi - h, c).g) / (2 * h);
        const double fd2 = (degradation(phi + h, c).dg - degradation(phi - h, c).dg) / (2 * h);
        EXPECT_NEAR(degradation(phi, c).dg, fd, 1e-6 * std::abs(fd) + 1e-9);
        EXPECT_NEAR(degradation(phi, c).d2g, fd2, 1e-5 * std::abs(fd2) + 1e-7);
    }
}

TEST(Degradation, MonotoneForShippedCalibrations) {
    for (const char* age : {"28d", "147d"}) {
        const ConcreteParams p = concrete_preset(age);
        const double et = derive_lame_and_moduli(p.young_modulus, p.poisson_ratio).elongation;
        const auto c = calibrate_cornelissen(p.tensile_strength, p.fracture_energy, et, kEll);
        double prev = 1.0;
        for (int i = 1; i <= 1000; ++i) {
            const double g = degradation(i * 1e-3, c).g;
            EXPECT_LT(g, prev) << age << " phi " << i * 1e-3;
            prev = g;
        }
    }
}

TEST(Dissipation, Values) {
    EXPECT_EQ(dissipation(0.0).alpha, 0.0);
    EXPECT_EQ(dissipation(0.0).dalpha, 2.0);
    EXPECT_EQ(dissipation(1.0).alpha, 1.0);
    EXPECT_EQ(dissipation(1.0).dalpha, 0.0);
    EXPECT_EQ(dissipation(0.25).alpha, 0.4375);
    EXPECT_EQ(dissipation(0.25).dalpha, 1.5);
}

TEST(At2Length, RelationAndRoundTrip) {
    EXPECT_NEAR(at2_length_from_strength(3.9e6, 36e9, 114.0), 28.5e-3, 0.05e-3);
    EXPECT_NEAR(at2_strength_from_length(72.4e-3, 36e9, 114.0), 2.45e6, 0.01e6);
    for (double ft : {1e6, 2.2e6, 3.9e6, 7e6}) {
        const double ell = at2_length_from_strength(ft, 36e9, 114.0);
        EXPECT_NEAR(at2_strength_from_length(ell, 36e9, 114.0), ft, 1e-12 * ft);
    }
}

TEST(PhaseFieldAssembly, TangentMatchesFiniteDifferences) {
    Patch p;
    for (ModelVariant v : {ModelVariant::PFCZM, ModelVariant::AT2, ModelVariant::StressBased}) {
        const PhaseFieldModel model = p.model(v);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.05, 0.9), hu(100.0, 5000.0);
        Vector phi(static_cast<Eigen::Index>(p.space.size()));
        for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = u(rng);
        std::vector<double> history(p.space.elements.size());
        for (double& h : history) h = hu(rng);

        PatternAssembler tangent(p.space.size(), 3, scalar_element_dofs(p.space, p.mesh));
        Vector r0;
        assemble_phasefield(p.mesh, p.space, model, history, phi, &tangent, r0);
        const Eigen::MatrixXd k = Eigen::MatrixXd(tangent.matrix());
        const double scale = k.cwiseAbs().maxCoeff();
        double worst = 0.0;
        for (Eigen::Index j = 0; j < phi.size(); ++j) {
            const double h = 1e-6;
            Vector plus = phi, minus = phi, rp, rm;
            plus[j] += h;
            minus[j] -= h;
            assemble_phasefield(p.mesh, p.space, model, history, plus, nullptr, rp);
            assemble_phasefield(p.mesh, p.space, model, history, minus, nullptr, rm);
            const Vector col = (rp - rm) / (2 * h);
            worst = std::max(worst, (col - k.col(j)).cwiseAbs().maxCoeff() / scale);
        }
        EXPECT_LE(worst, 1e-5) << to_string(v);
    }
}

TEST(PhaseFieldAssembly, At2IntactStateHasZeroResidual) {
    Patch p;
    const PhaseFieldModel model = p.model(ModelVariant::AT2);
    const Vector phi = Vector::Zero(static_cast<Eigen::Index>(p.space.size()));
    Vector r;
    assemble_phasefield(p.mesh, p.space, model, std::vector<double>(p.space.elements.size(), 0.0), phi, nullptr, r);
    EXPECT_EQ(r.cwiseAbs().maxCoeff(), 0.0);
}

TEST(PhaseFieldSolve, NoDrivingForceKeepsPreviousField) {
    Patch p;
    for (ModelVariant v : {ModelVariant::PFCZM, ModelVariant::AT2, ModelVariant::StressBased}) {
        PhaseFieldSolver solver(p.mesh, p.space, p.model(v));
        const std::vector<double> zero(p.space.elements.size(), 0.0);
        for (double level : {0.0, 0.3}) {
            const Vector prev = Vector::Constant(static_cast<Eigen::Index>(p.space.size()), level);
            Vector phi = prev;
            solver.solve(zero, prev, phi);
            EXPECT_LE((phi - prev).cwiseAbs().maxCoeff(), 1e-12) << to_string(v) << " " << level;
        }
    }
}

TEST(PhaseFieldSolve, ThresholdHistoryIsNoGrowthEquilibrium) {
    Patch p;
    const PhaseFieldModel model = p.model(ModelVariant::PFCZM);
    const double threshold = kFt * kFt / (2.0 * kEtilde);
    EXPECT_NEAR(model.elements.front().threshold, threshold, 1e-12 * threshold);
    // Nudged above the threshold so the quiescent shortcut is not taken.
    const std::vector<double> history(p.space.elements.size(), threshold * (1.0 + 1e-12));
    PhaseFieldSolver solver(p.mesh, p.space, model);
    const Vector prev = Vector::Zero(static_cast<Eigen::Index>(p.space.size()));
    Vector phi = Vector::Constant(prev.size(), 0.01);
    solver.solve(history, prev, phi);
    EXPECT_LE(phi.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PhaseFieldSolve, UniformHistoryConvergesToScalarRoot) {
    Patch p;
    const PhaseFieldModel model = p.model(ModelVariant::PFCZM);
    const double h = 3.0 * kFt * kFt / (2.0 * kEtilde);
    const auto cal = calibrate_cornelissen(kFt, kGf, kEtilde, kEll);
    const double c_loc = kGf / (M_PI * kEll);
    // Bisection on g'(phi) H + c_loc (2 - 2 phi) = 0.
    auto f = [&](double phi) { return degradation(phi, cal).dg * h + c_loc * (2.0 - 2.0 * phi); };
    double lo = 0.0, hi = 1.0;
    ASSERT_LT(f(lo), 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    PhaseFieldSolver solver(p.mesh, p.space, model);
    const Vector prev = Vector::Zero(static_cast<Eigen::Index>(p.space.size()));
    Vector phi = prev;
    const auto report = solver.solve(std::vector<double>(p.space.elements.size(), h), prev, phi);
    EXPECT_FALSE(report.skipped);
    for (Eigen::Index i = 0; i < phi.size(); ++i) EXPECT_NEAR(phi[i], 0.5 * (lo + hi), 1e-8);
}

TEST(PhaseFieldSolve, StressBasedBelowStrengthStaysIntact) {
    const MaterialPoint mat{kFt, kGf, kEtilde};
    EXPECT_EQ(driving_force(ModelVariant::StressBased, {0.9 * kFt, 0.1 * kFt, 0.0}, {}, mat, 1.0), 0.0);
    EXPECT_EQ(driving_force(ModelVariant::StressBased, {-5 * kFt, -kFt, 0.0}, {}, mat, 1.0), 0.0);
    EXPECT_NEAR(driving_force(ModelVariant::StressBased, {2 * kFt, 0.0, 0.0}, {}, mat, 1.0), 3.0, 1e-12);
    Patch p;
    PhaseFieldSolver solver(p.mesh, p.space, p.model(ModelVariant::StressBased));
    const Vector prev = Vector::Zero(static_cast<Eigen::Index>(p.space.size()));
    Vector phi = prev;
    solver.solve(std::vector<double>(p.space.elements.size(), 0.0), prev, phi);
    EXPECT_EQ(phi.cwiseAbs().maxCoeff(), 0.0);
}

TEST(PhaseFieldSolve, BoundsHoldUnderLargeDrivingForce) {
    Patch p;
    const PhaseFieldModel model = p.model(ModelVariant::PFCZM);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> hu(0.0, 1e6);
    std::vector<double> history(p.space.elements.size());
    for (double& h : history) h = hu(rng);
    PhaseFieldSolver solver(p.mesh, p.space, model);
    const Vector prev = Vector::Constant(static_cast<Eigen::Index>(p.space.size()), 0.2);
    Vector phi = prev;
    solver.solve(history, prev, phi);
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        EXPECT_GE(phi[i], prev[i] - 1e-12);
        EXPECT_LE(phi[i], 1.0 + 1e-12);
    }
}
