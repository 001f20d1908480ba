#include <doctest.h>

#include "qse/fock.hpp"

using namespace qse;

TEST_CASE("coherent_fock matches direct evaluation") {
    SUBCASE("vacuum") {
        const auto c = coherent_fock(0.0, 2);
        CHECK(c.amps[0] == Complex(1.0));
        CHECK(c.amps[1] == Complex(0.0));
        CHECK(c.amps[2] == Complex(0.0));
        CHECK(c.norm_deficit == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("alpha = 0.1 amplitudes to 5 decimals") {
        const auto c = coherent_fock(0.1, 2);
        CHECK(std::abs(c.amps[0] - 0.99501) < 5e-6);
        CHECK(std::abs(c.amps[1] - 0.09950) < 5e-6);
        CHECK(std::abs(c.amps[2] - 0.00704) < 5e-6);
        CHECK(c.norm_deficit < 1e-6);  // Poisson tail above n = 2
        CHECK(c.norm_deficit > 0.0);
    }
    SUBCASE("oracle: e^{-|a|^2/2} a^n / sqrt(n!) for complex alpha") {
        const Complex alpha(0.12, -0.07);
        const auto c = coherent_fock(alpha, 6);
        for (int n = 0; n <= 6; ++n) {
            const Complex expect =
                std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
            CHECK(std::abs(c.amps[n] - expect) < 1e-14);
        }
    }
    SUBCASE("deficit shrinks monotonically with n_max for |alpha| <= 0.3") {
        for (double mag : {0.05, 0.15, 0.3}) {
            double prev = coherent_fock(mag, 2).norm_deficit;
            for (int n_max = 3; n_max <= 8; ++n_max) {
                const double d = coherent_fock(mag, n_max).norm_deficit;
                CHECK(d <= prev + 1e-18);
                prev = d;
            }
        }
    }
    SUBCASE("n_max below 2 is rejected") {
        CHECK_THROWS_AS(coherent_fock(0.1, 1), std::invalid_argument);
    }
}

TEST_CASE("normalize") {
    FockVector v(3);
    v << 2.0, 0.0, 0.0;
    CHECK(normalize(v)[0] == Complex(1.0));

    v << 0.0, 1.0, 1.0;
    const auto n = normalize(v);
    CHECK(std::abs(n[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(n[2] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(n.norm() - 1.0) < 1e-12);

    v << 0.0, 0.0, 0.0;
    CHECK_THROWS_WITH_AS(normalize(v), "null state", std::invalid_argument);
}

TEST_CASE("fidelity") {
    DensityMatrix rho = DensityMatrix::Zero(3, 3);
    FockVector psi = FockVector::Zero(3);

    SUBCASE("projector onto itself") {
        rho(1, 1) = 1.0;
        psi[1] = 1.0;
        CHECK(fidelity(rho, psi) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("orthogonal") {
        rho(0, 0) = 1.0;
        psi[1] = 1.0;
        CHECK(fidelity(rho, psi) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("mixed against superposition") {
        rho(0, 0) = 0.5;
        rho(1, 1) = 0.5;
        psi[0] = psi[1] = 1.0 / std::sqrt(2.0);
        CHECK(fidelity(rho, psi) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch") {
        FockVector small(2);
        small << 1.0, 0.0;
        CHECK_THROWS_AS(fidelity(rho, small), std::invalid_argument);
    }
    SUBCASE("equals the diagonal entry in a basis containing psi") {
        // random Hermitian PSD rho; F = <psi|rho|psi> is the (psi,psi) entry
        // of rho expressed in any orthonormal basis whose first vector is psi
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(4, 4);
        DensityMatrix r = m * m.adjoint();
        r /= r.trace().real();
        FockVector p = FockVector::Random(4);
        p = normalize(p);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(p);
        const Eigen::MatrixXcd Q = qr.householderQ();
        const Eigen::MatrixXcd in_basis = Q.adjoint() * r * Q;
        // column 0 of Q is psi up to a phase
        CHECK(std::abs(fidelity(r, p) - std::real(in_basis(0, 0))) < 1e-12);
    }
}

TEST_CASE("annihilation operator") {
    const auto a = annihilation(3);
    CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);

    FockVector vac = FockVector::Zero(4);
    vac[0] = 1.0;
    CHECK((a * vac).norm() == 0.0);

    // a a^dag = n + 1 on the interior block; commutator holds below n_max
    const Operator comm = a * a.adjoint() - a.adjoint() * a;
    for (int n = 0; n < 3; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-13);
}

TEST_CASE("quadrature operator convention") {
    // vacuum variance of Q_phi is 1/2 for every phase
    const int n_max = 8;
    FockVector vac = FockVector::Zero(n_max + 1);
    vac[0] = 1.0;
    for (double phi : {0.0, 0.7, 2.1}) {
        const auto q = quadrature_operator(phi, n_max);
        const double var = std::real(Complex(vac.adjoint() * q * q * vac));
        CHECK(var == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("density validation") {
    DensityMatrix good = DensityMatrix::Zero(3, 3);
    good(0, 0) = 0.5;
    good(1, 1) = 0.5;
    CHECK_NOTHROW(validate_density(good));

    DensityMatrix bad_trace = good * 2.0;
    CHECK_THROWS_AS(validate_density(bad_trace), std::invalid_argument);

    DensityMatrix bad_herm = good;
    bad_herm(0, 1) = Complex(0.0, 0.5);
    CHECK_THROWS_AS(validate_density(bad_herm), std::invalid_argument);

    DensityMatrix bad_psd = DensityMatrix::Zero(3, 3);
    bad_psd(0, 0) = 1.5;
    bad_psd(1, 1) = -0.5;
    CHECK_THROWS_AS(validate_density(bad_psd), std::invalid_argument);
}

TEST_CASE("embed pads with zeros") {
    FockVector v(3);
    v << 0.1, 0.2, 0.3;
    const auto e = embed(v, 5);
    CHECK(e.size() == 6);
    CHECK(e[2] == Complex(0.3));
    CHECK(e[5] == Complex(0.0));
}
