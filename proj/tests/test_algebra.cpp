#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lieavg/algebra.hpp"
#include "oracles.hpp"

using namespace lieavg;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

VectorXd v3(double a, double b, double c) { return Vector3d(a, b, c); }

std::vector<LieAlgebra> builtins() {
  return {builtin_algebra("so3"), builtin_algebra("heisenberg3"), builtin_algebra("sine_truncated"),
          builtin_algebra("sine_truncated", {7, SineInertia::Laplacian})};
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("bracket fixtures") {
    const auto so3 = builtin_algebra("so3");
    const auto h3 = builtin_algebra("heisenberg3");
    CHECK(bracket(so3, {v3(1, 0, 0)}, {v3(0, 1, 0)}).coords == v3(0, 0, 1));
    CHECK(bracket(h3, {v3(1, 0, 0)}, {v3(0, 1, 0)}).coords == v3(0, 0, 1));
    CHECK(bracket(h3, {v3(1, 0, 0)}, {v3(0, 0, 1)}).coords == v3(0, 0, 0));
    oracle::Rng rng(1);
    for (const auto& A : builtins()) {
      const VectorXd X = rng.vector(A.dim());
      CHECK(oracle::max_abs(bracket(A, {X}, {X}).coords) < 1e-15);
    }
  }

  TEST_CASE("so3 bracket is the cross product") {
    const auto so3 = builtin_algebra("so3");
    oracle::Rng rng(2);
    for (int t = 0; t < 50; ++t) {
      const Vector3d X = rng.vector(3), Y = rng.vector(3);
      CHECK(oracle::max_abs(bracket(so3, {X}, {Y}).coords - oracle::cross(X, Y)) < 1e-15);
    }
  }

  TEST_CASE("pairing fixtures") {
    CHECK(pairing(DualElement::basis(3, 0), AlgebraElement::basis(3, 0)) == 1.0);
    CHECK(pairing(DualElement::basis(3, 0), AlgebraElement::basis(3, 1)) == 0.0);
    CHECK(pairing({v3(1, 2, 3)}, {v3(4, 5, 6)}) == 32.0);
    CHECK_THROWS_AS(pairing({v3(1, 2, 3)}, {VectorXd::Ones(2)}), DimensionError);
  }

  TEST_CASE("coadjoint fixtures against the basis-loop oracle") {
    const auto so3 = builtin_algebra("so3");
    const auto h3 = builtin_algebra("heisenberg3");
    const VectorXd a = coadjoint(so3, AlgebraElement::basis(3, 2), DualElement::basis(3, 0)).coords;
    CHECK(a == v3(0, -1, 0));
    CHECK(a == oracle::coadjoint(so3, Vector3d::UnitZ(), Vector3d::UnitX()));
    CHECK(coadjoint(so3, {v3(0.3, 1, 2)}, DualElement::zero(3)).coords == v3(0, 0, 0));
    const VectorXd b = coadjoint(h3, AlgebraElement::basis(3, 0), {v3(0, 0, 1)}).coords;
    CHECK(b == v3(0, 1, 0));
    CHECK(b == oracle::coadjoint(h3, Vector3d::UnitX(), Vector3d::UnitZ()));
  }

  TEST_CASE("coadjoint agrees with the oracle on random inputs") {
    oracle::Rng rng(3);
    for (const auto& A : builtins()) {
      for (int t = 0; t < 20; ++t) {
        const VectorXd X = rng.vector(A.dim()), mu = rng.vector(A.dim());
        CHECK(oracle::max_abs(coadjoint(A, {X}, {mu}).coords - oracle::coadjoint(A, X, mu)) < 1e-13);
      }
    }
  }

  TEST_CASE("euler_rhs fixtures") {
    const auto so3 = builtin_algebra("so3");
    const auto body = so3.with_inertia(Vector3d(1, 2, 3).asDiagonal());
    CHECK(euler_rhs(body, {v3(1, 0, 0)}).coords == v3(0, 0, 0));
    oracle::Rng rng(4);
    for (int t = 0; t < 10; ++t) {
      CHECK(oracle::max_abs(euler_rhs(so3, {rng.vector(3)}).coords) < 1e-15);
    }
    const auto h3 = builtin_algebra("heisenberg3");
    const VectorXd r = euler_rhs(h3, {v3(1, 1, 1)}).coords;
    CHECK(r == v3(1, -1, 0));
    const VectorXd m = rng.vector(3);
    const VectorXd hand = v3(m[1] * m[2], -m[0] * m[2], 0);
    CHECK(oracle::max_abs(euler_rhs(h3, {m}).coords - hand) < 1e-15);
    CHECK(oracle::max_abs(euler_rhs(body, {m}).coords - oracle::euler(body, m, VectorXd::Zero(3))) < 1e-14);
  }

  TEST_CASE("rigid body matches the classical Euler equations") {
    const auto body = builtin_algebra("so3").with_inertia(Vector3d(1, 2, 3).asDiagonal());
    const Vector3d m(0.3, -0.2, 0.9), I(1, 2, 3);
    const Vector3d omega = m.cwiseQuotient(I);
    // -ad*_omega m = omega x m: the body-frame equations for H = -<m, omega>/2.
    CHECK(oracle::max_abs(euler_rhs(body, {m}).coords - oracle::cross(omega, m)) < 1e-15);
  }

  TEST_CASE("lie_poisson_rhs") {
    const auto body = builtin_algebra("so3").with_inertia(Vector3d(1, 2, 3).asDiagonal());
    const VectorXd m = v3(0.3, -0.2, 0.9);
    const auto H = expr::Expression::parse("-(m1^2/1 + m2^2/2 + m3^2/3)/2");
    CHECK(oracle::max_abs(lie_poisson_rhs(body, H, {m}).coords - euler_rhs(body, {m}).coords) < 1e-8);
    CHECK(oracle::max_abs(lie_poisson_rhs(body, expr::Expression::parse("7"), {m}).coords) == 0.0);
    const VectorXd lin = lie_poisson_rhs(body, expr::Expression::parse("m3"), {m}).coords;
    CHECK(oracle::max_abs(lin - coadjoint(body, AlgebraElement::basis(3, 2), {m}).coords) < 1e-10);
  }

  TEST_CASE("averaging cocycle fixtures") {
    const auto so3 = builtin_algebra("so3");
    const auto E = averaging_cocycle(so3, AlgebraElement::basis(3, 2));
    CHECK(E.cocycle(AlgebraElement::basis(3, 0), AlgebraElement::basis(3, 1)) == -1.0);
    // <ad*_{e3} e1*, e2> from the basis-loop oracle
    CHECK(oracle::coadjoint(so3, Vector3d::UnitZ(), Vector3d::UnitX())[1] == -1.0);
    CHECK(averaging_cocycle(so3, AlgebraElement::zero(3)).W.isZero(0.0));
    oracle::Rng rng(5);
    for (const auto& base : builtins()) {
      const int n = base.dim();
      const LieAlgebra A = base.with_inertia((rng.vector(n).cwiseAbs().array() + 0.5).matrix().asDiagonal());
      const auto Ex = averaging_cocycle(A, {rng.vector(A.dim())});
      const AlgebraElement X{rng.vector(A.dim())};
      CHECK(std::abs(Ex.cocycle(X, X)) < 1e-14);
      CHECK(Ex.antisymmetry_residual() < 1e-14);
      CHECK(Ex.cocycle_identity_residual() < 1e-12);
    }
  }

  TEST_CASE("extended coadjoint fixtures") {
    const auto so3 = builtin_algebra("so3");
    const auto E = averaging_cocycle(so3, AlgebraElement::basis(3, 2));
    oracle::Rng rng(6);
    const AlgebraElement X{rng.vector(3)};
    const DualElement m{rng.vector(3)};
    CHECK(extended_coadjoint(E, X, 0.0, m).coords == coadjoint(so3, X, m).coords);
    CHECK(extended_coadjoint(E, AlgebraElement::zero(3), 1.0, m).coords == v3(0, 0, 0));
    CHECK(extended_coadjoint(E, AlgebraElement::basis(3, 0), 1.0, DualElement::zero(3)).coords ==
          v3(0, -1, 0));
  }

  TEST_CASE("extended Euler fixtures") {
    const auto so3 = builtin_algebra("so3");
    const auto E = averaging_cocycle(so3, {v3(0, 0, -0.5)});
    CHECK(extended_euler_rhs(E, DualElement::zero(3)).coords == v3(0, 0, 0));
    CHECK(oracle::max_abs(extended_euler_rhs(E, DualElement::basis(3, 2)).coords) == 0.0);
    const auto body = so3.with_inertia(Vector3d(1, 2, 3).asDiagonal());
    const auto E0 = averaging_cocycle(body, AlgebraElement::zero(3));
    const DualElement m{v3(0.3, -0.2, 0.9)};
    CHECK(extended_euler_rhs(E0, m).coords == euler_rhs(body, m).coords);
    const VectorXd V = v3(0.1, 0.4, -0.7);
    const auto E1 = averaging_cocycle(body, {V});
    CHECK(oracle::max_abs(extended_euler_rhs(E1, m).coords - oracle::euler(body, m.coords, V)) < 1e-14);
  }

  TEST_CASE("builtin algebras satisfy Jacobi") {
    const auto so3 = builtin_algebra("so3");
    CHECK(jacobi_residual(3, so3.structure_constants()) == 0.0);
    CHECK(jacobi_residual(3, builtin_algebra("heisenberg3").structure_constants()) == 0.0);
    const auto s5 = builtin_algebra("sine_truncated", {5});
    CHECK(s5.dim() == 24);
    CHECK(jacobi_residual(24, s5.structure_constants()) < 1e-12);
    const auto s9 = builtin_algebra("sine_truncated", {9});
    CHECK(s9.dim() == 80);
    CHECK(jacobi_residual(80, s9.structure_constants()) < 1e-12);
    CHECK_THROWS_AS(builtin_algebra("sine_truncated", {4}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_algebra("sl2"), std::invalid_argument);
  }

  TEST_CASE("exhaustive Jacobi oracle for sine_truncated(5)") {
    const auto A = builtin_algebra("sine_truncated", {5});
    const int n = A.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const VectorXd ei = VectorXd::Unit(n, i), ej = VectorXd::Unit(n, j), ek = VectorXd::Unit(n, k);
          const VectorXd r = oracle::bracket(A, oracle::bracket(A, ei, ej), ek) +
                             oracle::bracket(A, oracle::bracket(A, ej, ek), ei) +
                             oracle::bracket(A, oracle::bracket(A, ek, ei), ej);
          worst = std::max(worst, oracle::max_abs(r));
        }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("sine_truncated structure constants follow the sine bracket") {
    const int N = 5;
    const auto A = builtin_algebra("sine_truncated", {N});
    auto reduce = [&](int x) { return ((x + (N - 1) / 2) % N + N) % N - (N - 1) / 2; };
    for (int a = 0; a < A.dim(); ++a)
      for (int b = 0; b < A.dim(); ++b) {
        const auto [m1, m2] = sine_mode(N, a);
        const auto [n1, n2] = sine_mode(N, b);
        const int s1 = reduce(m1 + n1), s2 = reduce(m2 + n2);
        const double coef = N / (2 * std::numbers::pi) *
                            std::sin(2 * std::numbers::pi / N * (m1 * n2 - m2 * n1));
        for (int k = 0; k < A.dim(); ++k) {
          const auto [k1, k2] = sine_mode(N, k);
          const double expect = (k1 == s1 && k2 == s2) ? coef : 0.0;
          CHECK(std::abs(A.c(a, b, k) - expect) < 1e-15);
        }
      }
  }

  TEST_CASE("laplacian inertia option") {
    const auto A = builtin_algebra("sine_truncated", {5, SineInertia::Laplacian});
    for (int i = 0; i < A.dim(); ++i) {
      const auto [m1, m2] = sine_mode(5, i);
      CHECK(A.inertia()(i, i) == m1 * m1 + m2 * m2);
    }
    CHECK(builtin_algebra("sine_truncated").inertia().isIdentity(0.0));
  }

  TEST_CASE("invalid algebras are rejected") {
    std::vector<double> c(27, 0.0);
    c[(0 * 3 + 1) * 3 + 2] = 1.0;  // [e1, e2] = e3 without the partner
    CHECK_THROWS_AS(LieAlgebra("bad", 3, c, Eigen::Matrix3d::Identity()), std::invalid_argument);
    const auto so3 = builtin_algebra("so3");
    Eigen::Matrix3d asym = Eigen::Matrix3d::Identity();
    asym(0, 1) = 0.1;
    CHECK_THROWS_AS(so3.with_inertia(asym), std::invalid_argument);
    CHECK_THROWS_AS(so3.with_inertia(Vector3d(1, -1, 1).asDiagonal()), std::invalid_argument);
  }

  TEST_CASE("algebra text files") {
    const std::string so3_text =
        "# so(3) with a rigid-body inertia\n"
        "3\n"
        "0 1 2 1\n1 2 0 1\n2 0 1 1\n"
        "1 0 0\n0 2 0\n0 0 3\n";
    const auto A = parse_algebra(so3_text, "body");
    const auto ref = builtin_algebra("so3");
    CHECK(A.structure_constants() == ref.structure_constants());
    CHECK(A.inertia() == Eigen::Matrix3d(Vector3d(1, 2, 3).asDiagonal()));
    CHECK(A.name() == "body");

    const auto raw = parse_algebra_raw("3\n0 1 0 1\n1 2 1 1\n1 0 0\n0 1 0\n0 0 1\n");
    CHECK(jacobi_residual(3, raw.c) > 0.0);
    CHECK_THROWS(parse_algebra("3\n0 1 0 1\n1 2 1 1\n1 0 0\n0 1 0\n0 0 1\n"));
    CHECK_THROWS(parse_algebra("3\n0 1 5 1\n1 0 0\n0 1 0\n0 0 1\n"));

    const auto path = std::filesystem::temp_directory_path() / "lieavg_test_h3.alg";
    std::ofstream(path) << "3\n0 1 2 1\n1 0 0\n0 1 0\n0 0 1\n";
    const auto h3 = load_algebra(path);
    CHECK(h3.structure_constants() == builtin_algebra("heisenberg3").structure_constants());
    std::filesystem::remove(path);
  }

  TEST_CASE("property: pairing identity") {
    oracle::Rng rng(7);
    for (const auto& A : builtins()) {
      for (int t = 0; t < 100; ++t) {
        const AlgebraElement X{rng.vector(A.dim())}, Y{rng.vector(A.dim())};
        const DualElement mu{rng.vector(A.dim())};
        CHECK(std::abs(pairing(coadjoint(A, X, mu), Y) - pairing(mu, bracket(A, X, Y))) < 1e-12);
      }
    }
  }

  TEST_CASE("property: energy orthogonality of the Euler field") {
    oracle::Rng rng(8);
    for (const auto& base : builtins()) {
      const int n = base.dim();
      const VectorXd d = rng.vector(n).cwiseAbs().array() + 0.5;
      const LieAlgebra A = base.with_inertia(d.asDiagonal());
      for (int t = 0; t < 100; ++t) {
        const DualElement m{rng.vector(n)};
        CHECK(std::abs(pairing(euler_rhs(A, m), A.velocity(m))) < 1e-12);
      }
    }
  }

  TEST_CASE("property: coboundary identity") {
    oracle::Rng rng(9);
    for (const auto& base : builtins()) {
      const int n = base.dim();
      const LieAlgebra A = base.with_inertia((rng.vector(n).cwiseAbs().array() + 0.5).matrix().asDiagonal());
      const AlgebraElement V0{rng.vector(n)};
      const auto E = averaging_cocycle(A, V0);
      for (int t = 0; t < 100; ++t) {
        const AlgebraElement X{rng.vector(n)}, Y{rng.vector(n)}, Z{rng.vector(n)};
        const VectorXd IV = A.inertia() * V0.coords;
        CHECK(std::abs(E.cocycle(X, Y) + IV.dot(oracle::bracket(A, X.coords, Y.coords))) < 1e-12);
        const double cyc = E.cocycle(bracket(A, X, Y), Z) + E.cocycle(bracket(A, Y, Z), X) +
                           E.cocycle(bracket(A, Z, X), Y);
        CHECK(std::abs(cyc) < 1e-12);
      }
    }
  }

  TEST_CASE("property: extended Euler is the extended coadjoint flow of the shifted momentum") {
    oracle::Rng rng(10);
    for (const auto& base : builtins()) {
      const int n = base.dim();
      const LieAlgebra A = base.with_inertia((rng.vector(n).cwiseAbs().array() + 0.5).matrix().asDiagonal());
      const AlgebraElement V0{rng.vector(n)};
      const auto E = averaging_cocycle(A, V0);
      for (int t = 0; t < 100; ++t) {
        const DualElement m{rng.vector(n)};
        const DualElement shifted{m.coords + A.inertia() * V0.coords};
        const VectorXd lhs = extended_euler_rhs(E, m).coords;
        const VectorXd rhs = -extended_coadjoint(E, A.velocity(shifted), 1.0, shifted).coords;
        CHECK(oracle::max_abs(lhs - rhs) < 1e-12);
      }
    }
  }

  TEST_CASE("extended Euler without the shift for an ad-invariant inertia") {
    const auto so3 = builtin_algebra("so3");
    oracle::Rng rng(12);
    const auto E = averaging_cocycle(so3, {rng.vector(3)});
    for (int t = 0; t < 100; ++t) {
      const DualElement m{rng.vector(3)};
      CHECK(oracle::max_abs(extended_euler_rhs(E, m).coords + extended_coadjoint(E, so3.velocity(m), 1.0, m).coords) <
            1e-12);
      // The coboundary agrees with <ad*_{V0} 𝕀X, Y> here.
      const VectorXd X = rng.vector(3), Y = rng.vector(3);
      CHECK(std::abs(E.cocycle({X}, {Y}) - oracle::coadjoint(so3, E.drift.coords, X).dot(Y)) < 1e-14);
    }
  }

  TEST_CASE("property: coadjoint is an anti-representation") {
    // ad*_X ad*_Y - ad*_Y ad*_X = -ad*_[X,Y] under <ad*_X mu, Y> = <mu, [X, Y]>.
    oracle::Rng rng(11);
    for (const auto& A : builtins()) {
      const int n = A.dim();
      const AlgebraElement X{rng.vector(n)}, Y{rng.vector(n)};
      const DualElement mu{rng.vector(n)};
      const VectorXd lhs = coadjoint(A, X, coadjoint(A, Y, mu)).coords - coadjoint(A, Y, coadjoint(A, X, mu)).coords;
      const VectorXd rhs = -coadjoint(A, bracket(A, X, Y), mu).coords;
      CHECK(oracle::max_abs(lhs - rhs) < 1e-12);
    }
  }
}
