#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "lieavg/clflow.hpp"

using namespace lieavg;
using namespace lieavg::cl;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArea = kTwoPi * kTwoPi;

VorticityField field(std::string_view src, int N = 32) {
  return VorticityField::from_expression(expr::Expression::parse(src), N);
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const std::vector<double>& a) { return max_diff(a, std::vector<double>(a.size(), 0.0)); }

std::vector<double> sampled(int N, double (*f)(double, double)) {
  std::vector<double> v(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) v[static_cast<std::size_t>(i) * N + j] = f(kTwoPi * i / N, kTwoPi * j / N);
  return v;
}

double moment(const VorticityField& w, int p) {
  double s = 0.0;
  for (double v : w.values()) s += std::pow(v, p);
  return s / static_cast<double>(w.values().size());
}

}  // namespace

TEST_SUITE("clflow") {
  TEST_CASE("field construction guards") {
    CHECK_THROWS_AS(VorticityField::zero(24), std::invalid_argument);
    CHECK_THROWS_AS(VorticityField::zero(8), std::invalid_argument);
    CHECK_THROWS_AS(field("1 + cos(x)"), std::invalid_argument);
    CHECK_THROWS_AS(VorticityField(16, std::vector<double>(10, 0.0)), std::invalid_argument);
    const auto w = field("cos(x)*sin(2*y)", 16);
    CHECK(w(4, 2) == doctest::Approx(std::cos(kTwoPi * 4 / 16) * std::sin(2 * kTwoPi * 2 / 16)));
  }

  TEST_CASE("Biot-Savart orientation") {
    const auto v = vorticity_to_velocity(field("sin(x)"));
    CHECK(max_abs(v.vx) < 1e-14);
    CHECK(max_diff(v.vy, sampled(32, [](double x, double) { return std::cos(x); })) < 1e-14);
    const auto z = vorticity_to_velocity(VorticityField::zero(32));
    CHECK(max_abs(z.vx) == 0.0);
    CHECK(max_abs(z.vy) == 0.0);
    // ω = cos y: ψ = cos y, v = (-∂_y ψ, 0) = (sin y, 0).
    const auto u = vorticity_to_velocity(field("cos(y)"));
    CHECK(max_diff(u.vx, sampled(32, [](double, double y) { return std::sin(y); })) < 1e-14);
  }

  TEST_CASE("velocity is divergence free") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto w = VorticityField::random_band_limited(64, 4, seed);
      CHECK(velocity_divergence(vorticity_to_velocity(w)) < 1e-12);
    }
  }

  TEST_CASE("random band-limited fields are reproducible and zero-mean") {
    const auto a = VorticityField::random_band_limited(32, 4, 99);
    const auto b = VorticityField::random_band_limited(32, 4, 99);
    const auto c = VorticityField::random_band_limited(32, 4, 100);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
    CHECK(std::abs(a.mean()) < 1e-15);
    CHECK(a.max_abs() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(VorticityField::random_band_limited(32, 4, 99, 2.5).max_abs() == doctest::Approx(2.5).epsilon(1e-15));
  }

  TEST_CASE("rhs fixtures") {
    CHECK(cl_vorticity_rhs(field("cos(x)*cos(y)"), {}).max_abs() < 1e-12);
    const auto r = cl_vorticity_rhs(field("cos(x)"), {1.0, 0.0});
    CHECK(max_diff(r.values(), sampled(32, [](double x, double) { return std::sin(x); })) < 1e-13);
    CHECK(cl_vorticity_rhs(VorticityField::zero(32), {0.3, 0.4}).max_abs() == 0.0);
    const auto rr = cl_vorticity_rhs(VorticityField::random_band_limited(32, 4, 5), {0.3, -0.2});
    CHECK(std::abs(rr.mean()) < 1e-14);
  }

  TEST_CASE("rhs matches a pointwise evaluation of the transport term") {
    // ω = sin(x) cos(2y) + cos(3x): the nonlinearity is band-limited well
    // below the dealiasing cut at N = 32.
    const auto w = field("sin(x)*cos(2*y) + cos(3*x)");
    const StokesDrift d{0.4, -0.7};
    const auto r = cl_vorticity_rhs(w, d);
    const auto v = vorticity_to_velocity(w);
    const int N = 32;
    double err = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double x = kTwoPi * i / N, y = kTwoPi * j / N;
        const double wx = std::cos(x) * std::cos(2 * y) - 3 * std::sin(3 * x);
        const double wy = -2 * std::sin(x) * std::sin(2 * y);
        const std::size_t p = static_cast<std::size_t>(i) * N + j;
        const double expect = -((v.vx[p] + d.x) * wx + (v.vy[p] + d.y) * wy);
        err = std::max(err, std::abs(r(i, j) - expect));
      }
    CHECK(err < 1e-12);
  }

  TEST_CASE("translation oracle") {
    const auto w0 = field("cos(x)*cos(y)", 64);
    const StokesDrift d{0.7, -0.3};
    const auto run = cl_integrate(w0, d, 1.0, 1e-3, 1000);
    CHECK_FALSE(run.diverged);
    CHECK_FALSE(run.cfl_warning);
    const auto exact = field("cos(x - 0.7)*cos(y + 0.3)", 64);
    CHECK(max_diff(run.frames.back().values(), exact.values()) < 1e-6);
    CHECK(max_diff(translate(w0, 0.7, -0.3).values(), exact.values()) < 1e-13);
  }

  TEST_CASE("steady Euler state") {
    const auto w0 = field("cos(x)*cos(y)", 64);
    const auto run = cl_integrate(w0, {}, 1.0, 1e-3, 250);
    for (const auto& f : run.frames) CHECK(max_diff(f.values(), w0.values()) < 1e-9);
  }

  TEST_CASE("CFL guard") {
    const auto w0 = field("cos(x)*cos(y)", 64);
    CHECK(cfl_ok(w0, {0.7, -0.3}, 1e-3));
    CHECK_FALSE(cfl_ok(w0, {0.7, -0.3}, 0.1));
    const auto run = cl_integrate(w0, {0.7, -0.3}, 0.2, 0.1);
    CHECK(run.cfl_warning);
  }

  TEST_CASE("functional fixtures") {
    const auto w = field("cos(x)");
    CHECK(functional_If(w, expr::Expression::parse("1")) == doctest::Approx(kArea).epsilon(1e-14));
    CHECK(std::abs(functional_If(VorticityField::random_band_limited(32, 4, 3), expr::Expression::parse("w"))) < 1e-12);
    CHECK(functional_If(w, expr::Expression::parse("w^2")) == doctest::Approx(kArea / 2).epsilon(1e-14));
  }

  TEST_CASE("shifted energy fixtures") {
    CHECK(energy_shifted(VorticityField::zero(32), {1.0, 0.0}) == doctest::Approx(kArea / 2).epsilon(1e-14));
    const auto w = field("cos(x)");
    CHECK(energy_shifted(w, {}) == doctest::Approx(9.8696044010893586).epsilon(1e-13));
    const double c = 0.35;
    const auto v = vorticity_to_velocity(w);
    double vy_integral = 0.0;
    for (double x : v.vy) vy_integral += x;
    vy_integral *= (kTwoPi / 32) * (kTwoPi / 32);
    const double expect = 9.8696044010893586 + 0.5 * c * c * kArea + c * vy_integral;
    CHECK(energy_shifted(w, {0.0, c}) == doctest::Approx(expect).epsilon(1e-13));
  }

  TEST_CASE("invariants along a random band-limited run") {
    const auto w0 = VorticityField::random_band_limited(64, 4, 2026);
    const StokesDrift d{0.7, -0.3};
    const auto run = cl_integrate(w0, d, 1.0, 1e-3, 100);
    REQUIRE_FALSE(run.diverged);
    const auto f2 = expr::Expression::parse("w^2"), f4 = expr::Expression::parse("w^4");
    const double e0 = energy_shifted(w0, d), i2 = functional_If(w0, f2), i4 = functional_If(w0, f4);
    double de = 0, d2 = 0, d4 = 0, mean = 0;
    for (const auto& f : run.frames) {
      de = std::max(de, std::abs(energy_shifted(f, d) - e0) / e0);
      d2 = std::max(d2, std::abs(functional_If(f, f2) - i2) / i2);
      d4 = std::max(d4, std::abs(functional_If(f, f4) - i4) / i4);
      mean = std::max(mean, std::abs(f.mean()));
    }
    MESSAGE("energy " << de << " enstrophy " << d2 << " quartic " << d4);
    CHECK(de < 1e-6);
    CHECK(d2 < 1e-6);
    CHECK(d4 < 1e-6);
    CHECK(mean < 1e-10);
    const auto& wT = run.frames.back();
    CHECK(std::abs(moment(wT, 1)) < 1e-10);
    for (int p = 2; p <= 4; ++p) {
      CHECK(std::abs(moment(wT, p) - moment(w0, p)) / std::abs(moment(w0, p)) < 1e-5);
    }
  }

  TEST_CASE("constant drift is a change of frame") {
    const auto w0 = VorticityField::random_band_limited(64, 4, 7);
    const StokesDrift d{0.7, -0.3};
    const double T = 0.5;
    const auto moving = cl_integrate(w0, d, T, 1e-3, 500).frames.back();
    const auto still = cl_integrate(w0, {}, T, 1e-3, 500).frames.back();
    CHECK(max_diff(translate(moving, -d.x * T, -d.y * T).values(), still.values()) < 1e-7);
  }

  TEST_CASE("field CSV round-trip") {
    const auto w = VorticityField::random_band_limited(16, 3, 11);
    const auto path = std::filesystem::temp_directory_path() / "lieavg_field_test.csv";
    write_field_csv(w, path);
    const auto back = read_field_csv(path);
    CHECK(back.size() == 16);
    CHECK(back.values() == w.values());
    std::filesystem::remove(path);
  }
}
