#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "lieavg/harness.hpp"
#include "oracles.hpp"

using namespace lieavg;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

std::vector<expr::Expression> exprs(const std::vector<std::string>& src) {
  std::vector<expr::Expression> out;
  for (const auto& s : src) out.push_back(expr::Expression::parse(s));
  return out;
}

LieAlgebra body() { return builtin_algebra("so3").with_inertia(Vector3d(1, 2, 3).asDiagonal()); }

FastSlowScenario scenario(const LieAlgebra& A, const Vector3d& m, std::vector<std::string> v1 = {"cos(t)", "sin(t)", "0"}) {
  FastSlowScenario s{A, exprs(v1), {m}, {0.2, 0.1, 0.05, 0.025}};
  return s;
}

const Vector3d kOffAxis(0.6, 0.0, 0.8);

double energy_norm(const LieAlgebra& A, const VectorXd& mu) {
  return std::sqrt(mu.dot(A.inertia().ldlt().solve(mu)));
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("scenario validation") {
    auto s = scenario(builtin_algebra("so3"), Vector3d::UnitZ());
    CHECK_NOTHROW(s.validate());
    auto bad = s;
    bad.v1 = exprs({"1 + cos(t)", "0", "0"});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.epsilons = {0.1, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.epsilons = {1.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.v1 = exprs({"cos(t)", "0"});
    CHECK_THROWS(bad.validate());
    CHECK(oracle::max_abs(s.drift().coords - Vector3d(0, 0, -0.5)) < 1e-12);
  }

  TEST_CASE("zero forcing: the fast run is the time-rescaled Euler flow") {
    const auto A = body();
    const VectorXd m0 = kOffAxis;
    auto s = scenario(A, m0, {"0", "0", "0"});
    s.T = 2.0;
    const double eps = 0.1;
    const auto fast = run_fast(s, eps);
    REQUIRE_FALSE(fast.diverged);
    const double t_end = fast.times.back();
    CHECK(t_end <= s.T / (eps * eps) + 1e-9);
    CHECK(t_end > s.T / (eps * eps) - 2 * std::numbers::pi);
    auto g = [&](double, const VectorXd& m) { return oracle::euler(A, m, VectorXd::Zero(3)); };
    const VectorXd expect = oracle::rk4(g, m0, 0.0, eps * eps * t_end, 4000);
    CHECK(oracle::max_abs(fast.final_state() - expect) < 1e-9);
  }

  TEST_CASE("zero initial momentum stays zero") {
    auto s = scenario(body(), Vector3d::Zero());
    s.T = 1.0;
    const auto fast = run_fast(s, 0.1);
    for (int k = 0; k < fast.samples(); ++k) CHECK(oracle::max_abs(fast.state(k)) == 0.0);
  }

  TEST_CASE("fast run near the averaged equilibrium") {
    auto s = scenario(builtin_algebra("so3"), Vector3d::UnitZ());
    s.T = 1.0;
    for (double eps : {0.1, 0.05}) {
      const auto fast = run_fast(s, eps);
      double worst = 0.0;
      for (int k = 0; k < fast.samples(); ++k)
        worst = std::max(worst, (fast.state(k) - Vector3d::UnitZ()).norm());
      MESSAGE("eps " << eps << " deviation " << worst);
      CHECK(worst < 2.0 * eps);
    }
  }

  TEST_CASE("averaged run fixtures") {
    auto still = scenario(body(), Vector3d::UnitZ(), {"0", "0", "0"});
    const auto a = run_averaged(still);
    CHECK(a.samples() == still.slow_steps + 1);
    CHECK(a.times.back() == still.T);
    for (int k = 0; k < a.samples(); ++k) CHECK(a.state(k) == VectorXd(Vector3d::UnitZ()));

    const auto eq = run_averaged(scenario(builtin_algebra("so3"), Vector3d::UnitZ()));
    for (int k = 0; k < eq.samples(); ++k) CHECK(oracle::max_abs(eq.state(k) - Vector3d::UnitZ()) < 1e-10);

    FastSlowScenario h{builtin_algebra("heisenberg3"), exprs({"cos(t)", "sin(2*t)", "0.3*cos(t)"}),
                       {Vector3d(0.2, -0.4, 0.7)}, {0.1}};
    const auto hh = run_averaged(h);
    for (int k = 0; k < hh.samples(); ++k) CHECK(std::abs(hh.state(k)[2] - 0.7) < 1e-14);
  }

  TEST_CASE("cubic Hermite interpolation of the slow run") {
    const auto s = scenario(body(), kOffAxis);
    const auto slow = run_averaged(s);
    CHECK(interpolate_averaged(s, slow, 0.0) == slow.state(0));
    CHECK(interpolate_averaged(s, slow, slow.times[17]) == slow.state(17));
    // Mid-step value against a fine direct integration from the left node.
    const double mid = 0.5 * (slow.times[100] + slow.times[101]);
    const auto E = averaging_cocycle(s.algebra, s.drift());
    auto g = [&](double, const VectorXd& m) { return extended_euler_rhs(E, {m}).coords; };
    const VectorXd direct = oracle::rk4(g, slow.state(100), slow.times[100], mid, 50);
    CHECK(oracle::max_abs(interpolate_averaged(s, slow, mid) - direct) < 1e-9);
  }

  TEST_CASE("averaged run conserves shifted energy and Casimir") {
    for (const auto& A : {builtin_algebra("so3"), body()}) {
      const auto s = scenario(A, kOffAxis);
      const auto slow = run_averaged(s);
      const auto V = s.drift();
      const double E0 = shifted_energy(A, V, {slow.state(0)});
      const double C0 = slow.state(0).norm();
      double dE = 0.0, dC = 0.0;
      for (int k = 0; k < slow.samples(); ++k) {
        dE = std::max(dE, std::abs(shifted_energy(A, V, {slow.state(k)}) - E0) / E0);
        dC = std::max(dC, std::abs(slow.state(k).norm() - C0) / C0);
      }
      CHECK(dE < 1e-8);
      CHECK(dC < 1e-8);
    }
  }

  TEST_CASE("shifted energy formula") {
    const auto A = body();
    const VectorXd V = Vector3d(0.1, -0.2, 0.3), mu = Vector3d(0.5, 0.4, -0.6);
    const VectorXd IV = A.inertia() * V;
    const VectorXd u = A.inertia().ldlt().solve(mu);
    CHECK(std::abs(shifted_energy(A, {V}, {mu}) - 0.5 * (mu + IV).dot(u + V)) < 1e-15);
  }

  TEST_CASE("equilibrium sweep sits at the noise floor") {
    auto s = scenario(body(), Vector3d::UnitZ(), {"0", "0", "0"});
    s.epsilons = {0.2, 0.1, 0.05};
    const auto r = sweep(s);
    REQUIRE(r.records.size() == 3);
    for (const auto& rec : r.records) {
      CHECK(rec.max_err < 1e-9);
      CHECK(rec.energy_drift < 1e-9);
      CHECK(adiabatic_report(s, rec.epsilon) < 1e-9);
    }
  }

  TEST_CASE("error and drift scale linearly in epsilon") {
    for (const auto& A : {builtin_algebra("so3"), body()}) {
      const auto s = scenario(A, kOffAxis);
      const auto r = sweep(s);
      REQUIRE(r.records.size() == 4);
      REQUIRE(r.slope.has_value());
      MESSAGE(A.name() << " slope " << *r.slope);
      CHECK(*r.slope >= 0.8);
      CHECK(*r.slope <= 1.2);
      CHECK(r.records[3].max_err < r.records[0].max_err / 4);
      int inversions = 0;
      for (std::size_t i = 1; i < r.records.size(); ++i)
        if (r.records[i].max_err > r.records[i - 1].max_err) ++inversions;
      CHECK(inversions <= 1);
      const double ratio = r.records[1].energy_drift / r.records[2].energy_drift;
      CHECK(ratio >= 1.4);
      CHECK(ratio <= 2.6);
      double lo = 1e300, hi = 0.0;
      for (const auto& rec : r.records) {
        lo = std::min(lo, rec.energy_drift / rec.epsilon);
        hi = std::max(hi, rec.energy_drift / rec.epsilon);
      }
      CHECK(hi / lo < 3.0);
      CHECK_FALSE(r.left_ball);
    }
  }

  TEST_CASE("max_error is measured in the energy norm") {
    const auto A = body();
    const auto s = scenario(A, kOffAxis);
    const double eps = 0.1;
    const auto fast = run_fast(s, eps);
    const auto slow = run_averaged(s);
    double worst = 0.0;
    for (int k = 0; k < fast.samples(); ++k) {
      const VectorXd d = fast.state(k) - interpolate_averaged(s, slow, eps * eps * fast.times[k]);
      worst = std::max(worst, energy_norm(A, d));
    }
    CHECK(max_error(s, fast, slow, eps) == doctest::Approx(worst).epsilon(1e-14));
  }

  TEST_CASE("frozen adiabatic drift constants at eps = 0.1") {
    // drift <= C eps E(0), C measured once from the reference runs.
    const std::vector<std::pair<LieAlgebra, double>> cases{{builtin_algebra("so3"), 3.0}, {body(), 5.5}};
    for (const auto& [A, C] : cases) {
      const auto s = scenario(A, kOffAxis);
      const double E0 = shifted_energy(A, s.drift(), s.m_init);
      const double drift = adiabatic_report(s, 0.1);
      MESSAGE(A.name() << " drift/(eps E0) = " << drift / (0.1 * E0));
      CHECK(drift <= C * 0.1 * E0);
    }
  }

  TEST_CASE("ball exit is reported") {
    auto s = scenario(builtin_algebra("so3"), kOffAxis);
    s.epsilons = {0.2, 0.1};
    s.ball_radius = 0.5;
    const auto r = sweep(s);
    CHECK(r.left_ball);
    CHECK_FALSE(r.warnings.empty());
  }

  TEST_CASE("loglog slope") {
    CHECK(loglog_slope({0.1, 0.2, 0.4}, {3e-2, 6e-2, 12e-2}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(loglog_slope({1, 2, 4, 8}, {1, 4, 16, 64}) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("sweep CSV") {
    CHECK(sweep_csv({}, std::nullopt) == "epsilon,max_err,energy_drift,diverged\n");
    CHECK(sweep_csv({}, 1.0) == "epsilon,max_err,energy_drift,diverged\n");
    oracle::Rng rng(41);
    std::vector<SweepRecord> recs;
    for (double e : {0.2, 0.1, 0.05, 0.025})
      recs.push_back({e, std::abs(rng.uniform()) / 3, std::abs(rng.uniform()) * std::numbers::pi, e < 0.03});
    const double slope = 0.98765432109876543;
    const std::string text = sweep_csv(recs, slope);
    int lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 6);
    CHECK(text.find("# slope=") != std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "lieavg_sweep_test.csv";
    emit_csv(recs, slope, path);
    const auto back = read_sweep_csv(path);
    std::filesystem::remove(path);
    REQUIRE(back.records.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(back.records[i].epsilon == recs[i].epsilon);
      CHECK(back.records[i].max_err == recs[i].max_err);
      CHECK(back.records[i].energy_drift == recs[i].energy_drift);
      CHECK(back.records[i].diverged == recs[i].diverged);
    }
    REQUIRE(back.slope.has_value());
    CHECK(*back.slope == slope);
  }

  TEST_CASE("sweep is deterministic") {
    auto s = scenario(body(), kOffAxis);
    s.epsilons = {0.2, 0.1};
    const auto a = sweep(s), b = sweep(s);
    CHECK(sweep_csv(a.records, a.slope) == sweep_csv(b.records, b.slope));
  }

  TEST_CASE("svg output") {
    const std::vector<SweepRecord> recs{{0.2, 0.3, 0.1, false}, {0.1, 0.15, 0.05, false}};
    const auto svg = sweep_svg(recs);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
}
