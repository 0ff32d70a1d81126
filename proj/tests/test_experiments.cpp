#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "ringlab/errors.hpp"
#include "ringlab/experiments.hpp"
#include "ringlab/soliton.hpp"

using namespace ringlab;
using namespace ringlab::experiments;

namespace {
constexpr double kPi = std::numbers::pi;

SweepConfig fast(std::size_t n = 128) {
  SweepConfig c;
  c.grid_size = n;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}
}  // namespace

TEST_CASE("lambda scan across the critical coupling") {
  const std::vector<double> lambdas{1.0, 1.5, kPi / 2, 2.0, 3.0};
  const auto rows = scan_lambda(lambdas, fast());
  REQUIRE(rows.size() == 5);
  const soliton::Branch expected[] = {soliton::Branch::uniform, soliton::Branch::uniform, soliton::Branch::uniform,
                                      soliton::Branch::soliton, soliton::Branch::soliton};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(i);
    REQUIRE(rows[i].branch);
    CHECK(*rows[i].branch == expected[i]);
    CHECK(*rows[i].branch == soliton::select_ground_branch(lambdas[i]).branch);
    CHECK(rows[i].lambda == lambdas[i]);
  }
  CHECK(rows[0].status == Status::below_critical);
  CHECK(rows[2].status == Status::ok);
  CHECK(rows[4].status == Status::ok);
}

TEST_CASE("failed stages leave fields absent") {
  const auto below = scan_lambda(std::vector<double>{1.0}, fast()).front();
  CHECK(below.status == Status::below_critical);
  CHECK_FALSE(below.m);
  CHECK_FALSE(below.r);
  CHECK_FALSE(below.energy_soliton);
  CHECK(below.energy_uniform);

  SweepConfig capped = fast(64);
  capped.max_steps = 5;
  const auto stuck = scan_lambda(std::vector<double>{3.0}, capped).front();
  CHECK(stuck.status == Status::no_converge);
  CHECK_FALSE(stuck.mu_numeric);
  CHECK_FALSE(stuck.residual);
  CHECK(stuck.mu_analytic);
  CHECK(stuck.energy_soliton);
  const std::string csv = to_csv(std::vector<ScanRecord>{stuck});
  CHECK(lines(csv)[1].find(",,") != std::string::npos);
  CHECK(to_json(std::vector<ScanRecord>{stuck})[0]["mu_numeric"].is_null());
}

TEST_CASE("numeric and analytic chemical potentials agree at lambda 3") {
  const auto row = scan_lambda(std::vector<double>{3.0}, fast(256)).front();
  REQUIRE(row.mu_numeric);
  CHECK(std::abs(*row.mu_numeric - *row.mu_analytic) < 1e-6);
}

TEST_CASE("empty sweeps") {
  CHECK(scan_lambda(std::vector<double>{}, fast()).empty());
  CHECK(scan_alpha(std::vector<double>{}, 3.0, fast()).empty());
  CHECK(lines(to_csv(std::vector<ScanRecord>{})).size() == 1);
}

TEST_CASE("alpha scan drift follows the distance to the nearest integer") {
  const std::vector<double> alphas{0.0, 0.3, 0.5, 1.3, -0.3, 0.7};
  const auto rows = scan_alpha(alphas, 3.0, fast());
  REQUIRE(rows.size() == alphas.size());
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    REQUIRE(r.drift_rate);
    CHECK(std::abs(std::abs(*r.drift_rate) - distance_to_integer(r.alpha)) < 1e-2);
    CHECK(r.status == Status::ok);
  }
  CHECK(std::abs(*rows[0].drift_rate) < 1e-3);
  CHECK(std::abs(std::abs(*rows[1].drift_rate) - 0.3) < 1e-2);
  CHECK(std::abs(std::abs(*rows[3].drift_rate) - std::abs(*rows[1].drift_rate)) < 1e-2);
  CHECK(std::abs(std::abs(*rows[4].drift_rate) - std::abs(*rows[1].drift_rate)) < 1e-2);
  CHECK(std::abs(std::abs(*rows[5].drift_rate) - std::abs(*rows[1].drift_rate)) < 1e-2);
}

TEST_CASE("alpha scan needs a lump") {
  const auto rows = scan_alpha(std::vector<double>{0.3}, 1.0, fast(64));
  CHECK(rows.front().status == Status::below_critical);
  CHECK_FALSE(rows.front().drift_rate);
}

TEST_CASE("convergence table") {
  SUBCASE("spatial errors fall faster than any power") {
    const std::vector<std::size_t> ns{64, 128, 256};
    const auto rows = convergence_table(20.0, 0.0, ns, std::vector<double>{});
    REQUIRE(rows.size() == 3);
    CHECK(*rows[1].residual < *rows[0].residual);
    CHECK(*rows[2].residual < *rows[1].residual);
    REQUIRE(rows[1].order);
    REQUIRE(rows[2].order);
    CHECK(*rows[2].order > *rows[1].order);
    CHECK_FALSE(rows[0].dt);
  }
  SUBCASE("profile error decreasing at lambda 3") {
    const std::vector<std::size_t> ns{64, 128, 256};
    const auto rows = convergence_table(3.0, 0.0, ns, std::vector<double>{});
    CHECK(*rows[1].residual < *rows[0].residual);
    CHECK(*rows[2].residual < *rows[1].residual);
  }
  SUBCASE("temporal order two") {
    const std::vector<double> dts{4e-3, 2e-3, 1e-3};
    const auto rows = convergence_table(3.0, 0.3, std::vector<std::size_t>{64}, dts);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 2; i < 4; ++i) {
      REQUIRE(rows[i].order);
      CHECK(std::abs(*rows[i].order - 2.0) < 0.2);
      CHECK(*rows[i - 1].residual / *rows[i].residual == doctest::Approx(4.0).epsilon(0.1));
    }
  }
  SUBCASE("single entry lists") {
    CHECK(convergence_table(3.0, 0.0, std::vector<std::size_t>{128}, std::vector<double>{}).size() == 1);
    SweepConfig small;
    small.grid_size = 64;
    CHECK(convergence_table(3.0, 0.0, std::vector<std::size_t>{}, std::vector<double>{1e-3}, small).size() == 1);
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(convergence_table(3.0, 0.0, std::vector<std::size_t>{100}, std::vector<double>{}), InvalidConfig);
    CHECK_THROWS_AS(convergence_table(3.0, 0.0, std::vector<std::size_t>{64}, std::vector<double>{1e-3, 2e-3}),
                    InvalidConfig);
  }
}

TEST_CASE("csv layout") {
  const auto rows = scan_lambda(std::vector<double>{1.0, 3.0}, fast(64));
  const auto text = lines(to_csv(rows));
  REQUIRE(text.size() == 3);
  CHECK(text[0] == kCsvHeader);
  for (const auto& l : text) CHECK(std::count(l.begin(), l.end(), ',') == 14);
  CHECK(text[1].find("1.0000000000000000e+00,") == 0);

  const auto j = to_json(rows);
  REQUIRE(j.size() == 2);
  std::stringstream header(kCsvHeader);
  std::string key;
  while (std::getline(header, key, ',')) CHECK(j[0].contains(key));
  CHECK(j[1]["branch"] == "soliton");
  CHECK(j[0]["status"] == "below_critical");

  const auto with_order = lines(to_csv(rows, true));
  CHECK(with_order[0] == std::string(kCsvHeader) + ",order");
}

TEST_CASE("records are reproducible and ordered regardless of threads") {
  const std::vector<double> alphas{0.4, 0.0, 0.2, 0.5};
  SweepConfig one = fast(64);
  one.threads = 1;
  one.evolve_time = 2.0;
  SweepConfig many = one;
  many.threads = 4;
  const auto a = to_csv(scan_alpha(alphas, 3.0, one));
  const auto b = to_csv(scan_alpha(alphas, 3.0, many));
  CHECK(a == b);
  const auto rows = lines(a);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto single = lines(to_csv(scan_alpha(std::vector<double>{alphas[i]}, 3.0, one)));
    CHECK(rows[i + 1] == single[1]);
  }
}

TEST_CASE("worker count") {
  CHECK(worker_count(3, 10) == 3);
  CHECK(worker_count(8, 2) == 2);
  CHECK(worker_count(0, 0) >= 1);
  ::setenv("RINGLAB_THREADS", "2", 1);
  CHECK(worker_count(0, 10) == 2);
  ::setenv("RINGLAB_THREADS", "junk", 1);
  CHECK(worker_count(0, 10) >= 1);
  ::unsetenv("RINGLAB_THREADS");
}

TEST_CASE("distance to integer") {
  CHECK(distance_to_integer(0.3) == doctest::Approx(0.3));
  CHECK(distance_to_integer(-0.3) == doctest::Approx(0.3));
  CHECK(distance_to_integer(1.7) == doctest::Approx(0.3));
  CHECK(distance_to_integer(2.5) == 0.5);
  CHECK(distance_to_integer(-4.0) == 0.0);
}
