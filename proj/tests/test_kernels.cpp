#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "mulepatrol/kernels.hpp"
#include "mulepatrol/rng.hpp"

using namespace mule;
using namespace mule::kernels;

namespace {

std::vector<Isa> vector_variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon})
    if (available(isa)) out.push_back(isa);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct SegmentBatch {
  std::vector<double> ax, ay, bx, by;
  SegmentSoA soa() const { return {ax, ay, bx, by}; }
};

// Integer coordinates on a small grid produce many exact distance ties.
SegmentBatch random_segments(Rng& rng, std::size_t n, bool grid) {
  SegmentBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    auto draw = [&] { return grid ? static_cast<double>(rng.below(7)) : rng.uniform(-50.0, 50.0); };
    b.ax.push_back(draw());
    b.ay.push_back(draw());
    b.bx.push_back(draw());
    b.by.push_back(draw());
  }
  return b;
}

}  // namespace

TEST_CASE("scalar nearest endpoints: the three worked pairs") {
  std::vector<double> dist(1);
  std::vector<std::uint8_t> sel(1);
  SUBCASE("collinear gap") {
    const std::vector<double> ax{3}, ay{0}, bx{4}, by{0};
    scalar::nearest_endpoints({0, 0}, {1, 0}, {ax, ay, bx, by}, dist, sel);
    CHECK(dist[0] == 2.0);
    CHECK(sel[0] == 2);  // query B, candidate A
  }
  SUBCASE("touching") {
    const std::vector<double> ax{0}, ay{1}, bx{0}, by{2};
    scalar::nearest_endpoints({0, 0}, {0, 1}, {ax, ay, bx, by}, dist, sel);
    CHECK(dist[0] == 0.0);
    CHECK(sel[0] == 2);
  }
  SUBCASE("four-way minimum") {
    const std::vector<double> ax{3}, ay{4}, bx{5}, by{6};
    scalar::nearest_endpoints({0, 0}, {2, 0}, {ax, ay, bx, by}, dist, sel);
    CHECK(dist[0] == std::sqrt(17.0));
    CHECK(sel[0] == 2);
  }
  SUBCASE("ties go to the first pair in AA, AB, BA, BB order") {
    // Query (0,0)-(2,0); candidate (1,1)-(1,-1): all four distances sqrt(2).
    const std::vector<double> ax{1}, ay{1}, bx{1}, by{-1};
    scalar::nearest_endpoints({0, 0}, {2, 0}, {ax, ay, bx, by}, dist, sel);
    CHECK(sel[0] == 0);
  }
}

TEST_CASE("vector nearest-endpoint kernels match scalar bit for bit") {
  Rng rng(2024);
  for (Isa isa : vector_variants()) {
    CAPTURE(to_string(isa));
    const auto& kt = table(isa);
    for (std::size_t n = 0; n < 40; ++n) {
      for (bool grid : {false, true}) {
        const auto batch = random_segments(rng, n, grid);
        const Point qa{grid ? 3.0 : rng.uniform(-50, 50), grid ? 2.0 : rng.uniform(-50, 50)};
        const Point qb{grid ? 1.0 : rng.uniform(-50, 50), grid ? 5.0 : rng.uniform(-50, 50)};
        std::vector<double> d_ref(n), d_vec(n);
        std::vector<std::uint8_t> s_ref(n), s_vec(n);
        scalar::nearest_endpoints(qa, qb, batch.soa(), d_ref, s_ref);
        kt.nearest_endpoints(qa, qb, batch.soa(), d_vec, s_vec);
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(same_bits(d_ref[j], d_vec[j]));
          CHECK(s_ref[j] == s_vec[j]);
        }
      }
    }
  }
}

TEST_CASE("scalar contact windows: closed-form cases") {
  std::vector<double> enter(1), exit(1);
  const auto run = [&](double rx, double ry, double wx, double wy, double h, double r) {
    const std::vector<double> a{rx}, b{ry}, c{wx}, d{wy};
    scalar::contact_windows({a, b, c, d}, h, r, enter, exit);
  };
  SUBCASE("head-on pass through the target") {
    run(-5.0, 0.0, 1.0, 0.0, 10.0, 0.5);
    CHECK(enter[0] == doctest::Approx(4.5));
    CHECK(exit[0] == doctest::Approx(5.5));
  }
  SUBCASE("miss by more than the radius") {
    run(-5.0, 1.0, 1.0, 0.0, 10.0, 0.5);
    CHECK(std::isinf(enter[0]));
    CHECK(enter[0] > exit[0]);
  }
  SUBCASE("static and inside covers the whole interval") {
    run(0.1, 0.0, 0.0, 0.0, 3.0, 0.5);
    CHECK(enter[0] == 0.0);
    CHECK(exit[0] == 3.0);
  }
  SUBCASE("static and outside never touches") {
    run(2.0, 0.0, 0.0, 0.0, 3.0, 0.5);
    CHECK(enter[0] > exit[0]);
  }
  SUBCASE("approach that ends before reaching the disc") {
    run(-5.0, 0.0, 1.0, 0.0, 4.0, 0.5);
    CHECK(enter[0] > exit[0]);
  }
  SUBCASE("leaving from inside clips to the interval start") {
    run(0.2, 0.0, 1.0, 0.0, 4.0, 0.5);
    CHECK(enter[0] == 0.0);
    CHECK(exit[0] == doctest::Approx(0.3));
  }
}

TEST_CASE("vector contact-window kernels match scalar bit for bit") {
  Rng rng(77);
  for (Isa isa : vector_variants()) {
    CAPTURE(to_string(isa));
    const auto& kt = table(isa);
    for (std::size_t n = 0; n < 40; ++n) {
      std::vector<double> rx(n), ry(n), wx(n), wy(n);
      for (std::size_t i = 0; i < n; ++i) {
        switch (rng.below(4)) {
          case 0:  // static lanes, some inside
            rx[i] = rng.uniform(-0.002, 0.002), ry[i] = rng.uniform(-0.002, 0.002), wx[i] = 0, wy[i] = 0;
            break;
          case 1:  // exact crossing
            wx[i] = rng.uniform(-3, 3), wy[i] = rng.uniform(-3, 3);
            rx[i] = -wx[i] * 0.5, ry[i] = -wy[i] * 0.5;
            break;
          case 2:  // tangent-ish
            wx[i] = 1.0, wy[i] = 0.0, rx[i] = -1.0, ry[i] = 1e-3 * rng.uniform(0.9, 1.1);
            break;
          default:
            rx[i] = rng.uniform(-10, 10), ry[i] = rng.uniform(-10, 10);
            wx[i] = rng.uniform(-5, 5), wy[i] = rng.uniform(-5, 5);
        }
      }
      std::vector<double> e_ref(n), x_ref(n), e_vec(n), x_vec(n);
      const RelativeMotionSoA m{rx, ry, wx, wy};
      scalar::contact_windows(m, 1.0, 1e-3, e_ref, x_ref);
      kt.contact_windows(m, 1.0, 1e-3, e_vec, x_vec);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(e_ref[i], e_vec[i]));
        CHECK(same_bits(x_ref[i], x_vec[i]));
      }
    }
  }
}

TEST_CASE("dispatch exposes scalar always and picks an available variant") {
  CHECK(available(Isa::kScalar));
  CHECK(table(Isa::kScalar).isa == Isa::kScalar);
  CHECK(available(active().isa));
  if (!available(Isa::kNeon)) CHECK_THROWS_AS(table(Isa::kNeon), std::invalid_argument);
  MESSAGE("active kernel variant: " << to_string(active().isa));
}
