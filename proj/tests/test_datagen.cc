#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "edgeclust/datagen.h"

using namespace edgeclust;

namespace {

// Eigenvalues of a 2x2 covariance, largest first.
std::pair<double, double> covariance_spectrum(const SampleSet& s, int label) {
  double mx = 0, my = 0, cnt = 0;
  for (Index i = 0; i < s.n(); ++i) {
    if ((*s.labels)[i] != label) continue;
    mx += s.features(i, 0);
    my += s.features(i, 1);
    ++cnt;
  }
  mx /= cnt;
  my /= cnt;
  double a = 0, b = 0, c = 0;
  for (Index i = 0; i < s.n(); ++i) {
    if ((*s.labels)[i] != label) continue;
    const double dx = s.features(i, 0) - mx, dy = s.features(i, 1) - my;
    a += dx * dx;
    b += dx * dy;
    c += dy * dy;
  }
  const double tr = (a + c) / 2, det = std::sqrt((a - c) * (a - c) / 4 + b * b);
  return {tr + det, tr - det};
}

}  // namespace

TEST_CASE("crossbones clusters are strongly anisotropic") {
  Rng rng(1);
  const SampleSet s = gen_synthetic({}, rng);
  CHECK(s.n() == 100);
  CHECK(s.truth().k() == 2);
  for (int label : {1, 2}) {
    const auto [top, second] = covariance_spectrum(s, label);
    CHECK(top >= 10 * second);
  }
}

TEST_CASE("grid is balanced") {
  Rng rng(2);
  const SampleSet s = gen_synthetic({SyntheticKind::kGrid, 120, 6, 0.03}, rng);
  const auto clusters = s.truth().clusters();
  REQUIRE(clusters.size() == 6);
  for (const auto& c : clusters) CHECK(c.size() == 20);
}

TEST_CASE("zero noise puts points on the segments") {
  Rng rng(3);
  SyntheticSpec spec;
  spec.noise = 0.0;
  const SampleSet s = gen_synthetic(spec, rng);
  const double slope = std::tan(75.0 * std::acos(-1.0) / 180.0);
  for (Index i = 0; i < s.n(); ++i) {
    const double x = s.features(i, 0), y = s.features(i, 1);
    if ((*s.labels)[i] == 1) {
      CHECK(y == 0.0);
    } else {
      CHECK(y == doctest::Approx(slope * x).scale(1.0).epsilon(1e-12));
    }
    CHECK(std::hypot(x, y) <= 0.5 + 1e-12);
  }
  spec.kind = SyntheticKind::kGrid;
  spec.k = 4;
  const SampleSet g = gen_synthetic(spec, rng);
  for (const auto& members : g.truth().clusters()) {
    const Index a = members[0], b = members[1], c = members[2];
    const double cross = (g.features(b, 0) - g.features(a, 0)) * (g.features(c, 1) - g.features(a, 1)) -
                         (g.features(b, 1) - g.features(a, 1)) * (g.features(c, 0) - g.features(a, 0));
    CHECK(std::abs(cross) < 1e-12);
  }
}

TEST_CASE("generators are reproducible and validate specs") {
  for (SyntheticKind k : {SyntheticKind::kCrossbones, SyntheticKind::kGrid, SyntheticKind::kBlobs,
                          SyntheticKind::kCircles}) {
    SyntheticSpec spec;
    spec.kind = k;
    Rng a(4), b(4);
    CHECK(gen_synthetic(spec, a).features == gen_synthetic(spec, b).features);
    CHECK(parse_synthetic_kind(to_string(k)) == k);
  }
  Rng rng(5);
  CHECK_THROWS_AS(gen_synthetic({SyntheticKind::kCrossbones, 100, 3}, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic({SyntheticKind::kGrid, 2, 3}, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic({SyntheticKind::kBlobs, 10, 2, -0.1}, rng), std::invalid_argument);
  CHECK_THROWS_AS(parse_synthetic_kind("moons"), std::invalid_argument);
}

TEST_CASE("edge level generator counts pairs") {
  const ParametricDensity p1 = ParametricDensity::gaussian({0.0}, {1.0});
  const ParametricDensity p0 = ParametricDensity::gaussian({5.0}, {1.0});
  Rng rng(6);
  const EdgeLevelData d = gen_edge_level({{2, 2}, p1, p0}, rng);
  CHECK(d.features.size() == 6);
  Index intra = 0;
  for (const PairIndex& p : d.features.pairs) intra += d.truth[p.i] == d.truth[p.j];
  CHECK(intra == 2);
  const EdgeLevelData one = gen_edge_level({{7}, p1, p0}, rng);
  CHECK(one.features.size() == 21);
  CHECK(one.truth.k() == 1);
  Rng a(7), b(7);
  CHECK(gen_edge_level({{3, 4}, p1, p0}, a).features.vectors ==
        gen_edge_level({{3, 4}, p1, p0}, b).features.vectors);
  CHECK_THROWS_AS(gen_edge_level({{3, 0}, p1, p0}, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_edge_level({{3}, p1, ParametricDensity::gaussian({0, 0}, {1, 1})}, rng),
                  std::invalid_argument);
}

TEST_CASE("csv parsing") {
  std::istringstream plain("1.0,2.0,1\n1.0,2.0,1\n1.0,2.0,1\n");
  const SampleSet s = read_csv(plain, true);
  CHECK(s.n() == 3);
  CHECK(s.dim() == 2);
  CHECK(s.truth().k() == 1);

  std::istringstream skin("B,G,R,label\r\n74,85,123,1\r\n73,84,122,1\r\n255,255,255,2\r\n");
  const SampleSet k = read_csv(skin, true);
  CHECK(k.dim() == 3);
  CHECK(k.truth().k() == 2);
  CHECK(*k.labels == std::vector<int>{1, 1, 2});

  std::istringstream unlabeled("0.5,1e-3\n-2,+4\n");
  const SampleSet u = read_csv(unlabeled, false);
  CHECK_FALSE(u.has_labels());
  CHECK(u.features(1, 1) == 4.0);
}

TEST_CASE("csv diagnostics") {
  std::istringstream ragged("1,2,1\n3,4\n");
  CHECK_THROWS_WITH_AS(read_csv(ragged, true), doctest::Contains("line 2"), DataError);
  std::istringstream text("x,y\n1,2\n3,abc\n");
  CHECK_THROWS_WITH_AS(read_csv(text, false), doctest::Contains("line 3, column 2"), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty, false), DataError);
  std::istringstream header_only("a,b\n");
  CHECK_THROWS_AS(read_csv(header_only, false), DataError);
  std::istringstream fractional("1,2,1.5\n");
  CHECK_THROWS_AS(read_csv(fractional, true), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", true), DataError);
}

TEST_CASE("csv round trip") {
  Rng rng(8);
  const SampleSet s = gen_synthetic({SyntheticKind::kBlobs, 30, 3, 0.1}, rng);
  std::stringstream buf;
  write_csv(s, buf);
  const SampleSet back = read_csv(buf, true);
  CHECK(back.features == s.features);
  CHECK(*back.labels == *s.labels);
}

TEST_CASE("pairs file") {
  const std::vector<LabeledPair> pairs{{{0, 3}, true}, {{1, 2}, false}};
  std::stringstream buf;
  write_pairs_csv(pairs, buf);
  const auto back = read_pairs_csv(buf, 4);
  REQUIRE(back.size() == 2);
  CHECK(back[0].pair == PairIndex{0, 3});
  CHECK(back[0].same);
  CHECK_FALSE(back[1].same);
  std::istringstream swapped("3,0,1\n");
  CHECK(read_pairs_csv(swapped, 4)[0].pair == PairIndex{0, 3});
  std::istringstream dup("0,1,1\n1,0,0\n");
  CHECK_THROWS_AS(read_pairs_csv(dup, 4), DataError);
  std::istringstream range("0,9,1\n");
  CHECK_THROWS_AS(read_pairs_csv(range, 4), DataError);
  std::istringstream flag("0,1,2\n");
  CHECK_THROWS_WITH_AS(read_pairs_csv(flag, 4), doctest::Contains("line 1"), DataError);
}
