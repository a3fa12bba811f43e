#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "mixgeom/errors.hpp"
#include "mixgeom/serialize.hpp"

using namespace mixgeom;

TEST_SUITE("serialize") {

TEST_CASE("numbers round-trip exactly") {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 123456789.123456789,
                   std::numeric_limits<double>::denorm_min(), -0.0}) {
    const auto text = format_double(x);
    double back = 1.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
    CHECK(std::signbit(back) == std::signbit(x));
  }
  CHECK(format_double(0.2) == "0.2");
}

TEST_CASE("sampler spec JSON") {
  const auto j = json::parse(R"({"kind":"uniform","J":3,"seed":42})");
  const auto s = j.get<SamplerSpec>();
  CHECK(s == SamplerSpec::uniform(3, 42));
  CHECK(json(s) == j);

  const auto d = SamplerSpec::dirichlet({2.0, 2.0, 2.0}, 7);
  CHECK(json(d).get<SamplerSpec>() == d);

  const auto m = SamplerSpec::point_mass_mixture(
      {ProbabilityVector::vertex(2, 0), ProbabilityVector::validate({0.5, 0.5})},
      std::vector<double>{0.25, 0.75}, 1);
  CHECK(json(m).get<SamplerSpec>() == m);

  CHECK_THROWS_AS(json::parse(R"({"kind":"cauchy","J":3,"seed":1})").get<SamplerSpec>(),
                  InvalidArgument);
  CHECK_THROWS_AS(json::parse(R"({"kind":"uniform","seed":1})").get<SamplerSpec>(),
                  InvalidArgument);
}

TEST_CASE("extremal set JSON") {
  ExtremalSet e{{0, 2, 5}, 3};
  const json j = e;
  CHECK(j.dump() == R"({"f0":3,"indices":[0,2,5]})");
  const auto back = j.get<ExtremalSet>();
  CHECK(back.indices == e.indices);
  CHECK(back.f0 == 3);
}

TEST_CASE("matrix CSV round trip") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, 1.0 / 3.0, 1e-17, -2.5, 0.0, 7.0;
  std::stringstream buf;
  write_matrix_csv(buf, m);
  CHECK(read_matrix_csv(buf) == m);
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), InvalidArgument);
  std::istringstream text("1,abc\n");
  CHECK_THROWS_AS(read_matrix_csv(text), InvalidArgument);
}

TEST_CASE("posterior JSON holds level-ordered pairs and round-trips") {
  const AtomEmbedding emb(4);
  auto post = PolyaTreePosterior::prior(build_params(1.0, 3), emb);
  post = posterior_update(post, std::vector<std::size_t>{0, 1, 1, 3}, emb);
  const json j = post;
  CHECK(j["levels"].dump() == "[[[3,1]],[[1,2],[0,1]]]");
  CHECK(j.get<PolyaTreePosterior>() == post);
}

TEST_CASE("growth CSV layout") {
  GrowthCurve c;
  c.J = 2;
  c.points.push_back({10, 2.0, 0.0, 3, 0.0, {2, 2, 2}});
  std::ostringstream out;
  write_growth_csv(out, c);
  CHECK(out.str() == "n,mean_f0,var_f0,reps,std_error\n10,2,0,3,0\n");
}

}
