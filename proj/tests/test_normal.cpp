#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "vfdr/normal.hpp"

namespace normal = vfdr::normal;

// Reference values computed with mpmath at 50 digits.
TEST_CASE("quantile matches high-precision references") {
  struct Ref {
    double p, z;
  };
  const Ref refs[] = {
      {0.975, 1.9599639845400542355},   {1e-12, -7.0344838253011319298}, {1e-9, -5.9978070150076868716},
      {1e-6, -4.7534243088228989482},   {0.001, -3.0902323061678135415}, {0.02425, -1.9729610513118848503},
      {0.1, -1.281551565544600467},     {0.3, -0.52440051270804078404},  {0.5, 0.0},
  };
  for (const auto& r : refs) {
    CHECK(normal::quantile(r.p) == doctest::Approx(r.z).epsilon(1e-14));
    const double upper = 1.0 - r.p;  // 1 - upper is exact, unlike r.p
    CHECK(normal::quantile(upper) == doctest::Approx(-normal::quantile(1.0 - upper)).epsilon(1e-12));
  }
}

TEST_CASE("quantile boundaries") {
  CHECK(normal::quantile(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(normal::quantile(1.0) == std::numeric_limits<double>::infinity());
  CHECK(std::isnan(normal::quantile(-0.1)));
  CHECK(std::isnan(normal::quantile(1.5)));
}

TEST_CASE("cdf and upper tail") {
  CHECK(normal::cdf(0.0) == 0.5);
  CHECK(normal::cdf(-1.5) == doctest::Approx(0.066807201268858066004).epsilon(1e-14));
  CHECK(2.0 * normal::upper_tail(1.959964) == doctest::Approx(0.049999998192884808605).epsilon(1e-12));
  CHECK(normal::pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
}

TEST_CASE("cdf inverts quantile to 1e-10 absolute") {
  for (double p = 1e-12; p < 1.0; p = p < 1e-3 ? p * 3.0 : p + 1e-3) {
    CHECK(std::abs(normal::cdf(normal::quantile(p)) - p) < 1e-10);
  }
}

TEST_CASE("log_cdf in the far left tail") {
  CHECK(normal::log_cdf(-38.0) == doctest::Approx(-726.5572160188201301).epsilon(1e-13));
  CHECK(normal::log_cdf(-30.0) == doctest::Approx(-454.32124395634319711).epsilon(1e-13));
  CHECK(normal::log_cdf(-10.0) == doctest::Approx(-53.231285150512470578).epsilon(1e-13));
  CHECK(normal::log_cdf(-5.0) == doctest::Approx(-15.064998393988725736).epsilon(1e-13));
  CHECK(normal::log_cdf(3.0) == doctest::Approx(std::log(normal::cdf(3.0))).epsilon(1e-13));
  CHECK(std::isfinite(normal::log_cdf(-1e3)));
}
