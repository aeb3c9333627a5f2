#include "doctest.h"

#include "fpoly/fpoly.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

namespace {

struct Octagon {
  fpoly_group* g = nullptr;
  fpoly_family* f = nullptr;
  Octagon() {
    REQUIRE(fpoly_group_create("octagon", &g) == FPOLY_OK);
    const double o[3] = {0, 0, 1};
    REQUIRE(fpoly_family_create(g, o, 1, &f) == FPOLY_OK);
  }
  ~Octagon() {
    fpoly_family_free(f);
    fpoly_group_free(g);
  }
};

std::vector<double> three_normals() {
  std::vector<double> v{0, 0, 1};
  for (auto [d, a] : {std::pair{1.0, 0.3}, std::pair{1.4, 2.2}}) {
    v.push_back(std::sinh(d) * std::cos(a));
    v.push_back(std::sinh(d) * std::sin(a));
    v.push_back(std::cosh(d));
  }
  return v;
}

}  // namespace

TEST_CASE("groups through the C API") {
  fpoly_group* g = nullptr;
  REQUIRE(fpoly_group_create("octagon", &g) == FPOLY_OK);
  CHECK(fpoly_group_dim(g) == 2);
  CHECK(fpoly_group_generator_count(g) == 8);
  double len = 0.0;
  REQUIRE(fpoly_group_translation_length(g, 3, &len) == FPOLY_OK);
  CHECK(len == doctest::Approx(std::acosh(5.0 + 4.0 * std::numbers::sqrt2)).epsilon(1e-12));
  double m[9];
  CHECK(fpoly_group_generator(g, 0, m) == FPOLY_OK);
  CHECK(m[8] == doctest::Approx(5.0 + 4.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(fpoly_group_generator(g, 99, m) == FPOLY_ERR_VALIDATION);
  CHECK(std::string(fpoly_last_error()).find("out of range") != std::string::npos);
  double vol = 0.0;
  CHECK(fpoly_group_quotient_volume(g, &vol) == FPOLY_OK);
  CHECK(vol == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  fpoly_group_free(g);

  fpoly_group* custom = nullptr;
  const char* spec = R"({"dim": 1, "generators": [[[1.5430806348152437, 1.1752011936438014], [1.1752011936438014, 1.5430806348152437]]], "label": "b1"})";
  REQUIRE(fpoly_group_create(spec, &custom) == FPOLY_OK);
  CHECK(fpoly_group_translation_length(custom, 0, &len) == FPOLY_OK);
  CHECK(len == doctest::Approx(1.0).epsilon(1e-12));
  fpoly_group_free(custom);

  fpoly_group* bad = nullptr;
  CHECK(fpoly_group_create("dodecagon", &bad) == FPOLY_ERR_VALIDATION);
  CHECK(bad == nullptr);
  CHECK(fpoly_group_create(R"({"dim": 1, "generators": [[1, 2, 3, 4]]})", &bad) == FPOLY_ERR_VALIDATION);
  CHECK(fpoly_group_create(nullptr, &bad) == FPOLY_ERR_VALIDATION);
}

TEST_CASE("build, covolume and Jacobian") {
  Octagon oc;
  fpoly_polyhedron* p = nullptr;
  const double h = 1.0;
  REQUIRE(fpoly_build(oc.f, &h, 1, &p) == FPOLY_OK);
  CHECK(fpoly_polyhedron_size(p) == 1);
  double covol = 0.0, area = 0.0, s = 0.0, jac = 0.0;
  REQUIRE(fpoly_covol(p, &covol, &area) == FPOLY_OK);
  CHECK(area == doctest::Approx(16.0 * (3.0 - 2.0 * std::numbers::sqrt2)).epsilon(1e-12));
  CHECK(covol == doctest::Approx(area / 3.0).epsilon(1e-12));
  CHECK(fpoly_minkowski_area(p, &s) == FPOLY_OK);
  CHECK(s == area);
  CHECK(fpoly_area_jacobian(p, &jac) == FPOLY_OK);
  CHECK(jac == doctest::Approx(2.0 * area).epsilon(1e-12));
  int simple = -1;
  CHECK(fpoly_is_simple(p, &simple) == FPOLY_OK);
  CHECK(simple == 0);
  const double o[3] = {0, 0, 1};
  double hv = 0.0;
  CHECK(fpoly_support_value(p, o, &hv) == FPOLY_OK);
  CHECK(hv == doctest::Approx(-1.0).epsilon(1e-10));

  char* obj = nullptr;
  REQUIRE(fpoly_export_mesh(p, 1, 0, &obj) == FPOLY_OK);
  std::string text(obj);
  fpoly_string_free(obj);
  std::size_t faces = 0;
  for (std::size_t k = 0; (k = text.find("\nf ", k)) != std::string::npos; ++k) ++faces;
  CHECK(faces == 9);
  CHECK(fpoly_export_mesh(p, 1, 7, &obj) == FPOLY_ERR_VALIDATION);
  CHECK(obj == nullptr);
  char* js = nullptr;
  REQUIRE(fpoly_polyhedron_json(p, &js) == FPOLY_OK);
  CHECK(std::string(js).find("\"fan_signature\"") != std::string::npos);
  fpoly_string_free(js);
  fpoly_polyhedron_free(p);

  const double neg = -1.0;
  CHECK(fpoly_build(oc.f, &neg, 1, &p) == FPOLY_ERR_VALIDATION);
  CHECK(std::string(fpoly_last_error()).find("support number 0") != std::string::npos);
  CHECK(p == nullptr);
}

TEST_CASE("solve and mixed covolume") {
  fpoly_group* g = nullptr;
  REQUIRE(fpoly_group_create("octagon", &g) == FPOLY_OK);
  const auto normals = three_normals();
  fpoly_family* f = nullptr;
  REQUIRE(fpoly_family_create(g, normals.data(), 3, &f) == FPOLY_OK);
  CHECK(fpoly_family_size(f) == 3);

  const double hstar[3] = {1.0, 1.02, 0.98};
  fpoly_polyhedron* p = nullptr;
  REQUIRE(fpoly_build(f, hstar, 3, &p) == FPOLY_OK);
  double covol = 0.0, areas[3];
  REQUIRE(fpoly_covol(p, &covol, areas) == FPOLY_OK);
  double h[3];
  int iters = 0;
  REQUIRE(fpoly_solve(f, areas, 3, 0.0, 0, h, &iters) == FPOLY_OK);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(h[i] - hstar[i]) <= 1e-8);
  CHECK(iters > 0);
  CHECK(fpoly_solve(f, areas, 3, 0.0, 1, h, &iters) == FPOLY_ERR_NUMERIC);
  CHECK(iters == 1);

  double args[9];
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) args[k * 3 + i] = hstar[i];
  double value = 0.0, polar = 0.0;
  REQUIRE(fpoly_mixed_covol(f, args, 3, &value, &polar) == FPOLY_OK);
  CHECK(value == doctest::Approx(covol).epsilon(1e-12));
  CHECK(std::abs(value - polar) <= 1e-9);

  fpoly_polyhedron_free(p);
  fpoly_family_free(f);
  fpoly_group_free(g);
}

TEST_CASE("command dispatch") {
  char* out = nullptr;
  REQUIRE(fpoly_run("paper-repro", nullptr, nullptr, nullptr, &out) == FPOLY_OK);
  CHECK(std::string(out).find("S(K)") != std::string::npos);
  fpoly_string_free(out);

  const char* seg = R"({"group": "boost:1", "normals": [[0, 1]], "support": [2.0]})";
  REQUIRE(fpoly_run("covol", seg, "seg.json", "{}", &out) == FPOLY_OK);
  CHECK(std::string(out).find("\"covol\": 1.848") != std::string::npos);
  fpoly_string_free(out);

  CHECK(fpoly_run("covol", "{\"group\": ", "broken.json", "{}", &out) == FPOLY_ERR_VALIDATION);
  CHECK(std::string(fpoly_last_error()).rfind("broken.json:1:", 0) == 0);
  CHECK(fpoly_run("nope", nullptr, nullptr, "{}", &out) == FPOLY_ERR_VALIDATION);
  CHECK(fpoly_run(nullptr, nullptr, nullptr, "{}", &out) == FPOLY_ERR_VALIDATION);
  CHECK(std::strcmp(fpoly_version(), "0.1.0") == 0);
}
