#include "fpoly/fpoly.h"

#include "fpoly/covolume.hpp"
#include "fpoly/errors.hpp"
#include "fpoly/service.hpp"
#include "fpoly/solver.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct fpoly_group {
  std::shared_ptr<const fpoly::FuchsianGroup> group;
};

struct fpoly_family {
  fpoly::NormalFamily family;
};

struct fpoly_polyhedron {
  fpoly::FuchsianPolyhedron poly;
};

namespace {

thread_local std::string last_error;

template <class F>
fpoly_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return FPOLY_OK;
  } catch (const fpoly::ValidationError& e) {
    last_error = e.what();
    return FPOLY_ERR_VALIDATION;
  } catch (const fpoly::NumericError& e) {
    last_error = e.what();
    return FPOLY_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FPOLY_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FPOLY_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw fpoly::ValidationError(std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fpoly::SupportVector support_from(const double* v, std::size_t n) { return {std::vector<double>(v, v + n)}; }

}  // namespace

extern "C" {

const char* fpoly_version(void) { return fpoly::kToolVersion; }

const char* fpoly_last_error(void) { return last_error.c_str(); }

void fpoly_string_free(char* s) { std::free(s); }

fpoly_status fpoly_group_create(const char* spec, fpoly_group** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = nullptr;
    std::string text(spec);
    const auto first = text.find_first_not_of(" \t\r\n");
    const fpoly::Json j = first != std::string::npos && text[first] == '{' ? fpoly::parse_json_text(text, "group spec")
                                                                            : fpoly::Json(text);
    *out = new fpoly_group{fpoly::parse_group(j)};
  });
}

void fpoly_group_free(fpoly_group* g) { delete g; }

int fpoly_group_dim(const fpoly_group* g) { return g ? g->group->dim() : -1; }

size_t fpoly_group_generator_count(const fpoly_group* g) { return g ? g->group->generators().size() : 0; }

fpoly_status fpoly_group_generator(const fpoly_group* g, size_t index, double* matrix) {
  return guarded([&] {
    require(g, "group");
    require(matrix, "matrix");
    if (index >= g->group->generators().size()) throw fpoly::ValidationError("generator index out of range");
    const auto& m = g->group->generators()[index].matrix;
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) matrix[r * m.cols() + c] = m(r, c);
  });
}

fpoly_status fpoly_group_translation_length(const fpoly_group* g, size_t index, double* length) {
  return guarded([&] {
    require(g, "group");
    require(length, "length");
    if (index >= g->group->generators().size()) throw fpoly::ValidationError("generator index out of range");
    *length = fpoly::translation_length(g->group->generators()[index].matrix);
  });
}

fpoly_status fpoly_group_quotient_volume(const fpoly_group* g, double* volume) {
  return guarded([&] {
    require(g, "group");
    require(volume, "volume");
    *volume = g->group->quotient_volume();
  });
}

fpoly_status fpoly_family_create(const fpoly_group* g, const double* normals, size_t count, fpoly_family** out) {
  return guarded([&] {
    require(g, "group");
    require(normals, "normals");
    require(out, "out");
    *out = nullptr;
    const auto k = static_cast<std::size_t>(g->group->dim() + 1);
    std::vector<fpoly::LorentzVector> reps;
    for (std::size_t i = 0; i < count; ++i) reps.emplace_back(std::span<const double>(normals + i * k, k));
    *out = new fpoly_family{fpoly::NormalFamily(g->group, std::move(reps))};
  });
}

void fpoly_family_free(fpoly_family* f) { delete f; }

size_t fpoly_family_size(const fpoly_family* f) { return f ? f->family.size() : 0; }

fpoly_status fpoly_build(const fpoly_family* f, const double* support, size_t count, fpoly_polyhedron** out) {
  return guarded([&] {
    require(f, "family");
    require(support, "support");
    require(out, "out");
    *out = nullptr;
    const auto h = support_from(support, count);
    h.validate(f->family.size());
    *out = new fpoly_polyhedron{fpoly::build(f->family, h)};
  });
}

void fpoly_polyhedron_free(fpoly_polyhedron* p) { delete p; }

size_t fpoly_polyhedron_size(const fpoly_polyhedron* p) { return p ? p->poly.facets().size() : 0; }

fpoly_status fpoly_covol(const fpoly_polyhedron* p, double* covol, double* areas) {
  return guarded([&] {
    require(p, "polyhedron");
    require(covol, "covol");
    const auto r = fpoly::covol(p->poly);
    *covol = r.covol;
    if (areas) std::copy(r.areas.begin(), r.areas.end(), areas);
  });
}

fpoly_status fpoly_minkowski_area(const fpoly_polyhedron* p, double* area) {
  return guarded([&] {
    require(p, "polyhedron");
    require(area, "area");
    *area = fpoly::minkowski_area(p->poly);
  });
}

fpoly_status fpoly_area_jacobian(const fpoly_polyhedron* p, double* matrix) {
  return guarded([&] {
    require(p, "polyhedron");
    require(matrix, "matrix");
    const auto j = fpoly::area_jacobian(p->poly).matrix;
    for (Eigen::Index r = 0; r < j.rows(); ++r)
      for (Eigen::Index c = 0; c < j.cols(); ++c) matrix[r * j.cols() + c] = j(r, c);
  });
}

fpoly_status fpoly_is_simple(const fpoly_polyhedron* p, int* simple) {
  return guarded([&] {
    require(p, "polyhedron");
    require(simple, "simple");
    *simple = fpoly::is_simple(p->poly) ? 1 : 0;
  });
}

fpoly_status fpoly_support_value(const fpoly_polyhedron* p, const double* eta, double* value) {
  return guarded([&] {
    require(p, "polyhedron");
    require(eta, "eta");
    require(value, "value");
    const auto k = static_cast<std::size_t>(p->poly.dim() + 1);
    *value = fpoly::support_value(p->poly, fpoly::LorentzVector(std::span<const double>(eta, k)));
  });
}

fpoly_status fpoly_export_mesh(const fpoly_polyhedron* p, int word_length, int format, char** out) {
  return guarded([&] {
    require(p, "polyhedron");
    require(out, "out");
    *out = nullptr;
    if (format != 0 && format != 1) throw fpoly::ValidationError("format must be 0 (OBJ) or 1 (JSON)");
    *out = copy_string(
        fpoly::export_mesh(p->poly, word_length, format == 0 ? fpoly::MeshFormat::Obj : fpoly::MeshFormat::Json));
  });
}

fpoly_status fpoly_polyhedron_json(const fpoly_polyhedron* p, char** out) {
  return guarded([&] {
    require(p, "polyhedron");
    require(out, "out");
    *out = nullptr;
    *out = copy_string(fpoly::dump_json(fpoly::polyhedron_json(p->poly)) + "\n");
  });
}

fpoly_status fpoly_solve(const fpoly_family* f, const double* areas, size_t count, double tol, int max_iter,
                         double* h, int* iterations) {
  return guarded([&] {
    require(f, "family");
    require(areas, "areas");
    require(h, "h");
    fpoly::SolverConfig cfg;
    if (tol > 0.0) cfg.tol = tol;
    if (max_iter > 0) cfg.max_iter = max_iter;
    auto publish = [&](const fpoly::SolverReport& r) {
      std::copy(r.solution.values.begin(), r.solution.values.end(), h);
      if (iterations) *iterations = r.iterations;
    };
    try {
      publish(fpoly::solve_minkowski(f->family, std::vector<double>(areas, areas + count), cfg));
    } catch (const fpoly::SolverError& e) {
      publish(e.report());
      throw;
    }
  });
}

fpoly_status fpoly_mixed_covol(const fpoly_family* f, const double* supports, size_t count, double* value,
                               double* polarization) {
  return guarded([&] {
    require(f, "family");
    require(supports, "supports");
    require(value, "value");
    const auto m = static_cast<std::size_t>(f->family.dim() + 1);
    std::vector<fpoly::SupportVector> args;
    for (std::size_t k = 0; k < m; ++k) {
      args.push_back(support_from(supports + k * count, count));
      args.back().validate(f->family.size());
    }
    const fpoly::FanClass cls(fpoly::build(f->family, args[0]));
    const auto r = fpoly::mixed_covol(cls, args);
    *value = r.value;
    if (polarization) *polarization = r.polarization_value;
  });
}

fpoly_status fpoly_run(const char* command, const char* input, const char* input_name, const char* options_json,
                       char** out) {
  if (out) *out = nullptr;
  fpoly::CommandResult res;
  const fpoly_status st = guarded([&] {
    require(command, "command");
    require(out, "out");
    std::optional<fpoly::Json> doc;
    if (input) doc = fpoly::parse_json_text(input, input_name ? input_name : "<input>");
    const fpoly::Json options =
        options_json ? fpoly::parse_json_text(options_json, "<options>") : fpoly::Json::object();
    res = fpoly::run_command(command, doc, options);
  });
  if (st != FPOLY_OK) return st;
  try {
    if (!res.output.empty()) *out = copy_string(res.output);
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FPOLY_ERR_INTERNAL;
  }
  last_error = res.error;
  return static_cast<fpoly_status>(res.status);
}

}  // extern "C"
