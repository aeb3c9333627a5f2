#ifndef FPOLY_FPOLY_H
#define FPOLY_FPOLY_H

/* C interface of the fpoly shared library. Objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every call that
 * can fail returns an fpoly_status; the message of the last failure on the
 * calling thread is available from fpoly_last_error(). */

#include <stddef.h>

#if defined(_WIN32)
#define FPOLY_API __declspec(dllexport)
#else
#define FPOLY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpoly_status {
  FPOLY_OK = 0,
  FPOLY_ERR_VALIDATION = 1,
  FPOLY_ERR_NUMERIC = 2,
  FPOLY_ERR_IO = 3,
  FPOLY_ERR_INTERNAL = 4
} fpoly_status;

typedef struct fpoly_group fpoly_group;
typedef struct fpoly_family fpoly_family;
typedef struct fpoly_polyhedron fpoly_polyhedron;

FPOLY_API const char* fpoly_version(void);
FPOLY_API const char* fpoly_last_error(void);
/* Strings returned through char** out-parameters are released with this. */
FPOLY_API void fpoly_string_free(char* s);

/* Groups: "octagon", "boost:<length>" or a JSON group spec. */
FPOLY_API fpoly_status fpoly_group_create(const char* spec, fpoly_group** out);
FPOLY_API void fpoly_group_free(fpoly_group* g);
FPOLY_API int fpoly_group_dim(const fpoly_group* g);
FPOLY_API size_t fpoly_group_generator_count(const fpoly_group* g);
/* Row-major (dim+1)^2 entries. */
FPOLY_API fpoly_status fpoly_group_generator(const fpoly_group* g, size_t index, double* matrix);
FPOLY_API fpoly_status fpoly_group_translation_length(const fpoly_group* g, size_t index, double* length);
FPOLY_API fpoly_status fpoly_group_quotient_volume(const fpoly_group* g, double* volume);

/* Families: count representatives of dim+1 coordinates each, packed. */
FPOLY_API fpoly_status fpoly_family_create(const fpoly_group* g, const double* normals, size_t count,
                                           fpoly_family** out);
FPOLY_API void fpoly_family_free(fpoly_family* f);
FPOLY_API size_t fpoly_family_size(const fpoly_family* f);

FPOLY_API fpoly_status fpoly_build(const fpoly_family* f, const double* support, size_t count,
                                   fpoly_polyhedron** out);
FPOLY_API void fpoly_polyhedron_free(fpoly_polyhedron* p);
FPOLY_API size_t fpoly_polyhedron_size(const fpoly_polyhedron* p);
/* areas may be NULL; otherwise it receives one entry per facet. */
FPOLY_API fpoly_status fpoly_covol(const fpoly_polyhedron* p, double* covol, double* areas);
FPOLY_API fpoly_status fpoly_minkowski_area(const fpoly_polyhedron* p, double* area);
/* Row-major n*n entries, (i,j) = dA_i/dh_j. */
FPOLY_API fpoly_status fpoly_area_jacobian(const fpoly_polyhedron* p, double* matrix);
FPOLY_API fpoly_status fpoly_is_simple(const fpoly_polyhedron* p, int* simple);
FPOLY_API fpoly_status fpoly_support_value(const fpoly_polyhedron* p, const double* eta, double* value);
/* format: 0 = OBJ, 1 = JSON. */
FPOLY_API fpoly_status fpoly_export_mesh(const fpoly_polyhedron* p, int word_length, int format, char** out);
FPOLY_API fpoly_status fpoly_polyhedron_json(const fpoly_polyhedron* p, char** out);

/* Newton solve for prescribed facet areas; tol <= 0 and max_iter <= 0 select the defaults.
 * On non-convergence the status is FPOLY_ERR_NUMERIC and h holds the last iterate. */
FPOLY_API fpoly_status fpoly_solve(const fpoly_family* f, const double* areas, size_t count, double tol,
                                   int max_iter, double* h, int* iterations);

/* Mixed covolume of dim+1 support vectors (packed, count entries each) of one simple class,
 * the class being that of the first vector. polarization may be NULL. */
FPOLY_API fpoly_status fpoly_mixed_covol(const fpoly_family* f, const double* supports, size_t count,
                                         double* value, double* polarization);

/* Runs a command of the tool on an optional JSON input (input_name labels parse errors)
 * and a JSON object of options. *out receives the output, or the failure report when one
 * exists (possibly NULL). */
FPOLY_API fpoly_status fpoly_run(const char* command, const char* input, const char* input_name,
                                 const char* options_json, char** out);

#ifdef __cplusplus
}
#endif

#endif
