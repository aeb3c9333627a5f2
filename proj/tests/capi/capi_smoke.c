/* Compiled as C: the header must be usable without a C++ compiler. */
#include "fpoly/fpoly.h"

#include <math.h>
#include <stdio.h>

int main(void) {
  fpoly_group* g = NULL;
  fpoly_family* f = NULL;
  fpoly_polyhedron* p = NULL;
  const double normal[2] = {0.0, 1.0};
  const double h = 2.0;
  double covol = 0.0;
  int rc = 1;

  if (fpoly_group_create("boost:1", &g) != FPOLY_OK) goto done;
  if (fpoly_family_create(g, normal, 1, &f) != FPOLY_OK) goto done;
  if (fpoly_build(f, &h, 1, &p) != FPOLY_OK) goto done;
  if (fpoly_covol(p, &covol, NULL) != FPOLY_OK) goto done;
  if (fabs(covol - 4.0 * tanh(0.5)) > 1e-12) {
    fprintf(stderr, "covol %.17g\n", covol);
    goto done;
  }
  rc = 0;
done:
  if (rc) fprintf(stderr, "capi_smoke: %s\n", fpoly_last_error());
  fpoly_polyhedron_free(p);
  fpoly_family_free(f);
  fpoly_group_free(g);
  return rc;
}
