#include <math.h>
#include <stdio.h>
#include <string.h>

#include "finsler.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, \
              #cond);                                                 \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  FinslerFixture *fx = NULL;
  CHECK(finsler_fixture_new("euclidean", 3, NULL, &fx) == FINSLER_STATUS_OK);
  CHECK(finsler_fixture_dim(fx) == 3);

  double x[3] = {0.1, -0.2, 0.3};
  double y[3] = {3.0, 4.0, 0.0};
  double l = 0.0;
  CHECK(finsler_eval(fx, x, y, 3, &l) == FINSLER_STATUS_OK);
  CHECK(fabs(l - 5.0) < 1e-12);

  double g[9];
  CHECK(finsler_fundamental_tensor(fx, x, y, 3, g) == FINSLER_STATUS_OK);
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++) CHECK(fabs(g[3 * i + j] - (i == j)) < 1e-12);

  CHECK(finsler_eval(fx, x, y, 2, &l) == FINSLER_STATUS_INVALID_ARGUMENT);
  CHECK(finsler_last_error_message() != NULL);
  finsler_fixture_free(fx);

  fx = NULL;
  CHECK(finsler_fixture_new("nosuch", 3, NULL, &fx) ==
        FINSLER_STATUS_UNKNOWN_FIXTURE);
  CHECK(fx == NULL);
  CHECK(strstr(finsler_last_error_message(), "nosuch") != NULL);

  CHECK(finsler_fixture_new("riemann-const-k", 2, "k=-0.5", &fx) ==
        FINSLER_STATUS_OK);
  double x2[2] = {0.2, 0.1};
  double y2[2] = {1.0, 0.5};
  double r = 0.0;
  bool flat = true;
  CHECK(finsler_scalar_curvature(fx, x2, y2, 2, &r, NULL, &flat) ==
        FINSLER_STATUS_OK);
  CHECK(!flat);
  CHECK(fabs(r + 0.5) < 1e-9);

  FinslerRunConfig cfg = finsler_run_config_default();
  cfg.samples = 3;
  char *json = NULL;
  CHECK(finsler_classify_json(fx, &cfg, &json) == FINSLER_STATUS_OK);
  CHECK(strstr(json, "\"riemannian\"") != NULL);
  finsler_string_free(json);
  CHECK(finsler_numata_json(fx, &cfg, &json) == FINSLER_STATUS_INVALID_ARGUMENT);
  CHECK(json == NULL);
  finsler_fixture_free(fx);

  printf("ok\n");
  return 0;
}
