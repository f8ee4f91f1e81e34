/* Exercises the shared library through k3h.h from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "k3h.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  k3h_surface* s = NULL;
  k3h_point* p = NULL;
  k3h_point* q = NULL;
  k3h_engine* e = NULL;
  k3h_options opt;
  k3h_height h;
  char* json = NULL;
  uint64_t hash = 0;
  int on = 0;

  EXPECT(strlen(k3h_version()) > 0);
  EXPECT(strcmp(k3h_status_name(K3H_PARSE_ERROR), "ParseError") == 0);
  k3h_options_default(&opt);
  EXPECT(opt.tol == 1e-4 && opt.max_letters == 60);

  EXPECT(k3h_surface_default(&s) == K3H_OK);
  EXPECT(k3h_surface_hash(s, &hash) == K3H_OK);
  EXPECT(hash == 0x3c2f180694fbf419ULL);
  EXPECT(k3h_default_generic_count() == 10);

  EXPECT(k3h_point_default("generic", 0, &p) == K3H_OK);
  EXPECT(k3h_point_to_json(p, &json) == K3H_OK);
  EXPECT(strcmp(json, "{\"x\":[\"5\",\"3\"],\"y\":[\"5\",\"3\"],\"z\":[\"3\",\"1\"]}") == 0);
  k3h_string_free(json);
  EXPECT(k3h_surface_contains(s, p, &on) == K3H_OK && on == 1);
  EXPECT(k3h_point_default("generic", 99, &q) == K3H_INVALID_ARGUMENT);
  EXPECT(strlen(k3h_last_error()) > 0);

  /* Involutions are involutions. */
  EXPECT(k3h_involution(s, 1, p, &q) == K3H_OK);
  {
    k3h_point* back = NULL;
    char *a = NULL, *b = NULL;
    EXPECT(k3h_involution(s, 1, q, &back) == K3H_OK);
    k3h_point_to_json(back, &a);
    k3h_point_to_json(p, &b);
    EXPECT(a && b && strcmp(a, b) == 0);
    k3h_string_free(a);
    k3h_string_free(b);
    k3h_point_free(back);
  }
  k3h_point_free(q);
  q = NULL;

  /* Errors carry a status and a message naming the field. */
  EXPECT(k3h_point_from_json("{\"x\":[\"1\"]}", &q) == K3H_PARSE_ERROR);
  EXPECT(strstr(k3h_last_error(), "point.x") != NULL);
  EXPECT(k3h_point_from_json("{\"x\":[\"1\",\"1\"],\"y\":[\"1\",\"1\"],\"z\":[\"1\",\"1\"]}", &q) == K3H_OK);
  EXPECT(k3h_surface_contains(s, q, &on) == K3H_OK && on == 0);

  {
    const int w[] = {1, 2, 3};
    const int bad[] = {1, 4};
    EXPECT(k3h_classify_word(w, 3, &json) == K3H_OK);
    EXPECT(strstr(json, "hyperbolic") != NULL);
    k3h_string_free(json);
    EXPECT(k3h_orbit(s, q, w, 3, 200000, &json) == K3H_NOT_ON_SURFACE);
    EXPECT(k3h_orbit(s, p, bad, 2, 200000, &json) == K3H_INVALID_ARGUMENT);
  }

  EXPECT(k3h_engine_new(s, NULL, &e) == K3H_OK);
  {
    const int g[] = {1, 2};
    const int64_t E[] = {0, 0, 1};
    double v = 0;
    EXPECT(k3h_vcan(e, p, g, 2, 40, &opt, &h, NULL) == K3H_OK);
    EXPECT(fabs(h.value - 4.7514296886235536) < 1e-9);
    v = h.value;
    EXPECT(k3h_height_cusp(e, p, E, 3, 1.0, &opt, &h, NULL) == K3H_OK);
    EXPECT(fabs(h.value - v / 4) < 1e-9);
    EXPECT(k3h_height_angle(e, p, 1.0, &opt, &h, &json) == K3H_OK);
    EXPECT(fabs(h.value - 1.6207297745695284) < 1e-9);
    EXPECT(strstr(json, "\"value\"") != NULL);
    k3h_string_free(json);
  }

  {
    k3h_starset* ss = NULL;
    k3h_integral t;
    k3h_shape shape;
    char *c1 = NULL, *c2 = NULL;
    opt.tol = 1e-3;
    EXPECT(k3h_starset_new(e, p, 32, 0.0, 1, &opt, &ss) == K3H_OK);
    EXPECT(k3h_starset_total(ss, &t) == K3H_OK);
    EXPECT(t.value > 4 && t.value < 6);
    EXPECT(k3h_starset_shape(ss, &shape) == K3H_OK && shape.positive);
    EXPECT(k3h_starset_csv(ss, &c1) == K3H_OK);
    k3h_starset_free(ss);
    EXPECT(k3h_starset_new(e, p, 32, 0.0, 1, &opt, &ss) == K3H_OK);
    EXPECT(k3h_starset_csv(ss, &c2) == K3H_OK);
    EXPECT(c1 && c2 && strcmp(c1, c2) == 0);
    EXPECT(strncmp(c1, "theta,alpha0", 12) == 0);
    k3h_string_free(c1);
    k3h_string_free(c2);
    k3h_starset_free(ss);
    EXPECT(k3h_starset_new(e, p, 8, 0.0, 1, &opt, &ss) == K3H_INVALID_ARGUMENT);
  }

  {
    int passed = 0;
    EXPECT(k3h_verify("lattice", NULL, 1, &opt, &passed, &json) == K3H_OK && passed == 1);
    k3h_string_free(json);
    EXPECT(k3h_verify("lattice", "{\"rank\":3,\"gram\":[[0,3,2],[3,0,2],[2,2,0]]}", 1, &opt, &passed, &json) == K3H_OK);
    EXPECT(passed == 0);
    k3h_string_free(json);
    EXPECT(k3h_verify("nope", NULL, 1, &opt, &passed, &json) == K3H_INVALID_ARGUMENT);
  }

  /* NULL handles are rejected, not dereferenced. */
  EXPECT(k3h_surface_hash(NULL, &hash) == K3H_INVALID_ARGUMENT);
  k3h_surface_free(NULL);

  k3h_engine_free(e);
  k3h_point_free(q);
  k3h_point_free(p);
  k3h_surface_free(s);
  if (failures) {
    fprintf(stderr, "%d failures\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
