#include <stdio.h>
#include <string.h>

#include "hfol/hfol.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s failed (%s)\n", __FILE__, __LINE__, \
              #cond, hfol_last_error());                          \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kGroupoid =
    "{\"format\": \"hfol-groupoid-structure/1\","
    " \"signature\": {\"sorts\": [\"A\"]},"
    " \"carriers\": {\"A\": {\"delooping\": {\"cyclic\": 2}}}}";

static const char* kSet =
    "{\"format\": \"hfol-set-structure/1\","
    " \"signature\": {\"sorts\": [\"A\"], \"functions\": ["
    "   {\"name\": \"s\", \"arity\": [\"A\"], \"codomain\": \"A\"}]},"
    " \"carriers\": {\"A\": [\"a\", \"b\"]},"
    " \"functions\": {\"s\": [\"b\", \"a\"]}}";

int main(void) {
  hfol_options* o = NULL;
  hfol_structure* g = NULL;
  hfol_structure* s = NULL;
  hfol_signature* sig = NULL;
  char* report = NULL;

  EXPECT(hfol_options_new(&o) == HFOL_OK);
  EXPECT(hfol_options_set_backend(o, "sideways") == HFOL_ERR_USAGE);
  EXPECT(strstr(hfol_last_error(), "sideways") != NULL);
  EXPECT(hfol_options_set_max_fiber(o, 0) == HFOL_ERR_USAGE);

  EXPECT(hfol_structure_parse(kGroupoid, &g) == HFOL_OK);
  EXPECT(strcmp(hfol_structure_backend(g), "groupoid") == 0);
  EXPECT(hfol_eval(g, "exists x. forall y. x = y", "", o, &report) == HFOL_OK);
  EXPECT(report && strstr(report, "\"verdict\": \"uninhabited\"") != NULL);
  hfol_string_free(report);
  report = NULL;

  EXPECT(hfol_structure_parse(kSet, &s) == HFOL_OK);
  EXPECT(strcmp(hfol_structure_backend(s), "set") == 0);
  EXPECT(hfol_eval(s, "s(s(x)) = x", "x:A", o, &report) == HFOL_OK);
  EXPECT(report && strstr(report, "\"inhabited_points\": 2") != NULL);
  hfol_string_free(report);
  report = NULL;

  EXPECT(hfol_signature_of(s, &sig) == HFOL_OK);
  EXPECT(hfol_check(sig, "forall x. s(x) = y", "", &report) == HFOL_ERR_PARSE);
  EXPECT(report == NULL);
  EXPECT(hfol_check(sig, "forall x. s(x) = x", "", &report) == HFOL_OK);
  hfol_string_free(report);
  report = NULL;

  EXPECT(hfol_structure_parse("{\"format\": \"nope\"}", &g) == HFOL_ERR_PARSE);
  EXPECT(hfol_structure_load("/nonexistent/structure.json", &g) == HFOL_ERR_IO);
  EXPECT(hfol_eval(NULL, "x = x", "", o, &report) == HFOL_ERR_USAGE);

  EXPECT(hfol_examples(o, &report) == HFOL_OK);
  char* text = NULL;
  EXPECT(hfol_report_to_text(report, &text) == HFOL_OK);
  EXPECT(text && strstr(text, "passed") != NULL);
  hfol_string_free(text);
  hfol_string_free(report);

  hfol_signature_free(sig);
  hfol_structure_free(s);
  hfol_structure_free(g);
  hfol_options_free(o);
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
