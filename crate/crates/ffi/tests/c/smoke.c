#include <stdio.h>
#include <string.h>

#include "evstruct.h"

static const char *TWO_CELL =
    "es two\n"
    "events a1 a2 b1 b2\n"
    "conflict a1 a2\n"
    "conflict b1 b2\n";

int main(void) {
    EvsDocument *doc = NULL;
    if (evs_document_parse(TWO_CELL, &doc) != EVS_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", evs_last_error());
        return 1;
    }
    double p = 0.0;
    if (evs_likelihood(doc, NULL, "a1,b2", false, &p) != EVS_STATUS_OK || p != 0.25) {
        fprintf(stderr, "likelihood %f\n", p);
        return 1;
    }
    if (evs_likelihood(doc, NULL, "a1,a2", false, &p) != EVS_STATUS_NOT_A_CONFIGURATION) {
        return 1;
    }
    char *json = NULL;
    bool holds = false;
    if (evs_check_json(doc, &json, &holds) != EVS_STATUS_OK || !holds || strstr(json, "\"kind\":\"es\"") == NULL) {
        return 1;
    }
    evs_string_free(json);
    evs_document_free(doc);
    printf("ok %s\n", evs_version());
    return 0;
}
