#include <stdio.h>
#include <string.h>

#include "hurwitz_codes.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    HcModulus *m = NULL;
    CHECK(hc_modulus_parse("5/2+3/2i+3/2j+3/2k", &m) == HC_STATUS_OK);

    uint64_t num = 0, den = 0;
    CHECK(hc_average_energy(m, &num, &den) == HC_STATUS_OK);
    CHECK(num == 24 && den == 13);

    HcResidueTable *t = NULL;
    size_t len = 0;
    CHECK(hc_residue_table_new(m, &t) == HC_STATUS_OK);
    CHECK(hc_residue_table_len(t, &len) == HC_STATUS_OK && len == 13);

    HcResidueEntry e;
    CHECK(hc_residue_table_entry(t, 6, &e) == HC_STATUS_OK);
    CHECK(e.z == 6 && e.branch == 2 && e.norm2 == 3);
    CHECK(hc_residue_table_entry(t, 13, &e) == HC_STATUS_OUT_OF_RANGE);

    HcCodeRate r;
    CHECK(hc_code_rate(73, 1, &r) == HC_STATUS_OK && r.n == 3 && r.rate_num == 1 && r.rate_den == 3);
    CHECK(hc_code_rate(71, 1, &r) == HC_STATUS_RATE_MODULUS);

    char msg[128];
    CHECK(hc_last_error(msg, sizeof msg) > 0 && strstr(msg, "71") != NULL);

    hc_residue_table_free(t);
    hc_modulus_free(m);
    printf("ok %s\n", hc_version());
    return 0;
}
