#include <stdio.h>
#include "kgalilei.h"

int main(void) {
    KgSession *s = kg_session_new();
    char *nf = NULL;
    if (kg_eval(s, "[tau, a1]", 2, 4, &nf) != KG_STATUS_OK) {
        fprintf(stderr, "%s\n", kg_last_error(s));
        kg_session_free(s);
        return 1;
    }
    printf("%s\n", nf);
    kg_string_free(nf);

    size_t failed = 0;
    KgStatus st = kg_run_group(s, KG_GROUP_APPENDIX, &failed);
    char *json = kg_reports_render(s, KG_FORMAT_JSON);
    printf("%s", json);
    kg_string_free(json);
    kg_session_free(s);
    return st == KG_STATUS_OK ? 0 : 1;
}
