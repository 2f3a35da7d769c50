#include <stdio.h>
#include <string.h>
#include "toric_okounkov.h"

int main(void) {
    OkbFan *fan = NULL;
    if (okb_fan_from_json("\"F1\"", &fan) != OKB_STATUS_OK) return 10;
    if (okb_fan_ray_count(fan) != 4) return 11;
    const char *coeffs[] = {"3", "2", "0", "0"};
    OkbDivisor *d = NULL;
    if (okb_divisor_new(fan, coeffs, 4, &d) != OKB_STATUS_OK) return 12;
    char *vol = NULL;
    if (okb_divisor_volume(d, &vol) != OKB_STATUS_OK || strcmp(vol, "4") != 0) return 13;
    okb_string_free(vol);
    int64_t e[] = {0, 1};
    char *s = NULL, *t = NULL;
    if (okb_divisor_s_t(d, e, 2, &s, &t) != OKB_STATUS_OK) return 14;
    if (strcmp(s, "7/6") != 0 || strcmp(t, "2") != 0) return 15;
    okb_string_free(s);
    okb_string_free(t);
    char *report = NULL;
    OkbStatus st = okb_run_json("curve-delta", "{\"b\": \"1/2\", \"terms\": [{\"weight\": 1, \"degree\": 1}]}", 128, &report);
    if (st != OKB_STATUS_OK || strstr(report, "\"status\": \"ok\"") == NULL) return 16;
    okb_string_free(report);
    OkbFan *bad = NULL;
    if (okb_fan_from_json("\"nope\"", &bad) != OKB_STATUS_VALIDATION || okb_last_error() == NULL) return 17;
    okb_divisor_free(d);
    okb_fan_free(fan);
    puts("c smoke ok");
    return 0;
}
