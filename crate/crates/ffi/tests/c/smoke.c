#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qec_esd.h"

static int failures = 0;

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            failures++;                                              \
        }                                                            \
    } while (0)

int main(void) {
    char msg[256];
    const double pi = 3.14159265358979323846;

    QecScenario *sc = NULL;
    CHECK(qec_scenario_new(QEC_CHANNEL_AD, QEC_CODE_KIND_NONE, 0.5, 1.0, &sc) == QEC_STATUS_OK);

    double c = -1.0, f = -1.0;
    CHECK(qec_pair_metrics(sc, QEC_FAMILY_PHI, pi / 4, &c, &f) == QEC_STATUS_OK);
    CHECK(fabs(c - 0.25) < 1e-12);

    double rho[32];
    CHECK(qec_evolve_pair(sc, QEC_FAMILY_PHI, pi / 4, rho) == QEC_STATUS_OK);
    double c2 = -1.0;
    CHECK(qec_concurrence(rho, &c2) == QEC_STATUS_OK);
    CHECK(fabs(c2 - c) < 1e-12);

    double onset = 0.0;
    bool found = false;
    CHECK(qec_onset_numeric(sc, QEC_FAMILY_PHI, pi / 8, &onset, &found) == QEC_STATUS_OK);
    CHECK(found && fabs(onset - tan(pi / 8)) < 1e-5);
    CHECK(qec_onset_analytic(QEC_FAMILY_PSI, QEC_CHANNEL_AD, pi / 8, 1.0, &onset, &found) == QEC_STATUS_OK);
    CHECK(!found);
    qec_scenario_free(sc);

    CHECK(qec_scenario_new(QEC_CHANNEL_AD, QEC_CODE_KIND_NONE, 1.5, 1.0, &sc) == QEC_STATUS_INVALID_ARGUMENT);
    CHECK(qec_last_error_message(msg, sizeof msg) > 0 && strlen(msg) > 0);
    CHECK(qec_scenario_new(7, QEC_CODE_KIND_NONE, 0.5, 1.0, &sc) == QEC_STATUS_INVALID_ARGUMENT);
    CHECK(qec_pair_metrics(NULL, QEC_FAMILY_PHI, 0.3, &c, NULL) == QEC_STATUS_NULL_POINTER);

    QecSweep *sw = NULL;
    CHECK(qec_sweep_run(QEC_CHANNEL_PD, QEC_FAMILY_PSI, pi / 12, 1.0, QEC_CODE_KIND_PHASE3, 11, &sw) == QEC_STATUS_OK);
    CHECK(qec_sweep_len(sw) == 11);
    QecSweepRecord rec;
    CHECK(qec_sweep_get(sw, 10, &rec) == QEC_STATUS_OK);
    CHECK(rec.p == 1.0);
    CHECK(qec_sweep_get(sw, 11, &rec) == QEC_STATUS_INVALID_ARGUMENT);
    qec_sweep_free(sw);

    printf("qec-esd %s: %d failure(s)\n", qec_version(), failures);
    return failures != 0;
}
