#include <stdio.h>
#include "bandspec.h"

int main(void) {
    BandspecChannel *ch = NULL;
    if (bandspec_channel_wyner(256, 1, 0.5, 0.5, "rayleigh", 10.0, &ch) != BANDSPEC_STATUS_OK) {
        fprintf(stderr, "%s\n", bandspec_last_error_message());
        return 1;
    }
    BandspecSpectrum *s = NULL;
    double c = 0.0;
    bandspec_spectrum_sample(ch, 42, 0, &s);
    bandspec_spectrum_shannon(s, 10.0, &c);
    printf("N = %zu, Shannon transform at 10: %f\n", bandspec_spectrum_len(s), c);
    bandspec_spectrum_free(s);
    bandspec_channel_free(ch);
    return 0;
}
