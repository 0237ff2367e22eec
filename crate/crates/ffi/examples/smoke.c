#include <stdio.h>
#include "sshcav.h"

int main(void) {
    SshcavModel *m = NULL;
    if (sshcav_model_new(1.0, 1.5, 1.0, 0.5, 0.05, 1e-3, 4096, &m) != SSHCAV_STATUS_OK) {
        char msg[256];
        sshcav_last_error_message(msg, sizeof msg);
        fprintf(stderr, "error: %s\n", msg);
        return 1;
    }
    SshcavKerr k;
    SshcavStatus s = sshcav_model_kerr(m, 5, 1e-12, 100, &k);
    printf("sshcav %s: status %d, U = %.6e %+.6ei\n", sshcav_version(), (int)s, k.u_re, k.u_im);
    sshcav_model_free(m);
    return s == SSHCAV_STATUS_OK ? 0 : 1;
}
