#include <string.h>
#define COPY(d, s) strcpy(d, s)
/* strcpy(a, b); p->x; a[1]; */
// gets(buf); x * y
const char *msg = "strcpy(a, b) * p->q";
char c = '*';
