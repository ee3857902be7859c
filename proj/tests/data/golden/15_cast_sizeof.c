void init(size_t n) {
    int *buf = (int *)malloc(n * sizeof(int));
    buf[0] = sizeof(*buf);
}
