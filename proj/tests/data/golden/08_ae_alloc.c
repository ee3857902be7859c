void *grow(size_t count, size_t elem) {
    size_t bytes = count * elem;
    return malloc(bytes + 16);
}
