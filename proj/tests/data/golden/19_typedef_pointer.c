typedef struct item item_t;
void visit(item_t *it, size_t *count) {
    *count = *count + 1;
}
