int run(void) {
    int total = compute(3);
    log_message(total);
    return total;
}
